//! Output bookkeeping and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{commands, CliResult, Command, Failure, EXIT_FAILED_CHECK, EXIT_OK};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Command,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<OutputDigest>,
}

/// Files written by one run, in write order.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<OutputDigest>,
}

impl Outputs {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.written.retain(|d| d.file != name);
        self.written.push(OutputDigest {
            file: name.to_string(),
            sha256: hex_digest(contents.as_bytes()),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut text =
            serde_json::to_string_pretty(value).map_err(|e| Failure::check(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn write(command: &Command, outputs: &Outputs) -> CliResult<()> {
    let manifest = RunManifest {
        command: commands::name(command).to_string(),
        parameters: command.clone(),
        seed: commands::seed(command),
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.written.clone(),
    };
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| Failure::check(e.to_string()))?;
    fs::write(outputs.dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(())
}

/// Replays a manifest into `out` and compares every recorded digest.
pub fn rerun(path: &Path, out: &Path) -> CliResult<i32> {
    let text = fs::read_to_string(path)?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if matches!(manifest.parameters, Command::Rerun(_)) {
        return Err(Failure::usage("a rerun manifest cannot be replayed"));
    }
    let mut outputs = Outputs::new(out)?;
    commands::run(&manifest.parameters, &mut outputs)?;
    write(&manifest.parameters, &outputs)?;
    let mut code = EXIT_OK;
    for recorded in &manifest.outputs {
        let verdict = match outputs.written.iter().find(|d| d.file == recorded.file) {
            Some(d) if d.sha256 == recorded.sha256 => "identical",
            Some(_) => "differs",
            None => "missing",
        };
        if verdict != "identical" {
            code = EXIT_FAILED_CHECK;
        }
        println!("{}: {verdict}", recorded.file);
    }
    Ok(code)
}
