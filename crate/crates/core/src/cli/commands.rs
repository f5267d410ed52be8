//! Command implementations.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sfdesign::budget::budget_from_env;
use sfdesign::correlation::{
    correlation_matrix, correlation_matrix_real, is_orthogonal, second_order_check,
    CorrelationSummary,
};
use sfdesign::design::{
    gram_schmidt_design, random_latin_hypercube, to_unit_cube, validate_latin_hypercube,
    DesignMatrix, JitterMode, LevelMatrix, GRAM_SCHMIDT_DEFAULT_RANGE,
};
use sfdesign::discrepancy::{
    centered_l2, l2_discrepancy, modified_l2, star_discrepancy_exact, symmetric_l2,
    DiscrepancyResult,
};
use sfdesign::distance::{audze_eglais, dmin2, min_interpoint_distance, phi_q_real, DistanceOrder};
use sfdesign::io::{
    levels_to_csv, looks_like_levels, read_levels_csv, read_matrix_csv, reals_to_csv,
};
use sfdesign::matrix::{IntMatrix, RealMatrix};
use sfdesign::nets::{is_net, is_sequence_prefix};
use sfdesign::oa::{
    galois_oa, load_oa, oa_based_lh_asym, oa_to_text, verify_projection_property, verify_strength,
};
use sfdesign::olh::tables::{table, Table, TABLE_IDS};
use sfdesign::olh::{
    bingham_general, construct_best_known, doubling_pipeline, hadamard, kron_augmented,
    kron_construct, oa_coupling_olh, sun_olh_even, sun_olh_odd, SignMatrix,
};
use sfdesign::rng;
use sfdesign::sampling::{variance_experiment, SamplingScheme, TestFunction};
use sfdesign::search::{
    anneal_lh, columnwise_pairwise, maximin_lh, threshold_accepting_utype, Objective,
    SearchOutcome, SearchParams,
};

use super::plot::scatter_matrix;
use super::*;

const DEFAULT_SWEEPS: usize = 1000;

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Gen(_) => "gen",
        Command::Construct(_) => "construct",
        Command::Search(_) => "search",
        Command::Eval(_) => "eval",
        Command::Plot(_) => "plot",
        Command::VerifyOa(_) => "verify-oa",
        Command::VerifyNet(_) => "verify-net",
        Command::Discrepancy(_) => "discrepancy",
        Command::VarianceLab(_) => "variance-lab",
        Command::DumpTable(_) => "dump-table",
        Command::Rerun(_) => "rerun",
    }
}

pub fn seed(command: &Command) -> Option<u64> {
    match command {
        Command::Gen(a) => Some(a.seed),
        Command::Search(a) => Some(a.seed.unwrap_or(0)),
        Command::VarianceLab(a) => Some(a.seed),
        _ => None,
    }
}

pub fn run(command: &Command, out: &mut Outputs) -> CliResult<i32> {
    match command {
        Command::Gen(a) => gen(a, out),
        Command::Construct(c) => construct(c, out),
        Command::Search(a) => search(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Plot(a) => plot(a, out),
        Command::VerifyOa(a) => verify_oa(a, out),
        Command::VerifyNet(a) => verify_net(a, out),
        Command::Discrepancy(a) => discrepancy(a, out),
        Command::VarianceLab(a) => variance_lab(a, out),
        Command::DumpTable(a) => dump_table(a, out),
        Command::Rerun(_) => Err(Failure::usage("rerun cannot be nested")),
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED_CHECK
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).unwrap_or_default()
    );
}

fn parse_order(t: &str) -> CliResult<DistanceOrder> {
    let value: f64 = t
        .parse()
        .map_err(|_| Failure::usage(format!("distance exponent '{t}'")))?;
    Ok(DistanceOrder::new(value)?)
}

fn jitter(j: Jitter, seed: u64) -> JitterMode {
    match j {
        Jitter::Midpoint => JitterMode::Midpoint,
        Jitter::Random => JitterMode::Random(rng::child_seed(seed, 1)),
    }
}

fn read_signs(path: &Path) -> CliResult<SignMatrix> {
    let m = read_matrix_csv(path)?;
    let ints = IntMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).round() as i64);
    Ok(SignMatrix::new(ints)?)
}

fn signs_to_csv(s: &SignMatrix) -> String {
    let header: Vec<String> = (1..=s.cols()).map(|j| format!("col{j}")).collect();
    let mut out = header.join(",") + "\n";
    for i in 0..s.rows() {
        let row: Vec<String> = s.matrix().row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Summary of a constructed design.
fn design_report(design: &LevelMatrix) -> CliResult<Value> {
    let latin = validate_latin_hypercube(design).passed;
    let mut report = json!({
        "rows": design.rows(),
        "cols": design.cols(),
        "latin_hypercube": latin,
    });
    if design.cols() >= 2 {
        let corr = correlation_matrix(design)?;
        report["orthogonal"] = json!(is_orthogonal(design).orthogonal);
        report["rho_max"] = json!(corr.rho_max);
        report["rho_ave_sq"] = json!(corr.rho_ave_sq);
    }
    Ok(report)
}

fn gen(a: &GenArgs, out: &mut Outputs) -> CliResult<i32> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::usage(format!("{flag} is required")))
    };
    match a.kind {
        GenKind::RandomLh => {
            let lh = random_latin_hypercube(need(a.n, "--n")?, need(a.k, "--k")?, a.seed)?;
            let d = to_unit_cube(&lh, jitter(a.jitter, a.seed))?;
            out.write("levels.csv", &levels_to_csv(&lh))?;
            out.write("design.csv", &reals_to_csv(d.points()))?;
            let report = validate_latin_hypercube(&lh);
            out.write_json("report.json", &report)?;
            Ok(verdict(report.passed))
        }
        GenKind::OaLh => {
            let path =
                a.oa.as_ref()
                    .ok_or_else(|| Failure::usage("--oa is required for oa-lh"))?;
            let mut array = load_oa(path)?;
            if let Some(k) = a.k {
                if k > array.cols() {
                    return Err(Failure::usage(format!(
                        "--k {k} exceeds the array's {} columns",
                        array.cols()
                    )));
                }
                array = array.select_columns(&(0..k).collect::<Vec<_>>())?;
            }
            if a.n.is_some_and(|n| n != array.rows()) {
                return Err(
                    Error::IncompatibleArray(format!("array has {} runs", array.rows())).into(),
                );
            }
            let lh = oa_based_lh_asym(&array, a.seed)?;
            let d = to_unit_cube(&lh, jitter(a.jitter, a.seed))?;
            out.write("levels.csv", &levels_to_csv(&lh))?;
            out.write("design.csv", &reals_to_csv(d.points()))?;
            let report = match array.symmetric_levels() {
                Some(s) => {
                    let p = verify_projection_property(&lh, s, array.strength())?;
                    json!({ "projection": p, "levels": s, "strength": array.strength() })
                }
                None => json!({ "projection": null }),
            };
            let holds = report["projection"]["holds"].as_bool().unwrap_or(true);
            out.write_json("report.json", &report)?;
            Ok(verdict(holds))
        }
        GenKind::GramSchmidt => {
            let lh = random_latin_hypercube(need(a.n, "--n")?, need(a.k, "--k")?, a.seed)?;
            let (low, high) = GRAM_SCHMIDT_DEFAULT_RANGE;
            let g = gram_schmidt_design(&lh.true_levels(), low, high)?;
            out.write("design.csv", &reals_to_csv(&g))?;
            let corr = correlation_matrix_real(&g)?;
            out.write_json(
                "report.json",
                &json!({ "rho_max": corr.rho_max, "rho_ave_sq": corr.rho_ave_sq }),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn construct(c: &ConstructCommand, out: &mut Outputs) -> CliResult<i32> {
    let design = match c {
        ConstructCommand::Lin2009 { b, oa } => {
            let b = read_levels_csv(b, None)?;
            let array = match oa {
                Some(p) => load_oa(p)?,
                None => galois_oa(b.rows(), b.rows().div_ceil(2) * 2)?,
            };
            oa_coupling_olh(&b, &array)?
        }
        ConstructCommand::Sun { c, parity } => {
            let d = match parity {
                Parity::Odd => sun_olh_odd(*c)?,
                Parity::Even => sun_olh_even(*c)?,
            };
            let mut report = design_report(&d)?;
            report["second_order"] = json!(second_order_check(&d)?);
            return finish_construct(&d, report, out);
        }
        ConstructCommand::Kron {
            a,
            b,
            e,
            f,
            augmented,
        } => {
            let (a, f) = (read_signs(a)?, read_signs(f)?);
            let (b, e) = (read_levels_csv(b, None)?, read_levels_csv(e, None)?);
            let built = if *augmented {
                kron_augmented(&a, &b, &e, &f)?
            } else {
                kron_construct(&a, &b, &e, &f)?
            };
            let mut report = design_report(&built.design)?;
            report["conditions"] = json!(built.conditions);
            report["label"] = json!(built.label);
            return finish_construct(&built.design, report, out);
        }
        ConstructCommand::Double { b, hadamard: h } => {
            let b = read_levels_csv(b, None)?;
            let h = match h {
                Some(p) => read_signs(p)?,
                None => hadamard(b.rows())?,
            };
            let mut reports = Vec::new();
            let mut all_orthogonal = true;
            for step in doubling_pipeline(&b, &h)? {
                let d = &step.design;
                out.write(
                    &format!("design-{}x{}.csv", d.rows(), d.cols()),
                    &levels_to_csv(d),
                )?;
                let mut r = design_report(d)?;
                r["label"] = json!(step.label);
                all_orthogonal &= r["orthogonal"].as_bool().unwrap_or(false);
                reports.push(r);
            }
            let report = Value::Array(reports);
            out.write_json("report.json", &report)?;
            print_json(&report);
            return Ok(verdict(all_orthogonal));
        }
        ConstructCommand::Bingham { a, order, d } => {
            let a = match (a, order) {
                (Some(p), _) => read_signs(p)?,
                (None, Some(m)) => hadamard(*m)?,
                (None, None) => return Err(Failure::usage("either --a or --order is required")),
            };
            let mut blocks = d
                .iter()
                .map(|p| read_levels_csv(p, None))
                .collect::<sfdesign::error::Result<Vec<_>>>()?;
            if blocks.len() == 1 {
                blocks = vec![blocks[0].clone(); a.cols()];
            }
            bingham_general(&a, &blocks)?
        }
        ConstructCommand::Best { n } => construct_best_known(*n)?,
    };
    let report = design_report(&design)?;
    finish_construct(&design, report, out)
}

fn finish_construct(design: &LevelMatrix, report: Value, out: &mut Outputs) -> CliResult<i32> {
    out.write("design.csv", &levels_to_csv(design))?;
    out.write_json("report.json", &report)?;
    print_json(&report);
    Ok(EXIT_OK)
}

/// Schedule presets read from a `key = value` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleConfig {
    seed: Option<u64>,
    max_iterations: Option<usize>,
    initial_temperature: Option<f64>,
    cooling_factor: Option<f64>,
    cooling_interval: Option<usize>,
    restarts: Option<usize>,
    threshold_stages: Option<usize>,
}

fn search_params(a: &SearchArgs) -> CliResult<SearchParams> {
    let config: ScheduleConfig = match &a.config {
        Some(p) => toml::from_str(&fs::read_to_string(p)?)
            .map_err(|e| Failure::usage(format!("{}: {}", p.display(), e.message())))?,
        None => ScheduleConfig::default(),
    };
    let d = SearchParams::default();
    Ok(SearchParams {
        seed: a.seed.or(config.seed).unwrap_or(d.seed),
        max_iterations: a
            .iterations
            .or(config.max_iterations)
            .unwrap_or(d.max_iterations),
        initial_temperature: a.temperature.or(config.initial_temperature),
        cooling_factor: a
            .cooling
            .or(config.cooling_factor)
            .unwrap_or(d.cooling_factor),
        cooling_interval: config.cooling_interval,
        restarts: a.restarts.or(config.restarts).unwrap_or(d.restarts),
        threshold_stages: config.threshold_stages.unwrap_or(d.threshold_stages),
    })
}

fn objective(name: ObjectiveName, q: u32, order: DistanceOrder) -> Objective {
    match name {
        ObjectiveName::PhiQ => Objective::PhiQ { q, order },
        ObjectiveName::RhoAveSq => Objective::RhoAveSq,
        ObjectiveName::RhoMax => Objective::RhoMax,
        ObjectiveName::AudzeEglais => Objective::AudzeEglais { order },
        ObjectiveName::Dmin2 => Objective::Dmin2Negated { order },
        ObjectiveName::Cl2 => Objective::Cl2,
        ObjectiveName::Sl2 => Objective::Sl2,
        ObjectiveName::Ml2 => Objective::Ml2,
        ObjectiveName::L2 => Objective::L2,
    }
}

#[derive(Serialize)]
struct TraceFile<'a> {
    method: Method,
    objective: Objective,
    params: &'a SearchParams,
    value: f64,
    restart: usize,
    current: &'a [f64],
    best: &'a [f64],
}

fn search(a: &SearchArgs, out: &mut Outputs) -> CliResult<i32> {
    let params = search_params(a)?;
    let order = parse_order(&a.t)?;
    let obj = objective(a.objective, a.q, order);
    let outcome: SearchOutcome = match a.method {
        Method::Anneal => anneal_lh(a.n, a.k, obj, &params)?,
        Method::Cp => {
            let start = random_latin_hypercube(a.n, a.k, params.seed)?;
            let sweeps = a.iterations.unwrap_or(DEFAULT_SWEEPS);
            columnwise_pairwise(&start, obj, sweeps)?
        }
        Method::Ta => threshold_accepting_utype(a.n, a.k, a.levels.unwrap_or(a.n), obj, &params)?,
        Method::Maximin => maximin_lh(a.n, a.k, a.q, order, &params)?,
    };
    let objective = if a.method == Method::Maximin {
        Objective::PhiQ { q: a.q, order }
    } else {
        obj
    };
    out.write("design.csv", &levels_to_csv(&outcome.design))?;
    out.write_json(
        "trace.json",
        &TraceFile {
            method: a.method,
            objective,
            params: &params,
            value: outcome.value,
            restart: outcome.restart,
            current: &outcome.trace.current,
            best: &outcome.trace.best,
        },
    )?;
    println!("{} {}", name_of(objective), outcome.value);
    Ok(EXIT_OK)
}

fn name_of(o: Objective) -> &'static str {
    match o {
        Objective::PhiQ { .. } => "phi_q",
        Objective::RhoAveSq => "rho_ave_sq",
        Objective::RhoMax => "rho_max",
        Objective::AudzeEglais { .. } => "audze_eglais",
        Objective::Dmin2Negated { .. } => "dmin2_negated",
        Objective::Cl2 => "cl2",
        Objective::Sl2 => "sl2",
        Objective::Ml2 => "ml2",
        Objective::L2 => "l2",
    }
}

/// A design file read either as centered levels or as unit-cube points.
enum Loaded {
    Levels(LevelMatrix),
    Points(DesignMatrix),
}

impl Loaded {
    fn read(path: &Path) -> CliResult<Self> {
        let m = read_matrix_csv(path)?;
        if looks_like_levels(&m) {
            Ok(Self::Levels(LevelMatrix::from_true_levels(&m, None)?))
        } else {
            Ok(Self::Points(DesignMatrix::new(m)?))
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Levels(_) => "levels",
            Self::Points(_) => "unit-cube",
        }
    }

    /// Coordinates for distance criteria.
    fn coordinates(&self) -> RealMatrix {
        match self {
            Self::Levels(l) => l.true_levels(),
            Self::Points(d) => d.points().clone(),
        }
    }

    /// Unit-cube points for discrepancies; levels use cell midpoints.
    fn cube(&self) -> CliResult<DesignMatrix> {
        match self {
            Self::Levels(l) => Ok(to_unit_cube(l, JitterMode::Midpoint)?),
            Self::Points(d) => Ok(d.clone()),
        }
    }

    fn correlation(&self) -> CliResult<CorrelationSummary> {
        match self {
            Self::Levels(l) => Ok(correlation_matrix(l)?),
            Self::Points(d) => Ok(correlation_matrix_real(d.points())?),
        }
    }
}

pub const DEFAULT_METRICS: [&str; 4] = ["phi_q", "rho_max", "rho_ave_sq", "cl2"];

fn discrepancy_value(r: DiscrepancyResult) -> Value {
    json!({ "value": r.value, "squared": r.squared, "method": r.method })
}

fn eval(a: &EvalArgs, out: &mut Outputs) -> CliResult<i32> {
    let design = Loaded::read(&a.design)?;
    let order = parse_order(&a.t)?;
    let names: Vec<String> = if a.metrics.is_empty() {
        DEFAULT_METRICS.iter().map(|s| s.to_string()).collect()
    } else {
        a.metrics
            .iter()
            .map(|m| m.trim().replace('-', "_"))
            .collect()
    };
    let mut metrics = Vec::new();
    for name in &names {
        let (value, parameters) = match name.as_str() {
            "phi_q" => (
                json!(phi_q_real(&design.coordinates(), a.q, order)?),
                json!({ "q": a.q, "t": a.t }),
            ),
            "rho_max" => (json!(design.correlation()?.rho_max), Value::Null),
            "rho_ave_sq" => (json!(design.correlation()?.rho_ave_sq), Value::Null),
            "audze_eglais" => (
                json!(audze_eglais(&design.coordinates(), order)?),
                json!({ "t": a.t }),
            ),
            "dmin2" => (
                json!(dmin2(&design.coordinates(), order)?),
                json!({ "t": a.t }),
            ),
            "min_distance" => (
                json!(min_interpoint_distance(&design.coordinates(), order)?),
                json!({ "t": a.t }),
            ),
            "l2" => (
                discrepancy_value(l2_discrepancy(&design.cube()?)),
                Value::Null,
            ),
            "cl2" => (discrepancy_value(centered_l2(&design.cube()?)), Value::Null),
            "sl2" => (
                discrepancy_value(symmetric_l2(&design.cube()?)),
                Value::Null,
            ),
            "ml2" => (discrepancy_value(modified_l2(&design.cube()?)), Value::Null),
            "star" => (
                discrepancy_value(star_discrepancy_exact(&design.cube()?, budget_from_env())?),
                Value::Null,
            ),
            other => return Err(Failure::usage(format!("unknown metric '{other}'"))),
        };
        metrics.push(json!({ "name": name, "value": value, "parameters": parameters }));
    }
    let coords = design.coordinates();
    let report = json!({
        "design": a.design.display().to_string(),
        "kind": design.kind(),
        "rows": coords.rows(),
        "cols": coords.cols(),
        "metrics": metrics,
    });
    out.write_json("report.json", &report)?;
    print_json(&report);
    Ok(EXIT_OK)
}

fn plot(a: &PlotArgs, out: &mut Outputs) -> CliResult<i32> {
    let cube = Loaded::read(&a.design)?.cube()?;
    out.write("plot.svg", &scatter_matrix(cube.points(), a.grid)?)?;
    Ok(EXIT_OK)
}

fn verify_oa(a: &VerifyOaArgs, out: &mut Outputs) -> CliResult<i32> {
    let array = load_oa(&a.oa)?;
    let r = a.strength.unwrap_or(array.strength());
    let report = verify_strength(&array, r);
    let value = json!({
        "runs": array.rows(),
        "cols": array.cols(),
        "levels": array.levels(),
        "strength": r,
        "holds": report.holds,
        "witness": report.witness.as_ref().map(ToString::to_string),
    });
    out.write_json("report.json", &value)?;
    print_json(&value);
    Ok(verdict(report.holds))
}

fn verify_net(a: &VerifyNetArgs, out: &mut Outputs) -> CliResult<i32> {
    let points = read_matrix_csv(&a.design)?;
    let holds = if a.sequence {
        let report = is_sequence_prefix(&points, a.base, a.t, a.m)?;
        out.write_json("report.json", &report)?;
        for slice in report.slices.iter().filter(|s| !s.report.holds) {
            println!(
                "slice k={} m={} fails: {:?}",
                slice.k, slice.m, slice.report.witness
            );
        }
        report.holds
    } else {
        let report = is_net(&points, a.base, a.t, a.m)?;
        out.write_json("report.json", &report)?;
        if let Some(w) = &report.witness {
            println!(
                "interval exponents {:?} anchors {:?} holds {} points, expected {}",
                w.interval.exponents, w.interval.anchors, w.count, w.expected
            );
        }
        report.holds
    };
    println!("{}", if holds { "holds" } else { "fails" });
    Ok(verdict(holds))
}

fn discrepancy(a: &DiscrepancyArgs, out: &mut Outputs) -> CliResult<i32> {
    let cube = Loaded::read(&a.design)?.cube()?;
    let result = match a.measure {
        Measure::Star => star_discrepancy_exact(&cube, budget_from_env())?,
        Measure::L2 => l2_discrepancy(&cube),
        Measure::Cl2 => centered_l2(&cube),
        Measure::Sl2 => symmetric_l2(&cube),
        Measure::Ml2 => modified_l2(&cube),
    };
    let report = discrepancy_value(result);
    out.write_json("report.json", &report)?;
    print_json(&report);
    Ok(EXIT_OK)
}

/// `s` with `s² = n` when `s` is a prime power the Galois construction supports.
fn square_root(n: usize) -> Option<usize> {
    let s = (n as f64).sqrt().round() as usize;
    (s * s == n).then_some(s)
}

fn variance_lab(a: &VarianceLabArgs, out: &mut Outputs) -> CliResult<i32> {
    let f = TestFunction::by_name(&a.f, a.k).map_err(|e| Failure::usage(e.to_string()))?;
    let scheme = match a.scheme {
        SchemeName::Srs => SamplingScheme::SimpleRandom,
        SchemeName::Lhs => SamplingScheme::LatinHypercube { midpoint: false },
        SchemeName::OaLhs => {
            let array = match &a.oa {
                Some(p) => load_oa(p)?,
                None => {
                    let s = square_root(a.n).ok_or_else(|| {
                        Failure::usage(format!("--oa is required: {} is not a square", a.n))
                    })?;
                    galois_oa(s, f.arity())?
                }
            };
            SamplingScheme::OaLatinHypercube(array)
        }
    };
    let report = variance_experiment(&f, a.n, &scheme, a.reps, a.seed)?;
    let value = json!({
        "report": report,
        "n_times_variance": report.empirical_variance * a.n as f64,
        "function_variance": f.variance(),
    });
    out.write_json("report.json", &value)?;
    print_json(&value);
    Ok(EXIT_OK)
}

fn dump_table(a: &DumpTableArgs, out: &mut Outputs) -> CliResult<i32> {
    if a.id == "list" {
        for id in TABLE_IDS {
            println!("{id}");
        }
        return Ok(EXIT_OK);
    }
    let t = table(&a.id).ok_or_else(|| {
        Failure::usage(format!("unknown table '{}'; try `dump-table list`", a.id))
    })?;
    let path = match t {
        Table::Levels(l) => out.write(&format!("{}.csv", a.id), &levels_to_csv(&l))?,
        Table::Design(d) => out.write(&format!("{}.csv", a.id), &reals_to_csv(&d))?,
        Table::Array(oa) => out.write(&format!("{}.txt", a.id), &oa_to_text(&oa))?,
        Table::Signs(s) => out.write(&format!("{}.csv", a.id), &signs_to_csv(&s))?,
    };
    println!("{}", path.display());
    Ok(EXIT_OK)
}
