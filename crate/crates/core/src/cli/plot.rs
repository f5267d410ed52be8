//! Scatter-matrix SVG.

use std::fmt::Write;

use sfdesign::error::{Error, Result};
use sfdesign::matrix::RealMatrix;

const PANEL: f64 = 160.0;
const GAP: f64 = 12.0;
const RADIUS: f64 = 2.5;

/// One panel per ordered column pair; the diagonal carries column labels.
/// Optional grid lines at `i / s`.
pub fn scatter_matrix(points: &RealMatrix, grid: Option<usize>) -> Result<String> {
    let k = points.cols();
    if k < 2 {
        return Err(Error::InvalidDimension(format!(
            "{k} columns; a scatter matrix needs 2"
        )));
    }
    if grid == Some(0) {
        return Err(Error::InvalidParameter("grid size 0".into()));
    }
    let size = k as f64 * (PANEL + GAP) + GAP;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for row in 0..k {
        for col in 0..k {
            let x0 = GAP + col as f64 * (PANEL + GAP);
            let y0 = GAP + row as f64 * (PANEL + GAP);
            let _ = writeln!(
                svg,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="black"/>"#
            );
            if row == col {
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="16">col{}</text>"#,
                    x0 + PANEL / 2.0,
                    y0 + PANEL / 2.0,
                    col + 1
                );
                continue;
            }
            if let Some(s) = grid {
                for i in 1..s {
                    let f = i as f64 / s as f64 * PANEL;
                    let _ = writeln!(
                        svg,
                        r##"<line x1="{:.2}" y1="{y0:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb"/>"##,
                        x0 + f,
                        x0 + f,
                        y0 + PANEL
                    );
                    let _ = writeln!(
                        svg,
                        r##"<line x1="{x0:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb"/>"##,
                        y0 + PANEL - f,
                        x0 + PANEL,
                        y0 + PANEL - f
                    );
                }
            }
            for i in 0..points.rows() {
                let cx = x0 + points.get(i, col) * PANEL;
                let cy = y0 + PANEL - points.get(i, row) * PANEL;
                let _ = writeln!(svg, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{RADIUS}"/>"#);
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
