//! Figure manifest over previously written CSV artifacts.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::artifact::{TOOL, VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct Series {
    pub csv: String,
    pub x: String,
    /// Column-name prefixes; every matching column is one curve.
    pub y_prefixes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Concrete columns found for each series, in the same order.
    pub columns: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub figures: Vec<Figure>,
}

fn series(csv: &str, x: &str, prefixes: &[&str]) -> Series {
    Series {
        csv: csv.into(),
        x: x.into(),
        y_prefixes: prefixes.iter().map(|s| s.to_string()).collect(),
    }
}

fn figure(name: &str, title: &str, x_label: &str, y_label: &str, series: Vec<Series>) -> Figure {
    Figure {
        name: name.into(),
        title: title.into(),
        x_label: x_label.into(),
        y_label: y_label.into(),
        series,
        columns: Vec::new(),
    }
}

/// The figure analogues and the CSV columns each one plots.
pub fn figures() -> Vec<Figure> {
    vec![
        figure(
            "energy_overlay",
            "Lowest levels of H_C^sym and H_core",
            "t",
            "energy [w]",
            vec![series(
                "spectrum.csv",
                "t [1]",
                &["E0_hc_sym", "E1_hc_sym", "E0_core", "E1_core"],
            )],
        ),
        figure(
            "block_projection",
            "Ground-state weight on H_L^(0) and H_R^(0)",
            "t",
            "weight",
            vec![series(
                "blockproj.csv",
                "t [1]",
                &["weight_HL0", "weight_HR0"],
            )],
        ),
        figure(
            "crossing_vs_anticrossing",
            "Bare ground energies against the two lowest H_core levels",
            "x [w]",
            "energy [w]",
            vec![
                series("bare.csv", "x [w]", &["e_L0", "e_R0"]),
                series("spectrum.csv", "x [w]", &["E0_core", "E1_core"]),
            ],
        ),
        figure(
            "scaling_fit",
            "Minimum H_core gap against m_l + m_r",
            "m_l + m_r",
            "ln gap [ln w]",
            vec![series(
                "scaling.csv",
                "size",
                &["ln_gap_core", "ln_gap_2x2"],
            )],
        ),
    ]
}

fn read_header(path: &Path) -> Result<Vec<String>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(r.headers()?.iter().map(str::to_string).collect())
}

/// Checks every referenced artifact and column, then writes `manifest.json`.
pub fn emit_figure_bundle(dir: &Path) -> Result<Manifest> {
    let mut figures = figures();
    for fig in &mut figures {
        for s in &fig.series {
            let path = dir.join(&s.csv);
            if !path.is_file() {
                bail!(
                    "missing artifact {} required by figure {}",
                    path.display(),
                    fig.name
                );
            }
            let header = read_header(&path)?;
            if !header.contains(&s.x) {
                bail!("missing column {:?} in {}", s.x, s.csv);
            }
            let mut cols = Vec::new();
            for prefix in &s.y_prefixes {
                let found = header
                    .iter()
                    .find(|h| h.as_str() == prefix || h.starts_with(&format!("{prefix} [")))
                    .with_context(|| format!("missing column {prefix:?} in {}", s.csv))?;
                cols.push(found.clone());
            }
            fig.columns.push(cols);
        }
    }
    let manifest = Manifest {
        tool: TOOL,
        version: VERSION,
        figures,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(manifest)
}
