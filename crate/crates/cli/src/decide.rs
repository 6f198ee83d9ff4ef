//! `parabolica decide`: decide discrete homotopy of two loops and write the
//! certificate or obstruction.

use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use serde_json::json;

use parabolica_core::coxeter::{CoxeterSystem, Group};
use parabolica_core::homotopy::{decide_homotopic, verify_grid, HomotopyDecision};
use parabolica_core::relaxed::RelaxedSystem;

use crate::io;

pub struct DecideOutcome {
    pub equivalent: bool,
    pub output_file: std::path::PathBuf,
}

pub fn run(
    sys: &Arc<CoxeterSystem>,
    loop1: &Path,
    loop2: &Path,
    out_dir: &Path,
) -> anyhow::Result<DecideOutcome> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let group = Arc::new(Group::new(Arc::clone(sys))?);
    let l1 = io::parse_loop_file(loop1, &group)?;
    let l2 = io::parse_loop_file(loop2, &group)?;
    let rsys = RelaxedSystem::relax(Arc::clone(&group));

    match decide_homotopic(&rsys, &l1, &l2)? {
        HomotopyDecision::Equivalent { script, grid } => {
            debug_assert!(verify_grid(&group, &grid).is_pass());
            let path = out_dir.join("certificate.json");
            let mut value = io::grid_json(sys, &group, &grid);
            value["verdict"] = json!("equivalent");
            value["moves"] = json!(script.len());
            io::write_json(&path, &value)?;
            println!("equivalent ({} moves); certificate: {}", script.len(), path.display());
            Ok(DecideOutcome {
                equivalent: true,
                output_file: path,
            })
        }
        HomotopyDecision::NotEquivalent {
            normal_form_left,
            normal_form_right,
        } => {
            let path = out_dir.join("obstruction.json");
            let value = json!({
                "schema_version": 1,
                "system": sys.describe(),
                "verdict": "not-equivalent",
                "normal_form_left": normal_form_left.to_string(),
                "normal_form_right": normal_form_right.to_string(),
            });
            io::write_json(&path, &value)?;
            println!(
                "not equivalent; obstruction normal forms `{normal_form_left}` vs `{normal_form_right}` ({})",
                path.display()
            );
            Ok(DecideOutcome {
                equivalent: false,
                output_file: path,
            })
        }
    }
}
