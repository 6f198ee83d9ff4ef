//! `parabolica build`: construct an object and serialize it.

use std::path::Path;
use std::sync::Arc;

use anyhow::Context;

use parabolica_core::arrangements::{build_k_parabolic, intersection_lattice};
use parabolica_core::complex::{build_q_graph, build_two_complex, graph_to_dot};
use parabolica_core::coxeter::{CoxeterSystem, Group};
use parabolica_core::geometry::Realization;
use parabolica_core::homotopy::pi1_presentation;

use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Arrangement,
    Lattice,
    Graph,
    Presentation,
}

impl std::str::FromStr for Emit {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Emit> {
        match s {
            "arrangement" => Ok(Emit::Arrangement),
            "lattice" => Ok(Emit::Lattice),
            "graph" => Ok(Emit::Graph),
            "presentation" => Ok(Emit::Presentation),
            other => anyhow::bail!(
                "unknown --emit `{other}` (expected arrangement, lattice, graph or presentation)"
            ),
        }
    }
}

/// Builds and writes one artifact; returns the output path.
pub fn run(
    sys: &Arc<CoxeterSystem>,
    k: usize,
    emit: Emit,
    out_dir: &Path,
    cell_cap: usize,
) -> anyhow::Result<std::path::PathBuf> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let stem = format!("{}_k{}", sys.describe().replace(['(', ')'], ""), k);
    let n = sys.rank();
    anyhow::ensure!(
        k >= 2 && k <= n + 1,
        "k = {k} out of range for rank {n} (expected 2..={})",
        n + 1
    );
    let q = n + 1 - k;

    match emit {
        Emit::Arrangement => {
            let real = Realization::new(Arc::new(Group::new(Arc::clone(sys))?));
            let arr = build_k_parabolic(&real, k)?;
            let path = out_dir.join(format!("{stem}_arrangement.json"));
            io::write_json(&path, &io::arrangement_json(sys, k, &arr))?;
            Ok(path)
        }
        Emit::Lattice => {
            let real = Realization::new(Arc::new(Group::new(Arc::clone(sys))?));
            let arr = build_k_parabolic(&real, k)?;
            let lat = intersection_lattice(&arr)?;
            let path = out_dir.join(format!("{stem}_lattice.json"));
            io::write_json(&path, &io::lattice_json(sys, k, &lat))?;
            Ok(path)
        }
        Emit::Graph => {
            anyhow::ensure!(q < n, "k = {k} puts q = n+1-k out of range");
            let group = Group::new(Arc::clone(sys))?;
            let graph = build_q_graph(&group, q)?;
            let path = out_dir.join(format!("{stem}_graph.dot"));
            std::fs::write(&path, graph_to_dot(&group, &graph))
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(path)
        }
        Emit::Presentation => {
            anyhow::ensure!(q < n, "k = {k} puts q = n+1-k out of range");
            let group = Group::new(Arc::clone(sys))?;
            let x = build_two_complex(&group, q, cell_cap)?;
            let pi1 = pi1_presentation(&x, 0)?;
            let path = out_dir.join(format!("{stem}_presentation.txt"));
            std::fs::write(&path, io::presentation_text(&pi1.presentation))
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(path)
        }
    }
}
