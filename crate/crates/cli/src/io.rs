//! File formats: Coxeter matrix files, loop inputs, and the JSON/DOT/CSV
//! artifact serializers. All exact values are written as rational or
//! algebraic-integer strings, never as decimals.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use serde_json::{json, Value};

use parabolica_core::arrangements::{Arrangement, IntersectionLattice};
use parabolica_core::classify::CoxeterMatrix;
use parabolica_core::coxeter::{CoxeterSystem, Group};
use parabolica_core::homotopy::{HomotopyGrid, QLoop};
use parabolica_core::presentation::Presentation;
use parabolica_core::word::Word;

/// Output directory resolution: the PARABOLICA_OUT environment variable
/// overrides --out; the default is the current directory.
pub fn resolve_out_dir(cli_out: Option<PathBuf>) -> PathBuf {
    if let Ok(env) = std::env::var("PARABOLICA_OUT") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    cli_out.unwrap_or_else(|| PathBuf::from("."))
}

/// Parses a Coxeter matrix file: first line the rank n, then n lines of n
/// entries each, with `inf` denoting an infinite bond.
pub fn parse_matrix_file(path: &Path) -> anyhow::Result<CoxeterMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| anyhow!("matrix file is empty"))?
        .parse()
        .map_err(|_| anyhow!("matrix file line 1: expected the rank"))?;
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| anyhow!("matrix file: missing row {}", row + 1))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != n {
            bail!(
                "matrix file row {}: expected {n} entries, found {}",
                row + 1,
                fields.len()
            );
        }
        for (col, f) in fields.iter().enumerate() {
            let v: u32 = if f.eq_ignore_ascii_case("inf") {
                0
            } else {
                f.parse().map_err(|_| {
                    anyhow!("matrix file row {} column {}: bad entry `{f}`", row + 1, col + 1)
                })?
            };
            entries.push(v);
        }
    }
    Ok(CoxeterMatrix::new(n, entries)?)
}

/// Loads a system from a type label or a matrix file (exactly one).
pub fn load_system(
    label: Option<&str>,
    matrix_file: Option<&Path>,
) -> anyhow::Result<Arc<CoxeterSystem>> {
    match (label, matrix_file) {
        (Some(l), None) => Ok(Arc::new(CoxeterSystem::from_label(l)?)),
        (None, Some(p)) => Ok(Arc::new(CoxeterSystem::from_matrix(parse_matrix_file(p)?)?)),
        (Some(_), Some(_)) => bail!("give either --type or --matrix-file, not both"),
        (None, None) => bail!("a system is required: --type LABEL or --matrix-file FILE"),
    }
}

/// Parses a loop file: either `word: s1 s2 s1` or
/// `chambers: e, s1, s1 s2, e` (each chamber given by any word evaluating
/// to it). Lines starting with `#` are comments.
pub fn parse_loop_file(path: &Path, group: &Group) -> anyhow::Result<QLoop> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading loop file {}", path.display()))?;
    let q = parabolica_core::homotopy::top_level(group)?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("word:") {
            let w = Word::parse(rest, group.rank()).map_err(|e| {
                anyhow!("{} line {}: {e}", path.display(), lineno + 1)
            })?;
            return parabolica_core::homotopy::loop_of_word(group, &w).map_err(|e| {
                anyhow!("{} line {}: {e}", path.display(), lineno + 1)
            });
        }
        if let Some(rest) = line.strip_prefix("chambers:") {
            let mut chambers = Vec::new();
            for (pos, tok) in rest.split(',').enumerate() {
                let w = Word::parse(tok, group.rank()).map_err(|e| {
                    anyhow!(
                        "{} line {} entry {}: {e}",
                        path.display(),
                        lineno + 1,
                        pos + 1
                    )
                })?;
                chambers.push(group.eval_word(&w)?);
            }
            return Ok(QLoop::new(group, q, chambers)?);
        }
        bail!(
            "{} line {}: expected `word:` or `chambers:`",
            path.display(),
            lineno + 1
        );
    }
    bail!("{}: no loop found", path.display())
}

/// Arrangement as JSON: each subspace carries its exact canonical basis, the
/// codimension, and the type label of an originating parabolic when known.
pub fn arrangement_json(sys: &CoxeterSystem, k: usize, arr: &Arrangement) -> Value {
    let subspaces: Vec<Value> = arr
        .subspaces()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "basis": basis_strings(s),
                "codimension": s.codim(),
                "parabolic_type": arr.source_type(i),
            })
        })
        .collect();
    json!({
        "schema_version": 1,
        "system": sys.describe(),
        "rank": sys.rank(),
        "k": k,
        "label": arr.label(),
        "count": arr.len(),
        "subspaces": subspaces,
    })
}

pub fn lattice_json(sys: &CoxeterSystem, k: usize, lat: &IntersectionLattice) -> Value {
    let elements: Vec<Value> = lat
        .elements()
        .iter()
        .map(|s| {
            json!({
                "basis": basis_strings(s),
                "codimension": s.codim(),
            })
        })
        .collect();
    let covers: Vec<Value> = lat.covers().iter().map(|&(a, b)| json!([a, b])).collect();
    json!({
        "schema_version": 1,
        "system": sys.describe(),
        "k": k,
        "order": "reverse-inclusion",
        "element_count": lat.len(),
        "elements": elements,
        "covers": covers,
    })
}

fn basis_strings(s: &parabolica_core::geometry::Subspace) -> Vec<Vec<String>> {
    s.basis_rows()
        .iter()
        .map(|row| row.iter().map(|c| c.to_string()).collect())
        .collect()
}

/// Presentation as plain text.
pub fn presentation_text(p: &Presentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("generators: {}\n", p.num_generators()));
    out.push_str(&format!("relators: {}\n", p.num_relators()));
    out.push_str(&format!("{p}\n"));
    out
}

/// Grid certificate as JSON (row-major canonical words).
pub fn grid_json(sys: &CoxeterSystem, group: &Group, grid: &HomotopyGrid) -> Value {
    let rows: Vec<Vec<String>> = grid
        .rows()
        .iter()
        .map(|row| row.iter().map(|&c| group.word_of(c).to_string()).collect())
        .collect();
    json!({
        "schema_version": 1,
        "system": sys.describe(),
        "q": grid.q(),
        "rows": rows,
    })
}

/// Re-ingests a grid certificate, evaluating each word back to a chamber.
pub fn parse_grid_json(value: &Value, group: &Group) -> anyhow::Result<HomotopyGrid> {
    let q = value["q"]
        .as_u64()
        .ok_or_else(|| anyhow!("certificate: missing q"))? as usize;
    let rows_v = value["rows"]
        .as_array()
        .ok_or_else(|| anyhow!("certificate: missing rows"))?;
    let mut rows = Vec::with_capacity(rows_v.len());
    for row in rows_v {
        let row = row
            .as_array()
            .ok_or_else(|| anyhow!("certificate: row is not an array"))?;
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let s = cell
                .as_str()
                .ok_or_else(|| anyhow!("certificate: cell is not a string"))?;
            let w = Word::parse(s, group.rank())?;
            out.push(group.eval_word(&w)?);
        }
        rows.push(out);
    }
    Ok(HomotopyGrid::new(q, rows))
}

/// Writes a JSON value with a trailing newline, byte-stable across runs.
pub fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_roundtrip() {
        let dir = std::env::temp_dir().join("parabolica_test_matrix");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("b3.txt");
        std::fs::write(&path, "3\n1 4 2\n4 1 3\n2 3 1\n").unwrap();
        let m = parse_matrix_file(&path).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.entry(0, 1), 4);
        std::fs::write(&path, "2\n1 inf\ninf 1\n").unwrap();
        let m = parse_matrix_file(&path).unwrap();
        assert_eq!(m.bond(0, 1), None);
        std::fs::write(&path, "2\n1 x\n3 1\n").unwrap();
        assert!(parse_matrix_file(&path).is_err());
    }
}
