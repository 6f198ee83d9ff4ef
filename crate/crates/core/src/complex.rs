//! The Coxeter complex, the q-nearness graphs on chambers, and the attached
//! 2-complexes.
//!
//! Faces are cosets w W_I indexed by their minimal-length representative;
//! chambers are group elements. Two chambers are q-near when they share q+1
//! vertices of the complex, equivalently when the support of u^-1 v has at
//! most n-q-1 distinct letters. At q = n-2 the graph is the one-skeleton of
//! the W-permutahedron (the Cayley graph).

use std::collections::{BTreeSet, HashMap};

use crate::coxeter::{ElemId, Group};
use crate::error::{Error, Result};

/// Default bound on how many 2-cells a complex may carry.
pub const DEFAULT_CELL_CAP: usize = 1_000_000;

/// A face of the Coxeter complex: the coset rep . W_I, stored through its
/// minimal-length representative and the generator subset as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    /// Minimal-length coset representative.
    pub rep: ElemId,
    /// Bitmask of the generator subset I.
    pub subset: u64,
}

impl Face {
    pub fn subset_letters(&self, rank: usize) -> Vec<u8> {
        (0..rank as u8).filter(|&s| self.subset >> s & 1 == 1).collect()
    }

    /// Dimension as a cell of the Coxeter complex (chambers have n-1; the
    /// coset W itself has -1, it is the empty face).
    pub fn complex_dim(&self, rank: usize) -> isize {
        rank as isize - 1 - self.subset.count_ones() as isize
    }

    /// Dimension of the corresponding face of the W-permutahedron.
    pub fn permutahedron_dim(&self) -> usize {
        self.subset.count_ones() as usize
    }
}

/// Minimal-length representative of e W_I.
pub fn coset_min_rep(group: &Group, e: ElemId, subset: u64) -> ElemId {
    let mut cur = e;
    loop {
        let mut descended = false;
        for s in 0..group.rank() as u8 {
            if subset >> s & 1 == 0 {
                continue;
            }
            let next = group.right_mul(cur, s);
            if group.length(next) < group.length(cur) {
                cur = next;
                descended = true;
            }
        }
        if !descended {
            return cur;
        }
    }
}

/// All faces of the Coxeter complex, over every subset I and coset.
pub fn enumerate_faces(group: &Group) -> Vec<Face> {
    let n = group.rank();
    let mut faces = Vec::new();
    for subset in 0..(1u64 << n) {
        let mut reps = BTreeSet::new();
        for e in 0..group.order() as ElemId {
            reps.insert(coset_min_rep(group, e, subset));
        }
        faces.extend(reps.into_iter().map(|rep| Face { rep, subset }));
    }
    faces
}

/// Coset containment: does `big` contain `small` as a set of elements?
pub fn face_contains(group: &Group, big: Face, small: Face) -> bool {
    big.subset & small.subset == small.subset
        && coset_min_rep(group, small.rep, big.subset) == big.rep
}

/// The q-nearness test via the support criterion.
pub fn q_near(group: &Group, u: ElemId, v: ElemId, q: usize) -> Result<bool> {
    let n = group.rank();
    if q >= n {
        return Err(Error::QOutOfRange { given: q, max: n - 1 });
    }
    if u == v {
        return Ok(true);
    }
    let d = group.mul(group.inv(u), v);
    Ok(group.support_size(d) < n - q)
}

/// Oracle version of q-nearness: count the complex vertices the two chambers
/// share. Vertices of chamber w are the cosets w W_{S - {s}}.
pub fn shared_vertex_count(group: &Group, u: ElemId, v: ElemId) -> usize {
    let n = group.rank();
    let full = (1u64 << n) - 1;
    (0..n as u8)
        .filter(|&s| {
            let subset = full & !(1 << s);
            coset_min_rep(group, u, subset) == coset_min_rep(group, v, subset)
        })
        .count()
}

/// The graph Gamma^q on chambers.
#[derive(Debug, Clone)]
pub struct QGraph {
    q: usize,
    num_vertices: usize,
    /// Sorted list of edges (u, v) with u < v.
    edges: Vec<(ElemId, ElemId)>,
    /// Sorted adjacency lists.
    adjacency: Vec<Vec<ElemId>>,
}

impl QGraph {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(ElemId, ElemId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: ElemId) -> &[ElemId] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: ElemId, v: ElemId) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }
}

/// Builds Gamma^q: edges between distinct chambers whose difference has
/// support of size at most n-q-1.
pub fn build_q_graph(group: &Group, q: usize) -> Result<QGraph> {
    let n = group.rank();
    if q >= n {
        return Err(Error::QOutOfRange { given: q, max: n - 1 });
    }
    let threshold = n - q - 1;
    let order = group.order();
    // Elements with small support; multiplication by these sweeps out edges.
    let small: Vec<ElemId> = (1..order as ElemId)
        .filter(|&w| group.support_size(w) <= threshold)
        .collect();
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); order];
    for u in 0..order as ElemId {
        for &w in &small {
            let v = group.mul(u, w);
            adjacency[u as usize].push(v);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    for adj in &mut adjacency {
        adj.sort_unstable();
        adj.dedup();
    }
    Ok(QGraph {
        q,
        num_vertices: order,
        edges,
        adjacency,
    })
}

/// A 2-complex: a q-graph with a 2-cell glued on every 3- and 4-cycle.
#[derive(Debug, Clone)]
pub struct TwoComplex {
    graph: QGraph,
    /// Canonical vertex cycles of length 3 or 4, deduplicated up to rotation
    /// and reflection, sorted.
    cells: Vec<Vec<ElemId>>,
}

impl TwoComplex {
    pub fn graph(&self) -> &QGraph {
        &self.graph
    }

    pub fn cells(&self) -> &[Vec<ElemId>] {
        &self.cells
    }

    pub fn triangles(&self) -> impl Iterator<Item = &Vec<ElemId>> {
        self.cells.iter().filter(|c| c.len() == 3)
    }

    pub fn squares(&self) -> impl Iterator<Item = &Vec<ElemId>> {
        self.cells.iter().filter(|c| c.len() == 4)
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles().count()
    }

    pub fn num_squares(&self) -> usize {
        self.squares().count()
    }
}

/// Lexicographically least representation of a cycle up to rotation and
/// reflection.
fn canonical_cycle(cycle: &[ElemId]) -> Vec<ElemId> {
    let k = cycle.len();
    let mut best: Option<Vec<ElemId>> = None;
    for start in 0..k {
        for dir in [false, true] {
            let cand: Vec<ElemId> = (0..k)
                .map(|i| {
                    let idx = if dir {
                        (start + k - i % k) % k
                    } else {
                        (start + i) % k
                    };
                    cycle[idx]
                })
                .collect();
            if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Builds the 2-complex X_Gamma on Gamma^q with the given cell cap.
pub fn build_two_complex(group: &Group, q: usize, cell_cap: usize) -> Result<TwoComplex> {
    let graph = build_q_graph(group, q)?;
    let mut cells: BTreeSet<Vec<ElemId>> = BTreeSet::new();

    // Triangles: edge plus a common neighbor above both endpoints.
    for &(u, v) in graph.edges() {
        for &z in graph.neighbors(u) {
            if z > v && graph.has_edge(v, z) {
                cells.insert(canonical_cycle(&[u, v, z]));
                if cells.len() > cell_cap {
                    return Err(Error::CapExceeded {
                        what: "2-cells of the q-graph".into(),
                        cap: cell_cap,
                    });
                }
            }
        }
    }

    // 4-cycles u - a - v - b - u over common neighbor pairs of (u, v).
    let order = group.order() as ElemId;
    for u in 0..order {
        for v in (u + 1)..order {
            let nu = graph.neighbors(u);
            let nv = graph.neighbors(v);
            let mut common = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        common.push(nu[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            for a in 0..common.len() {
                for b in 0..a {
                    cells.insert(canonical_cycle(&[u, common[b], v, common[a]]));
                    if cells.len() > cell_cap {
                        return Err(Error::CapExceeded {
                            what: "2-cells of the q-graph".into(),
                            cap: cell_cap,
                        });
                    }
                }
            }
        }
    }

    Ok(TwoComplex {
        graph,
        cells: cells.into_iter().collect(),
    })
}

/// The rank-2 faces of the W-permutahedron: each coset w W_{s,t} paired with
/// its boundary gallery w, ws, wst, ... of length 2 m(s,t).
pub fn permutahedron_two_faces(group: &Group) -> Vec<(Face, Vec<ElemId>)> {
    let n = group.rank();
    let mut out = Vec::new();
    for s in 0..n as u8 {
        for t in (s + 1)..n as u8 {
            let subset = (1u64 << s) | (1u64 << t);
            let mut reps = BTreeSet::new();
            for e in 0..group.order() as ElemId {
                reps.insert(coset_min_rep(group, e, subset));
            }
            for rep in reps {
                let m = group
                    .system()
                    .bond(s as usize, t as usize)
                    .expect("finite bond");
                let mut cycle = Vec::with_capacity(2 * m as usize);
                let mut cur = rep;
                for step in 0..2 * m {
                    cycle.push(cur);
                    let letter = if step % 2 == 0 { s } else { t };
                    cur = group.right_mul(cur, letter);
                }
                debug_assert_eq!(cur, rep, "boundary gallery closes after 2m steps");
                out.push((Face { rep, subset }, cycle));
            }
        }
    }
    out
}

/// 4-cycle census at q = n-2: one square per coset of each commuting pair.
pub fn expected_square_count(group: &Group) -> usize {
    let n = group.rank();
    let mut total = 0;
    for s in 0..n {
        for t in (s + 1)..n {
            if group.system().bond(s, t) == Some(2) {
                total += group.order() / 4;
            }
        }
    }
    total
}

/// DOT rendering of a q-graph: node labels are canonical words, edge
/// attributes carry the support of u^-1 v.
pub fn graph_to_dot(group: &Group, graph: &QGraph) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "graph gamma_q{} {{", graph.q());
    let _ = writeln!(out, "  // {} vertices, {} edges", graph.num_vertices(), graph.num_edges());
    for v in 0..graph.num_vertices() as ElemId {
        let _ = writeln!(out, "  {} [label=\"{}\"];", v, group.word_of(v));
    }
    for &(u, v) in graph.edges() {
        let d = group.mul(group.inv(u), v);
        let support = group
            .word_of(d)
            .support()
            .iter()
            .map(|l| format!("s{}", l + 1))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "  {} -- {} [support=\"{}\"];", u, v, support);
    }
    out.push_str("}\n");
    out
}

/// Per-vertex map from a chamber to the set of complex vertices it contains,
/// used by tests to cross-check the support criterion.
pub fn chamber_vertex_sets(group: &Group) -> HashMap<ElemId, Vec<Face>> {
    let n = group.rank();
    let full = (1u64 << n) - 1;
    let mut map = HashMap::new();
    for e in 0..group.order() as ElemId {
        let faces = (0..n as u8)
            .map(|s| {
                let subset = full & !(1 << s);
                Face {
                    rep: coset_min_rep(group, e, subset),
                    subset,
                }
            })
            .collect();
        map.insert(e, faces);
    }
    map
}
