//! Parabolic subgroups and the subspace arrangements they cut out.
//!
//! A parabolic subgroup is a conjugate <w I w^-1> of a standard parabolic;
//! the k-parabolic arrangement collects Fix(G) over all irreducible
//! parabolics G of rank k-1. Reference coordinate families (k-equal, the
//! +-chain family of type D, and its type B extension by coordinate
//! subspaces) are built from explicit equations through a coordinate chart
//! so the two constructions can be compared subspace-for-subspace.

use std::collections::{BTreeMap, BTreeSet};

use crate::classify::{classify, CoxeterMatrix};
use crate::coxeter::ElemId;
use crate::error::{Error, Result};
use crate::geometry::{ChartFamily, CoordinateChart, Realization, Subspace};

/// A parabolic subgroup G = <w I w^-1> with its simple system and type data.
#[derive(Debug, Clone)]
pub struct ParabolicSubgroup {
    /// Sorted element ids of the reflections in G; the canonical key.
    reflections: Vec<ElemId>,
    /// All elements of G, sorted.
    elements: Vec<ElemId>,
    rank: usize,
    /// Positive-root indices of the simple system of the root subsystem.
    simple_roots: Vec<usize>,
    /// Induced Coxeter matrix on the simple system.
    diagram: CoxeterMatrix,
    type_label: String,
    irreducible: bool,
    /// One witness (w, I) with G = <w I w^-1>.
    witness: (ElemId, Vec<u8>),
}

impl ParabolicSubgroup {
    pub fn reflections(&self) -> &[ElemId] {
        &self.reflections
    }

    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn simple_root_indices(&self) -> &[usize] {
        &self.simple_roots
    }

    pub fn diagram(&self) -> &CoxeterMatrix {
        &self.diagram
    }

    pub fn type_label(&self) -> &str {
        &self.type_label
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn witness(&self) -> (ElemId, &[u8]) {
        (self.witness.0, &self.witness.1)
    }
}

/// All parabolic subgroups of the given rank, deduplicated by reflection set
/// and flagged irreducible or not. Deterministic order (by reflection set).
pub fn enumerate_parabolics(real: &Realization, rank: usize) -> Result<Vec<ParabolicSubgroup>> {
    let group = real.group();
    let n = group.rank();
    if rank < 1 || rank > n {
        return Err(Error::RankOutOfRange {
            given: rank,
            lo: 1,
            hi: n,
        });
    }

    // Reflection sets of the standard parabolics W_I, |I| = rank.
    let mut standards: Vec<(Vec<u8>, Vec<ElemId>)> = Vec::new();
    for subset in subsets_of_size(n, rank) {
        let gens: Vec<ElemId> = subset.iter().map(|&s| group.right_mul(0, s)).collect();
        let elements = group.subgroup_closure(&gens);
        let refl: Vec<ElemId> = elements
            .iter()
            .copied()
            .filter(|&e| real.is_reflection(e))
            .collect();
        standards.push((subset, refl));
    }

    // Conjugate every standard parabolic by every group element; dedupe by
    // the sorted reflection set.
    let mut found: BTreeMap<Vec<ElemId>, (ElemId, Vec<u8>)> = BTreeMap::new();
    for (subset, refl) in &standards {
        for w in 0..group.order() as ElemId {
            let mut conj: Vec<ElemId> = refl.iter().map(|&t| group.conjugate(w, t)).collect();
            conj.sort_unstable();
            found.entry(conj).or_insert_with(|| (w, subset.clone()));
        }
    }

    found
        .into_iter()
        .map(|(refl, witness)| build_parabolic(real, refl, rank, witness))
        .collect()
}

fn build_parabolic(
    real: &Realization,
    reflections: Vec<ElemId>,
    rank: usize,
    witness: (ElemId, Vec<u8>),
) -> Result<ParabolicSubgroup> {
    let group = real.group();
    let elements = group.subgroup_closure(&reflections);

    // Positive roots of the subsystem, and its simple system: beta is simple
    // exactly when s_beta keeps every other positive subsystem root positive
    // (the indecomposable elements of the inherited positive system).
    let root_indices: Vec<usize> = reflections
        .iter()
        .map(|&t| real.root_of_reflection(t).expect("reflection has a root"))
        .collect();
    let coords: Vec<_> = root_indices
        .iter()
        .map(|&i| real.roots().positive_roots()[i].clone())
        .collect();
    let simple_roots: Vec<usize> = root_indices
        .iter()
        .enumerate()
        .filter(|&(local, &idx)| {
            let m = real.element_matrix(real.reflection_of_root(idx));
            coords.iter().enumerate().all(|(other, gamma)| {
                other == local || is_positive_vector(&m.mul_vec(gamma))
            })
        })
        .map(|(_, &idx)| idx)
        .collect();
    debug_assert_eq!(simple_roots.len(), rank, "simple system size equals rank");

    // Induced Coxeter matrix: m(s,t) = order of the product of the two
    // simple reflections.
    let r = simple_roots.len();
    let mut entries = vec![0u32; r * r];
    for a in 0..r {
        for b in 0..r {
            let sa = real.reflection_of_root(simple_roots[a]);
            let sb = real.reflection_of_root(simple_roots[b]);
            entries[a * r + b] = group.element_order(group.mul(sa, sb)) as u32;
        }
    }
    let diagram = CoxeterMatrix::new(r, entries)?;
    let class = classify(&diagram);
    let irreducible = diagram.is_connected() && class.is_finite();

    Ok(ParabolicSubgroup {
        reflections,
        elements,
        rank,
        simple_roots,
        diagram,
        type_label: class.label(),
        irreducible,
        witness,
    })
}

/// Sign-coherent root vectors are positive iff their first nonzero
/// coordinate is.
fn is_positive_vector(v: &[crate::field::Scalar]) -> bool {
    for c in v {
        match c.sign() {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => continue,
        }
    }
    false
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A subspace arrangement: a deduplicated antichain of subspaces.
#[derive(Debug, Clone)]
pub struct Arrangement {
    label: String,
    ambient: usize,
    subspaces: Vec<Subspace>,
    /// Type label of an originating parabolic, when known, per subspace.
    source_types: Vec<Option<String>>,
}

impl Arrangement {
    /// Sorts, deduplicates and validates the antichain condition.
    pub fn new(
        label: String,
        ambient: usize,
        subspaces: Vec<(Subspace, Option<String>)>,
    ) -> Result<Arrangement> {
        let mut dedup: BTreeMap<Subspace, Option<String>> = BTreeMap::new();
        for (s, t) in subspaces {
            dedup.entry(s).or_insert(t);
        }
        let subspaces: Vec<Subspace> = dedup.keys().cloned().collect();
        let source_types: Vec<Option<String>> = dedup.values().cloned().collect();
        for (i, a) in subspaces.iter().enumerate() {
            for (j, b) in subspaces.iter().enumerate() {
                if i != j && a.contains(b) {
                    return Err(Error::BadParameter {
                        name: "arrangement",
                        given: label,
                        reason: "proper containment among subspaces".into(),
                    });
                }
            }
        }
        Ok(Arrangement {
            label,
            ambient,
            subspaces,
            source_types,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn source_type(&self, i: usize) -> Option<&str> {
        self.source_types[i].as_deref()
    }

    pub fn contains_subspace(&self, s: &Subspace) -> bool {
        self.subspaces.binary_search(s).is_ok()
    }
}

/// The k-parabolic arrangement: Fix over irreducible rank-(k-1) parabolics.
pub fn build_k_parabolic(real: &Realization, k: usize) -> Result<Arrangement> {
    let n = real.rank();
    if k < 2 || k > n + 1 {
        return Err(Error::KOutOfRange {
            given: k,
            lo: 2,
            hi: n + 1,
        });
    }
    if k == n + 1 && !real.group().system().classification().is_irreducible() {
        return Err(Error::BadParameter {
            name: "k",
            given: k.to_string(),
            reason:
                "k = n + 1 needs an irreducible system (otherwise no irreducible rank-n parabolic exists)"
                    .into(),
        });
    }
    let parabolics = enumerate_parabolics(real, k - 1)?;
    let mut subspaces = Vec::new();
    for p in parabolics.iter().filter(|p| p.is_irreducible()) {
        let fix = real.fix_subspace(p.reflections());
        debug_assert_eq!(fix.codim(), k - 1, "fixed space has codimension k-1");
        subspaces.push((fix, Some(p.type_label().to_string())));
    }
    Arrangement::new(
        format!("{}-parabolic(k={k})", real.group().system().describe()),
        n,
        subspaces,
    )
}

/// Fix over irreducible parabolics of a given rank whose type is in the
/// allowed list (the type-filtered reformulation of the coordinate families).
pub fn build_parabolic_by_type(
    real: &Realization,
    rank: usize,
    allowed_types: &[&str],
) -> Result<Arrangement> {
    let parabolics = enumerate_parabolics(real, rank)?;
    let mut subspaces = Vec::new();
    for p in parabolics
        .iter()
        .filter(|p| p.is_irreducible() && allowed_types.contains(&p.type_label()))
    {
        let fix = real.fix_subspace(p.reflections());
        subspaces.push((fix, Some(p.type_label().to_string())));
    }
    Arrangement::new(
        format!(
            "{} rank-{rank} parabolics of type {}",
            real.group().system().describe(),
            allowed_types.join("|")
        ),
        real.rank(),
        subspaces,
    )
}

/// The classical coordinate families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceFamily {
    /// x_{i1} = ... = x_{ik} over k-subsets (type A chart; essentialized).
    KEqual { k: usize },
    /// +-x_{i1} = ... = +-x_{ik} over k-subsets and sign patterns (type B/D chart).
    DChains { k: usize },
    /// DChains plus x_{i1} = ... = x_{ih} = 0 over h-subsets (type B/D chart).
    BChains { k: usize, h: usize },
}

/// Builds a reference arrangement from explicit coordinate equations.
pub fn build_reference_arrangement(
    chart: &CoordinateChart,
    family: ReferenceFamily,
) -> Result<Arrangement> {
    let coords = chart.ambient_coords();
    let check_k = |k: usize| -> Result<()> {
        if k < 2 || k > coords {
            Err(Error::KOutOfRange {
                given: k,
                lo: 2,
                hi: coords,
            })
        } else {
            Ok(())
        }
    };
    let mut subspaces: Vec<(Subspace, Option<String>)> = Vec::new();
    let label;
    match family {
        ReferenceFamily::KEqual { k } => {
            if chart.family() != ChartFamily::TypeA {
                return Err(Error::BadParameter {
                    name: "family",
                    given: "k-equal".into(),
                    reason: "the k-equal family needs a type A chart".into(),
                });
            }
            check_k(k)?;
            label = format!("k-equal({coords},{k})");
            for subset in subsets_of_size(coords, k) {
                let rows: Vec<_> = (1..k)
                    .map(|j| chart.equality_row(subset[0] as usize, subset[j] as usize, 1))
                    .collect();
                subspaces.push((chart.subspace_from_equations(&rows), None));
            }
        }
        ReferenceFamily::DChains { k } | ReferenceFamily::BChains { k, .. } => {
            if !matches!(chart.family(), ChartFamily::TypeB | ChartFamily::TypeD) {
                return Err(Error::BadParameter {
                    name: "family",
                    given: "sign-chain".into(),
                    reason: "the +-chain families need a type B or D chart".into(),
                });
            }
            check_k(k)?;
            if let ReferenceFamily::BChains { h, .. } = family {
                if h >= k {
                    return Err(Error::BadParameter {
                        name: "h",
                        given: h.to_string(),
                        reason: "the zero-block size h must satisfy h < k".into(),
                    });
                }
                label = format!("B({coords},{k},{h})");
            } else {
                label = format!("D({coords},{k})");
            }
            for subset in subsets_of_size(coords, k) {
                // Sign patterns with the first coordinate fixed positive;
                // equal row spaces still collapse in dedup.
                for pattern in 0..(1u32 << (k - 1)) {
                    let rows: Vec<_> = (1..k)
                        .map(|j| {
                            let sign = if pattern >> (j - 1) & 1 == 1 { -1 } else { 1 };
                            chart.equality_row(subset[0] as usize, subset[j] as usize, sign)
                        })
                        .collect();
                    subspaces.push((chart.subspace_from_equations(&rows), None));
                }
            }
            if let ReferenceFamily::BChains { h, .. } = family {
                for subset in subsets_of_size(coords, h) {
                    let rows: Vec<_> = subset.iter().map(|&i| chart.zero_row(i as usize)).collect();
                    subspaces.push((chart.subspace_from_equations(&rows), None));
                }
            }
        }
    }
    let rank = chart.rank();
    Arrangement::new(label, rank, subspaces)
}

/// Outcome of a set comparison of two arrangements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// A subspace lying in exactly one of the two arrangements.
    Differs { witness: Subspace, in_left: bool },
}

pub fn compare_arrangements(a: &Arrangement, b: &Arrangement) -> Result<Comparison> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: a.ambient_dim(),
            right: b.ambient_dim(),
        });
    }
    let sa: BTreeSet<&Subspace> = a.subspaces().iter().collect();
    let sb: BTreeSet<&Subspace> = b.subspaces().iter().collect();
    if let Some(&w) = sa.difference(&sb).next() {
        return Ok(Comparison::Differs {
            witness: w.clone(),
            in_left: true,
        });
    }
    if let Some(&w) = sb.difference(&sa).next() {
        return Ok(Comparison::Differs {
            witness: w.clone(),
            in_left: false,
        });
    }
    Ok(Comparison::Equal)
}

/// The intersection lattice: all intersections of arrangement members,
/// with the ambient space adjoined as bottom, ordered by reverse inclusion.
#[derive(Debug, Clone)]
pub struct IntersectionLattice {
    /// Element 0 is the ambient space; the rest are sorted canonically.
    elements: Vec<Subspace>,
    /// Cover pairs (i, j): i is covered by j in reverse-inclusion order.
    covers: Vec<(usize, usize)>,
}

impl IntersectionLattice {
    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Reverse-inclusion order: x <= y iff x contains y as a subspace.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[i].contains(&self.elements[j])
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(lo, _)| lo == 0)
            .map(|&(_, hi)| hi)
            .collect()
    }
}

pub fn intersection_lattice(arr: &Arrangement) -> Result<IntersectionLattice> {
    if arr.is_empty() {
        return Err(Error::BadParameter {
            name: "arrangement",
            given: arr.label().to_string(),
            reason: "intersection lattice of an empty arrangement".into(),
        });
    }
    let mut set: BTreeSet<Subspace> = arr.subspaces().iter().cloned().collect();
    // Closure under pairwise intersection.
    loop {
        let snapshot: Vec<Subspace> = set.iter().cloned().collect();
        let mut added = false;
        for i in 0..snapshot.len() {
            for j in 0..i {
                let meet = snapshot[i].intersect(&snapshot[j]);
                if set.insert(meet) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let field = arr.subspaces()[0].annihilator_rows()[0][0].field().clone();
    let ambient = Subspace::whole(&field, arr.ambient_dim());
    set.remove(&ambient);
    let mut elements = vec![ambient];
    elements.extend(set);

    // Covers from the order relation.
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = elements[i].contains(&elements[j]);
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i * n + j] {
                continue;
            }
            let intermediate =
                (0..n).any(|z| z != i && z != j && leq[i * n + z] && leq[z * n + j]);
            if !intermediate {
                covers.push((i, j));
            }
        }
    }
    covers.sort_unstable();
    Ok(IntersectionLattice { elements, covers })
}

/// Result of checking W-invariance of an arrangement.
#[derive(Debug, Clone)]
pub enum InvarianceCheck {
    Pass,
    Fail { element: ElemId, subspace: Subspace },
}

/// Verifies w . X lies in the arrangement for all (w, X); for |W| > 200 the
/// group elements are subsampled deterministically by stride.
pub fn orbit_invariance_check(real: &Realization, arr: &Arrangement) -> InvarianceCheck {
    let order = real.group().order();
    let stride = if order > 200 { order / 200 + 1 } else { 1 };
    for w in (0..order as u32).step_by(stride) {
        for x in arr.subspaces() {
            let image = real.transform_subspace(w, x);
            if !arr.contains_subspace(&image) {
                return InvarianceCheck::Fail {
                    element: w,
                    subspace: x.clone(),
                };
            }
        }
    }
    InvarianceCheck::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Group;
    use std::sync::Arc;

    fn realization(label: &str) -> Realization {
        Realization::new(Arc::new(Group::from_label(label).unwrap()))
    }

    #[test]
    fn rank1_parabolics_match_positive_roots() {
        let r = realization("A3");
        let ps = enumerate_parabolics(&r, 1).unwrap();
        assert_eq!(ps.len(), r.roots().num_positive());
        assert!(ps.iter().all(|p| p.is_irreducible() && p.order() == 2));
    }

    #[test]
    fn a3_rank2_irreducible_count() {
        let r = realization("A3");
        let ps = enumerate_parabolics(&r, 2).unwrap();
        let irr: Vec<_> = ps.iter().filter(|p| p.is_irreducible()).collect();
        // One per 3-subset of {1,2,3,4}.
        assert_eq!(irr.len(), 4);
        assert!(irr.iter().all(|p| p.type_label() == "A2"));
        // A3 also has reducible rank-2 parabolics (orthogonal pairs).
        assert!(ps.iter().any(|p| !p.is_irreducible()));
    }

    #[test]
    fn b3_rank2_irreducible_count_and_types() {
        let r = realization("B3");
        let ps = enumerate_parabolics(&r, 2).unwrap();
        let irr: Vec<_> = ps.iter().filter(|p| p.is_irreducible()).collect();
        assert_eq!(irr.len(), 7);
        let mut by_type: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &irr {
            *by_type.entry(p.type_label()).or_default() += 1;
        }
        assert_eq!(by_type.get("A2"), Some(&4));
        assert_eq!(by_type.get("B2"), Some(&3));
    }

    #[test]
    fn k_parabolic_a3() {
        let r = realization("A3");
        let h = build_k_parabolic(&r, 2).unwrap();
        assert_eq!(h.len(), 6); // the Coxeter arrangement
        assert!(h.subspaces().iter().all(|s| s.codim() == 1));
        let w33 = build_k_parabolic(&r, 3).unwrap();
        assert_eq!(w33.len(), 4);
        assert!(w33.subspaces().iter().all(|s| s.codim() == 2));
        let w34 = build_k_parabolic(&r, 4).unwrap();
        assert_eq!(w34.len(), 1);
        assert!(w34.subspaces()[0].is_origin());
    }

    #[test]
    fn k_equal_equals_k_parabolic_in_type_a() {
        let r = realization("A3");
        let chart = r.coordinate_chart().unwrap();
        let keq = build_reference_arrangement(&chart, ReferenceFamily::KEqual { k: 3 }).unwrap();
        assert_eq!(keq.len(), 4);
        let w33 = build_k_parabolic(&r, 3).unwrap();
        assert_eq!(compare_arrangements(&w33, &keq).unwrap(), Comparison::Equal);
    }

    #[test]
    fn chain_families_in_b3_chart() {
        let r = realization("B3");
        let chart = r.coordinate_chart().unwrap();
        let d = build_reference_arrangement(&chart, ReferenceFamily::DChains { k: 3 }).unwrap();
        assert_eq!(d.len(), 4);
        let b =
            build_reference_arrangement(&chart, ReferenceFamily::BChains { k: 3, h: 2 }).unwrap();
        assert_eq!(b.len(), 7);
        assert!(matches!(
            build_reference_arrangement(&chart, ReferenceFamily::BChains { k: 3, h: 3 }),
            Err(Error::BadParameter { .. })
        ));
    }

    #[test]
    fn b3_k_parabolic_is_b332() {
        let r = realization("B3");
        let chart = r.coordinate_chart().unwrap();
        let w = build_k_parabolic(&r, 3).unwrap();
        let b =
            build_reference_arrangement(&chart, ReferenceFamily::BChains { k: 3, h: 2 }).unwrap();
        assert_eq!(compare_arrangements(&w, &b).unwrap(), Comparison::Equal);
    }

    #[test]
    fn coxeter_lattice_of_a3_is_partition_lattice() {
        let r = realization("A3");
        let h = build_k_parabolic(&r, 2).unwrap();
        let lat = intersection_lattice(&h).unwrap();
        assert_eq!(lat.len(), 15);
        assert_eq!(lat.atoms().len(), 6);
    }

    #[test]
    fn w33_lattice_is_lines_plus_origin() {
        let r = realization("A3");
        let w33 = build_k_parabolic(&r, 3).unwrap();
        let lat = intersection_lattice(&w33).unwrap();
        // ambient + 4 lines + origin
        assert_eq!(lat.len(), 6);
        assert_eq!(lat.atoms().len(), 4);
    }

    #[test]
    fn single_hyperplane_lattice_is_a_chain() {
        let r = realization("A2");
        let arr = build_k_parabolic(&r, 2).unwrap();
        let single =
            Arrangement::new("one".into(), 2, vec![(arr.subspaces()[0].clone(), None)]).unwrap();
        let lat = intersection_lattice(&single).unwrap();
        assert_eq!(lat.len(), 2);
        assert_eq!(lat.covers(), &[(0, 1)]);
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a2 = build_k_parabolic(&realization("A2"), 2).unwrap();
        let a3 = build_k_parabolic(&realization("A3"), 2).unwrap();
        assert!(matches!(
            compare_arrangements(&a2, &a3),
            Err(Error::AmbientMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn orbit_invariance() {
        let r = realization("A3");
        let w33 = build_k_parabolic(&r, 3).unwrap();
        assert!(matches!(
            orbit_invariance_check(&r, &w33),
            InvarianceCheck::Pass
        ));
        // A generic hyperplane not in the Coxeter arrangement fails.
        let f = r.field().clone();
        let generic =
            Subspace::from_equations(&f, &[vec![f.integer(1), f.integer(3), f.integer(7)]], 3);
        let arr = Arrangement::new("generic".into(), 3, vec![(generic, None)]).unwrap();
        assert!(matches!(
            orbit_invariance_check(&r, &arr),
            InvarianceCheck::Fail { .. }
        ));
    }
}
