//! The named verification suites behind `parabolica verify`.
//!
//! Each suite produces a deterministic sequence of report records; all
//! randomness is seeded, so identical configurations yield byte-identical
//! reports.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parabolica_core::arrangements::{
    build_k_parabolic, build_reference_arrangement, compare_arrangements,
    enumerate_parabolics, intersection_lattice, Comparison, ReferenceFamily,
};
use parabolica_core::classify::IrreducibleType;
use parabolica_core::complex::build_two_complex;
use parabolica_core::coxeter::{CoxeterSystem, Group};
use parabolica_core::geometry::Realization;
use parabolica_core::homotopy::{
    contract_relator_grid, decide_homotopic, h1_of_complex, level_project, loop_of_word,
    normalize_to_gallery, pi1_presentation, pi1_triviality_probe, verify_grid, word_of_loop,
    HomotopyDecision, ProbeOutcome, QLoop,
};
use parabolica_core::relaxed::{relator_word, schreier_kernel_presentation, RelaxedSystem};
use parabolica_core::word::Word;

use crate::report::{run_check, skipped, Report, Status};

pub const SUITES: [&str; 5] = [
    "galois",
    "arrangement-equalities",
    "theorem-3-3",
    "theorem-4-1",
    "k4-triviality",
];

const SEED: u64 = 0x5eed_cafe;

#[derive(Clone, Copy)]
pub struct Caps {
    pub cell_cap: usize,
    pub coset_cap: usize,
}

pub fn run_suite(
    name: &str,
    sys: &Arc<CoxeterSystem>,
    k: Option<usize>,
    caps: Caps,
) -> anyhow::Result<Report> {
    let mut report = Report::default();
    match name {
        "galois" => galois_suite(sys, &mut report)?,
        "arrangement-equalities" => arrangement_suite(sys, &mut report)?,
        "theorem-3-3" => theorem_3_3_suite(sys, caps, &mut report)?,
        "theorem-4-1" => theorem_4_1_suite(sys, caps, &mut report)?,
        "k4-triviality" => k4_suite(sys, k.unwrap_or(4), caps, &mut report)?,
        other => anyhow::bail!("unknown suite `{other}` (expected one of {SUITES:?} or `all`)"),
    }
    Ok(report)
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn build_realization(sys: &Arc<CoxeterSystem>) -> anyhow::Result<Realization> {
    Ok(Realization::new(Arc::new(Group::new(Arc::clone(sys))?)))
}

// ---------------------------------------------------------------------------

fn galois_suite(sys: &Arc<CoxeterSystem>, report: &mut Report) -> anyhow::Result<()> {
    let real = build_realization(sys)?;
    let label = sys.describe();
    let n = real.rank();

    report.push(run_check(
        "galois/gal-fix-roundtrip",
        &label,
        || {
            let mut total = 0;
            let mut failures = 0;
            for rank in 1..=n {
                for p in enumerate_parabolics(&real, rank).unwrap() {
                    total += 1;
                    let fix = real.fix_subspace(p.reflections());
                    let (_, subgroup) = real.galois_group(&fix);
                    if subgroup != p.elements() {
                        failures += 1;
                    }
                }
            }
            (
                format!("0 failures over {total} parabolics"),
                format!("{failures} failures over {total} parabolics"),
                status(failures == 0),
            )
        },
    ));

    report.push(run_check("galois/fix-gal-roundtrip", &label, || {
        let coxeter = build_k_parabolic(&real, 2).unwrap();
        let lattice = intersection_lattice(&coxeter).unwrap();
        let mut failures = 0;
        for x in lattice.elements() {
            let (_, subgroup) = real.galois_group(x);
            if &real.fix_subspace(&subgroup) != x {
                failures += 1;
            }
        }
        (
            format!("0 failures over {} lattice elements", lattice.len()),
            format!("{failures} failures over {} lattice elements", lattice.len()),
            status(failures == 0),
        )
    }));

    Ok(())
}

// ---------------------------------------------------------------------------

fn arrangement_suite(sys: &Arc<CoxeterSystem>, report: &mut Report) -> anyhow::Result<()> {
    let label = sys.describe();
    let class = sys.classification();
    if class.components.len() != 1 {
        report.push(skipped(
            "arrangements/coordinate-family",
            &label,
            "reducible system has no classical coordinate family",
        ));
        return Ok(());
    }
    let family = class.components[0].1.clone();
    let real = build_realization(sys)?;
    match family {
        IrreducibleType::A(_) => {
            let chart = real.coordinate_chart()?;
            report.push(run_check("arrangements/k-equal-k3", &label, || {
                let w = build_k_parabolic(&real, 3).unwrap();
                let keq =
                    build_reference_arrangement(&chart, ReferenceFamily::KEqual { k: 3 }).unwrap();
                let cmp = compare_arrangements(&w, &keq).unwrap();
                (
                    "equal".into(),
                    comparison_summary(&cmp),
                    status(cmp == Comparison::Equal),
                )
            }));
        }
        IrreducibleType::B(nn) => {
            let chart = real.coordinate_chart()?;
            report.push(run_check("arrangements/b-family-k3", &label, || {
                let w = build_k_parabolic(&real, 3).unwrap();
                let b = build_reference_arrangement(
                    &chart,
                    ReferenceFamily::BChains { k: 3, h: 2 },
                )
                .unwrap();
                let cmp = compare_arrangements(&w, &b).unwrap();
                (
                    format!("equal (B({nn},3,2))"),
                    comparison_summary(&cmp),
                    status(cmp == Comparison::Equal),
                )
            }));
        }
        IrreducibleType::D(_) => {
            let chart = real.coordinate_chart()?;
            report.push(run_check("arrangements/d-family-k3", &label, || {
                let w = build_k_parabolic(&real, 3).unwrap();
                let d =
                    build_reference_arrangement(&chart, ReferenceFamily::DChains { k: 3 }).unwrap();
                let cmp = compare_arrangements(&w, &d).unwrap();
                (
                    "equal".into(),
                    comparison_summary(&cmp),
                    status(cmp == Comparison::Equal),
                )
            }));
            report.push(run_check("arrangements/d-family-k4-differs", &label, || {
                let w = build_k_parabolic(&real, 4).unwrap();
                let d =
                    build_reference_arrangement(&chart, ReferenceFamily::DChains { k: 4 }).unwrap();
                let cmp = compare_arrangements(&w, &d).unwrap();
                let ok = match &cmp {
                    Comparison::Differs { witness, in_left } => {
                        // The expected witness is a triple coordinate
                        // vanishing x_i = x_j = x_k = 0.
                        let m = chart.ambient_coords();
                        let axes: Vec<_> = (0..m)
                            .map(|omit| {
                                let rows: Vec<_> = (0..m)
                                    .filter(|&i| i != omit)
                                    .map(|i| chart.zero_row(i))
                                    .collect();
                                chart.subspace_from_equations(&rows)
                            })
                            .collect();
                        *in_left && axes.contains(witness)
                    }
                    Comparison::Equal => false,
                };
                (
                    "differs with witness x_i=x_j=x_k=0".into(),
                    comparison_summary(&cmp),
                    status(ok),
                )
            }));
        }
        other => {
            report.push(skipped(
                "arrangements/coordinate-family",
                &label,
                &format!("type {other} has no classical coordinate family"),
            ));
        }
    }
    Ok(())
}

fn comparison_summary(cmp: &Comparison) -> String {
    match cmp {
        Comparison::Equal => "equal".into(),
        Comparison::Differs { witness, in_left } => format!(
            "differs (codim-{} witness in the {} arrangement)",
            witness.codim(),
            if *in_left { "left" } else { "right" }
        ),
    }
}

// ---------------------------------------------------------------------------

fn theorem_3_3_suite(
    sys: &Arc<CoxeterSystem>,
    caps: Caps,
    report: &mut Report,
) -> anyhow::Result<()> {
    let label = sys.describe();
    if sys.rank() != 3 {
        report.push(skipped(
            "theorem-3-3/dual-oracle-betti",
            &label,
            "the lines-through-origin oracle needs rank 3",
        ));
        return Ok(());
    }
    let real = build_realization(sys)?;
    let group = real.group().clone();
    report.push(run_check("theorem-3-3/dual-oracle-betti", &label, || {
        let lines = build_k_parabolic(&real, 3).unwrap().len();
        let x = match build_two_complex(&group, 1, caps.cell_cap) {
            Ok(x) => x,
            Err(e) => return ("b1 = 2L - 1".into(), format!("error: {e}"), Status::Fail),
        };
        let h1 = h1_of_complex(&x).unwrap();
        let ok = h1.free_rank == 2 * lines - 1 && h1.torsion.is_empty();
        (
            format!("b1 = 2*{lines} - 1 = {}, no torsion", 2 * lines - 1),
            format!(
                "b1 = {}, torsion = {:?}",
                h1.free_rank,
                h1.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()
            ),
            status(ok),
        )
    }));
    Ok(())
}

// ---------------------------------------------------------------------------

fn theorem_4_1_suite(
    sys: &Arc<CoxeterSystem>,
    caps: Caps,
    report: &mut Report,
) -> anyhow::Result<()> {
    let label = sys.describe();
    if sys.rank() < 2 {
        report.push(skipped(
            "theorem-4-1/kernel-abelianization",
            &label,
            "the relaxed group needs rank >= 2",
        ));
        return Ok(());
    }
    let group = Arc::new(Group::new(Arc::clone(sys))?);
    let rsys = RelaxedSystem::relax(Arc::clone(&group));

    report.push(run_check("theorem-4-1/kernel-abelianization", &label, || {
        let sp = schreier_kernel_presentation(&rsys).unwrap();
        let kernel_ab = sp.presentation.abelianization();
        let x = match build_two_complex(&group, group.rank() - 2, caps.cell_cap) {
            Ok(x) => x,
            Err(e) => return ("match".into(), format!("error: {e}"), Status::Fail),
        };
        let h1 = h1_of_complex(&x).unwrap();
        let ok = kernel_ab.free_rank == h1.free_rank && kernel_ab.torsion == h1.torsion;
        (
            format!("free rank {} and equal torsion", h1.free_rank),
            format!(
                "kernel ab = Z^{} (+{} torsion), complex H1 = Z^{} (+{} torsion)",
                kernel_ab.free_rank,
                kernel_ab.torsion.len(),
                h1.free_rank,
                h1.torsion.len()
            ),
            status(ok),
        )
    }));

    report.push(run_check("theorem-4-1/f-after-g-identity", &label, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut failures = 0;
        for _ in 0..100 {
            let w = random_kernel_word(&mut rng, &group, 30);
            let l = loop_of_word(&group, &w).unwrap();
            let back = word_of_loop(&group, &l).unwrap();
            if !rsys.equal_in_relaxed(&back, &w).unwrap() {
                failures += 1;
            }
        }
        (
            "100/100 round trips equal in W'".into(),
            format!("{}/100", 100 - failures),
            status(failures == 0),
        )
    }));

    report.push(run_check("theorem-4-1/g-after-f-homotopic", &label, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let mut failures = 0;
        let mut done = 0;
        while done < 100 {
            let w = random_kernel_word(&mut rng, &group, 14);
            let Ok(l) = loop_of_word(&group, &w) else {
                continue;
            };
            let stretched = random_stretching(&mut rng, &group, &l, 20);
            let round = loop_of_word(&group, &word_of_loop(&group, &stretched).unwrap()).unwrap();
            match decide_homotopic(&rsys, &round, &stretched).unwrap() {
                HomotopyDecision::Equivalent { grid, .. } => {
                    if !verify_grid(&group, &grid).is_pass() {
                        failures += 1;
                    }
                }
                HomotopyDecision::NotEquivalent { .. } => failures += 1,
            }
            done += 1;
        }
        (
            "100/100 loops homotopic to g(f(loop)) with valid grids".into(),
            format!("{}/100", 100 - failures),
            status(failures == 0),
        )
    }));

    Ok(())
}

fn random_kernel_word(rng: &mut impl Rng, group: &Group, max_len: usize) -> Word {
    let n = group.rank();
    let heavy: Vec<(u8, u8, u32)> = (0..n as u8)
        .flat_map(|s| (0..n as u8).map(move |t| (s, t)))
        .filter(|&(s, t)| s < t)
        .filter_map(|(s, t)| {
            group
                .system()
                .bond(s as usize, t as usize)
                .filter(|&m| m >= 3)
                .map(|m| (s, t, m))
        })
        .collect();
    let mut word = Word::empty();
    if heavy.is_empty() {
        return word;
    }
    loop {
        let (s, t, m) = heavy[rng.gen_range(0..heavy.len())];
        let ulen = rng.gen_range(0..=3);
        let u = Word((0..ulen).map(|_| rng.gen_range(0..n as u8)).collect());
        let conj = u.concat(&relator_word(s, t, m)).concat(&u.reversed());
        if !word.is_empty() && word.len() + conj.len() > max_len {
            return word;
        }
        word = word.concat(&conj);
        if rng.gen_bool(0.4) {
            return word;
        }
    }
}

fn random_stretching(rng: &mut impl Rng, group: &Group, l: &QLoop, max_len: usize) -> QLoop {
    let mut chambers = l.chambers().to_vec();
    while chambers.len() < max_len && rng.gen_bool(0.5) {
        let pos = rng.gen_range(0..chambers.len());
        chambers.insert(pos, chambers[pos]);
    }
    QLoop::new(group, l.q(), chambers).expect("stretching preserves validity")
}

// ---------------------------------------------------------------------------

fn k4_suite(
    sys: &Arc<CoxeterSystem>,
    k: usize,
    caps: Caps,
    report: &mut Report,
) -> anyhow::Result<()> {
    let label = sys.describe();
    let n = sys.rank();
    if k <= 3 || k > n + 1 {
        report.push(skipped(
            "k4-triviality/contraction-grids",
            &label,
            &format!("needs 3 < k <= n+1, got k = {k} at rank {n}"),
        ));
        return Ok(());
    }
    let group = Arc::new(Group::new(Arc::clone(sys))?);
    let q = n + 1 - k;
    let inputs = format!("{label}, k = {k}, q = {q}");

    report.push(run_check("k4-triviality/contraction-grids", &inputs, || {
        let mut total = 0;
        let mut failures = 0;
        let conjugators: Vec<Word> = std::iter::once(Word::empty())
            .chain((0..n as u8).map(Word::single))
            .chain((0..n as u8).map(|a| Word(vec![a, (a + 1) % n as u8])))
            .collect();
        for s in 0..n as u8 {
            for t in (s + 1)..n as u8 {
                let m = group.system().bond(s as usize, t as usize).unwrap();
                if m < 3 {
                    continue;
                }
                for u in &conjugators {
                    total += 1;
                    match contract_relator_grid(&group, k, u, s, t) {
                        Ok(grid) => {
                            if !verify_grid(&group, &grid).is_pass() {
                                failures += 1;
                            }
                        }
                        Err(_) => failures += 1,
                    }
                }
            }
        }
        (
            format!("{total}/{total} relator grids valid"),
            format!("{}/{total}", total - failures),
            status(failures == 0),
        )
    }));

    report.push(run_check("k4-triviality/gallery-refinement", &inputs, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
        let mut failures = 0;
        for _ in 0..100 {
            let l = random_q_loop(&mut rng, &group, q, 8);
            match normalize_to_gallery(&group, &l, k) {
                Ok((refined, grid)) => {
                    let gallery_ok = refined
                        .chambers()
                        .windows(2)
                        .all(|p| group.length(group.mul(group.inv(p[0]), p[1])) <= 1);
                    if !gallery_ok || !verify_grid(&group, &grid).is_pass() {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
        (
            "100/100 refinements valid".into(),
            format!("{}/100", 100 - failures),
            status(failures == 0),
        )
    }));

    let probe_record = run_check("k4-triviality/pi1-probe", &inputs, || {
        let x = match build_two_complex(&group, q, caps.cell_cap) {
            Ok(x) => x,
            Err(e) => return ("trivial".into(), format!("error: {e}"), Status::Fail),
        };
        let pi1 = match pi1_presentation(&x, 0) {
            Ok(p) => p,
            Err(e) => return ("trivial".into(), format!("error: {e}"), Status::Fail),
        };
        match pi1_triviality_probe(&pi1.presentation, caps.coset_cap) {
            ProbeOutcome::Trivial => ("trivial".into(), "trivial".into(), Status::Pass),
            ProbeOutcome::Nontrivial(e) => (
                "trivial".into(),
                format!("nontrivial: {e:?}"),
                Status::Fail,
            ),
            ProbeOutcome::Inconclusive { reason } => (
                "trivial".into(),
                format!("inconclusive: {reason}"),
                Status::Inconclusive,
            ),
        }
    });
    report.push(probe_record);

    // The composite check from the level maps: projecting a braid relator
    // loop down and contracting it.
    report.push(run_check("k4-triviality/level-projection", &inputs, || {
        let mut ok = true;
        for s in 0..n as u8 {
            for t in (s + 1)..n as u8 {
                let m = group.system().bond(s as usize, t as usize).unwrap();
                if m < 3 {
                    continue;
                }
                let top = loop_of_word(&group, &relator_word(s, t, m)).unwrap();
                let projected = level_project(&group, &top, k).unwrap();
                if projected.q() != q {
                    ok = false;
                }
            }
        }
        (
            "all braid loops project to valid q-loops".into(),
            if ok { "valid" } else { "invalid" }.into(),
            status(ok),
        )
    }));

    Ok(())
}

/// A random q-loop built as a closed lazy walk projected down from level
/// n-2, with occasional q-level jumps inside small-support cosets.
fn random_q_loop(rng: &mut impl Rng, group: &Group, q: usize, max_half: usize) -> QLoop {
    let n = group.rank();
    let threshold = n - q - 1;
    let mut out = vec![Group::IDENTITY];
    let mut cur = Group::IDENTITY;
    let steps = rng.gen_range(0..=max_half);
    let mut trail: Vec<parabolica_core::coxeter::ElemId> = Vec::new();
    for _ in 0..steps {
        // A jump with support at most the threshold.
        let size = rng.gen_range(1..=threshold.max(1));
        let letters: Vec<u8> = (0..size).map(|_| rng.gen_range(0..n as u8)).collect();
        let mut jump = Group::IDENTITY;
        for &l in &letters {
            jump = group.right_mul(jump, l);
        }
        if group.support_size(jump) > threshold {
            continue;
        }
        trail.push(jump);
        cur = group.mul(cur, jump);
        out.push(cur);
    }
    // Walk back to close the loop.
    for jump in trail.iter().rev() {
        cur = group.mul(cur, group.inv(*jump));
        out.push(cur);
    }
    debug_assert_eq!(cur, Group::IDENTITY);
    QLoop::new(group, q, out).expect("constructed loop is q-valid")
}

// ---------------------------------------------------------------------------

/// Runs the requested suites ("all" expands in canonical order), optionally
/// in parallel, merging reports in suite order.
pub fn run_suites(
    names: &[String],
    sys: &Arc<CoxeterSystem>,
    k: Option<usize>,
    caps: Caps,
    parallel: bool,
) -> anyhow::Result<Report> {
    let expanded: Vec<String> = if names.iter().any(|n| n == "all") {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    let reports: Vec<anyhow::Result<Report>> = if parallel {
        use rayon::prelude::*;
        expanded
            .par_iter()
            .map(|name| run_suite(name, sys, k, caps))
            .collect()
    } else {
        expanded
            .iter()
            .map(|name| run_suite(name, sys, k, caps))
            .collect()
    };
    let mut merged = Report::default();
    for r in reports {
        merged.merge(r?);
    }
    Ok(merged)
}
