//! Homotopy-decision soundness against a brute-force move search, the
//! loop/word dictionary laws, and the dual-oracle Betti computations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};

use parabolica_core::arrangements::build_k_parabolic;
use parabolica_core::complex::{build_two_complex, DEFAULT_CELL_CAP};
use parabolica_core::coxeter::{ElemId, Group};
use parabolica_core::geometry::Realization;
use parabolica_core::homotopy::{
    apply_move, chain_of_word, decide_homotopic, h1_of_complex, loop_of_word, verify_grid,
    word_of_loop, HomotopyDecision, LoopMove, QLoop,
};
use parabolica_core::relaxed::RelaxedSystem;
use parabolica_core::word::Word;

fn group(label: &str) -> Arc<Group> {
    Arc::new(Group::from_label(label).unwrap())
}

/// All based lazy loops with at most `max_len` chambers.
fn enumerate_loops(group: &Group, max_len: usize) -> Vec<Vec<ElemId>> {
    let n = group.rank();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<ElemId>> = vec![vec![0]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        if chain.len() >= 2 && last == 0 {
            out.push(chain.clone());
        }
        if chain.len() < max_len {
            let mut next = chain.clone();
            next.push(last);
            stack.push(next);
            for s in 0..n as u8 {
                let mut next = chain.clone();
                next.push(group.right_mul(last, s));
                stack.push(next);
            }
        }
    }
    out.push(vec![0]);
    out
}

/// Every loop obtainable from `l` by one T1/T2/T3 move, within a length cap.
fn move_neighbors(group: &Group, l: &[ElemId], max_len: usize) -> Vec<Vec<ElemId>> {
    let n = group.rank();
    let mut out = Vec::new();
    let q = group.rank() - 2;
    let as_loop = |chambers: Vec<ElemId>| QLoop::new(group, q, chambers).ok();
    let Some(current) = as_loop(l.to_vec()) else {
        return out;
    };
    let mut push = |res: parabolica_core::error::Result<(QLoop, _)>| {
        if let Ok((next, _)) = res {
            if next.len() <= max_len {
                out.push(next.chambers().to_vec());
            }
        }
    };
    for pos in 0..l.len() {
        push(apply_move(group, &current, LoopMove::Stretch { pos }));
        push(apply_move(group, &current, LoopMove::Destretch { pos }));
        for letter in 0..n as u8 {
            push(apply_move(group, &current, LoopMove::InsertSquare { pos, letter }));
        }
        push(apply_move(group, &current, LoopMove::RemoveSquare { pos }));
        push(apply_move(group, &current, LoopMove::Exchange { pos }));
    }
    out
}

/// Partition of the bounded loop space into move-reachability components.
fn reachability_components(group: &Group, loops: &[Vec<ElemId>], max_len: usize) -> Vec<usize> {
    let index: BTreeMap<&Vec<ElemId>, usize> =
        loops.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut component = vec![usize::MAX; loops.len()];
    let mut next_component = 0;
    for start in 0..loops.len() {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = next_component;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for nb in move_neighbors(group, &loops[i], max_len) {
                if let Some(&j) = index.get(&nb) {
                    if component[j] == usize::MAX {
                        component[j] = next_component;
                        queue.push_back(j);
                    }
                }
            }
        }
        next_component += 1;
    }
    component
}

/// Homotopy decision agrees with brute-force T1-T3 reachability on every
/// pair of bounded loops (compared through the two partitions).
fn decision_matches_reachability(label: &str, max_len: usize) {
    let g = group(label);
    let rs = RelaxedSystem::relax(Arc::clone(&g));
    let loops = enumerate_loops(&g, max_len);
    let components = reachability_components(&g, &loops, max_len);

    // Normal forms classify loops on the decision side.
    let nfs: Vec<Word> = loops
        .iter()
        .map(|l| {
            let ql = QLoop::new(&g, g.rank() - 2, l.clone()).unwrap();
            let w = word_of_loop(&g, &ql).unwrap();
            rs.normal_form(&w).unwrap().normal_form().clone()
        })
        .collect();

    // Same component => same normal form, and conversely.
    let mut by_component: BTreeMap<usize, BTreeSet<&Word>> = BTreeMap::new();
    for (i, &c) in components.iter().enumerate() {
        by_component.entry(c).or_default().insert(&nfs[i]);
    }
    for (c, forms) in &by_component {
        assert_eq!(
            forms.len(),
            1,
            "{label}: component {c} mixes normal forms {forms:?}"
        );
    }
    let mut by_nf: BTreeMap<&Word, BTreeSet<usize>> = BTreeMap::new();
    for (i, nf) in nfs.iter().enumerate() {
        by_nf.entry(nf).or_default().insert(components[i]);
    }
    for (nf, comps) in &by_nf {
        assert_eq!(
            comps.len(),
            1,
            "{label}: normal form {nf} split across move components"
        );
    }
}

#[test]
fn decision_matches_reachability_a2() {
    decision_matches_reachability("A2", 8);
}

#[test]
fn decision_matches_reachability_a3_bounded() {
    decision_matches_reachability("A3", 6);
}

#[test]
fn equivalent_verdicts_carry_replayable_certificates() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let g = group("A3");
    let rs = RelaxedSystem::relax(Arc::clone(&g));
    let mut checked = 0;
    while checked < 60 {
        // Random trivial-in-W' words: products of squares and commuting pairs.
        let mut letters: Vec<u8> = Vec::new();
        for _ in 0..rng.gen_range(0..4) {
            match rng.gen_range(0..2) {
                0 => {
                    let s = rng.gen_range(0..3u8);
                    letters.extend([s, s]);
                }
                _ => letters.extend([0, 2, 0, 2]),
            }
        }
        let w = Word(letters);
        let Ok(l) = loop_of_word(&g, &w) else { continue };
        let trivial = QLoop::trivial(g.rank() - 2, 0);
        match decide_homotopic(&rs, &l, &trivial).unwrap() {
            HomotopyDecision::Equivalent { script, grid } => {
                assert!(verify_grid(&g, &grid).is_pass());
                let mut cur = l.clone();
                for mv in script {
                    let (next, frag) = apply_move(&g, &cur, mv).unwrap();
                    assert!(verify_grid(&g, &frag).is_pass());
                    cur = next;
                }
                assert_eq!(cur.chambers(), trivial.chambers());
                checked += 1;
            }
            HomotopyDecision::NotEquivalent { .. } => {
                panic!("trivial-in-W' word declared inequivalent: {w}")
            }
        }
    }
}

#[test]
fn word_map_laws() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let g = group("A3");

    // f(g(w)) = w for words with no adjacent repeats, exhaustively to len 10.
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    let mut frontier: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..10 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..3u8 {
                if w.last() != Some(&l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    for letters in words {
        let w = Word(letters);
        let chain = chain_of_word(&g, 0, &w).unwrap();
        // Read the word back off the chain.
        let mut read = Vec::new();
        for pair in chain.windows(2) {
            let d = g.mul(g.inv(pair[0]), pair[1]);
            read.push(g.word_of(d).letters()[0]);
        }
        assert_eq!(Word(read), w);
    }

    // f(concat) = f * f on random loop pairs.
    for _ in 0..1000 {
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut letters = Vec::new();
            for _ in 0..rng.gen_range(0..3) {
                let s = rng.gen_range(0..3u8);
                letters.extend([s, s]);
            }
            loop_of_word(&g, &Word(letters)).unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let ab = a.concat(&b).unwrap();
        assert_eq!(
            word_of_loop(&g, &ab).unwrap(),
            word_of_loop(&g, &a)
                .unwrap()
                .concat(&word_of_loop(&g, &b).unwrap())
        );
    }
}

#[test]
fn betti_numbers_match_the_line_count_oracle() {
    // For a rank-3 system the k = 3 complement deformation-retracts onto a
    // sphere with 2L punctures, L the number of lines in the arrangement, so
    // b1 = 2L - 1. Both routes are computed independently here.
    for (label, expected_lines, expected_b1) in [("A3", 4, 7), ("B3", 7, 13)] {
        let g = group(label);
        let real = Realization::new(Arc::clone(&g));
        let lines = build_k_parabolic(&real, 3).unwrap().len();
        assert_eq!(lines, expected_lines, "{label} line count");
        let x = build_two_complex(&g, g.rank() - 2, DEFAULT_CELL_CAP).unwrap();
        let h1 = h1_of_complex(&x).unwrap();
        assert_eq!(h1.free_rank, 2 * lines - 1, "{label} dual-oracle b1");
        assert_eq!(h1.free_rank, expected_b1);
        assert!(h1.torsion.is_empty(), "{label} torsion-free");
    }
}
