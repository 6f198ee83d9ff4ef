//! Soundness of the word engine against the geometric representation and
//! the classification.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use parabolica_core::coxeter::Group;
use parabolica_core::geometry::Realization;
use parabolica_core::word::Word;

fn group(label: &str) -> Arc<Group> {
    Arc::new(Group::from_label(label).unwrap())
}

#[test]
fn enumeration_matches_classification_orders() {
    for (label, order) in [
        ("A2", 6),
        ("A3", 24),
        ("A4", 120),
        ("B3", 48),
        ("D4", 192),
        ("H3", 120),
        ("I2(3)", 6),
        ("I2(4)", 8),
        ("I2(5)", 10),
        ("I2(6)", 12),
        ("I2(7)", 14),
        ("I2(8)", 16),
    ] {
        let g = group(label);
        assert_eq!(g.order(), order, "enumerated order of {label}");
        assert_eq!(
            g.system().order(),
            Some(order as u128),
            "classified order of {label}"
        );
    }
}

/// Independent route: reducing a random word through the Cayley table must
/// land on the element whose matrix is the product of the generator matrices.
#[test]
fn reduce_word_agrees_with_matrix_products() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for label in ["A2", "A3", "A4", "B3", "H3", "D4", "I2(7)"] {
        let g = group(label);
        let real = Realization::new(Arc::clone(&g));
        let n = g.rank();
        let simple: Vec<_> = (0..n as u8)
            .map(|s| real.element_matrix(g.right_mul(0, s)).clone())
            .collect();
        let trials = if g.order() <= 384 { 1500 } else { 500 };
        for _ in 0..trials {
            let len = rng.gen_range(0..=14);
            let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(0..n as u8)).collect();
            let word = Word(letters.clone());
            let reduced = g.reduce(&word).unwrap();
            assert!(reduced.length() <= word.len());
            let id = g.id_of(&reduced).unwrap();
            let mut m = real.element_matrix(0).clone();
            for &l in &letters {
                m = m.mul(&simple[l as usize]);
            }
            assert_eq!(&m, real.element_matrix(id), "word {word} in {label}");
        }
    }
}

#[test]
fn involution_words_reduce_to_identity() {
    for label in ["A3", "B3", "H3", "I2(7)"] {
        let g = group(label);
        for s in 0..g.rank() as u8 {
            assert!(g.reduce(&Word(vec![s, s])).unwrap().is_identity());
        }
    }
}

#[test]
fn exhaustive_idempotence_rank_two() {
    // All words up to length 12 over I2(5): reduction is idempotent and
    // length-nonincreasing.
    let g = group("I2(5)");
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..12 {
        let mut next = Vec::new();
        for w in &words {
            if w.len() == words.iter().map(|v| v.len()).max().unwrap() {
                for l in 0..2u8 {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        words.extend(next);
    }
    for w in words {
        let r = g.reduce(&Word(w.clone())).unwrap();
        let again = g.reduce(r.canonical_word()).unwrap();
        assert_eq!(r, again);
        assert!(r.length() <= w.len());
    }
}

#[test]
fn group_axioms_on_random_elements() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let g = group("B3");
    for _ in 0..500 {
        let a = g.element(rng.gen_range(0..g.order()) as u32);
        let b = g.element(rng.gen_range(0..g.order()) as u32);
        let ab = g.product(&a, &b).unwrap();
        let ainv = g.inverse(&a).unwrap();
        // a * a^-1 = e
        assert!(g.product(&a, &ainv).unwrap().is_identity());
        // (ab)^-1 = b^-1 a^-1
        let lhs = g.inverse(&ab).unwrap();
        let rhs = g
            .product(&g.inverse(&b).unwrap(), &ainv)
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// reduce is idempotent on arbitrary words, up to rank 4.
    #[test]
    fn reduction_idempotent(letters in prop::collection::vec(0u8..4, 0..=12), which in 0u8..3) {
        let g = match which {
            0 => Group::from_label("A3").unwrap(),
            1 => Group::from_label("B3").unwrap(),
            _ => Group::from_label("D4").unwrap(),
        };
        let rank = g.rank() as u8;
        let letters: Vec<u8> = letters.into_iter().map(|l| l % rank).collect();
        let r = g.reduce(&Word(letters)).unwrap();
        let again = g.reduce(r.canonical_word()).unwrap();
        prop_assert_eq!(r, again);
    }
}
