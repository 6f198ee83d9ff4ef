//! Structural invariants of the q-graphs and 2-complexes.

use rand::{Rng, SeedableRng};

use parabolica_core::complex::{
    build_q_graph, build_two_complex, expected_square_count, q_near, shared_vertex_count,
    DEFAULT_CELL_CAP,
};
use parabolica_core::coxeter::Group;

fn group(label: &str) -> Group {
    Group::from_label(label).unwrap()
}

#[test]
fn support_criterion_exhaustive_b3() {
    let g = group("B3");
    let n = g.rank();
    for u in 0..g.order() as u32 {
        for v in 0..g.order() as u32 {
            let shared = shared_vertex_count(&g, u, v);
            for q in 0..n {
                assert_eq!(
                    q_near(&g, u, v, q).unwrap(),
                    u == v || shared >= q + 1,
                    "u={u} v={v} q={q}"
                );
            }
        }
    }
}

#[test]
fn support_criterion_randomized_larger_systems() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for label in ["A4", "D4", "H3"] {
        let g = group(label);
        let n = g.rank();
        for _ in 0..10_000 {
            let u = rng.gen_range(0..g.order()) as u32;
            let v = rng.gen_range(0..g.order()) as u32;
            let q = rng.gen_range(0..n);
            let near = q_near(&g, u, v, q).unwrap();
            let shared = shared_vertex_count(&g, u, v);
            assert_eq!(near, u == v || shared >= q + 1, "{label} u={u} v={v} q={q}");
        }
    }
}

#[test]
fn top_level_graphs_are_triangle_free_with_exact_square_census() {
    for label in ["A2", "A3", "B3", "A4", "D4", "H3"] {
        let g = group(label);
        let n = g.rank();
        let x = build_two_complex(&g, n - 2, DEFAULT_CELL_CAP).unwrap();
        assert_eq!(x.num_triangles(), 0, "{label} has no 3-cycles at the top level");
        assert_eq!(
            x.num_squares(),
            expected_square_count(&g),
            "{label} square census"
        );
        assert_eq!(
            x.graph().num_edges(),
            g.order() * n / 2,
            "{label} edge count"
        );
    }
}

#[test]
fn squares_lie_in_commuting_cosets() {
    let g = group("A3");
    let x = build_two_complex(&g, 1, DEFAULT_CELL_CAP).unwrap();
    for cell in x.squares() {
        // Each square is a coset of the commuting pair <s1, s3>: opposite
        // corners differ by the product of both generators.
        let d = g.mul(g.inv(cell[0]), cell[2]);
        assert_eq!(g.support_size(d), 2);
        assert_eq!(g.length(d), 2);
    }
}

#[test]
fn edge_monotonicity_across_levels() {
    // Lowering q weakens nearness, so edge sets are nested downward.
    let g = group("B3");
    let mut last = usize::MAX;
    for q in 0..g.rank() {
        let graph = build_q_graph(&g, q).unwrap();
        assert!(graph.num_edges() <= last);
        last = graph.num_edges();
    }
    let g1 = build_q_graph(&g, 1).unwrap();
    let g0 = build_q_graph(&g, 0).unwrap();
    for &(u, v) in g1.edges() {
        assert!(g0.has_edge(u, v));
    }
}

#[test]
fn rank_and_positivity_of_h1_inputs() {
    use parabolica_core::homotopy::{h1_of_complex, pi1_presentation};
    for label in ["A3", "B3"] {
        let g = group(label);
        let x = build_two_complex(&g, g.rank() - 2, DEFAULT_CELL_CAP).unwrap();
        let pi1 = pi1_presentation(&x, 0).unwrap();
        let gens = pi1.presentation.num_generators();
        let e = x.graph().num_edges();
        let v = x.graph().num_vertices();
        assert_eq!(gens, e - v + 1);
        let h1 = h1_of_complex(&x).unwrap();
        // rank(boundary) <= number of cells, and b1 is its complement.
        assert!(gens - h1.free_rank <= x.cells().len());
    }
}
