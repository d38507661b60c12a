//! Property tests for the structural invariants: subdivision counts, Euler
//! identities, relabeling invariance, minimality thresholds, Smith normal
//! form facts, Tietze safety and the colored-graph round trip.

use num_bigint::BigInt;
use proptest::prelude::*;

use kappa_core::census::canonical_form;
use kappa_core::colored::{decode, encode};
use kappa_core::complex::{glue_triangle, VertexColor};
use kappa_core::homology::homology_summary;
use kappa_core::matrix::{gcd_of_minors, smith_normal_form, IntMatrix};
use kappa_core::presentation::Presentation;
use kappa_core::Simplex2Complex;

fn all_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn all_pairs(n: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push([a, b]);
        }
    }
    out
}

prop_compose! {
    fn complex_strategy()(n in 1usize..=7)(
        n in Just(n),
        tri_mask in proptest::collection::vec(any::<bool>(), all_triples(n).len()),
        edge_mask in proptest::collection::vec(proptest::bool::weighted(0.2), all_pairs(n).len()),
    ) -> Simplex2Complex {
        let triangles: Vec<[usize; 3]> = all_triples(n)
            .into_iter()
            .zip(&tri_mask)
            .filter(|(_, keep)| **keep)
            .map(|(t, _)| t)
            .collect();
        let covered: std::collections::BTreeSet<[usize; 2]> = triangles
            .iter()
            .flat_map(|t| [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]])
            .collect();
        let extra: Vec<[usize; 2]> = all_pairs(n)
            .into_iter()
            .zip(&edge_mask)
            .filter(|(e, keep)| **keep && !covered.contains(e))
            .map(|(e, _)| e)
            .collect();
        Simplex2Complex::new(n, triangles, extra).expect("generated complexes are valid")
    }
}

proptest! {
    #[test]
    fn subdivision_multiplies_counts(x in complex_strategy()) {
        let stats = x.stats();
        let sd = x.barycentric_subdivision();
        let sd_stats = sd.complex.stats();
        prop_assert_eq!(sd_stats.s0, stats.s0 + stats.s1 + stats.s2);
        prop_assert_eq!(sd_stats.s2, 6 * stats.s2);
        let count = |color: VertexColor| sd.colors.iter().filter(|c| **c == color).count();
        prop_assert_eq!(count(VertexColor::Black), stats.s0);
        prop_assert_eq!(count(VertexColor::Green), stats.s1);
        prop_assert_eq!(count(VertexColor::Red), stats.s2);
    }

    #[test]
    fn euler_and_degree_identities(x in complex_strategy()) {
        let stats = x.stats();
        prop_assert_eq!(
            stats.euler,
            stats.s0 as i64 - stats.s1 as i64 + stats.s2 as i64
        );
        prop_assert_eq!(stats.edge_face_degrees.iter().sum::<usize>(), 3 * stats.s2);
        let (b0, b1, b2) = homology_summary(&x).betti;
        prop_assert_eq!(b0 as i64 - b1 as i64 + b2 as i64, stats.euler);
        prop_assert!(b2 <= stats.s2);
    }

    #[test]
    fn homology_is_relabeling_invariant(
        x in complex_strategy(),
        seed in any::<u64>(),
    ) {
        let n = x.vertex_count();
        // A cheap deterministic permutation from the seed.
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let relabeled = x.relabel(&perm).expect("permutation keeps validity");
        prop_assert_eq!(homology_summary(&x), homology_summary(&relabeled));
    }

    #[test]
    fn minimality_needs_at_least_four_triangles(x in complex_strategy()) {
        if x.triangles().len() < 4 && x.vertex_count() > 0 {
            prop_assert!(!x.is_minimal_candidate().minimal);
        }
    }

    #[test]
    fn torsion_bound_on_random_complexes(x in complex_strategy()) {
        let h = homology_summary(&x);
        prop_assert!(
            x.triangles().len() as u64
                >= kappa_core::homology::kappa_lower_torsion(&h.torsion_order)
        );
    }

    #[test]
    fn encode_decode_identity(x in complex_strategy()) {
        prop_assert_eq!(decode(&encode(&x)).expect("round trip"), x);
    }

    #[test]
    fn canonical_form_stable_under_relabeling(
        x in complex_strategy(),
        seed in any::<u64>(),
    ) {
        // Canonical forms need every vertex in a triangle.
        let mut used: Vec<usize> = x.triangles().iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        prop_assume!(!used.is_empty());
        let relabel: std::collections::BTreeMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let dense: Vec<[usize; 3]> = x
            .triangles()
            .iter()
            .map(|t| {
                let mut m = [relabel[&t[0]], relabel[&t[1]], relabel[&t[2]]];
                m.sort_unstable();
                m
            })
            .collect();
        let n = used.len();
        let base = canonical_form(&dense, n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            let j = (state >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let permuted: Vec<[usize; 3]> = dense
            .iter()
            .map(|t| {
                let mut m = [perm[t[0]], perm[t[1]], perm[t[2]]];
                m.sort_unstable();
                m
            })
            .collect();
        prop_assert_eq!(canonical_form(&permuted, n), base);
    }

    #[test]
    fn glue_counts(a in complex_strategy(), b in complex_strategy()) {
        prop_assume!(!a.triangles().is_empty() && !b.triangles().is_empty());
        let ta = a.triangles()[0];
        let tb = b.triangles()[0];
        let glued = glue_triangle(&a, &ta, &b, &tb).expect("disjoint gluings are simplicial");
        prop_assert_eq!(
            glued.triangles().len(),
            a.triangles().len() + b.triangles().len() - 1
        );
        prop_assert_eq!(glued.vertex_count(), a.vertex_count() + b.vertex_count() - 3);
    }

    #[test]
    fn snf_chain_and_oracle(
        rows in 1usize..=5,
        cols in 1usize..=5,
        entries in proptest::collection::vec(-5i64..=5, 25),
    ) {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(entries[i * 5 + j]));
            }
        }
        let snf = smith_normal_form(&m);
        prop_assert!(snf.rank <= rows.min(cols));
        for w in snf.invariant_factors.windows(2) {
            prop_assert!(num_integer::Integer::is_multiple_of(&w[1], &w[0]));
        }
        for k in 1..=rows.min(cols) {
            let oracle = gcd_of_minors(&m, k).unwrap();
            let product: BigInt = if k <= snf.rank {
                snf.invariant_factors[..k].iter().product()
            } else {
                BigInt::from(0)
            };
            prop_assert_eq!(product, oracle);
        }
    }

    #[test]
    fn tietze_preserves_abelianization_and_length(
        gens in 1usize..=4,
        words in proptest::collection::vec(
            proptest::collection::vec((1i32..=4, any::<bool>()), 0..6),
            0..5,
        ),
    ) {
        let relators: Vec<Vec<i32>> = words
            .into_iter()
            .map(|w| {
                w.into_iter()
                    .map(|(g, pos)| {
                        let g = ((g as usize - 1) % gens + 1) as i32;
                        if pos { g } else { -g }
                    })
                    .collect()
            })
            .collect();
        let p = Presentation::new(gens, relators).expect("letters in range");
        let s = p.tietze_simplify();
        prop_assert!(s.stats().length <= p.stats().length);
        prop_assert_eq!(s.abelianization(), p.abelianization());
    }
}
