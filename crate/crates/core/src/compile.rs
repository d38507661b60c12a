//! Compiling a presentation into a triangulated 2-complex and extracting a
//! presentation back from a complex via a spanning tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::complex::{ComplexError, Simplex2Complex};
use crate::constructions;
use crate::marked::{MarkError, MarkedComplex};
use crate::presentation::Presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    /// A relator of length one; kill the generator first (see
    /// `Presentation::tietze_simplify`).
    #[error("length-1 relator {0:?}; simplify the presentation first")]
    UnreducedRelator(Vec<i32>),
    /// A length-2 relator that is not a square of a single generator.
    #[error("length-2 relator {0:?} is not a generator square")]
    BadLengthTwoRelator(Vec<i32>),
    #[error("complex is not connected")]
    Disconnected,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Mark(#[from] MarkError),
}

/// Triangulates a disk over a closed boundary walk.
///
/// `boundary[i]` is the complex vertex at boundary position `i`; interior
/// vertices are allocated from `next_vertex`. One interior vertex is placed
/// under each run of `seg` boundary edges; with B boundary edges and
/// K = ceil(B / seg) interior vertices the disk has exactly B + 2K - 2
/// triangles. Consecutive boundary positions must map to distinct vertices;
/// positions further apart may coincide (no triangle spans them).
pub(crate) fn triangulated_disk(
    boundary: &[usize],
    seg: usize,
    next_vertex: &mut usize,
) -> Vec<[usize; 3]> {
    let b = boundary.len();
    assert!(b >= 3 && seg >= 2);
    if b == 3 {
        let mut t = [boundary[0], boundary[1], boundary[2]];
        t.sort_unstable();
        return vec![t];
    }
    let k = b.div_ceil(seg);
    let inner: Vec<usize> = (0..k)
        .map(|_| {
            let v = *next_vertex;
            *next_vertex += 1;
            v
        })
        .collect();
    let mut tris: Vec<[usize; 3]> = Vec::with_capacity(b + 2 * k - 2);
    let mut push = |a: usize, b: usize, c: usize| {
        let mut t = [a, b, c];
        t.sort_unstable();
        tris.push(t);
    };
    for j in 0..k {
        let lo = seg * j;
        let hi = (seg * (j + 1)).min(b);
        for i in lo..hi {
            push(boundary[i], boundary[(i + 1) % b], inner[j]);
        }
        push(boundary[hi % b], inner[j], inner[(j + 1) % k]);
    }
    for i in 1..k.saturating_sub(1) {
        push(inner[0], inner[i], inner[i + 1]);
    }
    tris
}

/// Builds a marked complex presenting the same group as `p`.
///
/// Circles of a wedge (one per generator, three edges each) are glued with
/// one triangulated disk per relator: 10 triangles for a square relator (a
/// projective-plane block), 6|r|-1 triangles for odd |r| >= 3 and 6|r|-2 for
/// even |r| >= 4, so the total is at most 6 l(P) minus the relator count.
/// Marks: base vertex "P" and one 3-edge loop per generator ("a1", "a2", ...).
pub fn presentation_to_complex(p: &Presentation) -> Result<MarkedComplex, CompileError> {
    let n = p.generator_count();
    for word in p.relators() {
        match word.len() {
            1 => return Err(CompileError::UnreducedRelator(word.clone())),
            2 if word[0] != word[1] => return Err(CompileError::BadLengthTwoRelator(word.clone())),
            _ => {}
        }
    }

    // Vertex layout: P = 0; circle k uses vertices 2k-1 and 2k.
    let base = 0usize;
    let circle = |k: usize| (2 * k - 1, 2 * k);
    let mut next_vertex = 2 * n + 1;
    let mut triangles: Vec<[usize; 3]> = Vec::new();

    // Square relators are deduplicated: a second copy of the same projective
    // plane block would collide triangle-for-triangle and adds no relation.
    let mut squares_done: BTreeSet<usize> = BTreeSet::new();

    for word in p.relators() {
        if word.len() == 2 {
            let g = word[0].unsigned_abs() as usize;
            if !squares_done.insert(g) {
                continue;
            }
            let (c1, c2) = circle(g);
            // Projective-plane block: the 6-vertex minimal triangulation with
            // its generator loop [0, 1, 4] identified with the circle of g.
            let mut map = [0usize; 6];
            map[0] = base;
            map[1] = c1;
            map[4] = c2;
            for local in [2usize, 3, 5] {
                map[local] = next_vertex;
                next_vertex += 1;
            }
            for t in constructions::RP2_TRIANGLES {
                let mut mapped = [map[t[0]], map[t[1]], map[t[2]]];
                mapped.sort_unstable();
                triangles.push(mapped);
            }
        } else {
            let mut boundary = Vec::with_capacity(3 * word.len());
            for &letter in word {
                let g = letter.unsigned_abs() as usize;
                let (c1, c2) = circle(g);
                boundary.push(base);
                if letter > 0 {
                    boundary.push(c1);
                    boundary.push(c2);
                } else {
                    boundary.push(c2);
                    boundary.push(c1);
                }
            }
            triangles.extend(triangulated_disk(&boundary, 2, &mut next_vertex));
        }
    }

    let covered: BTreeSet<[usize; 2]> = triangles
        .iter()
        .flat_map(crate::complex::triangle_edges)
        .collect();
    let mut extra_edges = Vec::new();
    for k in 1..=n {
        let (c1, c2) = circle(k);
        for e in [[base, c1], [c1, c2], [base, c2]] {
            let mut e = e;
            e.sort_unstable();
            if !covered.contains(&e) {
                extra_edges.push(e);
            }
        }
    }

    let complex = Simplex2Complex::new(next_vertex, triangles, extra_edges)?;
    let mut marked = MarkedComplex::plain(complex);
    marked.insert_vertex("P", base)?;
    for k in 1..=n {
        let (c1, c2) = circle(k);
        marked.insert_loop(&format!("a{k}"), vec![base, c1, c2])?;
    }
    Ok(marked)
}

/// Reads a presentation off a connected complex: generators are the edges
/// outside a breadth-first spanning tree (rooted at vertex 0), one relator
/// per triangle. The abelianization of the result equals the H1 of the
/// complex.
pub fn complex_to_presentation(x: &Simplex2Complex) -> Result<Presentation, CompileError> {
    if x.component_count() > 1 {
        return Err(CompileError::Disconnected);
    }
    let edges = x.edges();
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &edges {
        adjacency.entry(e[0]).or_default().push(e[1]);
        adjacency.entry(e[1]).or_default().push(e[0]);
    }
    for nbrs in adjacency.values_mut() {
        nbrs.sort_unstable();
    }

    // Breadth-first tree from vertex 0; deterministic by ascending neighbor.
    let mut in_tree: BTreeSet<[usize; 2]> = BTreeSet::new();
    let mut visited = vec![false; x.vertex_count()];
    if x.vertex_count() > 0 {
        visited[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &w in adjacency.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
                if !visited[w] {
                    visited[w] = true;
                    in_tree.insert(if u < w { [u, w] } else { [w, u] });
                    queue.push_back(w);
                }
            }
        }
    }

    // Generators: non-tree edges in canonical edge order.
    let mut gen_of_edge: BTreeMap<[usize; 2], i32> = BTreeMap::new();
    for e in &edges {
        if !in_tree.contains(e) {
            let next = gen_of_edge.len() as i32 + 1;
            gen_of_edge.insert(*e, next);
        }
    }

    let mut relators = Vec::with_capacity(x.triangles().len());
    for t in x.triangles() {
        let mut word = Vec::new();
        for (u, w) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = if u < w { [u, w] } else { [w, u] };
            if let Some(&g) = gen_of_edge.get(&key) {
                word.push(if u < w { g } else { -g });
            }
        }
        relators.push(word);
    }

    Ok(Presentation::new(gen_of_edge.len(), relators).expect("letters in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_summary;
    use crate::presentation::abelian_matches;

    #[test]
    fn square_relator_gives_projective_plane() {
        let p = Presentation::cyclic(2);
        let x = presentation_to_complex(&p).unwrap();
        assert_eq!(x.complex().triangles().len(), 10);
        let h = homology_summary(x.complex());
        assert_eq!(h.betti.1, 0);
        assert_eq!(h.h1_torsion_factors, vec![2.into()]);
    }

    #[test]
    fn cube_relator_counts() {
        let p = Presentation::cyclic(3);
        let x = presentation_to_complex(&p).unwrap();
        assert_eq!(x.complex().triangles().len(), 17);
        let h = homology_summary(x.complex());
        assert!(abelian_matches(&h.h1(), 0, &[3]));
    }

    #[test]
    fn relator_count_contract() {
        for m in 2..=12 {
            let p = Presentation::cyclic(m);
            let x = presentation_to_complex(&p).unwrap();
            let s2 = x.complex().triangles().len();
            let expected = match m {
                2 => 10,
                m if m % 2 == 1 => 6 * m - 1,
                m => 6 * m - 2,
            };
            assert_eq!(s2, expected, "m = {m}");
            let stats = p.stats();
            assert!(s2 <= 6 * stats.length - p.relators().len());
            let h = homology_summary(x.complex());
            assert!(abelian_matches(&h.h1(), 0, &[m as u64]));
        }
    }

    #[test]
    fn klein_bottle_relator() {
        // < a, b | a b a b^-1 >, |r| = 4: at most 22 triangles, H1 = Z + Z/2.
        let p = Presentation::new(2, vec![vec![1, 2, 1, -2]]).unwrap();
        let x = presentation_to_complex(&p).unwrap();
        assert_eq!(x.complex().triangles().len(), 22);
        let h = homology_summary(x.complex());
        assert!(abelian_matches(&h.h1(), 1, &[2]));
    }

    #[test]
    fn rejects_unreduced_and_bad_two() {
        let p = Presentation::new(2, vec![vec![1]]).unwrap();
        assert!(matches!(
            presentation_to_complex(&p),
            Err(CompileError::UnreducedRelator(_))
        ));
        let p = Presentation::new(2, vec![vec![1, 2]]).unwrap();
        assert!(matches!(
            presentation_to_complex(&p),
            Err(CompileError::BadLengthTwoRelator(_))
        ));
        // a^-2 is a legal square.
        let p = Presentation::new(1, vec![vec![-1, -1]]).unwrap();
        assert!(presentation_to_complex(&p).is_ok());
    }

    #[test]
    fn duplicate_square_relators_compile() {
        let p = Presentation::new(1, vec![vec![1, 1], vec![-1, -1]]).unwrap();
        let x = presentation_to_complex(&p).unwrap();
        assert_eq!(x.complex().triangles().len(), 10);
        let h = homology_summary(x.complex());
        assert!(abelian_matches(&h.h1(), 0, &[2]));
    }

    #[test]
    fn free_presentation_compiles_to_wedge_of_circles() {
        let p = Presentation::free(3);
        let x = presentation_to_complex(&p).unwrap();
        assert_eq!(x.complex().triangles().len(), 0);
        assert_eq!(x.complex().extra_edges().len(), 9);
        let h = homology_summary(x.complex());
        assert!(abelian_matches(&h.h1(), 3, &[]));
    }

    #[test]
    fn extraction_from_single_triangle() {
        let x = Simplex2Complex::new(3, vec![[0, 1, 2]], vec![]).unwrap();
        let p = complex_to_presentation(&x).unwrap();
        let s = p.tietze_simplify();
        assert_eq!(s.generator_count(), 0);
        assert!(s.relators().is_empty());
    }

    #[test]
    fn extraction_rejects_disconnected() {
        let x = Simplex2Complex::new(6, vec![[0, 1, 2], [3, 4, 5]], vec![]).unwrap();
        assert!(matches!(
            complex_to_presentation(&x),
            Err(CompileError::Disconnected)
        ));
    }

    #[test]
    fn compile_consistency_on_presentation_corpus() {
        let corpus = vec![
            Presentation::cyclic(2),
            Presentation::cyclic(5),
            Presentation::new(2, vec![vec![1, 1], vec![2, 2, 2]]).unwrap(),
            Presentation::new(2, vec![vec![1, 2, -1, -2]]).unwrap(),
            Presentation::new(3, vec![vec![1, 1, 1, 1], vec![2, 3, -2, -3]]).unwrap(),
        ];
        for p in corpus {
            let x = presentation_to_complex(&p).unwrap();
            let h = homology_summary(x.complex());
            assert_eq!(h.h1(), p.abelianization(), "presentation {p}");
            // Extraction round trip: abelianization is preserved and the
            // extracted length is at most three letters per triangle.
            let q = complex_to_presentation(x.complex()).unwrap();
            assert_eq!(q.abelianization(), p.abelianization(), "extraction of {p}");
            assert!(q.stats().length <= 3 * x.complex().triangles().len());
            let simplified = q.tietze_simplify();
            assert_eq!(simplified.abelianization(), p.abelianization());
            assert!(simplified.stats().length <= q.stats().length);
        }
    }
}
