//! Finite 2-dimensional simplicial complexes.
//!
//! A complex is stored as its maximal data: the set of triangles plus the
//! edges not contained in any triangle. Lower-dimensional faces are derived
//! on demand, never stored redundantly. All lists are canonically sorted so
//! structural equality is meaningful.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    /// A triple or pair with a repeated vertex index.
    #[error("degenerate simplex {0:?}")]
    DegenerateSimplex(Vec<usize>),
    /// A triple or pair occurring twice (or an extra edge duplicating a
    /// triangle edge).
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),
    #[error("vertex index {index} out of range (vertex_count {vertex_count})")]
    IndexOutOfRange { index: usize, vertex_count: usize },
    /// A vertex identification would degenerate a triangle or collide two
    /// distinct triangles.
    #[error("quotient is not simplicial: {0}")]
    QuotientNotSimplicial(String),
    #[error("{0:?} is not a triangle of the complex")]
    NotATriangle([usize; 3]),
    #[error("complex is not connected")]
    Disconnected,
}

/// A finite 2-dimensional simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex2Complex {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    extra_edges: Vec<[usize; 2]>,
}

/// Simplex counts and incidence degrees of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStats {
    pub s0: usize,
    pub s1: usize,
    pub s2: usize,
    pub euler: i64,
    /// Number of incident triangles per edge, aligned with [`Simplex2Complex::edges`].
    pub edge_face_degrees: Vec<usize>,
    /// Number of incident triangles per vertex.
    pub vertex_face_degrees: Vec<usize>,
    pub connected: bool,
}

/// Result of the minimality-candidate test: (M1) every edge lies in at least
/// two triangles, (M2) every vertex lies in at least four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Edges incident to fewer than two triangles.
    pub m1_violations: Vec<[usize; 2]>,
    /// Vertices incident to fewer than four triangles.
    pub m2_violations: Vec<usize>,
}

/// Vertex colors of a barycentric subdivision: original vertices are black,
/// edge barycenters green, face barycenters red.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexColor {
    Black,
    Green,
    Red,
}

/// A barycentric subdivision together with the color of each new vertex.
#[derive(Clone, Debug)]
pub struct BarycentricSubdivision {
    pub complex: Simplex2Complex,
    pub colors: Vec<VertexColor>,
}

/// A vertex quotient together with the old-to-new vertex map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: Simplex2Complex,
    pub vertex_map: Vec<usize>,
}

fn sort2(mut e: [usize; 2]) -> [usize; 2] {
    e.sort_unstable();
    e
}

fn sort3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

pub(crate) fn triangle_edges(t: &[usize; 3]) -> [[usize; 2]; 3] {
    [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
}

impl Simplex2Complex {
    /// Validates and canonicalizes a candidate complex: triples and pairs are
    /// sorted, the lists deduplication-checked. Duplicates are never silently
    /// repaired.
    pub fn new(
        vertex_count: usize,
        triangles: Vec<[usize; 3]>,
        extra_edges: Vec<[usize; 2]>,
    ) -> Result<Self, ComplexError> {
        let mut tris: Vec<[usize; 3]> = Vec::with_capacity(triangles.len());
        for t in triangles {
            let t = sort3(t);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(ComplexError::DegenerateSimplex(t.to_vec()));
            }
            if t[2] >= vertex_count {
                return Err(ComplexError::IndexOutOfRange {
                    index: t[2],
                    vertex_count,
                });
            }
            tris.push(t);
        }
        tris.sort_unstable();
        for w in tris.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateSimplex(w[0].to_vec()));
            }
        }
        let covered: BTreeSet<[usize; 2]> = tris.iter().flat_map(triangle_edges).collect();
        let mut extras: Vec<[usize; 2]> = Vec::with_capacity(extra_edges.len());
        for e in extra_edges {
            let e = sort2(e);
            if e[0] == e[1] {
                return Err(ComplexError::DegenerateSimplex(e.to_vec()));
            }
            if e[1] >= vertex_count {
                return Err(ComplexError::IndexOutOfRange {
                    index: e[1],
                    vertex_count,
                });
            }
            if covered.contains(&e) {
                return Err(ComplexError::DuplicateSimplex(e.to_vec()));
            }
            extras.push(e);
        }
        extras.sort_unstable();
        for w in extras.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateSimplex(w[0].to_vec()));
            }
        }
        Ok(Simplex2Complex {
            vertex_count,
            triangles: tris,
            extra_edges: extras,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Simplex2Complex {
            vertex_count,
            triangles: Vec::new(),
            extra_edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn extra_edges(&self) -> &[[usize; 2]] {
        &self.extra_edges
    }

    /// The derived edge set (triangle edges plus extra edges), sorted. This
    /// ordering is the canonical edge indexing used by boundary matrices,
    /// degrees and edge metrics.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut set: BTreeSet<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(triangle_edges)
            .collect();
        set.extend(self.extra_edges.iter().copied());
        set.into_iter().collect()
    }

    pub fn has_triangle(&self, t: &[usize; 3]) -> bool {
        self.triangles.binary_search(&sort3(*t)).is_ok()
    }

    pub fn has_edge(&self, e: &[usize; 2]) -> bool {
        let e = sort2(*e);
        self.extra_edges.binary_search(&e).is_ok()
            || self
                .triangles
                .iter()
                .any(|t| triangle_edges(t).contains(&e))
    }

    /// Simplex counts, incidence degrees, Euler characteristic and
    /// connectedness.
    pub fn stats(&self) -> ComplexStats {
        let edges = self.edges();
        let index: BTreeMap<[usize; 2], usize> =
            edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut edge_face_degrees = vec![0usize; edges.len()];
        let mut vertex_face_degrees = vec![0usize; self.vertex_count];
        for t in &self.triangles {
            for e in triangle_edges(t) {
                edge_face_degrees[index[&e]] += 1;
            }
            for &v in t {
                vertex_face_degrees[v] += 1;
            }
        }
        let s0 = self.vertex_count;
        let s1 = edges.len();
        let s2 = self.triangles.len();
        ComplexStats {
            s0,
            s1,
            s2,
            euler: s0 as i64 - s1 as i64 + s2 as i64,
            edge_face_degrees,
            vertex_face_degrees,
            connected: self.component_count() <= 1,
        }
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in self.edges() {
            uf.union(e[0], e[1]);
        }
        uf.component_count()
    }

    /// Checks the two minimality conditions: every edge in at least two
    /// triangles (M1) and every vertex in at least four (M2).
    pub fn is_minimal_candidate(&self) -> MinimalityReport {
        let stats = self.stats();
        let edges = self.edges();
        let m1_violations: Vec<[usize; 2]> = edges
            .iter()
            .zip(&stats.edge_face_degrees)
            .filter(|(_, &d)| d < 2)
            .map(|(e, _)| *e)
            .collect();
        let m2_violations: Vec<usize> = stats
            .vertex_face_degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < 4)
            .map(|(v, _)| v)
            .collect();
        MinimalityReport {
            minimal: m1_violations.is_empty() && m2_violations.is_empty(),
            m1_violations,
            m2_violations,
        }
    }

    /// Barycentric subdivision. New vertices are indexed originals first,
    /// then edge barycenters in edge order, then face barycenters in
    /// triangle order; the coloring record marks them black, green and red
    /// respectively.
    pub fn barycentric_subdivision(&self) -> BarycentricSubdivision {
        let edges = self.edges();
        let edge_index: BTreeMap<[usize; 2], usize> =
            edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let s0 = self.vertex_count;
        let s1 = edges.len();
        let s2 = self.triangles.len();
        let edge_bary = |e: &[usize; 2]| s0 + edge_index[e];
        let mut triangles = Vec::with_capacity(6 * s2);
        for (fi, t) in self.triangles.iter().enumerate() {
            let face = s0 + s1 + fi;
            for e in triangle_edges(t) {
                let m = edge_bary(&e);
                triangles.push(sort3([e[0], m, face]));
                triangles.push(sort3([e[1], m, face]));
            }
        }
        let mut extra_edges = Vec::with_capacity(2 * self.extra_edges.len());
        for e in &self.extra_edges {
            let m = edge_bary(e);
            extra_edges.push(sort2([e[0], m]));
            extra_edges.push(sort2([e[1], m]));
        }
        let mut colors = vec![VertexColor::Black; s0];
        colors.extend(std::iter::repeat_n(VertexColor::Green, s1));
        colors.extend(std::iter::repeat_n(VertexColor::Red, s2));
        let complex = Simplex2Complex::new(s0 + s1 + s2, triangles, extra_edges)
            .expect("subdivision of a valid complex is valid");
        BarycentricSubdivision { complex, colors }
    }

    /// Quotient by merging the vertex classes, with the old-to-new map.
    ///
    /// Fails rather than producing a non-simplicial quotient: a triangle that
    /// degenerates or two triangles that collide are errors. Extra edges that
    /// become covered by triangle edges are absorbed.
    pub fn quotient(&self, classes: &[Vec<usize>]) -> Result<Quotient, ComplexError> {
        let mut uf = UnionFind::new(self.vertex_count);
        for class in classes {
            for &v in class {
                if v >= self.vertex_count {
                    return Err(ComplexError::IndexOutOfRange {
                        index: v,
                        vertex_count: self.vertex_count,
                    });
                }
            }
            for w in class.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        // Dense new ids in order of smallest original representative.
        let mut rep_to_new: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_map = vec![0usize; self.vertex_count];
        let reps: Vec<usize> = (0..self.vertex_count).map(|v| uf.find(v)).collect();
        let mut sorted_reps: Vec<usize> = reps.clone();
        sorted_reps.sort_unstable();
        sorted_reps.dedup();
        for (new, rep) in sorted_reps.into_iter().enumerate() {
            rep_to_new.insert(rep, new);
        }
        for (v, &rep) in reps.iter().enumerate() {
            vertex_map[v] = rep_to_new[&rep];
        }
        let new_count = rep_to_new.len();

        let mut triangles = Vec::with_capacity(self.triangles.len());
        for t in &self.triangles {
            let mt = sort3([vertex_map[t[0]], vertex_map[t[1]], vertex_map[t[2]]]);
            if mt[0] == mt[1] || mt[1] == mt[2] {
                return Err(ComplexError::QuotientNotSimplicial(format!(
                    "triangle {t:?} degenerates to {mt:?}"
                )));
            }
            triangles.push(mt);
        }
        let mut sorted = triangles.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::QuotientNotSimplicial(format!(
                    "two triangles collide at {:?}",
                    w[0]
                )));
            }
        }
        let covered: BTreeSet<[usize; 2]> = sorted.iter().flat_map(triangle_edges).collect();
        let mut extra: BTreeSet<[usize; 2]> = BTreeSet::new();
        for e in &self.extra_edges {
            let me = sort2([vertex_map[e[0]], vertex_map[e[1]]]);
            if me[0] == me[1] {
                return Err(ComplexError::QuotientNotSimplicial(format!(
                    "edge {e:?} degenerates"
                )));
            }
            if !covered.contains(&me) {
                extra.insert(me);
            }
        }
        let complex = Simplex2Complex::new(new_count, triangles, extra.into_iter().collect())?;
        Ok(Quotient {
            complex,
            vertex_map,
        })
    }

    /// Quotient without the vertex map.
    pub fn identify(&self, classes: &[Vec<usize>]) -> Result<Simplex2Complex, ComplexError> {
        Ok(self.quotient(classes)?.complex)
    }

    /// Applies a vertex relabeling permutation.
    pub fn relabel(&self, perm: &[usize]) -> Result<Simplex2Complex, ComplexError> {
        assert_eq!(perm.len(), self.vertex_count, "permutation length mismatch");
        let triangles = self
            .triangles
            .iter()
            .map(|t| sort3([perm[t[0]], perm[t[1]], perm[t[2]]]))
            .collect();
        let extra = self
            .extra_edges
            .iter()
            .map(|e| sort2([perm[e[0]], perm[e[1]]]))
            .collect();
        Simplex2Complex::new(self.vertex_count, triangles, extra)
    }
}

/// Disjoint union; vertices of `b` are shifted by `a.vertex_count()`.
/// Returns the union and the shift applied to `b`.
pub fn disjoint_union(a: &Simplex2Complex, b: &Simplex2Complex) -> (Simplex2Complex, usize) {
    let offset = a.vertex_count;
    let mut triangles = a.triangles.clone();
    triangles.extend(
        b.triangles
            .iter()
            .map(|t| [t[0] + offset, t[1] + offset, t[2] + offset]),
    );
    let mut extra = a.extra_edges.clone();
    extra.extend(b.extra_edges.iter().map(|e| [e[0] + offset, e[1] + offset]));
    let union = Simplex2Complex::new(a.vertex_count + b.vertex_count, triangles, extra)
        .expect("disjoint union of valid complexes is valid");
    (union, offset)
}

/// Glues `b` onto `a` by identifying the triangle `tb` of `b` with the
/// triangle `ta` of `a` (vertices matched in sorted order). The shared
/// triangle is present once, so `s2 = s2(a) + s2(b) - 1`.
pub fn glue_triangle(
    a: &Simplex2Complex,
    ta: &[usize; 3],
    b: &Simplex2Complex,
    tb: &[usize; 3],
) -> Result<Simplex2Complex, ComplexError> {
    let ta = sort3(*ta);
    let tb = sort3(*tb);
    if !a.has_triangle(&ta) {
        return Err(ComplexError::NotATriangle(ta));
    }
    if !b.has_triangle(&tb) {
        return Err(ComplexError::NotATriangle(tb));
    }
    let mut b_minus = b.clone();
    b_minus.triangles.retain(|t| *t != tb);
    let (union, offset) = disjoint_union(a, &b_minus);
    let classes: Vec<Vec<usize>> = (0..3).map(|i| vec![ta[i], tb[i] + offset]).collect();
    union.identify(&classes)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn component_count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.find(v) == v)
            .count()
    }
}

// JSON form shared with `MarkedComplex`: a plain complex serializes without
// the marks object and deserializes through full validation.

#[derive(Serialize, Deserialize)]
pub(crate) struct RawComplex {
    pub vertex_count: usize,
    #[serde(default)]
    pub triangles: Vec<Vec<usize>>,
    #[serde(default)]
    pub extra_edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marks: Option<crate::marked::RawMarks>,
}

impl RawComplex {
    pub fn validate_plain(&self) -> Result<Simplex2Complex, ComplexError> {
        let mut triangles = Vec::with_capacity(self.triangles.len());
        for t in &self.triangles {
            match t.as_slice() {
                &[a, b, c] => triangles.push([a, b, c]),
                other => return Err(ComplexError::DegenerateSimplex(other.to_vec())),
            }
        }
        let mut extra = Vec::with_capacity(self.extra_edges.len());
        for e in &self.extra_edges {
            match e.as_slice() {
                &[a, b] => extra.push([a, b]),
                other => return Err(ComplexError::DegenerateSimplex(other.to_vec())),
            }
        }
        Simplex2Complex::new(self.vertex_count, triangles, extra)
    }
}

impl From<&Simplex2Complex> for RawComplex {
    fn from(x: &Simplex2Complex) -> Self {
        RawComplex {
            vertex_count: x.vertex_count,
            triangles: x.triangles.iter().map(|t| t.to_vec()).collect(),
            extra_edges: x.extra_edges.iter().map(|e| e.to_vec()).collect(),
            marks: None,
        }
    }
}

impl Serialize for Simplex2Complex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawComplex::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Simplex2Complex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawComplex::deserialize(deserializer)?;
        raw.validate_plain().map_err(serde::de::Error::custom)
    }
}
