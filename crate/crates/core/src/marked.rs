//! Complexes with named base vertices and named edge loops, used by the
//! gluing constructions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{disjoint_union, ComplexError, RawComplex, Simplex2Complex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("marked vertex {name:?} = {index} out of range")]
    VertexOutOfRange { name: String, index: usize },
    #[error("marked loop {name:?} is not a closed edge path")]
    LoopNotClosed { name: String },
    #[error("no mark named {0:?}")]
    UnknownMark(String),
    #[error("mark name {0:?} present on both sides")]
    DuplicateMarkName(String),
}

/// A complex with named base vertices and named loops. Loops are cyclic
/// vertex sequences whose consecutive pairs (including last-to-first) are
/// edges of the complex; they may revisit vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedComplex {
    complex: Simplex2Complex,
    marked_vertices: BTreeMap<String, usize>,
    marked_loops: BTreeMap<String, Vec<usize>>,
}

impl MarkedComplex {
    pub fn new(
        complex: Simplex2Complex,
        marked_vertices: BTreeMap<String, usize>,
        marked_loops: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self, MarkError> {
        for (name, &v) in &marked_vertices {
            if v >= complex.vertex_count() {
                return Err(MarkError::VertexOutOfRange {
                    name: name.clone(),
                    index: v,
                });
            }
        }
        for (name, cycle) in &marked_loops {
            if !is_closed_edge_path(&complex, cycle) {
                return Err(MarkError::LoopNotClosed { name: name.clone() });
            }
        }
        Ok(MarkedComplex {
            complex,
            marked_vertices,
            marked_loops,
        })
    }

    pub fn plain(complex: Simplex2Complex) -> Self {
        MarkedComplex {
            complex,
            marked_vertices: BTreeMap::new(),
            marked_loops: BTreeMap::new(),
        }
    }

    pub fn complex(&self) -> &Simplex2Complex {
        &self.complex
    }

    pub fn into_complex(self) -> Simplex2Complex {
        self.complex
    }

    pub fn marked_vertices(&self) -> &BTreeMap<String, usize> {
        &self.marked_vertices
    }

    pub fn marked_loops(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.marked_loops
    }

    pub fn vertex(&self, name: &str) -> Result<usize, MarkError> {
        self.marked_vertices
            .get(name)
            .copied()
            .ok_or_else(|| MarkError::UnknownMark(name.into()))
    }

    pub fn loop_path(&self, name: &str) -> Result<&[usize], MarkError> {
        self.marked_loops
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| MarkError::UnknownMark(name.into()))
    }

    /// Renames every mark with a prefix (used to keep factor marks apart in
    /// wedge constructions).
    pub fn with_prefix(&self, prefix: &str) -> Self {
        let marked_vertices = self
            .marked_vertices
            .iter()
            .map(|(k, &v)| (format!("{prefix}{k}"), v))
            .collect();
        let marked_loops = self
            .marked_loops
            .iter()
            .map(|(k, v)| (format!("{prefix}{k}"), v.clone()))
            .collect();
        MarkedComplex {
            complex: self.complex.clone(),
            marked_vertices,
            marked_loops,
        }
    }

    /// Re-points marks through a vertex map (after a quotient).
    pub(crate) fn mapped_marks(
        &self,
        map: impl Fn(usize) -> usize,
    ) -> (BTreeMap<String, usize>, BTreeMap<String, Vec<usize>>) {
        let vertices = self
            .marked_vertices
            .iter()
            .map(|(k, &v)| (k.clone(), map(v)))
            .collect();
        let loops = self
            .marked_loops
            .iter()
            .map(|(k, cycle)| (k.clone(), cycle.iter().map(|&v| map(v)).collect()))
            .collect();
        (vertices, loops)
    }

    pub fn insert_loop(&mut self, name: &str, cycle: Vec<usize>) -> Result<(), MarkError> {
        if !is_closed_edge_path(&self.complex, &cycle) {
            return Err(MarkError::LoopNotClosed { name: name.into() });
        }
        self.marked_loops.insert(name.into(), cycle);
        Ok(())
    }

    pub fn insert_vertex(&mut self, name: &str, v: usize) -> Result<(), MarkError> {
        if v >= self.complex.vertex_count() {
            return Err(MarkError::VertexOutOfRange {
                name: name.into(),
                index: v,
            });
        }
        self.marked_vertices.insert(name.into(), v);
        Ok(())
    }
}

fn is_closed_edge_path(complex: &Simplex2Complex, cycle: &[usize]) -> bool {
    if cycle.is_empty() {
        return false;
    }
    let n = cycle.len();
    (0..n).all(|i| {
        let u = cycle[i];
        let w = cycle[(i + 1) % n];
        u != w && complex.has_edge(&[u, w])
    })
}

/// Wedge of two marked complexes: disjoint union with the named base
/// vertices identified. Marks from both sides are kept; colliding names are
/// an error (rename with [`MarkedComplex::with_prefix`] first).
pub fn wedge(
    a: &MarkedComplex,
    a_base: &str,
    b: &MarkedComplex,
    b_base: &str,
) -> Result<MarkedComplex, MarkError> {
    let pa = a.vertex(a_base)?;
    let pb = b.vertex(b_base)?;
    let (union, offset) = disjoint_union(a.complex(), b.complex());
    let q = union.quotient(&[vec![pa, pb + offset]])?;
    let (mut vertices, mut loops) = a.mapped_marks(|v| q.vertex_map[v]);
    let (b_vertices, b_loops) = b.mapped_marks(|v| q.vertex_map[v + offset]);
    for (k, v) in b_vertices {
        match vertices.get(&k) {
            None => {
                vertices.insert(k, v);
            }
            // Both names point at the same vertex (typically the merged base).
            Some(&existing) if existing == v => {}
            Some(_) => return Err(MarkError::DuplicateMarkName(k)),
        }
    }
    for (k, cycle) in b_loops {
        if loops.insert(k.clone(), cycle).is_some() {
            return Err(MarkError::DuplicateMarkName(k));
        }
    }
    MarkedComplex::new(q.complex, vertices, loops)
}

#[derive(Serialize, Deserialize, Default)]
pub(crate) struct RawMarks {
    #[serde(default)]
    pub vertices: BTreeMap<String, usize>,
    #[serde(default)]
    pub loops: BTreeMap<String, Vec<usize>>,
}

impl Serialize for MarkedComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut raw = RawComplex::from(&self.complex);
        raw.marks = Some(RawMarks {
            vertices: self.marked_vertices.clone(),
            loops: self.marked_loops.clone(),
        });
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MarkedComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawComplex::deserialize(deserializer)?;
        let complex = raw.validate_plain().map_err(serde::de::Error::custom)?;
        let marks = raw.marks.unwrap_or_default();
        MarkedComplex::new(complex, marks.vertices, marks.loops).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marked_triangle() -> MarkedComplex {
        let complex = Simplex2Complex::new(3, vec![[0, 1, 2]], vec![]).unwrap();
        let mut m = MarkedComplex::plain(complex);
        m.insert_vertex("P", 0).unwrap();
        m.insert_loop("rim", vec![0, 1, 2]).unwrap();
        m
    }

    #[test]
    fn loop_must_be_closed_edge_path() {
        let complex = Simplex2Complex::new(4, vec![[0, 1, 2]], vec![]).unwrap();
        let mut m = MarkedComplex::plain(complex);
        assert!(m.insert_loop("bad", vec![0, 1, 3]).is_err());
        assert!(m.insert_loop("ok", vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn wedge_identifies_bases() {
        let a = marked_triangle();
        let b = marked_triangle().with_prefix("b.");
        let w = wedge(&a, "P", &b, "b.P").unwrap();
        assert_eq!(w.complex().vertex_count(), 5);
        assert_eq!(w.complex().triangles().len(), 2);
        assert_eq!(w.vertex("P").unwrap(), w.vertex("b.P").unwrap());
        assert!(w.loop_path("rim").is_ok());
        assert!(w.loop_path("b.rim").is_ok());
    }

    #[test]
    fn wedge_with_point_is_identity_on_counts() {
        let a = marked_triangle();
        let point = {
            let mut m = MarkedComplex::plain(Simplex2Complex::empty(1));
            m.insert_vertex("P", 0).unwrap();
            m.with_prefix("pt.")
        };
        let w = wedge(&a, "P", &point, "pt.P").unwrap();
        assert_eq!(w.complex().vertex_count(), 3);
        assert_eq!(w.complex().triangles(), a.complex().triangles());
    }

    #[test]
    fn wedge_rejects_name_collision() {
        let a = marked_triangle();
        let b = marked_triangle();
        assert!(matches!(
            wedge(&a, "P", &b, "P"),
            Err(MarkError::DuplicateMarkName(_))
        ));
    }

    #[test]
    fn marked_json_round_trip() {
        let m = marked_triangle();
        let json = serde_json::to_string(&m).unwrap();
        let back: MarkedComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }
}
