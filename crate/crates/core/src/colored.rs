//! The 3-colored-graph encoding of a complex: the 1-skeleton of the
//! barycentric subdivision with red-black edges erased. Black vertices are
//! the original vertices, green the edge barycenters, red the face
//! barycenters; the graph is stored as the two incidence matrices (each
//! green row has exactly two black neighbors, each red row exactly three
//! green ones, and red-black adjacency is unrepresentable by shape).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{triangle_edges, ComplexError, Simplex2Complex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoredGraphError {
    #[error("green row {0:?} does not have two distinct black endpoints")]
    BadGreenRow(Vec<usize>),
    #[error("red row {0:?} does not have three distinct green entries")]
    BadRedRow(Vec<usize>),
    #[error("index {index} out of range ({limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A 3-colored graph in incidence form. `a_rows[i]` lists the two black
/// neighbors of green vertex i; `b_rows[j]` lists the three green neighbors
/// of red vertex j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub black: usize,
    pub green: usize,
    pub red: usize,
    pub a_rows: Vec<[usize; 2]>,
    pub b_rows: Vec<[usize; 3]>,
}

impl ColoredGraph {
    pub fn new(
        black: usize,
        a_rows: Vec<[usize; 2]>,
        b_rows: Vec<[usize; 3]>,
    ) -> Result<Self, ColoredGraphError> {
        let green = a_rows.len();
        let red = b_rows.len();
        for row in &a_rows {
            if row[0] == row[1] {
                return Err(ColoredGraphError::BadGreenRow(row.to_vec()));
            }
            for &v in row {
                if v >= black {
                    return Err(ColoredGraphError::IndexOutOfRange {
                        index: v,
                        limit: black,
                    });
                }
            }
        }
        for row in &b_rows {
            if row[0] == row[1] || row[1] == row[2] || row[0] == row[2] {
                return Err(ColoredGraphError::BadRedRow(row.to_vec()));
            }
            for &e in row {
                if e >= green {
                    return Err(ColoredGraphError::IndexOutOfRange {
                        index: e,
                        limit: green,
                    });
                }
            }
        }
        Ok(ColoredGraph {
            black,
            green,
            red,
            a_rows,
            b_rows,
        })
    }
}

/// Encodes a complex: blacks are its vertices, greens its edges in canonical
/// order, reds its triangles.
pub fn encode(x: &Simplex2Complex) -> ColoredGraph {
    let edges = x.edges();
    let index: std::collections::BTreeMap<[usize; 2], usize> =
        edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let b_rows = x
        .triangles()
        .iter()
        .map(|t| {
            let mut row = [0usize; 3];
            for (slot, e) in triangle_edges(t).iter().enumerate() {
                row[slot] = index[e];
            }
            row.sort_unstable();
            row
        })
        .collect();
    ColoredGraph {
        black: x.vertex_count(),
        green: edges.len(),
        red: x.triangles().len(),
        a_rows: edges,
        b_rows,
    }
}

/// Decodes a colored graph back into a complex, or explains why none exists:
/// duplicate green rows, red rows whose three edges do not close into a
/// triangle, or duplicate triangles.
pub fn decode(gc: &ColoredGraph) -> Result<Simplex2Complex, ColoredGraphError> {
    let mut seen = std::collections::BTreeSet::new();
    for row in &gc.a_rows {
        let mut e = *row;
        e.sort_unstable();
        if !seen.insert(e) {
            return Err(ColoredGraphError::NotAComplex(format!(
                "duplicate edge {e:?}"
            )));
        }
    }
    let mut triangles = Vec::with_capacity(gc.red);
    for row in &gc.b_rows {
        let pairs: Vec<[usize; 2]> = row
            .iter()
            .map(|&e| {
                let mut p = gc.a_rows[e];
                p.sort_unstable();
                p
            })
            .collect();
        let mut verts: Vec<usize> = pairs.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() != 3 {
            return Err(ColoredGraphError::NotAComplex(format!(
                "red vertex with edges {pairs:?} is not a triangle"
            )));
        }
        let t = [verts[0], verts[1], verts[2]];
        let expected: std::collections::BTreeSet<[usize; 2]> =
            triangle_edges(&t).into_iter().collect();
        let got: std::collections::BTreeSet<[usize; 2]> = pairs.into_iter().collect();
        if expected != got {
            return Err(ColoredGraphError::NotAComplex(format!(
                "red vertex edges do not close the triangle {t:?}"
            )));
        }
        triangles.push(t);
    }
    let mut sorted = triangles.clone();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(ColoredGraphError::NotAComplex(format!(
                "duplicate triangle {:?}",
                w[0]
            )));
        }
    }
    let covered: std::collections::BTreeSet<[usize; 2]> =
        sorted.iter().flat_map(triangle_edges).collect();
    let extra: Vec<[usize; 2]> = gc
        .a_rows
        .iter()
        .map(|row| {
            let mut e = *row;
            e.sort_unstable();
            e
        })
        .filter(|e| !covered.contains(e))
        .collect();
    Ok(Simplex2Complex::new(gc.black, triangles, extra)?)
}

/// Report over the structural properties P1-P4 for a candidate bound T on
/// the number of triangles. P2-P4 hold by shape for any constructed graph;
/// P1 compares the color counts against 3T/4, 3T/2 and T.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub p1_black: bool,
    pub p1_green: bool,
    pub p1_red: bool,
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.p1 && self.p2 && self.p3 && self.p4
    }
}

pub fn check_properties(gc: &ColoredGraph, t: u64) -> PropertyReport {
    // Exact rational comparisons: 4b <= 3T, 2g <= 3T, r <= T.
    let p1_black = 4 * gc.black as u64 <= 3 * t;
    let p1_green = 2 * gc.green as u64 <= 3 * t;
    let p1_red = gc.red as u64 <= t;
    let mut failures = Vec::new();
    if !p1_black {
        failures.push(format!("P1: b = {} exceeds 3T/4 with T = {t}", gc.black));
    }
    if !p1_green {
        failures.push(format!("P1: g = {} exceeds 3T/2 with T = {t}", gc.green));
    }
    if !p1_red {
        failures.push(format!("P1: r = {} exceeds T = {t}", gc.red));
    }
    PropertyReport {
        p1_black,
        p1_green,
        p1_red,
        p1: p1_black && p1_green && p1_red,
        p2: true,
        p3: true,
        p4: true,
        failures,
    }
}

/// The counting-formula evaluations behind the census upper bound, in log2
/// space: the full product count of colored graphs, its simplification
/// 6 T log2 T, and the abelian lower bound (T - 3) / 14.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountBounds {
    pub t: u64,
    pub log2_full: f64,
    pub log2_simplified: f64,
    pub log2_lower_abelian: f64,
}

pub fn count_bounds(t: u64) -> CountBounds {
    assert!(t >= 2, "count bounds need T >= 2");
    let tf = t as f64;
    let b = 3.0 * tf / 4.0;
    let g = 3.0 * tf / 2.0;
    let log2_full = (9.0 * tf.powi(3) / 8.0).log2()
        + g * (0.5 * b * (b - 1.0)).log2()
        + tf * (g * (g - 1.0) * (g - 2.0) / 6.0).log2();
    let log2_simplified = 6.0 * tf * tf.log2();
    debug_assert!(
        log2_full <= log2_simplified,
        "full colored-graph count must stay below T^(6T) for T = {t}"
    );
    CountBounds {
        t,
        log2_full,
        log2_simplified,
        log2_lower_abelian: (tf - 3.0) / 14.0,
    }
}
