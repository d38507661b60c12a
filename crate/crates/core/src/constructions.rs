//! The catalog of explicit complexes: minimal projective plane and torus,
//! the 9-triangle Moebius strip, Moebius telescopes, the economical
//! complexes for cyclic and finite abelian groups, surface witnesses and
//! free-product gluings.

use thiserror::Error;

use crate::compile::triangulated_disk;
use crate::complex::{disjoint_union, glue_triangle, ComplexError, Simplex2Complex};
use crate::marked::{wedge, MarkError, MarkedComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("cyclic order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("telescope height must be at least 1")]
    HeightTooSmall,
    #[error("invariant factor chain invalid: {0}")]
    InvalidChain(String),
    #[error("free product factors need at least one triangle")]
    EmptyFactor,
    #[error("unknown construction {0:?}")]
    UnknownName(String),
    #[error("malformed construction spec {0:?}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Mark(#[from] MarkError),
}

/// The 6-vertex minimal triangulation of the projective plane: the quotient
/// of the icosahedron by the central symmetry. Every pair of vertices is an
/// edge and every vertex lies in exactly five triangles.
pub(crate) const RP2_TRIANGLES: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 1, 3],
    [0, 2, 4],
    [0, 3, 5],
    [0, 4, 5],
    [1, 2, 5],
    [1, 3, 4],
    [1, 4, 5],
    [2, 3, 4],
    [2, 3, 5],
];

/// Generator loop of the projective plane: a non-face 3-cycle through the
/// base vertex.
const RP2_LOOP: [usize; 3] = [0, 1, 4];

/// The face deleted from the projective plane to obtain the Moebius strip:
/// it contains the base vertex and shares no edge with the generator loop.
const RP2_DELETED_FACE: [usize; 3] = [0, 3, 5];

/// The 7-vertex minimal triangulation of the torus (every pair of vertices
/// is an edge; faces are {i, i+1, i+3} and {i, i+2, i+3} mod 7).
const TORUS_TRIANGLES: [[usize; 3]; 14] = [
    [0, 1, 3],
    [0, 1, 5],
    [0, 2, 3],
    [0, 2, 6],
    [0, 4, 5],
    [0, 4, 6],
    [1, 2, 4],
    [1, 2, 6],
    [1, 3, 4],
    [1, 5, 6],
    [2, 3, 5],
    [2, 4, 5],
    [3, 4, 6],
    [3, 5, 6],
];

/// Basis loops of the torus through the base vertex: two 3-edge non-face
/// cycles meeting only at the base whose classes form a basis of H1.
const TORUS_LOOP_A: [usize; 3] = [0, 1, 2];
const TORUS_LOOP_B: [usize; 3] = [0, 4, 3];

/// Minimal complex for Z/2: 10 triangles, 15 edges, 6 vertices, with the
/// marked generator loop `gamma` based at `P`.
pub fn minimal_rp2() -> MarkedComplex {
    let complex = Simplex2Complex::new(6, RP2_TRIANGLES.to_vec(), vec![]).expect("valid catalog");
    let mut m = MarkedComplex::plain(complex);
    m.insert_vertex("P", 0).unwrap();
    m.insert_loop("gamma", RP2_LOOP.to_vec()).unwrap();
    m
}

/// Minimal complex for Z + Z: 14 triangles, 21 edges, 7 vertices, with two
/// marked 3-edge loops `alpha1`, `alpha2` generating H1 and meeting only at
/// the base vertex `P`.
pub fn minimal_torus() -> MarkedComplex {
    let complex = Simplex2Complex::new(7, TORUS_TRIANGLES.to_vec(), vec![]).expect("valid catalog");
    let mut m = MarkedComplex::plain(complex);
    m.insert_vertex("P", 0).unwrap();
    m.insert_loop("alpha1", TORUS_LOOP_A.to_vec()).unwrap();
    m.insert_loop("alpha2", TORUS_LOOP_B.to_vec()).unwrap();
    m
}

/// A circle subdivided into three edges, marked with base `P` and loop
/// `alpha`; the complex realizing a free Z factor.
pub fn circle_loop() -> MarkedComplex {
    let complex =
        Simplex2Complex::new(3, vec![], vec![[0, 1], [1, 2], [0, 2]]).expect("valid catalog");
    let mut m = MarkedComplex::plain(complex);
    m.insert_vertex("P", 0).unwrap();
    m.insert_loop("alpha", vec![0, 1, 2]).unwrap();
    m
}

/// The Moebius strip triangulated with 9 triangles: the projective plane
/// with one face deleted. Marks: base `P`, core loop `gamma` (generating
/// pi_1) and the boundary loop `boundary` with `[boundary] = 2 [gamma]`.
pub fn moebius_strip() -> MarkedComplex {
    let triangles: Vec<[usize; 3]> = RP2_TRIANGLES
        .iter()
        .copied()
        .filter(|t| *t != RP2_DELETED_FACE)
        .collect();
    let complex = Simplex2Complex::new(6, triangles, vec![]).expect("valid catalog");
    let mut m = MarkedComplex::plain(complex);
    m.insert_vertex("P", 0).unwrap();
    m.insert_loop("gamma", RP2_LOOP.to_vec()).unwrap();
    m.insert_loop("boundary", RP2_DELETED_FACE.to_vec())
        .unwrap();
    m
}

/// Height of a Moebius telescope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TelescopeSpec {
    pub height: u32,
}

/// The Moebius telescope of height n: strips glued core-onto-boundary so
/// that classes double at each stage. 9n triangles; pi_1 = Z generated by
/// `gamma0`. Marks: `P`, loops `gamma0` .. `gamma{n-1}` with
/// `[gamma_i] = 2^i [gamma0]`, and `boundary` (the free boundary of the last
/// strip, with `[boundary] = 2^n [gamma0]`).
pub fn moebius_telescope(spec: TelescopeSpec) -> Result<MarkedComplex, ConstructionError> {
    let n = spec.height;
    if n < 1 {
        return Err(ConstructionError::HeightTooSmall);
    }
    let strip = moebius_strip();
    let mut complex = strip.complex().clone();
    let mut gammas: Vec<Vec<usize>> = vec![RP2_LOOP.to_vec()];
    let mut boundary: Vec<usize> = RP2_DELETED_FACE.to_vec();
    let base = 0usize;
    for _ in 1..n {
        let (union, offset) = disjoint_union(&complex, strip.complex());
        // Core of the new strip onto the free boundary of the last one,
        // base point onto base point.
        let classes = vec![
            vec![base, RP2_LOOP[0] + offset],
            vec![boundary[1], RP2_LOOP[1] + offset],
            vec![boundary[2], RP2_LOOP[2] + offset],
        ];
        let q = union.quotient(&classes)?;
        let map = |v: usize| q.vertex_map[v];
        for g in &mut gammas {
            for v in g.iter_mut() {
                *v = map(*v);
            }
        }
        // The glued circle is the new gamma; the fresh strip boundary is the
        // new free boundary.
        gammas.push(boundary.iter().map(|&v| map(v)).collect());
        boundary = RP2_DELETED_FACE.iter().map(|&v| map(v + offset)).collect();
        complex = q.complex;
        debug_assert_eq!(map(base), base);
    }
    let mut m = MarkedComplex::plain(complex);
    m.insert_vertex("P", base)?;
    for (i, g) in gammas.iter().enumerate() {
        m.insert_loop(&format!("gamma{i}"), g.clone())?;
    }
    m.insert_loop("boundary", boundary)?;
    Ok(m)
}

/// Dyadic data for a cyclic group of order m: the height n of the telescope
/// (the largest power of two not exceeding m) and the exponents of the
/// dyadic decomposition m = 2^{n_1} + ... + 2^{n_s}, n_1 < ... < n_s = n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTarget {
    pub m: u64,
    pub n: u32,
    pub exponents: Vec<u32>,
}

impl CyclicTarget {
    pub fn new(m: u64) -> Result<Self, ConstructionError> {
        if m < 2 {
            return Err(ConstructionError::OrderTooSmall(m));
        }
        let n = 63 - m.leading_zeros(); // floor(log2 m); m < 2^{n+1}
        let exponents: Vec<u32> = (0..=n).filter(|&i| (m >> i) & 1 == 1).collect();
        debug_assert_eq!(exponents.iter().map(|&e| 1u64 << e).sum::<u64>(), m);
        debug_assert_eq!(*exponents.last().unwrap(), n);
        Ok(CyclicTarget { m, n, exponents })
    }

    pub fn s(&self) -> usize {
        self.exponents.len()
    }
}

/// The economical complex with fundamental group Z/m: a Moebius telescope of
/// height n with a disk glued along the loop
/// `xi = gamma_{n_1} * ... * gamma_{n_{s-1}} * boundary` (3s edges). The
/// triangle count is at most 9n + 5s + 3, hence at most 14 log2(m) + 3.
/// Marks: `P`, the generator `alpha` (= gamma0) and the attaching loop `xi`.
pub fn complex_for_cyclic(m: u64) -> Result<MarkedComplex, ConstructionError> {
    let target = CyclicTarget::new(m)?;
    let tele = moebius_telescope(TelescopeSpec { height: target.n })?;
    let mut xi: Vec<usize> = Vec::with_capacity(3 * target.s());
    for &e in &target.exponents[..target.s() - 1] {
        xi.extend_from_slice(tele.loop_path(&format!("gamma{e}"))?);
    }
    xi.extend_from_slice(tele.loop_path("boundary")?);

    // Attach the disk with the boundary parameterization rotated off the
    // base point, so that no two collar bridges meet at the same vertex.
    let mut attach = xi.clone();
    attach.rotate_left(1);
    let mut next_vertex = tele.complex().vertex_count();
    let mut triangles = tele.complex().triangles().to_vec();
    triangles.extend(triangulated_disk(&attach, 3, &mut next_vertex));
    let complex = Simplex2Complex::new(next_vertex, triangles, vec![])?;

    let mut marked = MarkedComplex::plain(complex);
    marked.insert_vertex("P", tele.vertex("P")?)?;
    marked.insert_loop("alpha", tele.loop_path("gamma0")?.to_vec())?;
    marked.insert_loop("xi", xi)?;
    Ok(marked)
}

/// The complex for a finitely generated abelian group with free rank `rank`
/// and invariant factor chain `chain` (each dividing the next, all >= 2):
/// the wedge of the factor complexes with one minimal torus glued per
/// unordered pair of factors, identifying its basis loops with the factor
/// generators so each pair commutes.
pub fn complex_for_abelian(rank: usize, chain: &[u64]) -> Result<MarkedComplex, ConstructionError> {
    validate_chain(chain)?;
    let mut factors: Vec<MarkedComplex> = Vec::new();
    for (i, &nk) in chain.iter().enumerate() {
        factors.push(complex_for_cyclic(nk)?.with_prefix(&format!("f{}.", i + 1)));
    }
    for i in 0..rank {
        factors.push(circle_loop().with_prefix(&format!("z{}.", i + 1)));
    }
    if factors.is_empty() {
        // The trivial group: a single point.
        let mut m = MarkedComplex::plain(Simplex2Complex::empty(1));
        m.insert_vertex("P", 0)?;
        return Ok(m);
    }

    let prefixes: Vec<String> = chain
        .iter()
        .enumerate()
        .map(|(i, _)| format!("f{}.", i + 1))
        .chain((0..rank).map(|i| format!("z{}.", i + 1)))
        .collect();

    let mut acc = factors[0].clone();
    let acc_base = format!("{}P", prefixes[0]);
    for (f, prefix) in factors.iter().zip(&prefixes).skip(1) {
        acc = wedge(&acc, &acc_base, f, &format!("{prefix}P"))?;
    }
    // Re-expose the common base as plain "P".
    let p = acc.vertex(&acc_base)?;
    acc.insert_vertex("P", p)?;

    // One minimal torus per unordered pair of factors.
    let torus = minimal_torus();
    for i in 0..prefixes.len() {
        for j in i + 1..prefixes.len() {
            let alpha_i = acc.loop_path(&format!("{}alpha", prefixes[i]))?.to_vec();
            let alpha_j = acc.loop_path(&format!("{}alpha", prefixes[j]))?.to_vec();
            let p = acc.vertex("P")?;
            let (union, offset) = disjoint_union(acc.complex(), torus.complex());
            let classes = vec![
                vec![p, TORUS_LOOP_A[0] + offset],
                vec![alpha_i[1], TORUS_LOOP_A[1] + offset],
                vec![alpha_i[2], TORUS_LOOP_A[2] + offset],
                vec![alpha_j[1], TORUS_LOOP_B[1] + offset],
                vec![alpha_j[2], TORUS_LOOP_B[2] + offset],
            ];
            let q = union.quotient(&classes)?;
            let (vertices, loops) = acc.mapped_marks(|v| q.vertex_map[v]);
            acc = MarkedComplex::new(q.complex, vertices, loops)?;
        }
    }
    Ok(acc)
}

fn validate_chain(chain: &[u64]) -> Result<(), ConstructionError> {
    for &n in chain {
        if n < 2 {
            return Err(ConstructionError::InvalidChain(format!("factor {n} < 2")));
        }
    }
    for w in chain.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(ConstructionError::InvalidChain(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Free-product gluing: identifies the first triangle of each factor. The
/// result has s2(a) + s2(b) - 1 triangles and H1(a) + H1(b).
pub fn free_product_complex(
    a: &MarkedComplex,
    b: &MarkedComplex,
) -> Result<MarkedComplex, ConstructionError> {
    let ta = *a
        .complex()
        .triangles()
        .first()
        .ok_or(ConstructionError::EmptyFactor)?;
    let tb = *b
        .complex()
        .triangles()
        .first()
        .ok_or(ConstructionError::EmptyFactor)?;
    let glued = glue_triangle(a.complex(), &ta, b.complex(), &tb)?;
    Ok(MarkedComplex::plain(glued))
}

/// Lower and upper bounds for the simplicial complexity of an orientable
/// genus-l surface group, with an optional triangulated witness.
#[derive(Clone, Debug)]
pub struct SurfaceBounds {
    pub genus: u64,
    /// ceil(4 l / 3).
    pub kappa_lo: u64,
    /// The Jungerman-Ringel minimal-triangulation count (24 for genus 2).
    pub kappa_hi: u64,
    /// A (generally non-minimal) triangulated genus-l surface.
    pub witness: Option<Simplex2Complex>,
}

const SURFACE_WITNESS_MAX_GENUS: u64 = 64;

pub fn surface_bounds(genus: u64) -> Result<SurfaceBounds, ConstructionError> {
    if genus < 1 {
        return Err(ConstructionError::Parse("genus must be >= 1".into()));
    }
    let kappa_lo = (4 * genus).div_ceil(3);
    let kappa_hi = if genus == 2 {
        24
    } else {
        4 * (genus - 1) + 2 * jungerman_ceil(genus)
    };
    let witness = if genus <= SURFACE_WITNESS_MAX_GENUS {
        Some(genus_surface(genus)?)
    } else {
        None
    };
    Ok(SurfaceBounds {
        genus,
        kappa_lo,
        kappa_hi,
        witness,
    })
}

/// ceil((7 + sqrt(1 + 48 l)) / 2), evaluated exactly.
fn jungerman_ceil(genus: u64) -> u64 {
    let d = 1 + 48 * genus;
    let t = d.isqrt();
    if t * t == d {
        (7 + t).div_ceil(2)
    } else {
        (7 + t) / 2 + 1
    }
}

/// A triangulated closed orientable surface of genus l with 12l + 2
/// triangles, built as an iterated connected sum of minimal tori.
pub fn genus_surface(genus: u64) -> Result<Simplex2Complex, ConstructionError> {
    let torus = minimal_torus().into_complex();
    let mut surface = torus.clone();
    for _ in 1..genus {
        surface = connected_sum(&surface, &torus)?;
    }
    Ok(surface)
}

/// Connected sum of two triangulated surfaces: delete the first triangle of
/// each and identify the boundary 3-cycles.
fn connected_sum(
    a: &Simplex2Complex,
    b: &Simplex2Complex,
) -> Result<Simplex2Complex, ConstructionError> {
    let ta = *a
        .triangles()
        .first()
        .ok_or(ConstructionError::EmptyFactor)?;
    let tb = *b
        .triangles()
        .first()
        .ok_or(ConstructionError::EmptyFactor)?;
    let mut a_cut = a.triangles().to_vec();
    a_cut.retain(|t| *t != ta);
    let mut b_cut = b.triangles().to_vec();
    b_cut.retain(|t| *t != tb);
    let a_cut = Simplex2Complex::new(a.vertex_count(), a_cut, a.extra_edges().to_vec())?;
    let b_cut = Simplex2Complex::new(b.vertex_count(), b_cut, b.extra_edges().to_vec())?;
    let (union, offset) = disjoint_union(&a_cut, &b_cut);
    let classes: Vec<Vec<usize>> = (0..3).map(|i| vec![ta[i], tb[i] + offset]).collect();
    Ok(union.identify(&classes)?)
}

/// Builds a catalog complex from its registry name:
/// `rp2 | torus | moebius | circle | telescope:n | cyclic:m |
///  abelian:r:(n1,n2,...) | surface:l | freeprod:(name,name,...)`.
pub fn build(name: &str) -> Result<MarkedComplex, ConstructionError> {
    let name = name.trim();
    match name {
        "rp2" => return Ok(minimal_rp2()),
        "torus" => return Ok(minimal_torus()),
        "moebius" => return Ok(moebius_strip()),
        "circle" => return Ok(circle_loop()),
        _ => {}
    }
    if let Some(arg) = name.strip_prefix("telescope:") {
        let height: u32 = arg
            .parse()
            .map_err(|_| ConstructionError::Parse(name.to_string()))?;
        return moebius_telescope(TelescopeSpec { height });
    }
    if let Some(arg) = name.strip_prefix("cyclic:") {
        let m: u64 = arg
            .parse()
            .map_err(|_| ConstructionError::Parse(name.to_string()))?;
        return complex_for_cyclic(m);
    }
    if let Some(arg) = name.strip_prefix("abelian:") {
        let (rank_str, chain_str) = arg
            .split_once(':')
            .ok_or_else(|| ConstructionError::Parse(name.to_string()))?;
        let rank: usize = rank_str
            .parse()
            .map_err(|_| ConstructionError::Parse(name.to_string()))?;
        let chain =
            parse_chain(chain_str).ok_or_else(|| ConstructionError::Parse(name.to_string()))?;
        return complex_for_abelian(rank, &chain);
    }
    if let Some(arg) = name.strip_prefix("surface:") {
        let genus: u64 = arg
            .parse()
            .map_err(|_| ConstructionError::Parse(name.to_string()))?;
        let bounds = surface_bounds(genus)?;
        return bounds
            .witness
            .map(MarkedComplex::plain)
            .ok_or_else(|| ConstructionError::Parse(format!("genus {genus} witness too large")));
    }
    if let Some(arg) = name.strip_prefix("freeprod:") {
        let inner = arg
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| ConstructionError::Parse(name.to_string()))?;
        let parts = split_top_level(inner);
        if parts.len() < 2 {
            return Err(ConstructionError::Parse(name.to_string()));
        }
        let mut acc = build(parts[0])?;
        for part in &parts[1..] {
            acc = free_product_complex(&acc, &build(part)?)?;
        }
        return Ok(acc);
    }
    Err(ConstructionError::UnknownName(name.to_string()))
}

/// Parses `(n1,n2,...)` or an empty chain `()`.
pub(crate) fn parse_chain(s: &str) -> Option<Vec<u64>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Splits on commas not nested inside parentheses.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}
