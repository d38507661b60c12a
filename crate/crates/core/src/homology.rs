//! Exact integer homology of 2-complexes through Smith normal form.
//!
//! The torsion of H1 is read off the invariant factors of the second
//! boundary matrix (equivalently of the transposed first coboundary, by the
//! duality Tors H1 = Tors H^2).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::Simplex2Complex;
use crate::matrix::{
    in_image_mod_p, rank_mod_p, smith_normal_form, snf_with_transforms, IntMatrix, SnfDecomposition,
};

/// Betti numbers and the invariant factors of Tors H1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub betti: (usize, usize, usize),
    /// Invariant factors greater than one, each dividing the next.
    pub h1_torsion_factors: Vec<BigInt>,
    /// Product of the torsion factors (1 if none).
    pub torsion_order: BigInt,
}

/// Isomorphism type of a finitely generated abelian group: free rank plus the
/// torsion chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product::<BigInt>().max(BigInt::one())
    }
}

impl HomologySummary {
    /// The H1 part as an abstract abelian group.
    pub fn h1(&self) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: self.betti.1,
            torsion: self.h1_torsion_factors.clone(),
        }
    }
}

/// Simplicial boundary matrix. `k = 1` maps edges to vertices, `k = 2` maps
/// triangles to edges; entries are in {-1, 0, 1} and every column of the
/// second boundary has exactly three nonzeros.
pub fn boundary_matrix(x: &Simplex2Complex, k: u8) -> IntMatrix {
    let edges = x.edges();
    match k {
        1 => {
            let mut m = IntMatrix::zeros(x.vertex_count(), edges.len());
            for (j, e) in edges.iter().enumerate() {
                m.set(e[0], j, BigInt::from(-1));
                m.set(e[1], j, BigInt::from(1));
            }
            m
        }
        2 => {
            let index: std::collections::BTreeMap<[usize; 2], usize> =
                edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
            let mut m = IntMatrix::zeros(edges.len(), x.triangles().len());
            for (j, t) in x.triangles().iter().enumerate() {
                // d[a,b,c] = [b,c] - [a,c] + [a,b]
                m.set(index[&[t[1], t[2]]], j, BigInt::from(1));
                m.set(index[&[t[0], t[2]]], j, BigInt::from(-1));
                m.set(index[&[t[0], t[1]]], j, BigInt::from(1));
            }
            m
        }
        _ => panic!("boundary matrix only defined for k = 1, 2"),
    }
}

/// Betti numbers b0, b1, b2 and the H1 torsion chain of a valid complex.
pub fn homology_summary(x: &Simplex2Complex) -> HomologySummary {
    let s1 = x.edges().len();
    let s2 = x.triangles().len();
    let r1 = smith_normal_form(&boundary_matrix(x, 1)).rank;
    let snf2 = smith_normal_form(&boundary_matrix(x, 2));
    let b0 = x.component_count();
    debug_assert_eq!(b0, x.vertex_count() - r1);
    let b1 = s1 - r1 - snf2.rank;
    let b2 = s2 - snf2.rank;
    let h1_torsion_factors = snf2.torsion_factors();
    let torsion_order = snf2.torsion_order();
    HomologySummary {
        betti: (b0, b1, b2),
        h1_torsion_factors,
        torsion_order,
    }
}

/// Smallest integer k with 3^k >= t^2, i.e. the exact integer ceiling of
/// 2 log_3 t. This is the torsion lower bound on the number of triangles.
pub fn kappa_lower_torsion(t: &BigInt) -> u64 {
    assert!(t.is_positive(), "torsion order must be >= 1");
    let target = t * t;
    let mut power = BigInt::one();
    let mut k = 0u64;
    while power < target {
        power *= 3;
        k += 1;
    }
    k
}

/// The edge-space vector of a closed vertex walk: each traversal of an edge
/// contributes +1 or -1 according to orientation against the sorted edge
/// order.
pub fn cycle_vector(x: &Simplex2Complex, cycle: &[usize]) -> Vec<BigInt> {
    let edges = x.edges();
    let index: std::collections::BTreeMap<[usize; 2], usize> =
        edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut z = vec![BigInt::zero(); edges.len()];
    let n = cycle.len();
    for i in 0..n {
        let u = cycle[i];
        let w = cycle[(i + 1) % n];
        let (e, sign) = if u < w { ([u, w], 1) } else { ([w, u], -1) };
        let j = *index.get(&e).expect("walk step is an edge of the complex");
        z[j] += sign;
    }
    z
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("H1 with the requested coefficients is trivial")]
    TrivialH1,
    #[error("vector is not a cycle")]
    NotACycle,
}

/// Coefficient ring for homological nontriviality tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    /// Z/p for a prime p.
    ModP(u64),
}

/// Precomputed data for testing whether edge cycles are nonzero in H1 with
/// fixed coefficients.
pub struct CycleTester {
    d1: IntMatrix,
    d2: IntMatrix,
    coeffs: Coefficients,
    integer_image: Option<SnfDecomposition>,
    h1_dim_or_order: bool,
}

impl CycleTester {
    pub fn new(x: &Simplex2Complex, coeffs: Coefficients) -> Self {
        let d1 = boundary_matrix(x, 1);
        let d2 = boundary_matrix(x, 2);
        let (integer_image, nontrivial) = match coeffs {
            Coefficients::Integers => {
                let dec = snf_with_transforms(&d2);
                let summary = homology_summary(x);
                let nontrivial = summary.betti.1 > 0 || !summary.h1_torsion_factors.is_empty();
                (Some(dec), nontrivial)
            }
            Coefficients::ModP(p) => {
                let cycle_dim = d1.cols() - rank_mod_p(&d1, p);
                let boundary_dim = rank_mod_p(&d2, p);
                (None, cycle_dim > boundary_dim)
            }
        };
        CycleTester {
            d1,
            d2,
            coeffs,
            integer_image,
            h1_dim_or_order: nontrivial,
        }
    }

    /// Whether H1 with these coefficients is nonzero.
    pub fn h1_nontrivial(&self) -> bool {
        self.h1_dim_or_order
    }

    pub fn is_cycle(&self, z: &[BigInt]) -> bool {
        let img = self.d1.mul_vec(z);
        match self.coeffs {
            Coefficients::Integers => img.iter().all(|x| x.is_zero()),
            Coefficients::ModP(p) => {
                let pb = BigInt::from(p);
                img.iter()
                    .all(|x| num_integer::Integer::mod_floor(x, &pb).is_zero())
            }
        }
    }

    /// Whether the cycle is a boundary (zero in H1) with these coefficients.
    pub fn is_boundary(&self, z: &[BigInt]) -> Result<bool, CycleError> {
        if !self.is_cycle(z) {
            return Err(CycleError::NotACycle);
        }
        Ok(match self.coeffs {
            Coefficients::Integers => self
                .integer_image
                .as_ref()
                .expect("built for Z")
                .contains_in_image(z),
            Coefficients::ModP(p) => in_image_mod_p(&self.d2, z, p),
        })
    }

    /// Whether the cycle has nonzero class in H1 with these coefficients.
    pub fn is_nontrivial(&self, z: &[BigInt]) -> Result<bool, CycleError> {
        Ok(!self.is_boundary(z)?)
    }
}

/// Convenience wrapper: is the closed walk `cycle` a boundary over Z?
pub fn walk_is_integer_boundary(x: &Simplex2Complex, cycle: &[usize]) -> bool {
    let tester = CycleTester::new(x, Coefficients::Integers);
    let z = cycle_vector(x, cycle);
    tester.is_boundary(&z).expect("closed walks are cycles")
}

/// Checks whether two walks are homologous over Z with the given integer
/// multiplicities: `a_mult * [a] == b_mult * [b]` in H1(X; Z).
pub fn walks_homologous(
    x: &Simplex2Complex,
    a: &[usize],
    a_mult: i64,
    b: &[usize],
    b_mult: i64,
) -> bool {
    let za = cycle_vector(x, a);
    let zb = cycle_vector(x, b);
    let diff: Vec<BigInt> = za
        .iter()
        .zip(&zb)
        .map(|(x, y)| x * a_mult - y * b_mult)
        .collect();
    let tester = CycleTester::new(x, Coefficients::Integers);
    tester
        .is_boundary(&diff)
        .expect("difference of cycles is a cycle")
}

pub use crate::matrix::gcd_of_minors;
