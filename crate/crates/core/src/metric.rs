//! Edge metrics, homological systoles, and the two explicit metric
//! constructions converting triangle counts into systolic-area upper bounds:
//! the equilateral-hemisphere metric and the spherical Moebius telescope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::Simplex2Complex;
use crate::constructions::{ConstructionError, CyclicTarget};
use crate::homology::{cycle_vector, homology_summary, Coefficients, CycleTester};
use crate::interval::{pi, sqrt3, Interval};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("H1 with the requested coefficients is trivial")]
    TrivialH1,
    #[error("edge metric has {got} lengths but the complex has {want} edges")]
    WrongArity { got: usize, want: usize },
    #[error("edge lengths must be positive")]
    NotPositive,
    #[error("complex is not connected")]
    Disconnected,
    #[error("a homologically nontrivial cycle of fewer than three edges exists")]
    SystoleTooShort,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Positive rational lengths indexed by the canonical edge order of a
/// complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMetric {
    lengths: Vec<BigRational>,
}

impl EdgeMetric {
    pub fn new(x: &Simplex2Complex, lengths: Vec<BigRational>) -> Result<Self, MetricError> {
        let want = x.edges().len();
        if lengths.len() != want {
            return Err(MetricError::WrongArity {
                got: lengths.len(),
                want,
            });
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(MetricError::NotPositive);
        }
        Ok(EdgeMetric { lengths })
    }

    /// All edges of length one.
    pub fn unit(x: &Simplex2Complex) -> Self {
        EdgeMetric {
            lengths: vec![BigRational::one(); x.edges().len()],
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Result<Self, MetricError> {
        if !factor.is_positive() {
            return Err(MetricError::NotPositive);
        }
        Ok(EdgeMetric {
            lengths: self.lengths.iter().map(|l| l * factor).collect(),
        })
    }

    pub fn lengths(&self) -> &[BigRational] {
        &self.lengths
    }
}

/// A shortest homologically nontrivial cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystoleResult {
    pub length: BigRational,
    /// Closed vertex cycle realizing the length, canonically rotated.
    pub witness_cycle: Vec<usize>,
    pub coefficients: Coefficients,
}

/// Shortest edge cycle with nonzero class in H1 over the given coefficients.
///
/// Candidates are the shortest-path-tree fundamental cycles from every root
/// (null-homologous cycles satisfy the three-path condition, so the optimum
/// is among them); nontriviality is certified by exact reduction against the
/// boundary image.
pub fn homological_systole(
    x: &Simplex2Complex,
    metric: &EdgeMetric,
    coeffs: Coefficients,
) -> Result<SystoleResult, MetricError> {
    if x.component_count() > 1 {
        return Err(MetricError::Disconnected);
    }
    if metric.lengths.len() != x.edges().len() {
        return Err(MetricError::WrongArity {
            got: metric.lengths.len(),
            want: x.edges().len(),
        });
    }
    let tester = CycleTester::new(x, coeffs);
    if !tester.h1_nontrivial() {
        return Err(MetricError::TrivialH1);
    }

    let edges = x.edges();
    let weight: std::collections::BTreeMap<[usize; 2], &BigRational> = edges
        .iter()
        .zip(&metric.lengths)
        .map(|(e, w)| (*e, w))
        .collect();
    let mut adjacency: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); x.vertex_count()];
    for (e, w) in edges.iter().zip(&metric.lengths) {
        adjacency[e[0]].push((e[1], w.clone()));
        adjacency[e[1]].push((e[0], w.clone()));
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable_by_key(|a| a.0);
    }

    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for root in 0..x.vertex_count() {
        let (parent, _dist) = shortest_path_tree(&adjacency, root, x.vertex_count());
        for e in &edges {
            let (u, v) = (e[0], e[1]);
            if parent[v] == Some(u) || parent[u] == Some(v) {
                continue;
            }
            let pu = tree_path(&parent, u);
            let pv = tree_path(&parent, v);
            let Some(cycle) = splice_tree_cycle(&pu, &pv) else {
                continue;
            };
            let length = walk_length(&cycle, &weight);
            if let Some((ref best_len, _)) = best {
                if length > *best_len {
                    continue;
                }
            }
            let z = cycle_vector(x, &cycle);
            if tester.is_nontrivial(&z).unwrap_or(false) {
                let canon = canonical_cycle(&cycle);
                match &best {
                    Some((bl, bw)) if *bl < length || (*bl == length && *bw <= canon) => {}
                    _ => best = Some((length, canon)),
                }
            }
        }
    }

    let (length, witness_cycle) = best.ok_or(MetricError::TrivialH1)?;
    debug_assert!(
        {
            let small = edges.len() <= 30;
            !small
                || brute_force_systole(x, metric, coeffs)
                    .map(|(l, _)| l == length)
                    .unwrap_or(false)
        },
        "systole disagrees with the brute-force cycle oracle"
    );
    Ok(SystoleResult {
        length,
        witness_cycle,
        coefficients: coeffs,
    })
}

fn shortest_path_tree(
    adjacency: &[Vec<(usize, BigRational)>],
    root: usize,
    n: usize,
) -> (Vec<Option<usize>>, Vec<Option<BigRational>>) {
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut dist: Vec<Option<BigRational>> = vec![None; n];
    let mut done = vec![false; n];
    dist[root] = Some(BigRational::zero());
    loop {
        // Exact Dijkstra; ties broken by smallest vertex for determinism.
        let mut next: Option<usize> = None;
        for v in 0..n {
            if done[v] || dist[v].is_none() {
                continue;
            }
            if next.is_none_or(|u| dist[v].as_ref().unwrap() < dist[u].as_ref().unwrap()) {
                next = Some(v);
            }
        }
        let Some(u) = next else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for (w, len) in &adjacency[u] {
            let cand = &du + len;
            if dist[*w].as_ref().is_none_or(|d| cand < *d) {
                dist[*w] = Some(cand);
                parent[*w] = Some(u);
            }
        }
    }
    (parent, dist)
}

fn tree_path(parent: &[Option<usize>], v: usize) -> Vec<usize> {
    let mut path = vec![v];
    let mut cur = v;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse(); // root .. v
    path
}

/// Joins two root paths and the closing edge into a simple cycle through
/// their last common ancestor; `None` when the loop is degenerate.
fn splice_tree_cycle(pu: &[usize], pv: &[usize]) -> Option<Vec<usize>> {
    let mut common = 0;
    while common < pu.len() && common < pv.len() && pu[common] == pv[common] {
        common += 1;
    }
    // lca is at index common-1; branches are vertex-disjoint beyond it.
    let lca = common - 1;
    let mut cycle: Vec<usize> = pu[lca..].to_vec();
    cycle.extend(pv[common..].iter().rev());
    if cycle.len() < 3 {
        return None;
    }
    Some(cycle)
}

fn walk_length(
    cycle: &[usize],
    weight: &std::collections::BTreeMap<[usize; 2], &BigRational>,
) -> BigRational {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (u, w) = (cycle[i], cycle[(i + 1) % n]);
            let e = if u < w { [u, w] } else { [w, u] };
            (*weight.get(&e).expect("cycle step is an edge")).clone()
        })
        .sum()
}

/// Rotates/reflects a vertex cycle to its lexicographically least form.
fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    let reversed: Vec<usize> = cycle.iter().rev().copied().collect();
    for candidate in [cycle, reversed.as_slice()] {
        for r in 0..n {
            let mut rot = candidate.to_vec();
            rot.rotate_left(r);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.expect("nonempty cycle")
}

/// Exhaustive simple-cycle search (the independent systole oracle for small
/// complexes).
pub fn brute_force_systole(
    x: &Simplex2Complex,
    metric: &EdgeMetric,
    coeffs: Coefficients,
) -> Option<(BigRational, Vec<usize>)> {
    let edges = x.edges();
    let weight: std::collections::BTreeMap<[usize; 2], &BigRational> = edges
        .iter()
        .zip(metric.lengths())
        .map(|(e, w)| (*e, w))
        .collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); x.vertex_count()];
    for e in &edges {
        adjacency[e[0]].push(e[1]);
        adjacency[e[1]].push(e[0]);
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    let tester = CycleTester::new(x, coeffs);
    let mut best: Option<(BigRational, Vec<usize>)> = None;

    // Each simple cycle is enumerated once: smallest vertex first, second
    // vertex smaller than the last.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        length: &BigRational,
        adjacency: &[Vec<usize>],
        weight: &std::collections::BTreeMap<[usize; 2], &BigRational>,
        x: &Simplex2Complex,
        tester: &CycleTester,
        best: &mut Option<(BigRational, Vec<usize>)>,
    ) {
        let start = path[0];
        let here = *path.last().unwrap();
        for &w in &adjacency[here] {
            if w == start && path.len() >= 3 && path[1] < here {
                let e = if here < start {
                    [here, start]
                } else {
                    [start, here]
                };
                let total = length + *weight.get(&e).unwrap();
                if best.as_ref().is_none_or(|(bl, _)| total <= *bl) {
                    let z = cycle_vector(x, path);
                    if tester.is_nontrivial(&z).unwrap_or(false) {
                        let canon = canonical_cycle(path);
                        match best {
                            Some((bl, bw)) if *bl < total || (*bl == total && *bw <= canon) => {}
                            _ => *best = Some((total, canon)),
                        }
                    }
                }
            }
            if w > start && !on_path[w] {
                let e = if here < w { [here, w] } else { [w, here] };
                let total = length + *weight.get(&e).unwrap();
                if best.as_ref().is_some_and(|(bl, _)| total > *bl) {
                    continue;
                }
                path.push(w);
                on_path[w] = true;
                extend(path, on_path, &total, adjacency, weight, x, tester, best);
                on_path[w] = false;
                path.pop();
            }
        }
    }

    for start in 0..x.vertex_count() {
        let mut path = vec![start];
        let mut on_path = vec![false; x.vertex_count()];
        on_path[start] = true;
        extend(
            &mut path,
            &mut on_path,
            &BigRational::zero(),
            &adjacency,
            &weight,
            x,
            &tester,
            &mut best,
        );
    }
    best
}

/// Certificate that the equilateral metric (edges 2 pi / 3, faces round unit
/// hemispheres) realizes area / systole^2 <= s2 / (2 pi) on this complex:
/// the combinatorial girth condition was verified homologically, so the
/// value is a certified upper-bound candidate for the systolic area of the
/// fundamental group (a true bound whenever short loops inject into H1).
#[derive(Clone, Debug)]
pub struct EquilateralCertificate {
    pub s2: usize,
    /// s2 / (2 pi).
    pub sigma_upper: Interval,
    /// Systole of the unit edge metric (at least 3).
    pub unit_systole: BigRational,
    pub coefficients: Coefficients,
    /// The certificate is homological, not homotopical.
    pub homological_only: bool,
}

pub fn equilateral_sigma_upper(x: &Simplex2Complex) -> Result<EquilateralCertificate, MetricError> {
    if x.component_count() > 1 {
        return Err(MetricError::Disconnected);
    }
    let summary = homology_summary(x);
    let coeffs = if summary.betti.1 > 0 {
        Coefficients::Integers
    } else if !summary.h1_torsion_factors.is_empty() {
        Coefficients::ModP(smallest_prime_factor(&summary.h1_torsion_factors[0]))
    } else {
        return Err(MetricError::TrivialH1);
    };
    let systole = homological_systole(x, &EdgeMetric::unit(x), coeffs)?;
    if systole.length < BigRational::from_integer(3.into()) {
        return Err(MetricError::SystoleTooShort);
    }
    let s2 = x.triangles().len();
    let two_pi = &pi() * &Interval::from_int(2);
    let sigma_upper = &Interval::from_int(s2 as i64) / &two_pi;
    Ok(EquilateralCertificate {
        s2,
        sigma_upper,
        unit_systole: systole.length,
        coefficients: coeffs,
        homological_only: true,
    })
}

fn smallest_prime_factor(n: &BigInt) -> u64 {
    let n = u64::try_from(n).expect("torsion factor fits a machine word at catalog scale");
    if n % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

/// The spherical Moebius telescope bound for Z/m: strips of area
/// 2 pi sqrt(3) and a singular disk of area at most pi n, with systole pi,
/// give sigma(Z/m) <= (1 + 2 sqrt(3)) / pi * log2(m).
#[derive(Clone, Debug)]
pub struct TelescopeSigma {
    pub m: u64,
    pub n: u32,
    pub s: usize,
    /// n strips of area 2 pi sqrt(3) each.
    pub strip_area: Interval,
    /// Disk area bound pi n.
    pub disk_area_max: Interval,
    /// The systole of the metric: pi.
    pub systole: Interval,
    /// (strip_area + disk_area_max) / systole^2 = n (1 + 2 sqrt(3)) / pi.
    pub area_over_sys2: Interval,
    /// The stated bound (1 + 2 sqrt(3)) / pi * log2(m).
    pub bound: Interval,
}

pub fn telescope_sigma_upper(m: u64) -> Result<TelescopeSigma, MetricError> {
    let target = CyclicTarget::new(m)?;
    let n = Interval::from_int(target.n as i64);
    let two = Interval::from_int(2);
    let strip_area = &(&(&pi() * &two) * &sqrt3()) * &n;
    let disk_area_max = &pi() * &n;
    let coefficient = &(&Interval::from_int(1) + &(&two * &sqrt3())) / &pi();
    let area_over_sys2 = &(&strip_area + &disk_area_max) / &(&pi() * &pi());
    let log2m = Interval::from_int(m as i64).log2();
    let bound = &coefficient * &log2m;
    // n <= log2(m): the n-form never exceeds the stated bound.
    debug_assert!(area_over_sys2.lo() <= bound.hi());
    Ok(TelescopeSigma {
        m,
        n: target.n,
        s: target.s(),
        strip_area,
        disk_area_max,
        systole: pi(),
        area_over_sys2,
        bound,
    })
}
