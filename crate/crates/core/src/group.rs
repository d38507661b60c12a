//! Symbolic specifications of the group families the bound machinery knows.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{parse_chain, split_top_level};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupSpecError {
    #[error("invalid invariant factor chain: {0}")]
    InvalidChain(String),
    #[error("cyclic order must be at least 2")]
    CyclicOrderTooSmall,
    #[error("surface genus must be at least 1")]
    GenusTooSmall,
    #[error("malformed group spec {0:?}")]
    Parse(String),
}

/// A finitely presentable group given by family and parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Trivial,
    Free { rank: usize },
    Cyclic { order: u64 },
    FiniteAbelian { chain: Vec<u64> },
    FgAbelian { rank: usize, chain: Vec<u64> },
    SurfaceOrientable { genus: u64 },
    FreeProduct { factors: Vec<GroupSpec> },
}

impl GroupSpec {
    pub fn cyclic(order: u64) -> Result<Self, GroupSpecError> {
        if order < 2 {
            return Err(GroupSpecError::CyclicOrderTooSmall);
        }
        Ok(GroupSpec::Cyclic { order })
    }

    pub fn finite_abelian(chain: Vec<u64>) -> Result<Self, GroupSpecError> {
        validate_chain(&chain)?;
        if chain.is_empty() {
            return Ok(GroupSpec::Trivial);
        }
        Ok(GroupSpec::FiniteAbelian { chain })
    }

    pub fn fg_abelian(rank: usize, chain: Vec<u64>) -> Result<Self, GroupSpecError> {
        validate_chain(&chain)?;
        Ok(GroupSpec::FgAbelian { rank, chain })
    }

    /// Whether the group is free (including the trivial group).
    pub fn is_free(&self) -> bool {
        match self {
            GroupSpec::Trivial | GroupSpec::Free { .. } => true,
            GroupSpec::Cyclic { .. }
            | GroupSpec::FiniteAbelian { .. }
            | GroupSpec::SurfaceOrientable { .. } => false,
            GroupSpec::FgAbelian { rank, chain } => chain.is_empty() && *rank <= 1,
            GroupSpec::FreeProduct { factors } => factors.iter().all(GroupSpec::is_free),
        }
    }

    /// Whether the group has Z/2 as a free-product factor.
    pub fn has_z2_free_factor(&self) -> bool {
        match self {
            GroupSpec::Cyclic { order } => *order == 2,
            GroupSpec::FiniteAbelian { chain } => chain == &[2],
            GroupSpec::FgAbelian { rank, chain } => *rank == 0 && chain == &[2],
            GroupSpec::FreeProduct { factors } => factors.iter().any(GroupSpec::has_z2_free_factor),
            _ => false,
        }
    }

    /// Order of the torsion subgroup of H1 (the abelianization).
    pub fn h1_torsion_order(&self) -> BigInt {
        match self {
            GroupSpec::Trivial | GroupSpec::Free { .. } => BigInt::one(),
            GroupSpec::Cyclic { order } => BigInt::from(*order),
            GroupSpec::FiniteAbelian { chain } | GroupSpec::FgAbelian { chain, .. } => chain
                .iter()
                .map(|&n| BigInt::from(n))
                .product::<BigInt>()
                .max(BigInt::one()),
            GroupSpec::SurfaceOrientable { .. } => BigInt::one(),
            GroupSpec::FreeProduct { factors } => {
                factors.iter().map(|f| f.h1_torsion_order()).product()
            }
        }
    }

    /// First Betti number of the abelianization.
    pub fn h1_rank(&self) -> usize {
        match self {
            GroupSpec::Trivial => 0,
            GroupSpec::Free { rank } => *rank,
            GroupSpec::Cyclic { .. } | GroupSpec::FiniteAbelian { .. } => 0,
            GroupSpec::FgAbelian { rank, .. } => *rank,
            GroupSpec::SurfaceOrientable { genus } => 2 * *genus as usize,
            GroupSpec::FreeProduct { factors } => factors.iter().map(GroupSpec::h1_rank).sum(),
        }
    }

    /// Invariant factor chain of the torsion part of H1.
    pub fn h1_torsion_chain(&self) -> Vec<u64> {
        match self {
            GroupSpec::Cyclic { order } => vec![*order],
            GroupSpec::FiniteAbelian { chain } | GroupSpec::FgAbelian { chain, .. } => {
                chain.clone()
            }
            GroupSpec::FreeProduct { factors } => {
                // Direct sum of the factor torsion parts, renormalized.
                let mut diag: Vec<u64> = Vec::new();
                for f in factors {
                    diag.extend(f.h1_torsion_chain());
                }
                normalize_chain(&diag)
            }
            _ => Vec::new(),
        }
    }

    /// Parses the registry grammar:
    /// `trivial | free:n | cyclic:m | finite_abelian:n1,n2,... |
    ///  abelian:r:(chain) | fg_abelian:r:(chain) | surface:l |
    ///  freeprod:(spec,spec,...)`.
    pub fn parse(input: &str) -> Result<Self, GroupSpecError> {
        let input = input.trim();
        if input == "trivial" {
            return Ok(GroupSpec::Trivial);
        }
        if let Some(arg) = input.strip_prefix("free:") {
            let rank = arg
                .parse()
                .map_err(|_| GroupSpecError::Parse(input.into()))?;
            return Ok(GroupSpec::Free { rank });
        }
        if let Some(arg) = input.strip_prefix("cyclic:") {
            let order = arg
                .parse()
                .map_err(|_| GroupSpecError::Parse(input.into()))?;
            return GroupSpec::cyclic(order);
        }
        if let Some(arg) = input.strip_prefix("finite_abelian:") {
            let chain: Option<Vec<u64>> = arg.split(',').map(|t| t.trim().parse().ok()).collect();
            let chain = chain.ok_or_else(|| GroupSpecError::Parse(input.into()))?;
            return GroupSpec::finite_abelian(chain);
        }
        for prefix in ["abelian:", "fg_abelian:"] {
            if let Some(arg) = input.strip_prefix(prefix) {
                let (rank_str, chain_str) = arg
                    .split_once(':')
                    .ok_or_else(|| GroupSpecError::Parse(input.into()))?;
                let rank = rank_str
                    .parse()
                    .map_err(|_| GroupSpecError::Parse(input.into()))?;
                let chain =
                    parse_chain(chain_str).ok_or_else(|| GroupSpecError::Parse(input.into()))?;
                return GroupSpec::fg_abelian(rank, chain);
            }
        }
        if let Some(arg) = input.strip_prefix("surface:") {
            let genus: u64 = arg
                .parse()
                .map_err(|_| GroupSpecError::Parse(input.into()))?;
            if genus < 1 {
                return Err(GroupSpecError::GenusTooSmall);
            }
            return Ok(GroupSpec::SurfaceOrientable { genus });
        }
        if let Some(arg) = input.strip_prefix("freeprod:") {
            let inner = arg
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| GroupSpecError::Parse(input.into()))?;
            let factors: Result<Vec<GroupSpec>, _> = split_top_level(inner)
                .into_iter()
                .map(GroupSpec::parse)
                .collect();
            let factors = factors?;
            if factors.len() < 2 {
                return Err(GroupSpecError::Parse(input.into()));
            }
            return Ok(GroupSpec::FreeProduct { factors });
        }
        Err(GroupSpecError::Parse(input.into()))
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::Free { rank } => write!(f, "free:{rank}"),
            GroupSpec::Cyclic { order } => write!(f, "cyclic:{order}"),
            GroupSpec::FiniteAbelian { chain } => {
                let parts: Vec<String> = chain.iter().map(u64::to_string).collect();
                write!(f, "finite_abelian:{}", parts.join(","))
            }
            GroupSpec::FgAbelian { rank, chain } => {
                let parts: Vec<String> = chain.iter().map(u64::to_string).collect();
                write!(f, "abelian:{rank}:({})", parts.join(","))
            }
            GroupSpec::SurfaceOrientable { genus } => write!(f, "surface:{genus}"),
            GroupSpec::FreeProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(GroupSpec::to_string).collect();
                write!(f, "freeprod:({})", parts.join(","))
            }
        }
    }
}

fn validate_chain(chain: &[u64]) -> Result<(), GroupSpecError> {
    for &n in chain {
        if n < 2 {
            return Err(GroupSpecError::InvalidChain(format!("factor {n} < 2")));
        }
    }
    for w in chain.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(GroupSpecError::InvalidChain(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Renormalizes a diagonal of cyclic orders into an invariant factor chain.
pub fn normalize_chain(diag: &[u64]) -> Vec<u64> {
    let mut d: Vec<u64> = diag.iter().copied().filter(|&x| x > 1).collect();
    loop {
        let mut changed = false;
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if !d[j].is_multiple_of(d[i]) {
                    let g = gcd(d[i], d[j]);
                    let l = d[i] / g * d[j];
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d.retain(|&x| x > 1);
    d.sort_unstable();
    d
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [
            "trivial",
            "free:5",
            "cyclic:12",
            "finite_abelian:2,4",
            "abelian:2:(3,6)",
            "surface:3",
            "freeprod:(cyclic:2,cyclic:3)",
            "freeprod:(cyclic:2,freeprod:(cyclic:3,free:1))",
        ] {
            let spec = GroupSpec::parse(s).unwrap();
            let again = GroupSpec::parse(&spec.to_string()).unwrap();
            assert_eq!(spec, again, "{s}");
        }
        assert!(GroupSpec::parse("cyclic:1").is_err());
        assert!(GroupSpec::parse("finite_abelian:2,3").is_err());
        assert!(GroupSpec::parse("wat").is_err());
    }

    #[test]
    fn torsion_and_rank() {
        let spec = GroupSpec::parse("freeprod:(cyclic:2,cyclic:3)").unwrap();
        assert_eq!(spec.h1_torsion_order(), BigInt::from(6));
        assert_eq!(spec.h1_torsion_chain(), vec![6]);
        assert!(spec.has_z2_free_factor());
        assert!(!spec.is_free());

        let f = GroupSpec::Free { rank: 3 };
        assert!(f.is_free());
        assert_eq!(f.h1_rank(), 3);

        let ab = GroupSpec::fg_abelian(2, vec![2, 4]).unwrap();
        assert_eq!(ab.h1_rank(), 2);
        assert_eq!(ab.h1_torsion_order(), BigInt::from(8));

        let surf = GroupSpec::SurfaceOrientable { genus: 4 };
        assert_eq!(surf.h1_rank(), 8);
        assert_eq!(surf.h1_torsion_order(), BigInt::one());
    }

    #[test]
    fn chain_normalization() {
        assert_eq!(normalize_chain(&[2, 3]), vec![6]);
        assert_eq!(normalize_chain(&[2, 2]), vec![2, 2]);
        assert_eq!(normalize_chain(&[4, 6]), vec![2, 12]);
        assert_eq!(normalize_chain(&[1, 5]), vec![5]);
    }
}
