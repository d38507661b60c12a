//! Dense integer matrices and Smith normal form over the integers.
//!
//! Everything here is exact: entries are arbitrary-precision integers and the
//! reduction never leaves the integers. A fast `i128` path handles the common
//! case (boundary matrices have entries in {-1, 0, 1} and tame coefficient
//! growth); it falls back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows of machine integers (test and construction
    /// convenience).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(d));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn to_i128(&self) -> Option<Vec<i128>> {
        self.data.iter().map(|x| i128::try_from(x).ok()).collect()
    }
}

/// Invariant factors d1 | d2 | ... | dr of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// All nonzero invariant factors, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    /// Number of nonzero invariant factors.
    pub rank: usize,
}

impl SmithNormalForm {
    /// Invariant factors greater than one (the torsion part).
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// Product of all invariant factors greater than one.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors()
            .iter()
            .product::<BigInt>()
            .max(BigInt::one())
    }
}

/// Smith normal form with the unimodular transforms:
/// `row_transform * M * col_transform` is diagonal with the invariant factors
/// on the diagonal.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub snf: SmithNormalForm,
    pub row_transform: IntMatrix,
    pub col_transform: IntMatrix,
}

impl SnfDecomposition {
    /// Whether `b` lies in the column image of the decomposed matrix, i.e.
    /// whether `M x = b` has an integer solution.
    pub fn contains_in_image(&self, b: &[BigInt]) -> bool {
        let y = self.row_transform.mul_vec(b);
        for (i, yi) in y.iter().enumerate() {
            if i < self.snf.rank {
                if !yi.is_multiple_of(&self.snf.invariant_factors[i]) {
                    return false;
                }
            } else if !yi.is_zero() {
                return false;
            }
        }
        true
    }
}

/// Computes the invariant factors of `m`.
///
/// Pivots are chosen by minimal absolute value; the pivot is made to divide
/// the whole remaining submatrix before it is frozen, so the divisibility
/// chain holds by construction.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    if let Some(data) = m.to_i128() {
        let mut a = data;
        if let Ok(diag) = snf_reduce_i128(&mut a, m.rows, m.cols) {
            return factors_from_diag(diag.into_iter().map(BigInt::from).collect());
        }
    }
    let mut a = m.clone();
    let diag = snf_reduce_bigint(&mut a, None, None);
    factors_from_diag(diag)
}

/// Smith normal form with row/column transforms (big-integer path only;
/// intended for the modest matrices where a certificate is needed).
pub fn snf_with_transforms(m: &IntMatrix) -> SnfDecomposition {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let diag = snf_reduce_bigint(&mut a, Some(&mut u), Some(&mut v));
    let snf = factors_from_diag(diag);
    debug_assert!({
        let mut ok = true;
        for i in 0..a.rows {
            for j in 0..a.cols {
                let expect = if i == j && i < snf.rank {
                    snf.invariant_factors[i].clone()
                } else {
                    BigInt::zero()
                };
                ok &= *a.get(i, j) == expect;
            }
        }
        ok
    });
    SnfDecomposition {
        snf,
        row_transform: u,
        col_transform: v,
    }
}

fn factors_from_diag(diag: Vec<BigInt>) -> SmithNormalForm {
    let invariant_factors: Vec<BigInt> = diag
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.abs())
        .collect();
    for w in invariant_factors.windows(2) {
        debug_assert!(w[1].is_multiple_of(&w[0]), "invariant factor chain broken");
    }
    let rank = invariant_factors.len();
    SmithNormalForm {
        invariant_factors,
        rank,
    }
}

/// Rounded division: returns q with |a - q*b| <= |b|/2.
fn div_round_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn snf_reduce_bigint(
    a: &mut IntMatrix,
    mut u: Option<&mut IntMatrix>,
    mut v: Option<&mut IntMatrix>,
) -> Vec<BigInt> {
    let (m, n) = (a.rows, a.cols);
    let dim = m.min(n);
    let mut t = 0;
    while t < dim {
        // Minimal-absolute-value pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a.get(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(a, u.as_deref_mut(), t, pi);
        swap_cols(a, v.as_deref_mut(), t, pj);

        'reduce: loop {
            // Clear column t with Euclidean steps.
            let mut i = t + 1;
            while i < m {
                if !a.get(i, t).is_zero() {
                    let q = div_round_big(a.get(i, t), a.get(t, t));
                    row_submul(a, u.as_deref_mut(), i, t, &q);
                    if !a.get(i, t).is_zero() {
                        // Strictly smaller remainder becomes the new pivot.
                        swap_rows(a, u.as_deref_mut(), t, i);
                        continue;
                    }
                }
                i += 1;
            }
            // Clear row t.
            let mut j = t + 1;
            while j < n {
                if !a.get(t, j).is_zero() {
                    let q = div_round_big(a.get(t, j), a.get(t, t));
                    col_submul(a, v.as_deref_mut(), j, t, &q);
                    if !a.get(t, j).is_zero() {
                        swap_cols(a, v.as_deref_mut(), t, j);
                        continue;
                    }
                }
                j += 1;
            }
            // Row clearing may have dirtied the column.
            if (t + 1..m).any(|i| !a.get(i, t).is_zero()) {
                continue;
            }
            // Make the pivot divide the whole remaining submatrix.
            for i in t + 1..m {
                for j in t + 1..n {
                    if !a.get(i, j).is_multiple_of(a.get(t, t)) {
                        let one = BigInt::one();
                        row_submul(a, u.as_deref_mut(), t, i, &-&one);
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if a.get(t, t).is_negative() {
            negate_row(a, u.as_deref_mut(), t);
        }
        t += 1;
    }
    (0..dim).map(|i| a.get(i, i).clone()).collect()
}

fn swap_rows(a: &mut IntMatrix, u: Option<&mut IntMatrix>, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..a.cols {
        a.data.swap(r1 * a.cols + j, r2 * a.cols + j);
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            u.data.swap(r1 * u.cols + j, r2 * u.cols + j);
        }
    }
}

fn swap_cols(a: &mut IntMatrix, v: Option<&mut IntMatrix>, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..a.rows {
        a.data.swap(i * a.cols + c1, i * a.cols + c2);
    }
    if let Some(v) = v {
        for i in 0..v.rows {
            v.data.swap(i * v.cols + c1, i * v.cols + c2);
        }
    }
}

/// row_i -= q * row_t (also applied to the row transform).
fn row_submul(a: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..a.cols {
        let x = a.get(t, j) * q;
        let cell = &mut a.data[i * a.cols + j];
        *cell -= x;
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            let x = u.get(t, j) * q;
            let cell = &mut u.data[i * u.cols + j];
            *cell -= x;
        }
    }
}

/// col_j -= q * col_t (also applied to the column transform).
fn col_submul(a: &mut IntMatrix, v: Option<&mut IntMatrix>, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..a.rows {
        let x = a.get(i, t) * q;
        let cell = &mut a.data[i * a.cols + j];
        *cell -= x;
    }
    if let Some(v) = v {
        for i in 0..v.rows {
            let x = v.get(i, t) * q;
            let cell = &mut v.data[i * v.cols + j];
            *cell -= x;
        }
    }
}

fn negate_row(a: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize) {
    for j in 0..a.cols {
        let cell = &mut a.data[i * a.cols + j];
        *cell = -std::mem::take(cell);
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            let cell = &mut u.data[i * u.cols + j];
            *cell = -std::mem::take(cell);
        }
    }
}

#[derive(Debug)]
struct Overflow;

fn div_round_i128(a: i128, b: i128) -> Option<i128> {
    let q = a.checked_div(b)?;
    let r = a - q.checked_mul(b)?;
    if r.checked_abs()?.checked_mul(2)? > b.checked_abs()? {
        Some(if (r > 0) == (b > 0) {
            q.checked_add(1)?
        } else {
            q.checked_sub(1)?
        })
    } else {
        Some(q)
    }
}

fn snf_reduce_i128(data: &mut [i128], m: usize, n: usize) -> Result<Vec<i128>, Overflow> {
    let idx = |i: usize, j: usize| i * n + j;
    let dim = m.min(n);
    let mut t = 0;
    while t < dim {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = data[idx(i, j)];
                if x != 0
                    && pivot
                        .is_none_or(|(pi, pj)| x.unsigned_abs() < data[idx(pi, pj)].unsigned_abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            for j in 0..n {
                data.swap(idx(t, j), idx(pi, j));
            }
        }
        if pj != t {
            for i in 0..m {
                data.swap(idx(i, t), idx(i, pj));
            }
        }
        'reduce: loop {
            let mut i = t + 1;
            while i < m {
                if data[idx(i, t)] != 0 {
                    let q = div_round_i128(data[idx(i, t)], data[idx(t, t)]).ok_or(Overflow)?;
                    if q != 0 {
                        for j in t..n {
                            let x = data[idx(t, j)].checked_mul(q).ok_or(Overflow)?;
                            data[idx(i, j)] = data[idx(i, j)].checked_sub(x).ok_or(Overflow)?;
                        }
                    }
                    if data[idx(i, t)] != 0 {
                        for j in 0..n {
                            data.swap(idx(t, j), idx(i, j));
                        }
                        continue;
                    }
                }
                i += 1;
            }
            let mut j = t + 1;
            while j < n {
                if data[idx(t, j)] != 0 {
                    let q = div_round_i128(data[idx(t, j)], data[idx(t, t)]).ok_or(Overflow)?;
                    if q != 0 {
                        for i in t..m {
                            let x = data[idx(i, t)].checked_mul(q).ok_or(Overflow)?;
                            data[idx(i, j)] = data[idx(i, j)].checked_sub(x).ok_or(Overflow)?;
                        }
                    }
                    if data[idx(t, j)] != 0 {
                        for i in 0..m {
                            data.swap(idx(i, t), idx(i, j));
                        }
                        continue;
                    }
                }
                j += 1;
            }
            if (t + 1..m).any(|i| data[idx(i, t)] != 0) {
                continue;
            }
            let p = data[idx(t, t)];
            for i in t + 1..m {
                for j in t + 1..n {
                    if data[idx(i, j)] % p != 0 {
                        for jj in t..n {
                            data[idx(t, jj)] = data[idx(t, jj)]
                                .checked_add(data[idx(i, jj)])
                                .ok_or(Overflow)?;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if data[idx(t, t)] < 0 {
            for j in t..n {
                data[idx(t, j)] = data[idx(t, j)].checked_neg().ok_or(Overflow)?;
            }
        }
        t += 1;
    }
    Ok((0..dim).map(|i| data[idx(i, i)]).collect())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if let Some(data) = m.to_i128() {
        if let Some(d) = det_bareiss_i128(data, m.rows) {
            return BigInt::from(d);
        }
    }
    det_bareiss_big(m.data.clone(), m.rows)
}

fn det_bareiss_i128(mut a: Vec<i128>, n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[idx(k, k)] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[idx(i, k)] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(idx(k, j), idx(p, j));
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[idx(k, k)].checked_mul(a[idx(i, j)])?
                    - a[idx(i, k)].checked_mul(a[idx(k, j)])?;
                a[idx(i, j)] = num / prev;
            }
            a[idx(i, k)] = 0;
        }
        prev = a[idx(k, k)];
    }
    Some(sign * a[idx(n - 1, n - 1)])
}

fn det_bareiss_big(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[idx(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(idx(k, j), idx(p, j));
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[idx(k, k)] * &a[idx(i, j)] - &a[idx(i, k)] * &a[idx(k, j)];
                a[idx(i, j)] = num / &prev;
            }
            a[idx(i, k)] = BigInt::zero();
        }
        prev = a[idx(k, k)].clone();
    }
    sign * a[idx(n - 1, n - 1)].clone()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorsError {
    #[error("order {order} exceeds matrix dimensions {rows}x{cols}")]
    OrderTooLarge {
        order: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{count} minors of order {order} exceed the enumeration guard ({guard})")]
    TooLarge {
        order: usize,
        count: u128,
        guard: u128,
    },
}

const MINOR_GUARD: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Gcd of all k-by-k minors of `m` (0 if all vanish); the independent test
/// oracle for the invariant-factor products.
pub fn gcd_of_minors(m: &IntMatrix, k: usize) -> Result<BigInt, MinorsError> {
    if k == 0 {
        return Ok(BigInt::one());
    }
    if k > m.rows.min(m.cols) {
        return Err(MinorsError::OrderTooLarge {
            order: k,
            rows: m.rows,
            cols: m.cols,
        });
    }
    let count = binomial(m.rows, k).saturating_mul(binomial(m.cols, k));
    if count > MINOR_GUARD {
        return Err(MinorsError::TooLarge {
            order: k,
            count,
            guard: MINOR_GUARD,
        });
    }
    let mut acc = BigInt::zero();
    let mut row_sel = first_subset(k);
    loop {
        let mut col_sel = first_subset(k);
        loop {
            let mut sub = IntMatrix::zeros(k, k);
            for (si, &i) in row_sel.iter().enumerate() {
                for (sj, &j) in col_sel.iter().enumerate() {
                    sub.set(si, sj, m.get(i, j).clone());
                }
            }
            let d = determinant(&sub);
            if !d.is_zero() {
                acc = acc.gcd(&d);
                if acc.is_one() {
                    return Ok(acc);
                }
            }
            if !next_subset(&mut col_sel, m.cols) {
                break;
            }
        }
        if !next_subset(&mut row_sel, m.rows) {
            break;
        }
    }
    Ok(acc)
}

fn first_subset(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Advances a sorted k-subset of 0..n in lexicographic order.
fn next_subset(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if sel[i] < n - (k - i) {
            sel[i] += 1;
            for j in i + 1..k {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian rank of `m` reduced mod a prime `p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let mut a = to_mod_p(m, p);
    gauss_rank(&mut a, m.cols, p)
}

/// Whether `b` is in the column image of `m` over the field Z/p.
pub fn in_image_mod_p(m: &IntMatrix, b: &[BigInt], p: u64) -> bool {
    assert_eq!(b.len(), m.rows);
    let rank_plain = rank_mod_p(m, p);
    let mut aug = IntMatrix::zeros(m.rows, m.cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, bi.clone());
    }
    let mut a = to_mod_p(&aug, p);
    gauss_rank(&mut a, m.cols + 1, p) == rank_plain
}

fn to_mod_p(m: &IntMatrix, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    m.data
        .iter()
        .map(|x| u64::try_from(x.mod_floor(&pb)).expect("reduced value fits"))
        .collect()
}

fn gauss_rank(a: &mut [u64], cols: usize, p: u64) -> usize {
    let rows = a.len().checked_div(cols).unwrap_or(0);
    let idx = |i: usize, j: usize| i * cols + j;
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| !a[idx(i, col)].is_multiple_of(p)) else {
            continue;
        };
        for j in 0..cols {
            a.swap(idx(rank, j), idx(piv, j));
        }
        let inv = mod_inverse(a[idx(rank, col)] % p, p);
        for j in 0..cols {
            a[idx(rank, j)] = mulmod(a[idx(rank, j)] % p, inv, p);
        }
        for i in 0..rows {
            if i != rank && !a[idx(i, col)].is_multiple_of(p) {
                let f = a[idx(i, col)] % p;
                for j in 0..cols {
                    let sub = mulmod(f, a[idx(rank, j)], p);
                    a[idx(i, j)] = (a[idx(i, j)] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime in every caller.
    let mut result: u64 = 1;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    result
}
