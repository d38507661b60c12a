//! Exact rational interval arithmetic with certified enclosures of the
//! transcendental constants and functions the bound formulas need.
//!
//! Endpoints are arbitrary-precision rationals; every operation rounds
//! outward. Constants are evaluated from alternating or tail-bounded series
//! with exact rational partial sums, so enclosures are rigorous, then
//! compressed to dyadic endpoints of ~77 significant digits.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision in bits (~77 decimal digits).
const WORK_BITS: u32 = 256;

/// A closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Interval::point(BigRational::from_integer(n.clone()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Interval::point(ratio(n, d))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    /// Certainly less-than-or-equal: every value here is <= every value there.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Outward rounding to dyadic endpoints with `bits` fractional bits;
    /// keeps representations compact between transcendental steps.
    pub fn tightened(&self, bits: u32) -> Self {
        Interval {
            lo: dyadic_floor(&self.lo, bits),
            hi: dyadic_ceil(&self.hi, bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal lower bound, rounded toward minus infinity.
    pub fn decimal_lo(&self, digits: usize) -> String {
        decimal(&self.lo, digits, false)
    }

    /// Decimal upper bound, rounded toward plus infinity.
    pub fn decimal_hi(&self, digits: usize) -> String {
        decimal(&self.hi, digits, true)
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Square root, requiring a nonnegative lower endpoint.
    pub fn sqrt(&self) -> Interval {
        assert!(
            !self.lo.is_negative(),
            "sqrt of an interval reaching below zero"
        );
        Interval {
            lo: sqrt_lower(&self.lo),
            hi: sqrt_upper(&self.hi),
        }
    }

    /// Natural logarithm (positive intervals).
    pub fn ln(&self) -> Interval {
        assert!(self.lo.is_positive(), "ln of a non-positive interval");
        Interval {
            lo: ln_rational(&self.lo).lo,
            hi: ln_rational(&self.hi).hi,
        }
    }

    /// Base-2 logarithm (positive intervals); exact on powers of two.
    pub fn log2(&self) -> Interval {
        assert!(self.lo.is_positive(), "log2 of a non-positive interval");
        if self.lo == self.hi {
            if let Some(k) = exact_log2(&self.lo) {
                return Interval::from_int(k);
            }
        }
        &self.ln() / &ln2()
    }

    pub fn exp(&self) -> Interval {
        Interval {
            lo: exp_rational(&self.lo).lo,
            hi: exp_rational(&self.hi).hi,
        }
    }

    /// `self^expo` for a positive base.
    pub fn pow(&self, expo: &Interval) -> Interval {
        assert!(self.lo.is_positive(), "pow of a non-positive base");
        (&self.ln() * expo).exp()
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Div for &Interval {
    type Output = Interval;
    fn div(self, rhs: &Interval) -> Interval {
        assert!(
            rhs.lo.is_positive() || rhs.hi.is_negative(),
            "division by an interval containing zero"
        );
        let quotients = [
            &self.lo / &rhs.lo,
            &self.lo / &rhs.hi,
            &self.hi / &rhs.lo,
            &self.hi / &rhs.hi,
        ];
        let lo = quotients.iter().min().unwrap().clone();
        let hi = quotients.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

fn dyadic_floor(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (q * BigRational::from_integer(scale.clone())).floor();
    scaled / BigRational::from_integer(scale)
}

fn dyadic_ceil(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (q * BigRational::from_integer(scale.clone())).ceil();
    scaled / BigRational::from_integer(scale)
}

fn decimal(q: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let negative = n.sign() == Sign::Minus;
    let digits_str = n.magnitude().to_string();
    let padded = if digits_str.len() <= digits {
        format!(
            "{}{}",
            "0".repeat(digits + 1 - digits_str.len()),
            digits_str
        )
    } else {
        digits_str
    };
    let point = padded.len() - digits;
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&padded[..point]);
    if digits > 0 {
        s.push('.');
        s.push_str(&padded[point..]);
    }
    s
}

/// Lower bound for the square root of a nonnegative rational; exact when the
/// rational is a perfect square.
fn sqrt_lower(q: &BigRational) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let rn = q.numer().sqrt();
    let rd = q.denom().sqrt();
    if &(&rn * &rn) == q.numer() && &(&rd * &rd) == q.denom() {
        return BigRational::new(rn, rd);
    }
    // sqrt(n/d) = sqrt(n d) / d.
    let nd = q.numer() * q.denom();
    let scaled: BigInt = &nd << (2 * WORK_BITS);
    let s = scaled.sqrt();
    BigRational::new(s, q.denom() << WORK_BITS)
}

fn sqrt_upper(q: &BigRational) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let rn = q.numer().sqrt();
    let rd = q.denom().sqrt();
    if &(&rn * &rn) == q.numer() && &(&rd * &rd) == q.denom() {
        return BigRational::new(rn, rd);
    }
    let nd = q.numer() * q.denom();
    let scaled: BigInt = &nd << (2 * WORK_BITS);
    let s = scaled.sqrt() + BigInt::one();
    BigRational::new(s, q.denom() << WORK_BITS)
}

/// If q is an exact (possibly negative) power of two, its exponent.
fn exact_log2(q: &BigRational) -> Option<i64> {
    let one = BigInt::one();
    let num = q.numer();
    let den = q.denom();
    let is_pow2 = |x: &BigInt| x.sign() == Sign::Plus && (x & &(x - &one)).is_zero();
    if !is_pow2(num) || !is_pow2(den) {
        return None;
    }
    let bits = |x: &BigInt| x.bits() as i64 - 1;
    Some(bits(num) - bits(den))
}

/// arctan(1/x) for integer x >= 2, by the alternating Taylor series.
fn atan_recip(x: i64) -> Interval {
    let x2 = BigRational::from_integer(BigInt::from(x * x));
    let mut term = ratio(1, x);
    let mut sum = BigRational::zero();
    let mut k: i64 = 0;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (WORK_BITS + 8));
    loop {
        let contribution = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += &contribution;
        } else {
            sum -= &contribution;
        }
        term /= &x2;
        k += 1;
        let next = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
        if next < eps {
            // Alternating series: the limit lies between consecutive sums.
            let (lo, hi) = if k % 2 == 0 {
                (sum.clone(), &sum + &next)
            } else {
                (&sum - &next, sum.clone())
            };
            return Interval::new(lo, hi).tightened(WORK_BITS);
        }
    }
}

/// atanh(t) for |t| < 1, with a geometric tail bound.
fn atanh(t: &BigRational) -> Interval {
    if t.is_zero() {
        return Interval::point(BigRational::zero());
    }
    if t.is_negative() {
        return -&atanh(&-t.clone());
    }
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (WORK_BITS + 8));
    loop {
        sum += &power / BigRational::from_integer(BigInt::from(2 * j + 1));
        power *= &t2;
        j += 1;
        let next = &power / BigRational::from_integer(BigInt::from(2 * j + 1));
        if next < eps {
            // Tail <= next / (1 - t^2).
            let tail = &next / (BigRational::one() - &t2);
            return Interval::new(sum.clone(), &sum + &tail).tightened(WORK_BITS);
        }
    }
}

/// ln of a positive rational: dyadic argument reduction into [2/3, 4/3]
/// (a single shift computed from bit lengths, so enormous inputs stay
/// cheap), outward compression of the reduced argument, then the atanh
/// series around one on the compact endpoints.
fn ln_rational(q: &BigRational) -> Interval {
    assert!(q.is_positive());
    let shift_by = |k: i64| -> BigRational {
        if k >= 0 {
            q / BigRational::from_integer(BigInt::one() << (k as u64))
        } else {
            q * BigRational::from_integer(BigInt::one() << ((-k) as u64))
        }
    };
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let four_thirds = ratio(4, 3);
    let two_thirds = ratio(2, 3);
    let mut r = shift_by(k);
    while r > four_thirds {
        k += 1;
        r = shift_by(k);
    }
    while r < two_thirds {
        k -= 1;
        r = shift_by(k);
    }
    // ln is monotone: evaluate the series on compact dyadic endpoints.
    let compact = Interval::point(r).tightened(WORK_BITS + 16);
    let t_of = |x: &BigRational| (x - BigRational::one()) / (x + BigRational::one());
    let lo = &atanh(&t_of(compact.lo())) * &Interval::from_int(2);
    let hi = &atanh(&t_of(compact.hi())) * &Interval::from_int(2);
    let core = Interval::new(lo.lo().clone(), hi.hi().clone());
    let shift = &ln2() * &Interval::from_int(k);
    (&core + &shift).tightened(WORK_BITS)
}

/// exp of a rational: halve into [-1/2, 1/2], Taylor with factorial tail
/// bound, then repeated interval squaring.
fn exp_rational(q: &BigRational) -> Interval {
    let mut halvings = 0u32;
    let mut r = q.clone();
    let half = ratio(1, 2);
    let two = BigRational::from_integer(2.into());
    while r.abs() > half {
        r /= &two;
        halvings += 1;
        assert!(halvings < 64, "exp argument out of supported range");
    }
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut i: i64 = 0;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (WORK_BITS + 8));
    loop {
        i += 1;
        term = &term * &r / BigRational::from_integer(BigInt::from(i));
        sum += &term;
        let bound = term.abs();
        if bound < eps {
            // |tail| <= 2 |term| for |r| <= 1/2.
            let tail = &bound * &two;
            let mut acc = Interval::new(&sum - &tail, &sum + &tail).tightened(WORK_BITS);
            for _ in 0..halvings {
                acc = (&acc * &acc).tightened(WORK_BITS);
            }
            return acc;
        }
    }
}

macro_rules! cached_constant {
    ($(#[$attr:meta])* $name:ident, $build:expr) => {
        $(#[$attr])*
        pub fn $name() -> Interval {
            static CELL: OnceLock<Interval> = OnceLock::new();
            CELL.get_or_init(|| $build).clone()
        }
    };
}

cached_constant!(
    /// pi = 16 arctan(1/5) - 4 arctan(1/239).
    pi,
    (&(&atan_recip(5) * &Interval::from_int(16)) - &(&atan_recip(239) * &Interval::from_int(4)))
        .tightened(WORK_BITS)
);

cached_constant!(
    /// ln 2 = 2 atanh(1/3).
    ln2,
    &atanh(&ratio(1, 3)) * &Interval::from_int(2)
);

cached_constant!(ln3, ln_rational(&ratio(3, 1)));

cached_constant!(sqrt3, Interval::from_int(3).sqrt());

cached_constant!(
    /// ln 25 = 2 ln 5.
    ln25,
    &ln_rational(&ratio(5, 1)) * &Interval::from_int(2)
);

#[cfg(test)]
mod tests {
    use super::*;

    fn close_to(iv: &Interval, expected: f64, tol: f64) -> bool {
        (iv.to_f64() - expected).abs() < tol && iv.width().to_f64().unwrap() < tol
    }

    #[test]
    fn constants_enclose_known_digits() {
        assert!(close_to(&pi(), std::f64::consts::PI, 1e-12));
        assert!(close_to(&sqrt3(), 3f64.sqrt(), 1e-12));
        assert!(close_to(&ln2(), std::f64::consts::LN_2, 1e-12));
        assert!(close_to(&ln25(), 25f64.ln(), 1e-12));
        // Widths are far below the 50-digit requirement.
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(60));
        assert!(pi().width() < tiny);
        assert!(sqrt3().width() < tiny);
        assert!(ln25().width() < tiny);
    }

    #[test]
    fn pi_known_enclosure() {
        // 50-digit reference: 3.14159265358979323846264338327950288419716939937510...
        let parse = |s: &str| {
            let (int, frac) = s.split_once('.').unwrap();
            let denom = BigInt::from(10).pow(frac.len() as u32);
            BigRational::new(
                int.parse::<BigInt>().unwrap() * &denom + frac.parse::<BigInt>().unwrap(),
                denom,
            )
        };
        let lo = parse("3.14159265358979323846264338327950288419716939937510");
        let hi = parse("3.14159265358979323846264338327950288419716939937511");
        assert!(pi().lo() > &lo);
        assert!(pi().hi() < &hi);
    }

    #[test]
    fn interval_arithmetic_is_exact_on_rationals() {
        let third = Interval::from_ratio(1, 3);
        let two_pi = &pi() * &Interval::from_int(2);
        // (2 pi / 3) * 3 == 2 pi exactly: rational endpoint arithmetic.
        let scaled = &(&two_pi * &third) * &Interval::from_int(3);
        assert_eq!(scaled, two_pi);
    }

    #[test]
    fn sqrt_detects_perfect_squares() {
        assert_eq!(Interval::from_int(4).sqrt(), Interval::from_int(2));
        assert_eq!(
            Interval::from_ratio(9, 16).sqrt(),
            Interval::from_ratio(3, 4)
        );
    }

    #[test]
    fn log2_exact_on_powers_of_two() {
        assert_eq!(Interval::from_int(1024).log2(), Interval::from_int(10));
        assert_eq!(Interval::from_ratio(1, 8).log2(), Interval::from_int(-3));
        assert_eq!(Interval::from_int(1).log2(), Interval::from_int(0));
        let l3 = Interval::from_int(3).log2();
        assert!(close_to(&l3, 3f64.log2(), 1e-12));
    }

    #[test]
    fn exp_and_ln_are_inverse_enclosures() {
        for q in [ratio(1, 1), ratio(7, 3), ratio(-5, 2), ratio(41, 7)] {
            let e = exp_rational(&q);
            let back = e.ln();
            assert!(back.contains(&q), "ln(exp({q})) should contain {q}");
        }
    }

    #[test]
    fn pow_matches_f64() {
        let p = Interval::from_int(2).pow(&Interval::from_ratio(3, 2));
        assert!(close_to(&p, 2f64.powf(1.5), 1e-10));
    }

    #[test]
    fn ordering_queries() {
        let a = Interval::from_ratio(1, 3);
        let b = Interval::from_ratio(1, 2);
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_le(&a));
        assert!((&pi() / &Interval::from_int(16)).certainly_lt(&Interval::from_ratio(2, 10)));
    }

    #[test]
    fn decimal_rendering() {
        let x = Interval::from_ratio(1, 3);
        assert_eq!(x.decimal_lo(5), "0.33333");
        assert_eq!(x.decimal_hi(5), "0.33334");
        let neg = Interval::from_ratio(-1, 3);
        assert_eq!(neg.decimal_lo(3), "-0.334");
        assert_eq!(neg.decimal_hi(3), "-0.333");
        assert_eq!(Interval::from_int(5).decimal_lo(2), "5.00");
    }
}
