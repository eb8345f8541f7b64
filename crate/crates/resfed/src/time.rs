//! Exact time arithmetic.
//!
//! Every feasibility decision in this crate is made over exact rationals:
//! budgets like 7.5 and comparisons against irrational inflation factors must
//! not wobble with floating-point rounding. [`TimeValue`] is a non-negative
//! rational duration/instant, [`Period`] adds the "never released again"
//! variant used for one-shot tasks, and [`Sqrt2Ext`] is the field ℚ(√2) in
//! which inflation factors such as 1+√2 are compared exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed exact rational, used for slacks, utilizations and intermediate math.
pub type Rat = BigRational;

/// Helper: rational from a signed integer pair. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Ceiling of a non-negative rational as a `u64`, or `None` on overflow.
pub fn ceil_u64(r: &Rat) -> Option<u64> {
    r.ceil().to_integer().to_u64()
}

/// A finite, non-negative, exact rational point in time or duration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeValue(Rat);

impl TimeValue {
    pub fn zero() -> Self {
        TimeValue(Rat::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        TimeValue(Rat::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a time value. Panics on `den == 0` or a negative result;
    /// intended for literals in code and tests.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "time value denominator must be nonzero");
        TimeValue(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn try_from_rat(r: Rat) -> Result<Self, NegativeTime> {
        if r.is_negative() {
            Err(NegativeTime(r))
        } else {
            Ok(TimeValue(r))
        }
    }

    pub fn rat(&self) -> &Rat {
        &self.0
    }

    pub fn into_rat(self) -> Rat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `self - other`, or `None` if the result would be negative.
    pub fn checked_sub(&self, other: &TimeValue) -> Option<TimeValue> {
        if self.0 >= other.0 {
            Some(TimeValue(&self.0 - &other.0))
        } else {
            None
        }
    }

    /// `self - other` as a signed rational.
    pub fn signed_sub(&self, other: &TimeValue) -> Rat {
        &self.0 - &other.0
    }

    pub fn min(self, other: TimeValue) -> TimeValue {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: TimeValue) -> TimeValue {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn scale(&self, factor: &Rat) -> Result<TimeValue, NegativeTime> {
        TimeValue::try_from_rat(&self.0 * factor)
    }

    /// Lossy conversion for display and plotting output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Attempted to construct a negative time value.
#[derive(Debug, Clone, thiserror::Error)]
#[error("negative time value {0}")]
pub struct NegativeTime(pub Rat);

impl fmt::Display for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &TimeValue {
    type Output = TimeValue;
    fn add(self, rhs: &TimeValue) -> TimeValue {
        TimeValue(&self.0 + &rhs.0)
    }
}

impl Add for TimeValue {
    type Output = TimeValue;
    fn add(self, rhs: TimeValue) -> TimeValue {
        TimeValue(self.0 + rhs.0)
    }
}

impl AddAssign<&TimeValue> for TimeValue {
    fn add_assign(&mut self, rhs: &TimeValue) {
        self.0 += &rhs.0;
    }
}

impl Sub for &TimeValue {
    type Output = TimeValue;
    /// Panics if the result would be negative; use `checked_sub` when in doubt.
    fn sub(self, rhs: &TimeValue) -> TimeValue {
        self.checked_sub(rhs)
            .unwrap_or_else(|| panic!("time underflow: {self} - {rhs}"))
    }
}

impl Mul<&Rat> for &TimeValue {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        &self.0 * rhs
    }
}

impl Mul<u64> for &TimeValue {
    type Output = TimeValue;
    fn mul(self, rhs: u64) -> TimeValue {
        TimeValue(&self.0 * BigInt::from(rhs))
    }
}

impl Div for &TimeValue {
    type Output = Rat;
    /// Panics if `rhs` is zero.
    fn div(self, rhs: &TimeValue) -> Rat {
        assert!(!rhs.is_zero(), "division by zero time value");
        &self.0 / &rhs.0
    }
}

impl std::iter::Sum<TimeValue> for TimeValue {
    fn sum<I: Iterator<Item = TimeValue>>(iter: I) -> TimeValue {
        iter.fold(TimeValue::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a TimeValue> for TimeValue {
    fn sum<I: Iterator<Item = &'a TimeValue>>(iter: I) -> TimeValue {
        iter.fold(TimeValue::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Minimum inter-arrival time of a sporadic task: finite, or "released once".
#[derive(Clone, PartialEq, Eq)]
pub enum Period {
    Finite(TimeValue),
    Infinite,
}

impl Period {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Period::Infinite)
    }

    pub fn finite(&self) -> Option<&TimeValue> {
        match self {
            Period::Finite(t) => Some(t),
            Period::Infinite => None,
        }
    }

    /// `min(T, other)`; an infinite period never wins.
    pub fn min_with(&self, other: &TimeValue) -> TimeValue {
        match self {
            Period::Finite(t) if t < other => t.clone(),
            _ => other.clone(),
        }
    }

    /// Utilization contribution `cost / T`; zero for a one-shot task.
    pub fn utilization_of(&self, cost: &TimeValue) -> Rat {
        match self {
            Period::Finite(t) => cost / t,
            Period::Infinite => Rat::zero(),
        }
    }

    /// Number of jobs released in `[0, t)` under synchronous, maximally dense
    /// arrivals, i.e. `ceil(t / T)`; a one-shot task contributes one job.
    pub fn jobs_in(&self, t: &TimeValue) -> BigInt {
        if t.is_zero() {
            return BigInt::zero();
        }
        match self {
            Period::Finite(p) => {
                let q = t.rat() / p.rat();
                q.ceil().to_integer()
            }
            Period::Infinite => BigInt::one(),
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Finite(t) => write!(f, "{t}"),
            Period::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An exact element of ℚ(√2): the value `p + q·√2`.
///
/// Closed under the field operations, totally ordered, and comparable against
/// rationals without any rounding: sign questions reduce to integer
/// comparisons after squaring. This is how the inflation factor 1+√2 is
/// handled throughout: classification and feasibility never depend on a
/// decimal approximation of √2.
#[derive(Clone, PartialEq, Eq)]
pub struct Sqrt2Ext {
    p: Rat,
    q: Rat,
}

impl Sqrt2Ext {
    pub fn from_rat(p: Rat) -> Self {
        Sqrt2Ext { p, q: Rat::zero() }
    }

    pub fn new(p: Rat, q: Rat) -> Self {
        Sqrt2Ext { p, q }
    }

    pub fn sqrt2() -> Self {
        Sqrt2Ext {
            p: Rat::zero(),
            q: Rat::one(),
        }
    }

    pub fn one_plus_sqrt2() -> Self {
        Sqrt2Ext {
            p: Rat::one(),
            q: Rat::one(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// The rational part when `q == 0`.
    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.p)
    }

    /// Exact sign of `p + q·√2`.
    pub fn sign(&self) -> Ordering {
        let (p, q) = (&self.p, &self.q);
        match (p.is_negative(), q.is_negative()) {
            (false, false) => {
                if p.is_zero() && q.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            (true, true) => Ordering::Less,
            // p >= 0, q < 0: sign of p² - 2q²
            (false, true) => (p * p).cmp(&(q * q * BigInt::from(2))),
            // p < 0, q >= 0: sign of 2q² - p²
            (true, false) => (q * q * BigInt::from(2)).cmp(&(p * p)),
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        (self - &Sqrt2Ext::from_rat(r.clone())).sign()
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Sqrt2Ext {
        // 1/(p + q√2) = (p - q√2) / (p² - 2q²); the denominator vanishes
        // only at p = q = 0 since √2 is irrational.
        let denom = &self.p * &self.p - &self.q * &self.q * BigInt::from(2);
        assert!(!denom.is_zero(), "inverse of zero");
        Sqrt2Ext {
            p: &self.p / &denom,
            q: -(&self.q / &denom),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }

    /// Tightest rational upper bound with denominator at most `max_den`,
    /// built from the continued-fraction convergents of √2. Conservative in
    /// the sense that the returned rational is never below the true value.
    pub fn rational_upper_bound(&self, max_den: u64) -> Rat {
        match self.q.sign() {
            Sign::NoSign => self.p.clone(),
            Sign::Plus => &self.p + &self.q * sqrt2_bound(max_den, true),
            Sign::Minus => &self.p + &self.q * sqrt2_bound(max_den, false),
        }
    }

    /// Tightest rational lower bound with denominator at most `max_den`.
    pub fn rational_lower_bound(&self, max_den: u64) -> Rat {
        match self.q.sign() {
            Sign::NoSign => self.p.clone(),
            Sign::Plus => &self.p + &self.q * sqrt2_bound(max_den, false),
            Sign::Minus => &self.p + &self.q * sqrt2_bound(max_den, true),
        }
    }
}

/// A convergent of √2 = [1; 2, 2, 2, ...] with denominator bounded by
/// `max_den`, from above (`upper`) or below.
fn sqrt2_bound(max_den: u64, upper: bool) -> Rat {
    // Convergents h/k alternate: 1/1 <, 3/2 >, 7/5 <, 17/12 >, ...
    let (mut h0, mut k0) = (BigInt::from(1), BigInt::from(1));
    let (mut h1, mut k1) = (BigInt::from(3), BigInt::from(2));
    let bound = BigInt::from(max_den);
    let mut below = (h0.clone(), k0.clone());
    let mut above = (h1.clone(), k1.clone());
    loop {
        let h2 = BigInt::from(2) * &h1 + &h0;
        let k2 = BigInt::from(2) * &k1 + &k0;
        if k2 > bound {
            break;
        }
        // h2/k2 lies above √2 iff h2² > 2·k2² (never equal: √2 is irrational).
        let side_above = &h2 * &h2 > BigInt::from(2) * &k2 * &k2;
        if side_above {
            above = (h2.clone(), k2.clone());
        } else {
            below = (h2.clone(), k2.clone());
        }
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
    }
    let (h, k) = if upper { above } else { below };
    Rat::new(h, k)
}

impl Add for &Sqrt2Ext {
    type Output = Sqrt2Ext;
    fn add(self, rhs: &Sqrt2Ext) -> Sqrt2Ext {
        Sqrt2Ext {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Sub for &Sqrt2Ext {
    type Output = Sqrt2Ext;
    fn sub(self, rhs: &Sqrt2Ext) -> Sqrt2Ext {
        Sqrt2Ext {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Mul for &Sqrt2Ext {
    type Output = Sqrt2Ext;
    fn mul(self, rhs: &Sqrt2Ext) -> Sqrt2Ext {
        // (p + q√2)(r + s√2) = pr + 2qs + (ps + qr)√2
        Sqrt2Ext {
            p: &self.p * &rhs.p + BigInt::from(2) * &self.q * &rhs.q,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl Mul<&Rat> for &Sqrt2Ext {
    type Output = Sqrt2Ext;
    fn mul(self, rhs: &Rat) -> Sqrt2Ext {
        Sqrt2Ext {
            p: &self.p * rhs,
            q: &self.q * rhs,
        }
    }
}

impl PartialOrd for Sqrt2Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sqrt2Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for Sqrt2Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}*sqrt2", self.q)
        } else {
            write!(f, "{}+{}*sqrt2", self.p, self.q)
        }
    }
}

impl fmt::Debug for Sqrt2Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An inflation factor γ > 1, either rational or involving √2.
///
/// All uses reduce to exact predicates: "is C > γ·L", "is γ·L ≤ D", "what is
/// the least integer n with n·L·(γ-1) ≥ C-L". None of them ever round.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gamma(Sqrt2Ext);

impl Gamma {
    pub fn from_rat(r: Rat) -> Result<Self, GammaError> {
        Self::from_value(Sqrt2Ext::from_rat(r))
    }

    pub fn one_plus_sqrt2() -> Self {
        Gamma(Sqrt2Ext::one_plus_sqrt2())
    }

    pub fn from_value(v: Sqrt2Ext) -> Result<Self, GammaError> {
        if v.cmp_rat(&Rat::one()) == Ordering::Greater {
            Ok(Gamma(v))
        } else {
            Err(GammaError::NotAboveOne(v.to_f64()))
        }
    }

    pub fn value(&self) -> &Sqrt2Ext {
        &self.0
    }

    /// γ - 1, strictly positive.
    fn excess(&self) -> Sqrt2Ext {
        &self.0 - &Sqrt2Ext::from_rat(Rat::one())
    }

    /// Exact test of `value > γ·scale` (e.g. classification `C > γ·L`).
    pub fn scaled_below(&self, scale: &TimeValue, value: &TimeValue) -> bool {
        // value - γ·scale > 0
        let prod = &self.0 * scale.rat();
        (&Sqrt2Ext::from_rat(value.rat().clone()) - &prod).sign() == Ordering::Greater
    }

    /// Exact test of `γ·scale ≤ bound`.
    pub fn scaled_at_most(&self, scale: &TimeValue, bound: &TimeValue) -> bool {
        let prod = &self.0 * scale.rat();
        prod.cmp_rat(bound.rat()) != Ordering::Greater
    }

    /// Least `n ≥ 1` with `n·l·(γ-1) ≥ w`, i.e. `ceil(w / (l·(γ-1)))`
    /// evaluated exactly. Requires `l > 0`.
    pub fn ceil_div_scaled_excess(&self, w: &Rat, l: &TimeValue) -> u64 {
        assert!(l.is_positive(), "scale must be positive");
        if !w.is_positive() {
            return 1;
        }
        let step = &self.excess() * l.rat();
        debug_assert!(step.is_positive());
        // Float guess, then exact fix-up in both directions.
        let approx = (w.to_f64().unwrap_or(0.0) / step.to_f64()).ceil();
        let mut n = if approx.is_finite() && approx >= 1.0 {
            approx as u64
        } else {
            1
        };
        let reaches = |n: u64| -> bool {
            let lhs = &step * &Rat::from_integer(BigInt::from(n));
            lhs.cmp_rat(w) != Ordering::Less
        };
        while !reaches(n) {
            n += 1;
        }
        while n > 1 && reaches(n - 1) {
            n -= 1;
        }
        n
    }

    /// Exact test of the inflation bound `total ≤ (1 + 1/(γ-1))·base`.
    pub fn inflation_bound_holds(&self, total: &TimeValue, base: &TimeValue) -> bool {
        let factor = &Sqrt2Ext::from_rat(Rat::one()) + &self.excess().recip();
        let bound = &factor * base.rat();
        bound.cmp_rat(total.rat()) != Ordering::Less
    }

    /// Rational upper approximation honoring the configured denominator
    /// bound; exact for rational γ.
    pub fn rational_upper_bound(&self, max_den: u64) -> Rat {
        self.0.rational_upper_bound(max_den)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Errors from parsing or constructing an inflation factor.
#[derive(Debug, Clone, thiserror::Error)]
pub enum GammaError {
    #[error("gamma must be greater than 1 (got ~{0})")]
    NotAboveOne(f64),
    #[error("cannot parse gamma from {0:?}: expected e.g. \"1.5\", \"3/2\", or \"1+sqrt2\"")]
    Parse(String),
}

impl FromStr for Gamma {
    type Err = GammaError;

    /// Accepts `"1+sqrt2"`, `"sqrt2"`, fractions like `"3/2"`, and decimal
    /// literals like `"1.5"` (parsed exactly, not via floating point).
    fn from_str(s: &str) -> Result<Self, GammaError> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        if t == "1+sqrt2" || t == "sqrt2+1" {
            return Ok(Gamma::one_plus_sqrt2());
        }
        if t == "sqrt2" {
            return Gamma::from_value(Sqrt2Ext::sqrt2());
        }
        let r = parse_rational(&t).ok_or_else(|| GammaError::Parse(s.to_string()))?;
        Gamma::from_rat(r)
    }
}

/// Parses `"3/2"`, `"1.5"`, or `"2"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((i, frac)) = s.split_once('.') {
        let neg = i.trim_start().starts_with('-');
        let i: BigInt = if i.is_empty() || i == "-" {
            BigInt::zero()
        } else {
            i.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_num: BigInt = frac.parse().ok()?;
        let frac_part = Rat::new(frac_num, scale);
        let int_part = Rat::from_integer(i);
        return Some(if neg {
            int_part - frac_part
        } else {
            int_part + frac_part
        });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_value_rejects_negative() {
        assert!(TimeValue::try_from_rat(rat(-1, 2)).is_err());
        assert!(TimeValue::try_from_rat(rat(1, 2)).is_ok());
    }

    #[test]
    fn period_job_counts() {
        let t12 = Period::Finite(TimeValue::from_integer(12));
        assert_eq!(t12.jobs_in(&TimeValue::from_integer(12)), BigInt::from(1));
        assert_eq!(t12.jobs_in(&TimeValue::new(121, 10)), BigInt::from(2));
        assert_eq!(t12.jobs_in(&TimeValue::zero()), BigInt::from(0));
        assert_eq!(
            Period::Infinite.jobs_in(&TimeValue::from_integer(1000)),
            BigInt::from(1)
        );
    }

    #[test]
    fn infinite_period_has_zero_utilization() {
        let u = Period::Infinite.utilization_of(&TimeValue::from_integer(10));
        assert!(u.is_zero());
    }

    #[test]
    fn sqrt2_sign_cases() {
        // 3 - 2√2 > 0 since 9 > 8
        assert_eq!(
            Sqrt2Ext::new(rat(3, 1), rat(-2, 1)).sign(),
            Ordering::Greater
        );
        // 2√2 - 3 < 0
        assert_eq!(Sqrt2Ext::new(rat(-3, 1), rat(2, 1)).sign(), Ordering::Less);
        // 7/5 < √2 < 3/2
        assert_eq!(Sqrt2Ext::sqrt2().cmp_rat(&rat(7, 5)), Ordering::Greater);
        assert_eq!(Sqrt2Ext::sqrt2().cmp_rat(&rat(3, 2)), Ordering::Less);
    }

    #[test]
    fn sqrt2_recip_is_half_sqrt2() {
        let r = Sqrt2Ext::sqrt2().recip();
        assert_eq!(r, Sqrt2Ext::new(rat(0, 1), rat(1, 2)));
    }

    #[test]
    fn sqrt2_rational_bounds_bracket() {
        let lo = Sqrt2Ext::sqrt2().rational_lower_bound(1_000_000);
        let hi = Sqrt2Ext::sqrt2().rational_upper_bound(1_000_000);
        assert!(lo < hi);
        assert!(&lo * &lo < rat(2, 1));
        assert!(&hi * &hi > rat(2, 1));
        // Both approximations are within 1e-10 of √2 at this denominator bound.
        assert!((hi - lo).to_f64().unwrap() < 1e-10);
    }

    #[test]
    fn gamma_parsing() {
        assert_eq!(
            "1+sqrt2".parse::<Gamma>().unwrap(),
            Gamma::one_plus_sqrt2()
        );
        assert_eq!(
            "1.5".parse::<Gamma>().unwrap().value().as_rational(),
            Some(&rat(3, 2))
        );
        assert_eq!(
            "3/2".parse::<Gamma>().unwrap().value().as_rational(),
            Some(&rat(3, 2))
        );
        assert!("1".parse::<Gamma>().is_err());
        assert!("0.5".parse::<Gamma>().is_err());
        assert!("abc".parse::<Gamma>().is_err());
    }

    #[test]
    fn gamma_exact_ceiling() {
        let g = Gamma::one_plus_sqrt2();
        // ceil(8 / (2·√2)) = ceil(2√2) = ceil(2.828...) = 3
        let n = g.ceil_div_scaled_excess(&rat(8, 1), &TimeValue::from_integer(2));
        assert_eq!(n, 3);
        // Exactly at an integer multiple: ceil(4/(2·2)) = 1 for rational γ=3.
        let g3 = Gamma::from_rat(rat(3, 1)).unwrap();
        assert_eq!(
            g3.ceil_div_scaled_excess(&rat(4, 1), &TimeValue::from_integer(2)),
            1
        );
        assert_eq!(
            g3.ceil_div_scaled_excess(&rat(5, 1), &TimeValue::from_integer(2)),
            2
        );
    }

    #[test]
    fn gamma_classification_is_exact() {
        let g = Gamma::one_plus_sqrt2();
        let l = TimeValue::from_integer(2);
        // γ·2 = 2 + 2√2 ≈ 4.8284; 10 > γ·2, 4 < γ·2.
        assert!(g.scaled_below(&l, &TimeValue::from_integer(10)));
        assert!(!g.scaled_below(&l, &TimeValue::from_integer(4)));
        // Boundary for rational γ=2 at C = 4: not strictly greater.
        let g2 = Gamma::from_rat(rat(2, 1)).unwrap();
        assert!(!g2.scaled_below(&l, &TimeValue::from_integer(4)));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1.5"), Some(rat(3, 2)));
        assert_eq!(parse_rational("3/2"), Some(rat(3, 2)));
        assert_eq!(parse_rational("2"), Some(rat(2, 1)));
        assert_eq!(parse_rational("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
