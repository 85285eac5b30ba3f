//! Exact counting formulas and bounds for PG(n, q).
//!
//! Everything here is computed with arbitrary-precision integers. The one
//! irrational bound (the q-binomial upper bound involving powers of e) is
//! returned as a certified rational upper approximation.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeometryContext, GeometryError, Point, Subspace};
use crate::gf;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("q = {0} is not a prime power >= 2")]
    InvalidQ(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
}

pub fn validate_q(q: u64) -> Result<(), CountingError> {
    match u32::try_from(q).ok().and_then(gf::prime_power) {
        Some(_) => Ok(()),
        None => Err(CountingError::InvalidQ(q)),
    }
}

fn pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// Gaussian coefficient without validating `q`; zero unless `0 <= b <= a`.
pub(crate) fn gaussian_raw(a: i64, b: i64, q: u64) -> BigUint {
    if b < 0 || b > a {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let one = BigUint::one();
    for i in 1..=b as u64 {
        num *= pow(q, (a - b) as u64 + i) - &one;
        den *= pow(q, i) - &one;
    }
    num / den
}

pub(crate) fn theta_raw(m: i64, q: u64) -> BigUint {
    gaussian_raw(m + 1, 1, q)
}

/// Number of `(b-1)`-spaces of PG(a-1, q); zero unless `0 <= b <= a`.
pub fn gaussian(a: i64, b: i64, q: u64) -> Result<BigUint, CountingError> {
    validate_q(q)?;
    Ok(gaussian_raw(a, b, q))
}

/// θ_m, the number of points of PG(m, q); zero for `m = -1`.
pub fn theta(m: i64, q: u64) -> BigUint {
    theta_raw(m, q)
}

/// Checked θ_m.
pub fn theta_checked(m: i64, q: u64) -> Result<BigUint, CountingError> {
    validate_q(q)?;
    Ok(theta_raw(m, q))
}

/// Lower bound on the number of `s`-spaces disjoint from a point set of
/// size `b_size <= θ_d` in PG(n, q).
pub fn metsch_lower_bound(
    n: i64,
    q: u64,
    d: i64,
    s: i64,
    b_size: u64,
) -> Result<BigUint, CountingError> {
    validate_q(q)?;
    if d < 0 || s < 0 || n < d + s {
        return Err(CountingError::HypothesisViolated(format!(
            "need d, s >= 0 and n >= d + s (n={n}, d={d}, s={s})"
        )));
    }
    let th = theta_raw(d, q);
    if BigUint::from(b_size) > th {
        return Err(CountingError::HypothesisViolated(format!(
            "|B| = {b_size} exceeds theta_{d} = {th}"
        )));
    }
    let (d, s) = (d as u64, s as u64);
    let n_d = n - d as i64;
    Ok(
        pow(q, (s + 1) * (d + 1)) * gaussian_raw(n_d, s as i64 + 1, q)
            + (th - BigUint::from(b_size)) * pow(q, s * d) * gaussian_raw(n_d, s as i64, q),
    )
}

/// Lower bound on the number of `s`-spaces lying in none of `b_size <= θ_d`
/// hyperplanes of PG(n, q).
pub fn metsch_dual_lower_bound(
    n: i64,
    q: u64,
    d: i64,
    s: i64,
    b_size: u64,
) -> Result<BigUint, CountingError> {
    validate_q(q)?;
    if d < 0 || s < d - 1 || s >= n {
        return Err(CountingError::HypothesisViolated(format!(
            "need d >= 0 and d - 1 <= s < n (n={n}, d={d}, s={s})"
        )));
    }
    let th = theta_raw(d, q);
    if BigUint::from(b_size) > th {
        return Err(CountingError::HypothesisViolated(format!(
            "|B| = {b_size} exceeds theta_{d} = {th}"
        )));
    }
    let n_d = n - d;
    let (d, ns) = (d as u64, (n - s) as u64);
    Ok(pow(q, ns * (d + 1)) * gaussian_raw(n_d, ns as i64, q)
        + (th - BigUint::from(b_size)) * pow(q, (ns - 1) * d) * gaussian_raw(n_d, ns as i64 - 1, q))
}

/// Certified upper approximation of a positive real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedUpper {
    value: BigRational,
}

impl CertifiedUpper {
    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    /// Smallest tried f64 that is still `>=` the certified value.
    pub fn to_f64_upper(&self) -> f64 {
        let mut f = self.value.to_f64().unwrap_or(f64::INFINITY);
        while let Some(r) = BigRational::from_float(f) {
            if r >= self.value {
                break;
            }
            f = f.next_up();
        }
        f
    }

    /// `value > x`, decided exactly.
    pub fn exceeds(&self, x: &BigUint) -> bool {
        self.value > BigRational::from_integer(BigInt::from(x.clone()))
    }
}

/// Upper bound on `exp(x)` for rational `0 <= x <= 1`: the Taylor sum up to
/// `terms` plus the Lagrange remainder bounded with `e^x < 3`.
pub fn exp_upper(x: &BigRational, terms: u32) -> BigRational {
    assert!(*x >= BigRational::zero() && *x <= BigRational::one());
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..=terms {
        if i > 0 {
            term = term * x / BigRational::from_integer(BigInt::from(i));
        }
        sum += &term;
    }
    let remainder = term * x / BigRational::from_integer(BigInt::from(terms + 1))
        * BigRational::from_integer(BigInt::from(3));
    sum + remainder
}

/// Upper bound for the Gaussian coefficient `[n_ choose k_]_q`:
/// `q^{(n_-k_)k_} e^{1/(q-2)}` for q > 2 and `2^{(n_-k_)k_+1} e^{2/3}` for q = 2.
pub fn heger_nagy_upper_bound(n_: i64, k_: i64, q: u64) -> Result<CertifiedUpper, CountingError> {
    validate_q(q)?;
    if k_ < 0 || k_ > n_ {
        return Err(CountingError::InvalidParams(format!(
            "need 0 <= k_ <= n_ (n_={n_}, k_={k_})"
        )));
    }
    let e = ((n_ - k_) * k_) as u64;
    let (base, x) = if q == 2 {
        (
            pow(2, e + 1),
            BigRational::new(BigInt::from(2), BigInt::from(3)),
        )
    } else {
        (
            pow(q, e),
            BigRational::new(BigInt::one(), BigInt::from(q - 2)),
        )
    };
    let value = BigRational::from_integer(BigInt::from(base)) * exp_upper(&x, 30);
    Ok(CertifiedUpper { value })
}

/// The main size bound, or `Open` in the excluded q = 2 cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremBound {
    Bound(BigUint),
    Open,
}

impl TheoremBound {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            TheoremBound::Bound(v) => Some(v),
            TheoremBound::Open => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            TheoremBound::Bound(v) => v.to_string(),
            TheoremBound::Open => "open".to_string(),
        }
    }
}

/// Which case of the main size bound applies to `(n, k, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCase {
    /// `k < (n-1)/2`: hyperplanes through an `(n-k-2)`-space.
    HyperplanePencil,
    /// `k > (n-1)/2`: the points of an `(n-k)`-space.
    PointSpace,
    /// `k = (n-1)/2`: the mixed construction.
    Middle,
    /// q = 2 and `k` is `(n-2)/2` or `n/2`.
    Open,
}

pub fn theorem_case(n: i64, k: i64, q: u64) -> Result<TheoremCase, CountingError> {
    validate_q(q)?;
    if k < 0 || k >= n {
        return Err(CountingError::InvalidParams(format!(
            "need 0 <= k < n (n={n}, k={k})"
        )));
    }
    Ok(if q == 2 && (2 * k == n - 2 || 2 * k == n) {
        TheoremCase::Open
    } else if 2 * k < n - 1 {
        TheoremCase::HyperplanePencil
    } else if 2 * k > n - 1 {
        TheoremCase::PointSpace
    } else {
        TheoremCase::Middle
    })
}

pub fn main_theorem_bound(n: i64, k: i64, q: u64) -> Result<TheoremBound, CountingError> {
    Ok(match theorem_case(n, k, q)? {
        TheoremCase::HyperplanePencil => TheoremBound::Bound(theta_raw(k + 1, q)),
        TheoremCase::PointSpace => TheoremBound::Bound(theta_raw(n - k, q)),
        TheoremCase::Middle => TheoremBound::Bound((BigUint::from(q) + 1u32) * pow(q, k as u64)),
        TheoremCase::Open => TheoremBound::Open,
    })
}

/// Smallest size of a blocking set made only of points or only of hyperplanes.
pub fn trivial_bound(n: i64, k: i64, q: u64) -> BigUint {
    theta_raw(n - k, q).min(theta_raw(k + 1, q))
}

/// Outcome of checking a point blocking set against the Beutelspacher dichotomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BeutelspacherClass {
    /// Contains every point of this `(n-k)`-space.
    ContainsSpace(Subspace),
    /// Contains no `(n-k)`-space and has at least `θ_{n-k} + q^{n-k-1} sqrt(q)` points.
    LargeNonTrivial,
    /// Contains no `(n-k)`-space and is too small: the input was not blocking.
    ViolatesBound,
}

/// `size >= θ_{n-k} + q^{n-k-1} sqrt(q)`, decided by squaring.
pub fn exceeds_beutelspacher(size: u64, n: i64, k: i64, q: u64) -> bool {
    let th = theta_raw(n - k, q);
    let size = BigUint::from(size);
    if size <= th {
        return false;
    }
    let excess = size - th;
    &excess * &excess >= pow(q, (2 * (n - k - 1) + 1) as u64)
}

pub fn beutelspacher_classify(
    ctx: &GeometryContext,
    b0: &BTreeSet<Point>,
    k: usize,
) -> Result<BeutelspacherClass, CountingError> {
    let n = ctx.n();
    if k >= n {
        return Err(CountingError::InvalidParams(format!(
            "need k < n (n={n}, k={k})"
        )));
    }
    let m = (n - k) as isize;
    for s in ctx.enumerate_subspaces(m)? {
        if ctx.points_of(&s).iter().all(|p| b0.contains(p)) {
            debug_assert!(BigUint::from(b0.len()) >= theta_raw(m as i64, ctx.q() as u64));
            return Ok(BeutelspacherClass::ContainsSpace(s));
        }
    }
    Ok(
        if exceeds_beutelspacher(b0.len() as u64, n as i64, k as i64, ctx.q() as u64) {
            BeutelspacherClass::LargeNonTrivial
        } else {
            BeutelspacherClass::ViolatesBound
        },
    )
}

/// Serializable record of one evaluated formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    /// Every consumed symbol, as decimal strings.
    pub params: BTreeMap<String, String>,
    /// Exact integer as a decimal string, a certified upper bound rendered as
    /// `"num/den"`, or `"open"`.
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_f64_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub actual: String,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(name: &str, params: &[(&str, i64)], value: String) -> Self {
        BoundReport {
            name: name.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            value,
            value_f64_upper: None,
            comparison: None,
        }
    }

    /// Records an observed value and whether it respects the bound in the
    /// given direction (`actual >= value` for lower bounds).
    pub fn compare_lower(mut self, actual: &BigUint) -> Self {
        let satisfied = self
            .value
            .parse::<BigUint>()
            .map(|v| *actual >= v)
            .unwrap_or(false);
        self.comparison = Some(Comparison {
            actual: actual.to_string(),
            satisfied,
        });
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian(4, 2, 2).unwrap(), big(35));
        assert_eq!(gaussian(3, 5, 2).unwrap(), big(0));
        assert_eq!(gaussian(4, 2, 3).unwrap(), big(130));
        assert_eq!(gaussian(3, -1, 2).unwrap(), big(0));
        assert_eq!(gaussian(0, 0, 5).unwrap(), big(1));
        assert_eq!(gaussian(4, 2, 6), Err(CountingError::InvalidQ(6)));
        assert_eq!(gaussian(4, 2, 1), Err(CountingError::InvalidQ(1)));
    }

    #[test]
    fn gaussian_never_overflows() {
        // [40 choose 20]_9 is far beyond 64 bits
        let g = gaussian(40, 20, 9).unwrap();
        assert!(g.bits() > 600);
        assert_eq!(g, gaussian(40, 20, 9).unwrap());
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(2, 2), big(7));
        assert_eq!(theta(-1, 3), big(0));
        assert_eq!(theta(3, 3), big(40));
        assert_eq!(theta_checked(2, 10), Err(CountingError::InvalidQ(10)));
    }

    #[test]
    fn q_pascal_recurrences() {
        for q in [2u64, 3, 4, 5] {
            for a in 1..=12i64 {
                for b in 1..=a {
                    let g = gaussian_raw(a, b, q);
                    let r1 = gaussian_raw(a - 1, b - 1, q)
                        + pow(q, b as u64) * gaussian_raw(a - 1, b, q);
                    let r2 = pow(q, (a - b) as u64) * gaussian_raw(a - 1, b - 1, q)
                        + gaussian_raw(a - 1, b, q);
                    assert_eq!(g, r1, "q={q} a={a} b={b}");
                    assert_eq!(g, r2, "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn theta_is_gaussian_with_one() {
        for q in [2u64, 3, 4, 5, 7] {
            for m in -1..=12 {
                assert_eq!(theta(m, q), gaussian_raw(m + 1, 1, q));
                if m >= 0 {
                    let sum: BigUint = (0..=m as u64).map(|i| pow(q, i)).sum();
                    assert_eq!(theta(m, q), sum);
                }
            }
        }
    }

    #[test]
    fn metsch_examples() {
        assert_eq!(metsch_lower_bound(3, 2, 1, 1, 0).unwrap(), big(34));
        assert_eq!(metsch_lower_bound(3, 2, 1, 1, 3).unwrap(), big(16));
        assert!(matches!(
            metsch_lower_bound(3, 2, 1, 1, 4),
            Err(CountingError::HypothesisViolated(_))
        ));
        assert!(matches!(
            metsch_lower_bound(3, 2, 2, 2, 0),
            Err(CountingError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn metsch_dual_examples() {
        // 64 * [1 choose 2] + 7 * 4 * [1 choose 1] = 28
        assert_eq!(metsch_dual_lower_bound(3, 2, 2, 1, 0).unwrap(), big(28));
        assert!(metsch_dual_lower_bound(3, 2, 2, 1, 8).is_err());
        assert!(metsch_dual_lower_bound(3, 2, 1, 3, 0).is_err());
    }

    #[test]
    fn dual_formula_is_metsch_at_complementary_s() {
        for q in [2u64, 3, 4] {
            for n in 1..=6i64 {
                for d in 0..n {
                    for s in (d - 1).max(0)..n {
                        let th = theta(d, q).to_u64().unwrap();
                        for b in [0, th / 2, th] {
                            assert_eq!(
                                metsch_dual_lower_bound(n, q, d, s, b).unwrap(),
                                metsch_lower_bound(n, q, d, n - 1 - s, b).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_metsch_specializes_to_projection_count() {
        // d = 1, s = 0 inside PG(k+1, q): (q + 1 - |B'|) q^k once the hyperplane
        // term vanishes
        for q in [2u64, 3, 4] {
            for k in 1..=3i64 {
                for b in 0..=q + 1 {
                    let v = metsch_dual_lower_bound(k + 1, q, 1, 0, b).unwrap();
                    assert_eq!(v, big(q + 1 - b) * pow(q, k as u64));
                }
            }
        }
    }

    #[test]
    fn heger_nagy_examples() {
        let b = heger_nagy_upper_bound(4, 2, 3).unwrap();
        assert!((b.to_f64_upper() - 220.18).abs() < 0.05);
        assert!(b.exceeds(&big(130)));
        let b = heger_nagy_upper_bound(4, 2, 2).unwrap();
        assert!((b.to_f64_upper() - 62.33).abs() < 0.05);
        assert!(b.exceeds(&big(35)));
    }

    #[test]
    fn exp_upper_is_above_and_tight() {
        for (num, den) in [(1, 1), (2, 3), (1, 2), (1, 7)] {
            let x = BigRational::new(BigInt::from(num), BigInt::from(den));
            let up = exp_upper(&x, 30).to_f64().unwrap();
            let true_val = (num as f64 / den as f64).exp();
            assert!(up >= true_val * (1.0 - 1e-15));
            assert!(up - true_val < 1e-12);
        }
    }

    #[test]
    fn certified_f64_is_upper() {
        let b = heger_nagy_upper_bound(7, 3, 5).unwrap();
        let f = b.to_f64_upper();
        assert!(BigRational::from_float(f).unwrap() >= *b.rational());
    }

    #[test]
    fn main_bound_examples() {
        assert_eq!(
            main_theorem_bound(3, 1, 2).unwrap(),
            TheoremBound::Bound(big(6))
        );
        assert_eq!(
            main_theorem_bound(5, 1, 2).unwrap(),
            TheoremBound::Bound(big(7))
        );
        assert_eq!(main_theorem_bound(4, 2, 2).unwrap(), TheoremBound::Open);
        assert_eq!(main_theorem_bound(4, 1, 2).unwrap(), TheoremBound::Open);
        assert_eq!(
            main_theorem_bound(4, 2, 3).unwrap(),
            TheoremBound::Bound(theta(2, 3))
        );
        assert_eq!(
            main_theorem_bound(3, 1, 3).unwrap(),
            TheoremBound::Bound(big(12))
        );
        assert!(main_theorem_bound(3, 3, 2).is_err());
    }

    #[test]
    fn main_bound_is_self_dual() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=9i64 {
                for k in 0..n {
                    assert_eq!(
                        main_theorem_bound(n, k, q).unwrap(),
                        main_theorem_bound(n, n - 1 - k, q).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn beutelspacher_threshold_is_exact_at_square_q() {
        // q = 4: theta_1 = 5, q^0 * 2 = 2, threshold exactly 7
        assert!(!exceeds_beutelspacher(6, 2, 1, 4));
        assert!(exceeds_beutelspacher(7, 2, 1, 4));
        // q = 9 in PG(2,9): 10 + 3 = 13
        assert!(!exceeds_beutelspacher(12, 2, 1, 9));
        assert!(exceeds_beutelspacher(13, 2, 1, 9));
    }

    #[test]
    fn beutelspacher_examples() {
        let ctx = GeometryContext::pg(3, 2).unwrap();
        let plane = ctx.coordinate_subspace(0..3);
        let pts = ctx.point_set_of(&plane);
        assert_eq!(
            beutelspacher_classify(&ctx, &pts, 1).unwrap(),
            BeutelspacherClass::ContainsSpace(plane.clone())
        );
        let mut more = pts.clone();
        more.insert(ctx.point_from_codes(&[0, 0, 0, 1]).unwrap());
        assert!(matches!(
            beutelspacher_classify(&ctx, &more, 1).unwrap(),
            BeutelspacherClass::ContainsSpace(_)
        ));
        let few: BTreeSet<Point> = pts.into_iter().take(3).collect();
        assert_eq!(
            beutelspacher_classify(&ctx, &few, 1).unwrap(),
            BeutelspacherClass::ViolatesBound
        );
    }

    #[test]
    fn report_comparison() {
        let r = BoundReport::new("theta", &[("m", 2), ("q", 2)], "7".into()).compare_lower(&big(8));
        assert!(r.comparison.as_ref().unwrap().satisfied);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"value\":\"7\""));
    }
}
