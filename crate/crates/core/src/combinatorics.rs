//! Exact binomial sums, binary entropy, and the combinatorial inequalities
//! the weight-distribution bounds are built from.
//!
//! All logarithms are base 2 unless a name says otherwise.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `C(n, k)` as an exact big integer; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{i=0}^{min(r,m)} C(m, i)`, the number of monomials of degree at most
/// `r` in `m` variables.
pub fn binom_leq(m: u64, r: u64) -> BigUint {
    let r = r.min(m);
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..r {
        term *= m - i;
        term /= i + 1;
        sum += &term;
    }
    sum
}

/// `binom_leq` for a possibly negative upper index (empty sum below zero).
pub fn binom_leq_signed(m: u64, r: i64) -> BigUint {
    if r < 0 {
        BigUint::zero()
    } else {
        binom_leq(m, r as u64)
    }
}

/// `log₂` of a big integer, accurate to f64 precision. `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map(|v| (v as f64).log2()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// Lossy conversion of a big integer to f64 (`inf` past the f64 range).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// A real value together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Log2Estimate {
    pub value: f64,
    pub abs_error: f64,
}

/// Above this many variables `log2_binom_leq` switches from exact big-integer
/// summation to Stirling series with Robbins' remainder bounds.
pub const EXACT_LOG2_CUTOFF: u64 = 4096;

/// `ln n!` from Stirling's series; Robbins: the remainder lies in
/// `(1/(12n+1), 1/(12n))`. Returns the midpoint and half-width.
fn ln_factorial(n: u64) -> (f64, f64) {
    if n < 2 {
        return (0.0, 0.0);
    }
    if n < 1024 {
        let v: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
        return (v, n as f64 * 4.0 * f64::EPSILON * v);
    }
    let nf = n as f64;
    let base = nf * nf.ln() - nf + 0.5 * (2.0 * std::f64::consts::PI * nf).ln();
    let lo = 1.0 / (12.0 * nf + 1.0);
    let hi = 1.0 / (12.0 * nf);
    // plus a rounding allowance for the f64 evaluation itself
    (
        base + 0.5 * (lo + hi),
        0.5 * (hi - lo) + 4.0 * f64::EPSILON * base.abs(),
    )
}

/// `log₂ C(n, k)` via Stirling, with an explicit error bound.
pub fn log2_binom_stirling(n: u64, k: u64) -> Log2Estimate {
    if k > n {
        return Log2Estimate {
            value: f64::NEG_INFINITY,
            abs_error: 0.0,
        };
    }
    let (a, ea) = ln_factorial(n);
    let (b, eb) = ln_factorial(k);
    let (c, ec) = ln_factorial(n - k);
    let ln2 = std::f64::consts::LN_2;
    Log2Estimate {
        value: (a - b - c) / ln2,
        abs_error: (ea + eb + ec) / ln2,
    }
}

/// `log₂ binom(m, ≤ r)`: exact (to f64 rounding) for `m ≤ EXACT_LOG2_CUTOFF`,
/// Stirling-based with tracked error above it.
pub fn log2_binom_leq(m: u64, r: u64) -> Log2Estimate {
    let r = r.min(m);
    if m <= EXACT_LOG2_CUTOFF {
        return Log2Estimate {
            value: log2_big(&binom_leq(m, r)),
            abs_error: 1e-12 * (m as f64).max(1.0),
        };
    }
    if 2 * r >= m {
        // 2^m minus the complementary lower tail, which is at most half of 2^m
        if r == m {
            return Log2Estimate {
                value: m as f64,
                abs_error: 0.0,
            };
        }
        let tail = log2_binom_leq(m, m - r - 1);
        let frac = (tail.value - m as f64).exp2();
        let value = m as f64 + (-frac).ln_1p() / std::f64::consts::LN_2;
        return Log2Estimate {
            value,
            abs_error: tail.abs_error * frac / (1.0 - frac) + 1e-15 * m as f64,
        };
    }
    // Σ_{i≤r} C(m,i) = C(m,r)·Σ_j Π_{i=r-j+1}^{r} i/(m-i+1); the ratios are < 1.
    let top = log2_binom_stirling(m, r);
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut i = r;
    while i > 0 {
        term *= i as f64 / (m - i + 1) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        i -= 1;
    }
    Log2Estimate {
        value: top.value + sum.log2(),
        abs_error: top.abs_error + 1e-12 * top.value.abs().max(1.0),
    }
}

/// Binary entropy `H(p) = −p log p − (1−p) log(1−p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Domain {
            what: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// K-term partial sum of `1 − (1/2ln2) Σ_{k≥1} ξ^{2k} / (k(2k−1))`, which
/// converges to `H((1−ξ)/2)`.
pub fn entropy_taylor(xi: f64, terms: u32) -> f64 {
    let xi2 = xi * xi;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 1..=terms {
        pow *= xi2;
        let kf = f64::from(k);
        sum += pow / (kf * (2.0 * kf - 1.0));
    }
    1.0 - sum / (2.0 * std::f64::consts::LN_2)
}

const XI_BISECTION_TOL: f64 = 1e-12;
const XI_BISECTION_MAX_ITERS: u32 = 200;

/// Solves `H((1−ξ)/2) = 1 − c·R` for `ξ ∈ [0, 1]` by bisection.
///
/// `H((1−ξ)/2)` decreases monotonically from 1 at `ξ = 0` to 0 at `ξ = 1`.
pub fn xi_from_capacity_gap(c: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Domain {
            what: "rate",
            value: rate,
            domain: "(0, 1]",
        });
    }
    if c.is_nan() || c < 0.0 {
        return Err(Error::Domain {
            what: "c",
            value: c,
            domain: "[0, ∞)",
        });
    }
    let gap = c * rate;
    if gap > 1.0 {
        return Err(Error::NoSolution(format!(
            "c·R = {gap} > 1 leaves no crossover probability"
        )));
    }
    let target = 1.0 - gap;
    let h = |xi: f64| binary_entropy(((1.0 - xi) / 2.0).clamp(0.0, 1.0)).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if h(hi) >= target {
        return Ok(1.0);
    }
    if h(lo) <= target {
        return Ok(0.0);
    }
    for _ in 0..XI_BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let v = h(mid);
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let xi = 0.5 * (lo + hi);
    debug_assert!((h(xi) - target).abs() <= XI_BISECTION_TOL);
    Ok(xi)
}

/// Parameters of the low-bias bound: the minimal `s` together with the
/// derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SParams {
    pub gamma: f64,
    pub ell: u64,
    pub m: u64,
    pub s: u64,
    /// `γ(1 + t/(m−t))` with `t = 2ℓ + s + 1`.
    pub gamma_tilde: f64,
    /// `1/(1−γ)`.
    pub c_gamma: f64,
    /// `(2−γ)/(1−γ)²`.
    pub d_gamma: f64,
}

pub fn c_gamma(gamma: f64) -> f64 {
    1.0 / (1.0 - gamma)
}

pub fn d_gamma(gamma: f64) -> f64 {
    (2.0 - gamma) / ((1.0 - gamma) * (1.0 - gamma))
}

/// `γ̃ = γ(1 + t/(m−t))`; `None` when `t ≥ m`.
pub fn gamma_tilde(gamma: f64, m: u64, t: u64) -> Option<f64> {
    if t >= m {
        return None;
    }
    Some(gamma * (1.0 + t as f64 / (m - t) as f64))
}

/// Both sides of `17(2s+4)γ^{s−2} ≤ ½(1−γ̃)^{2ℓ+s+1}`; `None` if `γ̃` is
/// undefined for this `s`.
pub fn s_condition(gamma: f64, ell: u64, m: u64, s: u64) -> Option<(f64, f64)> {
    let t = 2 * ell + s + 1;
    let gt = gamma_tilde(gamma, m, t)?;
    let lhs = 17.0 * (2.0 * s as f64 + 4.0) * gamma.powf(s as f64 - 2.0);
    let rhs = 0.5 * (1.0 - gt).powf(t as f64);
    Some((lhs, rhs))
}

/// Minimal `s ≥ 1` satisfying [`s_condition`], found by ascending scan with
/// `γ̃` recomputed for each candidate.
pub fn smallest_s(gamma: f64, ell: u64, m: u64) -> Result<SParams> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            domain: "(0, 1/2)",
        });
    }
    if ell == 0 {
        return Err(Error::Precondition("ell must be positive".into()));
    }
    for s in 1..=m {
        let Some((lhs, rhs)) = s_condition(gamma, ell, m, s) else {
            break;
        };
        if lhs <= rhs {
            let gt = gamma_tilde(gamma, m, 2 * ell + s + 1).unwrap_or(f64::NAN);
            if gt >= 0.5 {
                return Err(Error::Precondition(format!("γ̃ = {gt} ≥ 1/2 at s = {s}")));
            }
            return Ok(SParams {
                gamma,
                ell,
                m,
                s,
                gamma_tilde: gt,
                c_gamma: c_gamma(gamma),
                d_gamma: d_gamma(gamma),
            });
        }
    }
    Err(Error::NoSolution(format!(
        "no s ≤ m = {m} satisfies the condition for γ = {gamma}, ℓ = {ell}"
    )))
}

/// `binom(m−ℓ, ≤ r−ℓ)` and its upper bound `γ^ℓ·binom(m, ≤ r)`, `γ = r/m`.
pub fn shifted_binom_leq_bound(m: u64, r: u64, ell: u64) -> Result<(BigUint, f64)> {
    if !(ell <= r && r <= m) || m == 0 {
        return Err(Error::Precondition(format!(
            "need ℓ ≤ r ≤ m with m ≥ 1 (got m={m}, r={r}, ℓ={ell})"
        )));
    }
    let gamma = r as f64 / m as f64;
    let lhs = binom_leq(m - ell, r - ell);
    let rhs = gamma.powi(ell as i32) * big_to_f64(&binom_leq(m, r));
    Ok((lhs, rhs))
}

/// `binom(m−t, ≤ r)` and its lower bound `(1−γ̃)^t·binom(m, ≤ r)`.
pub fn truncated_binom_leq_bound(m: u64, r: u64, t: u64) -> Result<(BigUint, f64)> {
    if t + r > m || m == 0 {
        return Err(Error::Precondition(format!(
            "need t + r ≤ m with m ≥ 1 (got m={m}, r={r}, t={t})"
        )));
    }
    // 1 − γ̃ = (m−t−r)/(m−t), in [0, 1] under the precondition
    let factor = if r == 0 {
        1.0
    } else {
        (m - t - r) as f64 / (m - t) as f64
    };
    let lhs = binom_leq(m - t, r);
    let rhs = factor.powi(t as i32) * big_to_f64(&binom_leq(m, r));
    Ok((lhs, rhs))
}

/// Hoeffding: `P[mean − μ ≥ ε] ≤ exp(−2ε²t² / Σ(bᵢ−aᵢ)²)` for `t` variables
/// each supported on an interval of width `width`.
pub fn hoeffding_tail(epsilon: f64, t: u64, width: f64) -> f64 {
    let t = t as f64;
    (-2.0 * epsilon * epsilon * t * t / (t * width * width)).exp()
}

/// Chernoff lower tail: `P[Σ Xᵢ ≤ (1−ε)pn] ≤ exp(−pnε²/2)`.
pub fn chernoff_lower_tail(p: f64, n: u64, epsilon: f64) -> f64 {
    (-p * n as f64 * epsilon * epsilon / 2.0).exp()
}

/// Two-sided McDiarmid for an `L`-Lipschitz function of `n` bits:
/// `P[|F − EF| ≥ ε] ≤ 2·exp(−2ε²/(nL²))`.
pub fn mcdiarmid_tail(epsilon: f64, n: f64, lipschitz: f64) -> f64 {
    2.0 * (-2.0 * epsilon * epsilon / (n * lipschitz * lipschitz)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leq_oracle(m: u64, r: u64) -> u128 {
        // Pascal triangle, independent of the multiplicative recurrence
        let mut row = vec![1u128];
        for _ in 0..m {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row.iter().take(r.min(m) as usize + 1).sum()
    }

    #[test]
    fn binom_leq_examples() {
        assert_eq!(binom_leq(4, 2), BigUint::from(11u32));
        assert_eq!(binom_leq(10, 10), BigUint::from(1024u32));
        assert_eq!(binom_leq(9, 4), BigUint::from(256u32));
        assert_eq!(binom_leq(5, 9), BigUint::from(32u32));
    }

    #[test]
    fn binom_leq_matches_pascal() {
        for m in 0..=60 {
            for r in 0..=m + 2 {
                assert_eq!(
                    binom_leq(m, r),
                    BigUint::from(leq_oracle(m, r)),
                    "m={m} r={r}"
                );
            }
        }
    }

    #[test]
    fn binom_leq_monotone_and_bounded() {
        for m in 0..=40u64 {
            let full = BigUint::one() << m;
            let mut prev = BigUint::zero();
            for r in 0..=m {
                let v = binom_leq(m, r);
                assert!(v >= prev && v <= full);
                prev = v;
            }
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn entropy_sandwiches_binomials() {
        let mut worst_slack = 0.0f64;
        for n in 2..=64u64 {
            for k in 1..=n / 2 {
                let nh = n as f64 * binary_entropy(k as f64 / n as f64).unwrap();
                let single = log2_big(&binom(n, k));
                let total = log2_big(&binom_leq(n, k));
                assert!(single <= total && total <= nh + 1e-9, "n={n} k={k}");
                let allowed = 2.0 * (n as f64).log2() + 2.0;
                assert!(single >= nh - allowed, "n={n} k={k}");
                worst_slack = worst_slack.max(nh - single);
            }
        }
        // measured maximum gap, well inside 2·log₂ 64 + 2 = 14
        assert!(worst_slack < 3.5, "{worst_slack}");
    }

    #[test]
    fn entropy_is_symmetric() {
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let a = binary_entropy(p).unwrap();
            let b = binary_entropy(1.0 - p).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(entropy_taylor(0.0, 7), 1.0);
        assert!(entropy_taylor(1.0, 200).abs() < 5e-3);
        let direct = binary_entropy(0.25).unwrap();
        assert!((entropy_taylor(0.5, 50) - direct).abs() <= 1e-10);
    }

    #[test]
    fn taylor_decreases_toward_entropy() {
        for i in 0..=20 {
            let xi = i as f64 / 20.0;
            let h = binary_entropy((1.0 - xi) / 2.0).unwrap();
            let mut prev = f64::INFINITY;
            for k in 1..60 {
                let v = entropy_taylor(xi, k);
                assert!(v <= prev + 1e-15);
                assert!(v >= h - 1e-12, "xi={xi} k={k}");
                prev = v;
            }
        }
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_from_capacity_gap(1.0, 1.0).unwrap(), 1.0);
        let small = xi_from_capacity_gap(1.0, 1e-9).unwrap();
        assert!(small < 1e-3);
        let xi = xi_from_capacity_gap(1.0, 0.5).unwrap();
        // reference root from an independent 40-digit solver
        assert!((xi - 0.779_944_271_123_280_9).abs() < 1e-9);
        let h = binary_entropy((1.0 - xi) / 2.0).unwrap();
        assert!((h - 0.5).abs() <= 1e-12);
        assert!(xi_from_capacity_gap(3.0, 0.5).is_err());
    }

    #[test]
    fn smallest_s_reference_point() {
        let sp = smallest_s(0.1, 1, 1_000_000).unwrap();
        assert_eq!(sp.s, 6);
        let (l5, r5) = s_condition(0.1, 1, 1_000_000, 5).unwrap();
        assert!(l5 > r5);
        assert!((l5 - 0.238).abs() < 1e-9);
        let (l6, r6) = s_condition(0.1, 1, 1_000_000, 6).unwrap();
        assert!(l6 <= r6);
        assert!((l6 - 0.0272).abs() < 1e-9);
        assert!((sp.c_gamma - 1.0 / 0.9).abs() < 1e-15);
        assert!((sp.d_gamma - 1.9 / 0.81).abs() < 1e-15);
    }

    #[test]
    fn smallest_s_is_a_fixed_point() {
        for &(g, ell) in &[(0.25, 4), (0.05, 1), (0.3, 2), (0.1, 10), (0.4, 3)] {
            let sp = smallest_s(g, ell, 1_000_000).unwrap();
            let (l, r) = s_condition(g, ell, 1_000_000, sp.s).unwrap();
            assert!(l <= r);
            for s in 1..sp.s {
                let (l, r) = s_condition(g, ell, 1_000_000, s).unwrap();
                assert!(l > r, "γ={g} ℓ={ell} s={s} also satisfies");
            }
        }
    }

    #[test]
    fn smallest_s_non_increasing_as_gamma_shrinks() {
        let mut prev = u64::MAX;
        for &g in &[0.2, 0.1, 0.05, 0.01, 0.001] {
            let s = smallest_s(g, 1, 1_000_000).unwrap().s;
            assert!(s <= prev);
            prev = s;
        }
    }

    #[test]
    fn smallest_s_errors() {
        assert!(smallest_s(0.5, 1, 100).is_err());
        assert!(smallest_s(0.0, 1, 100).is_err());
        // tiny m: γ̃ blows up before the condition can hold
        assert!(smallest_s(0.45, 5, 20).is_err());
    }

    #[test]
    fn shifted_bound_examples() {
        let (lhs, rhs) = shifted_binom_leq_bound(10, 5, 5).unwrap();
        assert_eq!(lhs, BigUint::one());
        assert!((rhs - 0.03125 * 638.0).abs() < 1e-9);
        let (lhs, rhs) = shifted_binom_leq_bound(20, 4, 2).unwrap();
        assert_eq!(lhs, BigUint::from(172u32));
        assert!((rhs - 0.04 * 6196.0).abs() < 1e-9);
        let (lhs, rhs) = shifted_binom_leq_bound(17, 6, 0).unwrap();
        assert_eq!(big_to_f64(&lhs), rhs);
    }

    #[test]
    fn truncated_bound_examples() {
        let (lhs, rhs) = truncated_binom_leq_bound(15, 4, 0).unwrap();
        assert_eq!(big_to_f64(&lhs), rhs);
        let (lhs, rhs) = truncated_binom_leq_bound(20, 5, 3).unwrap();
        assert_eq!(lhs, BigUint::from(9402u32));
        assert!(big_to_f64(&lhs) >= rhs);
        let (lhs, rhs) = truncated_binom_leq_bound(12, 3, 2).unwrap();
        assert_eq!(lhs, BigUint::from(176u32));
        assert!((rhs - 146.51).abs() < 1e-9);
        assert!(truncated_binom_leq_bound(10, 6, 5).is_err());
    }

    #[test]
    fn log2_big_accuracy() {
        let x = BigUint::one() << 300u32;
        assert_eq!(log2_big(&x), 300.0);
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
        assert_eq!(log2_big(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn stirling_companion_tracks_exact() {
        for &(m, r) in &[(1000u64, 100u64), (4000, 1000), (3000, 1600), (2500, 2499)] {
            let exact = log2_big(&binom_leq(m, r));
            // force the Stirling path by calling the pieces directly
            let top = log2_binom_stirling(m, r.min(m - r));
            assert!((top.value - log2_big(&binom(m, r))).abs() <= top.abs_error + 1e-9);
            let est = log2_binom_leq(m, r);
            assert!((est.value - exact).abs() <= est.abs_error + 1e-9);
        }
        // large m path, monotone in r and bounded by m
        let a = log2_binom_leq(1_000_000, 100_000);
        let b = log2_binom_leq(1_000_000, 200_000);
        assert!(a.value < b.value && b.value < 1_000_000.0);
        let full = log2_binom_leq(1_000_000, 600_000);
        assert!(full.value <= 1_000_000.0 && full.value > 999_999.0);
    }

    #[test]
    fn stirling_large_m_agrees_with_exact_just_above_cutoff() {
        let m = EXACT_LOG2_CUTOFF + 1;
        for r in [10, 500, 1500] {
            let exact = log2_big(&binom_leq(m, r));
            let est = log2_binom_leq(m, r);
            assert!((est.value - exact).abs() <= est.abs_error + 1e-9, "r={r}");
            assert!(est.abs_error < 1e-6);
        }
    }

    #[test]
    fn tail_formulas() {
        // McDiarmid with n = 2^r bits, L = 2^{1−r} gives 2exp(−2^r ε²/2)
        let r = 10;
        let n = (1u64 << r) as f64;
        let l = 2f64.powi(1 - r);
        let eps = 0.15f64;
        let want = 2.0 * (-(n * eps * eps) / 2.0).exp();
        assert!((mcdiarmid_tail(eps, n, l) - want).abs() < 1e-15);
        assert!((hoeffding_tail(0.5, 8, 1.0) - (-4.0f64).exp()).abs() < 1e-15);
        assert!((chernoff_lower_tail(0.5, 100, 0.2) - (-1.0f64).exp()).abs() < 1e-15);
    }
}
