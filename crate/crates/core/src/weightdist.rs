//! Weight distributions of RM(m, r): exhaustive profiles, Monte Carlo
//! estimates, and evaluators for the upper and lower bounds on the number of
//! low-weight and high-bias polynomials.
//!
//! Bounds are reported in log₂ space. Asymptotic slack the bounds leave
//! unspecified (the `O(m⁴)` term) is a caller-supplied constant, default 0,
//! itemised separately from the leading term.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVec;
use crate::combinatorics::{
    big_to_f64, binom_leq, binom_leq_signed, c_gamma, d_gamma, log2_binom_leq, smallest_s,
    Log2Estimate, EXACT_LOG2_CUTOFF,
};
use crate::error::{Error, Result};
use crate::gf2poly::{mobius_in_place, random_poly, PolyAnf};
use crate::rmcode::{visit_codeword_range, CodeParams, GeneratorMatrix};
use crate::seed::task_rng;

/// Largest `dim + m` (log₂ of codewords × block length) enumerated.
pub const MAX_PROFILE_LOG2_WORK: u64 = 34;

/// Largest dimension for the per-polynomial transform route.
pub const MAX_TRANSFORM_PROFILE_DIM: u64 = 20;

/// Exact weight enumerator: `counts[w]` codewords of absolute weight `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    params: CodeParams,
    counts: Vec<BigUint>,
}

impl WeightProfile {
    pub fn params(&self) -> CodeParams {
        self.params
    }

    /// Indexed by absolute weight `0..=2^m`.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, weight: usize) -> BigUint {
        self.counts.get(weight).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `W(β) = |{f : wt(f) ≤ β}|`.
    pub fn cumulative(&self, beta: Ratio<u64>) -> BigUint {
        let n = self.params.n() as u64;
        let limit = (beta * n).floor().to_integer();
        self.counts.iter().take(limit.min(n) as usize + 1).sum()
    }

    /// `(weight, count)` for every weight that occurs.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Rows `weight,count` for the occurring weights, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count\n");
        for (w, c) in self.nonzero() {
            let _ = writeln!(out, "{w},{c}");
        }
        out
    }

    /// Counts are decimal strings so they survive any JSON reader.
    pub fn to_json_value(&self) -> serde_json::Value {
        let counts: Vec<_> = self
            .nonzero()
            .map(|(w, c)| serde_json::json!({"weight": w, "count": c.to_string()}))
            .collect();
        serde_json::json!({
            "m": self.params.m,
            "r": self.params.r,
            "counts": counts,
        })
    }

    /// Parses [`to_csv`](Self::to_csv) output; `#` lines are skipped.
    pub fn from_csv(params: CodeParams, text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut header_seen = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != "weight,count" {
                    return Err(Error::Parse(format!("unexpected header {line:?}")));
                }
                header_seen = true;
                continue;
            }
            let (w, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed row {line:?}")))?;
            let w: usize = w
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight {w:?}")))?;
            let c: BigUint = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad count {c:?}")))?;
            rows.push((w, c));
        }
        if !header_seen {
            return Err(Error::Parse("missing header".into()));
        }
        Self::from_rows(params, rows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = |name: &str| {
            v.get(name)
                .and_then(serde_json::Value::as_u64)
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| Error::Parse(format!("missing or invalid {name:?}")))
        };
        let params =
            CodeParams::new(field("m")?, field("r")?).map_err(|e| Error::Parse(e.to_string()))?;
        let list = v
            .get("counts")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"counts\" array".into()))?;
        let mut rows = Vec::with_capacity(list.len());
        for item in list {
            let w = item
                .get("weight")
                .and_then(serde_json::Value::as_u64)
                .ok_or_else(|| Error::Parse("entry without integer weight".into()))?;
            let c = item
                .get("count")
                .and_then(serde_json::Value::as_str)
                .and_then(|s| s.parse::<BigUint>().ok())
                .ok_or_else(|| Error::Parse("entry without decimal count".into()))?;
            rows.push((w as usize, c));
        }
        Self::from_rows(params, rows)
    }

    /// Builds a profile from sparse rows, checking the invariants every
    /// weight enumerator of RM(m, r) satisfies.
    fn from_rows(params: CodeParams, rows: Vec<(usize, BigUint)>) -> Result<Self> {
        check_profile_work(params).map_err(|e| Error::Parse(e.to_string()))?;
        let n = params.n();
        let mut counts = vec![BigUint::zero(); n + 1];
        let mut seen = vec![false; n + 1];
        for (w, c) in rows {
            if w > n {
                return Err(Error::Parse(format!("weight {w} exceeds length {n}")));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::Parse(format!("weight {w} listed twice")));
            }
            counts[w] = c;
        }
        let p = WeightProfile { params, counts };
        if p.total() != BigUint::one() << params.dim() {
            return Err(Error::Parse("counts do not sum to 2^dim".into()));
        }
        if !p.counts[0].is_one() {
            return Err(Error::Parse("count at weight 0 must be 1".into()));
        }
        if (0..=n).any(|w| p.counts[w] != p.counts[n - w]) {
            return Err(Error::Parse("counts are not complement-symmetric".into()));
        }
        Ok(p)
    }
}

fn check_profile_work(params: CodeParams) -> Result<()> {
    params.check_enumerable()?;
    let work = params.dim() + u64::from(params.m);
    if work > MAX_PROFILE_LOG2_WORK {
        return Err(Error::CapExceeded {
            what: "log2(codewords x block length)",
            limit: MAX_PROFILE_LOG2_WORK,
            got: work,
        });
    }
    Ok(())
}

fn to_profile(params: CodeParams, counts: Vec<u64>) -> WeightProfile {
    WeightProfile {
        params,
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

/// Exact weight enumerator by walking every coefficient vector in Gray-code
/// order, split into ranges processed in parallel.
pub fn brute_force_profile(params: CodeParams) -> Result<WeightProfile> {
    check_profile_work(params)?;
    let gen = GeneratorMatrix::new(params)?;
    let n = params.n();
    let total = 1u64 << params.dim();
    let chunks = total.min(256);
    let step = total / chunks;
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; n + 1];
            visit_codeword_range(&gen, c * step, (c + 1) * step, |_, w| {
                local[w.count_ones() as usize] += 1;
            });
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(to_profile(params, counts))
}

/// The same enumerator computed polynomial by polynomial: each coefficient
/// vector is expanded to its evaluation table by the subset-sum transform.
/// Slower than [`brute_force_profile`] and shares no code path with it
/// beyond the monomial ordering.
pub fn profile_by_transform(params: CodeParams) -> Result<WeightProfile> {
    if params.dim() > MAX_TRANSFORM_PROFILE_DIM {
        return Err(Error::CapExceeded {
            what: "code dimension (transform route)",
            limit: MAX_TRANSFORM_PROFILE_DIM,
            got: params.dim(),
        });
    }
    check_profile_work(params)?;
    let masks = params.monomials();
    let n = params.n();
    let mut counts = vec![0u64; n + 1];
    for msg in 0..1u64 << masks.len() {
        let mut v = BitVec::zeros(n);
        for (j, &mask) in masks.iter().enumerate() {
            if msg >> j & 1 == 1 {
                v.set(mask as usize, true);
            }
        }
        mobius_in_place(params.m, &mut v);
        counts[v.count_ones() as usize] += 1;
    }
    Ok(to_profile(params, counts))
}

/// Empirical frequency of `|bias(f)| > ε` over uniform `f ∈ RM(m, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasTail {
    pub samples: u64,
    pub exceedances: u64,
    pub empirical_prob: f64,
    /// `2·exp(−2^r ε²/2)`.
    pub bound: f64,
    pub seed: u64,
}

/// `2·exp(−2^r ε²/2)`, the concentration bound for `|bias(f)| > ε`.
pub fn bias_tail_bound(r: u32, epsilon: f64) -> f64 {
    2.0 * (-(2f64.powi(r as i32)) * epsilon * epsilon / 2.0).exp()
}

/// Samples are independent; sample `i` uses the stream derived from
/// `(seed, i)`, so the result does not depend on scheduling.
pub fn mc_bias_tail(params: CodeParams, epsilon: f64, samples: u64, seed: u64) -> Result<BiasTail> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Domain {
            what: "epsilon",
            value: epsilon,
            domain: "[0, ∞)",
        });
    }
    let exceedances = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut rng = task_rng(seed, i);
            let f = random_poly(params.m, params.r, &mut rng)?.to_eval()?;
            Ok(u64::from(f.bias_f64().abs() > epsilon))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(BiasTail {
        samples,
        exceedances,
        empirical_prob: if samples == 0 {
            0.0
        } else {
            exceedances as f64 / samples as f64
        },
        bound: bias_tail_bound(params.r, epsilon),
        seed,
    })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte Carlo estimate of `W(β)/2^dim` with a 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightFractionEstimate {
    pub samples: u64,
    pub hits: u64,
    pub fraction: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
}

pub fn mc_weight_fraction(
    params: CodeParams,
    beta: f64,
    samples: u64,
    seed: u64,
) -> Result<WeightFractionEstimate> {
    let limit = (beta * params.n() as f64).floor();
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut rng = task_rng(seed, i);
            let f = random_poly(params.m, params.r, &mut rng)?.to_eval()?;
            Ok(u64::from(f.abs_weight() as f64 <= limit))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let (lo, hi) = wilson_interval(hits, samples, 1.959_963_984_540_054);
    Ok(WeightFractionEstimate {
        samples,
        hits,
        fraction: if samples == 0 {
            0.0
        } else {
            hits as f64 / samples as f64
        },
        wilson_low: lo,
        wilson_high: hi,
        seed,
    })
}

/// A bound on a log₂ count, split into a leading term and named slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    /// `leading_term + Σ slack_terms`. Non-finite (JSON `null`) when the
    /// leading term overflows f64; `coefficient` and `log2_binom_leq` then
    /// carry the value.
    pub log2_value: f64,
    /// `coefficient · binom(m, ≤ r)`.
    pub leading_term: f64,
    pub slack_terms: BTreeMap<String, f64>,
    pub inputs: BTreeMap<String, f64>,
    pub coefficient: f64,
    pub log2_binom_leq: Log2Estimate,
    /// Intermediate quantities (`s`, `γ̃`, …) specific to each bound.
    pub derived: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(
        name: &str,
        m: u32,
        r: u32,
        coefficient: f64,
        m4_const: f64,
        inputs: &[(&str, f64)],
        derived: &[(&str, f64)],
    ) -> Self {
        let log2_binom = log2_binom_leq(u64::from(m), u64::from(r));
        let binom = if u64::from(m) <= EXACT_LOG2_CUTOFF {
            big_to_f64(&binom_leq(u64::from(m), u64::from(r)))
        } else {
            log2_binom.value.exp2()
        };
        let leading_term = coefficient * binom;
        let m4 = m4_const * f64::from(m).powi(4);
        let mut slack_terms = BTreeMap::new();
        slack_terms.insert("m4".to_string(), m4);
        let mut inp: BTreeMap<String, f64> = [("m", f64::from(m)), ("r", f64::from(r))]
            .into_iter()
            .chain(inputs.iter().copied())
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        inp.insert("m4_const".into(), m4_const);
        BoundReport {
            name: name.to_string(),
            log2_value: leading_term + m4,
            leading_term,
            slack_terms,
            inputs: inp,
            coefficient,
            log2_binom_leq: log2_binom,
            derived: derived.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

/// `log₂ W(2^{−ℓ}) ≤ m4_const·m⁴ + 17(c_γℓ + d_γ)γ^{ℓ−1}·binom(m, ≤ r)`.
pub fn bound_low_weight(m: u32, r: u32, ell: u32, m4_const: f64) -> Result<BoundReport> {
    if !(ell <= r && r <= m) || m == 0 {
        return Err(Error::Precondition(format!(
            "need ℓ ≤ r ≤ m with m ≥ 1 (got m={m}, r={r}, ℓ={ell})"
        )));
    }
    let gamma = f64::from(r) / f64::from(m);
    let (c, d) = (c_gamma(gamma), d_gamma(gamma));
    let coefficient = 17.0 * (c * f64::from(ell) + d) * gamma.powi(ell as i32 - 1);
    Ok(BoundReport::new(
        "low_weight",
        m,
        r,
        coefficient,
        m4_const,
        &[("ell", f64::from(ell))],
        &[("gamma", gamma), ("c_gamma", c), ("d_gamma", d)],
    ))
}

/// Exponent `mtk + t·binom(m−k, ≤ r−k)` bounding the number of majorities
/// of `t` order-`k` derivatives.
pub fn log2_derivative_net_bound(m: u64, r: u64, k: u64, t: u64) -> Result<BigUint> {
    if k > r || r > m {
        return Err(Error::Precondition(format!(
            "need k ≤ r ≤ m (got m={m}, r={r}, k={k})"
        )));
    }
    Ok(BigUint::from(m) * t * k + binom_leq(m - k, r - k) * t)
}

/// Exponent `mt + Σ_{j=1}^{t} binom(m−j, ≤ r−1)` for majorities of `t`
/// first-order derivatives.
pub fn log2_first_order_net_bound(m: u64, r: u64, t: u64) -> Result<BigUint> {
    if t > m || r > m {
        return Err(Error::Precondition(format!(
            "need t, r ≤ m (got m={m}, r={r}, t={t})"
        )));
    }
    let sum: BigUint = (1..=t).map(|j| binom_leq_signed(m - j, r as i64 - 1)).sum();
    Ok(BigUint::from(m) * t + sum)
}

/// `Σ_{j=ℓ}^{r} log2_derivative_net_bound(m, r, j−1, 17(j+2))`, the exponent
/// obtained by halving the weight from `2^{−ℓ}` down to below `2^{−r}`.
pub fn bound_recursion(m: u64, r: u64, ell: u64) -> Result<BigUint> {
    if ell == 0 || ell > r + 1 || r > m {
        return Err(Error::Precondition(format!(
            "need 1 ≤ ℓ ≤ r + 1 and r ≤ m (got m={m}, r={r}, ℓ={ell})"
        )));
    }
    let mut acc = BigUint::zero();
    for j in ell..=r {
        acc += log2_derivative_net_bound(m, r, j - 1, 17 * (j + 2))?;
    }
    Ok(acc)
}

/// `log₂ W((1−2^{−ℓ})/2) ≤ m4_const·m⁴ + (1 − (1−γ̃)^{2ℓ+s+1} +
/// 17(c_γ(s−1)+d_γ)γ^{s−2})·binom(m, ≤ r)` with `s` the smallest admissible
/// value. Also reports `c(γ,ℓ) = log₂(1/(1−γ̃))·(2ℓ+s+1)`.
pub fn bound_low_bias(m: u32, r: u32, ell: u32, m4_const: f64) -> Result<BoundReport> {
    if r > m || m == 0 {
        return Err(Error::Precondition(format!(
            "need r ≤ m, m ≥ 1 (got m={m}, r={r})"
        )));
    }
    let gamma = f64::from(r) / f64::from(m);
    if gamma >= 0.5 {
        return Err(Error::Domain {
            what: "gamma = r/m",
            value: gamma,
            domain: "(0, 1/2)",
        });
    }
    let sp = smallest_s(gamma, u64::from(ell), u64::from(m))?;
    let t = (2 * u64::from(ell) + sp.s + 1) as f64;
    let gt = sp.gamma_tilde;
    let s = sp.s as f64;
    let coefficient = 1.0 - (1.0 - gt).powf(t)
        + 17.0 * (sp.c_gamma * (s - 1.0) + sp.d_gamma) * gamma.powf(s - 2.0);
    let c_gl = (1.0 / (1.0 - gt)).log2() * t;
    Ok(BoundReport::new(
        "low_bias",
        m,
        r,
        coefficient,
        m4_const,
        &[("ell", f64::from(ell))],
        &[
            ("gamma", gamma),
            ("s", s),
            ("t", t),
            ("gamma_tilde", gt),
            ("c_gamma", sp.c_gamma),
            ("d_gamma", sp.d_gamma),
            ("c_gamma_ell", c_gl),
            ("simplified_coefficient", 1.0 - (-c_gl).exp2()),
        ],
    ))
}

/// The lower bound `Σ_{j=1}^{ℓ−1} binom(m−j, ≤ r−1) − 1` on
/// `log₂ |{f : bias(f) ≥ 2^{−ℓ}}|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    /// Exact exponent `Σ_{j=1}^{ℓ−1} binom(m−j, ≤ r−1)`.
    #[serde(serialize_with = "serialize_decimal")]
    pub exponent: BigUint,
    /// `exponent − 1`, the log₂ of the bound.
    pub log2_value: f64,
    /// `true` when `r ≥ 20` and `ℓ < r/3`, the range the bound is proved for.
    pub hypotheses_hold: bool,
}

/// Big integers go out as decimal strings.
pub fn serialize_decimal<S: serde::Serializer>(
    x: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn lower_bound_log2(m: u64, r: u64, ell: u64) -> Result<LowerBound> {
    if r > m || r == 0 {
        return Err(Error::Precondition(format!(
            "need 1 ≤ r ≤ m (got m={m}, r={r})"
        )));
    }
    if ell > m + 1 {
        return Err(Error::Precondition(format!("ℓ = {ell} exceeds m + 1")));
    }
    let exponent: BigUint = (1..ell).map(|j| binom_leq(m - j, r - 1)).sum();
    let log2_value = exponent.to_f64().unwrap_or(f64::INFINITY) - 1.0;
    Ok(LowerBound {
        exponent,
        log2_value,
        hypotheses_hold: r >= 20 && 3 * ell < r,
    })
}

/// A sample `g = Σ_{i=1}^{ℓ} xᵢ·fᵢ(x_{i+1}, …, x_m)` with its exact bias.
#[derive(Debug, Clone)]
pub struct BiasedSample {
    pub g: PolyAnf,
    /// `fᵢ` in the variables `x_{i+1}, …, x_m` renumbered from 1.
    pub components: Vec<PolyAnf>,
    pub bias: Ratio<i64>,
}

/// Largest `m` accepted by [`sample_biased_poly`] (its bias is computed from
/// the full evaluation table).
pub const MAX_BIASED_SAMPLE_VARS: u32 = 24;

/// `Σ xᵢ·fᵢ(x_{i+1}, …)` for the given components, `fᵢ` over `m − i`
/// variables.
pub fn assemble_biased_poly(m: u32, components: &[PolyAnf]) -> Result<PolyAnf> {
    let mut masks = Vec::new();
    for (idx, f) in components.iter().enumerate() {
        let i = idx as u32 + 1;
        if i > m || f.num_vars() != m - i {
            return Err(Error::Precondition(format!(
                "component {i} must have {} variables",
                m.saturating_sub(i)
            )));
        }
        masks.extend(f.masks().iter().map(|&u| (u << i) | (1 << (i - 1))));
    }
    PolyAnf::from_masks(m, masks)
}

/// Draws each `fᵢ` uniformly from polynomials of degree ≤ `r − 1` in
/// `m − i` variables and evaluates `bias(g)` exactly.
pub fn sample_biased_poly<R: Rng + ?Sized>(
    m: u32,
    r: u32,
    ell: u32,
    rng: &mut R,
) -> Result<BiasedSample> {
    if !(ell <= r && r <= m) {
        return Err(Error::Precondition(format!(
            "need ℓ ≤ r ≤ m (got m={m}, r={r}, ℓ={ell})"
        )));
    }
    if m > MAX_BIASED_SAMPLE_VARS {
        return Err(Error::CapExceeded {
            what: "m for exact bias",
            limit: u64::from(MAX_BIASED_SAMPLE_VARS),
            got: u64::from(m),
        });
    }
    let components = (1..=ell)
        .map(|i| random_poly(m - i, (r - 1).min(m - i), rng))
        .collect::<Result<Vec<_>>>()?;
    let g = assemble_biased_poly(m, &components)?;
    let bias = g.to_eval()?.bias();
    Ok(BiasedSample {
        g,
        components,
        bias,
    })
}

/// Number of polynomials with `bias ≥ threshold`, read off a profile:
/// `bias = 1 − 2w/n ≥ θ` iff `w ≤ n(1−θ)/2`.
pub fn count_bias_at_least(profile: &WeightProfile, threshold: Ratio<i64>) -> BigUint {
    let n = profile.params().n() as i64;
    profile
        .nonzero()
        .filter(|(w, _)| Ratio::from_integer(n - 2 * *w as i64) >= threshold * n)
        .map(|(_, c)| c.clone())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn p(m: u32, r: u32) -> CodeParams {
        CodeParams::new(m, r).unwrap()
    }

    #[test]
    fn small_profile_examples() {
        let a = brute_force_profile(p(3, 1)).unwrap();
        assert_eq!(a.cumulative(Ratio::new(1, 2)), BigUint::from(15u32));
        let b = brute_force_profile(p(3, 2)).unwrap();
        assert_eq!(b.cumulative(Ratio::new(1, 4)), BigUint::from(29u32));
        assert_eq!(b.total(), BigUint::from(128u32));
        let c = brute_force_profile(p(2, 2)).unwrap();
        assert_eq!(c.cumulative(Ratio::new(1, 4)), BigUint::from(5u32));
    }

    #[test]
    fn transform_route_agrees() {
        for m in 1..=4 {
            for r in 0..=m {
                assert_eq!(
                    brute_force_profile(p(m, r)).unwrap(),
                    profile_by_transform(p(m, r)).unwrap()
                );
            }
        }
    }

    #[test]
    fn text_round_trips() {
        let a = brute_force_profile(p(4, 2)).unwrap();
        assert_eq!(WeightProfile::from_csv(p(4, 2), &a.to_csv()).unwrap(), a);
        let json = a.to_json_value().to_string();
        assert_eq!(WeightProfile::from_json(&json).unwrap(), a);
        assert!(WeightProfile::from_csv(p(4, 2), "weight,count\n0,1\n").is_err());
    }

    #[test]
    fn caps_are_enforced() {
        assert!(brute_force_profile(p(6, 3)).is_err());
        assert!(brute_force_profile(p(25, 1)).is_err());
    }

    #[test]
    fn net_bound_example() {
        let v = log2_derivative_net_bound(20, 5, 2, 10).unwrap();
        assert_eq!(v, BigUint::from(10280u32));
    }

    #[test]
    fn first_order_net_at_full_length_uses_identity() {
        for m in 1..=12u64 {
            for r in 1..=m {
                let a1 = log2_first_order_net_bound(m, r, m).unwrap();
                let expected = BigUint::from(m * m) + binom_leq(m, r) - 1u32;
                assert_eq!(a1, expected);
            }
        }
    }

    #[test]
    fn recursion_edge_cases() {
        assert_eq!(bound_recursion(10, 4, 5).unwrap(), BigUint::zero());
        let a = bound_recursion(10, 4, 2).unwrap();
        let b = bound_recursion(10, 4, 3).unwrap();
        assert!(a >= b);
    }

    #[test]
    fn lower_bound_examples() {
        let lb = lower_bound_log2(10, 5, 3).unwrap();
        assert_eq!(lb.exponent, BigUint::from(419u32));
        assert_eq!(lb.log2_value, 418.0);
        assert!(!lb.hypotheses_hold);
        assert_eq!(lower_bound_log2(10, 5, 1).unwrap().log2_value, -1.0);
    }

    #[test]
    fn low_bias_rejects_half_rate() {
        assert!(bound_low_bias(10, 5, 1, 0.0).is_err());
        let rep = bound_low_bias(1_000_000, 100_000, 1, 0.0).unwrap();
        assert_eq!(rep.derived["s"], 6.0);
        assert!(rep.coefficient < 1.0);
    }

    #[test]
    fn empty_biased_sample_is_zero() {
        let mut rng = rng_from_seed(3);
        let s = sample_biased_poly(6, 3, 0, &mut rng).unwrap();
        assert!(s.g.is_zero());
        assert_eq!(s.bias, Ratio::from_integer(1));
    }

    #[test]
    fn wilson_contains_point_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 0, 1.96), (0.0, 1.0));
    }
}
