//! Binary erasure and binary symmetric channels over RM(m, r): sampling,
//! erasure recoverability and decoding, exhaustive minimum-distance decoding,
//! failure-rate estimation, exact union bounds at small length, and the
//! inequality families whose validity certifies the capacity thresholds.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVec;
use crate::combinatorics::{
    binary_entropy, binom, binom_leq, c_gamma, d_gamma, xi_from_capacity_gap,
};
use crate::error::{Error, Result};
use crate::gf2::IncrementalBasis;
use crate::gf2poly::EvalVec;
use crate::rmcode::{column_at, encode, visit_codeword_range, CodeParams, GeneratorMatrix};
use crate::seed::task_rng;
use crate::weightdist::WeightProfile;

/// Largest code dimension for the codeword-scan erasure oracle.
pub const MAX_ORACLE_DIM: u64 = 20;

/// Largest code dimension for exhaustive minimum-distance decoding.
pub const MAX_ML_DIM: u64 = 22;

/// Largest block length for exhaustive enumeration of erasure or error
/// patterns.
pub const MAX_PATTERN_LENGTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Bec,
    Bsc,
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bec" => Ok(ChannelKind::Bec),
            "bsc" => Ok(ChannelKind::Bsc),
            _ => Err(Error::Parse(format!("unknown channel {s:?}"))),
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Bsc => "bsc",
        })
    }
}

/// `p` derived from a multiple `c` of the rate: `p = 1 − cR` for erasures,
/// `H(p) = 1 − cR` with `p ≤ 1/2` for errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derivation {
    pub c: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
    pub derivation: Option<Derivation>,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            what: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

fn derive_p(kind: ChannelKind, c: f64, rate: f64) -> Result<f64> {
    match kind {
        ChannelKind::Bec => {
            if !(rate > 0.0 && rate <= 1.0) || c.is_nan() || c < 0.0 {
                return Err(Error::Precondition(format!(
                    "need c ≥ 0 and R ∈ (0, 1] (got c={c}, R={rate})"
                )));
            }
            let p = 1.0 - c * rate;
            if p < 0.0 {
                return Err(Error::NoSolution(format!(
                    "c·R = {} > 1 leaves no erasure probability",
                    c * rate
                )));
            }
            Ok(p)
        }
        ChannelKind::Bsc => Ok((1.0 - xi_from_capacity_gap(c, rate)?) / 2.0),
    }
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(ChannelSpec {
            kind,
            p,
            derivation: None,
        })
    }

    pub fn from_capacity_gap(kind: ChannelKind, c: f64, rate: f64) -> Result<Self> {
        let p = derive_p(kind, c, rate)?;
        Ok(ChannelSpec {
            kind,
            p,
            derivation: Some(Derivation { c, rate }),
        })
    }

    /// Recomputes `p` from the derivation, if any, and compares to 1e−12.
    pub fn is_consistent(&self) -> bool {
        match self.derivation {
            None => (0.0..=1.0).contains(&self.p),
            Some(d) => derive_p(self.kind, d.c, d.rate)
                .map(|p| (p - self.p).abs() <= 1e-12)
                .unwrap_or(false),
        }
    }
}

/// The set `S` of erased positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    m: u32,
    erased: BitVec,
}

impl ErasurePattern {
    pub fn new(m: u32, erased: BitVec) -> Result<Self> {
        if erased.len() != 1usize << m {
            return Err(Error::LengthMismatch {
                expected: 1usize << m,
                got: erased.len(),
            });
        }
        Ok(ErasurePattern { m, erased })
    }

    pub fn none(m: u32) -> Self {
        ErasurePattern {
            m,
            erased: BitVec::zeros(1usize << m),
        }
    }

    pub fn all(m: u32) -> Self {
        ErasurePattern {
            m,
            erased: BitVec::ones(1usize << m),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.m
    }

    pub fn erased(&self) -> &BitVec {
        &self.erased
    }

    pub fn is_erased(&self, x: usize) -> bool {
        self.erased.get(x)
    }

    /// `s = |complement of S|`.
    pub fn survivors(&self) -> u64 {
        self.erased.len() as u64 - self.erased.count_ones()
    }
}

/// A received word with erasures; erased positions hold 0 in `values`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialWord {
    values: BitVec,
    pattern: ErasurePattern,
}

impl PartialWord {
    pub fn new(values: BitVec, pattern: ErasurePattern) -> Result<Self> {
        if values.len() != pattern.erased.len() {
            return Err(Error::LengthMismatch {
                expected: pattern.erased.len(),
                got: values.len(),
            });
        }
        let values = values.and(&pattern.erased.not());
        Ok(PartialWord { values, pattern })
    }

    pub fn values(&self) -> &BitVec {
        &self.values
    }

    pub fn pattern(&self) -> &ErasurePattern {
        &self.pattern
    }

    /// `Some(bit)` for a surviving position, `None` for an erasure.
    pub fn get(&self, x: usize) -> Option<bool> {
        if self.pattern.is_erased(x) {
            None
        } else {
            Some(self.values.get(x))
        }
    }
}

/// Erases each position independently with probability `p`.
pub fn bec_transmit<R: Rng + ?Sized>(
    codeword: &EvalVec,
    p: f64,
    rng: &mut R,
) -> Result<PartialWord> {
    check_probability(p)?;
    let m = codeword.num_vars();
    let erased = BitVec::bernoulli(codeword.len(), p, rng);
    PartialWord::new(codeword.bits().clone(), ErasurePattern { m, erased })
}

fn check_pattern_params(pattern: &ErasurePattern, params: CodeParams) -> Result<()> {
    if pattern.m != params.m {
        return Err(Error::Precondition(format!(
            "pattern has m = {} but the code has m = {}",
            pattern.m, params.m
        )));
    }
    Ok(())
}

/// `true` iff the generator columns at surviving positions have full rank,
/// i.e. no nonzero codeword is supported inside the erased set.
pub fn bec_recoverable(pattern: &ErasurePattern, params: CodeParams) -> Result<bool> {
    check_pattern_params(pattern, params)?;
    let dim = params.dim() as usize;
    if pattern.survivors() < dim as u64 {
        return Ok(false);
    }
    let masks = params.monomials();
    let mut basis = IncrementalBasis::new(dim);
    for x in 0..pattern.erased.len() {
        if pattern.is_erased(x) {
            continue;
        }
        basis.insert(column_at(&masks, x as u32));
        if basis.is_full() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The same predicate decided by scanning every nonzero codeword for a
/// support contained in the erased set.
pub fn bec_recoverable_oracle(pattern: &ErasurePattern, params: CodeParams) -> Result<bool> {
    check_pattern_params(pattern, params)?;
    if params.dim() > MAX_ORACLE_DIM {
        return Err(Error::CapExceeded {
            what: "code dimension (erasure oracle)",
            limit: MAX_ORACLE_DIM,
            got: params.dim(),
        });
    }
    let gen = GeneratorMatrix::new(params)?;
    let mut hidden = false;
    visit_codeword_range(&gen, 1, 1u64 << params.dim(), |_, w| {
        if !hidden && w.is_subset_of(&pattern.erased) {
            hidden = true;
        }
    });
    Ok(!hidden)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BecDecoded {
    Unique(EvalVec),
    /// Several codewords agree with the surviving positions; `rank` is the
    /// rank of the surviving generator columns.
    Ambiguous {
        rank: usize,
    },
}

/// Solves for the message from the surviving positions. Returns
/// [`Error::Inconsistent`] when no codeword matches them.
pub fn bec_decode(received: &PartialWord, params: CodeParams) -> Result<BecDecoded> {
    check_pattern_params(&received.pattern, params)?;
    let masks = params.monomials();
    let mut basis = IncrementalBasis::new(masks.len());
    for x in 0..received.values.len() {
        if received.pattern.is_erased(x) {
            continue;
        }
        basis.insert_equation(column_at(&masks, x as u32), received.values.get(x));
        if basis.is_full() {
            break;
        }
    }
    if !basis.is_consistent() {
        return Err(Error::Inconsistent);
    }
    if !basis.is_full() {
        // the particular solution must still fit every equation
        let msg = basis.particular_solution().ok_or(Error::Inconsistent)?;
        let cw = encode(params, &msg)?;
        if !agrees(&cw, received) {
            return Err(Error::Inconsistent);
        }
        return Ok(BecDecoded::Ambiguous { rank: basis.rank() });
    }
    let msg = basis.particular_solution().ok_or(Error::Inconsistent)?;
    let cw = encode(params, &msg)?;
    if !agrees(&cw, received) {
        return Err(Error::Inconsistent);
    }
    Ok(BecDecoded::Unique(cw))
}

fn agrees(cw: &EvalVec, received: &PartialWord) -> bool {
    let keep = received.pattern.erased.not();
    cw.bits().and(&keep) == received.values
}

/// Flips each position independently with probability `p`.
pub fn bsc_transmit<R: Rng + ?Sized>(codeword: &EvalVec, p: f64, rng: &mut R) -> Result<EvalVec> {
    check_probability(p)?;
    let flips = BitVec::bernoulli(codeword.len(), p, rng);
    EvalVec::new(codeword.num_vars(), codeword.bits().xor(&flips))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlDecoded {
    pub codeword: EvalVec,
    pub distance: u64,
    /// The minimum distance is attained by more than one codeword.
    pub tie: bool,
}

/// Nearest codeword by exhaustive scan. Among tied codewords the first in
/// Gray-code order is returned, and `tie` is set.
pub fn ml_decode(received: &EvalVec, params: CodeParams) -> Result<MlDecoded> {
    if received.num_vars() != params.m {
        return Err(Error::LengthMismatch {
            expected: params.n(),
            got: received.len(),
        });
    }
    if params.dim() > MAX_ML_DIM {
        return Err(Error::CapExceeded {
            what: "code dimension (ML decoding)",
            limit: MAX_ML_DIM,
            got: params.dim(),
        });
    }
    let gen = GeneratorMatrix::new(params)?;
    let target = received.bits();
    let mut best = u64::MAX;
    let mut best_msg = 0u64;
    let mut hits = 0u32;
    visit_codeword_range(&gen, 0, 1u64 << params.dim(), |msg, w| {
        let d = w.distance(target);
        if d < best {
            best = d;
            best_msg = msg;
            hits = 1;
        } else if d == best {
            hits += 1;
        }
    });
    let msg = BitVec::from_words(params.dim() as usize, vec![best_msg]);
    Ok(MlDecoded {
        codeword: gen.encode(&msg)?,
        distance: best,
        tie: hits > 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub seed: u64,
    /// Excluded from serialized output so identical configurations give
    /// identical files.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TrialStats {
    fn new(trials: u64, failures: u64, seed: u64, wall_time: Duration) -> Self {
        TrialStats {
            trials,
            failures,
            failure_rate: if trials == 0 {
                0.0
            } else {
                failures as f64 / trials as f64
            },
            seed,
            wall_time,
        }
    }

    /// Binomial standard error of `failure_rate`.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.failure_rate;
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Which codeword the failure-rate estimator transmits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transmit {
    Zero,
    Random,
}

fn random_codeword<R: Rng + ?Sized>(params: CodeParams, rng: &mut R) -> Result<EvalVec> {
    let msg = BitVec::random(params.dim() as usize, rng);
    encode(params, &msg)
}

fn run_trial(
    params: CodeParams,
    channel: &ChannelSpec,
    transmit: Transmit,
    seed: u64,
    i: u64,
) -> Result<bool> {
    let mut rng = task_rng(seed, i);
    let sent = match transmit {
        Transmit::Zero => EvalVec::zero(params.m)?,
        Transmit::Random => random_codeword(params, &mut rng)?,
    };
    match channel.kind {
        ChannelKind::Bec => {
            let rx = bec_transmit(&sent, channel.p, &mut rng)?;
            Ok(!bec_recoverable(rx.pattern(), params)?)
        }
        ChannelKind::Bsc => {
            let rx = bsc_transmit(&sent, channel.p, &mut rng)?;
            let dec = ml_decode(&rx, params)?;
            Ok(dec.tie || dec.codeword != sent)
        }
    }
}

/// Failure rate over `trials` independent transmissions of the zero
/// codeword. Trial `i` draws from the stream derived from `(seed, i)`.
pub fn estimate_lambda(
    params: CodeParams,
    channel: &ChannelSpec,
    trials: u64,
    seed: u64,
) -> Result<TrialStats> {
    estimate_lambda_with(params, channel, trials, seed, Transmit::Zero)
}

pub fn estimate_lambda_with(
    params: CodeParams,
    channel: &ChannelSpec,
    trials: u64,
    seed: u64,
    transmit: Transmit,
) -> Result<TrialStats> {
    check_probability(channel.p)?;
    if channel.kind == ChannelKind::Bsc && params.dim() > MAX_ML_DIM {
        return Err(Error::CapExceeded {
            what: "code dimension (ML decoding)",
            limit: MAX_ML_DIM,
            got: params.dim(),
        });
    }
    let start = Instant::now();
    let failures = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(params, channel, transmit, seed, i).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(TrialStats::new(trials, failures, seed, start.elapsed()))
}

/// `Σ_{f≠0} (1 − wt(f))^s` as the exact rational
/// `Σ_w count_w·(n−w)^s / n^s`.
pub fn union_bound_bec(profile: &WeightProfile, s: u64) -> Result<Ratio<BigUint>> {
    let n = profile.params().n() as u64;
    let s32 = u32::try_from(s).map_err(|_| Error::CapExceeded {
        what: "survivor count s",
        limit: u64::from(u32::MAX),
        got: s,
    })?;
    let num: BigUint = profile
        .nonzero()
        .filter(|&(w, _)| w > 0)
        .map(|(w, c)| c * Pow::pow(BigUint::from(n - w as u64), s32))
        .sum();
    Ok(Ratio::new(num, Pow::pow(BigUint::from(n), s32)))
}

/// The Chernoff term `exp(−κ·ε²·c·binom(m, ≤ r))` with `ε = 2^{−H(γ)m/4}`,
/// bounding the chance that fewer than `(1−ε)(1−p)2^m` positions survive at
/// `p = 1 − cR`. The constant `κ` is exposed; `1/2` is the textbook value.
pub fn bec_chernoff_term(params: CodeParams, c: f64, kappa: f64) -> Result<f64> {
    let gamma = f64::from(params.r) / f64::from(params.m);
    let eps = (-binary_entropy(gamma)? * f64::from(params.m) / 4.0).exp2();
    let dim = params.dim() as f64;
    Ok((-kappa * eps * eps * c * dim).exp())
}

/// Exact fraction of erasure patterns with exactly `s` survivors from which
/// the code cannot recover, by enumerating all of them.
pub fn exact_bec_failure_at_survivors(params: CodeParams, s: u64) -> Result<Ratio<BigUint>> {
    let n = params.n();
    if n > MAX_PATTERN_LENGTH {
        return Err(Error::CapExceeded {
            what: "block length for pattern enumeration",
            limit: MAX_PATTERN_LENGTH as u64,
            got: n as u64,
        });
    }
    if s > n as u64 {
        return Err(Error::Precondition(format!("s = {s} exceeds n = {n}")));
    }
    let mut bad = 0u64;
    let mut total = 0u64;
    for survivors in 0u32..1 << n {
        if u64::from(survivors.count_ones()) != s {
            continue;
        }
        total += 1;
        let erased = BitVec::from_words(n, vec![u64::from(!survivors)]);
        if !bec_recoverable(&ErasurePattern::new(params.m, erased)?, params)? {
            bad += 1;
        }
    }
    Ok(Ratio::new(BigUint::from(bad), BigUint::from(total)))
}

/// `Σ_{f≠0} 2^{w}·binom(n−w, ≤ k − ⌈w/2⌉) / binom(n, k)` for weight-`k`
/// error patterns, `w` the absolute weight of `f`; terms with a negative
/// upper index vanish. The numerator bounds the number of pairs `(v, v′)`
/// with `wt(v) = k`, `wt(v′) ≤ k` and `v + v′` a nonzero codeword.
#[derive(Debug, Clone, PartialEq)]
pub struct BscUnionBound {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl BscUnionBound {
    pub fn value(&self) -> Ratio<BigUint> {
        Ratio::new(self.numerator.clone(), self.denominator.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.value();
        v.numer().to_f64().unwrap_or(f64::INFINITY) / v.denom().to_f64().unwrap_or(f64::INFINITY)
    }
}

pub fn union_bound_bsc(profile: &WeightProfile, errors: u64) -> Result<BscUnionBound> {
    let n = profile.params().n() as u64;
    if errors > n {
        return Err(Error::Precondition(format!(
            "error count {errors} exceeds n = {n}"
        )));
    }
    let mut numerator = BigUint::zero();
    for (w, c) in profile.nonzero() {
        let w = w as u64;
        if w == 0 || errors < w.div_ceil(2) {
            continue;
        }
        let upper = errors - w.div_ceil(2);
        numerator += c * (BigUint::one() << w) * binom_leq(n - w, upper);
    }
    Ok(BscUnionBound {
        numerator,
        denominator: binom(n, errors),
    })
}

/// Exact number of pairs `(v, v′)` with `wt(v) = k`, `wt(v′) ≤ k` and
/// `v + v′` a nonzero codeword, by enumeration.
pub fn bad_pair_count(params: CodeParams, errors: u64) -> Result<u64> {
    let (pairs, _) = bad_counts(params, errors)?;
    Ok(pairs)
}

/// Number of weight-`k` error patterns `v` with some `v′ ≠ v`, `wt(v′) ≤ k`,
/// `v + v′` a codeword; the ML decoder can fail only on these.
pub fn bad_vector_count(params: CodeParams, errors: u64) -> Result<u64> {
    let (_, vectors) = bad_counts(params, errors)?;
    Ok(vectors)
}

fn bad_counts(params: CodeParams, errors: u64) -> Result<(u64, u64)> {
    let n = params.n();
    if n > MAX_PATTERN_LENGTH {
        return Err(Error::CapExceeded {
            what: "block length for pattern enumeration",
            limit: MAX_PATTERN_LENGTH as u64,
            got: n as u64,
        });
    }
    params.check_enumerable()?;
    let gen = GeneratorMatrix::new(params)?;
    let mut codewords = Vec::new();
    visit_codeword_range(&gen, 1, 1u64 << params.dim(), |_, w| {
        codewords.push(w.words()[0]);
    });
    let (mut pairs, mut vectors) = (0u64, 0u64);
    for v in 0u64..1 << n {
        if u64::from(v.count_ones()) != errors {
            continue;
        }
        let here = codewords
            .iter()
            .filter(|&&f| u64::from((v ^ f).count_ones()) <= errors)
            .count() as u64;
        pairs += here;
        vectors += u64::from(here > 0);
    }
    Ok((pairs, vectors))
}

/// Default scan length for the inequality families.
pub const DEFAULT_SCAN_LIMIT: u64 = 500;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub name: String,
    /// Minimum of `(LHS − RHS)/LHS` over the scanned indices.
    pub worst_margin: f64,
    pub worst_index: u64,
    /// Upper bound on `RHS/LHS` at the scan limit together with the ratio
    /// by which that bound shrinks per step beyond it; both below 1 means
    /// the family holds for every larger index.
    pub tail_bound: f64,
    pub tail_ratio: f64,
    pub tail_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub channel: ChannelKind,
    pub gamma: f64,
    pub delta: f64,
    pub scan_limit: u64,
    pub ok: bool,
    pub worst_margin: f64,
    pub families: Vec<FamilyReport>,
}

fn scan_family(
    name: &str,
    range: std::ops::RangeInclusive<u64>,
    lhs: impl Fn(u64) -> f64,
    rhs: impl Fn(u64) -> f64,
    tail: Option<(f64, f64)>,
) -> FamilyReport {
    let mut worst = f64::INFINITY;
    let mut worst_index = *range.start();
    for i in range {
        let l = lhs(i);
        let margin = (l - rhs(i)) / l;
        if margin < worst {
            worst = margin;
            worst_index = i;
        }
    }
    let (tail_bound, tail_ratio) = tail.unwrap_or((0.0, 0.0));
    FamilyReport {
        name: name.to_string(),
        worst_margin: worst,
        worst_index,
        tail_bound,
        tail_ratio,
        tail_certified: tail_bound < 1.0 && tail_ratio < 1.0,
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            domain: "(0, 1/2)",
        });
    }
    Ok(())
}

/// Bound on `17(c_γ i + d_γ)γ^{i−1}·2^{i+1}` at `i = n` and its per-step
/// growth factor for `i ≥ n`.
fn low_weight_tail(gamma: f64, n: u64) -> (f64, f64) {
    let (c, d) = (c_gamma(gamma), d_gamma(gamma));
    let nf = n as f64;
    let bound = 17.0 * (c * nf + d) * (2.0 * gamma).powf(nf - 1.0) * 4.0;
    (bound, 2.0 * gamma * (1.0 + 1.0 / nf))
}

/// Bound on `RHS/LHS` of the middle family at `k = n` and its per-step
/// growth factor. `extra_scale·2^{−k}` bounds the channel-specific term.
fn middle_tail(gamma: f64, n: u64, extra_scale: f64) -> (f64, f64) {
    let (c, d) = (c_gamma(gamma), d_gamma(gamma));
    let k = n as f64;
    let lhs = (1.0 - gamma).powf(3.0 * k + 3.0);
    let a = 17.0 * (c * (k + 1.0) + d) * gamma.powf(k) / lhs;
    let b = extra_scale * 0.5f64.powf(k) / lhs;
    let cube = (1.0 - gamma).powi(3);
    let ratio = (gamma / cube * (1.0 + 1.0 / (k + 1.0))).max(0.5 / cube);
    (a + b, ratio)
}

/// Evaluates the three erasure-channel families at `γ` for indices up to
/// `scan_limit`, with `δ` the rate slack in the middle family:
/// `log₂(1/(1−2^{−ℓ−1})) ≥ 17(c_γℓ+d_γ)γ^{ℓ−1}` for `ℓ ≥ 3`;
/// `(1−γ)^{3k+3} ≥ 17(c_γk+c_γ+d_γ)γ^k + (1+δ)log₂(1+2^{−k+1})` for `k ≥ 2`;
/// `(1−γ)^9 ≥ 17(5c_γ+d_γ)γ⁴ + log₂(7/4)`.
pub fn check_bec_constraints_with(
    gamma: f64,
    delta: f64,
    scan_limit: u64,
) -> Result<ConstraintReport> {
    check_gamma(gamma)?;
    if scan_limit < 3 {
        return Err(Error::Precondition("scan limit must be at least 3".into()));
    }
    let (c, d) = (c_gamma(gamma), d_gamma(gamma));
    let f1 = scan_family(
        "low_weight",
        3..=scan_limit,
        |l| -(1.0 - 0.5f64.powf(l as f64 + 1.0)).log2(),
        |l| 17.0 * (c * l as f64 + d) * gamma.powf(l as f64 - 1.0),
        Some(low_weight_tail(gamma, scan_limit)),
    );
    let f2 = scan_family(
        "middle",
        2..=scan_limit,
        |k| (1.0 - gamma).powf(3.0 * k as f64 + 3.0),
        |k| {
            let kf = k as f64;
            17.0 * (c * kf + c + d) * gamma.powf(kf)
                + (1.0 + delta) * (1.0 + 0.5f64.powf(kf - 1.0)).log2()
        },
        Some(middle_tail(
            gamma,
            scan_limit,
            2.0 * (1.0 + delta) / std::f64::consts::LN_2,
        )),
    );
    let f3 = scan_family(
        "quarter_weight",
        4..=4,
        |_| (1.0 - gamma).powi(9),
        |_| 17.0 * (5.0 * c + d) * gamma.powi(4) + (7.0f64 / 4.0).log2(),
        None,
    );
    Ok(finish(
        ChannelKind::Bec,
        gamma,
        delta,
        scan_limit,
        vec![f1, f2, f3],
    ))
}

/// Evaluates the three error-channel families at `γ`:
/// `2^{−ℓ−1}/(1−2^{−ℓ−1}) ≥ 17(c_γℓ+d_γ)γ^{ℓ−1}` for `ℓ ≥ 3`;
/// `(1−γ)^{3k+3} ≥ 17(c_γk+c_γ+d_γ)γ^k + 2^{−k+2}/(1+2^{−k+1})` for `k ≥ 2`;
/// `(1−γ)^9 ≥ 17(5c_γ+d_γ)γ⁴ + 6/7`.
pub fn check_bsc_constraints_with(gamma: f64, scan_limit: u64) -> Result<ConstraintReport> {
    check_gamma(gamma)?;
    if scan_limit < 3 {
        return Err(Error::Precondition("scan limit must be at least 3".into()));
    }
    let (c, d) = (c_gamma(gamma), d_gamma(gamma));
    let f1 = scan_family(
        "low_weight",
        3..=scan_limit,
        |l| {
            let x = 0.5f64.powf(l as f64 + 1.0);
            x / (1.0 - x)
        },
        |l| 17.0 * (c * l as f64 + d) * gamma.powf(l as f64 - 1.0),
        Some(low_weight_tail(gamma, scan_limit)),
    );
    let f2 = scan_family(
        "middle",
        2..=scan_limit,
        |k| (1.0 - gamma).powf(3.0 * k as f64 + 3.0),
        |k| {
            let kf = k as f64;
            17.0 * (c * kf + c + d) * gamma.powf(kf)
                + 0.5f64.powf(kf - 2.0) / (1.0 + 0.5f64.powf(kf - 1.0))
        },
        Some(middle_tail(gamma, scan_limit, 4.0)),
    );
    let f3 = scan_family(
        "quarter_weight",
        4..=4,
        |_| (1.0 - gamma).powi(9),
        |_| 17.0 * (5.0 * c + d) * gamma.powi(4) + 6.0 / 7.0,
        None,
    );
    Ok(finish(
        ChannelKind::Bsc,
        gamma,
        0.0,
        scan_limit,
        vec![f1, f2, f3],
    ))
}

fn finish(
    channel: ChannelKind,
    gamma: f64,
    delta: f64,
    scan_limit: u64,
    families: Vec<FamilyReport>,
) -> ConstraintReport {
    let worst_margin = families
        .iter()
        .map(|f| f.worst_margin)
        .fold(f64::INFINITY, f64::min);
    let ok = families.iter().all(|f| {
        f.worst_margin > 0.0
            && (f.tail_certified || f.worst_index == 4 && f.name == "quarter_weight")
    });
    ConstraintReport {
        channel,
        gamma,
        delta,
        scan_limit,
        ok,
        worst_margin,
        families,
    }
}

pub fn check_bec_constraints(gamma: f64) -> Result<ConstraintReport> {
    check_bec_constraints_with(gamma, 0.0, DEFAULT_SCAN_LIMIT)
}

pub fn check_bsc_constraints(gamma: f64) -> Result<ConstraintReport> {
    check_bsc_constraints_with(gamma, DEFAULT_SCAN_LIMIT)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub p: f64,
    pub stats: TrialStats,
}

/// Per trial, the largest erasure probability the code survives: positions
/// are erased iff their uniform draw is below `p`, so the code recovers iff
/// `p ≤` the draw of the column that completes the rank when columns are
/// added in descending draw order.
fn bec_threshold(params: CodeParams, masks: &[u32], seed: u64, i: u64) -> f64 {
    let mut rng = task_rng(seed, i);
    let n = params.n();
    let draws: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| draws[b].total_cmp(&draws[a]));
    let mut basis = IncrementalBasis::new(masks.len());
    for x in order {
        basis.insert(column_at(masks, x as u32));
        if basis.is_full() {
            return draws[x];
        }
    }
    f64::NEG_INFINITY
}

/// Failure rate at `p` derived from each `c`. Trial `i` uses the same
/// stream at every grid point, so the erasure or error sets are nested as
/// `p` grows. For erasures this makes the failure count exactly monotone in
/// `p`, and each row equals [`estimate_lambda`] at that `p` with the same
/// seed.
pub fn capacity_sweep(
    params: CodeParams,
    kind: ChannelKind,
    c_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let rate = params.rate_f64();
    let specs = c_grid
        .iter()
        .map(|&c| ChannelSpec::from_capacity_gap(kind, c, rate))
        .collect::<Result<Vec<_>>>()?;
    match kind {
        ChannelKind::Bec => {
            let start = Instant::now();
            let masks = params.monomials();
            let thresholds: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|i| bec_threshold(params, &masks, seed, i))
                .collect();
            let elapsed = start.elapsed();
            Ok(specs
                .iter()
                .map(|spec| {
                    // p = 0 erases nothing, p = 1 erases everything
                    let failures = thresholds
                        .iter()
                        .filter(|&&u| if spec.p >= 1.0 { true } else { spec.p > u })
                        .count() as u64;
                    SweepRow {
                        c: spec.derivation.map_or(f64::NAN, |d| d.c),
                        p: spec.p,
                        stats: TrialStats::new(trials, failures, seed, elapsed),
                    }
                })
                .collect())
        }
        ChannelKind::Bsc => specs
            .iter()
            .map(|spec| {
                Ok(SweepRow {
                    c: spec.derivation.map_or(f64::NAN, |d| d.c),
                    p: spec.p,
                    stats: estimate_lambda(params, spec, trials, seed)?,
                })
            })
            .collect(),
    }
}

/// CSV with header `c,p,trials,failures,failure_rate,seed`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("c,p,trials,failures,failure_rate,seed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.c, r.p, r.stats.trials, r.stats.failures, r.stats.failure_rate, r.stats.seed
        ));
    }
    out
}
