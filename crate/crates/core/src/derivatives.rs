//! Discrete derivatives `Δ_y f(x) = f(x+y) + f(x)`, their iterates along a
//! tuple of directions, and approximators that take a pointwise majority of
//! many derivatives of `f`.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::IncrementalBasis;
use crate::gf2poly::{EvalVec, LOW_HALF};

/// Largest number of base directions accepted by the subset-sum routines.
pub const MAX_SUBSET_DIRECTIONS: usize = 20;

/// Default number of fresh direction draws for the majority approximators.
pub const DEFAULT_RETRIES: usize = 20;

fn check_direction(m: u32, y: u32) -> Result<()> {
    if u64::from(y) >> m != 0 {
        return Err(Error::Precondition(format!(
            "direction {y:#x} is not a point of F₂^{m}"
        )));
    }
    Ok(())
}

/// Swaps the two halves of every block selected by `y`'s low six bits.
#[inline]
fn permute_word(mut w: u64, y: u32) -> u64 {
    for (j, &mask) in LOW_HALF.iter().enumerate() {
        if y >> j & 1 == 1 {
            let s = 1u32 << j;
            w = ((w & mask) << s) | ((w >> s) & mask);
        }
    }
    w
}

/// The shifted function `x ↦ f(x + y)`.
pub fn translate(f: &EvalVec, y: u32) -> Result<EvalVec> {
    let m = f.num_vars();
    check_direction(m, y)?;
    let src = f.bits().words();
    let hi = (y >> 6) as usize;
    let words = (0..src.len())
        .map(|i| permute_word(src[i ^ hi], y & 63))
        .collect();
    Ok(EvalVec::from_parts(m, BitVec::from_words(f.len(), words)))
}

pub fn derivative(f: &EvalVec, y: u32) -> Result<EvalVec> {
    Ok(translate(f, y)?.xor(f))
}

/// An ordered list of directions in F₂^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DirectionTuple {
    m: u32,
    vectors: Vec<u32>,
}

impl DirectionTuple {
    pub fn new(m: u32, vectors: Vec<u32>) -> Result<Self> {
        for &y in &vectors {
            check_direction(m, y)?;
        }
        Ok(DirectionTuple { m, vectors })
    }

    /// `k` directions drawn independently and uniformly.
    pub fn random<R: Rng + ?Sized>(m: u32, k: usize, rng: &mut R) -> Self {
        let vectors = (0..k)
            .map(|_| (rng.gen::<u64>() & ((1u64 << m) - 1)) as u32)
            .collect();
        DirectionTuple { m, vectors }
    }

    pub fn num_vars(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    /// Dimension of the span over F₂.
    pub fn rank(&self) -> usize {
        let mut basis = IncrementalBasis::new(self.m as usize);
        for &y in &self.vectors {
            basis.insert(BitVec::from_words(self.m as usize, vec![u64::from(y)]));
        }
        basis.rank()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.vectors.len()
    }
}

/// `Δ_{y₁}Δ_{y₂}⋯Δ_{y_k} f`.
pub fn derivative_multi(f: &EvalVec, dirs: &DirectionTuple) -> Result<EvalVec> {
    if dirs.m != f.num_vars() {
        return Err(Error::Precondition(format!(
            "directions live in F₂^{} but f has {} variables",
            dirs.m,
            f.num_vars()
        )));
    }
    let mut g = f.clone();
    for &y in dirs.vectors.iter().rev() {
        g = derivative(&g, y)?;
    }
    Ok(g)
}

/// Derivatives along every nonempty subset sum of `t` base directions.
#[derive(Debug, Clone)]
pub struct SubsetDerivatives {
    t: usize,
    sums: Vec<u32>,
    derivs: Vec<EvalVec>,
}

impl SubsetDerivatives {
    pub fn t(&self) -> usize {
        self.t
    }

    /// `Δ_{Σ_{i∈I} yᵢ} f` where bit `i−1` of `subset` marks `i ∈ I`.
    pub fn get(&self, subset: u32) -> Option<&EvalVec> {
        if subset == 0 {
            return None;
        }
        self.derivs.get(subset as usize - 1)
    }

    pub fn direction(&self, subset: u32) -> Option<u32> {
        if subset == 0 {
            return None;
        }
        self.sums.get(subset as usize - 1).copied()
    }

    pub fn len(&self) -> usize {
        self.derivs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derivs.is_empty()
    }

    /// `(subset, Δ)` pairs in ascending subset order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &EvalVec)> {
        self.derivs
            .iter()
            .enumerate()
            .map(|(i, d)| (i as u32 + 1, d))
    }
}

fn subset_sums(ys: &[u32]) -> Vec<u32> {
    let mut sums = vec![0u32; 1usize << ys.len()];
    for i in 1..sums.len() {
        let low = i.trailing_zeros() as usize;
        sums[i] = sums[i & (i - 1)] ^ ys[low];
    }
    sums
}

fn check_subset_count(t: usize) -> Result<()> {
    if t > MAX_SUBSET_DIRECTIONS {
        return Err(Error::CapExceeded {
            what: "number of subset directions t",
            limit: MAX_SUBSET_DIRECTIONS as u64,
            got: t as u64,
        });
    }
    Ok(())
}

pub fn subset_sum_derivatives(f: &EvalVec, ys: &[u32]) -> Result<SubsetDerivatives> {
    check_subset_count(ys.len())?;
    for &y in ys {
        check_direction(f.num_vars(), y)?;
    }
    let sums = subset_sums(ys);
    let derivs = sums[1..]
        .iter()
        .map(|&s| derivative(f, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubsetDerivatives {
        t: ys.len(),
        sums: sums[1..].to_vec(),
        derivs,
    })
}

/// Pointwise vote counter over functions on the same cube.
struct Tally {
    m: u32,
    counts: Vec<u32>,
    voters: u32,
}

impl Tally {
    fn new(m: u32) -> Self {
        Tally {
            m,
            counts: vec![0; 1usize << m],
            voters: 0,
        }
    }

    fn add(&mut self, g: &EvalVec) {
        for x in g.bits().iter_ones() {
            self.counts[x] += 1;
        }
        self.voters += 1;
    }

    /// Majority with ties going to 1.
    fn majority(&self) -> EvalVec {
        let mut bits = BitVec::zeros(self.counts.len());
        for (x, &c) in self.counts.iter().enumerate() {
            if 2 * c >= self.voters {
                bits.set(x, true);
            }
        }
        EvalVec::from_parts(self.m, bits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproximatorKind {
    LowWeightMaj,
    LowBiasMaj,
    WeightedSign,
}

/// A function built from derivatives of `base_f`, with the directions used.
#[derive(Debug, Clone)]
pub struct Approximator {
    pub kind: ApproximatorKind,
    pub base_f: EvalVec,
    /// One tuple per voter for the low-weight kind; the single base tuple
    /// `(y₁, …, y_t)` for the low-bias kind; the samples for weighted-sign.
    pub directions: Vec<DirectionTuple>,
    pub t: usize,
    pub delta_target: f64,
    pub epsilon_target: Option<f64>,
    pub alphas: Vec<f64>,
    pub output: EvalVec,
}

impl Approximator {
    /// `Pr_x[f(x) ≠ g(x)]`.
    pub fn disagreement(&self) -> Ratio<u64> {
        Ratio::new(self.base_f.distance(&self.output), self.base_f.len() as u64)
    }
}

/// Result of a retried approximation.
#[derive(Debug, Clone)]
pub struct ApproxOutcome {
    pub approximator: Approximator,
    /// Disagreement of `approximator`, the best over all attempts.
    pub disagreement: Ratio<u64>,
    /// Disagreement of each attempt, in order.
    pub attempts: Vec<Ratio<u64>>,
}

impl ApproxOutcome {
    pub fn achieved(&self) -> bool {
        ratio_f64(self.disagreement) <= self.approximator.delta_target
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_unit_open(what: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain {
            what,
            value: v,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

/// Voter count `⌈17 log₂(1/δ)⌉` for the low-weight majority.
pub fn low_weight_voters(delta: f64) -> Result<usize> {
    check_unit_open("delta", delta)?;
    Ok((17.0 * (1.0 / delta).log2()).ceil() as usize)
}

/// Base direction count `⌈2 log₂(1/ε) + log₂(1/δ) + 1⌉` for the low-bias
/// majority.
pub fn low_bias_directions(epsilon: f64, delta: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain {
            what: "epsilon",
            value: epsilon,
            domain: "(0, 1]",
        });
    }
    check_unit_open("delta", delta)?;
    Ok((2.0 * (1.0 / epsilon).log2() + (1.0 / delta).log2() + 1.0).ceil() as usize)
}

fn retry<F>(retries: usize, delta: f64, mut attempt: F) -> Result<ApproxOutcome>
where
    F: FnMut() -> Result<Approximator>,
{
    if retries == 0 {
        return Err(Error::Precondition("retries must be positive".into()));
    }
    let mut best: Option<(Approximator, Ratio<u64>)> = None;
    let mut attempts = Vec::new();
    for _ in 0..retries {
        let a = attempt()?;
        let d = a.disagreement();
        attempts.push(d);
        if best.as_ref().is_none_or(|(_, b)| d < *b) {
            best = Some((a, d));
        }
        if ratio_f64(d) <= delta {
            break;
        }
    }
    let (approximator, disagreement) = best.expect("at least one attempt");
    Ok(ApproxOutcome {
        approximator,
        disagreement,
        attempts,
    })
}

/// `g = Maj(Δ_{Y₁}f, …, Δ_{Y_t}f)` with `t = ⌈17 log₂(1/δ)⌉` and each `Yᵢ` a
/// uniform tuple of `k−1` directions. Draws fresh directions up to `retries`
/// times, stopping once the disagreement is at most `δ`, and keeps the best.
pub fn low_weight_approximator<R: Rng + ?Sized>(
    f: &EvalVec,
    k: u32,
    delta: f64,
    retries: usize,
    rng: &mut R,
) -> Result<ApproxOutcome> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "order k = {k} must be at least 2"
        )));
    }
    let t = low_weight_voters(delta)?;
    let m = f.num_vars();
    if k > 63 || f.abs_weight() << k > f.len() as u64 {
        return Err(Error::Precondition(format!(
            "wt(f) = {} exceeds 2^-{k}",
            f.weight()
        )));
    }
    retry(retries, delta, || {
        let mut tally = Tally::new(m);
        let mut directions = Vec::with_capacity(t);
        for _ in 0..t {
            let y = DirectionTuple::random(m, k as usize - 1, rng);
            tally.add(&derivative_multi(f, &y)?);
            directions.push(y);
        }
        Ok(Approximator {
            kind: ApproximatorKind::LowWeightMaj,
            base_f: f.clone(),
            directions,
            t,
            delta_target: delta,
            epsilon_target: None,
            alphas: Vec::new(),
            output: tally.majority(),
        })
    })
}

/// `g = Maj(Δ_{Σ_{i∈I} yᵢ} f : ∅ ≠ I ⊆ [t])` with
/// `t = ⌈2 log₂(1/ε) + log₂(1/δ) + 1⌉` uniform base directions. Retry
/// semantics as in [`low_weight_approximator`].
pub fn low_bias_approximator<R: Rng + ?Sized>(
    f: &EvalVec,
    epsilon: f64,
    delta: f64,
    retries: usize,
    rng: &mut R,
) -> Result<ApproxOutcome> {
    let t = low_bias_directions(epsilon, delta)?;
    check_subset_count(t)?;
    if f.bias_f64() < epsilon {
        return Err(Error::Precondition(format!(
            "bias(f) = {} is below ε = {epsilon}",
            f.bias()
        )));
    }
    let m = f.num_vars();
    retry(retries, delta, || {
        let ys = DirectionTuple::random(m, t, rng);
        let mut tally = Tally::new(m);
        for s in &subset_sums(ys.vectors())[1..] {
            tally.add(&derivative(f, *s)?);
        }
        Ok(Approximator {
            kind: ApproximatorKind::LowBiasMaj,
            base_f: f.clone(),
            directions: vec![ys],
            t,
            delta_target: delta,
            epsilon_target: Some(epsilon),
            alphas: Vec::new(),
            output: tally.majority(),
        })
    })
}

/// `1/Π_{j=1}^{k}(1 − 2^{−j})`, the largest coefficient the weighted-sign
/// estimator can produce at order `k`. Below 3.47 for every `k`.
pub fn alpha_bound(k: u32) -> f64 {
    1.0 / (1..=k)
        .map(|j| 1.0 - 0.5f64.powi(j as i32))
        .product::<f64>()
}

#[derive(Debug, Clone)]
pub struct WeightedSign {
    /// Coefficient of each accepted sample, in input order.
    pub alphas: Vec<f64>,
    /// Indices (into the input) of samples rejected for a zero-bias
    /// intermediate derivative.
    pub rejected: Vec<usize>,
    /// The estimate of `f`: 1 where the weighted average is ≤ 0.
    pub sign: EvalVec,
    pub approximator: Approximator,
}

fn check_low_weight_order(f: &EvalVec, k: u32) -> Result<()> {
    if !(2..=63).contains(&k) {
        return Err(Error::Precondition(format!(
            "order k = {k} must lie in [2, 63]"
        )));
    }
    if f.abs_weight() << k > f.len() as u64 {
        return Err(Error::Precondition(format!(
            "wt(f) = {} exceeds 2^-{k}",
            f.weight()
        )));
    }
    Ok(())
}

/// `α_Y` for `Y = (y₁, …, y_{k−1})`: the reciprocal of
/// `bias(f)·bias(Δ_{y₁}f)⋯bias(Δ_{y_{k−2}}⋯Δ_{y₁}f)`, together with `Δ_Y f`.
/// `None` when one of the biases is zero.
fn alpha_and_derivative(f: &EvalVec, ys: &[u32]) -> Result<Option<(f64, EvalVec)>> {
    let mut g = f.clone();
    let mut prod = 1.0f64;
    for &y in ys {
        let b = g.bias_f64();
        if b == 0.0 {
            return Ok(None);
        }
        prod *= b;
        g = derivative(&g, y)?;
    }
    Ok(Some((1.0 / prod, g)))
}

/// Estimates `(−1)^{f(x)}` by the empirical mean of `α_Y·(−1)^{Δ_Y f(x)}`
/// over the given order-`k−1` samples and returns its sign pattern.
pub fn weighted_sign_estimator(
    f: &EvalVec,
    k: u32,
    samples: &[DirectionTuple],
) -> Result<WeightedSign> {
    check_low_weight_order(f, k)?;
    let m = f.num_vars();
    let n = f.len();
    let bound = alpha_bound(k);
    let mut acc = vec![0.0f64; n];
    let mut alphas = Vec::new();
    let mut rejected = Vec::new();
    let mut accepted = Vec::new();
    for (i, y) in samples.iter().enumerate() {
        if y.order() + 1 != k as usize || y.num_vars() != m {
            return Err(Error::Precondition(format!(
                "sample {i} has order {} in F₂^{}, expected order {} in F₂^{m}",
                y.order(),
                y.num_vars(),
                k - 1
            )));
        }
        let Some((alpha, d)) = alpha_and_derivative(f, y.vectors())? else {
            rejected.push(i);
            continue;
        };
        debug_assert!(alpha > 0.0 && alpha <= bound * (1.0 + 1e-12));
        for (x, a) in acc.iter_mut().enumerate() {
            *a += if d.get(x as u32) { -alpha } else { alpha };
        }
        alphas.push(alpha);
        accepted.push(y.clone());
    }
    let mut bits = BitVec::zeros(n);
    if !alphas.is_empty() {
        for (x, &a) in acc.iter().enumerate() {
            if a <= 0.0 {
                bits.set(x, true);
            }
        }
    }
    let sign = EvalVec::from_parts(m, bits);
    let approximator = Approximator {
        kind: ApproximatorKind::WeightedSign,
        base_f: f.clone(),
        directions: accepted,
        t: alphas.len(),
        delta_target: 0.0,
        epsilon_target: None,
        alphas: alphas.clone(),
        output: sign.clone(),
    };
    Ok(WeightedSign {
        alphas,
        rejected,
        sign,
        approximator,
    })
}

/// Largest `(k−1)·m` for which [`full_expectation`] enumerates all tuples.
pub const MAX_FULL_EXPECTATION_BITS: u32 = 16;

/// `E_Y[α_Y·(−1)^{Δ_Y f(x)}]` over all `Y ∈ (F₂^m)^{k−1}`, exactly, at every
/// point `x`. Equals `(−1)^{f(x)}` whenever every intermediate bias is
/// nonzero.
pub fn full_expectation(f: &EvalVec, k: u32) -> Result<Vec<BigRational>> {
    check_low_weight_order(f, k)?;
    let m = f.num_vars();
    let bits = (k - 1) * m;
    if bits > MAX_FULL_EXPECTATION_BITS {
        return Err(Error::CapExceeded {
            what: "(k-1)·m for full expectation",
            limit: u64::from(MAX_FULL_EXPECTATION_BITS),
            got: u64::from(bits),
        });
    }
    expectation_rec(f, k - 1)
}

fn expectation_rec(f: &EvalVec, depth: u32) -> Result<Vec<BigRational>> {
    let n = f.len();
    if depth == 0 {
        return Ok((0..n)
            .map(|x| {
                let s = if f.get(x as u32) { -1 } else { 1 };
                BigRational::from_integer(BigInt::from(s))
            })
            .collect());
    }
    let bias = f.bias();
    if bias.numer().is_zero() {
        return Err(Error::Precondition(
            "an intermediate derivative has zero bias".into(),
        ));
    }
    let inv_bias = BigRational::new(BigInt::from(*bias.denom()), BigInt::from(*bias.numer()));
    let mut acc = vec![BigRational::zero(); n];
    for y in 0..n as u32 {
        let inner = expectation_rec(&derivative(f, y)?, depth - 1)?;
        for (a, v) in acc.iter_mut().zip(inner) {
            *a += v;
        }
    }
    let scale = inv_bias / BigRational::from_integer(BigInt::from(n));
    Ok(acc.into_iter().map(|a| a * &scale).collect())
}

/// `(−1)^{f(x)}` as an exact rational, for comparison with
/// [`full_expectation`].
pub fn signs(f: &EvalVec) -> Vec<BigRational> {
    (0..f.len())
        .map(|x| {
            if f.get(x as u32) {
                -BigRational::one()
            } else {
                BigRational::one()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2poly::{random_poly, PolyAnf};
    use crate::seed::rng_from_seed;

    fn poly(m: u32, vars: &[u32]) -> EvalVec {
        PolyAnf::product_of_vars(m, vars)
            .unwrap()
            .to_eval()
            .unwrap()
    }

    fn naive_derivative(f: &EvalVec, y: u32) -> EvalVec {
        EvalVec::from_fn(f.num_vars(), |x| f.get(x ^ y) ^ f.get(x)).unwrap()
    }

    #[test]
    fn translate_matches_pointwise_definition() {
        let mut rng = rng_from_seed(5);
        for m in [1u32, 3, 6, 7, 9] {
            let f = random_poly(m, m, &mut rng).unwrap().to_eval().unwrap();
            for y in 0..(1u32 << m) {
                assert_eq!(derivative(&f, y).unwrap(), naive_derivative(&f, y));
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let f = poly(3, &[1, 2]);
        assert!(derivative(&f, 0).unwrap().bits().is_zero());
        assert_eq!(derivative(&f, 0b001).unwrap(), poly(3, &[2]));
        let g = poly(3, &[1, 2]).xor(&poly(3, &[3]));
        assert_eq!(
            derivative(&g, 0b100).unwrap(),
            EvalVec::zero(3).unwrap().complement()
        );
        assert!(derivative(&f, 8).is_err());
    }

    #[test]
    fn multi_derivative_examples() {
        let f = poly(3, &[1, 2, 3]);
        let y = DirectionTuple::new(3, vec![0b001, 0b010]).unwrap();
        assert_eq!(derivative_multi(&f, &y).unwrap(), poly(3, &[3]));
        let dep = DirectionTuple::new(3, vec![0b101, 0b101]).unwrap();
        assert_eq!(dep.rank(), 1);
        assert!(derivative_multi(&f, &dep).unwrap().bits().is_zero());
    }

    #[test]
    fn voter_counts() {
        assert_eq!(low_weight_voters(0.5).unwrap(), 17);
        assert_eq!(low_weight_voters(0.125).unwrap(), 51);
        assert_eq!(low_bias_directions(0.5, 0.125).unwrap(), 6);
        assert!(low_weight_voters(1.0).is_err());
    }

    #[test]
    fn subset_sum_identity_for_pairs() {
        let mut rng = rng_from_seed(9);
        let f = random_poly(6, 4, &mut rng).unwrap().to_eval().unwrap();
        let (y1, y2) = (0b100101u32, 0b011001u32);
        let all = subset_sum_derivatives(&f, &[y1, y2]).unwrap();
        let d1 = derivative(&f, y1).unwrap();
        let d2_shifted = translate(&derivative(&f, y2).unwrap(), y1).unwrap();
        assert_eq!(all.get(0b11).unwrap(), &d1.xor(&d2_shifted));
        assert_eq!(all.len(), 3);
        assert!(subset_sum_derivatives(&f, &[1; 21]).is_err());
    }

    #[test]
    fn zero_function_is_reproduced_exactly() {
        let f = EvalVec::zero(6).unwrap();
        let mut rng = rng_from_seed(1);
        let a = low_weight_approximator(&f, 3, 0.5, 3, &mut rng).unwrap();
        assert_eq!(a.disagreement, Ratio::from_integer(0));
        assert_eq!(a.approximator.t, 17);
        let b = low_bias_approximator(&f, 0.5, 0.125, 3, &mut rng).unwrap();
        assert_eq!(b.disagreement, Ratio::from_integer(0));
        assert_eq!(b.approximator.t, 6);
    }

    #[test]
    fn approximator_preconditions() {
        let mut rng = rng_from_seed(1);
        let heavy = poly(4, &[1]);
        assert!(low_weight_approximator(&heavy, 2, 0.5, 1, &mut rng).is_err());
        assert!(low_bias_approximator(&heavy, 0.5, 0.5, 1, &mut rng).is_err());
    }

    #[test]
    fn alpha_for_order_two_is_inverse_bias() {
        let f = poly(5, &[1, 2]);
        let samples: Vec<_> = (0..4)
            .map(|y| DirectionTuple::new(5, vec![y]).unwrap())
            .collect();
        let w = weighted_sign_estimator(&f, 2, &samples).unwrap();
        assert!(w.alphas.iter().all(|&a| a == 2.0));
        assert!(w.rejected.is_empty());
    }

    #[test]
    fn alpha_bound_values() {
        assert!((alpha_bound(1) - 2.0).abs() < 1e-15);
        assert!(alpha_bound(60) < 3.47);
    }

    #[test]
    fn full_expectation_recovers_signs() {
        let f = poly(4, &[1, 2]);
        assert_eq!(full_expectation(&f, 2).unwrap(), signs(&f));
        let g = poly(4, &[1, 2, 3]);
        assert_eq!(full_expectation(&g, 3).unwrap(), signs(&g));
    }
}
