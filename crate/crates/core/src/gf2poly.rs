//! Boolean functions on F₂^m in two representations: algebraic normal form
//! (a set of monomial masks) and the evaluation table.
//!
//! Encoding convention shared by every module: bit `i−1` of a mask or point
//! index corresponds to variable `xᵢ`. A point `a` is the integer whose bit
//! `i−1` is the value of `xᵢ`; a monomial mask has bit `i−1` set iff `xᵢ`
//! appears. The empty mask is the constant monomial 1.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Largest `m` for which evaluation tables are materialised (2^30 bits).
pub const MAX_EVAL_VARS: u32 = 30;

fn check_eval_vars(m: u32) -> Result<()> {
    if m > MAX_EVAL_VARS {
        return Err(Error::CapExceeded {
            what: "m (evaluation table)",
            limit: u64::from(MAX_EVAL_VARS),
            got: u64::from(m),
        });
    }
    Ok(())
}

/// Multilinear polynomial over F₂ in `m` variables, stored as a sorted list of
/// distinct monomial masks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyAnf {
    m: u32,
    masks: Vec<u32>,
}

impl PolyAnf {
    pub fn zero(m: u32) -> Self {
        PolyAnf {
            m,
            masks: Vec::new(),
        }
    }

    pub fn one(m: u32) -> Self {
        PolyAnf { m, masks: vec![0] }
    }

    /// Product of the variables selected by `mask`.
    pub fn monomial(m: u32, mask: u32) -> Result<Self> {
        Self::from_masks(m, [mask])
    }

    /// Product `x_{i₁}⋯x_{i_k}` from 1-based variable indices.
    pub fn product_of_vars(m: u32, vars: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > m {
                return Err(Error::Precondition(format!(
                    "variable x{v} out of range for m = {m}"
                )));
            }
            mask |= 1 << (v - 1);
        }
        Self::monomial(m, mask)
    }

    /// Builds a polynomial from masks; repeated masks cancel in pairs.
    pub fn from_masks(m: u32, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        if m > 32 {
            return Err(Error::CapExceeded {
                what: "m (monomial mask width)",
                limit: 32,
                got: u64::from(m),
            });
        }
        let mut v: Vec<u32> = masks.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&x| m < 32 && x >> m != 0) {
            return Err(Error::Precondition(format!(
                "mask {bad:#x} has a bit beyond m = {m}"
            )));
        }
        v.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(v.len());
        for x in v {
            if out.last() == Some(&x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Ok(PolyAnf { m, masks: out })
    }

    /// Coefficient vector of length 2^m (bit `mask` set iff the monomial is present).
    pub fn from_dense(m: u32, coeffs: &BitVec) -> Result<Self> {
        check_eval_vars(m)?;
        if coeffs.len() != 1usize << m {
            return Err(Error::LengthMismatch {
                expected: 1usize << m,
                got: coeffs.len(),
            });
        }
        Ok(PolyAnf {
            m,
            masks: coeffs.iter_ones().map(|i| i as u32).collect(),
        })
    }

    pub fn to_dense(&self) -> Result<BitVec> {
        check_eval_vars(self.m)?;
        let mut v = BitVec::zeros(1usize << self.m);
        for &mask in &self.masks {
            v.set(mask as usize, true);
        }
        Ok(v)
    }

    #[inline]
    pub fn num_vars(&self) -> u32 {
        self.m
    }

    /// Monomial masks in ascending order.
    #[inline]
    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn is_zero(&self) -> bool {
        self.masks.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.masks.iter().map(|x| x.count_ones()).max()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    /// `f(a) = Σ_{mask ⊆ a} coeff(mask)`.
    pub fn eval_at(&self, point: u32) -> bool {
        self.masks
            .iter()
            .filter(|&&mask| mask & !point == 0)
            .count()
            % 2
            == 1
    }

    /// Sum over F₂ (symmetric difference of monomial sets).
    pub fn add(&self, other: &PolyAnf) -> PolyAnf {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let (a, b) = (&self.masks, &other.masks);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PolyAnf {
            m: self.m,
            masks: out,
        }
    }

    pub fn to_eval(&self) -> Result<EvalVec> {
        anf_to_eval(self)
    }
}

impl fmt::Debug for PolyAnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyAnf({self})")
    }
}

/// Canonical text form `m:mask,mask,…` with lowercase hex masks in ascending
/// order; the zero polynomial is `m:`.
impl fmt::Display for PolyAnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.m)?;
        for (i, mask) in self.masks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{mask:x}")?;
        }
        Ok(())
    }
}

fn parse_m(s: &str) -> Result<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad variable count {s:?}")));
    }
    s.parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad variable count {s:?}")))
}

/// Strict parser for the canonical form: masks must be strictly ascending.
impl FromStr for PolyAnf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m_str, rest) = s
            .trim_end_matches(['\n', '\r'])
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' after variable count".into()))?;
        let m = parse_m(m_str)?;
        if m > 32 {
            return Err(Error::Parse(format!("m = {m} exceeds 32")));
        }
        let mut masks = Vec::new();
        if !rest.is_empty() {
            for tok in rest.split(',') {
                if tok.is_empty() || tok.len() > 8 || !tok.bytes().all(|b| b.is_ascii_hexdigit()) {
                    return Err(Error::Parse(format!("bad mask {tok:?}")));
                }
                let v = u32::from_str_radix(tok, 16)
                    .map_err(|_| Error::Parse(format!("bad mask {tok:?}")))?;
                if m < 32 && v >> m != 0 {
                    return Err(Error::Parse(format!(
                        "mask {v:#x} out of range for m = {m}"
                    )));
                }
                if masks.last().is_some_and(|&p| p >= v) {
                    return Err(Error::Parse("masks must be strictly ascending".into()));
                }
                masks.push(v);
            }
        }
        Ok(PolyAnf { m, masks })
    }
}

/// Evaluation table of a Boolean function on F₂^m, indexed by point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvalVec {
    m: u32,
    bits: BitVec,
}

impl EvalVec {
    pub fn new(m: u32, bits: BitVec) -> Result<Self> {
        check_eval_vars(m)?;
        if bits.len() != 1usize << m {
            return Err(Error::LengthMismatch {
                expected: 1usize << m,
                got: bits.len(),
            });
        }
        Ok(EvalVec { m, bits })
    }

    /// Caller guarantees `bits.len() == 2^m` and `m ≤ MAX_EVAL_VARS`.
    pub(crate) fn from_parts(m: u32, bits: BitVec) -> Self {
        debug_assert_eq!(bits.len(), 1usize << m);
        EvalVec { m, bits }
    }

    pub fn zero(m: u32) -> Result<Self> {
        check_eval_vars(m)?;
        Ok(EvalVec {
            m,
            bits: BitVec::zeros(1usize << m),
        })
    }

    pub fn from_fn(m: u32, f: impl Fn(u32) -> bool) -> Result<Self> {
        let mut v = Self::zero(m)?;
        for a in 0..(1u32 << m) {
            if f(a) {
                v.bits.set(a as usize, true);
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn num_vars(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    #[inline]
    pub fn get(&self, point: u32) -> bool {
        self.bits.get(point as usize)
    }

    /// Number of points where the function is 1.
    pub fn abs_weight(&self) -> u64 {
        self.bits.count_ones()
    }

    /// `wt(f) = Pr_x[f(x) = 1]`, exact with denominator 2^m.
    pub fn weight(&self) -> Ratio<u64> {
        Ratio::new(self.abs_weight(), 1u64 << self.m)
    }

    /// `bias(f) = E_x[(−1)^{f(x)}] = 1 − 2·wt(f)`, exact.
    pub fn bias(&self) -> Ratio<i64> {
        let n = 1i64 << self.m;
        Ratio::new(n - 2 * self.abs_weight() as i64, n)
    }

    pub fn weight_f64(&self) -> f64 {
        self.abs_weight() as f64 / (1u64 << self.m) as f64
    }

    pub fn bias_f64(&self) -> f64 {
        1.0 - 2.0 * self.weight_f64()
    }

    pub fn xor(&self, other: &EvalVec) -> EvalVec {
        assert_eq!(self.m, other.m, "variable count mismatch");
        EvalVec {
            m: self.m,
            bits: self.bits.xor(&other.bits),
        }
    }

    /// Complement `1 + f`.
    pub fn complement(&self) -> EvalVec {
        EvalVec {
            m: self.m,
            bits: self.bits.not(),
        }
    }

    /// Number of points where the two functions differ.
    pub fn distance(&self, other: &EvalVec) -> u64 {
        self.bits.distance(&other.bits)
    }

    pub fn to_anf(&self) -> PolyAnf {
        eval_to_anf(self)
    }
}

impl fmt::Debug for EvalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvalVec({self})")
    }
}

/// Text form `m:hex`. Hex digit `j` (left to right) carries points
/// `4j … 4j+3`, point `4j+b` in bit `b` of the digit. Tables shorter than
/// four points use one digit whose unused high bits are zero.
impl fmt::Display for EvalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.m)?;
        let n = self.bits.len();
        let digits = n.div_ceil(4).max(1);
        for j in 0..digits {
            let mut d = 0u32;
            for b in 0..4 {
                let i = 4 * j + b;
                if i < n && self.bits.get(i) {
                    d |= 1 << b;
                }
            }
            write!(f, "{d:x}")?;
        }
        Ok(())
    }
}

impl FromStr for EvalVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m_str, hex) = s
            .trim_end_matches(['\n', '\r'])
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' after variable count".into()))?;
        let m = parse_m(m_str)?;
        if m > MAX_EVAL_VARS {
            return Err(Error::Parse(format!("m = {m} exceeds {MAX_EVAL_VARS}")));
        }
        let n = 1usize << m;
        let digits = n.div_ceil(4).max(1);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for m = {m}, got {}",
                hex.len()
            )));
        }
        let mut bits = BitVec::zeros(n);
        for (j, c) in hex.chars().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if d >> b & 1 == 1 {
                    let i = 4 * j + b;
                    if i >= n {
                        return Err(Error::Parse("bits set beyond the table length".into()));
                    }
                    bits.set(i, true);
                }
            }
        }
        Ok(EvalVec { m, bits })
    }
}

/// `LOW_HALF[i]` selects the bits of a word whose index has bit `i` clear.
pub(crate) const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// In-place subset-sum (zeta/Möbius) transform over F₂ on a packed table of
/// length 2^m: `v[a] ← Σ_{b ⊆ a} v[b]`. It is its own inverse.
pub fn mobius_in_place(m: u32, v: &mut BitVec) {
    debug_assert_eq!(v.len(), 1usize << m);
    let words = v.words_mut();
    for i in 0..m.min(6) {
        let shift = 1u32 << i;
        let mask = LOW_HALF[i as usize];
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    for i in 6..m {
        let stride = 1usize << (i - 6);
        for block in words.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h ^= *l;
            }
        }
    }
}

/// Evaluation table of `f`, in `m·2^m` bit operations.
pub fn anf_to_eval(f: &PolyAnf) -> Result<EvalVec> {
    let mut v = f.to_dense()?;
    mobius_in_place(f.m, &mut v);
    Ok(EvalVec { m: f.m, bits: v })
}

/// ANF of the function with the given evaluation table.
pub fn eval_to_anf(v: &EvalVec) -> PolyAnf {
    let mut coeffs = v.bits.clone();
    mobius_in_place(v.m, &mut coeffs);
    PolyAnf {
        m: v.m,
        masks: coeffs.iter_ones().map(|i| i as u32).collect(),
    }
}

/// Bits `b ∈ [0,64)` with `popcount(b) ≤ d`, for `d = 0..=6`.
fn low_degree_word_mask(d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    (0..64u32)
        .filter(|b| i64::from(b.count_ones()) <= d)
        .fold(0u64, |acc, b| acc | 1 << b)
}

/// Dense coefficient mask selecting every monomial of degree ≤ r.
pub fn degree_mask(m: u32, r: u32) -> Result<BitVec> {
    check_eval_vars(m)?;
    let n = 1usize << m;
    if m < 6 {
        let mut v = BitVec::zeros(n);
        for a in 0..n {
            if (a as u32).count_ones() <= r {
                v.set(a, true);
            }
        }
        return Ok(v);
    }
    let table: Vec<u64> = (0..=6).map(low_degree_word_mask).collect();
    let words = (0..n / 64)
        .map(|w: usize| {
            let d = i64::from(r) - i64::from(w.count_ones());
            if d < 0 {
                0
            } else {
                table[d.min(6) as usize]
            }
        })
        .collect();
    Ok(BitVec::from_words(n, words))
}

/// All monomial masks of degree ≤ r in ascending order.
pub fn monomials(m: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 0..=r.min(m) {
        if d == 0 {
            out.push(0);
            continue;
        }
        // Gosper's hack over masks of popcount d
        let mut x: u64 = (1u64 << d) - 1;
        let limit = 1u64 << m;
        while x < limit {
            out.push(x as u32);
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    out.sort_unstable();
    out
}

/// Uniformly random polynomial of degree ≤ r: every monomial coefficient an
/// independent fair bit.
pub fn random_poly<R: Rng + ?Sized>(m: u32, r: u32, rng: &mut R) -> Result<PolyAnf> {
    if r > m {
        return Err(Error::Precondition(format!(
            "degree r = {r} exceeds m = {m}"
        )));
    }
    let mask = degree_mask(m, r)?;
    let mut coeffs = BitVec::random(1usize << m, rng);
    for (c, k) in coeffs.words_mut().iter_mut().zip(mask.words()) {
        *c &= k;
    }
    PolyAnf::from_dense(m, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_eval(f: &PolyAnf) -> EvalVec {
        EvalVec::from_fn(f.num_vars(), |a| f.eval_at(a)).unwrap()
    }

    #[test]
    fn single_variable_and_constants() {
        let x1 = PolyAnf::product_of_vars(2, &[1]).unwrap();
        assert_eq!(
            x1.to_eval().unwrap().bits().to_bools(),
            vec![false, true, false, true]
        );
        let one = PolyAnf::one(5).to_eval().unwrap();
        assert_eq!(one.abs_weight(), 32);
        let x1x2 = PolyAnf::product_of_vars(2, &[1, 2])
            .unwrap()
            .to_eval()
            .unwrap();
        assert_eq!(x1x2.bits().to_bools(), vec![false, false, false, true]);
        assert_eq!(x1x2.weight(), Ratio::new(1, 4));
        assert_eq!(x1x2.bias(), Ratio::new(1, 2));
    }

    #[test]
    fn eval_to_anf_examples() {
        let z = EvalVec::zero(6).unwrap();
        assert!(z.to_anf().is_zero());
        assert_eq!(z.to_anf().degree(), None);
        let v = EvalVec::new(2, BitVec::from_bools(&[false, false, false, true])).unwrap();
        assert_eq!(v.to_anf(), PolyAnf::product_of_vars(2, &[1, 2]).unwrap());
    }

    #[test]
    fn transform_matches_pointwise_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 0..=9 {
            for _ in 0..5 {
                let f = random_poly(m, m, &mut rng).unwrap();
                assert_eq!(f.to_eval().unwrap(), naive_eval(&f), "m={m}");
            }
        }
    }

    #[test]
    fn transform_is_involution_exhaustive_small() {
        for m in 0..=4u32 {
            let n = 1usize << m;
            for word in 0..(1u64 << n) {
                let v = EvalVec::new(m, BitVec::from_words(n, vec![word])).unwrap();
                let f = v.to_anf();
                assert_eq!(f.to_eval().unwrap(), v);
            }
        }
    }

    #[test]
    fn monomial_weights() {
        for m in 0..=8u32 {
            for mask in 0..(1u32 << m) {
                let e = PolyAnf::monomial(m, mask).unwrap().to_eval().unwrap();
                assert_eq!(e.abs_weight(), 1u64 << (m - mask.count_ones()));
            }
        }
    }

    #[test]
    fn complement_negates_bias() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_poly(7, 3, &mut rng).unwrap().to_eval().unwrap();
            assert_eq!(f.complement().bias(), -f.bias());
        }
        let z = EvalVec::zero(3).unwrap();
        assert_eq!(z.weight(), Ratio::from_integer(0));
        assert_eq!(z.bias(), Ratio::from_integer(1));
    }

    #[test]
    fn product_of_r_vars_has_min_distance_weight() {
        for r in 0..=8u32 {
            let vars: Vec<u32> = (1..=r).collect();
            let f = PolyAnf::product_of_vars(10, &vars)
                .unwrap()
                .to_eval()
                .unwrap();
            assert_eq!(f.weight(), Ratio::new(1, 1u64 << r));
        }
    }

    #[test]
    fn from_masks_cancels_duplicates() {
        let f = PolyAnf::from_masks(4, [3, 1, 3, 5, 5, 5]).unwrap();
        assert_eq!(f.masks(), &[1, 5]);
        assert!(PolyAnf::from_masks(3, [8]).is_err());
        assert_eq!(f.degree(), Some(2));
    }

    #[test]
    fn degree_mask_counts() {
        for m in 0..=12u32 {
            for r in 0..=m {
                let k = degree_mask(m, r).unwrap();
                let want = crate::combinatorics::binom_leq(u64::from(m), u64::from(r));
                assert_eq!(num_bigint::BigUint::from(k.count_ones()), want);
                assert_eq!(monomials(m, r).len() as u64, k.count_ones());
            }
        }
    }

    #[test]
    fn random_poly_respects_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 0..=8 {
            let f = random_poly(8, r, &mut rng).unwrap();
            assert!(f.degree().unwrap_or(0) <= r);
        }
        for _ in 0..20 {
            let f = random_poly(5, 0, &mut rng).unwrap();
            assert!(f.is_zero() || f == PolyAnf::one(5));
        }
        assert!(random_poly(3, 4, &mut rng).is_err());
    }

    #[test]
    fn text_forms() {
        let f = PolyAnf::from_masks(3, [0, 3, 6]).unwrap();
        assert_eq!(f.to_string(), "3:0,3,6");
        assert_eq!("3:0,3,6".parse::<PolyAnf>().unwrap(), f);
        assert_eq!("5:".parse::<PolyAnf>().unwrap(), PolyAnf::zero(5));
        assert!("3:3,0".parse::<PolyAnf>().is_err());
        assert!("3:8".parse::<PolyAnf>().is_err());
        assert!("3:1,,2".parse::<PolyAnf>().is_err());
        assert!("x:1".parse::<PolyAnf>().is_err());

        let e = PolyAnf::product_of_vars(3, &[1])
            .unwrap()
            .to_eval()
            .unwrap();
        assert_eq!(e.to_string(), "3:aa");
        assert_eq!("3:aa".parse::<EvalVec>().unwrap(), e);
        let tiny = EvalVec::new(1, BitVec::from_bools(&[false, true])).unwrap();
        assert_eq!(tiny.to_string(), "1:2");
        assert!("1:4".parse::<EvalVec>().is_err());
        assert!("3:a".parse::<EvalVec>().is_err());
        assert!("31:0".parse::<EvalVec>().is_err());
    }
}
