//! RM(m, r): evaluation vectors of polynomials of degree ≤ r in m variables.
//!
//! Messages are coefficient vectors indexed by the monomials of degree ≤ r in
//! ascending mask order; message bit `j` is the coefficient of the `j`-th
//! monomial.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bits::BitVec;
use crate::combinatorics::binom_leq;
use crate::error::{Error, Result};
use crate::gf2poly::{self, anf_to_eval, EvalVec, PolyAnf, MAX_EVAL_VARS};

/// Largest code dimension accepted by exhaustive enumeration.
pub const MAX_ENUM_DIM: u64 = 26;

/// Largest generator matrix materialised, in bits.
pub const MAX_GENERATOR_BITS: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub m: u32,
    pub r: u32,
}

impl CodeParams {
    pub fn new(m: u32, r: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("m must be positive".into()));
        }
        if m > MAX_EVAL_VARS {
            return Err(Error::CapExceeded {
                what: "m",
                limit: u64::from(MAX_EVAL_VARS),
                got: u64::from(m),
            });
        }
        if r > m {
            return Err(Error::Precondition(format!("r = {r} exceeds m = {m}")));
        }
        Ok(CodeParams { m, r })
    }

    /// Block length 2^m.
    pub fn n(&self) -> usize {
        1usize << self.m
    }

    /// `binom(m, ≤ r)`.
    pub fn dim(&self) -> u64 {
        binom_leq(u64::from(self.m), u64::from(self.r))
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    pub fn dim_big(&self) -> BigUint {
        binom_leq(u64::from(self.m), u64::from(self.r))
    }

    /// `R = binom(m, ≤ r) / 2^m`.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.dim(), self.n() as u64)
    }

    pub fn rate_f64(&self) -> f64 {
        self.dim() as f64 / self.n() as f64
    }

    /// `γ = r / m`.
    pub fn gamma(&self) -> Ratio<u64> {
        Ratio::new(u64::from(self.r), u64::from(self.m))
    }

    /// Monomial masks indexing message positions.
    pub fn monomials(&self) -> Vec<u32> {
        gf2poly::monomials(self.m, self.r)
    }

    pub fn check_enumerable(&self) -> Result<()> {
        let dim = self.dim();
        if dim > MAX_ENUM_DIM {
            return Err(Error::CapExceeded {
                what: "code dimension",
                limit: MAX_ENUM_DIM,
                got: dim,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RM({},{})", self.m, self.r)
    }
}

/// Generator matrix with one row per monomial (ascending mask order), each
/// row that monomial's evaluation vector.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    params: CodeParams,
    masks: Vec<u32>,
    rows: Vec<BitVec>,
}

impl GeneratorMatrix {
    pub fn new(params: CodeParams) -> Result<Self> {
        let bits = params.dim().saturating_mul(params.n() as u64);
        if bits > MAX_GENERATOR_BITS {
            return Err(Error::CapExceeded {
                what: "generator matrix bits",
                limit: MAX_GENERATOR_BITS,
                got: bits,
            });
        }
        let masks = params.monomials();
        let rows = masks
            .iter()
            .map(|&mask| {
                PolyAnf::monomial(params.m, mask)
                    .and_then(|p| anf_to_eval(&p))
                    .map(EvalVec::into_bits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorMatrix {
            params,
            masks,
            rows,
        })
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Column at evaluation point `x`: bit `j` set iff monomial `j` divides
    /// the point, i.e. its mask is a subset of `x`.
    pub fn column(&self, x: u32) -> BitVec {
        column_at(&self.masks, x)
    }

    /// Encoding by XOR of the selected rows.
    pub fn encode(&self, message: &BitVec) -> Result<EvalVec> {
        if message.len() != self.rows.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                got: message.len(),
            });
        }
        let mut out = BitVec::zeros(self.params.n());
        for j in message.iter_ones() {
            out.xor_assign(&self.rows[j]);
        }
        EvalVec::new(self.params.m, out)
    }
}

pub(crate) fn column_at(masks: &[u32], x: u32) -> BitVec {
    let mut col = BitVec::zeros(masks.len());
    for (j, &mask) in masks.iter().enumerate() {
        if mask & !x == 0 {
            col.set(j, true);
        }
    }
    col
}

/// Codeword of the polynomial whose coefficients are the message bits.
pub fn encode(params: CodeParams, message: &BitVec) -> Result<EvalVec> {
    let masks = params.monomials();
    if message.len() != masks.len() {
        return Err(Error::LengthMismatch {
            expected: masks.len(),
            got: message.len(),
        });
    }
    let poly = PolyAnf::from_masks(params.m, message.iter_ones().map(|j| masks[j]))?;
    anf_to_eval(&poly)
}

/// Message of a codeword (inverse of [`encode`]).
pub fn message_of(params: CodeParams, codeword: &EvalVec) -> Result<BitVec> {
    let poly = codeword.to_anf();
    if poly.degree().unwrap_or(0) > params.r {
        return Err(Error::Precondition("vector is not a codeword".into()));
    }
    let masks = params.monomials();
    let mut msg = BitVec::zeros(masks.len());
    for mask in poly.masks() {
        let j = masks
            .binary_search(mask)
            .map_err(|_| Error::Precondition("vector is not a codeword".into()))?;
        msg.set(j, true);
    }
    Ok(msg)
}

/// Visits codewords with Gray-code indices in `[start, end)`. The message of
/// index `i` is `i ^ (i >> 1)`, so consecutive codewords differ by one row.
pub fn visit_codeword_range(
    gen: &GeneratorMatrix,
    start: u64,
    end: u64,
    mut visit: impl FnMut(u64, &BitVec),
) {
    if start >= end {
        return;
    }
    let gray = |i: u64| i ^ (i >> 1);
    let mut word = BitVec::zeros(gen.params.n());
    let g0 = gray(start);
    for j in 0..gen.rows.len() {
        if g0 >> j & 1 == 1 {
            word.xor_assign(&gen.rows[j]);
        }
    }
    visit(g0, &word);
    for i in start + 1..end {
        let j = i.trailing_zeros() as usize;
        word.xor_assign(&gen.rows[j]);
        visit(gray(i), &word);
    }
}

/// Every codeword exactly once, in Gray-code order of messages. Messages are
/// returned as integers: bit `j` is the coefficient of monomial `j`.
pub fn enumerate_codewords(params: CodeParams) -> Result<Codewords> {
    params.check_enumerable()?;
    let gen = GeneratorMatrix::new(params)?;
    let total = 1u64 << gen.rows.len();
    Ok(Codewords {
        word: BitVec::zeros(params.n()),
        gen,
        next: 0,
        total,
    })
}

pub struct Codewords {
    gen: GeneratorMatrix,
    word: BitVec,
    next: u64,
    total: u64,
}

impl Iterator for Codewords {
    type Item = (u64, EvalVec);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let i = self.next;
        if i > 0 {
            let j = i.trailing_zeros() as usize;
            self.word.xor_assign(&self.gen.rows[j]);
        }
        self.next += 1;
        let ev = EvalVec::new(self.gen.params.m, self.word.clone()).ok()?;
        Some((i ^ (i >> 1), ev))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinDistance {
    /// Minimum relative weight of a nonzero codeword.
    pub relative: Ratio<u64>,
    /// `false` when the value is the analytic `2^{-r}` rather than a scan.
    pub exhaustive: bool,
}

/// Minimum positive relative weight, by exhaustive scan when `dim ≤ 26`.
pub fn min_distance(params: CodeParams) -> Result<MinDistance> {
    let analytic = Ratio::new(1, 1u64 << params.r);
    if params.check_enumerable().is_err() {
        return Ok(MinDistance {
            relative: analytic,
            exhaustive: false,
        });
    }
    let gen = GeneratorMatrix::new(params)?;
    let total = 1u64 << gen.rows.len();
    let mut best = u64::MAX;
    visit_codeword_range(&gen, 1, total, |_, w| {
        best = best.min(w.count_ones());
    });
    Ok(MinDistance {
        relative: Ratio::new(best, params.n() as u64),
        exhaustive: true,
    })
}
