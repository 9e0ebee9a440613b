use clap::{Args, Subcommand, ValueEnum};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use rmlab::channels::{
    capacity_sweep, check_bec_constraints_with, check_bsc_constraints_with, estimate_lambda_with,
    ChannelKind, ChannelSpec, Transmit, DEFAULT_SCAN_LIMIT,
};
use rmlab::combinatorics::{binary_entropy, binom, binom_leq, smallest_s, xi_from_capacity_gap};
use rmlab::derivatives::{
    low_bias_approximator, low_weight_approximator, weighted_sign_estimator, ApproxOutcome,
    DirectionTuple, DEFAULT_RETRIES,
};
use rmlab::seed::{rng_from_seed, task_rng};
use rmlab::weightdist::{
    bound_low_bias, bound_low_weight, bound_recursion, brute_force_profile,
    log2_derivative_net_bound, lower_bound_log2, mc_bias_tail, profile_by_transform,
    sample_biased_poly,
};
use rmlab::{CodeParams, Error, EvalVec, PolyAnf, Result};

use crate::output::{num, Report};

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| Error::Precondition("--seed is required for randomized subcommands".into()))
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Bec,
    Bsc,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Bec => ChannelKind::Bec,
            Channel::Bsc => ChannelKind::Bsc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMethod {
    /// Walk every codeword.
    Codewords,
    /// Transform every message from coefficients to evaluations.
    Transform,
}

#[derive(Debug, Args, Serialize)]
pub struct WeightProfileArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = ProfileMethod::Codewords)]
    pub method: ProfileMethod,
}

pub fn weight_profile(a: &WeightProfileArgs) -> Result<Report> {
    let params = CodeParams::new(a.m, a.r)?;
    let profile = match a.method {
        ProfileMethod::Codewords => brute_force_profile(params)?,
        ProfileMethod::Transform => profile_by_transform(params)?,
    };
    let mut rep = Report::new("weight-profile", a, vec!["weight", "count"]);
    for (w, c) in profile.nonzero() {
        rep.row(vec![w.to_string(), c.to_string()]);
    }
    rep.result = profile.to_json_value();
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct BiasTailArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
}

pub fn bias_tail(a: &BiasTailArgs, seed: Option<u64>) -> Result<Report> {
    let seed = require_seed(seed)?;
    let params = CodeParams::new(a.m, a.r)?;
    let t = mc_bias_tail(params, a.epsilon, a.samples, seed)?;
    let mut rep = Report::new(
        "bias-tail",
        a,
        vec!["samples", "exceedances", "empirical_prob", "bound", "seed"],
    );
    rep.row(vec![
        t.samples.to_string(),
        t.exceedances.to_string(),
        num(t.empirical_prob),
        num(t.bound),
        t.seed.to_string(),
    ]);
    rep.result = serde_json::to_value(t).unwrap_or(Value::Null);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Every bound that applies to the given parameters.
    All,
    LowWeight,
    LowBias,
    Lower,
    Recursion,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub ell: u32,
    /// Constant in front of the m⁴ slack term.
    #[arg(long, default_value_t = 0.0)]
    pub m4_const: f64,
    #[arg(long, value_enum, default_value_t = BoundKind::All)]
    pub which: BoundKind,
}

/// Largest m for the exact exponent sums.
const MAX_EXACT_BOUND_M: u32 = 4096;

pub fn bounds(a: &BoundsArgs) -> Result<Report> {
    let mut rep = Report::new(
        "bounds",
        a,
        vec![
            "bound",
            "log2_value",
            "leading_term",
            "m4_slack",
            "coefficient",
            "exponent",
        ],
    );
    let all = a.which == BoundKind::All;
    let mut results = serde_json::Map::new();
    if all || a.which == BoundKind::LowWeight {
        let b = bound_low_weight(a.m, a.r, a.ell, a.m4_const)?;
        rep.row(vec![
            b.name.clone(),
            num(b.log2_value),
            num(b.leading_term),
            num(b.slack_terms.get("m4").copied().unwrap_or(0.0)),
            num(b.coefficient),
            String::new(),
        ]);
        results.insert(
            "low_weight".into(),
            serde_json::to_value(&b).unwrap_or(Value::Null),
        );
    }
    let low_bias = match a.which {
        BoundKind::LowBias => Some(bound_low_bias(a.m, a.r, a.ell, a.m4_const)?),
        // skipped when γ or γ̃ reaches 1/2 or no s exists
        BoundKind::All => bound_low_bias(a.m, a.r, a.ell, a.m4_const).ok(),
        _ => None,
    };
    if let Some(b) = low_bias {
        rep.row(vec![
            b.name.clone(),
            num(b.log2_value),
            num(b.leading_term),
            num(b.slack_terms.get("m4").copied().unwrap_or(0.0)),
            num(b.coefficient),
            String::new(),
        ]);
        results.insert(
            "low_bias".into(),
            serde_json::to_value(&b).unwrap_or(Value::Null),
        );
    }
    let exact_ok = a.m <= MAX_EXACT_BOUND_M;
    let check_exact = || {
        if exact_ok {
            Ok(())
        } else {
            Err(Error::CapExceeded {
                what: "m for exact exponent sums",
                limit: u64::from(MAX_EXACT_BOUND_M),
                got: u64::from(a.m),
            })
        }
    };
    if a.which == BoundKind::Lower || all && exact_ok && a.r >= 1 {
        check_exact()?;
        let b = lower_bound_log2(u64::from(a.m), u64::from(a.r), u64::from(a.ell))?;
        rep.row(vec![
            "lower".into(),
            num(b.log2_value),
            String::new(),
            String::new(),
            String::new(),
            b.exponent.to_string(),
        ]);
        results.insert(
            "lower".into(),
            serde_json::to_value(&b).unwrap_or(Value::Null),
        );
    }
    if a.which == BoundKind::Recursion || all && exact_ok {
        check_exact()?;
        let e = bound_recursion(u64::from(a.m), u64::from(a.r), u64::from(a.ell))?;
        let v = rmlab::combinatorics::big_to_f64(&e);
        rep.row(vec![
            "recursion".into(),
            num(v),
            String::new(),
            String::new(),
            String::new(),
            e.to_string(),
        ]);
        results.insert(
            "recursion".into(),
            json!({ "log2_value": v, "exponent": e.to_string() }),
        );
    }
    rep.result = Value::Object(results);
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct LowerBoundSampleArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub ell: u32,
    #[arg(long, default_value_t = 40)]
    pub samples: u64,
}

pub fn lower_bound_sample(a: &LowerBoundSampleArgs, seed: Option<u64>) -> Result<Report> {
    let seed = require_seed(seed)?;
    if a.ell >= 62 {
        return Err(Error::Precondition(format!("ℓ = {} is too large", a.ell)));
    }
    let threshold = Ratio::new(1i64, 1i64 << (a.ell + 1));
    let biases = (0..a.samples)
        .into_par_iter()
        .map(|i| sample_biased_poly(a.m, a.r, a.ell, &mut task_rng(seed, i)).map(|s| s.bias))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new(
        "lower-bound-sample",
        a,
        vec!["sample", "bias", "bias_exact", "meets_threshold"],
    );
    let mut meeting = 0u64;
    let mut list = Vec::new();
    for (i, b) in biases.iter().enumerate() {
        let meets = *b >= threshold;
        meeting += u64::from(meets);
        let f = *b.numer() as f64 / *b.denom() as f64;
        rep.row(vec![
            i.to_string(),
            num(f),
            b.to_string(),
            meets.to_string(),
        ]);
        list.push(json!({ "bias": f, "bias_exact": b.to_string(), "meets_threshold": meets }));
    }
    let fraction = if a.samples == 0 {
        0.0
    } else {
        meeting as f64 / a.samples as f64
    };
    rep.result = json!({
        "threshold": threshold.to_string(),
        "meeting": meeting,
        "fraction": fraction,
        "samples": list,
    });
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxKind {
    LowWeight,
    LowBias,
    WeightedSign,
}

#[derive(Debug, Args, Serialize)]
pub struct ApproxArgs {
    #[arg(long, value_enum)]
    pub kind: ApproxKind,
    /// Polynomial as `m:mask,mask,…` with hexadecimal monomial masks.
    #[arg(long, conflicts_with = "vars")]
    pub poly: Option<String>,
    /// Product of the listed variables (1-based), with `--m`.
    #[arg(long, value_delimiter = ',', requires = "m")]
    pub vars: Option<Vec<u32>>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value_t = 0.125)]
    pub delta: f64,
    /// Bias lower bound for the low-bias approximator; defaults to bias(f).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Derivative order; defaults to the largest k with wt(f) ≤ 2^-k.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    pub retries: usize,
    /// Direction tuples drawn by the weighted-sign estimator.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

fn approx_target(a: &ApproxArgs) -> Result<EvalVec> {
    let poly: PolyAnf = match (&a.poly, &a.vars, a.m) {
        (Some(s), _, _) => s.parse()?,
        (None, Some(vars), Some(m)) => PolyAnf::product_of_vars(m, vars)?,
        _ => {
            return Err(Error::Precondition(
                "give the polynomial with --poly or with --vars and --m".into(),
            ))
        }
    };
    poly.to_eval()
}

fn default_order(f: &EvalVec) -> Result<u32> {
    let w = f.abs_weight();
    if w == 0 {
        return Err(Error::Precondition("f is zero; pass --k explicitly".into()));
    }
    let n = f.len() as u64;
    Ok((0..64u32).take_while(|&k| w << k <= n).last().unwrap_or(0))
}

pub fn approx(a: &ApproxArgs, seed: Option<u64>) -> Result<Report> {
    let seed = require_seed(seed)?;
    let f = approx_target(a)?;
    let mut rng = rng_from_seed(seed);
    let mut rep = Report::new(
        "approx",
        a,
        vec![
            "kind",
            "k",
            "t",
            "attempts",
            "disagreement",
            "delta",
            "achieved",
            "max_alpha",
        ],
    );
    let outcome_row = |o: &ApproxOutcome, k: String| {
        vec![
            kind_name(a.kind),
            k,
            o.approximator.t.to_string(),
            o.attempts.len().to_string(),
            num(ratio_f64(o.disagreement)),
            num(a.delta),
            o.achieved().to_string(),
            String::new(),
        ]
    };
    match a.kind {
        ApproxKind::LowWeight => {
            let k = match a.k {
                Some(k) => k,
                None => default_order(&f)?,
            };
            let o = low_weight_approximator(&f, k, a.delta, a.retries, &mut rng)?;
            rep.row(outcome_row(&o, k.to_string()));
            rep.result = outcome_json(&o);
        }
        ApproxKind::LowBias => {
            let eps = a.epsilon.unwrap_or_else(|| f.bias_f64());
            let o = low_bias_approximator(&f, eps, a.delta, a.retries, &mut rng)?;
            rep.row(outcome_row(&o, String::new()));
            rep.result = outcome_json(&o);
        }
        ApproxKind::WeightedSign => {
            let k = match a.k {
                Some(k) => k,
                None => default_order(&f)?,
            };
            if k < 2 {
                return Err(Error::Precondition(format!(
                    "order k = {k} must be at least 2"
                )));
            }
            let samples: Vec<DirectionTuple> = (0..a.samples)
                .map(|_| DirectionTuple::random(f.num_vars(), k as usize - 1, &mut rng))
                .collect();
            let ws = weighted_sign_estimator(&f, k, &samples)?;
            let dis = ws.approximator.disagreement();
            let max_alpha = ws.alphas.iter().copied().fold(0.0, f64::max);
            rep.row(vec![
                kind_name(a.kind),
                k.to_string(),
                ws.alphas.len().to_string(),
                "1".into(),
                num(ratio_f64(dis)),
                String::new(),
                String::new(),
                num(max_alpha),
            ]);
            rep.result = json!({
                "k": k,
                "accepted": ws.alphas.len(),
                "rejected": ws.rejected.len(),
                "disagreement": ratio_f64(dis),
                "max_alpha": max_alpha,
                "alphas": ws.alphas,
            });
        }
    }
    Ok(rep)
}

fn kind_name(k: ApproxKind) -> String {
    k.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn outcome_json(o: &ApproxOutcome) -> Value {
    json!({
        "t": o.approximator.t,
        "disagreement": ratio_f64(o.disagreement),
        "attempts": o.attempts.iter().map(|r| ratio_f64(*r)).collect::<Vec<_>>(),
        "achieved": o.achieved(),
        "delta": o.approximator.delta_target,
        "epsilon": o.approximator.epsilon_target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransmitArg {
    Zero,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    /// Channel parameter; exclusive with --c.
    #[arg(long, conflicts_with = "c", required_unless_present = "c")]
    pub p: Option<f64>,
    /// Multiple of the rate: p is set so that capacity = c·R.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = TransmitArg::Zero)]
    pub transmit: TransmitArg,
}

const SWEEP_COLUMNS: [&str; 6] = ["c", "p", "trials", "failures", "failure_rate", "seed"];

pub fn simulate(a: &SimulateArgs, seed: Option<u64>) -> Result<Report> {
    let seed = require_seed(seed)?;
    let params = CodeParams::new(a.m, a.r)?;
    let kind = a.channel.into();
    let spec = match (a.p, a.c) {
        (Some(p), _) => ChannelSpec::new(kind, p)?,
        (None, Some(c)) => ChannelSpec::from_capacity_gap(kind, c, params.rate_f64())?,
        (None, None) => return Err(Error::Precondition("give --p or --c".into())),
    };
    let transmit = match a.transmit {
        TransmitArg::Zero => Transmit::Zero,
        TransmitArg::Random => Transmit::Random,
    };
    let stats = estimate_lambda_with(params, &spec, a.trials, seed, transmit)?;
    eprintln!("wall time: {:.3}s", stats.wall_time.as_secs_f64());
    let mut rep = Report::new("simulate", a, SWEEP_COLUMNS.to_vec());
    rep.row(vec![
        a.c.map(num).unwrap_or_default(),
        num(spec.p),
        stats.trials.to_string(),
        stats.failures.to_string(),
        num(stats.failure_rate),
        stats.seed.to_string(),
    ]);
    rep.result = json!({ "channel": spec, "stats": stats });
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    /// Comma-separated multiples of the rate.
    #[arg(long = "c", value_delimiter = ',', required = true)]
    pub c_grid: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

pub fn sweep(a: &SweepArgs, seed: Option<u64>) -> Result<Report> {
    let seed = require_seed(seed)?;
    let params = CodeParams::new(a.m, a.r)?;
    let rows = capacity_sweep(params, a.channel.into(), &a.c_grid, a.trials, seed)?;
    let mut rep = Report::new("sweep", a, SWEEP_COLUMNS.to_vec());
    for r in &rows {
        rep.row(vec![
            num(r.c),
            num(r.p),
            r.stats.trials.to_string(),
            r.stats.failures.to_string(),
            num(r.stats.failure_rate),
            r.stats.seed.to_string(),
        ]);
    }
    rep.result = serde_json::to_value(&rows).unwrap_or(Value::Null);
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct ConstraintArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long)]
    pub gamma: f64,
    /// Rate slack in the erasure middle family.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
    pub scan_limit: u64,
}

pub fn check_constraints(a: &ConstraintArgs) -> Result<Report> {
    let report = match a.channel {
        Channel::Bec => check_bec_constraints_with(a.gamma, a.delta, a.scan_limit)?,
        Channel::Bsc => {
            if a.delta != 0.0 {
                return Err(Error::Precondition(
                    "--delta applies to the erasure channel only".into(),
                ));
            }
            check_bsc_constraints_with(a.gamma, a.scan_limit)?
        }
    };
    let mut rep = Report::new(
        "check-capacity-constraints",
        a,
        vec![
            "family",
            "worst_margin",
            "worst_index",
            "tail_bound",
            "tail_ratio",
            "tail_certified",
            "ok",
        ],
    );
    for f in &report.families {
        let single = f.name == "quarter_weight";
        rep.row(vec![
            f.name.clone(),
            num(f.worst_margin),
            f.worst_index.to_string(),
            if single {
                String::new()
            } else {
                num(f.tail_bound)
            },
            if single {
                String::new()
            } else {
                num(f.tail_ratio)
            },
            if single {
                String::new()
            } else {
                f.tail_certified.to_string()
            },
            (f.worst_margin > 0.0 && (single || f.tail_certified)).to_string(),
        ]);
    }
    rep.row(vec![
        "all".into(),
        num(report.worst_margin),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        report.ok.to_string(),
    ]);
    rep.result = serde_json::to_value(&report).unwrap_or(Value::Null);
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct CombinatoricsArgs {
    #[command(subcommand)]
    #[serde(flatten)]
    pub op: CombOp,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum CombOp {
    /// binom(n, k).
    Binom(BinomArgs),
    /// Σ_{i≤r} binom(m, i).
    BinomLeq(BinomLeqArgs),
    /// Binary entropy H(p).
    Entropy(EntropyArgs),
    /// ξ with H((1−ξ)/2) = 1 − cR.
    Xi(XiArgs),
    /// Smallest s for the low-bias bound.
    SmallestS(SmallestSArgs),
    /// Both sides of Σ_{j=1}^{t} binom(m−j, ≤r−1) = binom(m, ≤r) − binom(m−t, ≤r).
    Identity(IdentityArgs),
    /// log₂ of the derivative-majority net size, m·t·k + t·binom(m−k, ≤r−k).
    NetBound(NetBoundArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BinomArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct BinomLeqArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub r: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct XiArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub rate: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SmallestSArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub t: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct NetBoundArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub t: u64,
}

pub fn combinatorics(a: &CombinatoricsArgs) -> Result<Report> {
    let pairs: Vec<(&str, String)> = match &a.op {
        CombOp::Binom(b) => vec![("binom", binom(b.n, b.k).to_string())],
        CombOp::BinomLeq(b) => vec![("binom_leq", binom_leq(b.m, b.r).to_string())],
        CombOp::Entropy(e) => vec![("entropy", num(binary_entropy(e.p)?))],
        CombOp::Xi(x) => {
            let xi = xi_from_capacity_gap(x.c, x.rate)?;
            vec![("xi", num(xi)), ("p", num((1.0 - xi) / 2.0))]
        }
        CombOp::SmallestS(s) => {
            let sp = smallest_s(s.gamma, s.ell, s.m)?;
            vec![
                ("s", sp.s.to_string()),
                ("gamma_tilde", num(sp.gamma_tilde)),
                ("c_gamma", num(sp.c_gamma)),
                ("d_gamma", num(sp.d_gamma)),
            ]
        }
        CombOp::Identity(i) => {
            if !(i.t <= i.m && i.r <= i.m && i.r >= 1) {
                return Err(Error::Precondition(format!(
                    "need t ≤ m and 1 ≤ r ≤ m (got m={}, r={}, t={})",
                    i.m, i.r, i.t
                )));
            }
            let lhs: num_bigint::BigUint = (1..=i.t).map(|j| binom_leq(i.m - j, i.r - 1)).sum();
            let rhs = binom_leq(i.m, i.r) - binom_leq(i.m - i.t, i.r);
            vec![
                ("lhs", lhs.to_string()),
                ("rhs", rhs.to_string()),
                ("equal", (lhs == rhs).to_string()),
            ]
        }
        CombOp::NetBound(b) => vec![(
            "log2_net_size",
            log2_derivative_net_bound(b.m, b.r, b.k, b.t)?.to_string(),
        )],
    };
    let mut rep = Report::new("combinatorics", a, vec!["quantity", "value"]);
    let mut obj = serde_json::Map::new();
    for (k, v) in pairs {
        rep.row(vec![k.to_string(), v.clone()]);
        obj.insert(k.to_string(), Value::String(v));
    }
    rep.result = Value::Object(obj);
    Ok(rep)
}
