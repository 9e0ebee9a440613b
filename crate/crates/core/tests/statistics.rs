use rmlab::channels::{
    bec_decode, bec_recoverable, bec_transmit, check_bec_constraints_with,
    check_bsc_constraints_with, estimate_lambda_with, BecDecoded, ChannelKind, ChannelSpec,
    Transmit,
};
use rmlab::rmcode::encode;
use rmlab::seed::task_rng;
use rmlab::weightdist::mc_bias_tail;
use rmlab::{BitVec, CodeParams};

#[test]
fn bias_tail_stays_within_three_sigma_of_the_bound() {
    let samples = 1500u64;
    for (m, r, eps) in [
        (8, 3, 0.3),
        (10, 4, 0.25),
        (10, 6, 0.15),
        (12, 5, 0.2),
        (9, 2, 0.5),
    ] {
        let t = mc_bias_tail(CodeParams::new(m, r).unwrap(), eps, samples, 31).unwrap();
        let b = t.bound.min(1.0);
        let sigma = (b * (1.0 - b) / samples as f64).sqrt();
        assert!(
            t.empirical_prob <= b + 3.0 * sigma,
            "m={m} r={r} ε={eps}: {} > {b} + 3σ",
            t.empirical_prob
        );
    }
}

#[test]
fn erasure_decoding_recovers_whenever_recoverable() {
    for (m, r, p) in [(3, 1, 0.4), (4, 1, 0.5), (4, 2, 0.3), (5, 2, 0.4)] {
        let params = CodeParams::new(m, r).unwrap();
        for i in 0..1000 {
            let mut rng = task_rng(u64::from(m * 10 + r), i);
            let msg = BitVec::random(params.dim() as usize, &mut rng);
            let cw = encode(params, &msg).unwrap();
            let rx = bec_transmit(&cw, p, &mut rng).unwrap();
            let ok = bec_recoverable(rx.pattern(), params).unwrap();
            match bec_decode(&rx, params).unwrap() {
                BecDecoded::Unique(d) => assert!(ok && d == cw),
                BecDecoded::Ambiguous { .. } => assert!(!ok),
            }
        }
    }
}

#[test]
fn constraint_margins_are_stable_under_longer_scans() {
    for gamma in [0.005, 0.01, 1.0 / 70.0, 0.02] {
        let short = check_bec_constraints_with(gamma, 0.0, 500).unwrap();
        let long = check_bec_constraints_with(gamma, 0.0, 2000).unwrap();
        assert_eq!(short.ok, long.ok);
        assert!((short.worst_margin - long.worst_margin).abs() <= 1e-12);
        let short = check_bsc_constraints_with(gamma, 500).unwrap();
        let long = check_bsc_constraints_with(gamma, 2000).unwrap();
        assert_eq!(short.ok, long.ok);
        assert!((short.worst_margin - long.worst_margin).abs() <= 1e-12);
    }
}

#[test]
fn constraint_margins_shrink_as_gamma_grows() {
    let grid: Vec<f64> = (1..=30).map(|i| f64::from(i) * 0.001).collect();
    for pair in grid.windows(2) {
        let a = check_bec_constraints_with(pair[0], 0.0, 500).unwrap();
        let b = check_bec_constraints_with(pair[1], 0.0, 500).unwrap();
        assert!(b.worst_margin <= a.worst_margin);
        let a = check_bsc_constraints_with(pair[0], 500).unwrap();
        let b = check_bsc_constraints_with(pair[1], 500).unwrap();
        assert!(b.worst_margin <= a.worst_margin);
    }
}

#[test]
fn failure_rate_does_not_depend_on_the_sent_codeword() {
    let cases = [
        (
            CodeParams::new(6, 1).unwrap(),
            ChannelSpec::new(ChannelKind::Bec, 0.85).unwrap(),
        ),
        (
            CodeParams::new(4, 1).unwrap(),
            ChannelSpec::new(ChannelKind::Bsc, 0.12).unwrap(),
        ),
    ];
    for (params, spec) in cases {
        let zero = estimate_lambda_with(params, &spec, 2000, 5, Transmit::Zero).unwrap();
        let random = estimate_lambda_with(params, &spec, 2000, 6, Transmit::Random).unwrap();
        let sigma = (zero.std_error().powi(2) + random.std_error().powi(2)).sqrt();
        assert!(
            (zero.failure_rate - random.failure_rate).abs() <= 2.0 * sigma,
            "{:?}: {} vs {}",
            spec.kind,
            zero.failure_rate,
            random.failure_rate
        );
    }
}
