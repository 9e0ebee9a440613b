use std::process::{Command, Output};

fn rmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmlab"))
        .args(args)
        .env_remove("RMLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

/// Lines that are not `#` config echo.
fn data(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn weight_profile_of_rm_3_2() {
    let o = rmlab(&["weight-profile", "--m", "3", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        data(&o),
        ["weight,count", "0,1", "2,28", "4,70", "6,28", "8,1"]
    );
    let text = stdout(&o);
    assert!(text.contains("# subcommand=weight-profile\n"));
    assert!(!text.contains('\r'));
    let t = rmlab(&[
        "weight-profile",
        "--m",
        "3",
        "--r",
        "2",
        "--method",
        "transform",
    ]);
    assert_eq!(data(&t), data(&o));
}

#[test]
fn erasure_constraints_hold_at_one_fiftieth() {
    let o = rmlab(&[
        "check-capacity-constraints",
        "--channel",
        "bec",
        "--gamma",
        "0.02",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let last = data(&o).pop().unwrap();
    assert!(
        last.starts_with("all,") && last.ends_with(",true"),
        "{last}"
    );
    let bad = rmlab(&[
        "check-capacity-constraints",
        "--channel",
        "bec",
        "--gamma",
        "0.4",
    ]);
    assert!(data(&bad).pop().unwrap().ends_with(",false"));
}

#[test]
fn noiseless_erasure_simulation_never_fails() {
    let o = rmlab(&[
        "simulate",
        "--channel",
        "bec",
        "--m",
        "10",
        "--r",
        "1",
        "--p",
        "0",
        "--trials",
        "10",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        data(&o),
        ["c,p,trials,failures,failure_rate,seed", ",0,10,0,0,1"]
    );
}

#[test]
fn missing_seed_is_a_precondition_error() {
    for args in [
        &[
            "simulate",
            "--channel",
            "bec",
            "--m",
            "4",
            "--r",
            "1",
            "--p",
            "0.1",
        ][..],
        &["bias-tail", "--m", "6", "--r", "2", "--epsilon", "0.2"],
        &[
            "sweep",
            "--channel",
            "bsc",
            "--m",
            "3",
            "--r",
            "1",
            "--c",
            "1",
        ],
        &["approx", "--kind", "low-bias", "--vars", "1", "--m", "4"],
        &["lower-bound-sample", "--m", "6", "--r", "6", "--ell", "2"],
    ] {
        let o = rmlab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
    }
}

#[test]
fn unknown_flag_prints_usage_and_exits_64() {
    let o = rmlab(&["weight-profile", "--m", "3", "--r", "2", "--nope"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(rmlab(&["no-such-command"]).status.code(), Some(64));
}

#[test]
fn cap_violation_names_the_cap() {
    let o = rmlab(&["weight-profile", "--m", "30", "--r", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let base = [
        "sweep",
        "--channel",
        "bec",
        "--m",
        "8",
        "--r",
        "2",
        "--c",
        "0.5,1,2",
        "--trials",
        "60",
        "--seed",
        "9",
    ];
    let one = rmlab(&[&base[..], &["--threads", "1"]].concat());
    let four = rmlab(&[&base[..], &["--threads", "4"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_rmlab"))
        .args(base)
        .env("RMLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
    assert_eq!(data(&one)[0], "c,p,trials,failures,failure_rate,seed");
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = [
        "bias-tail",
        "--m",
        "8",
        "--r",
        "3",
        "--epsilon",
        "0.25",
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    assert_eq!(rmlab(&args).stdout, rmlab(&args).stdout);
    let args = [
        "simulate",
        "--channel",
        "bsc",
        "--m",
        "4",
        "--r",
        "1",
        "--p",
        "0.05",
        "--trials",
        "100",
        "--seed",
        "3",
    ];
    assert_eq!(rmlab(&args).stdout, rmlab(&args).stdout);
}

#[test]
fn json_embeds_config() {
    let o = rmlab(&[
        "combinatorics",
        "binom",
        "--n",
        "10",
        "--k",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["subcommand"], "combinatorics");
    assert_eq!(v["config"]["op"], "binom");
    assert_eq!(v["result"]["binom"], "120");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("rmlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("profile.csv");
    let args = ["weight-profile", "--m", "4", "--r", "1"];
    let o = rmlab(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), rmlab(&args).stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn every_subcommand_runs() {
    let runs: [&[&str]; 7] = [
        &["bounds", "--m", "20", "--r", "5", "--ell", "3"],
        &[
            "lower-bound-sample",
            "--m",
            "10",
            "--r",
            "10",
            "--ell",
            "2",
            "--samples",
            "4",
            "--seed",
            "1",
        ],
        &[
            "approx",
            "--kind",
            "low-weight",
            "--poly",
            "6:7",
            "--seed",
            "2",
        ],
        &[
            "approx",
            "--kind",
            "weighted-sign",
            "--vars",
            "1,2,3",
            "--m",
            "8",
            "--seed",
            "2",
        ],
        &[
            "check-capacity-constraints",
            "--channel",
            "bsc",
            "--gamma",
            "0.0142",
        ],
        &[
            "combinatorics",
            "smallest-s",
            "--gamma",
            "0.1",
            "--ell",
            "1",
            "--m",
            "1000000",
        ],
        &[
            "combinatorics",
            "xi",
            "--c",
            "1",
            "--rate",
            "0.5",
            "--format",
            "json",
        ],
    ];
    for args in runs {
        let o = rmlab(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}
