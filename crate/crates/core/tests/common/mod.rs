use std::path::PathBuf;

use geoctrl::cli::{self, CliOutput};

/// One CLI invocation checked against a stored output.
pub struct Fixture {
    pub golden: &'static str,
    pub args: Vec<String>,
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn fixture(golden: &'static str, args: &[&str]) -> Fixture {
    Fixture {
        golden,
        args: args.iter().map(|s| s.to_string()).collect(),
    }
}

/// One fixture per subcommand, plus the CSV batch table.
pub fn fixtures() -> Vec<Fixture> {
    let points = golden_dir().join("points.csv");
    let points = points.to_str().expect("utf-8 path");
    vec![
        fixture(
            "kalman.json",
            &[
                "kalman",
                "--A",
                "[[0,1],[0,0]]",
                "--B",
                "[[0],[1]]",
                "--gramian",
                "1",
            ],
        ),
        fixture(
            "linearize.json",
            &[
                "linearize",
                "--system",
                "pendulum",
                "--x0",
                "0,0",
                "--u0",
                "0",
            ],
        ),
        fixture(
            "bracket.json",
            &[
                "bracket",
                "--system",
                "reeds-shepp",
                "--at",
                "0.5,-1,0.3",
                "--flows",
                "0.1",
            ],
        ),
        fixture("larc.json", &["larc", "--system", "engel"]),
        fixture(
            "involutive.json",
            &[
                "involutive",
                "--system",
                "heisenberg",
                "--points",
                "3",
                "--seed",
                "42",
            ],
        ),
        fixture(
            "train.json",
            &["train", "--x1", "1", "--x2", "0", "--samples", "5"],
        ),
        fixture(
            "dubins.json",
            &[
                "dubins",
                "--from",
                "0,0,0",
                "--to",
                "4,0,0",
                "--samples",
                "3",
            ],
        ),
        fixture(
            "elastica.json",
            &[
                "elastica", "--r", "1", "--beta0", "1", "--h20", "0", "--length", "1", "--steps",
                "100", "--stride", "25",
            ],
        ),
        fixture(
            "hb_exp.json",
            &[
                "hb-exp",
                "--theta0",
                "0",
                "--h3",
                "1",
                "--t",
                "6.283185307179586",
                "--samples",
                "5",
            ],
        ),
        fixture(
            "hb_dist.json",
            &["hb-dist", "--x", "0", "--y", "0", "--z", "6.283185307"],
        ),
        Fixture {
            golden: "hb_dist_batch.csv",
            args: vec![
                "hb-dist".into(),
                "--batch".into(),
                points.into(),
                "--format".into(),
                "csv".into(),
            ],
        },
    ]
}

pub fn invoke(f: &Fixture) -> CliOutput {
    let mut argv = vec!["geoctrl".to_string()];
    argv.extend(f.args.iter().cloned());
    cli::run_with_env(argv, None)
}
