mod common;

use std::fs;

use common::{fixtures, golden_dir, invoke};

/// Set to rewrite the stored outputs after an intentional change.
const BLESS_ENV: &str = "GEOCTRL_BLESS";

#[test]
fn golden_outputs_are_stable() {
    let bless = std::env::var_os(BLESS_ENV).is_some();
    for f in fixtures() {
        let first = invoke(&f);
        let second = invoke(&f);
        assert_eq!(first.code, 0, "{}: {}", f.golden, first.stderr);
        assert_eq!(
            first.stdout, second.stdout,
            "{} differs between runs",
            f.golden
        );
        let path = golden_dir().join(f.golden);
        if bless {
            fs::write(&path, &first.stdout).unwrap();
            continue;
        }
        let stored = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e} (run with {BLESS_ENV}=1)", path.display()));
        assert_eq!(first.stdout, stored, "{} changed", f.golden);
    }
}

#[test]
fn golden_json_parses_and_echoes_command() {
    for f in fixtures().iter().filter(|f| f.golden.ends_with(".json")) {
        let v: serde_json::Value = serde_json::from_str(&invoke(f).stdout).unwrap();
        assert_eq!(v["command"], f.args[0].as_str());
        assert!(v["results"].is_object());
        assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn binary_matches_library_entry_point() {
    let f = &fixtures()[5];
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_geoctrl"))
        .args(&f.args)
        .env_remove("GEOCTRL_FORMAT")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), invoke(f).stdout);

    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_geoctrl"))
        .args(["train", "--x1", "one", "--x2", "0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
