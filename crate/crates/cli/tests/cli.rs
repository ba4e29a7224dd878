//! End-to-end tests of the installed binary, plus a property test for the
//! parser round trip.

use proptest::prelude::*;
use std::process::{Command, Output};
use virasoro_cli::parser::parse;
use virasoro_core::lie::PBWMonomial;
use virasoro_core::{Scalar, UElement};

fn virasoro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virasoro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_spec(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).expect("temp dir is writable");
    path
}

#[test]
fn nf_straightens_the_product() {
    let out = virasoro(&["nf", "l[2]*l[-2]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "l[-2] * l[2] - 4 * l[0] + 1/2 * c\n");
}

#[test]
fn nf_rejects_zero_exponents_with_a_position() {
    let out = virasoro(&["nf", "l[1]^0"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("syntax error at byte 5"), "{err}");
    assert!(err.contains("positive"), "{err}");
}

#[test]
fn act_applies_a_generator_on_the_quotient() {
    let spec = write_spec(
        "virasoro-test-ow35.json",
        r#"{"k":2,"S":[1,2],"lambda":{"1":"3","2":"5"}}"#,
    );
    let spec = spec.to_str().unwrap();
    let out = virasoro(&["act", "--spec", spec, "--gen", "1", "l[0]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-3 + 3 * l[0]\n");

    let out = virasoro(&["act", "--spec", spec, "--gen", "1", "c"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("central"), "{}", stderr(&out));

    let out = virasoro(&["act", "--spec", spec, "--gen", "1", "l[-3]"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("negative"), "{}", stderr(&out));
}

#[test]
fn ind_act_handles_the_central_generator() {
    let spec = write_spec(
        "virasoro-test-ow11.json",
        r#"{"k":2,"S":[1,2],"lambda":{"1":"1","2":"1"}}"#,
    );
    let spec = spec.to_str().unwrap();
    let out = virasoro(&["ind-act", "--spec", spec, "--theta", "1/2", "--gen", "c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2 * 1 (x) 1\n");

    let out = virasoro(&["ind-act", "--spec", spec, "--theta", "0", "--gen", "3", "l[-1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-4 * 1 (x) 1\n");
}

#[test]
fn descend_reports_bottom_and_steps() {
    let spec = write_spec(
        "virasoro-test-ow11b.json",
        r#"{"k":2,"S":[1,2],"lambda":{"1":"1","2":"1"}}"#,
    );
    let out = virasoro(&["descend", "--spec", spec.to_str().unwrap(), "--theta", "0", "l[-1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "bottom: -4 * 1 (x) 1\nsteps: 1\n");
}

#[test]
fn verify_rejects_unknown_suites_listing_the_valid_ones() {
    let out = virasoro(&["verify", "nope"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    for name in ["core-axioms", "pbw", "lemma37", "theorem1", "lemma31", "grel", "remark39", "prop25", "witt-prop62", "qnilp"] {
        assert!(err.contains(name), "{err} should list {name}");
    }
}

#[test]
fn verify_json_report_is_deterministic_and_schema_stable() {
    let a = virasoro(&["verify", "qnilp", "--json"]);
    assert!(a.status.success());
    assert_eq!(
        stdout(&a),
        "{\"suite\":\"qnilp\",\"cases\":12,\"failures\":[],\"seed\":1729}\n"
    );
    let b = virasoro(&["verify", "qnilp", "--json", "--seed", "1729"]);
    assert_eq!(stdout(&a), stdout(&b), "reports must be byte-identical");

    let c = virasoro(&["verify", "lemma31", "--json", "--seed", "7", "--max-weight", "4"]);
    let d = virasoro(&["verify", "lemma31", "--json", "--seed", "7", "--max-weight", "4"]);
    assert!(c.status.success());
    assert_eq!(stdout(&c), stdout(&d), "reports must be byte-identical");
    assert!(stdout(&c).contains("\"seed\":7"));
}

proptest! {
    /// Formatting then parsing is the identity on canonical elements.
    #[test]
    fn parse_inverts_format(
        terms in prop::collection::vec(
            (
                0u32..3,
                prop::collection::btree_map(-8i64..=8, 1u32..=3, 0..3),
                -20i64..=20,
                1i64..=20,
            ),
            0..4,
        )
    ) {
        let mut e = UElement::zero();
        for (cpow, factors, num, den) in terms {
            let mono = PBWMonomial::new(cpow, factors.into_iter().collect())
                .expect("btree map keys are sorted");
            e.add_term(mono, Scalar::ratio(num, den));
        }
        let text = e.to_string();
        prop_assert_eq!(parse(&text).expect("own output parses"), e);
    }
}
