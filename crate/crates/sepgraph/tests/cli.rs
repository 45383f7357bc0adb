//! Golden-file tests for the command line. Set `UPDATE_GOLDEN=1` to rewrite
//! the files under `tests/golden/` after checking the new output by hand.

use std::path::{Path, PathBuf};
use std::process::Command;

use sepgraph::cli::{run, Outcome, EXIT_INPUT, EXIT_OK, EXIT_UNKNOWN};
use sepgraph::fixtures::fixtures;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn invoke(args: &[&str]) -> Outcome {
    run(std::iter::once("sepgraph").chain(args.iter().copied()))
}

fn transcript(args: &[&str], out: &Outcome) -> String {
    format!(
        "$ sepgraph {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        args.join(" "),
        out.code,
        out.stdout,
        out.stderr
    )
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden_dir().join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

const PER_FIXTURE: &[&[&str]] = &[
    &["check"],
    &["check", "--format", "records"],
    &["basis", "--max-len", "2"],
    &["star-check"],
    &["lattice"],
    &["lattice", "--format", "dot"],
    &["simple"],
    &["cofinal", "--depth", "2"],
    &["confluence", "--seed", "7", "--samples", "20"],
];

#[test]
fn every_fixture_and_subcommand() {
    for f in fixtures() {
        let graph = format!("fixture:{}", f.name);
        let mut all = String::new();
        for cmd in PER_FIXTURE {
            let mut args: Vec<&str> = cmd.to_vec();
            args.extend(["--graph", graph.as_str()]);
            let out = invoke(&args);
            assert_ne!(out.code, EXIT_UNKNOWN, "{args:?} hit a budget on {}", f.name);
            all.push_str(&transcript(&args, &out));
            all.push('\n');
        }
        assert_golden(&format!("fixture-{}", f.name), &all);
    }
}

const CASES: &[(&str, &[&str])] = &[
    (
        "mono-eq-e23-equal",
        &["mono-eq", "-g", "fixture:e23", "-a", "2 w", "-b", "3 w"],
    ),
    (
        "mono-eq-e23-unequal",
        &["mono-eq", "-g", "fixture:e23", "-a", "w", "-b", "2 w"],
    ),
    (
        "mono-eq-records",
        &[
            "mono-eq",
            "-g",
            "fixture:nonseparative",
            "-a",
            "2 x",
            "-b",
            "x + y",
            "-f",
            "records",
        ],
    ),
    (
        "mono-eq-tiny-budget",
        &[
            "mono-eq",
            "-g",
            "fixture:rose2",
            "-a",
            "v",
            "-b",
            "9 v",
            "--budget",
            "1",
        ],
    ),
    ("normalize-vertex", &["normalize", "-g", "fixture:e23", "-e", "v"]),
    (
        "normalize-sck2",
        &["normalize", "-g", "fixture:rose2", "-e", "e e* + f f*"],
    ),
    ("mul", &["mul", "-g", "fixture:cohn-pair", "-a", "e*", "-b", "e"]),
    (
        "refine-chain",
        &[
            "refine",
            "-g",
            "fixture:chain",
            "--a1",
            "a",
            "--a2",
            "c",
            "--b1",
            "b",
            "--b2",
            "b + c",
        ],
    ),
    (
        "refine-unequal",
        &[
            "refine",
            "-g",
            "fixture:e23",
            "--a1",
            "w",
            "--a2",
            "0",
            "--b1",
            "w",
            "--b2",
            "w",
        ],
    ),
    ("simple-csimple", &["simple", "-g", "fixture:csimple"]),
    ("cofinal-fork", &["cofinal", "-g", "fixture:fork", "--depth", "3"]),
    (
        "subobject",
        &["subobject", "-g", "fixture:nonseparative", "--items", "e1,f2"],
    ),
    (
        "resolve-summary",
        &[
            "resolve",
            "fixture:e23-factorial",
            "--stages",
            "2",
            "--check-star",
        ],
    ),
    (
        "resolve-records",
        &["resolve", "fixture:nonseparative-ones", "-f", "records"],
    ),
    (
        "resolve-names",
        &["resolve", "fixture:e23-one-per-pair", "--emit", "names"],
    ),
    (
        "resolve-graph",
        &["resolve", "fixture:e23-one-per-pair", "--emit", "graph"],
    ),
    (
        "divisible",
        &[
            "divisible",
            "fixture:e23-factorial",
            "--stage",
            "3",
            "--vertex",
            "v",
            "-m",
            "2",
        ],
    ),
    (
        "divisible-unknown",
        &[
            "divisible",
            "fixture:e23-factorial",
            "--stage",
            "1",
            "--vertex",
            "w",
            "-m",
            "2",
        ],
    ),
    ("fixtures", &["fixtures"]),
    ("missing-graph", &["check"]),
    ("unknown-fixture", &["check", "-g", "fixture:nope"]),
    ("bad-expression", &["normalize", "-g", "fixture:e23", "-e", "v +"]),
    ("no-dot", &["simple", "-g", "fixture:e23", "-f", "dot"]),
    ("unknown-subcommand", &["frobnicate"]),
];

#[test]
fn named_cases() {
    for (name, args) in CASES {
        let out = invoke(args);
        assert_golden(name, &transcript(args, &out));
    }
}

#[test]
fn verify_hom_files() {
    let dir = golden_dir().join("homs");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "hom"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for path in names {
        let file = path.to_str().unwrap();
        let out = invoke(&["verify-hom", file]);
        let stem = path.file_stem().unwrap().to_str().unwrap();
        let shown = ["verify-hom", &format!("homs/{stem}.hom")];
        assert_golden(&format!("verify-hom-{stem}"), &transcript(&shown, &out));
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(
        invoke(&["mono-eq", "-g", "fixture:e23", "-a", "2 w", "-b", "3 w"]).code,
        EXIT_OK
    );
    assert_eq!(
        invoke(&["mono-eq", "-g", "fixture:e23", "-a", "w", "-b", "2 w"]).code,
        EXIT_OK
    );
    assert_eq!(
        invoke(&[
            "mono-eq",
            "-g",
            "fixture:rose2",
            "-a",
            "v",
            "-b",
            "9 v",
            "--budget",
            "1"
        ])
        .code,
        EXIT_UNKNOWN
    );
    assert_eq!(invoke(&["check", "-g", "/nonexistent.graph"]).code, EXIT_INPUT);
    assert_eq!(invoke(&["--help"]).code, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    let args = ["resolve", "fixture:nonseparative-ones", "--emit", "names"];
    assert_eq!(invoke(&args), invoke(&args));
    let args = [
        "confluence",
        "-g",
        "fixture:rose2",
        "--seed",
        "5",
        "--samples",
        "30",
    ];
    assert_eq!(invoke(&args), invoke(&args));
}

#[test]
fn binary_reports_exit_status() {
    let bin = env!("CARGO_BIN_EXE_sepgraph");
    let ok = Command::new(bin)
        .args(["simple", "-g", "fixture:csimple"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "SIMPLE\n");
    let bad = Command::new(bin)
        .args(["check", "-g", "fixture:nope"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
