use std::path::PathBuf;

use lspace_cli::{run_command, Outcome};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

struct Case {
    name: String,
    code: i32,
    argv: Vec<String>,
}

fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(root().join("crates/cli/tests/golden/cases.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            let mut argv = vec!["lspace".to_string(), cols[2].to_string(), fixture(cols[3])];
            argv.extend(cols[4..].iter().map(|s| s.to_string()));
            Case {
                name: cols[0].to_string(),
                code: cols[1].parse().unwrap(),
                argv,
            }
        })
        .collect()
}

fn run(args: &[&str]) -> Outcome {
    run_command(std::iter::once("lspace").chain(args.iter().copied()))
}

#[test]
fn outputs_match_golden_files() {
    let cases = cases();
    assert!(cases.len() >= 20);
    for case in cases {
        let path = root()
            .join("crates/cli/tests/golden")
            .join(format!("{}.out", case.name));
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        let out = run_command(&case.argv);
        assert_eq!(out.code, case.code, "{}: {}", case.name, out.stderr);
        assert_eq!(out.stdout, expected, "{}", case.name);
    }
}

#[test]
fn outputs_are_deterministic() {
    for case in cases() {
        let a = run_command(&case.argv);
        let b = run_command(&case.argv);
        assert_eq!(a.stdout, b.stdout, "{}", case.name);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["tight"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);

    let dir = std::env::temp_dir().join(format!("lspace-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.lgr");
    std::fs::write(&bad, "vertices v1 v2\nedge v1 -a-> v9\n").unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).ok();

    // An unreadable input is reported like a usage error.
    let missing = run(&["validate", "/nonexistent/graph.lgr"]);
    assert_eq!(missing.code, 2);

    let loops4 = fixture("loops4.lgr");
    assert_eq!(run(&["mul", &loops4, "(a,{1},", "(a,{1},a)"]).code, 2);
    assert_eq!(run(&["validate", &fixture("chain7.lgr"), "--require"]).code, 1);
    assert_eq!(run(&["validate", &loops4, "--require"]).code, 0);
    // loops4 with its own family is not the powerset, so compare refuses it.
    assert_eq!(run(&["compare", &loops4]).code, 1);
    assert_eq!(run(&["tight", &fixture("chain7.lgr")]).code, 1);
}

#[test]
fn canonical_fixture_round_trip() {
    for name in [
        "loops4.lgr",
        "loops4-powerset.lgr",
        "chain7.lgr",
        "twins1.lgr",
        "twins2.lgr",
        "loop1.lgr",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = lspace::GraphFile::parse(&text).unwrap();
        let again = lspace::GraphFile::parse(&parsed.to_canonical()).unwrap();
        assert_eq!(again.to_canonical(), parsed.to_canonical(), "{name}");
        assert_eq!(parsed.build().unwrap().sets(), again.build().unwrap().sets(), "{name}");
    }
}
