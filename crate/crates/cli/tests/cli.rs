use std::process::Command;

use displace_cli::{run, Report, EXIT_ACCEPT, EXIT_PARSE, EXIT_REJECT, EXIT_UNKNOWN, EXIT_USAGE};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> String {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

fn cli(args: &[&str]) -> Report {
    run(std::iter::once("displace").chain(args.iter().copied()))
}

fn value<'a>(r: &'a Report, key: &str) -> Option<&'a str> {
    let prefix = format!("{key}: ");
    r.stdout.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

#[test]
fn documented_examples() {
    let r = cli(&["check", "--grammar", &data("g2.dcfg"), "--word", "abaabaaba"]);
    assert_eq!((r.code, value(&r, "outcome")), (EXIT_ACCEPT, Some("accept")));
    let r = cli(&[
        "validate-dyck",
        "--alphabet",
        &data("x2.rka"),
        "--word",
        "x^1 x'1 x^2 x'2",
        "--method",
        "monoid",
    ]);
    assert_eq!((r.code, value(&r, "outcome")), (EXIT_ACCEPT, Some("accept")));
    let r = cli(&["check", "--stsa", &data("copy.stsa"), "--word", "abba"]);
    assert_eq!((r.code, value(&r, "outcome")), (EXIT_REJECT, Some("reject")));
}

#[test]
fn every_machine_kind_checks() {
    let cases = [
        ("--grammar", "g2.dcfg", "abab", false),
        ("--stsa", "copy.stsa", "aabaab", true),
        ("--gstsa", "ww.gstsa", "abab", true),
        ("--gstsa", "anbncndn.gstsa", "aabbccdd", true),
        ("--valence", "example1.val", "aabbcc", true),
        ("--valence", "example1.val", "aabc", false),
        ("--pda", "anbn.pda", "aabb", true),
        ("--pda", "anbn.pda", "abab", false),
    ];
    for (flag, file, word, accepted) in cases {
        let r = cli(&["check", flag, &data(file), "--word", word]);
        let expected = if accepted { EXIT_ACCEPT } else { EXIT_REJECT };
        assert_eq!(r.code, expected, "{file} {word}: {}{}", r.stdout, r.stderr);
        assert_eq!(value(&r, "word"), Some(word));
    }
}

#[test]
fn dyck_methods_agree() {
    for word in ["x^1 x'1 x^2 x'2", "x^1 x^1 x'1 x^2 x'1 x'2 x^2 x'2", "x^1 x^2 x'1 x'2", ""] {
        let codes: Vec<i32> = ["monoid", "partition", "grammar"]
            .iter()
            .map(|m| cli(&["validate-dyck", "--alphabet", &data("x2.rka"), "--word", word, "--method", m]).code)
            .collect();
        assert!(codes.iter().all(|&c| c == codes[0]), "{word}: {codes:?}");
    }
    let r = cli(&["validate-dyck", "--alphabet", &data("x2.rka"), "--word", "x^3 x'3"]);
    assert_eq!(r.code, EXIT_PARSE);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["check", "--word", "ab"]).code, EXIT_USAGE);
    let both = cli(&["check", "--stsa", &data("copy.stsa"), "--pda", &data("anbn.pda"), "--word", "ab"]);
    assert_eq!(both.code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli(&["--version"]).code, 0);

    let missing = cli(&["check", "--stsa", &scratch("absent.stsa"), "--word", "ab"]);
    assert_eq!(missing.code, EXIT_PARSE);
    let bad = scratch("bad.stsa");
    std::fs::write(&bad, "rank 2\nstate q0 init\ntrans q0 a JUMP A -> q0\n").unwrap();
    let r = cli(&["check", "--stsa", &bad, "--word", "a"]);
    assert_eq!(r.code, EXIT_PARSE);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    let r = cli(&["check", "--stsa", &data("copy.stsa"), "--word", "aabaab", "--max-configs", "3"]);
    assert_eq!((r.code, value(&r, "budget")), (EXIT_UNKNOWN, Some("max-configs")));
}

#[test]
fn binary_exit_statuses() {
    let bin = env!("CARGO_BIN_EXE_displace");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let out = status(&["check", "--stsa", &data("copy.stsa"), "--word", "abab"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "machine: stsa\nword: abab\noutcome: accept\n");
    assert_eq!(status(&["check", "--stsa", &data("copy.stsa"), "--word", "abba"]).status.code(), Some(1));
    assert_eq!(status(&["bogus"]).status.code(), Some(64));
    assert_eq!(status(&["check", "--stsa", "/nonexistent", "--word", "a"]).status.code(), Some(65));
}

#[test]
fn crossvalidate_reports_first_counterexample() {
    let args = ["crossvalidate", "--left", &data("anbn.pda"), "--right", &data("dyck.pda"), "--max-len", "6"];
    let r = cli(&args);
    assert_eq!(r.code, EXIT_REJECT);
    assert_eq!(value(&r, "result"), Some("counterexample"));
    assert_eq!(value(&r, "word"), Some("abab"));
    assert_eq!(value(&r, "left-outcome"), Some("reject"));
    assert_eq!(cli(&args), r);

    let r = cli(&["crossvalidate", "--left", &data("g2.dcfg"), "--right", &data("g2.dcfg"), "--max-len", "6"]);
    assert_eq!((r.code, value(&r, "result")), (0, Some("equal")));
    let r = cli(&["crossvalidate", "--left", &data("x2.rka"), "--right", &data("g2.dcfg"), "--max-len", "2"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn conversions() {
    let r = cli(&["convert", "--stsa", &data("copy.stsa"), "--stsa-to-gstsa"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("rank 2\n"));
    assert!(r.stdout.contains("sym A@1"));

    let out = scratch("copy_plain.stsa");
    let r = cli(&["convert", "--stsa", &data("copy.stsa"), "--keep-desugar", "--output", &out]);
    assert_eq!((r.code, value(&r, "conversion")), (0, Some("keep-desugar")));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains("KEEP"));

    let r = cli(&["convert", "--stsa", &data("copy.stsa"), "--pda-to-valence"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = cli(&["convert", "--pda", &data("anbn.pda"), "--pda-to-valence"]);
    assert_eq!(r.code, EXIT_PARSE);
    let r = cli(&["convert", "--pda", &data("anbn.pda")]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn enumeration_and_derivation() {
    let r = cli(&["enumerate", "--grammar", &data("g2.dcfg"), "--max-len", "6"]);
    assert_eq!(value(&r, "count"), Some("6"));
    let r = cli(&["enumerate", "--valence", &data("example1.val"), "--max-len", "6"]);
    let words: Vec<&str> = r.stdout.lines().filter_map(|l| l.strip_prefix("word: ")).collect();
    assert_eq!(words, ["abc", "aabbcc"]);

    let r = cli(&["derive", "--grammar", &data("g2.dcfg"), "--word", "abaabaaba"]);
    assert_eq!(r.code, EXIT_ACCEPT);
    assert_eq!(value(&r, "value"), Some("abaabaaba"));
    assert_eq!(value(&r, "form 0"), Some("S"));
    let r = cli(&["derive", "--grammar", &data("g2.dcfg"), "--word", "abab"]);
    assert_eq!(r.code, EXIT_REJECT);
}

#[test]
fn garland_validation() {
    let r = cli(&["validate-garland", "--word", "<a,a> <a',b> <b,b'> <b',a'>", "--k", "2"]);
    assert_eq!((r.code, value(&r, "cycle")), (EXIT_ACCEPT, Some("0 1 2 3")));
    let r = cli(&["validate-garland", "--word", "<a,a> <b',a'>", "--k", "2"]);
    assert_eq!(r.code, EXIT_REJECT);
    assert!(value(&r, "violation").unwrap().contains("projection 1"));
    assert_eq!(cli(&["validate-garland", "--word", "<a a>", "--k", "1"]).code, EXIT_PARSE);
}

#[test]
fn transducer_images() {
    let t = data("relabel.fst");
    let r = cli(&["image", "--transducer", &t, "--alphabet", &data("x2.rka"), "--max-len", "8"]);
    assert_eq!(r.code, 0);
    let words: Vec<&str> = r.stdout.lines().filter_map(|l| l.strip_prefix("word: ")).collect();
    assert!(words.contains(&"abcd") && words.contains(&"aabbccdd") && words.contains(&"\"\""));
    assert!(!words.contains(&"abdc") && !words.contains(&"aabbcdcd"));

    let r = cli(&["image", "--transducer", &t, "--word", "x^1 x'1 x^2 x'2", "--max-len", "8"]);
    assert_eq!(value(&r, "word"), Some("abcd"));

    let list = scratch("words.txt");
    std::fs::write(&list, "_\nx^1 x'1\n").unwrap();
    let r = cli(&["image", "--transducer", &t, "--words", &list, "--max-len", "4"]);
    assert_eq!(value(&r, "count"), Some("2"));
}
