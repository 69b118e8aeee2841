use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn k3cert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3cert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("k3cert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn golden() -> Vec<(String, Option<String>, String)> {
    include_str!("golden/verdicts.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].to_string(), (f[1] != "-").then(|| f[1].to_string()), f[2].to_string())
        })
        .collect()
}

#[test]
fn text_and_json_verdicts_match_the_golden_file() {
    for (lattice, class, expected) in golden() {
        let mut args = vec!["classify", "--lattice", &lattice];
        let class_arg;
        if let Some(c) = &class {
            class_arg = format!("--class={c}");
            args.push(&class_arg);
        }
        let text = k3cert(&args);
        let verdict_line = stdout(&text).lines().find(|l| l.starts_with("verdict: ")).map(str::to_string);
        assert_eq!(verdict_line.as_deref(), Some(format!("verdict: {expected}").as_str()), "{lattice} {class:?}");

        args.push("--json");
        let json = k3cert(&args);
        assert_eq!(json.status.code(), text.status.code());
        let cert: Value = serde_json::from_slice(&json.stdout).unwrap();
        let kind = cert["verdict"]["kind"].as_str().unwrap();
        let label = match kind {
            "rank4_exceptional" => format!("Rank4Exceptional({})", cert["verdict"]["which"]),
            "rank2_condition" => format!("Rank2Condition({})", cert["verdict"]["which"].as_str().unwrap()),
            "odd_rank" => "OddRank".into(),
            "elliptic" => "Elliptic".into(),
            "inconclusive" => "Inconclusive".into(),
            "infinite_automorphisms_deduced" => "InfiniteAutomorphismsDeduced".into(),
            other => panic!("unknown verdict kind {other}"),
        };
        assert_eq!(label, expected, "{lattice} {class:?}");
        let want = if expected == "Inconclusive" { 2 } else { 0 };
        assert_eq!(text.status.code(), Some(want), "{lattice} {class:?}");
    }
}

#[test]
fn documented_examples() {
    let o = k3cert(&["classify", "--lattice", "bryan-leung"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isotropic class (0,1)"));

    let o = k3cert(&["check", "--condition", "A2", "--lattice", "bryan-leung", "--class", "3,9"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.matches("= (1,3)").count(), 3, "{s}");

    let o = k3cert(&["check", "--condition", "A2", "--lattice", "bryan-leung", "--class", "1,3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = k3cert(&["bound", "--a", "2", "--b", "1", "--c", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");

    let o = k3cert(&["check", "--condition", "A1", "--lattice", "diag-2-m6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn emitted_witnesses_and_certificates_reverify() {
    let o = k3cert(&["check", "--condition", "A2", "--lattice", "bryan-leung", "--class", "3,9", "--json"]);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = scratch("a2.json", &report["witness"].to_string());
    let o = k3cert(&["check", "--condition", "A2", "--lattice", "bryan-leung", "--class", "3,9", "--witness", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // The same witness does not prove A2 for another class.
    let o = k3cert(&["check", "--condition", "A2", "--lattice", "bryan-leung", "--class", "3,8", "--witness", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = k3cert(&["classify", "--lattice", "vinberg-2", "--class", "3,3,3,0", "--json"]);
    let cert = scratch("cert.json", &stdout(&o));
    let o = k3cert(&["check", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    // Tampering is detected.
    let tampered = stdout(&k3cert(&["classify", "--lattice", "bryan-leung", "--json"])).replace("\"witness\": [\n      0,\n      1\n    ]", "\"witness\": [\n      0,\n      2\n    ]");
    assert!(tampered.contains("\"witness\": [\n      0,\n      2"), "{tampered}");
    let cert = scratch("tampered.json", &tampered);
    assert_eq!(k3cert(&["check", "--certificate", cert.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn documents_are_validated() {
    let good = scratch("good.toml", "name = \"bl\"\ngram = [[-2, 1], [1, 0]]\nample = [1, 3]\nroots = [[1, 0]]\ncomplete = true\n");
    let o = k3cert(&["classify", "--lattice", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = [
        ("float.toml", "name = \"x\"\ngram = [[2.0]]\nample = [1]\n", "line 2"),
        ("odd.toml", "name = \"x\"\ngram = [[1]]\nample = [1]\n", "`gram`"),
        ("asym.toml", "name = \"x\"\ngram = [[2, 1], [0, -2]]\nample = [1, 0]\n", "symmetric"),
        ("definite.toml", "name = \"x\"\ngram = [[2, 0], [0, 2]]\nample = [1, 0]\n", "hyperbolic"),
        ("ample.toml", "name = \"x\"\ngram = [[0, 1], [1, 0]]\nample = [1, 0]\n", "`ample`"),
        ("root.toml", "name = \"x\"\ngram = [[0, 1], [1, 0]]\nample = [2, 1]\nroots = [[1, 1]]\n", "`roots`"),
        ("missing.toml", "name = \"x\"\ngram = [[2]]\n", "ample"),
        ("dims.toml", "name = \"x\"\ngram = [[0, 1], [1, 0]]\nample = [2, 1, 0]\n", "`ample`"),
    ];
    for (file, contents, needle) in bad {
        let path = scratch(file, contents);
        for cmd in [&["classify", "--lattice"][..], &["isotropic", "--lattice"][..]] {
            let mut args = cmd.to_vec();
            args.push(path.to_str().unwrap());
            let o = k3cert(&args);
            let err = String::from_utf8_lossy(&o.stderr);
            assert_eq!(o.status.code(), Some(1), "{file}: {err}");
            assert!(o.stdout.is_empty(), "{file} produced output");
            assert!(err.contains(needle), "{file}: {err}");
        }
    }
}

#[test]
fn bad_arguments_exit_with_one() {
    for args in [
        &["classify", "--lattice", "bryan-leung", "--class", "1"][..],
        &["classify", "--lattice", "no-such-lattice"][..],
        &["check", "--condition", "A7", "--lattice", "U", "--class", "1,0"][..],
        &["check", "--condition", "R4", "--lattice", "U", "--class", "1,0"][..],
        &["bound", "--a", "2", "--b", "0", "--c", "2"][..],
        &["decompose", "--lattice", "U", "--class", "-1,0"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(k3cert(args).status.code(), Some(1), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_k3cert"))
        .args(["isotropic", "--lattice", "U"])
        .env("K3CERT_SEARCH_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_cap_is_configurable() {
    let o = Command::new(env!("CARGO_BIN_EXE_k3cert"))
        .args(["isotropic", "--lattice", "u-3m2", "--json"])
        .env("K3CERT_SEARCH_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["status"]["status"], "isotropic");
}

#[test]
fn other_subcommands() {
    let o = k3cert(&["decompose", "--lattice", "U", "--class", "1,1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decomposition"]["nef_parts"][0]["class"], serde_json::json!([1, 0]));
    assert_eq!(v["decomposition"]["nef_parts"][0]["multiplicity"], 2);

    let o = k3cert(&["roots", "--lattice", "U", "--max-degree", "3", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["roots"], serde_json::json!([{ "class": [-1, 1], "degree": 1, "irreducible": true }]));

    let o = k3cert(&["corpus", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["U", "h2", "h4", "h6", "bryan-leung", "vinberg-1", "vinberg-2"] {
        assert!(names.contains(&n), "{n}");
    }
}
