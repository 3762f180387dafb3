use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pac::io;
use pac_core::constructions::{random_abp, SCGraph};
use pac_core::{Field, Matrix};
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pac(args: &[&str]) -> Out {
    let mut argv = vec!["pac"];
    argv.extend_from_slice(args);
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = pac::run(argv, &mut o, &mut e);
    Out {
        code,
        stdout: String::from_utf8(o).unwrap(),
        stderr: String::from_utf8(e).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let r = pac(&a);
    assert!(r.stderr.is_empty(), "{}", r.stderr);
    (r.code, serde_json::from_str(&r.stdout).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(pac(&["--help"]).code, 0);
    assert_eq!(pac(&["--version"]).code, 0);
    let r = pac(&["gen", "cauchy"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--n"), "{}", r.stderr);
    assert_eq!(
        pac(&["analyze", "metrics", "-i", "/nonexistent/x.pac"]).code,
        1
    );
}

#[test]
fn randomized_commands_need_a_seed() {
    let d = tempfile::tempdir().unwrap();
    let (c, m) = (p(d.path(), "c.pac"), p(d.path(), "c.mat"));
    assert_eq!(
        pac(&["gen", "cauchy", "--n", "4", "-o", &m, "--circuit", &c]).code,
        0
    );
    let r = pac(&["certify", "rank", "-i", &c, "--matrix", &m]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("PAC_SEED"));
    assert_eq!(
        pac(&["--seed", "1", "certify", "rank", "-i", &c, "--matrix", &m]).code,
        0
    );
}

#[test]
fn golden_cauchy_matrix() {
    let d = tempfile::tempdir().unwrap();
    let m = p(d.path(), "g.mat");
    assert_eq!(
        pac(&["gen", "cauchy", "--n", "3", "--field", "GF(7)", "-o", &m]).code,
        0
    );
    // 1/(i - (3 + j)) mod 7, worked by hand
    assert_eq!(
        fs::read_to_string(&m).unwrap(),
        "3 3 GF(7)\n2 5 4\n3 2 5\n6 3 2\n"
    );
}

#[test]
fn certificates_report_consistent() {
    let d = tempfile::tempdir().unwrap();
    let (c, m) = (p(d.path(), "c.pac"), p(d.path(), "c.mat"));
    pac(&["gen", "cauchy", "--n", "8", "-o", &m, "--circuit", &c]);
    for verb in ["rank", "rank-ro"] {
        let (code, v) = json(&["--seed", "2", "certify", verb, "-i", &c, "--matrix", &m]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], "CONSISTENT");
        let rank = v["measured"]["rank"].as_u64().unwrap();
        assert!(rank <= v["guaranteed"]["rank_bound"].as_u64().unwrap());
        assert!(v["annotation"]["note"].is_string());
    }
    let text = pac(&["--seed", "2", "certify", "rank", "-i", &c, "--matrix", &m]).stdout;
    assert!(
        text.contains("measured:") && text.contains("guaranteed:") && text.contains("CONSISTENT")
    );
}

#[test]
fn seeded_runs_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let (s, r, pl) = (
            p(d.path(), &format!("s{tag}.pac")),
            p(d.path(), &format!("r{tag}.pac")),
            p(d.path(), &format!("p{tag}.pac")),
        );
        assert_eq!(
            pac(&[
                "--seed",
                "9",
                "gen",
                "strassen",
                "--n",
                "5",
                "--field",
                "GF(1000003)",
                "-o",
                &s
            ])
            .code,
            0
        );
        assert_eq!(pac(&["transform", "reduce", "-i", &s, "-o", &r]).code, 0);
        let out = pac(&["--seed", "4", "transform", "planarize", "-i", &r, "-o", &pl]);
        assert_eq!(out.code, 0);
        (
            fs::read_to_string(&s).unwrap(),
            fs::read_to_string(&pl).unwrap(),
            out.stdout.replace(&pl, ""),
        )
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn transforms_preserve_the_polynomial() {
    let d = tempfile::tempdir().unwrap();
    let (s, r, pl) = (
        p(d.path(), "s.pac"),
        p(d.path(), "r.pac"),
        p(d.path(), "p.pac"),
    );
    pac(&["--seed", "3", "gen", "strassen", "--n", "4", "-o", &s]);
    pac(&["transform", "reduce", "-i", &s, "-o", &r]);
    let (code, v) = json(&["--seed", "3", "transform", "planarize", "-i", &r, "-o", &pl]);
    assert_eq!(code, 0);
    assert_eq!(v["within_bound"], true);
    let (_, m) = json(&["analyze", "metrics", "-i", &pl]);
    assert_eq!(m["planar"], true);
    let (code, v) = json(&["--seed", "3", "verify", "identity", "-a", &s, "-b", &pl]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("equal")));

    // perturb one wire scale
    let text = fs::read_to_string(&pl).unwrap();
    let i = text.find("\"scale\": \"").unwrap() + 10;
    let mut tampered = text.clone();
    tampered.insert(i, '7');
    let t = p(d.path(), "t.pac");
    fs::write(&t, tampered).unwrap();
    let (code, v) = json(&["--seed", "3", "verify", "identity", "-a", &s, "-b", &t]);
    assert_eq!((code, v["verdict"].as_str()), (2, Some("unequal")));
}

#[test]
fn derivative_of_power_sum_stays_planar_read_once() {
    let d = tempfile::tempdir().unwrap();
    let (ps, dv) = (p(d.path(), "ps.pac"), p(d.path(), "d.pac"));
    pac(&["gen", "powersum", "--n", "12", "-o", &ps]);
    let (code, v) = json(&[
        "transform",
        "derive",
        "-i",
        &ps,
        "-o",
        &dv,
        "--preserve-planarity",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["within_bound"], true);
    let (_, m) = json(&["analyze", "metrics", "-i", &dv]);
    assert_eq!(
        (m["planar"].as_bool(), m["read_once"].as_bool()),
        (Some(true), Some(true))
    );
}

#[test]
fn substitution_by_name() {
    let d = tempfile::tempdir().unwrap();
    let (c, m, o) = (
        p(d.path(), "c.pac"),
        p(d.path(), "c.mat"),
        p(d.path(), "o.pac"),
    );
    pac(&["gen", "cauchy", "--n", "3", "-o", &m, "--circuit", &c]);
    assert_eq!(
        pac(&[
            "transform",
            "subst",
            "-i",
            &c,
            "-o",
            &o,
            "--set",
            "x1=2",
            "--set",
            "y3=1/2"
        ])
        .code,
        0
    );
    assert_eq!(
        pac(&["transform", "subst", "-i", &c, "-o", &o, "--set", "w=2"]).code,
        1
    );
    assert_eq!(
        pac(&["transform", "subst", "-i", &c, "-o", &o, "--set", "x1"]).code,
        1
    );
}

#[test]
fn abp_to_circuit_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let (a, c) = (p(d.path(), "a.abp"), p(d.path(), "c.pac"));
    let abp = random_abp(&Field::Rationals, 3, 7, 14, 11);
    io::write_abp(Path::new(&a), &abp).unwrap();
    let (code, v) = json(&["transform", "abp2ckt", "-i", &a, "-o", &c]);
    assert_eq!(code, 0);
    assert_eq!(v["within_bound"], true);
    let circuit = io::read_circuit(Path::new(&c)).unwrap();
    assert_eq!(
        io::circuit_from_str(&io::circuit_to_string(&circuit), "c").unwrap(),
        circuit
    );
}

#[test]
fn property_violations_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let ones = p(d.path(), "ones.mat");
    io::write_matrix(
        Path::new(&ones),
        &Matrix::from_fn(Field::Rationals, 3, 3, |_, _| Field::Rationals.one()),
    )
    .unwrap();
    let (code, v) = json(&["--seed", "0", "verify", "totreg", "--matrix", &ones]);
    assert_eq!(code, 2);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let path = p(d.path(), "path.json");
    let g = SCGraph {
        vertices: 6,
        inputs: vec![0, 1],
        outputs: vec![4, 5],
        edges: vec![(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)],
    };
    io::write_graph(Path::new(&path), &g).unwrap();
    let (code, v) = json(&["--seed", "0", "verify", "sc", "-i", &path]);
    assert_eq!(code, 2);
    assert!(v["flow"].as_u64().unwrap() < v["inputs"].as_array().unwrap().len() as u64);
}

#[test]
fn graphs_and_analyses() {
    let d = tempfile::tempdir().unwrap();
    let (g, s, dot) = (
        p(d.path(), "g.json"),
        p(d.path(), "s.pac"),
        p(d.path(), "s.dot"),
    );
    assert_eq!(
        pac(&["gen", "sc", "--n", "8", "--kind", "recursive", "-o", &g]).code,
        0
    );
    let (code, v) = json(&["--seed", "0", "verify", "sc", "-i", &g]);
    assert_eq!(
        (code, v["verdict"].as_str()),
        (0, Some("superconcentrator"))
    );
    pac(&["--seed", "1", "gen", "strassen", "--n", "3", "-o", &s]);
    let (_, v) = json(&["analyze", "planar", "-i", &s, "--dot", &dot]);
    assert_eq!(v["planar"], false);
    assert_eq!(v["witness"]["kind"], "K33");
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph"));
    let (code, v) = json(&["certify", "paths", "-i", &s]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(3)));
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_pac"))
}

#[test]
fn binary_honours_env_seed_and_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let (c, m) = (p(d.path(), "c.pac"), p(d.path(), "c.mat"));
    let out = Command::new(bin())
        .args(["gen", "cauchy", "--n", "4", "-o", &m, "--circuit", &c])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(bin())
        .args(["certify", "rank-ro", "-i", &c, "--matrix", &m])
        .env("PAC_SEED", "5")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("CONSISTENT"));
    let out = Command::new(bin())
        .arg("frobnicate")
        .env_remove("PAC_SEED")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
