use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fvs_kernel::oracle::brute_fvs;
use fvs_kernel::{size_bounds, MultiGraph, VertexId};
use fvs_kernel_cli::{emit, parse};
use proptest::prelude::*;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fvs-kernel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn complete(n: u32) -> String {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            edges.push(format!("{a} {b}"));
        }
    }
    format!("p fvs {n} {}\n{}\n", edges.len(), edges.join("\n"))
}

fn comment<'a>(text: &'a str, key: &str) -> Vec<&'a str> {
    let prefix = format!("c {key} ");
    text.lines()
        .filter_map(|l| l.strip_prefix(prefix.as_str()))
        .collect()
}

#[test]
fn kernelize_tree() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "tree.txt", "p fvs 4 3\n1 2\n2 3\n2 4\n");
    let output = dir.path().join("out.txt");
    let o = bin(&[
        "kernelize",
        "--input",
        &input,
        "--k",
        "2",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains("p fvs 0 0\n"));
    assert_eq!(comment(&text, "kprime"), vec!["2"]);
    assert!(comment(&text, "forced").is_empty());
    assert_eq!(parse(&text).unwrap().graph.vertex_count(), 0);
}

#[test]
fn kernelize_k5_is_no() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k5.txt", &complete(5));
    let output = dir.path().join("out.txt");
    let o = bin(&[
        "kernelize",
        "--input",
        &input,
        "--k",
        "1",
        "--output",
        output.to_str().unwrap(),
        "--stats",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("iterations "));
    let text = fs::read_to_string(&output).unwrap();
    assert_eq!(comment(&text, "kprime"), vec!["0"]);
    assert_eq!(comment(&text, "verdict"), vec!["no"]);
    let g = parse(&text).unwrap().graph;
    assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
}

#[test]
fn kernelize_forced_ids_are_original() {
    // Two loops at vertices 2 and 5 force both.
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "loops.txt", "p fvs 5 4\n2 2\n5 5\n1 2\n3 4\n");
    let output = dir.path().join("out.txt");
    let o = bin(&[
        "kernelize",
        "--input",
        &input,
        "--k",
        "3",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&output).unwrap();
    let mut forced = comment(&text, "forced");
    forced.sort_unstable();
    assert_eq!(forced, vec!["2", "5"]);
    assert_eq!(comment(&text, "kprime"), vec!["1"]);
}

#[test]
fn kernelize_planted_obeys_bounds() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let input = dir.path().join(format!("p{seed}.txt"));
        let output = dir.path().join(format!("k{seed}.txt"));
        let o = bin(&[
            "gen",
            "--family",
            "planted-fvs",
            "--n",
            "200",
            "--k",
            "3",
            "--m",
            "400",
            "--seed",
            &seed.to_string(),
            "--output",
            input.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let o = bin(&[
            "kernelize",
            "--input",
            input.to_str().unwrap(),
            "--k",
            "3",
            "--output",
            output.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let text = fs::read_to_string(&output).unwrap();
        assert_eq!(comment(&text, "verdict"), vec!["reduced"]);
        let k: i64 = comment(&text, "kprime")[0].parse().unwrap();
        let g = parse(&text).unwrap().graph;
        let (n_max, m_max) = size_bounds(k);
        assert!(g.vertex_count() <= n_max && g.edge_count() <= m_max);
    }
}

#[test]
fn cover_reports() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.txt", "p fvs 3 3\n1 2\n2 3\n3 1\n");
    let o = bin(&["cover", "--input", &tri, "--source", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("size 1\n"), "{text}");
    assert!(text.contains("packing_weight 1\n"));

    let star = write(dir.path(), "star.txt", "p fvs 4 3\n1 2\n1 3\n1 4\n");
    let o = bin(&["cover", "--input", &star, "--source", "1"]);
    assert!(stdout(&o).starts_with("size 0\n"));

    let k4 = write(dir.path(), "k4.txt", &complete(4));
    let text = stdout(&bin(&["cover", "--input", &k4, "--source", "1"]));
    assert!(text.starts_with("size 3/2\nsize_doubled 3\n"), "{text}");
    assert!(text.contains("=1/2 doubled 1\n"));

    let k5 = write(dir.path(), "k5.txt", &complete(5));
    let o = bin(&["cover", "--input", &k5, "--source", "1", "--budget", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("EXCEEDS_BUDGET\n"));
}

#[test]
fn solve_brute_k5() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.txt", &complete(5));
    let text = stdout(&bin(&["solve-brute", "--input", &k5]));
    assert!(text.starts_with("fvs 3\nwitness "));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = bin(&[
            "gen",
            "--family",
            "random-multigraph",
            "--n",
            "30",
            "--m",
            "80",
            "--seed",
            "7",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = bin(&[
        "gen",
        "--family",
        "planted-fvs",
        "--n",
        "12",
        "--k",
        "3",
        "--m",
        "30",
        "--seed",
        "7",
    ]);
    let g = parse(&stdout(&o)).unwrap().graph;
    assert!(brute_fvs(&g).unwrap().size <= 3);

    let o = bin(&["gen", "--family", "flower", "--petals", "5", "--seed", "0"]);
    let g = parse(&stdout(&o)).unwrap().graph;
    assert_eq!(g.degree(VertexId(0)), 10);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        bin(&["gen", "--family", "hypercube", "--seed", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bin(&["gen", "--family", "grid", "--seed", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bin(&["kernelize", "--input", "x"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));

    let missing = dir.path().join("missing.txt");
    let o = bin(&["solve-brute", "--input", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write(dir.path(), "bad.txt", "p fvs 2 1\n1 9\n");
    let o = bin(&["cover", "--input", &bad, "--source", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let tri = write(dir.path(), "tri.txt", "p fvs 3 3\n1 2\n2 3\n3 1\n");
    assert_eq!(
        bin(&["cover", "--input", &tri, "--source", "4"])
            .status
            .code(),
        Some(1)
    );
    let looped = write(dir.path(), "loop.txt", "p fvs 2 2\n1 2\n2 2\n");
    assert_eq!(
        bin(&["cover", "--input", &looped, "--source", "1"])
            .status
            .code(),
        Some(2)
    );
}

fn pairs(g: &MultiGraph) -> Vec<(u32, u32)> {
    let mut v: Vec<_> = g
        .edges()
        .map(|(_, a, b)| (a.0.min(b.0), a.0.max(b.0)))
        .collect();
    v.sort_unstable();
    v
}

proptest! {
    #[test]
    fn parse_emit_round_trip(
        n in 1usize..20,
        raw in prop::collection::vec((0usize..20, 0usize..20), 0..60),
    ) {
        let mut g = MultiGraph::with_vertices(n);
        for (a, b) in raw {
            g.add_edge(VertexId((a % n) as u32), VertexId((b % n) as u32)).unwrap();
        }
        let (text, _) = emit(&g, &[]);
        let back = parse(&text).unwrap().graph;
        prop_assert_eq!(back.vertex_count(), n);
        prop_assert_eq!(pairs(&back), pairs(&g));
        prop_assert_eq!(emit(&back, &[]).0, text);
    }
}
