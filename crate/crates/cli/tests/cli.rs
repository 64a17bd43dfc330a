use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homforge_core::circuit::Circuit;
use homforge_core::decomp::{validate_nice, NiceTreeDecomp};
use homforge_core::graph::{Graph, GadgetTriple};
use tempfile::TempDir;

const K4: &str = "p 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
const TINY_BP: &str = "layers 3\nnode 1 1\nnode 2 1\nnode 3 1\narc 1 1 1 X:1\narc 2 1 1 X:2\nsource 1\nsink 1\n";

fn homforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Lines of a `--format kv` report, without the leading `# ` of commented
/// output.
fn kv(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|l| l.strip_prefix("# ").unwrap_or(l))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn get(text: &str, key: &str) -> Option<String> {
    kv(text).into_iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

#[test]
fn oracle_vertex_covers_of_k4() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.gr", K4);
    let o = homforge(&["oracle", "--what", "vc", "--graph", s(&g), "--k", "3", "--mod", "3", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(get(&out, "exact").as_deref(), Some("4"));
    assert_eq!(get(&out, "modp").as_deref(), Some("1"));
    assert_eq!(get(&out, "field").as_deref(), Some("F_3"));
    assert!(get(&out, "input.graph").unwrap().starts_with("sha256:"));
    assert_eq!(get(&out, "seed").as_deref(), Some("0"));
}

#[test]
fn cycle_identity_on_a_three_layer_program() {
    let dir = TempDir::new().unwrap();
    let bp = write(&dir, "tiny.bp", TINY_BP);
    let o = homforge(&["verify", "--theorem", "cycle", "--bp", s(&bp), "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(get(&stdout(&o), "factor").as_deref(), Some("6"));
    assert_eq!(get(&stdout(&o), "theorem").as_deref(), Some("cycle"));
}

#[test]
fn gadget_bijection_on_a_three_layer_program() {
    let dir = TempDir::new().unwrap();
    let bp = write(&dir, "tiny.bp", TINY_BP);
    let o = homforge(&["verify", "--theorem", "gadget-bp", "--bp", s(&bp), "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(get(&out, "homs"), get(&out, "paths"));
    assert_eq!(get(&out, "verified").as_deref(), Some("true"));
}

#[test]
fn parse_hom_fixtures_and_fault_control() {
    let o = homforge(&["verify", "--theorem", "parse-hom", "--fixture", "all", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(kv(&out).iter().filter(|(k, v)| k.ends_with(".equal") && v == "true").count(), 4);
    let o = homforge(&["verify", "--theorem", "parse-hom", "--fixture", "sum-times-sum", "--fault", "wrong-level"]);
    assert_eq!(o.status.code(), Some(1));
    let o = homforge(&["verify", "--theorem", "parse-hom", "--fixture", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown fixture"));
}

#[test]
fn compile_output_reparses() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.gr", &Graph::cycle(4).to_text());
    let o = homforge(&["compile", "--graph", s(&g), "--target-size", "3", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let c = Circuit::parse(&text).unwrap();
    assert_eq!(get(&text, "gates").unwrap().parse::<usize>().unwrap(), c.gate_count());
    assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    let out = dir.path().join("c4.circ");
    let o = homforge(&["compile", "--graph", s(&g), "--complete-target", "3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(Circuit::parse(&fs::read_to_string(&out).unwrap()).unwrap(), c);
}

#[test]
fn compile_rejects_an_invalid_decomposition() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.gr", &Graph::complete(3).to_text());
    let d = write(&dir, "bad.td", "bag 0 leaf 1\nroot 0\n");
    let o = homforge(&["compile", "--graph", s(&g), "--decomp", s(&d), "--target-size", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("violation"), "{err}");
    assert!(err.contains("vertex 2 in no bag"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn decompositions_round_trip_and_validate() {
    let dir = TempDir::new().unwrap();
    let graph = Graph::cycle(5);
    let g = write(&dir, "c5.gr", &graph.to_text());
    for method in ["exact", "greedy"] {
        let o = homforge(&["decomp", "--graph", s(&g), "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let d = NiceTreeDecomp::parse(&stdout(&o)).unwrap();
        assert!(validate_nice(&d, &graph).is_empty());
        assert_eq!(NiceTreeDecomp::parse(&d.to_text()).unwrap(), d);
        let td = write(&dir, "c5.td", &d.to_text());
        let o = homforge(&["decomp", "--graph", s(&g), "--check", s(&td), "--format", "kv"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(get(&stdout(&o), "violations").as_deref(), Some("0"));
    }
    let o = homforge(&["decomp", "--graph", s(&g), "--method", "exact", "--format", "kv"]);
    assert_eq!(get(&stdout(&o), "width").as_deref(), Some("2"));
    let td = write(&dir, "short.td", "bag 0 leaf 1\nroot 0\n");
    let o = homforge(&["decomp", "--graph", s(&g), "--check", s(&td)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn count_agrees_with_the_oracle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.gr", K4);
    let o = homforge(&["count", "--family", "vc", "--graph", s(&g), "--k", "3", "--field", "3", "--check", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(get(&stdout(&o), "coefficient").as_deref(), Some("1"));
    let o = homforge(&["count", "--family", "clow", "--graph", s(&g), "--field", "7", "--check", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(get(&stdout(&o), "coefficient").as_deref(), Some("6"));
    let cnf = write(&dir, "f.cnf", "p cnf 2 1\n1 2 0\n");
    let o = homforge(&["count", "--family", "sat", "--cnf", s(&cnf), "--field", "2", "--check", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(get(&stdout(&o), "coefficient").as_deref(), Some("1"));
}

#[test]
fn eval_with_an_assignment_file() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "# one cover vertex\nYv:1 2\nX:1:2 1\n");
    let o = homforge(&["eval", "--family", "vc", "--n", "3", "--field", "3", "--assign", s(&a), "--method", "both", "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(get(&out, "agree").as_deref(), Some("true"));
    assert_eq!(get(&out, "fast"), get(&out, "definitional"));
    assert!(get(&out, "input.assign").is_some());
    let bad = write(&dir, "bad.txt", "Yv:1 2\nYv:7 1\n");
    let o = homforge(&["eval", "--family", "vc", "--n", "3", "--field", "3", "--assign", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.gr", "p 3 1\ne 1 x\n");
    let o = homforge(&["oracle", "--what", "hc", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = homforge(&["oracle", "--what", "hc", "--graph", s(&dir.path().join("missing.gr"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(homforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(homforge(&["oracle", "--what", "vc", "--bogus"]).status.code(), Some(2));
    assert_eq!(homforge(&["verify", "--theorem", "cycle"]).status.code(), Some(2));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let run = |seed: &str| homforge(&["verify", "--theorem", "cycle", "--random-layers", "5", "--seed", seed, "--format", "kv"]);
    let (a, b, c) = (run("11"), run("11"), run("12"));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(get(&stdout(&c), "seed").as_deref(), Some("12"));
    assert_eq!(get(&stdout(&a), "factor").as_deref(), Some("10"));
}

#[test]
fn search_writes_a_certified_pair() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("pair.gad");
    let o = homforge(&["search", "--need", "pair", "--max-n", "8", "--out", s(&out), "--format", "kv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(get(&stdout(&o), "certified").as_deref(), Some("true"));
    let t = GadgetTriple::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(t.certify().is_ok());
    assert_eq!(t.blocks.len(), 2);
}
