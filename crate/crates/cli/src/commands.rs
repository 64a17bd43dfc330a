use std::collections::HashSet;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use homforge_core::circuit::Circuit;
use homforge_core::compiler::{compile, specialize_z};
use homforge_core::decomp::{greedy_decomposition, make_nice, treewidth_exact, validate_nice, NiceTreeDecomp};
use homforge_core::families::{
    count_via_coefficient, eval_definitional, eval_fast, standard_projection, variables, Cnf, Family, Instance,
};
use homforge_core::gadgets::{
    fixture_circuits, verify_cycle_identity, verify_gadget_bijection, verify_parse_hom_bijection, JnFault, LayeredBP,
    Recovery, HOM_CAP, PAIR_FIXTURE, TRIPLE_FIXTURE,
};
use homforge_core::graph::{search_gadgets, GadgetNeed, GadgetTriple, Graph, Hypergraph3};
use homforge_core::oracles::{
    count_3dm, count_clique, count_clows, count_hc, count_independent_sets, count_sat3, count_vc, CountResult,
};
use homforge_core::rings::Ring;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::inputs::{self, load_with};
use crate::report::Report;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile the homomorphism polynomial of G into H into a circuit.
    Compile(CompileArgs),
    /// Evaluate a polynomial family at a point over F_q.
    Eval(EvalArgs),
    /// Extract a count mod p from the standard projection's coefficient.
    Count(CountArgs),
    /// Count witnesses by brute force.
    Oracle(OracleArgs),
    /// Check a hardness construction on concrete inputs.
    Verify(VerifyArgs),
    /// Search for rigid, pairwise incomparable gadget blocks.
    Search(SearchArgs),
    /// Produce or check a nice tree decomposition.
    Decomp(DecompArgs),
}

/// Result of a command: its report, an optional artifact and whether every
/// check it ran held.
pub struct Outcome {
    pub report: Report,
    pub artifact: Option<(String, Option<PathBuf>)>,
    pub verified: bool,
}

impl Outcome {
    fn ok(report: Report) -> Outcome {
        Outcome { report, artifact: None, verified: true }
    }
}

pub fn run(cmd: Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Compile(a) => run_compile(a, seed),
        Command::Eval(a) => run_eval(a, seed),
        Command::Count(a) => run_count(a, seed),
        Command::Oracle(a) => run_oracle(a, seed),
        Command::Verify(a) => run_verify(a, seed),
        Command::Search(a) => run_search(a, seed),
        Command::Decomp(a) => run_decomp(a, seed),
    }
}

/// The command-line spelling of an enum value.
fn value_name(v: &impl ValueEnum) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn violations(what: &str, list: &[String]) -> anyhow::Error {
    let mut msg = format!("{what} has {} violation(s):", list.len());
    for v in list {
        msg.push_str("\n  - ");
        msg.push_str(v);
    }
    anyhow!(msg)
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    /// Source graph G.
    #[arg(long)]
    graph: PathBuf,
    /// Nice tree decomposition of G; an exact one is computed if omitted.
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Target graph H.
    #[arg(long, conflicts_with = "target_size", required_unless_present = "target_size")]
    target: Option<PathBuf>,
    /// Use the complete graph K_n as the target.
    #[arg(long, visible_alias = "complete-target")]
    target_size: Option<u32>,
    /// Set every placement variable to 1.
    #[arg(long)]
    specialize_z: bool,
    /// Write the circuit here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_compile(a: CompileArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("compile", seed);
    let g = load_with(&mut report, "graph", &a.graph, Graph::parse)?;
    let h = match (&a.target, a.target_size) {
        (Some(path), _) => load_with(&mut report, "target", path, Graph::parse)?,
        (None, Some(n)) => Graph::complete(n),
        (None, None) => unreachable!("clap requires a target"),
    };
    let d = match &a.decomp {
        Some(path) => {
            let d = load_with(&mut report, "decomp", path, NiceTreeDecomp::parse)?;
            let bad = validate_nice(&d, &g);
            if !bad.is_empty() {
                return Err(violations("decomposition", &bad));
            }
            d
        }
        None => treewidth_exact(&g)?.1,
    };
    let compiled = compile(&g, &d, &h)?;
    let m = &compiled.meta;
    report.set("source_vertices", m.source_vertices);
    report.set("target_vertices", m.target_vertices);
    report.set("target_edges", m.target_edges);
    report.set("width", m.width);
    report.set("gates", m.gates);
    report.set("wires", m.wires);
    report.set("size_bound", m.bound);
    report.set("joins", m.joins);
    report.set("skew", m.skew);
    report.set("constant_free", compiled.circuit.is_constant_free());
    let circuit = if a.specialize_z { specialize_z(&compiled) } else { compiled.circuit };
    Ok(Outcome { report, artifact: Some((circuit.to_text(), a.out)), verified: true })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Method {
    Fast,
    Definitional,
    /// Run both and compare.
    Both,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: u32,
    /// Field `p` or `p^k`.
    #[arg(long)]
    field: String,
    /// Modulus coefficients `c0,c1,...,ck` for an extension field.
    #[arg(long)]
    modulus: Option<String>,
    /// Assignment file of `<label> <value>` lines.
    #[arg(long)]
    assign: Option<PathBuf>,
    /// Value of labels the assignment leaves out.
    #[arg(long, default_value = "1")]
    default_value: String,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    method: Method,
}

fn run_eval(a: EvalArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("eval", seed);
    let field = inputs::field(&a.field, a.modulus.as_deref())?;
    report.field(field.name());
    let known: HashSet<_> = variables(a.family, a.n).into_iter().collect();
    let assign = match &a.assign {
        Some(path) => {
            let text = inputs::load(&mut report, "assign", path)?;
            inputs::assignment(&text, &field, &known).with_context(|| path.display().to_string())?
        }
        None => Default::default(),
    };
    let default = inputs::elem(&field, &a.default_value).context("--default-value")?;
    let value = |l: &_| assign.get(l).copied().unwrap_or(default);
    report.set("family", a.family);
    report.set("n", a.n);
    report.set("variables", known.len());
    report.set("assigned", assign.len());
    let mut verified = true;
    let fast = matches!(a.method, Method::Fast | Method::Both).then(|| eval_fast(&field, a.family, a.n, value));
    let def = match a.method {
        Method::Fast => None,
        _ => Some(eval_definitional(&field, a.family, a.n, field.q(), value)?),
    };
    if let Some(v) = fast {
        report.set("fast", field.format(v));
    }
    if let Some(v) = def {
        report.set("definitional", field.format(v));
    }
    if let (Some(x), Some(y)) = (fast, def) {
        verified = x == y;
        report.set("agree", verified);
    }
    Ok(Outcome { report, artifact: None, verified })
}

/// Instance files shared by `count` and `oracle`.
#[derive(Args, Debug)]
struct InstanceArgs {
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// DIMACS CNF file.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Tripartite hypergraph file.
    #[arg(long)]
    hyper: Option<PathBuf>,
    /// Subset size for covers, cliques and independent sets.
    #[arg(long)]
    k: Option<u32>,
}

impl InstanceArgs {
    fn graph(&self, report: &mut Report) -> Result<Graph> {
        let path = self.graph.as_ref().ok_or_else(|| anyhow!("--graph is required"))?;
        load_with(report, "graph", path, Graph::parse)
    }

    fn cnf(&self, report: &mut Report) -> Result<Cnf> {
        let path = self.cnf.as_ref().ok_or_else(|| anyhow!("--cnf is required"))?;
        load_with(report, "cnf", path, Cnf::parse)
    }

    fn hyper(&self, report: &mut Report) -> Result<Hypergraph3> {
        let path = self.hyper.as_ref().ok_or_else(|| anyhow!("--hyper is required"))?;
        load_with(report, "hyper", path, Hypergraph3::parse)
    }

    fn k(&self) -> Result<u32> {
        self.k.ok_or_else(|| anyhow!("--k is required"))
    }
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    field: String,
    #[arg(long)]
    modulus: Option<String>,
    /// Compare with the brute-force oracle.
    #[arg(long)]
    check: bool,
}

fn run_count(a: CountArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("count", seed);
    let field = inputs::field(&a.field, a.modulus.as_deref())?;
    report.field(field.name());
    let inst = match a.family {
        Family::Sat => Instance::Cnf(a.instance.cnf(&mut report)?),
        Family::Tdm => Instance::Hyper(a.instance.hyper(&mut report)?),
        Family::Clow => Instance::Graph { graph: a.instance.graph(&mut report)?, k: 0 },
        Family::Vc | Family::Cis => Instance::Graph { graph: a.instance.graph(&mut report)?, k: a.instance.k()? },
    };
    let spec = standard_projection(a.family, &inst)?;
    let (dz, dt) = spec.target_degrees(field.q());
    let coeff = count_via_coefficient(&field, &spec)?;
    report.set("family", a.family);
    report.set("n", spec.n);
    report.set("target", format!("z^{dz} t^{dt}"));
    report.set("coefficient", field.format(coeff));
    if a.family == Family::Clow {
        report.note("the clow coefficient counts each Hamiltonian cycle in both directions");
    }
    let mut verified = true;
    if a.check {
        let expected = match (&inst, a.family) {
            (Instance::Cnf(c), _) => count_sat3(c, &field)?.modp,
            (Instance::Hyper(h), _) => count_3dm(h, &field)?.modp,
            (Instance::Graph { graph, k }, Family::Vc) => count_vc(graph, *k, &field)?.modp,
            (Instance::Graph { graph, k }, Family::Cis) => count_clique(graph, *k, &field)?.modp,
            (Instance::Graph { graph, .. }, _) => {
                if graph.n() < 3 {
                    bail!("--check for clow needs at least 3 vertices");
                }
                let hc = count_hc(graph, &field)?.modp;
                field.add(&hc, &hc)
            }
        };
        verified = expected == coeff;
        report.set("oracle", field.format(expected));
        report.set("agree", verified);
    }
    Ok(Outcome { report, artifact: None, verified })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum What {
    Sat,
    Vc,
    Clique,
    /// Independent sets.
    Is,
    /// Hamiltonian cycles.
    Hc,
    /// Perfect 3D matchings.
    #[value(name = "3dm")]
    Tdm,
    /// Clows of length `--len`.
    Clows,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    what: What,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Walk length for `clows`; defaults to the vertex count.
    #[arg(long)]
    len: Option<u32>,
    /// Field `p` or `p^k` for the reduced count.
    #[arg(long = "mod", visible_alias = "field", default_value = "2")]
    modp: String,
    #[arg(long)]
    modulus: Option<String>,
}

fn run_oracle(a: OracleArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("oracle", seed);
    let field = inputs::field(&a.modp, a.modulus.as_deref())?;
    report.field(field.name());
    let i = &a.instance;
    let r: CountResult = match a.what {
        What::Sat => count_sat3(&i.cnf(&mut report)?, &field)?,
        What::Tdm => count_3dm(&i.hyper(&mut report)?, &field)?,
        What::Vc => count_vc(&i.graph(&mut report)?, i.k()?, &field)?,
        What::Clique => count_clique(&i.graph(&mut report)?, i.k()?, &field)?,
        What::Is => count_independent_sets(&i.graph(&mut report)?, i.k()?, &field)?,
        What::Hc => count_hc(&i.graph(&mut report)?, &field)?,
        What::Clows => {
            let g = i.graph(&mut report)?;
            let len = a.len.unwrap_or(g.n());
            report.set("len", len);
            count_clows(&g, len, &field)?
        }
    };
    report.set("what", value_name(&a.what));
    report.set("exact", &r.exact);
    report.set("modp", field.format(r.modp));
    Ok(Outcome::ok(report))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Theorem {
    /// Cycle host: homs from C_l count s-t paths times 2l.
    Cycle,
    /// Gadget host: homs from G_l biject with s-t paths.
    GadgetBp,
    /// Parse trees of a normal-form circuit biject with homs G_m -> J_n.
    ParseHom,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Fault {
    WrongLevel,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    /// Layered branching program file.
    #[arg(long, conflicts_with = "random_layers")]
    bp: Option<PathBuf>,
    /// Generate a random program with this many layers from `--seed`.
    #[arg(long)]
    random_layers: Option<usize>,
    /// Width of a random program.
    #[arg(long, default_value_t = 3)]
    width: usize,
    /// Gadget file; the built-in pair or triple is used if omitted.
    #[arg(long)]
    triple: Option<PathBuf>,
    /// Normal-form circuit file for `parse-hom`.
    #[arg(long, conflicts_with = "fixture")]
    circuit: Option<PathBuf>,
    /// Built-in circuit fixture by name, or `all`.
    #[arg(long)]
    fixture: Option<String>,
    /// Inject a construction fault (negative control).
    #[arg(long, value_enum)]
    fault: Option<Fault>,
    /// Prime used to invert the cycle factor.
    #[arg(long, default_value_t = 5)]
    prime: u32,
    /// Cap on enumerated homomorphisms.
    #[arg(long, default_value_t = HOM_CAP)]
    cap: usize,
}

impl VerifyArgs {
    fn bp(&self, report: &mut Report, seed: u64) -> Result<LayeredBP> {
        match (&self.bp, self.random_layers) {
            (Some(path), _) => load_with(report, "bp", path, LayeredBP::parse),
            (None, Some(layers)) => {
                if layers < 2 || self.width == 0 {
                    bail!("random programs need at least 2 layers and width 1");
                }
                let bp = LayeredBP::random(&mut ChaCha8Rng::seed_from_u64(seed), layers, self.width);
                report.input("bp", bp.to_text().as_bytes());
                Ok(bp)
            }
            (None, None) => bail!("--bp or --random-layers is required"),
        }
    }

    fn gadgets(&self, report: &mut Report, builtin: &str) -> Result<GadgetTriple> {
        let t = match &self.triple {
            Some(path) => load_with(report, "triple", path, GadgetTriple::parse)?,
            None => GadgetTriple::parse(builtin)?,
        };
        Ok(t)
    }
}

fn run_verify(a: VerifyArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("verify", seed);
    report.set("theorem", value_name(&a.theorem));
    let verified = match a.theorem {
        Theorem::Cycle => {
            let bp = a.bp(&mut report, seed)?;
            report.field(format!("F_{}", a.prime));
            let r = verify_cycle_identity(&bp, a.prime, a.cap)?;
            report.set("layers", r.layers);
            report.set("factor", r.factor);
            report.set("homs", r.homs);
            report.set("paths", r.paths);
            report.set("identity", r.identity);
            match r.recovery {
                Recovery::NoInverse => report.set("recovery", "none"),
                Recovery::Checked { padded, factor, ok } => {
                    report.set("recovery", if ok { "ok" } else { "failed" });
                    report.set("recovery_padded", padded);
                    report.set("recovery_factor", factor);
                }
            }
            r.passed()
        }
        Theorem::GadgetBp => {
            let bp = a.bp(&mut report, seed)?;
            let t = a.gadgets(&mut report, PAIR_FIXTURE)?;
            let r = verify_gadget_bijection(&bp, t.i1(), t.i2(), a.cap)?;
            report.set("layers", r.layers);
            report.set("c_max", r.c_max);
            report.set("homs", r.homs);
            report.set("paths", r.paths);
            report.set("p1", r.p1);
            report.set("p2", r.p2);
            report.set("endpoints", r.endpoints);
            report.set("multiset_equal", r.multiset_equal);
            report.set("f_equals_g", r.f_equals_g);
            r.passed()
        }
        Theorem::ParseHom => {
            let t = a.gadgets(&mut report, TRIPLE_FIXTURE)?;
            let circuits: Vec<(String, Circuit)> = match (&a.circuit, a.fixture.as_deref()) {
                (Some(path), _) => vec![("circuit".into(), load_with(&mut report, "circuit", path, Circuit::parse)?)],
                (None, Some("all")) => fixture_circuits().into_iter().map(|(n, c)| (n.to_string(), c)).collect(),
                (None, Some(name)) => {
                    let all = fixture_circuits();
                    let names: Vec<&str> = all.iter().map(|(n, _)| *n).collect();
                    let found = all.iter().find(|(n, _)| *n == name);
                    let (_, c) = found.ok_or_else(|| anyhow!("unknown fixture {name:?}; known: {}", names.join(", ")))?;
                    vec![(name.to_string(), c.clone())]
                }
                (None, None) => bail!("--circuit or --fixture is required"),
            };
            let fault = a.fault.map(|Fault::WrongLevel| JnFault::WrongLevel);
            if let Some(f) = a.fault {
                report.set("fault", value_name(&f));
            }
            let mut all_equal = true;
            for (name, c) in &circuits {
                let r = verify_parse_hom_bijection(c, &t, fault, a.cap)?;
                report.set(&format!("{name}.depth"), r.depth);
                report.set(&format!("{name}.m"), r.m);
                report.set(&format!("{name}.parse_trees"), r.parse_terms.len());
                report.set(&format!("{name}.homs"), r.hom_terms.len());
                report.set(&format!("{name}.equal"), r.equal());
                all_equal &= r.equal();
            }
            all_equal
        }
    };
    report.set("verified", verified);
    Ok(Outcome { report, artifact: None, verified })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Need {
    Pair,
    Triple,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Need::Pair)]
    need: Need,
    /// Largest block size considered.
    #[arg(long, default_value_t = 8)]
    max_n: u32,
    /// Write the gadget file here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_search(a: SearchArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("search", seed);
    let need = match a.need {
        Need::Pair => GadgetNeed::Pair,
        Need::Triple => GadgetNeed::Triple,
    };
    let t = search_gadgets(a.max_n, need, seed)?;
    let certified = t.certify();
    report.set("need", need);
    report.set("max_n", a.max_n);
    for (i, b) in t.blocks.iter().enumerate() {
        report.set(&format!("block{i}"), format!("{} vertices, {} edges", b.graph.n(), b.graph.m()));
    }
    report.set("c_max", t.c_max);
    report.set("certified", certified.is_ok());
    if let Err(bad) = &certified {
        for b in bad {
            report.note(b.clone());
        }
    }
    Ok(Outcome { report, artifact: Some((t.to_text(), a.out)), verified: certified.is_ok() })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum DecompMethod {
    /// Minimum-width decomposition by exhaustive search (small graphs).
    Exact,
    /// Min-degree elimination heuristic.
    Greedy,
}

#[derive(Args, Debug)]
pub struct DecompArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Validate this decomposition instead of producing one.
    #[arg(long)]
    check: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DecompMethod::Exact)]
    method: DecompMethod,
    /// Write the decomposition here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_decomp(a: DecompArgs, seed: u64) -> Result<Outcome> {
    let mut report = Report::new("decomp", seed);
    let g = load_with(&mut report, "graph", &a.graph, Graph::parse)?;
    if let Some(path) = &a.check {
        let d = load_with(&mut report, "decomp", path, NiceTreeDecomp::parse)?;
        let bad = validate_nice(&d, &g);
        report.set("nodes", d.len());
        report.set("width", d.width());
        report.set("joins", d.join_count());
        report.set("violations", bad.len());
        let verified = bad.is_empty();
        for b in bad {
            report.note(b);
        }
        return Ok(Outcome { report, artifact: None, verified });
    }
    let d = match a.method {
        DecompMethod::Exact => treewidth_exact(&g)?.1,
        DecompMethod::Greedy => make_nice(&greedy_decomposition(&g), &g)?,
    };
    report.set("method", value_name(&a.method));
    report.set("nodes", d.len());
    report.set("width", d.width());
    report.set("joins", d.join_count());
    Ok(Outcome { report, artifact: Some((d.to_text(), a.out)), verified: true })
}
