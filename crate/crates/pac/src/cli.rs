//! Command grammar and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pac_core::certify::{
    max_disjoint_paths, multi_output_certificate, paper_bound, rank_certificate_planar,
    rank_certificate_read_once, BoundModel, RankCertificate, Verdict,
};
use pac_core::circuit::IdentityVerdict;
use pac_core::constructions::{
    assign_strassen_weights, benor_circuit, bilinear_formula_from_depth2, grid_bilinear_circuit,
    power_sum_circuit, sc_complete, sc_depth2, sc_recursive, standard_cauchy,
    verify_superconcentrator, SCGraph, ScVerdict, StrassenConfig,
};
use pac_core::planar::{
    grid_graph, is_planar, kuratowski_witness, planarize_graph, random_triangulation,
};
use pac_core::scalar::TotalRegularity;
use pac_core::separators::{
    forest_partition_tree, lipton_tarjan, savage_partition, turan_partition, uniform_weights, Label,
};
use pac_core::transforms::{
    abp_to_circuit, bilinearize, circuit_graph, derivative_circuit, planarize, reduce_degree,
    substitute, TransformReport,
};
use pac_core::{Circuit, Field, GateKind, VarKind};

use crate::io;

/// Exit status for a command that ran but found a property violated.
pub const EXIT_VIOLATION: i32 = 2;
/// Exit status for usage, parse and I/O errors.
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "pac", version, about = "Planar arithmetic circuit toolkit")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized steps (falls back to PAC_SEED).
    #[arg(long, global = true, env = "PAC_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate matrices, circuits and graphs.
    #[command(subcommand)]
    Gen(Gen),
    /// Rewrite a circuit.
    #[command(subcommand)]
    Transform(Transform),
    /// Planarity, separators and metrics of a circuit's graph.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Run a lower-bound certificate.
    #[command(subcommand)]
    Certify(Certify),
    /// Check a property.
    #[command(subcommand)]
    Verify(Verify),
    /// Time separator and certificate runs.
    #[command(subcommand)]
    Bench(Bench),
}

#[derive(Args, Debug)]
struct FieldArg {
    /// Field: Q or a prime such as GF(1000003).
    #[arg(long, default_value = "Q")]
    field: String,
}

impl FieldArg {
    fn get(&self) -> Result<Field> {
        Field::parse(&self.field).with_context(|| format!("bad field {:?}", self.field))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScKind {
    Complete,
    Recursive,
    Depth2,
}

#[derive(Args, Debug)]
struct ScArgs {
    /// Terminal count.
    #[arg(long)]
    n: usize,
    /// Graph family.
    #[arg(long, value_enum, default_value = "complete")]
    kind: ScKind,
    /// Middle width for depth2 (defaults to n).
    #[arg(long)]
    k: Option<usize>,
    /// Read the graph from a file instead.
    #[arg(short, long)]
    input: Option<PathBuf>,
}

impl ScArgs {
    fn graph(&self) -> Result<SCGraph> {
        if let Some(p) = &self.input {
            return io::read_graph(p);
        }
        Ok(match self.kind {
            ScKind::Complete => sc_complete(self.n),
            ScKind::Recursive => sc_recursive(self.n),
            ScKind::Depth2 => sc_depth2(self.n, self.k.unwrap_or(self.n)),
        })
    }
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Cauchy matrix 1/(x_i - y_j) with x_i = i, y_j = n + j.
    Cauchy {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write its read-once planar grid circuit.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Read-once planar circuit for the n-th power sum.
    Powersum {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Superconcentrator graph.
    Sc {
        #[command(flatten)]
        sc: ScArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Linear circuit of a superconcentrator with verified weights.
    Strassen {
        #[command(flatten)]
        sc: ScArgs,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Degree-4 circuit over edge variables of a depth-2 graph.
    Benor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Bilinear formula from a weighted depth-2 superconcentrator.
    Bilformula {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InOut {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Transform {
    /// Fan-in at most two.
    Reduce(InOut),
    /// Crossover planarization.
    Planarize(InOut),
    /// Products of x-linear and y-linear forms only.
    Bilinearize(InOut),
    /// Branching program to circuit.
    Abp2ckt(InOut),
    /// All first partial derivatives.
    Derive {
        #[command(flatten)]
        io: InOut,
        /// Keep the result planar (input must be read-once planar).
        #[arg(long)]
        preserve_planarity: bool,
    },
    /// Replace variables by constants.
    Subst {
        #[command(flatten)]
        io: InOut,
        /// Assignments NAME=VALUE.
        #[arg(long = "set", value_name = "NAME=VALUE", required = true)]
        set: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Marked {
    Leaves,
    Outputs,
    All,
}

#[derive(Subcommand, Debug)]
enum Analyze {
    /// Planarity with a witness or a planar drawing.
    Planar {
        #[arg(short, long)]
        input: PathBuf,
        /// Write a planarized drawing as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Planar separator with uniform weights.
    Separator {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Labelled partition of x-leaves against y-leaves.
    Turan {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// p-way planar partition.
    Savage {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "leaves")]
        marked: Marked,
    },
    /// Partition tree of a formula.
    Foresttree {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "leaves")]
        marked: Marked,
    },
    /// Size, depth, fan-in and read counts.
    Metrics {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Certify {
    /// Planar rank certificate.
    Rank {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Read-once planar rank certificate.
    RankRo {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Multi-output certificate for a linear map.
    Multi {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// Disjoint paths from the input leaves to the outputs.
    Paths {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Randomized identity test of two circuits.
    Identity {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Total regularity of a matrix.
    Totreg {
        #[arg(long)]
        matrix: PathBuf,
        /// Minors examined before falling back to sampling.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Superconcentrator property of a graph.
    Sc {
        #[arg(short, long)]
        input: PathBuf,
        /// Subset pairs enumerated before falling back to sampling.
        #[arg(long, default_value_t = 1 << 16)]
        limit: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BenchGraph {
    Grid,
    Triangulation,
}

#[derive(Subcommand, Debug)]
enum Bench {
    /// Planar separator timing.
    Separator {
        #[arg(long, value_enum, default_value = "grid")]
        graph: BenchGraph,
        /// Vertex count (grids use the nearest square).
        #[arg(long)]
        n: usize,
    },
    /// Rank certificate timing on the Cauchy grid circuit.
    Rank {
        #[arg(long)]
        n: usize,
    },
}

/// Ordered report rendered either as `key: value` lines or as JSON.
struct Report {
    fields: Map<String, Value>,
    text: Option<String>,
    violation: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            fields: Map::new(),
            text: None,
            violation: false,
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))
                .expect("serializable");
            s.push('\n');
            return s;
        }
        if let Some(t) = &self.text {
            return t.clone();
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
        out
    }
}

struct Ctx {
    seed: Option<u64>,
}

impl Ctx {
    fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| anyhow!("this command is randomized: pass --seed or set PAC_SEED"))
    }
}

fn transform_report(r: &mut Report, t: &TransformReport, out: &Path) {
    r.set("output", out.display().to_string())
        .set("input_size", t.input_size)
        .set("output_size", t.output_size)
        .set("crossings", t.crossings)
        .set("gadgets", t.gadgets)
        .set("bound", t.bound.to_string())
        .set("within_bound", t.satisfied());
}

fn marked_vertices(c: &Circuit, m: Marked) -> Vec<usize> {
    match m {
        Marked::Leaves => (0..c.size())
            .filter(|&g| matches!(c.gates[g], GateKind::Input(_)))
            .collect(),
        Marked::Outputs => {
            let mut o = c.outputs.clone();
            o.sort_unstable();
            o.dedup();
            o
        }
        Marked::All => (0..c.size()).collect(),
    }
}

fn cert_json(c: &RankCertificate) -> Value {
    let one = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    json!({
        "pipeline": c.kind.to_string(),
        "measured": {
            "bilinear_size": c.bilinear_size,
            "x0": one(&c.x0),
            "y0": one(&c.y0),
            "k": c.k,
            "x1": one(&c.x1),
            "y1": one(&c.y1),
            "separator_size": c.separator.len(),
            "strategy": c.strategy.map(|s| format!("{s:?}")),
            "submatrix": c.submatrix.entries().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "rank": c.rank,
            "split": {
                "checked": c.split.checked,
                "failures": c.split.failures.len(),
                "straddling": c.split.straddling,
                "x_span": c.split.x_span,
                "y_span": c.split.y_span,
            },
            "bilrank": c.bilrank.classes.iter().map(|k| json!({
                "class": format!("{:?}", k.class),
                "products": k.products,
                "rank": k.rank,
            })).collect::<Vec<_>>(),
        },
        "guaranteed": {
            "rank_bound": c.bound,
            "class_rank_bound": c.bilrank.bound,
        },
        "verdict": c.verdict().to_string(),
    })
}

fn rank_report(cert: &RankCertificate, n: usize, model: BoundModel) -> Result<Report> {
    let mut r = Report::new();
    let v = cert_json(cert);
    for (k, val) in v.as_object().expect("object") {
        r.set(k, val.clone());
    }
    let mut text = cert.to_string();
    if n >= 2 {
        let b = paper_bound(model, n)?;
        r.set(
            "annotation",
            json!({"model": b.model.name(), "n": n, "value": b.value.to_string(), "note": b.note}),
        );
        text.push_str(&format!(
            "annotation: {} bound scale at n = {n}: {} ({})\n",
            b.model, b.value, b.note
        ));
    }
    r.text = Some(text);
    r.violation =
        cert.verdict() == Verdict::Inconsistent || !cert.split.holds() || !cert.bilrank.holds();
    Ok(r)
}

fn gen(cmd: Gen, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Gen::Cauchy {
            n,
            field,
            output,
            circuit,
        } => {
            let m = standard_cauchy(&field.get()?, n)?;
            io::write_matrix(&output, &m)?;
            r.set("matrix", output.display().to_string())
                .set("rows", n)
                .set("cols", n);
            if let Some(p) = circuit {
                let c = grid_bilinear_circuit(&m);
                io::write_circuit(&p, &c)?;
                r.set("circuit", p.display().to_string())
                    .set("size", c.size());
            }
        }
        Gen::Powersum { n, output } => {
            let c = power_sum_circuit(n)?;
            io::write_circuit(&output, &c)?;
            r.set("circuit", output.display().to_string())
                .set("size", c.size());
        }
        Gen::Sc { sc, output } => {
            let g = sc.graph()?;
            io::write_graph(&output, &g)?;
            r.set("graph", output.display().to_string())
                .set("vertices", g.vertices)
                .set("edges", g.edges.len())
                .set("depth", g.depth());
        }
        Gen::Strassen {
            sc,
            field,
            output,
            matrix,
        } => {
            let g = sc.graph()?;
            let w = assign_strassen_weights(
                &g,
                &field.get()?,
                ctx.seed()?,
                &StrassenConfig::default(),
            )?;
            io::write_circuit(&output, &w.circuit)?;
            if let Some(p) = matrix {
                io::write_matrix(&p, &w.matrix)?;
            }
            r.set("circuit", output.display().to_string())
                .set("size", w.circuit.size())
                .set("attempts", w.attempts);
        }
        Gen::Benor {
            n,
            k,
            field,
            output,
        } => {
            let c = benor_circuit(&sc_depth2(n, k.unwrap_or(n)), &field.get()?)?;
            io::write_circuit(&output, &c)?;
            r.set("circuit", output.display().to_string())
                .set("size", c.size());
        }
        Gen::Bilformula {
            n,
            k,
            field,
            output,
            matrix,
        } => {
            let f = field.get()?;
            let g = sc_depth2(n, k.unwrap_or(n));
            let w = assign_strassen_weights(&g, &f, ctx.seed()?, &StrassenConfig::default())?;
            let formula = bilinear_formula_from_depth2(&g, &f, &w.weights)?;
            let c = formula.to_circuit();
            io::write_circuit(&output, &c)?;
            if let Some(p) = matrix {
                io::write_matrix(&p, &formula.matrix())?;
            }
            r.set("circuit", output.display().to_string())
                .set("terms", formula.size())
                .set("size", c.size());
        }
    }
    Ok(r)
}

fn transform(cmd: Transform, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new();
    let (out, t) = match cmd {
        Transform::Reduce(p) => (
            p.output.clone(),
            save(&p.output, reduce_degree(&io::read_circuit(&p.input)?)?)?,
        ),
        Transform::Planarize(p) => {
            let c = io::read_circuit(&p.input)?;
            (
                p.output.clone(),
                save(&p.output, planarize(&c, ctx.seed()?)?)?,
            )
        }
        Transform::Bilinearize(p) => (
            p.output.clone(),
            save(&p.output, bilinearize(&io::read_circuit(&p.input)?)?)?,
        ),
        Transform::Abp2ckt(p) => (
            p.output.clone(),
            save(&p.output, abp_to_circuit(&io::read_abp(&p.input)?)?)?,
        ),
        Transform::Derive {
            io: p,
            preserve_planarity,
        } => {
            let c = io::read_circuit(&p.input)?;
            (
                p.output.clone(),
                save(&p.output, derivative_circuit(&c, preserve_planarity)?)?,
            )
        }
        Transform::Subst { io: p, set } => {
            let c = io::read_circuit(&p.input)?;
            let mut pairs = Vec::new();
            for s in &set {
                let (name, value) = s
                    .split_once('=')
                    .ok_or_else(|| anyhow!("expected NAME=VALUE, got {s:?}"))?;
                let v = c
                    .vars
                    .lookup(name.trim())
                    .ok_or_else(|| anyhow!("unknown variable {name:?}"))?;
                pairs.push((v, c.field.parse_scalar(value)?));
            }
            let out = substitute(&c, &pairs)?;
            io::write_circuit(&p.output, &out)?;
            r.set("output", p.output.display().to_string())
                .set("size", out.size());
            return Ok(r);
        }
    };
    transform_report(&mut r, &t, &out);
    Ok(r)
}

fn save(path: &Path, (c, t): (Circuit, TransformReport)) -> Result<TransformReport> {
    io::write_circuit(path, &c)?;
    Ok(t)
}

fn analyze(cmd: Analyze, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Analyze::Planar { input, dot } => {
            let c = io::read_circuit(&input)?;
            let g = circuit_graph(&c).0;
            let planar = is_planar(&g);
            r.set("vertices", g.n())
                .set("edges", g.m())
                .set("planar", planar);
            if let Some(k) = kuratowski_witness(&g) {
                r.set(
                    "witness",
                    json!({"kind": format!("{:?}", k.kind), "branch": k.branch, "edges": k.edges.len()}),
                );
            }
            if let Some(p) = dot {
                let d = planarize_graph(&g, ctx.seed.unwrap_or(0));
                io::write_text(&p, &d.to_dot())?;
                r.set("dot", p.display().to_string())
                    .set("crossings", d.crossings());
            }
        }
        Analyze::Separator { input } => {
            let g = circuit_graph(&io::read_circuit(&input)?).0;
            let s = lipton_tarjan(&g, &uniform_weights(g.n()))?;
            r.set("vertices", g.n())
                .set("a", s.a.len())
                .set("b", s.b.len())
                .set("c", s.c.len())
                .set("weight_a", s.weight_a.to_string())
                .set("weight_b", s.weight_b.to_string())
                .set("balanced", s.balanced())
                .set("separates", s.separates(&g))
                .set("size_bound_sq", s.claimed_sq.to_string())
                .set("within_bound", s.within_bound());
        }
        Analyze::Turan { input } => {
            let c = io::read_circuit(&input)?;
            let g = circuit_graph(&c).0;
            let mut labels = vec![None; c.size()];
            let mut reads = std::collections::BTreeMap::new();
            for (v, k) in c.gates.iter().enumerate() {
                if let GateKind::Input(var) = k {
                    labels[v] = match var.kind {
                        VarKind::X => Some(Label::Left(var.index)),
                        VarKind::Y => Some(Label::Right(var.index)),
                        VarKind::Z => None,
                    };
                    *reads.entry(*var).or_insert(0usize) += 1;
                }
            }
            let k = reads.values().copied().max().unwrap_or(1);
            let t = turan_partition(&g, &labels, k)?;
            r.set("vertices", g.n())
                .set("k", k)
                .set("s", t.s)
                .set("z0", t.z0.len())
                .set("removed", t.removed.len())
                .set("strategy", format!("{:?}", t.strategy))
                .set("separates", t.separates(&g, &labels));
        }
        Analyze::Savage { input, p, marked } => {
            let c = io::read_circuit(&input)?;
            let g = circuit_graph(&c).0;
            let s = savage_partition(&g, &marked_vertices(&c, marked), p)?;
            r.set("vertices", g.n())
                .set("parts", p)
                .set("counts", s.counts.clone())
                .set(
                    "separators",
                    s.separators.iter().map(Vec::len).collect::<Vec<_>>(),
                )
                .set("consistent", s.tree.is_consistent(g.n()))
                .set("separations_hold", s.tree.separations_hold(&g));
        }
        Analyze::Foresttree { input, p, marked } => {
            let c = io::read_circuit(&input)?;
            let g = circuit_graph(&c).0;
            let t = forest_partition_tree(&g, &marked_vertices(&c, marked), p)?;
            r.set("vertices", g.n())
                .set("leaves", t.leaves.len())
                .set(
                    "counts",
                    t.leaves
                        .iter()
                        .map(|&l| t.nodes[l].distinguished)
                        .collect::<Vec<_>>(),
                )
                .set("depth", t.depth())
                .set("max_separator", t.max_separator())
                .set("ratio_holds", t.leaf_ratio_holds())
                .set("separations_hold", t.separations_hold(&g));
        }
        Analyze::Metrics { input } => {
            let c = io::read_circuit(&input)?;
            let m = c.metrics()?;
            r.set("size", m.size)
                .set("wires", m.wires)
                .set("depth", m.depth)
                .set("max_fan_in", m.max_fan_in)
                .set("max_fan_out", m.max_fan_out)
                .set("reads", m.reads.clone())
                .set("read_once", c.is_read_once())
                .set("formula", c.is_formula())
                .set("planar", c.is_planar());
        }
    }
    Ok(r)
}

fn certify(cmd: Certify, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Certify::Rank { input, matrix } => {
            let (c, m) = (io::read_circuit(&input)?, io::read_matrix(&matrix)?);
            let cert = rank_certificate_planar(&c, &m, ctx.seed()?)?;
            rank_report(&cert, m.cols(), BoundModel::PlanarCircuit)
        }
        Certify::RankRo { input, matrix } => {
            let (c, m) = (io::read_circuit(&input)?, io::read_matrix(&matrix)?);
            let cert = rank_certificate_read_once(&c, &m, ctx.seed()?)?;
            rank_report(&cert, m.cols(), BoundModel::ReadOncePlanar)
        }
        Certify::Multi { input, matrix, p } => {
            let (c, m) = (io::read_circuit(&input)?, io::read_matrix(&matrix)?);
            let rep = multi_output_certificate(&c, &m, p, ctx.seed()?)?;
            let mut r = Report::new();
            r.set("model", format!("{:?}", rep.model))
                .set("planarized", rep.planarized)
                .set("size", rep.size)
                .set("parts", rep.p)
                .set("regular", rep.regular)
                .set(
                    "measured",
                    rep.parts
                        .iter()
                        .map(|p| {
                            json!({
                                "vertices": p.vertices, "inputs": p.inputs, "outputs": p.outputs,
                                "excluded": p.excluded, "demand": p.demand, "routed": p.routed,
                                "separator": p.separator, "through_separator": p.through_separator,
                            })
                        })
                        .collect::<Vec<_>>(),
                )
                .set(
                    "guaranteed",
                    "routed <= separator; routed = demand for totally regular maps",
                )
                .set("consistent", rep.consistent());
            r.violation = !rep.consistent();
            Ok(r)
        }
        Certify::Paths { input } => {
            let c = io::read_circuit(&input)?;
            let arcs: Vec<(usize, usize)> = c.wires.iter().map(|w| (w.from, w.to)).collect();
            let leaves: Vec<usize> = (0..c.size())
                .filter(|&g| matches!(c.gates[g], GateKind::Input(_)))
                .collect();
            let d = max_disjoint_paths(c.size(), &arcs, &leaves, &c.outputs);
            let ok = d.verify(c.size(), &arcs);
            let mut r = Report::new();
            r.set("sources", leaves.len())
                .set("sinks", c.outputs.len())
                .set("count", d.count)
                .set("cut", d.cut.clone())
                .set("paths", d.paths.clone())
                .set("verified", ok);
            r.violation = !ok;
            Ok(r)
        }
    }
}

fn verify(cmd: Verify, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Verify::Identity { a, b, trials } => {
            let (ca, cb) = (io::read_circuit(&a)?, io::read_circuit(&b)?);
            match ca.identity_test(&cb, trials, ctx.seed()?)? {
                IdentityVerdict::EqualWhp { trials } => {
                    r.set("verdict", "equal").set("trials", trials);
                }
                IdentityVerdict::Unequal { point, output } => {
                    r.set("verdict", "unequal").set("output", output).set(
                        "point",
                        point
                            .values
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>(),
                    );
                    r.violation = true;
                }
            }
        }
        Verify::Totreg { matrix, budget } => {
            let m = io::read_matrix(&matrix)?;
            match m.is_totally_regular(budget, ctx.seed()?)? {
                TotalRegularity::Yes => {
                    r.set("verdict", "totally regular");
                }
                TotalRegularity::No { rows, cols } => {
                    r.set("verdict", "singular minor")
                        .set("rows", rows)
                        .set("cols", cols);
                    r.violation = true;
                }
                TotalRegularity::BudgetExceeded { tested } => {
                    r.set("verdict", "no singular minor among samples")
                        .set("tested", tested);
                }
            }
        }
        Verify::Sc { input, limit } => {
            let g = io::read_graph(&input)?;
            match verify_superconcentrator(&g, limit, ctx.seed()?) {
                ScVerdict::Yes => {
                    r.set("verdict", "superconcentrator");
                }
                ScVerdict::No {
                    inputs,
                    outputs,
                    flow,
                } => {
                    r.set("verdict", "not a superconcentrator")
                        .set("inputs", inputs)
                        .set("outputs", outputs)
                        .set("flow", flow);
                    r.violation = true;
                }
                ScVerdict::SampledPass { tested } => {
                    r.set("verdict", "sampled pairs pass").set("tested", tested);
                }
            }
        }
    }
    Ok(r)
}

fn bench(cmd: Bench, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Bench::Separator { graph, n } => {
            let g = match graph {
                BenchGraph::Grid => {
                    let side = (n as f64).sqrt().round().max(1.0) as usize;
                    grid_graph(side, side)
                }
                BenchGraph::Triangulation => random_triangulation(n, ctx.seed()?),
            };
            let t = Instant::now();
            let s = lipton_tarjan(&g, &uniform_weights(g.n()))?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            r.set("vertices", g.n())
                .set("separator", s.c.len())
                .set("balanced", s.balanced())
                .set("within_bound", s.within_bound())
                .set("millis", ms);
        }
        Bench::Rank { n } => {
            let m = standard_cauchy(&Field::Rationals, n)?;
            let c = grid_bilinear_circuit(&m);
            let seed = ctx.seed()?;
            let t = Instant::now();
            let cert = rank_certificate_planar(&c, &m, seed)?;
            let planar_ms = t.elapsed().as_secs_f64() * 1e3;
            let t = Instant::now();
            let ro = rank_certificate_read_once(&c, &m, seed)?;
            let ro_ms = t.elapsed().as_secs_f64() * 1e3;
            r.set("n", n)
                .set("planar_separator", cert.separator.len())
                .set("planar_rank", cert.rank)
                .set("planar_millis", planar_ms)
                .set("read_once_separator", ro.separator.len())
                .set("read_once_rank", ro.rank)
                .set("read_once_millis", ro_ms);
            r.violation =
                cert.verdict() == Verdict::Inconsistent || ro.verdict() == Verdict::Inconsistent;
        }
    }
    Ok(r)
}

fn dispatch(cli: Cli) -> Result<Report> {
    let ctx = Ctx { seed: cli.seed };
    match cli.command {
        Command::Gen(c) => gen(c, &ctx),
        Command::Transform(c) => transform(c, &ctx),
        Command::Analyze(c) => analyze(c, &ctx),
        Command::Certify(c) => certify(c, &ctx),
        Command::Verify(c) => verify(c, &ctx),
        Command::Bench(c) => bench(c, &ctx),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`. Returns the exit status: 0 on success, 2 when a checked property
/// fails, 1 on usage or I/O errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let as_json = cli.json;
    match dispatch(cli) {
        Ok(r) => {
            if out.write_all(r.render(as_json).as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            if r.violation {
                EXIT_VIOLATION
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
