//! File formats: JSON circuits (`.pac`), branching programs (`.abp`),
//! superconcentrator graphs, text matrices (`.mat`) and DOT drawings.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use pac_core::circuit::{AbpEdge, EdgeLabel, VarSet, Wire};
use pac_core::constructions::SCGraph;
use pac_core::{Abp, Circuit, Field, GateKind, Matrix, Scalar};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
struct VarsFile {
    #[serde(default)]
    x: Vec<String>,
    #[serde(default)]
    y: Vec<String>,
    #[serde(default)]
    z: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct GateFile {
    id: usize,
    op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct WireFile {
    from: usize,
    to: usize,
    scale: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    field: String,
    vars: VarsFile,
    gates: Vec<GateFile>,
    wires: Vec<WireFile>,
    outputs: Vec<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    from: usize,
    to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct AbpFile {
    field: String,
    #[serde(default)]
    vars: VarsFile,
    vertices: usize,
    source: usize,
    sink: usize,
    edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    edges: Vec<EdgeFile>,
}

fn vars_from(v: &VarSet) -> VarsFile {
    VarsFile {
        x: v.x.clone(),
        y: v.y.clone(),
        z: v.z.clone(),
    }
}

fn vars_to(v: VarsFile) -> Result<VarSet> {
    let set = VarSet {
        x: v.x,
        y: v.y,
        z: v.z,
    };
    let mut seen = std::collections::BTreeSet::new();
    for name in set.x.iter().chain(&set.y).chain(&set.z) {
        if !seen.insert(name.as_str()) {
            bail!("variable name {name:?} declared twice");
        }
    }
    Ok(set)
}

fn scalar(field: &Field, text: &str, what: &str) -> Result<Scalar> {
    field
        .parse_scalar(text)
        .with_context(|| format!("{what}: bad scalar {text:?}"))
}

fn circuit_to_file(c: &Circuit) -> CircuitFile {
    let gates = c
        .gates
        .iter()
        .enumerate()
        .map(|(id, k)| {
            let (op, var, value) = match k {
                GateKind::Input(v) => ("input", Some(c.vars.name(*v).to_string()), None),
                GateKind::Const(s) => ("const", None, Some(s.to_string())),
                GateKind::Add => ("add", None, None),
                GateKind::Mul => ("mul", None, None),
            };
            GateFile {
                id,
                op: op.into(),
                var,
                value,
            }
        })
        .collect();
    CircuitFile {
        field: c.field.to_string(),
        vars: vars_from(&c.vars),
        gates,
        wires: c
            .wires
            .iter()
            .map(|w| WireFile {
                from: w.from,
                to: w.to,
                scale: w.scale.to_string(),
            })
            .collect(),
        outputs: c.outputs.clone(),
    }
}

fn circuit_from_file(f: CircuitFile) -> Result<Circuit> {
    let field = Field::parse(&f.field).with_context(|| format!("bad field {:?}", f.field))?;
    let vars = vars_to(f.vars)?;
    let mut gates = Vec::with_capacity(f.gates.len());
    for (i, g) in f.gates.into_iter().enumerate() {
        if g.id != i {
            bail!(
                "gate {i}: ids must be 0, 1, 2, ... in order (found {})",
                g.id
            );
        }
        let kind = match g.op.as_str() {
            "input" => {
                let name = g
                    .var
                    .ok_or_else(|| anyhow!("gate {i}: input without var"))?;
                GateKind::Input(
                    vars.lookup(&name)
                        .ok_or_else(|| anyhow!("gate {i}: unknown variable {name:?}"))?,
                )
            }
            "const" => {
                let v = g
                    .value
                    .ok_or_else(|| anyhow!("gate {i}: const without value"))?;
                GateKind::Const(scalar(&field, &v, &format!("gate {i}"))?)
            }
            "add" => GateKind::Add,
            "mul" => GateKind::Mul,
            other => bail!("gate {i}: unknown op {other:?}"),
        };
        gates.push(kind);
    }
    let mut wires = Vec::with_capacity(f.wires.len());
    for (i, w) in f.wires.into_iter().enumerate() {
        wires.push(Wire {
            from: w.from,
            to: w.to,
            scale: scalar(&field, &w.scale, &format!("wire {i}"))?,
        });
    }
    let c = Circuit {
        field,
        vars,
        gates,
        wires,
        outputs: f.outputs,
    };
    c.check().context("invalid circuit")?;
    Ok(c)
}

fn label_text(vars: &VarSet, l: &EdgeLabel) -> String {
    match l {
        EdgeLabel::Var(v) => vars.name(*v).to_string(),
        EdgeLabel::Const(s) => s.to_string(),
    }
}

fn abp_to_file(p: &Abp) -> AbpFile {
    AbpFile {
        field: p.field.to_string(),
        vars: vars_from(&p.vars),
        vertices: p.vertices,
        source: p.source,
        sink: p.sink,
        edges: p
            .edges
            .iter()
            .map(|e| EdgeFile {
                from: e.from,
                to: e.to,
                label: Some(label_text(&p.vars, &e.label)),
            })
            .collect(),
    }
}

fn abp_from_file(f: AbpFile) -> Result<Abp> {
    let field = Field::parse(&f.field).with_context(|| format!("bad field {:?}", f.field))?;
    let vars = vars_to(f.vars)?;
    let mut p = Abp::new(field.clone(), vars, f.vertices, f.source, f.sink);
    for (i, e) in f.edges.into_iter().enumerate() {
        let text = e.label.ok_or_else(|| anyhow!("edge {i}: missing label"))?;
        let label = match p.vars.lookup(&text) {
            Some(v) => EdgeLabel::Var(v),
            None => EdgeLabel::Const(scalar(&field, &text, &format!("edge {i}"))?),
        };
        p.edges.push(AbpEdge {
            from: e.from,
            to: e.to,
            label,
        });
    }
    let problems = p.validate();
    if !problems.is_empty() {
        bail!("invalid branching program: {problems:?}");
    }
    Ok(p)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| anyhow!("{path}: line {}, column {}: {e}", e.line(), e.column()))
}

/// Circuit as pretty JSON.
pub fn circuit_to_string(c: &Circuit) -> String {
    let mut s = serde_json::to_string_pretty(&circuit_to_file(c)).expect("serializable");
    s.push('\n');
    s
}

/// Parses a circuit document; `origin` names it in diagnostics.
pub fn circuit_from_str(text: &str, origin: &str) -> Result<Circuit> {
    circuit_from_file(parse_json(text, origin)?).with_context(|| origin.to_string())
}

/// Reads a `.pac` file.
pub fn read_circuit(path: &Path) -> Result<Circuit> {
    circuit_from_str(&read(path)?, &path.display().to_string())
}

/// Writes a `.pac` file.
pub fn write_circuit(path: &Path, c: &Circuit) -> Result<()> {
    write(path, &circuit_to_string(c))
}

/// Branching program as pretty JSON.
pub fn abp_to_string(p: &Abp) -> String {
    let mut s = serde_json::to_string_pretty(&abp_to_file(p)).expect("serializable");
    s.push('\n');
    s
}

/// Parses a branching-program document.
pub fn abp_from_str(text: &str, origin: &str) -> Result<Abp> {
    abp_from_file(parse_json(text, origin)?).with_context(|| origin.to_string())
}

/// Reads a `.abp` file.
pub fn read_abp(path: &Path) -> Result<Abp> {
    abp_from_str(&read(path)?, &path.display().to_string())
}

/// Writes a `.abp` file.
pub fn write_abp(path: &Path, p: &Abp) -> Result<()> {
    write(path, &abp_to_string(p))
}

/// Superconcentrator graph in the branching-program layout, with inputs
/// and outputs in place of source and sink and unlabeled edges.
pub fn graph_to_string(g: &SCGraph) -> String {
    let file = GraphFile {
        vertices: g.vertices,
        inputs: g.inputs.clone(),
        outputs: g.outputs.clone(),
        edges: g
            .edges
            .iter()
            .map(|&(from, to)| EdgeFile {
                from,
                to,
                label: None,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

/// Parses a superconcentrator graph document.
pub fn graph_from_str(text: &str, origin: &str) -> Result<SCGraph> {
    let f: GraphFile = parse_json(text, origin)?;
    let edges = f.edges.into_iter().map(|e| (e.from, e.to)).collect();
    SCGraph::new(f.vertices, f.inputs, f.outputs, edges).with_context(|| origin.to_string())
}

/// Reads a superconcentrator graph.
pub fn read_graph(path: &Path) -> Result<SCGraph> {
    graph_from_str(&read(path)?, &path.display().to_string())
}

/// Writes a superconcentrator graph.
pub fn write_graph(path: &Path, g: &SCGraph) -> Result<()> {
    write(path, &graph_to_string(g))
}

/// Reads a `.mat` file.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    Matrix::parse_text(&read(path)?).with_context(|| path.display().to_string())
}

/// Writes a `.mat` file.
pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    write(path, &m.to_text())
}

/// Writes any text artifact, such as a DOT drawing.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pac_core::circuit::Var;
    use pac_core::constructions::{random_abp, sc_recursive, standard_cauchy};

    #[test]
    fn circuit_round_trip() {
        let f = Field::prime_u64(101).unwrap();
        let mut c = Circuit::new(f.clone(), 2, 1, 1);
        let (a, b, z) = (c.input(Var::x(0)), c.input(Var::y(0)), c.input(Var::z(0)));
        let k = c.constant(f.from_i64(-3));
        let s = c.add_scaled(&[(a, f.from_i64(5)), (k, f.one())]);
        let m = c.mul(&[s, b, z]);
        c.output(m);
        c.output(s);
        let text = circuit_to_string(&c);
        assert_eq!(circuit_from_str(&text, "t").unwrap(), c);
        assert_eq!(
            circuit_to_string(&circuit_from_str(&text, "t").unwrap()),
            text
        );
    }

    #[test]
    fn abp_and_graph_round_trip() {
        let p = random_abp(&Field::Rationals, 3, 6, 12, 4);
        assert_eq!(abp_from_str(&abp_to_string(&p), "t").unwrap(), p);
        let g = sc_recursive(4);
        assert_eq!(graph_from_str(&graph_to_string(&g), "t").unwrap(), g);
        let m = standard_cauchy(&Field::Rationals, 3).unwrap();
        assert_eq!(Matrix::parse_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = circuit_from_str("{\n  \"field\": \"Q\",\n  oops\n}", "bad.pac").unwrap_err();
        assert!(format!("{err:#}").contains("line 3"), "{err:#}");
        let bad_op = r#"{"field":"Q","vars":{"x":["x1"]},"gates":[{"id":0,"op":"div"}],"wires":[],"outputs":[0]}"#;
        assert!(format!("{:#}", circuit_from_str(bad_op, "b").unwrap_err()).contains("unknown op"));
    }
}
