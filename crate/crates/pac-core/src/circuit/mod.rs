//! Arithmetic circuits and algebraic branching programs.

mod abp;
mod affine;
mod eval;
mod extract;
mod metrics;
mod pit;
mod poly;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{Field, Scalar, ScalarError};

pub use abp::{Abp, AbpEdge, AbpViolation, EdgeLabel};
pub use affine::{affine_parts, AffineForm};
pub use eval::{Assignment, ModEval};
pub use extract::{rebuild_bilinear, rebuild_linear};
pub use metrics::CircuitMetrics;
pub use pit::{IdentityVerdict, DEFAULT_PRIME};
pub use poly::{Monomial, Poly};

/// Gate index.
pub type GateId = usize;

/// Variable namespace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// x-variables.
    X,
    /// y-variables.
    Y,
    /// z-variables.
    Z,
}

/// A variable: namespace plus 0-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    /// Namespace.
    pub kind: VarKind,
    /// Index within the namespace.
    pub index: usize,
}

impl Var {
    /// `x_{i+1}`.
    pub fn x(i: usize) -> Self {
        Var {
            kind: VarKind::X,
            index: i,
        }
    }
    /// `y_{i+1}`.
    pub fn y(i: usize) -> Self {
        Var {
            kind: VarKind::Y,
            index: i,
        }
    }
    /// `z_{i+1}`.
    pub fn z(i: usize) -> Self {
        Var {
            kind: VarKind::Z,
            index: i,
        }
    }
}

/// Ordered variable names per namespace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VarSet {
    /// x names.
    pub x: Vec<String>,
    /// y names.
    pub y: Vec<String>,
    /// z names.
    pub z: Vec<String>,
}

impl VarSet {
    /// Default names `x1..`, `y1..`, `z1..`.
    pub fn with_counts(nx: usize, ny: usize, nz: usize) -> Self {
        let names = |p: &str, n: usize| (1..=n).map(|i| format!("{p}{i}")).collect();
        VarSet {
            x: names("x", nx),
            y: names("y", ny),
            z: names("z", nz),
        }
    }

    /// Names of one namespace.
    pub fn names(&self, kind: VarKind) -> &[String] {
        match kind {
            VarKind::X => &self.x,
            VarKind::Y => &self.y,
            VarKind::Z => &self.z,
        }
    }

    /// Count in one namespace.
    pub fn count(&self, kind: VarKind) -> usize {
        self.names(kind).len()
    }

    /// Total variable count.
    pub fn total(&self) -> usize {
        self.x.len() + self.y.len() + self.z.len()
    }

    /// Whether `v` is declared.
    pub fn contains(&self, v: Var) -> bool {
        v.index < self.count(v.kind)
    }

    /// Flat slot of `v` in x, y, z order.
    pub fn slot(&self, v: Var) -> usize {
        match v.kind {
            VarKind::X => v.index,
            VarKind::Y => self.x.len() + v.index,
            VarKind::Z => self.x.len() + self.y.len() + v.index,
        }
    }

    /// Variable at a flat slot.
    pub fn var_at(&self, slot: usize) -> Var {
        let (nx, ny) = (self.x.len(), self.y.len());
        if slot < nx {
            Var::x(slot)
        } else if slot < nx + ny {
            Var::y(slot - nx)
        } else {
            Var::z(slot - nx - ny)
        }
    }

    /// Variable by name.
    pub fn lookup(&self, name: &str) -> Option<Var> {
        for kind in [VarKind::X, VarKind::Y, VarKind::Z] {
            if let Some(i) = self.names(kind).iter().position(|n| n == name) {
                return Some(Var { kind, index: i });
            }
        }
        None
    }

    /// Name of `v`.
    pub fn name(&self, v: Var) -> &str {
        &self.names(v.kind)[v.index]
    }
}

/// Gate operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// A variable leaf.
    Input(Var),
    /// A constant leaf.
    Const(Scalar),
    /// Sum of scaled children.
    Add,
    /// Product of scaled children.
    Mul,
}

/// A scaled wire.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wire {
    /// Child gate.
    pub from: GateId,
    /// Parent gate.
    pub to: GateId,
    /// Multiplier applied to the child's value.
    pub scale: Scalar,
}

/// An arithmetic circuit with scaled wires and ordered outputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    /// Scalar field.
    pub field: Field,
    /// Declared variables.
    pub vars: VarSet,
    /// Gates, indexed by id.
    pub gates: Vec<GateKind>,
    /// Wires.
    pub wires: Vec<Wire>,
    /// Output gates in order.
    pub outputs: Vec<GateId>,
}

/// A structural problem found by [`Circuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Gates on a directed cycle.
    Cycle(Vec<GateId>),
    /// A wire endpoint does not exist.
    DanglingWire(usize),
    /// A wire from a gate to itself.
    SelfLoop(usize),
    /// A leaf with inputs or an operation without inputs.
    Degree {
        /// Gate.
        gate: GateId,
        /// In-degree found.
        in_degree: usize,
    },
    /// An output id does not exist.
    DanglingOutput(usize),
    /// A leaf names an undeclared variable.
    UnknownVar(GateId),
    /// A scalar from another field.
    ForeignScalar(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle(g) => write!(f, "cycle through gates {g:?}"),
            Violation::DanglingWire(w) => write!(f, "wire {w} references a missing gate"),
            Violation::SelfLoop(w) => write!(f, "wire {w} is a self-loop"),
            Violation::Degree { gate, in_degree } => {
                write!(f, "gate {gate} has invalid in-degree {in_degree}")
            }
            Violation::DanglingOutput(i) => write!(f, "output {i} references a missing gate"),
            Violation::UnknownVar(g) => write!(f, "gate {g} reads an undeclared variable"),
            Violation::ForeignScalar(s) => write!(f, "{s}"),
        }
    }
}

/// Errors from circuit operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    /// Structural violations.
    #[error("invalid circuit: {}", .0.first().map(alloc::string::ToString::to_string).unwrap_or_default())]
    Invalid(Vec<Violation>),
    /// An assignment misses a variable.
    #[error("assignment has no value for a {0:?} variable")]
    MissingVariable(Var),
    /// Two circuits declare different variables or output counts.
    #[error("circuits are not comparable: {0}")]
    Mismatch(String),
    /// The circuit does not compute a bilinear form.
    #[error("not a bilinear form")]
    NotBilinear,
    /// The circuit does not compute a linear map.
    #[error("not a linear map")]
    NotLinear,
    /// A wire scale or constant cannot be mapped into the test field.
    #[error("a constant has a denominator divisible by the test prime")]
    BadReduction,
    /// Expansion exceeded the monomial cap.
    #[error("polynomial expansion exceeds {0} monomials")]
    TooLarge(usize),
    /// Unknown variable name.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// Field error.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    /// Anything else violating a precondition.
    #[error("{0}")]
    Precondition(String),
}

/// Per-gate wire lists.
#[derive(Clone, Debug)]
pub struct Adjacency {
    /// Incoming wire ids per gate.
    pub ins: Vec<Vec<usize>>,
    /// Outgoing wire ids per gate.
    pub outs: Vec<Vec<usize>>,
}

impl Circuit {
    /// Empty circuit with default variable names.
    pub fn new(field: Field, nx: usize, ny: usize, nz: usize) -> Self {
        Circuit {
            field,
            vars: VarSet::with_counts(nx, ny, nz),
            gates: Vec::new(),
            wires: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Gate count.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Appends a gate.
    pub fn add_gate(&mut self, kind: GateKind) -> GateId {
        self.gates.push(kind);
        self.gates.len() - 1
    }

    /// Appends a variable leaf.
    pub fn input(&mut self, v: Var) -> GateId {
        self.add_gate(GateKind::Input(v))
    }

    /// Appends a constant leaf.
    pub fn constant(&mut self, s: Scalar) -> GateId {
        self.add_gate(GateKind::Const(s))
    }

    /// Appends a scaled wire.
    pub fn wire(&mut self, from: GateId, to: GateId, scale: Scalar) {
        self.wires.push(Wire { from, to, scale });
    }

    /// Appends a unit wire.
    pub fn wire1(&mut self, from: GateId, to: GateId) {
        let one = self.field.one();
        self.wire(from, to, one);
    }

    /// Appends an add gate over unit-scaled children.
    pub fn add(&mut self, children: &[GateId]) -> GateId {
        let g = self.add_gate(GateKind::Add);
        for &c in children {
            self.wire1(c, g);
        }
        g
    }

    /// Appends an add gate over scaled children.
    pub fn add_scaled(&mut self, children: &[(GateId, Scalar)]) -> GateId {
        let g = self.add_gate(GateKind::Add);
        for (c, s) in children {
            self.wire(*c, g, s.clone());
        }
        g
    }

    /// Appends a mul gate over unit-scaled children.
    pub fn mul(&mut self, children: &[GateId]) -> GateId {
        let g = self.add_gate(GateKind::Mul);
        for &c in children {
            self.wire1(c, g);
        }
        g
    }

    /// Marks an output.
    pub fn output(&mut self, g: GateId) {
        self.outputs.push(g);
    }

    /// Wire lists per gate. Wire endpoints must be in range.
    pub fn adjacency(&self) -> Adjacency {
        let mut ins = vec![Vec::new(); self.gates.len()];
        let mut outs = vec![Vec::new(); self.gates.len()];
        for (i, w) in self.wires.iter().enumerate() {
            outs[w.from].push(i);
            ins[w.to].push(i);
        }
        Adjacency { ins, outs }
    }

    /// In-degree of every gate.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.gates.len()];
        for w in &self.wires {
            d[w.to] += 1;
        }
        d
    }

    /// Out-degree of every gate.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.gates.len()];
        for w in &self.wires {
            d[w.from] += 1;
        }
        d
    }

    /// Kahn order; `Err` holds the gates left on cycles.
    pub fn topo_order(&self) -> Result<Vec<GateId>, Vec<GateId>> {
        let n = self.gates.len();
        let adj = self.adjacency();
        let mut indeg = self.in_degrees();
        let mut order: Vec<GateId> = (0..n).filter(|&g| indeg[g] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let g = order[head];
            head += 1;
            for &w in &adj.outs[g] {
                let t = self.wires[w].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    order.push(t);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).filter(|&g| indeg[g] > 0).collect())
        }
    }

    /// All structural violations; empty iff well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.gates.len();
        let mut out = Vec::new();
        let mut ok_wires = true;
        for (i, w) in self.wires.iter().enumerate() {
            if w.from >= n || w.to >= n {
                out.push(Violation::DanglingWire(i));
                ok_wires = false;
            } else if w.from == w.to {
                out.push(Violation::SelfLoop(i));
            }
            if !self.field.contains(&w.scale) {
                out.push(Violation::ForeignScalar(format!(
                    "wire {i} scale {}",
                    w.scale
                )));
            }
        }
        for (i, &o) in self.outputs.iter().enumerate() {
            if o >= n {
                out.push(Violation::DanglingOutput(i));
            }
        }
        for (g, k) in self.gates.iter().enumerate() {
            match k {
                GateKind::Input(v) if !self.vars.contains(*v) => out.push(Violation::UnknownVar(g)),
                GateKind::Const(s) if !self.field.contains(s) => {
                    out.push(Violation::ForeignScalar(format!("gate {g} constant {s}")))
                }
                _ => {}
            }
        }
        if !ok_wires {
            return out;
        }
        let indeg = self.in_degrees();
        for (g, k) in self.gates.iter().enumerate() {
            let bad = match k {
                GateKind::Input(_) | GateKind::Const(_) => indeg[g] != 0,
                GateKind::Add | GateKind::Mul => indeg[g] == 0,
            };
            if bad {
                out.push(Violation::Degree {
                    gate: g,
                    in_degree: indeg[g],
                });
            }
        }
        if out.iter().all(|v| !matches!(v, Violation::SelfLoop(_))) {
            if let Err(cyc) = self.topo_order() {
                out.push(Violation::Cycle(cyc));
            }
        } else {
            out.push(Violation::Cycle(Vec::new()));
        }
        out
    }

    /// Errors unless [`Circuit::validate`] is empty.
    pub fn check(&self) -> Result<(), CircuitError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(v))
        }
    }

    /// Input gates reading each variable, by flat slot.
    pub fn leaves_by_slot(&self) -> Vec<Vec<GateId>> {
        let mut out = vec![Vec::new(); self.vars.total()];
        for (g, k) in self.gates.iter().enumerate() {
            if let GateKind::Input(v) = k {
                out[self.vars.slot(*v)].push(g);
            }
        }
        out
    }

    /// Removes gates that no output depends on, keeping relative order.
    pub fn prune_unreachable(&self) -> Circuit {
        let adj = self.adjacency();
        let mut live = vec![false; self.gates.len()];
        let mut stack: Vec<GateId> = self.outputs.clone();
        while let Some(g) = stack.pop() {
            if core::mem::replace(&mut live[g], true) {
                continue;
            }
            for &w in &adj.ins[g] {
                stack.push(self.wires[w].from);
            }
        }
        let mut map = vec![usize::MAX; self.gates.len()];
        let mut out = Circuit {
            field: self.field.clone(),
            vars: self.vars.clone(),
            gates: Vec::new(),
            wires: Vec::new(),
            outputs: Vec::new(),
        };
        for (g, k) in self.gates.iter().enumerate() {
            if live[g] {
                map[g] = out.add_gate(k.clone());
            }
        }
        for w in &self.wires {
            if live[w.to] {
                out.wire(map[w.from], map[w.to], w.scale.clone());
            }
        }
        out.outputs = self.outputs.iter().map(|&o| map[o]).collect();
        out
    }
}
