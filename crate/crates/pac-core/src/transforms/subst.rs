//! Partial substitution of variables by constants.

use crate::circuit::{Circuit, CircuitError, GateKind, Var};
use crate::scalar::Scalar;

/// Turns every leaf reading a substituted variable into a constant leaf.
/// Variable declarations are kept.
pub fn substitute(c: &Circuit, partial: &[(Var, Scalar)]) -> Result<Circuit, CircuitError> {
    for (v, s) in partial {
        if !c.vars.contains(*v) {
            return Err(CircuitError::UnknownVariable(alloc::format!(
                "{:?}{}",
                v.kind,
                v.index + 1
            )));
        }
        c.field.check(s)?;
    }
    let mut out = c.clone();
    for g in out.gates.iter_mut() {
        if let GateKind::Input(v) = g {
            if let Some((_, s)) = partial.iter().find(|(w, _)| w == v) {
                *g = GateKind::Const(s.clone());
            }
        }
    }
    Ok(out)
}
