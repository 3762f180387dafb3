use alloc::vec;
use alloc::vec::Vec;

use alloc::borrow::Cow;

use super::{Assignment, Circuit, CircuitError, GateKind, ModEval, Var, VarKind};
use crate::scalar::{Field, Matrix};

const VERIFY_TRIALS: usize = 20;
const VERIFY_SEED: u64 = 0x00b1_11ea_5eed;

/// The circuit `sum_{j,i} m[j][i] * y_j * x_i` (one mul per nonzero entry).
pub fn rebuild_bilinear(m: &Matrix) -> Circuit {
    let f = m.field().clone();
    let mut c = Circuit::new(f.clone(), m.cols(), m.rows(), 0);
    let xs: Vec<_> = (0..m.cols()).map(|i| c.input(Var::x(i))).collect();
    let ys: Vec<_> = (0..m.rows()).map(|j| c.input(Var::y(j))).collect();
    let mut terms = Vec::new();
    for j in 0..m.rows() {
        for i in 0..m.cols() {
            let e = m.get(j, i);
            if !e.is_zero() {
                let g = c.mul(&[ys[j], xs[i]]);
                terms.push((g, e.clone()));
            }
        }
    }
    let out = if terms.is_empty() {
        c.constant(f.zero())
    } else {
        c.add_scaled(&terms)
    };
    c.output(out);
    c
}

/// The circuit whose output `r` is `sum_i m[r][i] * x_i`.
pub fn rebuild_linear(m: &Matrix) -> Circuit {
    let f = m.field().clone();
    let mut c = Circuit::new(f.clone(), m.cols(), 0, 0);
    let xs: Vec<_> = (0..m.cols()).map(|i| c.input(Var::x(i))).collect();
    for r in 0..m.rows() {
        let terms: Vec<_> = (0..m.cols())
            .filter(|&i| !m.get(r, i).is_zero())
            .map(|i| (xs[i], m.get(r, i).clone()))
            .collect();
        let out = if terms.is_empty() {
            c.constant(f.zero())
        } else {
            c.add_scaled(&terms)
        };
        c.output(out);
    }
    c
}

fn unit(f: &Field, n: usize, hot: &[usize]) -> Assignment {
    let mut values = vec![f.zero(); n];
    for &h in hot {
        values[h] = f.one();
    }
    Assignment { values }
}

impl Circuit {
    /// The circuit itself, or a copy without z declarations when no gate
    /// reads a z variable (as after substituting all of them).
    fn bilinear_view(&self) -> Result<Cow<'_, Circuit>, CircuitError> {
        self.check()?;
        let reads_z = self
            .gates
            .iter()
            .any(|g| matches!(g, GateKind::Input(v) if v.kind == VarKind::Z));
        if reads_z || self.outputs.len() != 1 {
            return Err(CircuitError::Precondition(
                "bilinear extraction needs one output and only x, y variables".into(),
            ));
        }
        if self.vars.z.is_empty() {
            return Ok(Cow::Borrowed(self));
        }
        let mut c = self.clone();
        c.vars.z.clear();
        Ok(Cow::Owned(c))
    }

    /// The matrix `M` with `M[j][i]` the value at `x = e_i, y = e_j`, verified
    /// by identity testing against `sum M[j][i] y_j x_i`.
    pub fn extract_bilinear_matrix(&self) -> Result<Matrix, CircuitError> {
        let view = self.bilinear_view()?;
        let this = view.as_ref();
        let (nx, ny) = (this.vars.x.len(), this.vars.y.len());
        let f = this.field.clone();
        let mut entries = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let a = unit(&f, nx + ny, &[i, nx + j]);
                entries.push(this.evaluate(&a)?.swap_remove(0));
            }
        }
        let m = Matrix::new(f, ny, nx, entries)?;
        if this
            .identity_test(&rebuild_bilinear(&m), VERIFY_TRIALS, VERIFY_SEED)?
            .is_equal()
        {
            Ok(m)
        } else {
            Err(CircuitError::NotBilinear)
        }
    }

    /// [`Circuit::extract_bilinear_matrix`] with all arithmetic mod `q`.
    /// Rows are y-indices. Verification compares against the rebuilt form mod `q`.
    pub fn extract_bilinear_matrix_mod(&self, q: u64) -> Result<Vec<Vec<u64>>, CircuitError> {
        let view = self.bilinear_view()?;
        let this = view.as_ref();
        let (nx, ny) = (this.vars.x.len(), this.vars.y.len());
        let me = ModEval::new(this, q)?;
        let mut m = vec![vec![0u64; nx]; ny];
        let mut point = vec![0u64; nx + ny];
        for (j, row) in m.iter_mut().enumerate() {
            point[nx + j] = 1;
            for (i, e) in row.iter_mut().enumerate() {
                point[i] = 1;
                *e = me.eval(&point)[0];
                point[i] = 0;
            }
            point[nx + j] = 0;
        }
        let verdict = super::pit::compare_mod(
            &this.field,
            nx + ny,
            q,
            VERIFY_TRIALS,
            VERIFY_SEED,
            |p| me.eval(p),
            |p| {
                let mut acc = 0u64;
                for (j, row) in m.iter().enumerate() {
                    let mut s = 0u128;
                    for (i, &e) in row.iter().enumerate() {
                        s = (s + e as u128 * p[i] as u128) % q as u128;
                    }
                    acc = ((acc as u128 + s * p[nx + j] as u128) % q as u128) as u64;
                }
                vec![acc]
            },
        );
        if verdict.is_equal() {
            Ok(m)
        } else {
            Err(CircuitError::NotBilinear)
        }
    }

    /// The matrix whose column `i` holds the outputs at `x = e_i`, verified by
    /// identity testing against the rebuilt linear map.
    pub fn extract_linear_map(&self) -> Result<Matrix, CircuitError> {
        self.check()?;
        if !self.vars.y.is_empty() || !self.vars.z.is_empty() {
            return Err(CircuitError::Precondition(
                "linear-map extraction needs only x variables".into(),
            ));
        }
        let n = self.vars.x.len();
        let rows = self.outputs.len();
        let f = self.field.clone();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            cols.push(self.evaluate(&unit(&f, n, &[i]))?);
        }
        let m = Matrix::from_fn(f, rows, n, |r, i| cols[i][r].clone());
        if self
            .identity_test(&rebuild_linear(&m), VERIFY_TRIALS, VERIFY_SEED)?
            .is_equal()
        {
            Ok(m)
        } else {
            Err(CircuitError::NotLinear)
        }
    }
}
