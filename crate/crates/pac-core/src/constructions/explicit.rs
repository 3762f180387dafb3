//! Cauchy matrices, bilinear circuits for a matrix, and power sums.

use alloc::vec::Vec;

use super::ConstructionError;
use crate::circuit::{Circuit, GateId, Var};
use crate::scalar::{Field, Matrix, Scalar};

/// `M[i][j] = 1 / (xs[i] - ys[j])`.
pub fn cauchy_matrix(
    field: &Field,
    xs: &[Scalar],
    ys: &[Scalar],
) -> Result<Matrix, ConstructionError> {
    let all: Vec<&Scalar> = xs.iter().chain(ys).collect();
    for s in &all {
        field.check(s)?;
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[i] == all[j] {
                return Err(ConstructionError::RepeatedParameter(i, j));
            }
        }
    }
    let mut entries = Vec::with_capacity(xs.len() * ys.len());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let d = field.sub(x, y);
            entries.push(
                field
                    .inv(&d)
                    .map_err(|_| ConstructionError::ZeroDifference(i, j))?,
            );
        }
    }
    Ok(Matrix::new(field.clone(), xs.len(), ys.len(), entries)?)
}

/// The `n × n` Cauchy matrix with parameters `xs = 1..n`, `ys = n+1..2n`.
pub fn standard_cauchy(field: &Field, n: usize) -> Result<Matrix, ConstructionError> {
    let xs: Vec<Scalar> = (1..=n as i64).map(|v| field.from_i64(v)).collect();
    let ys: Vec<Scalar> = (n as i64 + 1..=2 * n as i64)
        .map(|v| field.from_i64(v))
        .collect();
    cauchy_matrix(field, &xs, &ys)
}

/// Circuit for `Σ_ij M[i][j] y_i x_j` with one leaf per variable reference:
/// each row form is an add gate over all x leaves, times `y_i`, summed. Not
/// planar beyond tiny sizes.
pub fn naive_bilinear_circuit(m: &Matrix) -> Circuit {
    let f = m.field().clone();
    let mut c = Circuit::new(f, m.cols(), m.rows(), 0);
    let xs: Vec<GateId> = (0..m.cols()).map(|j| c.input(Var::x(j))).collect();
    let mut products = Vec::new();
    for i in 0..m.rows() {
        let terms: Vec<(GateId, Scalar)> = (0..m.cols())
            .filter(|&j| !m.get(i, j).is_zero())
            .map(|j| (xs[j], m.get(i, j).clone()))
            .collect();
        if terms.is_empty() {
            continue;
        }
        let row = c.add_scaled(&terms);
        let y = c.input(Var::y(i));
        products.push(c.mul(&[row, y]));
    }
    finish_sum(&mut c, &products);
    c
}

/// Read-once planar circuit for `Σ_ij M[i][j] y_i x_j` on a grid. Column
/// `j` carries `x_j` downwards and row `i` accumulates its form left to
/// right. Where they meet, the row sum `s = r + a x` is formed and the column
/// continues as `(s - r) / a`, so the two never cross; a zero entry passes
/// the row through `s = r + x` as `s - (s - r)`. Row sums are then
/// multiplied by `y_i` and summed along the right edge. Fan-in and fan-out
/// are at most 2.
pub fn grid_bilinear_circuit(m: &Matrix) -> Circuit {
    let f = m.field().clone();
    let mut c = Circuit::new(f.clone(), m.cols(), m.rows(), 0);
    let mut col: Vec<GateId> = (0..m.cols()).map(|j| c.input(Var::x(j))).collect();
    let mut products = Vec::new();
    for i in 0..m.rows() {
        let mut acc: Option<GateId> = None;
        for (j, x) in col.iter_mut().enumerate() {
            let a = m.get(i, j);
            if a.is_zero() {
                // pass the row over the column without a crossing
                if let Some(r) = acc {
                    let s = c.add(&[r, *x]);
                    let minus = f.neg(&f.one());
                    let down = c.add_scaled(&[(s, f.one()), (r, minus.clone())]);
                    acc = Some(c.add_scaled(&[(s, f.one()), (down, minus)]));
                    *x = down;
                }
                continue;
            }
            acc = Some(match acc {
                None => c.add_scaled(&[(*x, a.clone())]),
                Some(r) => {
                    let s = c.add_scaled(&[(r, f.one()), (*x, a.clone())]);
                    let inv = f.inv(a).expect("nonzero");
                    *x = c.add_scaled(&[(s, inv.clone()), (r, f.neg(&inv))]);
                    s
                }
            });
        }
        if let Some(r) = acc {
            let y = c.input(Var::y(i));
            products.push(c.mul(&[r, y]));
        }
    }
    finish_sum(&mut c, &products);
    c.prune_unreachable()
}

fn finish_sum(c: &mut Circuit, products: &[GateId]) {
    let out = match products {
        [] => {
            let z = c.field.zero();
            c.constant(z)
        }
        [p] => *p,
        [first, rest @ ..] => rest.iter().fold(*first, |acc, &p| c.add(&[acc, p])),
    };
    c.output(out);
}

/// Read-once planar circuit for `Σ_i x_i^n`: each `x_i` is raised by
/// left-to-right binary exponentiation (square, then multiply by the leaf on
/// a one bit), and the powers are summed by a chain.
pub fn power_sum_circuit(n: usize) -> Result<Circuit, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::Parameter(
            "power sum needs n >= 1".into(),
        ));
    }
    let mut c = Circuit::new(Field::Rationals, n, 0, 0);
    let bits = usize::BITS - n.leading_zeros();
    let mut powers = Vec::with_capacity(n);
    for i in 0..n {
        let x = c.input(Var::x(i));
        let mut r = x;
        for b in (0..bits - 1).rev() {
            r = c.mul(&[r, r]);
            if n >> b & 1 == 1 {
                r = c.mul(&[r, x]);
            }
        }
        powers.push(r);
    }
    let out = powers
        .iter()
        .skip(1)
        .fold(powers[0], |acc, &p| c.add(&[acc, p]));
    c.output(out);
    Ok(c)
}

/// `3 n (⌈log2 n⌉ + 1)`.
pub fn power_sum_bound(n: usize) -> usize {
    let ceil_log = if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    3 * n * (ceil_log + 1)
}
