use nalgebra::{Matrix4, Schur};

use super::{DynamicsParams, DynamicsState};
use crate::error::{Error, Result};
use crate::games::{is_symmetric, NormalFormGame, SymmetricLabels};

pub type Complex = nalgebra::Complex<f64>;
pub type Matrix4x4 = [[f64; 4]; 4];

/// Analytic Jacobian of [`saiga_rhs`](super::saiga_rhs) at `point`, rows and
/// columns ordered `(p1, p2, w1, w2)`.
pub fn linearize(params: &DynamicsParams, point: &DynamicsState) -> Matrix4x4 {
    let p = [point.p1, point.p2];
    let w = [point.w1, point.w2];
    let eps = params.epsilon;
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        let o = 1 - i;
        let me = &params.players[i];
        let them = &params.players[o];
        let du = them.u - me.u;
        m[i][o] = me.u + 0.5 * du * w[i];
        m[i][2 + i] = 0.5 * du * p[o] + 0.5 * (them.d - me.c);
        m[2 + i][i] = eps * (-du * p[o] + me.c - them.d);
        m[2 + i][o] = eps * (-du * p[i] + me.d - them.c);
    }
    m
}

/// Constant Jacobian of the symmetric-game dynamics.
///
/// `gain` scales the attitude column of the policy rows: 0.5 gives the exact
/// Jacobian, 1.0 gives the commonly printed form of this matrix. Both share
/// the eigenvalues 0 and `u`.
pub fn symmetric_linear_matrix(game: &NormalFormGame, epsilon: f64, gain: f64) -> Result<Matrix4x4> {
    if !is_symmetric(game) {
        return Err(Error::contract("symmetric_linear_matrix needs a symmetric game"));
    }
    let l = SymmetricLabels::from_game(game)?;
    let u = l.u();
    let g = gain * (l.c - l.b);
    let k = epsilon * (l.b - l.c);
    Ok([
        [0.0, u, g, 0.0],
        [u, 0.0, 0.0, g],
        [k, -k, 0.0, 0.0],
        [-k, k, 0.0, 0.0],
    ])
}

/// All four eigenvalues of a real 4×4 matrix.
///
/// Complex conjugate pairs are adjacent (positive imaginary part first) and
/// the groups are ordered by decreasing real part.
pub fn eigenvalues_4x4(matrix: &Matrix4x4) -> Result<Vec<Complex>> {
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let m = Matrix4::from_fn(|r, c| matrix[r][c]);
    let schur = Schur::try_new(m, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let raw: Vec<Complex> = schur.complex_eigenvalues().iter().copied().collect();
    Ok(pair_conjugates(raw))
}

fn pair_conjugates(mut raw: Vec<Complex>) -> Vec<Complex> {
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-10 * scale;
    let mut groups: Vec<Vec<Complex>> = Vec::new();
    while let Some(z) = raw.pop() {
        if z.im.abs() <= tol {
            groups.push(vec![Complex::new(z.re, 0.0)]);
            continue;
        }
        let partner = raw
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z.conj()).norm().total_cmp(&(b.1 - z.conj()).norm()))
            .map(|(k, _)| k);
        match partner {
            Some(k) => {
                let y = raw.swap_remove(k);
                let (hi, lo) = if z.im >= y.im { (z, y) } else { (y, z) };
                groups.push(vec![hi, lo]);
            }
            None => groups.push(vec![z]),
        }
    }
    groups.sort_by(|a, b| b[0].re.total_cmp(&a[0].re));
    groups.into_iter().flatten().collect()
}
