//! One-sided (Hestenes) Jacobi SVD for square complex matrices.
//!
//! Slower than bidiagonalization but accurate on rank-deficient input, which
//! is where the bidiagonal routine occasionally returns a wrong factorization.

use nalgebra::{DMatrix, DVector};

use crate::matrix::C64;

const MAX_SWEEPS: usize = 80;

/// `M = W diag(σ) Z*` with `σ` descending; `W`, `Z` unitary.
pub(crate) fn svd(m: &DMatrix<C64>) -> Option<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut a = m.clone();
    let mut v = DMatrix::<C64>::identity(n, n);

    let threshold = f64::EPSILON * n as f64;
    // columns this small are rounding noise and are left as they are
    let floor = (f64::EPSILON * m.norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    let z = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let w = orthonormal_columns(n, order.iter().map(|&j| (norms[j] > 0.0).then(|| a.column(j).unscale(norms[j]))));
    Some((w, sigma, z.adjoint()))
}

/// Columns `(a_p, e^{-iφ} a_q)` replaced by `(c a_p − s e^{-iφ} a_q, s a_p + c e^{-iφ} a_q)`.
fn rotate(m: &mut DMatrix<C64>, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let conj = phase.conj();
    for r in 0..m.nrows() {
        let x = m[(r, p)];
        let y = m[(r, q)] * conj;
        m[(r, p)] = x * c - y * s;
        m[(r, q)] = x * s + y * c;
    }
}

/// Gram–Schmidt over the candidates in order; missing or dependent slots are
/// filled from the standard basis.
fn orthonormal_columns(n: usize, candidates: impl Iterator<Item = Option<DVector<C64>>>) -> DMatrix<C64> {
    let mut cols: Vec<Option<DVector<C64>>> = Vec::with_capacity(n);
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(n);
    for cand in candidates {
        let accepted = cand.and_then(|c| project_out(c, &basis)).filter(|(_, kept)| *kept > 0.5).map(|(u, _)| u);
        if let Some(u) = &accepted {
            basis.push(u.clone());
        }
        cols.push(accepted);
    }
    for slot in cols.iter_mut().filter(|c| c.is_none()) {
        let best = (0..n)
            .filter_map(|k| project_out(DVector::from_fn(n, |r, _| if r == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }), &basis))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(u, _)| u)
            .expect("the standard basis spans the space");
        basis.push(best.clone());
        *slot = Some(best);
    }
    DMatrix::from_columns(&cols.into_iter().map(|c| c.expect("filled")).collect::<Vec<_>>())
}

/// Twice-projected unit vector and the fraction of norm that survived projection.
fn project_out(mut u: DVector<C64>, basis: &[DVector<C64>]) -> Option<(DVector<C64>, f64)> {
    let start = u.norm();
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let coeff = b.dotc(&u);
            u -= b * coeff;
        }
    }
    let left = u.norm();
    (left > 0.0).then(|| (u.unscale(left), left / start))
}
