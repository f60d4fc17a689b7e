//! Dense row-major Cholesky routines for the small SPD systems of the GP.

/// Lower Cholesky factor of the row-major SPD matrix `a` (only the lower
/// triangle is read). `None` if a pivot is not strictly positive.
pub(crate) fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
            let s = a[i * n + j] - dot(ri, rj);
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `L z = b` in place.
pub(crate) fn forward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let s = dot(&l[i * n..i * n + i], &b[..i]);
        b[i] = (b[i] - s) / l[i * n + i];
    }
}

/// Solves `Lᵀ z = b` in place.
pub(crate) fn backward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        b[i] /= l[i * n + i];
        let bi = b[i];
        for k in 0..i {
            b[k] -= l[i * n + k] * bi;
        }
    }
}

/// `(L Lᵀ)⁻¹ b`.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut z = b.to_vec();
    forward_solve(l, n, &mut z);
    backward_solve(l, n, &mut z);
    z
}

/// Upper triangle (row-major, lower triangle left zero) of `(L Lᵀ)⁻¹`.
pub(crate) fn cholesky_inverse_upper(l: &[f64], n: usize) -> Vec<f64> {
    // X = L⁻¹ row by row: X_i = (e_i − Σ_{k<i} L_ik X_k) / L_ii.
    let mut x = vec![0.0; n * n];
    for i in 0..n {
        let (done, rest) = x.split_at_mut(i * n);
        let row = &mut rest[..n];
        row[i] = 1.0;
        for k in 0..i {
            let lik = l[i * n + k];
            if lik != 0.0 {
                let xk = &done[k * n..k * n + k + 1];
                for (r, v) in row[..=k].iter_mut().zip(xk) {
                    *r -= lik * v;
                }
            }
        }
        let inv = 1.0 / l[i * n + i];
        for r in row[..=i].iter_mut() {
            *r *= inv;
        }
    }
    // K⁻¹ = Xᵀ X accumulated one row of X at a time.
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        let xk = &x[k * n..k * n + k + 1];
        for i in 0..=k {
            let a = xk[i];
            if a != 0.0 {
                for (o, b) in out[i * n + i..i * n + k + 1].iter_mut().zip(&xk[i..]) {
                    *o += a * b;
                }
            }
        }
    }
    out
}
