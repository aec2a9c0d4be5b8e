//! Symmetric tridiagonal eigensolver.
//!
//! QL iteration with implicit shifts, eigenvectors accumulated from the
//! rotations (the classic tql2 scheme). Matrices here come from the Lamé
//! class recurrences and never exceed a few dozen rows, so robustness beats
//! cleverness.

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples rows i and i+1).
///
/// Returns eigenvalues in ascending order and, per eigenvalue, its
/// normalized eigenvector.
pub fn symmetric_tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
) -> Result<(Vec<f64>, Vec<Vec<f64>>), String> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1));
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }

    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // z is row-major; column j accumulates the j-th eigenvector.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible off-diagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(format!("QL failed to converge at row {l}"));
            }

            // Implicit shift from the trailing 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut broke_early = false;

            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying the eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..n).map(|i| z[i * n + j]).collect())
        .collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
        let n = diag.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut t = diag[i] * v[i];
            if i > 0 {
                t += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += off[i] * v[i + 1];
            }
            worst = worst.max((t - lambda * v[i]).abs());
        }
        worst
    }

    #[test]
    fn two_by_two_closed_form() {
        let diag = [1.0, 3.0];
        let off = [2.0];
        let (vals, vecs) = symmetric_tridiagonal_eigen(&diag, &off).unwrap();
        // Eigenvalues of [[1,2],[2,3]] are 2 ± sqrt(5).
        let exp_lo = 2.0 - 5.0f64.sqrt();
        let exp_hi = 2.0 + 5.0f64.sqrt();
        assert!((vals[0] - exp_lo).abs() < 1e-14);
        assert!((vals[1] - exp_hi).abs() < 1e-14);
        for (val, vec) in vals.iter().zip(&vecs) {
            assert!(residual(&diag, &off, *val, vec) < 1e-14);
        }
    }

    #[test]
    fn random_matrices_have_tiny_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 5, 13, 26] {
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let off: Vec<f64> = (0..n.saturating_sub(1))
                .map(|_| rng.gen_range(0.1..5.0))
                .collect();
            let (vals, vecs) = symmetric_tridiagonal_eigen(&diag, &off).unwrap();
            assert_eq!(vals.len(), n);
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
            let scale: f64 = diag.iter().chain(off.iter()).fold(1.0, |m, v| m.max(v.abs()));
            for (val, vec) in vals.iter().zip(&vecs) {
                assert!(residual(&diag, &off, *val, vec) < 1e-13 * scale);
            }
        }
    }
}
