//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration with partial pivoting for eigenvectors,
//! Rayleigh-quotient polish. Fully deterministic: integer-seeded start
//! vectors, no thread-order dependence.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix; `offdiag.len() == diag.len() - 1`.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

/// One eigenpair; the vector has unit Euclidean norm and its largest-
/// magnitude component is positive (first such index on ties).
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Eigensolver("empty matrix".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Eigensolver(format!(
                "offdiag length {} does not match order {}",
                offdiag.len(),
                diag.len()
            )));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin bounds containing the whole spectrum.
    fn spectrum_bounds(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues below `x` (Sturm sequence pivot count). A
    /// vanishing pivot is clamped to -tiny before it is counted, so an
    /// exact hit on a leading-minor eigenvalue counts as "below" and the
    /// next division stays finite.
    pub fn sturm_count(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.order() {
            q = self.diag[i] - x - self.offdiag[i - 1] * self.offdiag[i - 1] / q;
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` lowest eigenvalues by bisection, ascending.
    pub fn eigenvalues_lowest(&self, k: usize) -> Result<Vec<f64>> {
        let n = self.order();
        if k == 0 || k > n {
            return Err(Error::Eigensolver(format!(
                "requested {k} eigenvalues of an order-{n} matrix"
            )));
        }
        let (lo0, hi0) = self.spectrum_bounds();
        let span = (hi0 - lo0).max(1.0);
        let tol = f64::EPSILON * span * 0.5;
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let mut lo = lo0;
            let mut hi = hi0;
            for _ in 0..120 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.sturm_count(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            values.push(0.5 * (lo + hi));
        }
        Ok(values)
    }

    /// The `k` lowest eigenpairs, ascending, with deterministic vectors.
    pub fn eigen_lowest(&self, k: usize) -> Result<Vec<EigenPair>> {
        let values = self.eigenvalues_lowest(k)?;
        let (lo0, hi0) = self.spectrum_bounds();
        let span = (hi0 - lo0).max(1.0);
        let cluster_tol = span * 1e-10;
        let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
        for (j, &value) in values.iter().enumerate() {
            let cluster: Vec<&[f64]> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| (values[*i] - value).abs() < cluster_tol)
                .map(|(_, p)| p.vector.as_slice())
                .collect();
            let mut vector = self.inverse_iteration(value, j, &cluster)?;
            let value = self.rayleigh_quotient(&vector);
            fix_sign(&mut vector);
            pairs.push(EigenPair { value, vector });
        }
        pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
        Ok(pairs)
    }

    /// Full spectrum with vectors (used for quadrature nodes and Fock
    /// propagators, where every mode matters).
    pub fn eigen_all(&self) -> Result<Vec<EigenPair>> {
        self.eigen_lowest(self.order())
    }

    fn rayleigh_quotient(&self, v: &[f64]) -> f64 {
        let n = self.order();
        let mut num = 0.0;
        for i in 0..n {
            let mut tv = self.diag[i] * v[i];
            if i > 0 {
                tv += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                tv += self.offdiag[i] * v[i + 1];
            }
            num += v[i] * tv;
        }
        num
    }

    fn inverse_iteration(&self, value: f64, index: usize, cluster: &[&[f64]]) -> Result<Vec<f64>> {
        let n = self.order();
        let mut v = seeded_start(n, index);
        normalize(&mut v);
        let mut converged = false;
        for _ in 0..6 {
            let mut w = self.solve_shifted(value, &v);
            for prev in cluster {
                let dot: f64 = w.iter().zip(prev.iter()).map(|(a, b)| a * b).sum();
                for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                    *wi -= dot * pi;
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::Eigensolver(
                    "inverse iteration produced a degenerate vector".into(),
                ));
            }
            for x in &mut w {
                *x /= norm;
            }
            // Residual of the normalized iterate is ||previous|| / norm.
            let residual = 1.0 / norm;
            v = w;
            if residual < 1e-10 * self.matrix_norm() {
                converged = true;
                break;
            }
        }
        if !converged {
            // A tight cluster can stall raw growth; the orthogonalized
            // vector is still valid if its Rayleigh residual is small.
            let rq = self.rayleigh_quotient(&v);
            let res = self.residual_norm(rq, &v);
            if res > 1e-8 * self.matrix_norm() {
                return Err(Error::Eigensolver(format!(
                    "inverse iteration did not converge for eigenvalue {value:e} \
                     (residual {res:e})"
                )));
            }
        }
        Ok(v)
    }

    fn matrix_norm(&self) -> f64 {
        let (lo, hi) = self.spectrum_bounds();
        lo.abs().max(hi.abs()).max(1.0)
    }

    fn residual_norm(&self, value: f64, v: &[f64]) -> f64 {
        let n = self.order();
        let mut sum = 0.0;
        for i in 0..n {
            let mut tv = (self.diag[i] - value) * v[i];
            if i > 0 {
                tv += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                tv += self.offdiag[i] * v[i + 1];
            }
            sum += tv * tv;
        }
        sum.sqrt()
    }

    /// Solve (T - value*I) x = b by tridiagonal LU with partial pivoting.
    /// Vanishing pivots are replaced by a tiny signed number; inverse
    /// iteration only needs the solve direction, not its scale.
    fn solve_shifted(&self, value: f64, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        let tiny = f64::EPSILON * self.matrix_norm();
        let guard = |p: f64| {
            if p.abs() < tiny {
                tiny.copysign(if p == 0.0 { 1.0 } else { p })
            } else {
                p
            }
        };
        // Row bands after pivoting: d main, u first super, u2 second super
        // (fill-in created by row swaps).
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - value).collect();
        let mut u = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        for i in 0..n - 1 {
            u[i] = self.offdiag[i];
        }
        for i in 0..n - 1 {
            let sub = self.offdiag[i];
            if d[i].abs() >= sub.abs() {
                d[i] = guard(d[i]);
                let m = sub / d[i];
                d[i + 1] -= m * u[i];
                u[i + 1] -= m * u2[i];
                rhs[i + 1] -= m * rhs[i];
            } else {
                // Swap rows i and i+1, then eliminate. Old row i is
                // (d_i, u_i, u2_i); old row i+1 is (sub, d_{i+1}, u_{i+1}).
                let m = d[i] / sub;
                let (old_u, old_u2) = (u[i], u2[i]);
                d[i] = sub;
                let new_u = d[i + 1];
                let new_u2 = u[i + 1];
                u[i] = new_u;
                u2[i] = new_u2;
                d[i + 1] = old_u - m * new_u;
                u[i + 1] = old_u2 - m * new_u2;
                u2[i + 1] = 0.0;
                let (ri, ri1) = (rhs[i], rhs[i + 1]);
                rhs[i] = ri1;
                rhs[i + 1] = ri - m * ri1;
            }
        }
        d[n - 1] = guard(d[n - 1]);
        // Back substitution over the three bands.
        let mut x = vec![0.0; n];
        x[n - 1] = rhs[n - 1] / d[n - 1];
        if n >= 2 {
            x[n - 2] = (rhs[n - 2] - u[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (rhs[i] - u[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i];
        }
        x
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut idx = 0usize;
    let mut best = 0.0f64;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Deterministic pseudo-random start vector (xorshift64*), seeded by the
/// eigenvalue index so clustered eigenvalues start from distinct vectors.
fn seeded_start(n: usize, index: usize) -> Vec<f64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ ((index as u64 + 1) << 32);
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let mantissa = (state >> 11) as f64 / (1u64 << 53) as f64;
        v.push(2.0 * mantissa - 1.0);
    }
    v
}
