//! Exact overlap route: the beam Hamiltonians conditioned on the qubit
//! state, H_pm / (hbar omega_0) = (n + 1/2) +- (zeta / 4)(a + a')^2, are
//! diagonalized in a truncated Fock basis and the overlap is propagated
//! exactly, nu_0 = <beta| exp(i H_- tau) exp(-i H_+ tau) |beta> with
//! tau = theta / zeta. Unlike the closed form, this keeps the full
//! quadratic coupling (frequency pull plus squeezing), so the two routes
//! agree only as zeta -> 0, with deviation first order in zeta.
//!
//! The quadratic term conserves Fock parity, splitting each Hamiltonian
//! into two symmetric tridiagonal chains.

use super::{OverlapInputs, OverlapMethod};
use crate::error::{Error, Result};
use crate::gauss::laguerre;
use crate::tridiag::SymTridiag;
use num_complex::Complex64;
use rayon::prelude::*;

/// Initial-state weight allowed in the top two Fock levels.
const TAIL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FockExact {
    /// Starting Fock-space truncation; grown in powers of two as needed.
    pub initial_truncation: usize,
    /// Hard ceiling on the truncation.
    pub truncation_cap: usize,
    /// Radial nodes of the thermal average (Gauss-Laguerre).
    pub radial_nodes: usize,
    /// Angular nodes of the thermal average (uniform, exact for
    /// trigonometric polynomials below that order).
    pub angular_nodes: usize,
}

impl Default for FockExact {
    fn default() -> Self {
        FockExact {
            initial_truncation: 64,
            truncation_cap: 1024,
            radial_nodes: 31,
            angular_nodes: 32,
        }
    }
}

/// One parity chain of both conditioned Hamiltonians, pre-diagonalized.
struct ParityEngine {
    /// Fock index of each chain slot.
    indices: Vec<usize>,
    lam_plus: Vec<f64>,
    lam_minus: Vec<f64>,
    /// Eigenvectors as rows, `vec[j][k]` = component k of eigenvector j.
    vec_plus: Vec<Vec<f64>>,
    vec_minus: Vec<Vec<f64>>,
    /// mix[j * m + k] = <v_minus_j | v_plus_k>.
    mix: Vec<f64>,
}

struct Engine {
    truncation: usize,
    blocks: Vec<ParityEngine>,
}

fn parity_chain(parity: usize, truncation: usize, zeta: f64, sign: f64) -> Result<SymTridiag> {
    let indices: Vec<usize> = (parity..truncation).step_by(2).collect();
    let g = sign * zeta / 4.0;
    let diag = indices
        .iter()
        .map(|&n| (n as f64 + 0.5) + g * (2.0 * n as f64 + 1.0))
        .collect();
    let offdiag = indices
        .iter()
        .take(indices.len() - 1)
        .map(|&n| g * (((n + 1) * (n + 2)) as f64).sqrt())
        .collect();
    SymTridiag::new(diag, offdiag)
}

fn build_engine(zeta: f64, truncation: usize) -> Result<Engine> {
    let mut blocks = Vec::with_capacity(2);
    for parity in 0..2 {
        let indices: Vec<usize> = (parity..truncation).step_by(2).collect();
        let m = indices.len();
        let plus = parity_chain(parity, truncation, zeta, 1.0)?.eigen_all()?;
        let minus = parity_chain(parity, truncation, zeta, -1.0)?.eigen_all()?;
        let lam_plus: Vec<f64> = plus.iter().map(|p| p.value).collect();
        let lam_minus: Vec<f64> = minus.iter().map(|p| p.value).collect();
        let vec_plus: Vec<Vec<f64>> = plus.into_iter().map(|p| p.vector).collect();
        let vec_minus: Vec<Vec<f64>> = minus.into_iter().map(|p| p.vector).collect();
        let mut mix = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                mix[j * m + k] = vec_minus[j]
                    .iter()
                    .zip(vec_plus[k].iter())
                    .map(|(a, b)| a * b)
                    .sum();
            }
        }
        blocks.push(ParityEngine {
            indices,
            lam_plus,
            lam_minus,
            vec_plus,
            vec_minus,
            mix,
        });
    }
    Ok(Engine {
        truncation,
        blocks,
    })
}

/// Fock amplitudes of |beta>, c_n = exp(-|beta|^2/2) beta^n / sqrt(n!).
fn coherent_amplitudes(beta: Complex64, truncation: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(truncation);
    let mut current = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    c.push(current);
    for n in 1..truncation {
        current = current * beta / (n as f64).sqrt();
        c.push(current);
    }
    c
}

fn tail_weight(beta_norm: f64, truncation: usize) -> f64 {
    let c = coherent_amplitudes(Complex64::new(beta_norm, 0.0), truncation);
    c[truncation - 2].norm_sqr() + c[truncation - 1].norm_sqr()
}

impl Engine {
    /// Overlap of one coherent state at each scaled time tau.
    fn nu_for_beta(&self, beta: Complex64, taus: &[f64]) -> Vec<Complex64> {
        let c = coherent_amplitudes(beta, self.truncation);
        let mut out = vec![Complex64::new(0.0, 0.0); taus.len()];
        for block in &self.blocks {
            let m = block.indices.len();
            let cp: Vec<Complex64> = block.indices.iter().map(|&n| c[n]).collect();
            let project = |vectors: &[Vec<f64>]| -> Vec<Complex64> {
                vectors
                    .iter()
                    .map(|v| {
                        v.iter()
                            .zip(cp.iter())
                            .map(|(&vi, &ci)| vi * ci)
                            .sum::<Complex64>()
                    })
                    .collect()
            };
            let a = project(&block.vec_plus);
            let b = project(&block.vec_minus);
            for (ti, &tau) in taus.iter().enumerate() {
                let phased_a: Vec<Complex64> = a
                    .iter()
                    .zip(block.lam_plus.iter())
                    .map(|(&ak, &lam)| ak * Complex64::from_polar(1.0, -lam * tau))
                    .collect();
                let mut nu = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    let mut g = Complex64::new(0.0, 0.0);
                    let row = &block.mix[j * m..(j + 1) * m];
                    for (mk, &pa) in row.iter().zip(phased_a.iter()) {
                        g += mk * pa;
                    }
                    nu += b[j].conj() * Complex64::from_polar(1.0, block.lam_minus[j] * tau) * g;
                }
                out[ti] += nu;
            }
        }
        out
    }
}

impl FockExact {
    fn choose_truncation(&self, beta_max: f64) -> Result<usize> {
        // Poisson-tail estimate of the size that suffices; checked before
        // tail_weight so exp(-|beta|^2/2) cannot underflow to a false pass.
        let mean = beta_max * beta_max;
        let required = (mean + 12.0 * mean.sqrt() + 16.0).ceil() as usize;
        if required > self.truncation_cap {
            return Err(Error::TruncationCap {
                required,
                cap: self.truncation_cap,
            });
        }
        let mut truncation = self.initial_truncation.max(16);
        loop {
            if tail_weight(beta_max, truncation) <= TAIL_BOUND {
                return Ok(truncation);
            }
            if truncation >= self.truncation_cap {
                return Err(Error::TruncationCap {
                    required,
                    cap: self.truncation_cap,
                });
            }
            truncation = (truncation * 2).min(self.truncation_cap);
        }
    }

    /// Thermal sampling nodes (beta, weight); a single unit-weight node at
    /// alpha_0 when the occupation vanishes.
    fn thermal_nodes(&self, inputs: &OverlapInputs) -> Result<Vec<(Complex64, f64)>> {
        if inputs.n_thermal == 0.0 {
            return Ok(vec![(Complex64::new(inputs.alpha0, 0.0), 1.0)]);
        }
        let radial = laguerre(self.radial_nodes)?;
        let mut nodes = Vec::with_capacity(self.radial_nodes * self.angular_nodes);
        let angular_weight = 1.0 / self.angular_nodes as f64;
        for (&u, &wu) in radial.nodes.iter().zip(radial.weights.iter()) {
            let r = (inputs.n_thermal * u).sqrt();
            for j in 0..self.angular_nodes {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / self.angular_nodes as f64;
                let beta = Complex64::new(
                    inputs.alpha0 + r * phi.cos(),
                    r * phi.sin(),
                );
                nodes.push((beta, wu * angular_weight));
            }
        }
        Ok(nodes)
    }
}

impl OverlapMethod for FockExact {
    fn name(&self) -> &'static str {
        "fock-exact"
    }

    fn evaluate(&self, inputs: &OverlapInputs, theta: f64) -> Result<Complex64> {
        Ok(self.evaluate_many(inputs, &[theta])?[0])
    }

    fn evaluate_many(&self, inputs: &OverlapInputs, thetas: &[f64]) -> Result<Vec<Complex64>> {
        inputs.validate()?;
        let nodes = self.thermal_nodes(inputs)?;
        let beta_max = nodes
            .iter()
            .fold(0.0f64, |acc, (beta, _)| acc.max(beta.norm()));
        let truncation = self.choose_truncation(beta_max)?;
        let engine = build_engine(inputs.zeta, truncation)?;
        let taus: Vec<f64> = thetas.iter().map(|&t| t / inputs.zeta).collect();
        let per_node: Vec<Vec<Complex64>> = nodes
            .par_iter()
            .map(|(beta, _)| engine.nu_for_beta(*beta, &taus))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); thetas.len()];
        for ((_, weight), series) in nodes.iter().zip(per_node.iter()) {
            for (acc, &value) in out.iter_mut().zip(series.iter()) {
                *acc += *weight * value;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::ClosedForm;
    use std::f64::consts::PI;

    fn closed(inputs: &OverlapInputs, theta: f64) -> Complex64 {
        ClosedForm.evaluate(inputs, theta).unwrap()
    }

    #[test]
    fn starts_at_unity_within_truncation() {
        let inputs = OverlapInputs {
            alpha0: 1.5,
            n_thermal: 0.0,
            zeta: 0.05,
        };
        let nu = FockExact::default().evaluate(&inputs, 0.0).unwrap();
        assert!((nu - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn small_pull_matches_closed_form() {
        let inputs = OverlapInputs {
            alpha0: 0.5,
            n_thermal: 0.0,
            zeta: 0.01,
        };
        let method = FockExact::default();
        let thetas = [0.5, PI, 5.0];
        let got = method.evaluate_many(&inputs, &thetas).unwrap();
        for (&theta, &nu) in thetas.iter().zip(got.iter()) {
            let reference = closed(&inputs, theta);
            assert!(
                (nu - reference).norm() < 0.01,
                "theta {theta}: {nu} vs {reference}"
            );
        }
        let revival = method.evaluate(&inputs, 2.0 * PI).unwrap();
        assert!(revival.norm() > 0.98);
    }

    #[test]
    fn deviation_from_closed_form_is_first_order_in_zeta() {
        // Fixed laboratory time grid; the pulled phase scales with zeta.
        let taus: Vec<f64> = (0..80).map(|i| 20.0 * PI * i as f64 / 79.0).collect();
        let zetas = [0.1, 0.05, 0.025];
        let mut deviations = Vec::new();
        for &zeta in &zetas {
            let inputs = OverlapInputs {
                alpha0: 1.5,
                n_thermal: 0.0,
                zeta,
            };
            let thetas: Vec<f64> = taus.iter().map(|&t| zeta * t).collect();
            let got = FockExact::default().evaluate_many(&inputs, &thetas).unwrap();
            let dev = thetas
                .iter()
                .zip(got.iter())
                .map(|(&theta, &nu)| (nu - closed(&inputs, theta)).norm())
                .fold(0.0f64, f64::max);
            deviations.push(dev);
        }
        assert!(deviations[0] > deviations[1] && deviations[1] > deviations[2]);
        for pair in deviations.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (1.5..=2.5).contains(&ratio),
                "halving zeta scaled the deviation by {ratio}"
            );
        }
    }

    #[test]
    fn thermal_average_tracks_closed_form() {
        let inputs = OverlapInputs {
            alpha0: 0.3,
            n_thermal: 0.5,
            zeta: 0.02,
        };
        let method = FockExact::default();
        for &theta in &[1.0, 2.0] {
            let nu = method.evaluate(&inputs, theta).unwrap();
            let reference = closed(&inputs, theta);
            assert!(
                (nu - reference).norm() < 0.02,
                "theta {theta}: {nu} vs {reference}"
            );
        }
    }

    #[test]
    fn thermal_nodes_match_monte_carlo() {
        // Independent check of the radial-angular thermal weighting:
        // average the same per-state overlap over a seeded Gaussian cloud.
        use rand::{Rng, SeedableRng};
        let inputs = OverlapInputs {
            alpha0: 0.3,
            n_thermal: 0.8,
            zeta: 0.05,
        };
        let theta = 2.0;
        let method = FockExact::default();
        let deterministic = method.evaluate(&inputs, theta).unwrap();

        let truncation = 64;
        let engine = build_engine(inputs.zeta, truncation).unwrap();
        let taus = [theta / inputs.zeta];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sigma = (inputs.n_thermal / 2.0).sqrt();
        let samples = 20_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..samples {
            // Box-Muller pair for the symmetric Gaussian cloud.
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let r = (-2.0 * u1.ln()).sqrt();
            let beta = Complex64::new(
                inputs.alpha0 + sigma * r * (2.0 * PI * u2).cos(),
                sigma * r * (2.0 * PI * u2).sin(),
            );
            acc += engine.nu_for_beta(beta, &taus)[0];
        }
        let mc = acc / samples as f64;
        assert!(
            (mc - deterministic).norm() < 0.015,
            "monte carlo {mc} vs quadrature {deterministic}"
        );
    }

    #[test]
    fn truncation_grows_then_caps() {
        let method = FockExact::default();
        // Moderate displacement forces growth beyond the initial size.
        let grown = method.choose_truncation(9.0).unwrap();
        assert!(grown > method.initial_truncation);
        // A very hot state cannot fit below the cap.
        let inputs = OverlapInputs {
            alpha0: 0.0,
            n_thermal: 600.0,
            zeta: 0.05,
        };
        match method.evaluate(&inputs, 1.0) {
            Err(Error::TruncationCap { required, cap }) => {
                assert!(required > cap);
            }
            other => panic!("expected TruncationCap, got {other:?}"),
        }
    }

    #[test]
    fn coherent_amplitudes_are_normalized() {
        let c = coherent_amplitudes(Complex64::new(2.0, -1.0), 64);
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
