use rayon::prelude::*;

use super::{pow_u64, EvolutionKind, EvolutionResult, SpectralChain, StepRecord};
use crate::chain::{Distribution, MarkovChain};
use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// `P'(x) = sum_y K(x, y) P(y)`.
pub fn classical_step(chain: &MarkovChain, p: &Distribution) -> Result<Distribution> {
    let m = chain.size();
    if p.len() != m {
        return Err(Error::Dimension { expected: m, found: p.len() });
    }
    let k = chain.kernel();
    let next = (0..m)
        .map(|x| (0..m).map(|y| k[(x, y)] * p[y]).collect::<CompensatedSum>().value())
        .collect();
    Ok(Distribution::from_raw(next))
}

/// `c_n = sum_x phi_n(x) P(x; 0) / phi_0(x)` with `phi_0 = sqrt(pi)`.
pub fn expansion_coefficients(sys: &SpectralChain, p0: &Distribution) -> Result<Vec<f64>> {
    let m = sys.size();
    if p0.len() != m {
        return Err(Error::Dimension { expected: m, found: p0.len() });
    }
    let sqrt_pi = sys.chain().sqrt_pi();
    if let Some(x) = (0..m).find(|&x| p0[x] != 0.0 && !(sqrt_pi[x] > 0.0)) {
        return Err(Error::domain(format!("initial distribution charges vertex {x} where pi = 0")));
    }
    let phi = &sys.spectrum().eigenvectors;
    Ok((0..m)
        .map(|n| {
            (0..m)
                .map(|x| phi[(x, n)] * p0[x] / sqrt_pi[x])
                .collect::<CompensatedSum>()
                .value()
        })
        .collect())
}

fn evolve_from_coefficients(sys: &SpectralChain, c: &[f64], sqrt_pi: &[f64], l: u64) -> Vec<f64> {
    let spec = sys.spectrum();
    let m = sys.size();
    let weights: Vec<f64> = (0..m).map(|n| c[n] * pow_u64(spec.kappa[n], l)).collect();
    (0..m)
        .map(|x| {
            let s = (0..m)
                .map(|n| weights[n] * spec.eigenvectors[(x, n)])
                .collect::<CompensatedSum>()
                .value();
            sqrt_pi[x] * s
        })
        .collect()
}

/// `P(x; l) = phi_0(x) sum_n c_n kappa(n)^l phi_n(x)`.
pub fn classical_evolve_spectral(sys: &SpectralChain, p0: &Distribution, l: u64) -> Result<Distribution> {
    let c = expansion_coefficients(sys, p0)?;
    Ok(Distribution::from_raw(evolve_from_coefficients(sys, &c, &sys.chain().sqrt_pi(), l)))
}

/// `(K^l)(x, y) = phi_0(x)/phi_0(y) sum_n kappa(n)^l phi_n(x) phi_n(y)`.
pub fn transition_probability(sys: &SpectralChain, x: usize, y: usize, l: u64) -> Result<f64> {
    sys.check_vertex(x)?;
    sys.check_vertex(y)?;
    let spec = sys.spectrum();
    let phi = &spec.eigenvectors;
    let s = (0..spec.len())
        .map(|n| pow_u64(spec.kappa[n], l) * phi[(x, n)] * phi[(y, n)])
        .collect::<CompensatedSum>()
        .value();
    let pi = sys.chain().pi();
    Ok((pi[x] / pi[y]).sqrt() * s)
}

/// Distributions `P(.; l)` for `l = 0..=steps`.
pub fn classical_trajectory(sys: &SpectralChain, p0: &Distribution, steps: u64) -> Result<EvolutionResult> {
    let c = expansion_coefficients(sys, p0)?;
    let sqrt_pi = sys.chain().sqrt_pi();
    let records = (0..=steps)
        .into_par_iter()
        .map(|l| StepRecord { step: l, values: evolve_from_coefficients(sys, &c, &sqrt_pi, l) })
        .collect();
    Ok(EvolutionResult {
        kind: EvolutionKind::Classical,
        source: sys.source(),
        truncation_budget: sys.chain().window().truncation_budget(),
        records,
    })
}

/// `||P(.; l) - pi||_1 <= constant * rate^l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceBound {
    /// `sum_{n>=1} |c_n| sum_x phi_0(x) |phi_n(x)|`.
    pub constant: f64,
    /// `max_{n>=1} |kappa(n)|`.
    pub rate: f64,
}

impl ConvergenceBound {
    pub fn at(&self, l: u64) -> f64 {
        self.constant * pow_u64(self.rate, l)
    }
}

/// Spectral bound on the l1 distance to `pi`. Mode 0 must be the ground
/// state, which holds for both analytic and numerical eigen-data.
pub fn convergence_bound(sys: &SpectralChain, p0: &Distribution) -> Result<ConvergenceBound> {
    let c = expansion_coefficients(sys, p0)?;
    let spec = sys.spectrum();
    let sqrt_pi = sys.chain().sqrt_pi();
    let m = sys.size();
    let ground = spec.order_by_kappa()[0];
    let mut constant = 0.0;
    let mut rate = 0.0f64;
    for n in (0..m).filter(|&n| n != ground) {
        let spread: f64 = (0..m).map(|x| sqrt_pi[x] * spec.eigenvectors[(x, n)].abs()).sum();
        constant += c[n].abs() * spread;
        rate = rate.max(spec.kappa[n].abs());
    }
    Ok(ConvergenceBound { constant, rate })
}
