use num_complex::Complex64;
use rayon::prelude::*;

use super::{EvolutionKind, EvolutionResult, SpectralChain, StepRecord, NORM_TOL};
use crate::chain::{Distribution, DEGENERACY_THRESHOLD};
use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// A normalised state vector in the vertex basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, NORM_TOL)
    }

    /// Accepts amplitudes whose squared norm is within `tol` of one.
    pub fn with_tolerance(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("empty state"));
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::domain("state has non-finite amplitudes"));
        }
        let s = Self { amplitudes };
        let norm = s.norm_sq();
        if (norm - 1.0).abs() > tol {
            return Err(Error::domain(format!("state has squared norm {norm}, not 1 (tol {tol:e})")));
        }
        Ok(s)
    }

    /// `|y>`.
    pub fn basis(size: usize, y: usize) -> Result<Self> {
        if y >= size {
            return Err(Error::domain(format!("vertex {y} outside window of size {size}")));
        }
        let mut a = vec![Complex64::new(0.0, 0.0); size];
        a[y] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: a })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect::<CompensatedSum>().value()
    }

    /// `|psi(x)|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `exp(-i E l)` from `cos`/`sin` of the product, `l` exact up to `2^53`.
fn phase(energy: f64, l: f64) -> Complex64 {
    let t = energy * l;
    Complex64::new(t.cos(), -t.sin())
}

/// `Psi(x, y; l) = sum_n exp(-i E(n) l) phi_n(x) phi_n(y)`.
pub fn quantum_amplitude(sys: &SpectralChain, x: usize, y: usize, l: u64) -> Result<Complex64> {
    sys.check_vertex(x)?;
    sys.check_vertex(y)?;
    let spec = sys.spectrum();
    let phi = &spec.eigenvectors;
    let lf = l as f64;
    Ok((0..spec.len()).fold(Complex64::new(0.0, 0.0), |acc, n| {
        acc + phase(spec.energies[n], lf) * (phi[(x, n)] * phi[(y, n)])
    }))
}

fn evolve(sys: &SpectralChain, psi0: &QuantumState, l: u64, sign: f64) -> Result<QuantumState> {
    let m = sys.size();
    if psi0.len() != m {
        return Err(Error::Dimension { expected: m, found: psi0.len() });
    }
    let spec = sys.spectrum();
    let phi = &spec.eigenvectors;
    let lf = l as f64;
    // <<n|psi0>> times the phase, ascending n then z.
    let weights: Vec<Complex64> = (0..m)
        .map(|n| {
            let overlap = (0..m).fold(Complex64::new(0.0, 0.0), |acc, z| acc + psi0.amplitudes[z] * phi[(z, n)]);
            phase(sign * spec.energies[n], lf) * overlap
        })
        .collect();
    let amplitudes = (0..m)
        .map(|x| (0..m).fold(Complex64::new(0.0, 0.0), |acc, n| acc + weights[n] * phi[(x, n)]))
        .collect();
    Ok(QuantumState { amplitudes })
}

/// `psi(l) = U^l psi0` with `U = exp(-i H)`.
pub fn quantum_evolve(sys: &SpectralChain, psi0: &QuantumState, l: u64) -> Result<QuantumState> {
    evolve(sys, psi0, l, 1.0)
}

/// `U^{-l} psi0`, the same sum with conjugated phases.
pub fn quantum_evolve_reverse(sys: &SpectralChain, psi0: &QuantumState, l: u64) -> Result<QuantumState> {
    evolve(sys, psi0, l, -1.0)
}

/// `|Psi(x, y; l)|^2` over all `x`.
pub fn measurement_distribution(sys: &SpectralChain, y: usize, l: u64) -> Result<Distribution> {
    sys.check_vertex(y)?;
    let m = sys.size();
    let psi = quantum_evolve(sys, &QuantumState::basis(m, y)?, l)?;
    Ok(Distribution::from_raw(psi.probabilities()))
}

/// Cesaro limit of `|Psi(x, y; l)|^2`: `sum_B (sum_{n in B} phi_n(x) phi_n(y))^2`
/// over blocks `B` of degenerate `kappa`. Without degeneracy this is
/// `sum_n phi_n(x)^2 phi_n(y)^2`.
pub fn long_time_average(sys: &SpectralChain, x: usize, y: usize) -> Result<f64> {
    sys.check_vertex(x)?;
    sys.check_vertex(y)?;
    let blocks = sys.spectrum().degenerate_blocks(DEGENERACY_THRESHOLD);
    Ok(block_average(sys, &blocks, x, y))
}

fn block_average(sys: &SpectralChain, blocks: &[Vec<usize>], x: usize, y: usize) -> f64 {
    let phi = &sys.spectrum().eigenvectors;
    blocks
        .iter()
        .map(|b| {
            let s: f64 = b.iter().map(|&n| phi[(x, n)] * phi[(y, n)]).sum();
            s * s
        })
        .collect::<CompensatedSum>()
        .value()
}

/// [`long_time_average`] for every `x` at fixed `y`.
pub fn long_time_average_column(sys: &SpectralChain, y: usize) -> Result<Vec<f64>> {
    sys.check_vertex(y)?;
    let blocks = sys.spectrum().degenerate_blocks(DEGENERACY_THRESHOLD);
    Ok((0..sys.size()).map(|x| block_average(sys, &blocks, x, y)).collect())
}

/// `(1/T) sum_{l=0}^{T} |Psi(x, y; l)|^2`: `T + 1` terms over `T`, as the
/// Cesaro mean is usually written; the extra term is `O(1/T)`.
pub fn empirical_average(sys: &SpectralChain, x: usize, y: usize, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::domain("averaging window T must be positive"));
    }
    let mut s = CompensatedSum::default();
    for l in 0..=t {
        s.add(quantum_amplitude(sys, x, y, l)?.norm_sqr());
    }
    Ok(s.value() / t as f64)
}

/// Smallest gap between distinct energy levels (blocks closer than the
/// degeneracy threshold count as one level). Cesaro averages converge at
/// rate `~ 1/(T gap)`.
pub fn smallest_phase_gap(sys: &SpectralChain) -> Option<f64> {
    let spec = sys.spectrum();
    let blocks = spec.degenerate_blocks(DEGENERACY_THRESHOLD);
    blocks
        .windows(2)
        .map(|w| (spec.kappa[*w[0].last().unwrap()] - spec.kappa[w[1][0]]).abs())
        .min_by(f64::total_cmp)
}

/// Measurement distributions `|psi_l|^2` for `l = 0..=steps`.
pub fn quantum_trajectory(sys: &SpectralChain, psi0: &QuantumState, steps: u64) -> Result<EvolutionResult> {
    let records = (0..=steps)
        .into_par_iter()
        .map(|l| quantum_evolve(sys, psi0, l).map(|psi| StepRecord { step: l, values: psi.probabilities() }))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvolutionResult {
        kind: EvolutionKind::Quantum,
        source: sys.source(),
        truncation_budget: sys.chain().window().truncation_budget(),
        records,
    })
}
