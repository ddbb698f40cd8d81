//! Classical and quantum time evolution driven by one set of eigen-data.
//!
//! Classical: `P(x; l) = phi_0(x) sum_n c_n kappa(n)^l phi_n(x)`.
//! Quantum: `Psi(x, y; l) = sum_n exp(-i E(n) l) phi_n(x) phi_n(y)`.
//!
//! Sums run over ascending `n`, then ascending vertex `z`, so results are
//! bitwise reproducible.

mod classical;
mod quantum;

pub use classical::{
    classical_evolve_spectral, classical_step, classical_trajectory, convergence_bound,
    expansion_coefficients, transition_probability, ConvergenceBound,
};
pub use quantum::{
    empirical_average, long_time_average, long_time_average_column, measurement_distribution,
    quantum_amplitude, quantum_evolve, quantum_evolve_reverse, quantum_trajectory,
    smallest_phase_gap, QuantumState,
};

use crate::chain::{eigendecompose, hamiltonian, MarkovChain, SpectralData, SpectralSource};
use crate::error::{Error, Result};
use crate::families::{build, FamilySpec};

/// Default agreement tolerance between spectral and direct evolution.
pub const EVOLUTION_TOL: f64 = 1e-9;

/// Default normalisation tolerance for quantum states.
pub const NORM_TOL: f64 = 1e-10;

/// A chain paired with a complete orthonormal eigenbasis of its Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralChain {
    chain: MarkovChain,
    spectrum: SpectralData,
}

impl SpectralChain {
    pub fn new(chain: MarkovChain, spectrum: SpectralData) -> Result<Self> {
        if spectrum.dim() != chain.size() {
            return Err(Error::Dimension { expected: chain.size(), found: spectrum.dim() });
        }
        if !spectrum.is_complete() {
            return Err(Error::domain(format!(
                "evolution needs a complete eigenbasis ({} modes for {} vertices)",
                spectrum.len(),
                spectrum.dim()
            )));
        }
        Ok(Self { chain, spectrum })
    }

    /// Diagonalises the chain's Hamiltonian numerically.
    pub fn numerical(chain: MarkovChain) -> Result<Self> {
        let spectrum = eigendecompose(&hamiltonian(&chain)?)?;
        Self::new(chain, spectrum)
    }

    /// Closed-form eigen-data for finite families. Truncated windows only
    /// resolve the lowest modes analytically, so their evolution uses the
    /// numerical eigenbasis of the windowed chain.
    pub fn from_family(spec: &FamilySpec) -> Result<Self> {
        let sys = build(spec)?;
        if sys.is_truncated() {
            Self::numerical(sys.chain)
        } else {
            Self::new(sys.chain, sys.spectrum)
        }
    }

    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    pub fn spectrum(&self) -> &SpectralData {
        &self.spectrum
    }

    pub fn size(&self) -> usize {
        self.chain.size()
    }

    pub fn source(&self) -> SpectralSource {
        self.spectrum.source
    }

    /// `max(tol, 10 eps_tail)`.
    pub fn tolerance(&self, tol: f64) -> f64 {
        self.chain.window().tolerance(tol)
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.size() {
            Err(Error::domain(format!("vertex {x} outside window of size {}", self.size())))
        } else {
            Ok(())
        }
    }
}

/// Which evolution produced an [`EvolutionResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionKind {
    Classical,
    Quantum,
}

impl EvolutionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvolutionKind::Classical => "classical",
            EvolutionKind::Quantum => "quantum",
        }
    }
}

/// `P(.; l)` or `|psi_l|^2` at one step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: u64,
    pub values: Vec<f64>,
}

impl StepRecord {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub kind: EvolutionKind,
    pub source: SpectralSource,
    pub truncation_budget: f64,
    pub records: Vec<StepRecord>,
}

impl EvolutionResult {
    /// Largest `|1 - sum_x values|` over the records.
    pub fn max_normalisation_defect(&self) -> f64 {
        self.records.iter().map(|r| (1.0 - r.total()).abs()).fold(0.0, f64::max)
    }
}

/// `k^l` by binary exponentiation.
pub(crate) fn pow_u64(k: f64, mut l: u64) -> f64 {
    let mut base = k;
    let mut acc = 1.0;
    while l > 0 {
        if l & 1 == 1 {
            acc *= base;
        }
        base *= base;
        l >>= 1;
    }
    acc
}
