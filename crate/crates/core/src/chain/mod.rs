//! Reversible Markov chains, their symmetrisation and the Hamiltonian.
//!
//! Conventions: `K(x, y)` is the probability of the transition `y -> x`, so
//! columns of `K` sum to one and distributions evolve as `p' = K p`.

mod eigen;
mod graph;
mod spectral;

pub use graph::{simple_random_walk, Graph};
pub use spectral::{
    eigendecompose, hamiltonian, spectral_reconstruct_k, symmetrize, SpectralData, SpectralSource,
    DEGENERACY_THRESHOLD,
};

use nalgebra::DMatrix;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// Default tolerance for stochasticity and detailed balance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Tolerance on `sum = 1` for a [`Distribution`].
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// A probability vector over the vertex window.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(values, DISTRIBUTION_TOL)
    }

    /// Accepts `values` whose sum is within `tol` of one.
    pub fn with_tolerance(values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("empty distribution"));
        }
        if let Some((x, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::domain(format!("distribution entry {x} = {v} is not a probability")));
        }
        let total = values.iter().copied().collect::<CompensatedSum>().value();
        if (total - 1.0).abs() > tol {
            return Err(Error::domain(format!("distribution sums to {total}, not 1 (tol {tol:e})")));
        }
        Ok(Self(values))
    }

    /// Point mass at `y`.
    pub fn delta(size: usize, y: usize) -> Result<Self> {
        if y >= size {
            return Err(Error::domain(format!("vertex {y} outside window of size {size}")));
        }
        let mut v = vec![0.0; size];
        v[y] = 1.0;
        Ok(Self(v))
    }

    pub fn uniform(size: usize) -> Self {
        Self(vec![1.0 / size as f64; size])
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().copied().collect::<CompensatedSum>().value()
    }

    /// Half the l1 distance.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        0.5 * self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).collect::<CompensatedSum>().value()
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Which part of the vertex set a chain is represented on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowKind {
    /// `V = {0, ..., N}`.
    Finite { n: usize },
    /// A prefix `{0, ..., M-1}` of `Z>=0`; `discarded_mass` is the
    /// reversible-measure mass beyond the window.
    Truncated { eps_tail: f64, discarded_mass: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexWindow {
    size: usize,
    kind: WindowKind,
}

impl VertexWindow {
    pub fn finite(n: usize) -> Self {
        Self { size: n + 1, kind: WindowKind::Finite { n } }
    }

    pub fn truncated(size: usize, eps_tail: f64, discarded_mass: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("empty truncation window"));
        }
        if discarded_mass >= eps_tail {
            return Err(Error::domain(format!(
                "discarded tail mass {discarded_mass:e} not below eps_tail {eps_tail:e}"
            )));
        }
        Ok(Self { size, kind: WindowKind::Truncated { eps_tail, discarded_mass } })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.kind, WindowKind::Truncated { .. })
    }

    /// Budget added to every tolerance: `10 eps_tail` for truncated windows.
    pub fn truncation_budget(&self) -> f64 {
        match self.kind {
            WindowKind::Finite { .. } => 0.0,
            WindowKind::Truncated { eps_tail, .. } => 10.0 * eps_tail,
        }
    }

    /// `max(tol, 10 eps_tail)`.
    pub fn tolerance(&self, tol: f64) -> f64 {
        tol.max(self.truncation_budget())
    }

    /// The last vertex: `N` for finite windows, `M - 1` otherwise.
    pub fn edge(&self) -> usize {
        self.size - 1
    }
}

/// A reversible Markov chain on a vertex window.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    window: VertexWindow,
    kernel: DMatrix<f64>,
    pi: Distribution,
    column_defect: f64,
}

impl MarkovChain {
    /// Assembles a chain after shape and positivity checks. Stochasticity and
    /// detailed balance are left to [`validate_chain`].
    pub fn new(window: VertexWindow, kernel: DMatrix<f64>, pi: Distribution) -> Result<Self> {
        let m = window.size();
        if kernel.nrows() != m || kernel.ncols() != m {
            return Err(Error::Dimension { expected: m, found: kernel.nrows().max(kernel.ncols()) });
        }
        if pi.len() != m {
            return Err(Error::Dimension { expected: m, found: pi.len() });
        }
        if let Some(x) = pi.values().iter().position(|&p| p <= 0.0) {
            return Err(Error::domain(format!("pi({x}) = {} is not positive", pi[x])));
        }
        if kernel.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("kernel has non-finite entries"));
        }
        let column_defect = column_sum_defects(&kernel).into_iter().fold(0.0, f64::max);
        Ok(Self { window, kernel, pi, column_defect })
    }

    /// Builds a chain on `{0..M-1}` and checks it at `tol`.
    pub fn from_matrix(kernel: DMatrix<f64>, pi: Vec<f64>, tol: f64) -> Result<Self> {
        let m = kernel.nrows();
        if m == 0 {
            return Err(Error::domain("empty kernel"));
        }
        let report = validate_chain(&kernel, &pi, tol)?;
        if !report.passes() {
            return Err(Error::domain(format!("chain fails validation: {report}")));
        }
        let pi = Distribution::with_tolerance(pi, tol.max(DISTRIBUTION_TOL))?;
        Self::new(VertexWindow::finite(m - 1), kernel, pi)
    }

    pub fn window(&self) -> &VertexWindow {
        &self.window
    }

    pub fn size(&self) -> usize {
        self.window.size()
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    pub fn pi(&self) -> &Distribution {
        &self.pi
    }

    pub fn column_defect(&self) -> f64 {
        self.column_defect
    }

    /// `sqrt(pi(x))`, the ground state of the Hamiltonian.
    pub fn sqrt_pi(&self) -> Vec<f64> {
        self.pi.values().iter().map(|p| p.sqrt()).collect()
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate_chain(&self.kernel, self.pi.values(), self.window.tolerance(tol))
            .expect("shapes checked at construction")
    }
}

fn column_sum_defects(k: &DMatrix<f64>) -> Vec<f64> {
    (0..k.ncols())
        .map(|y| (1.0 - k.column(y).iter().copied().collect::<CompensatedSum>().value()).abs())
        .collect()
}

/// Defects measured by [`validate_chain`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    /// `max(0, -min K(x, y))`.
    pub max_negativity: f64,
    /// `max_y |1 - sum_x K(x, y)|`.
    pub max_column_defect: f64,
    /// `max_{x,y} |K(x,y) pi(y) - K(y,x) pi(x)|`.
    pub max_reversibility_defect: f64,
    /// `|1 - sum pi|`.
    pub pi_defect: f64,
    /// Probability, under `pi`, of leaving the window in one step:
    /// `sum_y pi(y) (1 - sum_x K(x, y))`. Informational.
    pub weighted_leak: f64,
    pub connected: bool,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.connected
            && self.max_negativity <= self.tolerance
            && self.max_column_defect <= self.tolerance
            && self.max_reversibility_defect <= self.tolerance
            && self.pi_defect <= self.tolerance.max(DISTRIBUTION_TOL)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "negativity={:.3e} column_defect={:.3e} reversibility_defect={:.3e} pi_defect={:.3e} \
             weighted_leak={:.3e} connected={} tol={:.1e} => {}",
            self.max_negativity,
            self.max_column_defect,
            self.max_reversibility_defect,
            self.pi_defect,
            self.weighted_leak,
            self.connected,
            self.tolerance,
            if self.passes() { "PASS" } else { "FAIL" }
        )
    }
}

/// Measures nonnegativity, stochasticity, detailed balance and connectivity.
pub fn validate_chain(k: &DMatrix<f64>, pi: &[f64], tol: f64) -> Result<ValidationReport> {
    let m = k.nrows();
    if k.ncols() != m {
        return Err(Error::Dimension { expected: m, found: k.ncols() });
    }
    if pi.len() != m {
        return Err(Error::Dimension { expected: m, found: pi.len() });
    }
    let max_negativity = k.iter().fold(0.0f64, |acc, &v| acc.max(-v));
    let defects = column_sum_defects(k);
    let max_column_defect = defects.iter().copied().fold(0.0, f64::max);
    let weighted_leak = (0..m)
        .map(|y| pi[y] * (1.0 - k.column(y).iter().copied().collect::<CompensatedSum>().value()))
        .collect::<CompensatedSum>()
        .value();
    let mut max_reversibility_defect = 0.0f64;
    for x in 0..m {
        for y in (x + 1)..m {
            let d = (k[(x, y)] * pi[y] - k[(y, x)] * pi[x]).abs();
            max_reversibility_defect = max_reversibility_defect.max(d);
        }
    }
    let pi_defect = (1.0 - pi.iter().copied().collect::<CompensatedSum>().value()).abs()
        + pi.iter().fold(0.0f64, |acc, &p| acc.max(-p));
    Ok(ValidationReport {
        max_negativity,
        max_column_defect,
        max_reversibility_defect,
        pi_defect,
        weighted_leak,
        connected: strongly_connected(k),
        tolerance: tol,
    })
}

/// Breadth-first reachability from vertex 0 along the support of `K`, both
/// forwards and backwards.
fn strongly_connected(k: &DMatrix<f64>) -> bool {
    let m = k.nrows();
    if m == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(y) = queue.pop_front() {
            for x in 0..m {
                let w = if forward { k[(x, y)] } else { k[(y, x)] };
                if w > 0.0 && !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}
