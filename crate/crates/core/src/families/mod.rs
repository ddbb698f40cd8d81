//! Exactly solvable reversible chains built by convolving orthogonality
//! measures of Askey-scheme polynomials.
//!
//! Each family implements [`SolvableChain`]: it knows its transition kernel,
//! its reversible distribution, and closed forms for the eigenvalues
//! `kappa(n)`, the polynomial eigenvectors `P_n(x)` (normalised by
//! `P_n(0) = 1`) and the normalisation constants `d_n^2`. [`build`] turns that
//! into a [`MarkovChain`] plus analytic [`SpectralData`] with
//! `phi_hat_n(x) = sqrt(pi(x)) d_n P_n(x)`.
//!
//! Adding a family means adding one more [`SolvableChain`] implementor and a
//! [`FamilySpec`] variant.

mod charlier;
mod hahn;
mod krawtchouk;
pub mod measures;
mod meixner;
mod q_hahn;

pub use charlier::{charlier_norm_sq, charlier_polynomial, Charlier};
pub use hahn::{hahn_norm_sq, hahn_polynomial, Hahn};
pub use krawtchouk::{krawtchouk_norm_sq, krawtchouk_polynomial, Krawtchouk};
pub use meixner::{meixner_norm_sq, meixner_polynomial, Meixner};
pub use q_hahn::{q_hahn_norm_sq, q_hahn_polynomial, QHahn};

use nalgebra::DMatrix;

use crate::chain::{
    hamiltonian, Distribution, MarkovChain, SpectralData, SpectralSource, VertexWindow,
};
use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// Largest window a semi-infinite family may be truncated to.
pub const MAX_WINDOW: usize = 4096;

/// Out-of-window l2 norm below which an analytic mode counts as resolved on
/// a truncated window.
pub const RESOLUTION_TOL: f64 = 1e-9;

/// Vertex set of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    /// `{0, ..., N}`.
    Finite(usize),
    /// `Z>=0`, represented on a window discarding less than `eps_tail`.
    SemiInfinite { eps_tail: f64 },
}

/// Closed-form data of an exactly solvable reversible chain.
///
/// Vertex and mode arguments are assumed in range; [`FamilySpec`] checks them.
pub trait SolvableChain {
    fn name(&self) -> &'static str;

    fn extent(&self) -> Extent;

    /// Checks the parameter ranges, naming the violated one.
    fn validate(&self) -> Result<()>;

    /// Reversible distribution (the measure at composed parameters).
    fn reversible_measure(&self, x: usize) -> f64;

    /// Transition probability `y -> x` as the convolution sum.
    fn kernel(&self, x: usize, y: usize) -> f64;

    /// The `m x m` corner of the kernel. Implementors override this with
    /// table-driven assembly.
    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        DMatrix::from_fn(m, m, |x, y| self.kernel(x, y))
    }

    fn eigenvalue(&self, n: usize) -> f64;

    /// `P_n(x)` at the composed parameters.
    fn polynomial(&self, n: usize, x: usize) -> Result<f64>;

    /// `d_n^2` at the composed parameters.
    fn norm_const_sq(&self, n: usize) -> f64;

    /// Closed form of `P_n(N)` where the family provides one.
    fn polynomial_at_edge(&self, _n: usize) -> Option<f64> {
        None
    }
}

/// Parameter record selecting one of the solvable families.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    QHahn(QHahn),
    Hahn(Hahn),
    Krawtchouk(Krawtchouk),
    Charlier(Charlier),
    Meixner(Meixner),
}

impl FamilySpec {
    pub fn q_hahn(n: usize, a: f64, b: f64, c: f64, q: f64) -> Self {
        FamilySpec::QHahn(QHahn { n, a, b, c, q })
    }

    pub fn hahn(n: usize, a: f64, b: f64, c: f64) -> Self {
        FamilySpec::Hahn(Hahn { n, a, b, c })
    }

    pub fn krawtchouk(n: usize, a: f64, b: f64) -> Self {
        FamilySpec::Krawtchouk(Krawtchouk { n, a, b })
    }

    pub fn charlier(a: f64, b: f64, eps_tail: f64) -> Self {
        FamilySpec::Charlier(Charlier { a, b, eps_tail })
    }

    pub fn meixner(a: f64, b: f64, c: f64, eps_tail: f64) -> Self {
        FamilySpec::Meixner(Meixner { a, b, c, eps_tail })
    }

    pub fn solvable(&self) -> &dyn SolvableChain {
        match self {
            FamilySpec::QHahn(f) => f,
            FamilySpec::Hahn(f) => f,
            FamilySpec::Krawtchouk(f) => f,
            FamilySpec::Charlier(f) => f,
            FamilySpec::Meixner(f) => f,
        }
    }

    pub fn name(&self) -> &'static str {
        self.solvable().name()
    }

    pub fn extent(&self) -> Extent {
        self.solvable().extent()
    }

    pub fn validate(&self) -> Result<()> {
        self.solvable().validate()
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        match self.extent() {
            Extent::Finite(n) if x > n => {
                Err(Error::domain(format!("vertex {x} outside {{0..{n}}} for {}", self.name())))
            }
            _ => Ok(()),
        }
    }

    /// The orthogonality measure at the family's own leading parameters:
    /// `pi_qH(x, N, a, b)`, `pi_H(x, N, a, b)`, `pi_K(x, N, a)`, `pi_C(x, a)`
    /// and `pi_M(x, a, c)`. The chain itself is reversible with respect to
    /// the measure at composed parameters, see [`Self::reversible_measure`].
    pub fn measure(&self, x: usize) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(match self {
            FamilySpec::QHahn(f) => measures::q_hahn(x, f.n, f.a, f.b, f.q)?,
            FamilySpec::Hahn(f) => measures::hahn(x, f.n, f.a, f.b)?,
            FamilySpec::Krawtchouk(f) => measures::krawtchouk(x, f.n, f.a)?,
            FamilySpec::Charlier(f) => measures::charlier(x, f.a),
            FamilySpec::Meixner(f) => measures::meixner(x, f.a, f.c),
        })
    }

    pub fn reversible_measure(&self, x: usize) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(self.solvable().reversible_measure(x))
    }

    pub fn kernel(&self, x: usize, y: usize) -> Result<f64> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.solvable().kernel(x, y))
    }

    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        self.check_vertex(n)?;
        Ok(self.solvable().eigenvalue(n))
    }

    pub fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        self.check_vertex(n)?;
        self.check_vertex(x)?;
        self.solvable().polynomial(n, x)
    }

    pub fn norm_const_sq(&self, n: usize) -> Result<f64> {
        self.check_vertex(n)?;
        Ok(self.solvable().norm_const_sq(n))
    }

    pub fn norm_const(&self, n: usize) -> Result<f64> {
        self.norm_const_sq(n).map(f64::sqrt)
    }

    /// Window the chain is represented on.
    pub fn window(&self) -> Result<VertexWindow> {
        match self.extent() {
            Extent::Finite(n) => Ok(VertexWindow::finite(n)),
            Extent::SemiInfinite { eps_tail } => truncation_window(self.solvable(), eps_tail),
        }
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySpec::QHahn(QHahn { n, a, b, c, q }) => write!(f, "qHahn(N={n}, a={a}, b={b}, c={c}, q={q})"),
            FamilySpec::Hahn(Hahn { n, a, b, c }) => write!(f, "Hahn(N={n}, a={a}, b={b}, c={c})"),
            FamilySpec::Krawtchouk(Krawtchouk { n, a, b }) => write!(f, "Krawtchouk(N={n}, a={a}, b={b})"),
            FamilySpec::Charlier(Charlier { a, b, eps_tail }) => {
                write!(f, "Charlier(a={a}, b={b}, eps_tail={eps_tail:e})")
            }
            FamilySpec::Meixner(Meixner { a, b, c, eps_tail }) => {
                write!(f, "Meixner(a={a}, b={b}, c={c}, eps_tail={eps_tail:e})")
            }
        }
    }
}

/// Smallest window whose discarded reversible mass is at most `eps_tail^2`.
///
/// Squaring makes the out-of-window l2 norm of the ground state
/// `sqrt(pi)` at most `eps_tail`, which bounds the eigen-equation residual of
/// the low modes on the window by the same amount.
fn truncation_window(f: &dyn SolvableChain, eps_tail: f64) -> Result<VertexWindow> {
    let target = eps_tail * eps_tail;
    let hard_limit = MAX_WINDOW + 1024;
    let mut terms = Vec::new();
    let mut remainder = 0.0;
    for x in 0..hard_limit {
        let t = f.reversible_measure(x);
        terms.push(t);
        if x > 0 && t < 1e-8 * target {
            let r = t / terms[x - 1];
            if r < 1.0 {
                // Later terms fall off at least geometrically from here.
                remainder = t * r / (1.0 - r);
                break;
            }
        }
    }
    let mut tail = remainder;
    let mut size = None;
    for m in (1..terms.len()).rev() {
        tail += terms[m];
        if tail > target {
            size = Some(m + 1);
            break;
        }
    }
    let size = size.unwrap_or(1);
    if size > MAX_WINDOW || terms.len() == hard_limit {
        return Err(Error::domain(format!(
            "{}: tail mass {target:e} needs more than {MAX_WINDOW} vertices",
            f.name()
        )));
    }
    let discarded: f64 = terms[size..].iter().copied().collect::<CompensatedSum>().value() + remainder;
    VertexWindow::truncated(size, eps_tail, discarded)
}

/// A family's chain together with its closed-form spectral data.
#[derive(Clone, Debug)]
pub struct AnalyticEigenSystem {
    pub family: FamilySpec,
    pub chain: MarkovChain,
    pub spectrum: SpectralData,
    /// Number of leading modes the window represents; every mode on finite
    /// windows.
    pub resolved_modes: usize,
    /// Out-of-window l2 norm of `phi_hat_n` for the modes examined (empty on
    /// finite windows).
    pub mode_leak: Vec<f64>,
}

impl AnalyticEigenSystem {
    pub fn is_truncated(&self) -> bool {
        self.chain.window().is_truncated()
    }

    pub fn hamiltonian(&self) -> DMatrix<f64> {
        hamiltonian(&self.chain).expect("reversible measure is positive")
    }

    /// Left-eigenvector residual `max_x |sum_y K(y,x) P_n(y) - kappa(n) P_n(x)|`.
    pub fn left_eigen_residual(&self, n: usize) -> Result<f64> {
        let m = self.chain.size();
        let f = self.family.solvable();
        let p: Vec<f64> = (0..m).map(|x| f.polynomial(n, x)).collect::<Result<_>>()?;
        let k = self.chain.kernel();
        let kappa = self.spectrum.kappa[n];
        Ok((0..m)
            .map(|x| {
                let lhs = (0..m).map(|y| k[(y, x)] * p[y]).collect::<CompensatedSum>().value();
                (lhs - kappa * p[x]).abs()
            })
            .fold(0.0, f64::max))
    }
}

/// Builds the chain and its analytic eigen-system.
pub fn build(spec: &FamilySpec) -> Result<AnalyticEigenSystem> {
    spec.validate()?;
    let f = spec.solvable();
    let window = spec.window()?;
    let m = window.size();
    let kernel = f.kernel_matrix(m);
    let pi: Vec<f64> = (0..m).map(|x| f.reversible_measure(x)).collect();
    let pi = if window.is_truncated() {
        Distribution::from_raw(pi)
    } else {
        Distribution::with_tolerance(pi, 1e-12)?
    };
    let chain = MarkovChain::new(window, kernel, pi)?;
    let sqrt_pi = chain.sqrt_pi();

    let mut kappa = Vec::with_capacity(m);
    let mut norms = Vec::with_capacity(m);
    let mut vecs = DMatrix::zeros(m, m);
    for n in 0..m {
        kappa.push(f.eigenvalue(n));
        let d2 = f.norm_const_sq(n);
        if !(d2 > 0.0 && d2.is_finite()) {
            return Err(Error::InvalidParameters {
                family: f.name(),
                reason: format!("normalisation constant d_{n}^2 = {d2} is not positive"),
            });
        }
        let d = d2.sqrt();
        norms.push(d);
        for x in 0..m {
            vecs[(x, n)] = sqrt_pi[x] * d * f.polynomial(n, x)?;
        }
    }
    let spectrum = SpectralData::new(kappa, vecs, norms, SpectralSource::Analytic)?;

    let (resolved_modes, mode_leak) = if window.is_truncated() {
        resolved_prefix(f, m, spectrum.norm_consts.as_slice(), RESOLUTION_TOL)?
    } else {
        (m, Vec::new())
    };
    Ok(AnalyticEigenSystem { family: spec.clone(), chain, spectrum, resolved_modes, mode_leak })
}

/// Longest prefix of modes whose l2 norm beyond the window is at most `tol`.
fn resolved_prefix(
    f: &dyn SolvableChain,
    m: usize,
    norms: &[f64],
    tol: f64,
) -> Result<(usize, Vec<f64>)> {
    let mut leaks = Vec::new();
    for (n, &d) in norms.iter().enumerate() {
        let leak = mode_leak(f, n, d, m, tol)?;
        leaks.push(leak);
        if leak > tol {
            return Ok((n, leaks));
        }
    }
    Ok((m, leaks))
}

fn mode_leak(f: &dyn SolvableChain, n: usize, d: f64, m: usize, tol: f64) -> Result<f64> {
    let mut sum = CompensatedSum::default();
    let mut prev = f64::INFINITY;
    for x in m..(m + MAX_WINDOW) {
        let pi = f.reversible_measure(x);
        let v = pi.sqrt() * d * f.polynomial(n, x)?;
        let t = v * v;
        sum.add(t);
        if sum.value() > 4.0 * tol * tol {
            break;
        }
        if x > m + n + 16 && pi < 1e-60 && t <= prev && t < 1e-40 * sum.value().max(1e-300) {
            break;
        }
        prev = t;
    }
    Ok(sum.value().sqrt())
}

/// `t[j][i]` holds `f(i, j)` for `0 <= i <= j < m`.
pub(crate) fn triangle(m: usize, f: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..m).map(|j| (0..=j).map(|i| f(i, j)).collect()).collect()
}

pub(crate) fn invalid(family: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameters { family, reason: reason.into() }
}

pub(crate) fn require(family: &'static str, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(family, reason))
    }
}
