//! Checks against independent oracles: hand-expanded sums, brute-force
//! series, dense matrix powers and the numerical eigensolver.

use nalgebra::DMatrix;
use qmc::chain::{eigendecompose, spectral_reconstruct_k, Distribution};
use qmc::evolution::*;
use qmc::families::{self, build, FamilySpec};
use qmc::specfun::{hyp_terminating, poch, qhyp_terminating, qpoch, HypParams, QHypParams, QParam};

fn finite_families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::q_hahn(6, 0.3, 0.4, 0.2, 0.5),
        FamilySpec::hahn(6, 1.5, 0.7, 2.0),
        FamilySpec::krawtchouk(8, 0.3, 0.6),
    ]
}

fn all_families() -> Vec<FamilySpec> {
    let mut v = finite_families();
    v.push(FamilySpec::charlier(0.4, 0.5, 1e-12));
    v.push(FamilySpec::meixner(1.2, 0.8, 0.4, 1e-12));
    v
}

/// Naive left-to-right term sum in f64.
fn naive_hyp(num: &[f64], den: &[f64], z: f64, terms: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..=terms {
        let mut t = z.powi(k as i32) / poch(1.0, k);
        for &a in num {
            t *= poch(a, k);
        }
        for &b in den {
            t /= poch(b, k);
        }
        s += t;
    }
    s
}

#[test]
fn hyp_matches_naive_sum() {
    let cases: [(&[f64], &[f64], f64); 4] = [
        (&[-3.0, 1.5], &[2.5], 0.7),
        (&[-5.0, 2.0, -4.0], &[1.5, -6.0], 1.0),
        (&[-4.0, -2.0], &[], -2.5),
        (&[-6.0, 3.3], &[0.9], -1.3),
    ];
    for (num, den, z) in cases {
        let n = num.iter().filter(|a| **a <= 0.0).map(|a| (-a) as usize).min().unwrap();
        let want = naive_hyp(num, den, z, n);
        let got = hyp_terminating(&HypParams::new(num, den, z)).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{num:?} {den:?}: {got} vs {want}");
    }
}

#[test]
fn q_hyp_matches_product_definition() {
    // 3phi2(q^-n, A B q^{n-1}, q^-x; A, q^-N | q; q) term by term from
    // q-shifted factorials.
    let (q, a, b, big_n) = (0.6f64, 0.35f64, 0.5f64, 5usize);
    for n in 0..=big_n {
        for x in 0..=big_n {
            let mut want = 0.0;
            for k in 0..=n.min(x) {
                want += qpoch(q.powi(-(n as i32)), q, k) * qpoch(a * b * q.powi(n as i32 - 1), q, k)
                    * qpoch(q.powi(-(x as i32)), q, k)
                    / (qpoch(a, q, k) * qpoch(q.powi(-(big_n as i32)), q, k) * qpoch(q, q, k))
                    * q.powi(k as i32);
            }
            let p = QHypParams::new(
                [QParam::q_pow(-(n as i64)), QParam::product(a, b, n as i64 - 1), QParam::q_pow(-(x as i64))],
                [QParam::from(a), QParam::q_pow(-(big_n as i64))],
                q,
                QParam::q_pow(1),
            );
            let got = qhyp_terminating(&p).unwrap();
            assert!((got - want).abs() < 1e-9 * want.abs().max(1.0), "n={n} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn krawtchouk_n1_kernel_by_hand() {
    // a = b = 1/2: the z-sum has at most two terms.
    //   K(0,0) = pi_K(0,0,b) pi_K(0,1,a) + pi_K(0,1,b) pi_K(1,1,a) = 1/2 + 1/4
    //   K(1,0) = pi_K(1,1,b) pi_K(1,1,a) = 1/4
    //   K(0,1) = pi_K(0,1,b) pi_K(0,0,a) = 1/2
    //   K(1,1) = pi_K(1,1,b) pi_K(0,0,a) = 1/2
    let spec = FamilySpec::krawtchouk(1, 0.5, 0.5);
    let want = [[0.75, 0.5], [0.25, 0.5]];
    for x in 0..2 {
        for y in 0..2 {
            assert!((spec.kernel(x, y).unwrap() - want[x][y]).abs() < 1e-16);
        }
    }
    assert!((spec.eigenvalue(1).unwrap() - 0.25).abs() < 1e-16);
}

#[test]
fn krawtchouk_polynomial_and_norm_small_case() {
    // 2F1(-1, -1; -2 | 3) = 1 + (-1)(-1)/(-2) * 3
    assert!((families::krawtchouk_polynomial(1, 1, 2, 1.0 / 3.0).unwrap() + 0.5).abs() < 1e-15);
    // C(2,1) (1/3)/(2/3)
    assert!((families::krawtchouk_norm_sq(1, 2, 1.0 / 3.0) - 1.0).abs() < 1e-15);
}

#[test]
fn hahn_kappa_one_by_direct_summation() {
    // kappa(1) = 1 - b(a+2b+c)/((a+b)(b+c)) from the two terms of the 3F2.
    for (a, b, c) in [(1.0, 1.0, 1.0), (1.5, 0.7, 2.0), (0.3, 2.2, 0.9)] {
        let want = 1.0 - b * (a + 2.0 * b + c) / ((a + b) * (b + c));
        let got = FamilySpec::hahn(6, a, b, c).eigenvalue(1).unwrap();
        assert!((got - want).abs() < 1e-14, "{a} {b} {c}: {got} vs {want}");
    }
    assert!(FamilySpec::hahn(6, 1.0, 1.0, 1.0).eigenvalue(1).unwrap().abs() < 1e-12);
}

#[test]
fn kappa_matches_numerical_eigenvalues() {
    for spec in all_families() {
        let sys = build(&spec).unwrap();
        let num = eigendecompose(&sys.hamiltonian()).unwrap();
        let mut numerical: Vec<f64> = num.kappa.clone();
        numerical.sort_by(|a, b| b.total_cmp(a));
        let mut analytic: Vec<f64> = sys.spectrum.kappa[..sys.resolved_modes].to_vec();
        analytic.sort_by(|a, b| b.total_cmp(a));
        let tol = if sys.is_truncated() { 1e-9 } else { 1e-10 };
        for (k, w) in analytic.iter().enumerate() {
            assert!((numerical[k] - w).abs() < tol, "{spec} mode {k}");
        }
    }
}

#[test]
fn orthogonality_relation() {
    for spec in finite_families() {
        let f = spec.solvable();
        let m = spec.window().unwrap().size();
        for n in 0..m {
            for k in 0..m {
                let s: f64 = (0..m)
                    .map(|x| f.reversible_measure(x) * f.polynomial(n, x).unwrap() * f.polynomial(k, x).unwrap())
                    .sum();
                let want = if n == k { 1.0 / f.norm_const_sq(n) } else { 0.0 };
                assert!((s - want).abs() < 1e-10 * want.abs().max(1.0), "{spec} n={n} m={k}: {s} vs {want}");
            }
        }
    }
}

#[test]
fn self_duality() {
    let k = FamilySpec::krawtchouk(7, 0.3, 0.6);
    let m = FamilySpec::meixner(1.2, 0.8, 0.4, 1e-12);
    for n in 0..=7 {
        for x in 0..=7 {
            let d = (k.polynomial(n, x).unwrap() - k.polynomial(x, n).unwrap()).abs();
            assert!(d < 1e-12, "Krawtchouk {n} {x}: {d}");
            let (a, b) = (m.polynomial(n, x).unwrap(), m.polynomial(x, n).unwrap());
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "Meixner {n} {x}: {a} vs {b}");
        }
    }
}

#[test]
fn edge_closed_forms_match_series() {
    for spec in finite_families() {
        let f = spec.solvable();
        let n_max = spec.window().unwrap().edge();
        for n in 0..=n_max {
            let closed = f.polynomial_at_edge(n).unwrap();
            let series = f.polynomial(n, n_max).unwrap();
            assert!((closed - series).abs() < 1e-10 * closed.abs().max(1.0), "{spec} n={n}: {closed} vs {series}");
        }
    }
}

#[test]
fn spectral_reconstruction_of_kernels() {
    for spec in finite_families() {
        let sys = build(&spec).unwrap();
        let k = spectral_reconstruct_k(&sys.spectrum, sys.chain.pi()).unwrap();
        assert!((k - sys.chain.kernel()).amax() < 1e-12, "{spec}");
    }
}

fn matrix_power(k: &DMatrix<f64>, l: u64) -> DMatrix<f64> {
    let mut p = DMatrix::identity(k.nrows(), k.ncols());
    for _ in 0..l {
        p = k * p;
    }
    p
}

#[test]
fn transition_probability_matches_matrix_power() {
    for spec in all_families() {
        let sys = SpectralChain::from_family(&spec).unwrap();
        let k = sys.chain().kernel().clone();
        let m = sys.size().min(10);
        for l in [0u64, 1, 2, 7, 64] {
            let p = matrix_power(&k, l);
            for x in 0..m {
                for y in 0..m {
                    let got = transition_probability(&sys, x, y, l).unwrap();
                    assert!((got - p[(x, y)]).abs() < 1e-9, "{spec} l={l} ({x},{y})");
                }
            }
        }
    }
}

#[test]
fn transition_probability_limit_is_pi() {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(8, 0.3, 0.6)).unwrap();
    for x in 0..9 {
        for y in 0..9 {
            let v = transition_probability(&sys, x, y, 500).unwrap();
            assert!((v - sys.chain().pi()[x]).abs() < 1e-8);
        }
    }
}

/// Diagonal plus cosine cross terms.
fn cosine_expansion(sys: &SpectralChain, x: usize, y: usize, l: u64) -> f64 {
    let s = sys.spectrum();
    let phi = &s.eigenvectors;
    let m = s.len();
    let mut total = 0.0;
    for n in 0..m {
        total += (phi[(x, n)] * phi[(y, n)]).powi(2);
    }
    for n in 0..m {
        for k in (n + 1)..m {
            let arg = (s.kappa[n] - s.kappa[k]) * l as f64;
            total += 2.0 * phi[(x, n)] * phi[(y, n)] * phi[(x, k)] * phi[(y, k)] * arg.cos();
        }
    }
    total
}

#[test]
fn measurement_distribution_equals_cosine_expansion() {
    let sys = SpectralChain::from_family(&FamilySpec::hahn(5, 1.5, 0.7, 2.0)).unwrap();
    for l in [1u64, 7, 31] {
        for y in 0..6 {
            let d = measurement_distribution(&sys, y, l).unwrap();
            for x in 0..6 {
                assert!((d[x] - cosine_expansion(&sys, x, y, l)).abs() < 1e-10, "l={l} x={x} y={y}");
            }
        }
    }
}

#[test]
fn evolve_is_consistent_with_amplitudes() {
    let sys = SpectralChain::from_family(&FamilySpec::q_hahn(6, 0.3, 0.4, 0.2, 0.5)).unwrap();
    let psi = quantum_evolve(&sys, &QuantumState::basis(7, 2).unwrap(), 13).unwrap();
    for x in 0..7 {
        let a = quantum_amplitude(&sys, x, 2, 13).unwrap();
        assert!((psi.amplitudes()[x] - a).norm() < 1e-14);
    }
}

#[test]
fn ground_state_is_stationary() {
    let sys = SpectralChain::from_family(&FamilySpec::hahn(6, 1.5, 0.7, 2.0)).unwrap();
    let g = QuantumState::from_real(&sys.chain().sqrt_pi()).unwrap();
    for l in [1u64, 10, 1000] {
        let psi = quantum_evolve(&sys, &g, l).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(g.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn classical_stationary_limit_and_bound() {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(8, 0.3, 0.6)).unwrap();
    let p0 = Distribution::delta(9, 0).unwrap();
    let p = classical_evolve_spectral(&sys, &p0, 200).unwrap();
    let l1: f64 = (0..9).map(|x| (p[x] - sys.chain().pi()[x]).abs()).sum();
    assert!(l1 <= 1e-8);
    let bound = convergence_bound(&sys, &p0).unwrap();
    assert!((bound.rate - 0.42).abs() < 1e-15);
    for l in [0u64, 1, 5, 20, 200] {
        let p = classical_evolve_spectral(&sys, &p0, l).unwrap();
        let l1: f64 = (0..9).map(|x| (p[x] - sys.chain().pi()[x]).abs()).sum();
        assert!(l1 <= bound.at(l) + 1e-15, "l={l}: {l1} > {}", bound.at(l));
    }
}

#[test]
fn empirical_average_approaches_closed_form() {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(6, 0.3, 0.6)).unwrap();
    let gap = smallest_phase_gap(&sys).unwrap();
    assert!(gap > 1e-3, "nondegenerate spectrum expected, gap {gap}");
    for (x, y) in [(0, 0), (0, 6), (3, 2)] {
        let closed = long_time_average(&sys, x, y).unwrap();
        let emp = empirical_average(&sys, x, y, 10_000).unwrap();
        assert!((emp - closed).abs() <= 5e-3, "({x},{y}): {emp} vs {closed}, gap {gap}");
    }
}

#[test]
fn quantum_walk_does_not_settle() {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(6, 0.3, 0.6)).unwrap();
    let lta = long_time_average_column(&sys, 0).unwrap();
    let dev: Vec<f64> = (0..=1000)
        .map(|l| {
            let d = measurement_distribution(&sys, 0, l).unwrap();
            (0..7).map(|x| (d[x] - lta[x]).abs()).fold(0.0, f64::max)
        })
        .collect();
    let mut min_so_far = f64::INFINITY;
    let mut rebound = false;
    for &d in &dev {
        if d > min_so_far + 1e-3 {
            rebound = true;
            break;
        }
        min_so_far = min_so_far.min(d);
    }
    assert!(rebound);
}
