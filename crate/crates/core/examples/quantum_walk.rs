//! Quantum evolution generated by the Hamiltonian of a chain.

use qmc::evolution::{measurement_distribution, quantum_evolve, quantum_evolve_reverse, QuantumState, SpectralChain};
use qmc::families::FamilySpec;

fn main() -> qmc::Result<()> {
    let sys = SpectralChain::from_family(&FamilySpec::hahn(6, 1.5, 0.7, 2.0))?;
    for l in [0, 1, 2, 5, 10, 100, 1000] {
        let p = measurement_distribution(&sys, 0, l)?;
        println!("l={l:>4}  |Psi(x,0;l)|^2 = {:.4?}  sum = {:.15}", p.values(), p.total());
    }
    // Forward then backward returns the initial state.
    let psi0 = QuantumState::basis(sys.size(), 3)?;
    let back = quantum_evolve_reverse(&sys, &quantum_evolve(&sys, &psi0, 250)?, 250)?;
    let err = psi0.amplitudes().iter().zip(back.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("round trip over 250 steps: max error {err:.1e}");
    Ok(())
}
