//! Classical relaxation to the stationary distribution, with its spectral bound.

use qmc::chain::Distribution;
use qmc::evolution::{classical_evolve_spectral, convergence_bound, SpectralChain};
use qmc::families::FamilySpec;

fn main() -> qmc::Result<()> {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(8, 0.3, 0.6))?;
    let p0 = Distribution::delta(sys.size(), 0)?;
    let bound = convergence_bound(&sys, &p0)?;
    println!("bound: |P(l) - pi|_1 <= {:.3} * {:.4}^l", bound.constant, bound.rate);
    for l in [0, 1, 2, 5, 10, 20, 30] {
        let p = classical_evolve_spectral(&sys, &p0, l)?;
        println!("l={l:>3}  |P - pi|_1 = {:.3e}  (bound {:.3e})", p.total_variation(sys.chain().pi().values()) * 2.0, bound.at(l));
    }
    Ok(())
}
