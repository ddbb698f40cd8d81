//! Classical vs quantum distance to the stationary distribution over time.

use qmc::chain::Distribution;
use qmc::evolution::{classical_evolve_spectral, measurement_distribution, SpectralChain};
use qmc::families::FamilySpec;

fn main() -> qmc::Result<()> {
    let sys = SpectralChain::from_family(&FamilySpec::meixner(1.2, 0.8, 0.4, 1e-12))?;
    let pi = sys.chain().pi().values().to_vec();
    let p0 = Distribution::delta(sys.size(), 0)?;
    println!("{:>5} {:>14} {:>14}", "l", "tv classical", "tv quantum");
    for l in [0, 1, 2, 4, 8, 16, 32, 64, 128, 256] {
        let c = classical_evolve_spectral(&sys, &p0, l)?.total_variation(&pi);
        let q = measurement_distribution(&sys, 0, l)?.total_variation(&pi);
        println!("{l:>5} {c:>14.6e} {q:>14.6e}");
    }
    Ok(())
}
