//! Long-time average of quantum transition probabilities vs a finite-T average.

use qmc::evolution::{empirical_average, long_time_average_column, smallest_phase_gap, SpectralChain};
use qmc::families::FamilySpec;

fn main() -> qmc::Result<()> {
    let sys = SpectralChain::from_family(&FamilySpec::krawtchouk(6, 0.3, 0.6))?;
    if let Some(gap) = smallest_phase_gap(&sys) {
        println!("smallest phase gap {gap:.3e}");
    }
    let y = 0;
    let closed = long_time_average_column(&sys, y)?;
    for t in [100, 1_000, 10_000] {
        let worst = (0..sys.size())
            .map(|x| empirical_average(&sys, x, y, t).map(|e| (e - closed[x]).abs()))
            .collect::<qmc::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("T={t:>6}  max |empirical - closed form| = {worst:.2e}");
    }
    println!("closed form from y=0: {closed:.5?}");
    println!("stationary pi:        {:.5?}", sys.chain().pi().values());
    Ok(())
}
