//! Closed-form spectra of the solvable families checked against diagonalisation.

use qmc::chain::eigendecompose;
use qmc::families::{build, FamilySpec};

fn main() -> qmc::Result<()> {
    let specs = [
        FamilySpec::q_hahn(6, 0.3, 0.4, 0.2, 0.5),
        FamilySpec::hahn(6, 1.5, 0.7, 2.0),
        FamilySpec::krawtchouk(8, 0.3, 0.6),
        FamilySpec::charlier(0.4, 0.5, 1e-12),
        FamilySpec::meixner(1.2, 0.8, 0.4, 1e-12),
    ];
    for spec in specs {
        let sys = build(&spec)?;
        let h = sys.hamiltonian();
        let mut numerical = eigendecompose(&h)?.kappa;
        numerical.sort_by(|a, b| b.total_cmp(a));
        println!("{spec}: window {} vertices, {} resolved modes", sys.chain.size(), sys.resolved_modes);
        for n in 0..sys.resolved_modes.min(5) {
            println!(
                "  n={n}  E={:+.15}  numerical={:+.15}  residual={:.1e}",
                1.0 - sys.spectrum.kappa[n],
                1.0 - numerical[n],
                sys.spectrum.residual(&h, n)
            );
        }
    }
    Ok(())
}
