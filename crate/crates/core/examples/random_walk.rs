//! Simple random walks on graphs: validation, Hamiltonian, spectral round trip.

use qmc::chain::{eigendecompose, hamiltonian, simple_random_walk, spectral_reconstruct_k, Graph};

fn main() -> qmc::Result<()> {
    for (name, g) in [("path(6)", Graph::path(6)), ("cycle(6)", Graph::cycle(6)), ("star(5)", Graph::star(5))] {
        let chain = simple_random_walk(&g)?;
        let report = chain.validate(1e-12);
        let spectrum = eigendecompose(&hamiltonian(&chain)?)?;
        let k = spectral_reconstruct_k(&spectrum, chain.pi())?;
        let mut kappa = spectrum.kappa.clone();
        kappa.sort_by(|a, b| b.total_cmp(a));
        println!("{name}: pi = {:.4?}", chain.pi().values());
        println!("  {report}");
        println!("  kappa = {kappa:.4?}");
        println!("  reconstruction error = {:.1e}", (k - chain.kernel()).amax());
    }
    Ok(())
}
