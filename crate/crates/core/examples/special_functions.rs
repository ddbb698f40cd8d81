//! Pochhammer symbols and terminating (q-)hypergeometric series.

use qmc::specfun::{binom, hyp_terminating, poch, qbinom, qhyp_terminating, qpoch, HypParams, QHypParams, QParam};

fn main() -> qmc::Result<()> {
    println!("(1.5)_4          = {}", poch(1.5, 4));
    println!("(0.3; 0.5)_6     = {}", qpoch(0.3, 0.5, 6));
    println!("C(10, 4)         = {}", binom(10, 4)?);
    println!("[10 4]_q, q=0.5  = {}", qbinom(10, 4, 0.5)?);

    // Krawtchouk polynomial K_2(3; p=0.4, N=8) = 2F1(-2, -3; -8 | 1/0.4).
    let k = hyp_terminating(&HypParams::new([-2.0, -3.0], [-8.0], 1.0 / 0.4))?;
    println!("2F1(-2,-3;-8|2.5) = {k}");

    // q-Hahn style 3phi2 with exact q-powers: q^-n, a b q^{n-1}, q^-x.
    let (q, n, x) = (0.5, 2, 3);
    let p = QHypParams::new(
        [QParam::q_pow(-n), QParam::product(0.3, 0.4, n - 1), QParam::q_pow(-x)],
        [QParam::new(0.3, 0), QParam::q_pow(-6)],
        q,
        QParam::q_pow(1),
    );
    println!("3phi2(...; q, q)  = {}", qhyp_terminating(&p)?);
    Ok(())
}
