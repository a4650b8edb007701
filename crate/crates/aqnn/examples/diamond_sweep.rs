//! Diamond distance between the ideal network and its faulty counterpart:
//! the interior-point solver, the diagonal closed form, and the entangled
//! probe lower bound all meet at eps, independent of the cross-pair weight.
//!
//! Run with `cargo run --release --example diamond_sweep`.

use aqnn::{
    diamond_analytic_diagonal, diamond_interior_point, diamond_lower_bound, AlphaMatrix,
    ChannelSpec, Result,
};
use num_complex::Complex64;

fn main() -> Result<()> {
    let n = 3;
    let alpha = AlphaMatrix::uniform(n, -1.0)?;
    let ideal = ChannelSpec::ideal(alpha.clone());

    println!("network size {n}, uniform alpha = -1");
    println!("\n  eps     sdp value     closed form   lower bound");
    for eps in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let faulty = ChannelSpec::faulty(alpha.clone(), eps, Complex64::ZERO)?;
        let sdp = diamond_interior_point(&ideal, &faulty)?;
        let analytic = diamond_analytic_diagonal(&ideal, &faulty)
            .expect("gamma = 0 keeps the Choi difference diagonal");
        let lower = diamond_lower_bound(&ideal, &faulty, 10, 7)?;
        println!(
            "{eps:>5.2}   {:>11.8}   {:>11.8}   {:>11.8}",
            sdp.value, analytic.value, lower
        );
    }

    // The cross-pair weight moves coherences around without changing how
    // distinguishable the faulty network is from the ideal one.
    let eps = 0.4;
    println!("\n  |gamma|   sdp value    (eps = {eps}, budget eps/(N-1) = {:.2})", eps / 2.0);
    for frac in [0.0, 0.5, 1.0] {
        let gamma = Complex64::from_polar(frac * eps / (n as f64 - 1.0), 0.7);
        let faulty = ChannelSpec::faulty(alpha.clone(), eps, gamma)?;
        let sdp = diamond_interior_point(&ideal, &faulty)?;
        println!("{:>9.4}   {:>10.8}", gamma.norm(), sdp.value);
    }
    Ok(())
}
