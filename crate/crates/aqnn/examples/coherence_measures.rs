//! Coherence bookkeeping on a few benchmark states: the l1 measure, the
//! relative-entropy measure, and the closest incoherent (diagonal) state,
//! followed by the decay of both measures under repeated channel passes.
//!
//! Run with `cargo run --example coherence_measures`.

use aqnn::{
    apply, c_l1, c_relative_entropy, closest_attractor, iterate, maximally_coherent,
    random_density, von_neumann_entropy, AlphaMatrix, ChannelSpec, Result,
};

fn main() -> Result<()> {
    let n = 4;

    let psi = maximally_coherent(n, &vec![0.0; n])?;
    let mixed = random_density(n, n, 42)?;
    let pure_random = random_density(n, 1, 7)?;

    println!("state                 C_l1        C_re        S(rho)");
    for (label, rho) in [
        ("maximally coherent", &psi),
        ("random mixed       ", &mixed),
        ("random pure        ", &pure_random),
    ] {
        println!(
            "{label}   {:>9.6}   {:>9.6}   {:>9.6}",
            c_l1(rho),
            c_relative_entropy(rho),
            von_neumann_entropy(rho)
        );
    }

    let (attractor, distance) = closest_attractor(&mixed);
    println!(
        "\nclosest attractor of the mixed state: entropy {:.6}, relative entropy to it {:.6}",
        von_neumann_entropy(&attractor),
        distance
    );

    // A faulty network with uniform feedback damps off-diagonals by a factor
    // |1 + alpha| per pass, so both measures shrink geometrically.
    let spec = ChannelSpec::faulty(
        AlphaMatrix::uniform(n, -0.4)?,
        0.1,
        num_complex::Complex64::new(0.02, 0.0),
    )?;

    println!("\npass   C_l1(rho_r)   C_re(rho_r)");
    let mut rho = psi.clone();
    for r in 0..=6 {
        println!("{r:>4}   {:>11.8}   {:>11.8}", c_l1(&rho), c_relative_entropy(&rho));
        rho = apply(&spec, &rho)?;
    }

    // The same endpoint in one shot (the loop body ran seven times).
    let rho7 = iterate(&spec, &psi, 7)?;
    println!(
        "\niterate(.., 7) reproduces the loop endpoint within {:.2e}",
        rho7.matrix().max_abs_diff(rho.matrix())
    );
    Ok(())
}
