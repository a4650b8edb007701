//! Purifying the input does not shelter it from decoherence: extending the
//! network to act on the system half of a purification and tracing the
//! ancilla back out lands exactly where the channel sends the mixed state
//! directly, for every variant.
//!
//! Run with `cargo run --example purification_no_go`.

use aqnn::{
    apply, apply_extended, c_l1, purify, random_density, reduce, AlphaMatrix, ChannelSpec,
    DensityMatrix, Keep, Result,
};
use num_complex::Complex64;

fn main() -> Result<()> {
    let n = 3;
    let alpha = AlphaMatrix::uniform(n, -0.6)?;
    let specs = [
        ("ideal", ChannelSpec::ideal(alpha.clone())),
        (
            "faulty",
            ChannelSpec::faulty(alpha.clone(), 0.25, Complex64::new(0.05, 0.0))?,
        ),
        (
            "shifted",
            ChannelSpec::faulty_shifted(
                alpha,
                0.25,
                Complex64::new(0.03, 0.0),
                Complex64::new(0.04, 0.02),
            )?,
        ),
    ];

    let rho = random_density(n, n, 5)?;
    let (psi, ancilla) = purify(&rho)?;
    let joint = DensityMatrix::from_pure(&psi);
    let back = reduce(&joint, (n, ancilla), Keep::First)?;
    println!(
        "purified a rank-{ancilla} state; tracing the ancilla back out recovers it within {:.2e}",
        back.matrix().max_abs_diff(rho.matrix())
    );

    println!("\nvariant   detour-vs-direct   C_l1 before   C_l1 after");
    for (label, spec) in &specs {
        // Detour: evolve the system half of the purification, then discard
        // the ancilla.
        let evolved = apply_extended(spec, &joint, (n, ancilla))?;
        let detour = reduce(&evolved, (n, ancilla), Keep::First)?;
        let direct = apply(spec, &rho)?;
        println!(
            "{label:<9} {:>14.2e}   {:>11.6}   {:>10.6}",
            detour.matrix().max_abs_diff(direct.matrix()),
            c_l1(&rho),
            c_l1(&direct)
        );
    }
    Ok(())
}
