//! Builds unitary dilations for each network variant and verifies them by
//! round-tripping states: couple to a fresh ancilla, evolve with the dilation
//! unitary, trace the ancilla out, and compare against the channel itself.
//!
//! Run with `cargo run --example dilation_roundtrip`.

use aqnn::{
    apply, build_generic_dilation, build_gio_dilation, build_sio_dilation, choi,
    dilation_round_trip, gram_factorize, kraus_from_choi, random_density, verify_dilation,
    AlphaMatrix, ChannelSpec, Result,
};
use num_complex::Complex64;

fn main() -> Result<()> {
    let n = 3;

    // Ideal networks dilate through the Gram vectors of the feedback weights:
    // overlaps <c_nu|c_mu> = 1 + alpha_{mu nu} pin the ancilla geometry.
    let alpha = AlphaMatrix::uniform(n, -0.5)?;
    let gram = gram_factorize(&alpha)?;
    println!(
        "gram factorization: {} ancilla level(s), overlap residual {:.2e}",
        gram.ancilla_dim,
        gram.max_gram_residual(&alpha)
    );

    let ideal = ChannelSpec::ideal(alpha.clone());
    let u = build_gio_dilation(&ideal)?;
    println!(
        "ideal dilation: system {} x ancilla {}, cross-block leakage {:.2e}, action residual {:.2e}",
        u.system_dim,
        u.ancilla_dim,
        u.max_cross_block_entry(),
        verify_dilation(&u, &ideal, 25)?
    );

    // Boundary faulty networks (|1 + alpha| = 1 - eps, |gamma| = eps/(N-1))
    // admit a structured dilation whose blocks never mix basis lines.
    let eps = 0.3;
    let boundary = ChannelSpec::faulty(
        AlphaMatrix::uniform(n, -eps)?,
        eps,
        Complex64::new(eps / (n as f64 - 1.0), 0.0),
    )?;
    let u = build_sio_dilation(&boundary)?;
    println!(
        "boundary dilation: ancilla {}, unitarity {:.2e}, action residual {:.2e}",
        u.ancilla_dim,
        u.unitarity_residual(),
        verify_dilation(&u, &boundary, 25)?
    );

    // Anything CPTP dilates through its Kraus operators.
    let interior = ChannelSpec::faulty(alpha, 0.3, Complex64::new(0.05, 0.02))?;
    let kraus = kraus_from_choi(&choi(&interior))?;
    let u = build_generic_dilation(&kraus)?;
    println!(
        "generic dilation: {} Kraus operator(s), action residual {:.2e}",
        kraus.len(),
        verify_dilation(&u, &interior, 25)?
    );

    // Round-trip a specific state through the generic dilation.
    let rho = random_density(n, n, 11)?;
    let via_dilation = dilation_round_trip(&u, &rho)?;
    let direct = apply(&interior, &rho)?;
    println!(
        "sample state round trip differs from direct action by {:.2e}",
        via_dilation.matrix().max_abs_diff(direct.matrix())
    );
    Ok(())
}
