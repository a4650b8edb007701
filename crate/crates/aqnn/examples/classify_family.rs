//! Places each network variant in the incoherent-operation hierarchy:
//! non-coherence-generating (NCG), genuinely incoherent (GIO), strictly
//! incoherent (SIO), incoherent (IO), and whether ancilla-side coherence is
//! activated.
//!
//! Run with `cargo run --example classify_family`.

use aqnn::{classify_channel, AlphaMatrix, ChannelSpec, ClassReport, Result};
use num_complex::Complex64;

fn show(label: &str, report: &ClassReport) {
    println!(
        "{label:<34} ncg={:<5} gio={:<5} sio={:<5} io={:<5} activates={}",
        report.is_ncg,
        report.is_gio,
        report.sio_certificate.is_some(),
        report.io_certificate.is_some(),
        report.activates_coherence
    );
}

fn main() -> Result<()> {
    let n = 3;
    let alpha = AlphaMatrix::uniform(n, -0.5)?;

    // Ideal feedback leaves every basis projector fixed: genuinely incoherent.
    let ideal = ChannelSpec::ideal(alpha.clone());
    show("ideal", &classify_channel(&ideal)?);

    // Population leakage breaks the fixed-point property but the channel
    // still admits a strictly incoherent Kraus decomposition.
    let faulty = ChannelSpec::faulty(alpha.clone(), 0.3, Complex64::new(0.05, 0.0))?;
    show("faulty (eps, gamma)", &classify_channel(&faulty)?);

    // A pure index shift is permutation noise: still strictly incoherent.
    let shifted_pure = ChannelSpec::faulty_shifted(
        alpha.clone(),
        0.3,
        Complex64::ZERO,
        Complex64::new(0.05, 0.0),
    )?;
    show("shifted (gamma = 0)", &classify_channel(&shifted_pure)?);

    // Mixing the mirror weight with the shift entangles the Kraus structure:
    // the channel stays NCG but the certificate search comes back empty.
    let shifted_mixed = ChannelSpec::faulty_shifted(
        alpha,
        0.3,
        Complex64::new(0.03, 0.0),
        Complex64::new(0.04, 0.02),
    )?;
    let report = classify_channel(&shifted_mixed)?;
    show("shifted (gamma, lambda mixed)", &report);

    println!("\ndiagnostic residuals for the mixed shifted network:");
    for (name, value) in &report.residuals {
        println!("  {name:<28} {value:.3e}");
    }
    Ok(())
}
