//! Decoherence depth of a large faulty network: the number of passes needed
//! to drain the l1-coherence of the maximally coherent probe below a
//! threshold, comparing the closed-form prediction against direct simulation
//! across a sweep of decohering powers.
//!
//! Run with `cargo run --release --example depth_curve`.

use aqnn::{decohering_power, depth, AlphaMatrix, ChannelSpec, DepthQuery, Result};

fn main() -> Result<()> {
    let n = 100;
    let eta = 0.01;

    println!("network size {n}, threshold eta = {eta}");
    println!("\n    D        alpha     analytic  simulated  agree");

    // Sweep the decohering power D = (N-1)|alpha| for uniform ideal networks:
    // each pass multiplies every off-diagonal by 1 + alpha.
    for k in [5, 20, 49, 495, 700, 900, 989] {
        let d = (n - 1) as f64 * k as f64 / 1000.0;
        let a = -d / (n - 1) as f64;
        let spec = ChannelSpec::ideal(AlphaMatrix::uniform(n, a)?);
        let power = decohering_power(&spec)?;
        let report = depth(&DepthQuery::new(spec, eta)?)?;
        let analytic = report
            .analytic_bound
            .map(|b| b.to_string())
            .unwrap_or_else(|| "-".into());
        println!(
            "{power:>7.2}   {a:>9.5}   {analytic:>8}  {:>9}  {}",
            report.simulated_depth, report.agreement
        );
    }

    // The half-power point: D = (N-1)/2 drains the probe in 14 passes.
    let spec = ChannelSpec::ideal(AlphaMatrix::uniform(n, -0.5)?);
    let report = depth(&DepthQuery::new(spec, eta)?)?;
    println!(
        "\nat D = {:.1} the probe needs {} passes (analytic {:?})",
        report.decohering_power, report.simulated_depth, report.analytic_bound
    );
    Ok(())
}
