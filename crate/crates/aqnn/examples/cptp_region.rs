//! Maps the admissible region of the uniform feedback weight: bisects the
//! boundary of complete positivity in alpha for ideal and faulty networks and
//! compares the result with the closed-form interval.
//!
//! Run with `cargo run --example cptp_region`.

use aqnn::{is_cptp, AlphaMatrix, ChannelSpec, Result};
use num_complex::Complex64;

/// Bisect the CPTP/not-CPTP crossing of `admissible` between `lo` (inside)
/// and `hi` (outside) to 1e-9.
fn bisect(mut lo: f64, mut hi: f64, admissible: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if admissible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < 1e-9 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn main() -> Result<()> {
    println!("ideal networks: alpha admissible on [-N/(N-1), 0]");
    println!("   N    bisected lower    closed form");
    for n in [2usize, 3, 5, 8] {
        let lower = bisect(-1.0, -3.0, |a| {
            Ok(is_cptp(&ChannelSpec::ideal(AlphaMatrix::uniform(n, a)?)).cptp)
        })?;
        let expected = -(n as f64) / (n as f64 - 1.0);
        println!("{n:>4}   {lower:>14.9}   {expected:>12.9}");
    }

    println!("\nfaulty networks (gamma = 0): alpha admissible on [(eps-N)/(N-1), -eps]");
    println!("   N   eps    bisected lower    bisected upper       closed form");
    for (n, eps) in [(2usize, 0.2), (3, 0.4), (5, 0.7)] {
        let admissible = |a: f64| -> Result<bool> {
            let spec =
                ChannelSpec::faulty(AlphaMatrix::uniform(n, a)?, eps, Complex64::ZERO)?;
            Ok(is_cptp(&spec).cptp)
        };
        let lo_expected = (eps - n as f64) / (n as f64 - 1.0);
        let hi_expected = -eps;
        let lower = bisect(lo_expected + 0.1, lo_expected - 1.0, admissible)?;
        let upper = bisect(hi_expected - 0.1, hi_expected + 1.0, admissible)?;
        println!(
            "{n:>4}   {eps:.1}    {lower:>14.9}    {upper:>14.9}    [{lo_expected:.6}, {hi_expected:.6}]"
        );
    }

    // The cross-pair weight has its own budget: |gamma| <= eps/(N-1).
    let n = 3;
    let eps = 0.3;
    let top = eps / (n as f64 - 1.0);
    let gamma_edge = bisect(0.0, 2.0 * top, |g| {
        let spec = ChannelSpec::faulty(
            AlphaMatrix::uniform(n, -0.5)?,
            eps,
            Complex64::new(g, 0.0),
        )?;
        Ok(is_cptp(&spec).cptp)
    })?;
    println!(
        "\ncross-pair budget at N={n}, eps={eps}: |gamma| <= {gamma_edge:.9} (closed form {top:.9})"
    );
    Ok(())
}
