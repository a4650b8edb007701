//! Extracts canonical Kraus operators from the Choi matrix and prints their
//! sparsity patterns. Ideal networks decompose into diagonal operators;
//! faulty ones into operators with at most one nonzero per row and column —
//! the structural signatures behind the incoherence certificates.
//!
//! Run with `cargo run --example kraus_structure`.

use aqnn::{choi, kraus_from_choi, AlphaMatrix, ChannelSpec, KrausSet, Result};
use num_complex::Complex64;

fn pattern(set: &KrausSet) {
    let n = set.dim();
    for (idx, op) in set.operators().iter().enumerate() {
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut row = String::with_capacity(n);
            for c in 0..n {
                row.push(if op[(r, c)].norm() > 1e-10 { '*' } else { '.' });
            }
            rows.push(row);
        }
        println!("  K{idx}: {}", rows.join(" / "));
    }
    println!("  completeness residual {:.2e}", set.completeness_residual());
}

fn main() -> Result<()> {
    let n = 3;
    let alpha = AlphaMatrix::uniform(n, -0.5)?;

    println!("ideal network (diagonal Kraus operators):");
    let ideal = ChannelSpec::ideal(alpha.clone());
    pattern(&kraus_from_choi(&choi(&ideal))?);

    println!("\nfaulty network (one nonzero per row and column):");
    let faulty = ChannelSpec::faulty(alpha.clone(), 0.3, Complex64::new(0.1, 0.05))?;
    pattern(&kraus_from_choi(&choi(&faulty))?);

    println!("\npure index-shift noise (cyclic permutation patterns):");
    let shifted = ChannelSpec::faulty_shifted(
        alpha.clone(),
        0.3,
        Complex64::ZERO,
        Complex64::new(0.15, 0.0),
    )?;
    pattern(&kraus_from_choi(&choi(&shifted))?);

    println!("\nmixed mirror + shift noise (patterns overlap, no one-per-line form):");
    let mixed = ChannelSpec::faulty_shifted(
        alpha,
        0.3,
        Complex64::new(0.05, 0.0),
        Complex64::new(0.05, 0.03),
    )?;
    pattern(&kraus_from_choi(&choi(&mixed))?);
    Ok(())
}
