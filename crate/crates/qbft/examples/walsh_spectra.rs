//! Walsh spectra as the common currency: the fast transform, Parseval's
//! identity, and the bridge `C(f,g) = 1 − 2·Dist(f,g) = W_{f⊕g}(0)` that
//! the testers are built on.
//!
//! Run with `cargo run --example walsh_spectra`.

use qbft::boolfn::BooleanFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qbft::Result<()> {
    // Small spectra in full: parity concentrates on its single frequency,
    // AND spreads evenly up to sign.
    for name in ["parity3", "and2", "majority3"] {
        let f = BooleanFunction::builtin(name)?;
        let spectrum = f.walsh_spectrum_fast()?;
        let rendered: Vec<String> = spectrum.coeffs().iter().map(f64::to_string).collect();
        println!("{name:<10} W = [{}]", rendered.join(", "));
    }

    // Parseval: the squared coefficients of any function sum to 1 exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = BooleanFunction::random(12, &mut rng)?;
    let spectrum = f.walsh_spectrum_fast()?;
    println!(
        "\nrandom n = 12: Σ W(ω)² − 1 = {:e}",
        spectrum.parseval_sum() - 1.0
    );

    // The fast butterfly transform agrees with the defining sum.
    let naive = f.walsh_spectrum_naive()?;
    let max_gap = spectrum
        .coeffs()
        .iter()
        .zip(naive.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("fast vs naive transform: max |Δ| = {max_gap:e}");

    // Correlation via the zero frequency of the XOR: three routes to the
    // same dyadic rational, exactly.
    let g = BooleanFunction::random(12, &mut rng)?;
    let from_distance = 1.0 - 2.0 * f.dist(&g)?;
    let from_xor = f.xor(&g)?.walsh_spectrum_fast()?.coeff(0);
    println!(
        "\nC(f,g) = {} from distance, {} from W_(f⊕g)(0), {} from correlation()",
        from_distance,
        from_xor,
        f.correlation(&g)?
    );

    // Bias is the zero coefficient of the function itself.
    let biased = BooleanFunction::and(4)?;
    println!(
        "bias(and4) = {} = W(0) = {}",
        biased.bias(),
        biased.walsh_spectrum_fast()?.coeff(0)
    );
    Ok(())
}
