//! Exact correlation testing: under the promise `|C(f,g)| ∈ {ε, 1}`, six
//! quantum queries decide which case holds *with certainty* — for any
//! ε ∈ [0, √3/2] — while deterministic classical deciders pay Θ(2ⁿ).
//!
//! Run with `cargo run --example correlation_testing`.

use qbft::boolfn::{gen_at_distance, BooleanFunction};
use qbft::ctesters::deterministic_correlation;
use qbft::qtesters::{correlation_circuit, test_correlation_exact, OracleHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qbft::Result<()> {
    let n = 10;
    let len = 1u64 << n;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = BooleanFunction::random(n, &mut rng)?;
    let of = OracleHandle::new(f.clone());

    println!("ε sweep at n = {n}: P(z = 0) is exactly 1 when |C| = 1 and exactly 0 when |C| = ε");
    println!("(columns show the deviation from certainty, i.e. round-off only)\n");
    println!(
        "{:>10} {:>14} {:>14} {:>8}",
        "ε", "1−p₀(|C|=1)", "p₀(|C|=ε)", "queries"
    );
    for k in [0u64, 64, 128, 256, 443] {
        let epsilon = k as f64 / (len / 2) as f64;
        // |C| = 1 witness: g = f. |C| = ε witness: distance (1−ε)·N/2.
        let same = OracleHandle::new(f.clone());
        let circuit_one = correlation_circuit(&of, &same, epsilon)?;
        let g = gen_at_distance(&f, len / 2 - k, &mut rng)?;
        let og = OracleHandle::new(g);
        let circuit_eps = correlation_circuit(&of, &og, epsilon)?;
        println!(
            "{:>10.6} {:>14.3e} {:>14.3e} {:>8}",
            epsilon,
            1.0 - circuit_one.state().probability(0),
            circuit_eps.state().probability(0),
            circuit_eps.quantum_queries()
        );
    }

    // The one-call form: the seed cannot change the decision under the
    // promise, only which nonzero witness index gets reported.
    let epsilon = 0.25;
    let g = gen_at_distance(&f, (1u64 << n) / 2 - 128, &mut rng)?;
    let og = OracleHandle::new(g.clone());
    let verdict = test_correlation_exact(&of, &og, epsilon, 11)?;
    println!(
        "\n|C(f,g)| = {} at ε = {epsilon} → {} (measured z = {})",
        f.correlation(&g)?.abs(),
        verdict.decision,
        verdict.measured_z.unwrap()
    );

    // Deterministic classical baseline: adversarial orderings force the
    // scan to (1∓ε)·2ⁿ + 2 queries before either branch is refuted.
    let const0 = BooleanFunction::constant(n, false)?;
    let d_total = ((1.0 - epsilon) * (len / 2) as f64) as usize;
    let worst = BooleanFunction::from_fn(n, |x| x < d_total)?;
    let v_eps = deterministic_correlation(
        &OracleHandle::new(const0.clone()),
        &OracleHandle::new(worst),
        epsilon,
    )?;
    let v_one = deterministic_correlation(
        &OracleHandle::new(const0.clone()),
        &OracleHandle::new(const0),
        epsilon,
    )?;
    println!(
        "\ndeterministic scan at ε = {epsilon}: {} after {} queries, {} after {} queries",
        v_eps.decision, v_eps.classical_queries, v_one.decision, v_one.classical_queries
    );
    println!(
        "(2ⁿ⁺¹ = {} queries would read both tables outright)",
        2 * len
    );
    Ok(())
}
