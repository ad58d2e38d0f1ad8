//! Identity testing end to end: decide `f = g` versus ε-far with one
//! amplified quantum measurement, and compare against the classical
//! random-probing tester.
//!
//! Run with `cargo run --example identity_testing`.

use qbft::amplify::{GoodStates, Mode};
use qbft::boolfn::{gen_at_distance, BooleanFunction};
use qbft::ctesters::{classical_identity, ClassicalConfig};
use qbft::qtesters::{identity_circuit, test_identity, OracleHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qbft::Result<()> {
    let n = 10;
    let epsilon = 1.0 / 32.0;
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    let f = BooleanFunction::random(n, &mut rng)?;
    // A witness pair exactly on the promise edge: Dist(f, far) = ε.
    let far = gen_at_distance(&f, (epsilon * (1u64 << n) as f64) as u64, &mut rng)?;
    println!("n = {n}, ε = {epsilon}, Dist(f, far) = {}", f.dist(&far)?);

    // Identical branch: the tester is one-sided, so this never errs.
    let of = OracleHandle::new(f.clone());
    let og = OracleHandle::new(f.clone());
    let verdict = test_identity(&of, &og, epsilon, Mode::Bound, 7)?;
    println!(
        "\nf vs f      → {} ({} quantum queries, m = {})",
        verdict.decision,
        verdict.quantum_queries,
        verdict.plan.as_ref().unwrap().iterations
    );

    // Far branch: read the exact rejection probability off the simulated
    // state instead of trusting a single measurement.
    let og_far = OracleHandle::new(far.clone());
    let circuit = identity_circuit(&of, &og_far, epsilon, Mode::Bound)?;
    let p_reject = circuit.state().good_probability(GoodStates::Nonzero);
    println!(
        "f vs far    → P(measure a disagreement witness) = {p_reject:.6} \
         ({} queries)",
        circuit.quantum_queries()
    );
    let verdict = circuit.conclude(7);
    println!(
        "             one seeded measurement decides: {}",
        verdict.decision
    );

    // Oracle mode plans from the true distance instead of the ε bound —
    // useful for validating the amplification analysis itself.
    let circuit = identity_circuit(&of, &og_far, epsilon, Mode::Oracle)?;
    println!(
        "oracle mode → P(reject) = {:.6} with m = {}",
        circuit.state().good_probability(GoodStates::Nonzero),
        circuit.plan().iterations
    );

    // The classical baseline needs Θ(1/ε) probes instead of Θ(1/√ε).
    let budget = ClassicalConfig::new(epsilon)?;
    let mut rejected = 0u32;
    let trials = 1000u64;
    for seed in 0..trials {
        let v = classical_identity(&of, &og_far, epsilon, seed)?;
        if v.decision == qbft::qtesters::Decision::EpsFar {
            rejected += 1;
        }
    }
    println!(
        "\nclassical   → r = {} probes per run, rejected the far pair in \
         {rejected}/{trials} trials",
        budget.r_identity
    );
    println!(
        "query counts this session: quantum {} vs classical {}",
        of.quantum_queries(),
        of.classical_queries()
    );
    Ok(())
}
