//! Balancedness testing: decide whether `f` is balanced or has bias at
//! least ε, quantumly in O(1/ε) queries versus the classical O(1/ε²)
//! bias estimator.
//!
//! Run with `cargo run --example balancedness_testing`.

use qbft::amplify::{GoodStates, Mode};
use qbft::boolfn::{gen_with_bias, BooleanFunction, Sign};
use qbft::ctesters::{balance_estimate, classical_balance, ClassicalConfig};
use qbft::qtesters::{balance_circuit, test_balance, OracleHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qbft::Result<()> {
    let n = 10;
    let epsilon = 1.0 / 8.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Parity is balanced; the generated instance has bias exactly −ε.
    let balanced = BooleanFunction::parity(n)?;
    let biased = gen_with_bias(n, epsilon, Sign::Negative, &mut rng)?;
    println!(
        "n = {n}, ε = {epsilon}: C(parity) = {}, C(biased) = {}",
        balanced.bias(),
        biased.bias()
    );

    // Quantum tester: amplifies the |0…0⟩ amplitude, whose weight is the
    // squared bias. Balanced inputs can never land on z = 0 (one-sided).
    for (name, f) in [("balanced", &balanced), ("biased  ", &biased)] {
        let handle = OracleHandle::new((*f).clone());
        let circuit = balance_circuit(&handle, epsilon, Mode::Bound)?;
        println!(
            "\n{name} → P(z = 0) = {:.6} with m = {} ({} queries)",
            circuit.state().good_probability(GoodStates::Zero),
            circuit.plan().iterations,
            circuit.quantum_queries()
        );
        let verdict = circuit.conclude(9);
        println!(
            "         one seeded measurement decides: {}",
            verdict.decision
        );
    }

    // Oracle mode on the biased instance: plan from the true bias.
    let handle = OracleHandle::new(biased.clone());
    let verdict = test_balance(&handle, epsilon, Mode::Oracle, 9)?;
    println!(
        "\noracle mode on the biased instance → {} ({} queries)",
        verdict.decision, verdict.quantum_queries
    );

    // Classical baseline: estimate C to within ε/2 from T = ⌈25/ε²⌉
    // samples and threshold the magnitude.
    let budget = ClassicalConfig::new(epsilon)?;
    let (estimate, samples) = balance_estimate(&handle, epsilon, 33)?;
    println!(
        "\nclassical estimate after T = {samples} samples: C′ = {estimate} \
         (true bias {})",
        biased.bias()
    );
    let verdict = classical_balance(&handle, epsilon, 33)?;
    println!(
        "classical verdict: {} (threshold |C′| > {})",
        verdict.decision, budget.threshold
    );
    Ok(())
}
