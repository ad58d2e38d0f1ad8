//! The amplification engine itself: prepare the Walsh state of `f ⊕ g`,
//! iterate the generalized reflection operator `Q`, and watch the good-state
//! probability follow the two-dimensional rotation `sin²((2j+1)θ)` exactly.
//!
//! Run with `cargo run --example amplitude_amplification`.

use qbft::amplify::{prepare_a, GoodStates, Mode, Preparation};
use qbft::boolfn::{gen_at_distance, BooleanFunction};
use qbft::qtesters::{plan_identity, OracleHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qbft::Result<()> {
    let n = 8;
    let epsilon = 1.0 / 64.0;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = OracleHandle::new(BooleanFunction::random(n, &mut rng)?);
    let g = OracleHandle::new(gen_at_distance(
        f.function(),
        (epsilon * (1u64 << n) as f64) as u64,
        &mut rng,
    )?);

    // A = H D_g D_f H prepares the Walsh spectrum of f ⊕ g as amplitudes;
    // the squared mass outside z = 0 is exactly 4d(1−d) for d = Dist(f,g).
    let prep = Preparation::pair(&f, &g)?;
    let mut state = prepare_a(&prep)?;
    let d = f.function().dist(g.function())?;
    let a = state.good_probability(GoodStates::Nonzero);
    println!("d = Dist(f,g) = {d}");
    println!(
        "initial good probability a = {a} (4d(1−d) = {})",
        4.0 * d * (1.0 - d)
    );

    // Iterate Q with the standard π phases and compare against the closed
    // form: sin²θ = a, after j iterations the good mass is sin²((2j+1)θ).
    let plan = plan_identity(epsilon, Mode::Oracle, Some(d))?;
    let theta = a.sqrt().asin();
    println!(
        "\nplanned iterations m = {} (θ = {theta:.6})\n",
        plan.iterations
    );
    println!("{:>3} {:>22} {:>22}", "j", "simulated", "sin²((2j+1)θ)");
    println!("{:>3} {:>22} {:>22}", 0, a, (theta).sin().powi(2));
    for j in 1..=u64::from(plan.iterations) + 2 {
        state.apply_q(&prep, &plan)?;
        let simulated = state.good_probability(GoodStates::Nonzero);
        let predicted = ((2 * j + 1) as f64 * theta).sin().powi(2);
        let marker = if j == u64::from(plan.iterations) {
            "  ← measure here"
        } else {
            ""
        };
        println!("{j:>3} {simulated:>22} {predicted:>22}{marker}");
    }

    // Norms are preserved to round-off throughout, and each Q application
    // charged two queries per oracle.
    println!(
        "\ntotal probability = {}, quantum queries charged: f {} / g {}",
        state.total_probability(),
        f.quantum_queries(),
        g.quantum_queries()
    );

    // Overshooting past m wastes amplitude — the rotation keeps turning —
    // which is why the iteration count is planned, not maximized.
    Ok(())
}
