// Vacuum damping of a single mode through its Kraus operators.
//
// Run with `cargo run --example kraus_channel`.

use decolab::channels::{apply_channel, damping_kraus, DampingChannel};
use decolab::entanglement::{log_negativity, wootters_concurrence};
use decolab::fock::{partial_trace, BipartiteState, Mode, ModeDims, QubitPure};

pub fn run_example() -> decolab::Result<()> {
    let kraus = damping_kraus(0.7, 0.3, 6)?;
    println!("{} Kraus operators for d = 6, completeness error {:.2e}", kraus.ops.len(), kraus.completeness_error());

    // |1,0⟩ loses its photon with probability 1 - η
    let one = BipartiteState::number_state(1, 0, ModeDims::new(3, 2)?)?;
    let out = apply_channel(&one, &DampingChannel::new(0.7, 0.0, Mode::A)?)?;
    let rho_a = partial_trace(&out, Mode::A);
    println!("populations of mode a: p0 = {:.3}, p1 = {:.3}", rho_a[(0, 0)].re, rho_a[(1, 1)].re);

    let bell = QubitPure::bell().to_state();
    for eta in [1.0, 0.75, 0.5, 0.25] {
        let out = apply_channel(&bell, &DampingChannel::new(eta, 0.0, Mode::A)?)?;
        println!(
            "eta = {eta:.2}: concurrence {:.4}, log-negativity {:.4}",
            wootters_concurrence(&out)?.value,
            log_negativity(&out)?.log_negativity
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
