// Beam-splitter dilation with vacuum and coherent baths. A coherent bath
// adds a local displacement, so the log-negativity matches the vacuum case.

use decolab::channels::{apply_channel, coherent_bath_evolve, dilation_evolve, DampingChannel};
use decolab::entanglement::log_negativity;
use decolab::fock::{BipartiteState, Mode, ModeDims, QubitPure};
use decolab::numerics::{c, cr};

pub fn run_example() -> decolab::Result<()> {
    let q = QubitPure::normalized(cr(0.6), c(0.1, 0.2), cr(0.0), c(0.5, -0.4))?;
    let state = q.to_state().embed(ModeDims::new(8, 8)?)?;
    let eta = 0.6;

    let kraus = apply_channel(&state, &DampingChannel::new(eta, 0.0, Mode::A)?)?;
    let mut env = vec![cr(0.0); 8];
    env[0] = cr(1.0);
    let dilated = dilation_evolve(&state, eta, 0.0, &env, Mode::A)?;
    println!("Kraus vs dilation, trace distance {:.2e}", kraus.trace_distance(&dilated)?);

    let coherent: BipartiteState = coherent_bath_evolve(&state, eta, 0.0, cr(0.5), 12, Mode::A)?;
    println!(
        "log-negativity: vacuum bath {:.10}, coherent bath {:.10}",
        log_negativity(&kraus)?.log_negativity,
        log_negativity(&coherent)?.log_negativity
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
