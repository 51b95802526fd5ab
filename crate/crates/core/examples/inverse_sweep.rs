// Inverse damping of a separable qutrit pair: the preimage is unphysical
// for strong coupling and physical but entangled in a window below η = 1.

use decolab::experiments::{default_inverse_grid, inverse_sweep};
use decolab::io::read_state;

pub fn run_example() -> decolab::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sde_frozen_state.json");
    let state = read_state(path)?;
    for r in inverse_sweep(&state, &default_inverse_grid(), 0.0, true, &[])?.iter().step_by(5) {
        match r.log_negativity {
            Some(ln) => println!("eta = {:.3}: min eig {:+.3e}, E_N = {ln:.5}", r.eta, r.min_eig),
            None => println!("eta = {:.3}: min eig {:+.3e}, unphysical", r.eta, r.min_eig),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
