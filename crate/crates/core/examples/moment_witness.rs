// Moment-matrix determinant witnesses and their exact scaling under
// damping of a normally ordered mode.

use decolab::channels::{apply_channel, DampingChannel};
use decolab::fock::{Mode, QubitPure};
use decolab::moments::{build_matrix, presets, scaling_matrix, witness_from_det};
use decolab::numerics::{c, det};

pub fn run_example() -> decolab::Result<()> {
    let q = QubitPure::normalized(c(0.5, 0.1), c(0.3, 0.0), c(0.0, -0.4), c(0.6, 0.2))?;
    let state = q.to_state();
    for name in presets::NAMES {
        let spec = presets::by_name(name).expect("preset");
        let r = witness_from_det(&state, &spec, 1e-12)?;
        println!("{name}: det = {:+.6e} ({:?})", r.value, r.verdict);
    }
    let dd = q.delta.norm_sqr();
    println!("|δ|²(|δ|⁴ − |αδ − βγ|²) = {:+.6e}", dd * (dd * dd - q.invariant().powi(2)));
    println!("−|δ|⁴|αδ − βγ|²        = {:+.6e}", -dd * dd * q.invariant().powi(2));

    let spec = presets::qubit_d3();
    let m0 = det(&build_matrix(&state, &spec)?)?.re;
    for eta in [0.9, 0.5, 0.1] {
        let out = apply_channel(&state, &DampingChannel::new(eta, 0.0, Mode::A)?)?;
        let mt = det(&build_matrix(&out, &spec)?)?.re;
        let h = det(&scaling_matrix(&spec, eta, 1.0)?)?.re;
        println!("eta = {eta}: det M(t) = {mt:+.6e}, det(H)² det M(0) = {:+.6e}", h * h * m0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
