// First-order Hillery–Zubairy witnesses on two-mode cat states under
// one-sided vacuum damping.

use decolab::channels::{apply_channel, DampingChannel};
use decolab::fock::{two_mode_cat, Mode};
use decolab::moments::hz_first_order;
use decolab::numerics::cr;

pub fn run_example() -> decolab::Result<()> {
    let d = 16;
    for (label, beta, sign) in [
        ("|α,α⟩ + |−α,−α⟩", 1.0, 1.0),
        ("|α,α⟩ − |−α,−α⟩", 1.0, -1.0),
        ("|α,−α⟩ + |−α,α⟩", -1.0, 1.0),
        ("|α,−α⟩ − |−α,α⟩", -1.0, -1.0),
    ] {
        let cat = two_mode_cat(cr(1.0), cr(beta), sign, d)?;
        let (w1, w2) = hz_first_order(&cat);
        println!("{label}: w1 = {w1:+.6}, w2 = {w2:+.6}");
        for eta in [0.8, 0.4] {
            let out = apply_channel(&cat, &DampingChannel::new(eta, 0.0, Mode::A)?)?;
            let (v1, v2) = hz_first_order(&out);
            println!("  eta = {eta}: w1/η = {:+.6}, w2/η = {:+.6}", v1 / eta, v2 / eta);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
