// Closed-form two-qubit concurrence under damping against the Wootters
// formula, including sudden death for `(|00⟩ + 2|11⟩)/√5`.

use decolab::channels::{apply_channel, apply_two_sided, DampingChannel};
use decolab::entanglement::{c1_closed, c2_closed, c2_unbalanced, sde_threshold, wootters_concurrence};
use decolab::fock::{Mode, QubitPure};
use decolab::numerics::cr;

pub fn run_example() -> decolab::Result<()> {
    let q = QubitPure::normalized(cr(1.0), cr(0.0), cr(0.0), cr(2.0))?;
    println!("initial concurrence {:.4}, threshold {:?}", q.concurrence(), sde_threshold(&q)?);
    println!("  eta   both(num)  both(closed)  one(num)  one(closed)");
    for k in (0..=10).rev() {
        let eta = k as f64 / 10.0;
        let both = wootters_concurrence(&apply_two_sided(&q.to_state(), eta, eta)?)?.value;
        let one = apply_channel(&q.to_state(), &DampingChannel::new(eta, 0.0, Mode::A)?)?;
        let one = wootters_concurrence(&one)?.value;
        println!(
            "  {eta:.1}   {both:.6}   {:+.6}     {one:.6}  {:.6}",
            c2_closed(&q, eta)?,
            c1_closed(&q, eta)?
        );
    }
    println!("fixed η_a η_b = 0.36:");
    for eta_a in [0.4, 0.5, 0.6, 0.72, 0.9] {
        println!("  η_a = {eta_a}: C = {:+.6}", c2_unbalanced(&q, eta_a, 0.36 / eta_a)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
