// Random search for separable states whose two-sided inverse-damped
// preimage is physical and entangled.

use decolab::experiments::{default_inverse_grid, sde_search, SeparableSpec};

pub fn run_example() -> decolab::Result<()> {
    let spec = SeparableSpec::new(20, 3, 0)?;
    let hits = sde_search(&spec, &default_inverse_grid(), 100, true)?;
    println!("{} hits in 100 trials", hits.len());
    if let Some(best) = hits.iter().max_by(|a, b| a.preimage_log_neg.total_cmp(&b.preimage_log_neg)) {
        println!(
            "best: seed {} at eta = {:.3}, preimage min eig {:+.3e}, E_N = {:.4}",
            best.seed, best.eta, best.preimage_min_eig, best.preimage_log_neg
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> decolab::Result<()> {
    run_example()
}
