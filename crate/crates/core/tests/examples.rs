#[allow(dead_code)]
mod kraus_channel {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kraus_channel.rs"));
}

#[allow(dead_code)]
mod coherent_bath {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherent_bath.rs"));
}

#[allow(dead_code)]
mod moment_witness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/moment_witness.rs"));
}

#[allow(dead_code)]
mod hillery_zubairy {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hillery_zubairy.rs"));
}

#[allow(dead_code)]
mod qubit_concurrence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qubit_concurrence.rs"));
}

#[allow(dead_code)]
mod inverse_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/inverse_sweep.rs"));
}

#[allow(dead_code)]
mod sde_search {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sde_search.rs"));
}

#[test]
fn kraus_channel_example_runs() {
    kraus_channel::run_example().expect("kraus_channel example should run");
}

#[test]
fn coherent_bath_example_runs() {
    coherent_bath::run_example().expect("coherent_bath example should run");
}

#[test]
fn moment_witness_example_runs() {
    moment_witness::run_example().expect("moment_witness example should run");
}

#[test]
fn hillery_zubairy_example_runs() {
    hillery_zubairy::run_example().expect("hillery_zubairy example should run");
}

#[test]
fn qubit_concurrence_example_runs() {
    qubit_concurrence::run_example().expect("qubit_concurrence example should run");
}

#[test]
fn inverse_sweep_example_runs() {
    inverse_sweep::run_example().expect("inverse_sweep example should run");
}

#[test]
fn sde_search_example_runs() {
    sde_search::run_example().expect("sde_search example should run");
}
