mod linear_algebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/linear_algebra.rs"));
}

mod construct_states {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/construct_states.rs"));
}

mod criteria_battery {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/criteria_battery.rs"));
}

mod classify_witnesses {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classify_witnesses.rs"));
}

mod tensor_rank {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tensor_rank.rs"));
}

mod maximally_correlated {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/maximally_correlated.rs"));
}

mod monoid_product {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monoid_product.rs"));
}

mod slocc_mixing {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/slocc_mixing.rs"));
}

mod haar_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/haar_sweep.rs"));
}

mod verify_census {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_census.rs"));
}

mod command_line {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/command_line.rs"));
}

#[test]
fn linear_algebra_example_runs() {
    linear_algebra::run_example().expect("linear_algebra example should run");
}

#[test]
fn construct_states_example_runs() {
    construct_states::run_example().expect("construct_states example should run");
}

#[test]
fn criteria_battery_example_runs() {
    criteria_battery::run_example().expect("criteria_battery example should run");
}

#[test]
fn classify_witnesses_example_runs() {
    classify_witnesses::run_example().expect("classify_witnesses example should run");
}

#[test]
fn tensor_rank_example_runs() {
    tensor_rank::run_example().expect("tensor_rank example should run");
}

#[test]
fn maximally_correlated_example_runs() {
    maximally_correlated::run_example().expect("maximally_correlated example should run");
}

#[test]
fn monoid_product_example_runs() {
    monoid_product::run_example().expect("monoid_product example should run");
}

#[test]
fn slocc_mixing_example_runs() {
    slocc_mixing::run_example().expect("slocc_mixing example should run");
}

#[test]
fn haar_sweep_example_runs() {
    haar_sweep::run_example().expect("haar_sweep example should run");
}

#[test]
fn verify_census_example_runs() {
    verify_census::run_example().expect("verify_census example should run");
}

#[test]
fn command_line_example_runs() {
    command_line::run_example().expect("command_line example should run");
}
