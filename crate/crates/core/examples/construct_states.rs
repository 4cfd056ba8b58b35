// Build states from the named families and round-trip one through a file.

use std::error::Error;

use tripartite::io::{read_state, write_state};
use tripartite::states::{ghz, haar_random, psi_a, rnn_boundary, rrr_symmetric, tiles_pnn, w_state};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let states = [
        ("ghz(2)", ghz(2)?),
        ("w", w_state()),
        ("rnn_boundary(2)", rnn_boundary(2)?),
        ("rrr_symmetric(3)", rrr_symmetric(3)?),
        ("psi_a(3)", psi_a(3)?),
        ("tiles", tiles_pnn()),
        ("haar 2x3x4", haar_random([2, 3, 4], 7)),
    ];
    for (name, psi) in &states {
        println!(
            "{name:<18} dims {:?} local ranks {:?}",
            psi.dims(),
            psi.local_ranks(1e-8)
        );
    }

    let dir = std::env::temp_dir().join(format!("tripartite-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("rnn.json");
    write_state(&path, &states[2].1)?;
    let back = read_state(&path)?;
    assert_eq!(back, states[2].1);
    println!("round trip through {} is exact", path.display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
