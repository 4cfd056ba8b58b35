// Drive the command-line front end in process.

use std::error::Error;

use tripartite::cli::{main_with_args, EXIT_OK};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("tripartite-cli-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("w.json");
    let path = path.to_str().ok_or("non-UTF-8 temp path")?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    for args in [
        vec!["tripartite", "construct", "w", "-o", path],
        vec!["tripartite", "--effort", "0", "classify", path],
    ] {
        let code = main_with_args(args, &mut out, &mut err);
        assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
    }
    print!("{}", String::from_utf8(out)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
