//! Runs the command line pipeline in-process for a few degrees.
fn main() {
    let dir = std::env::temp_dir();
    for d in ["2", "5", "9"] {
        let out = dir.join(format!("odoni-pipeline-{d}.json"));
        let code = odoni::cli::run([
            "odoni", "pipeline", "--degree", d, "--depth", "2", "--primes", "500",
            "--out", out.to_str().unwrap(),
        ]);
        println!("d={d}: exit {code}, report at {}", out.display());
    }
}
