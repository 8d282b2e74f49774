//! Full atlas through the command-line entry point, written to a directory.
//!
//! `cargo run --release --example atlas -- [out_dir]`

fn main() {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "target/atlas".into());
    let mut out = Vec::new();
    let code = equivibe::cli::run(
        ["equivibe", "atlas", "--omega-l-max", "2", "--out-dir", &dir],
        &mut out,
        &mut std::io::stderr(),
    );
    if code != 0 {
        std::process::exit(code);
    }
    let doc: serde_json::Value = serde_json::from_slice(&out).expect("atlas output is JSON");
    for c in doc["crossings"].as_array().into_iter().flatten() {
        println!(
            "{:<16} {} predicted branch(es): {}",
            c["label"].as_str().unwrap_or(""),
            c["predicted_branch_count"],
            c["predicted_orbit_types"]
        );
    }
    println!("written to {dir}/atlas.json");
}
