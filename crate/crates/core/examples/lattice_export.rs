//! Write the subgroup class lattice with covering relations as JSON.
//!
//! `cargo run --example lattice_export -- 6 1 > lattice.json`

use equivibe::format::to_json;
use equivibe::symmetry::Lattice;

fn main() -> equivibe::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let fold = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let export = Lattice::get(n)?.export(fold);
    eprintln!(
        "{} classes, {} covering pairs",
        export.classes.len(),
        export.covers.len()
    );
    print!("{}", to_json(&export)?);
    Ok(())
}
