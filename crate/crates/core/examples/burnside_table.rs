//! Products of finite-Weyl generators in the Burnside ring, as CSV.
//!
//! `cargo run --example burnside_table -- [n] [fold] > table.csv`

use equivibe::burnside::write_multiplication_table;
use equivibe::symmetry::Lattice;

fn main() -> equivibe::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let fold = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let lat = Lattice::get(n)?;
    let mut classes = lat.finite_weyl_classes(fold, true, false);
    classes.push(lat.top());
    classes.dedup();
    write_multiplication_table(n, &classes, std::io::stdout().lock())
}
