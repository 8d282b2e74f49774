//! Twisted basic degrees `Deg_{W_{j,l}}` for `D_n x O(2)`.
//!
//! Usage: `cargo run --example basic_degrees -- [n] [l]`

use equivibe::degrees::{basic_degree, twisted_basic_degree};
use equivibe::symmetry::Irrep;

fn main() -> equivibe::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let l: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    for v in Irrep::slice_irreps(n) {
        println!("Deg[{v}]      = {}", basic_degree(n, v)?);
        println!("Deg[{v}, l={l}] = {}", twisted_basic_degree(n, v, l)?);
    }
    Ok(())
}
