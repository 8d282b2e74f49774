//! Equilibrium radius of the symmetric ring for a range of `n`.
//!
//! `cargo run --example equilibrium -- [A B sigma]`

use equivibe::format::float;
use equivibe::model::{find_equilibrium, gradient, PotentialParams};

fn main() -> equivibe::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let r = PotentialParams::reference();
    let (a, b, sigma) = match args.as_slice() {
        [a, b, s] => (*a, *b, *s),
        _ => (r.a, r.b, r.sigma),
    };
    println!("{:>3} {:>16} {:>16} {:>12}", "n", "r0", "phi(r0)", "|grad|");
    for n in 3..=12 {
        let p = PotentialParams::new(n, a, b, sigma)?;
        let eq = find_equilibrium(&p)?;
        let g = gradient(&eq.u0, &p)?.norm();
        println!(
            "{n:>3} {:>16} {:>16} {:>12.2e}",
            float(eq.r0),
            float(eq.phi_min),
            g
        );
    }
    Ok(())
}
