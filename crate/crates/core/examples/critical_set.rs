//! Critical frequencies up to a given harmonic, computed and as quoted.
//!
//! `cargo run --example critical_set -- [l_max]`

use equivibe::config::{REFERENCE_EIGENVALUES, REFERENCE_R0};
use equivibe::model::{find_equilibrium, PotentialParams};
use equivibe::spectrum::{critical_set, SpectralReport};

fn main() -> equivibe::Result<()> {
    let l_max = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let p = PotentialParams::reference();
    let computed = SpectralReport::compute(&find_equilibrium(&p)?, &p)?;
    let quoted = SpectralReport::from_labelled(6, REFERENCE_R0, &REFERENCE_EIGENVALUES)?;
    for (name, report) in [("computed", &computed), ("quoted eigenvalues", &quoted)] {
        println!("{name}:");
        for c in critical_set(report, l_max)? {
            println!(
                "  {:<16} mu {:>14.8}  lambda {:.8}  period {:.8}",
                c.label(),
                c.mu,
                c.lambda,
                c.limit_period
            );
        }
    }
    Ok(())
}
