//! `omega(lambda)` at every first-harmonic crossing of the `n = 6` example.
//!
//! Usage: `cargo run --example invariants -- [--printed] [--literal]`

use equivibe::config::{REFERENCE_EIGENVALUES, REFERENCE_R0};
use equivibe::degrees::{omega_invariant, OmegaMode};
use equivibe::model::{find_equilibrium, PotentialParams};
use equivibe::spectrum::{critical_set, SpectralReport};

fn main() -> equivibe::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode = if args.iter().any(|a| a == "--literal") {
        OmegaMode::Literal
    } else {
        OmegaMode::PaperStyle
    };
    let p = PotentialParams::reference();
    let report = if args.iter().any(|a| a == "--printed") {
        SpectralReport::from_labelled(6, REFERENCE_R0, &REFERENCE_EIGENVALUES)?
    } else {
        SpectralReport::compute(&find_equilibrium(&p)?, &p)?
    };
    for c in critical_set(&report, 1)? {
        let w = omega_invariant(&report, &c, mode)?;
        println!(
            "{} = {:.8}  period {:.8}",
            w.label, c.lambda, c.limit_period
        );
        println!("  omega = {}", w.value);
        let names: Vec<&str> = w
            .maximal_orbit_types
            .iter()
            .map(|s| s.name.as_str())
            .collect();
        println!("  maximal orbit types: {}", names.join(", "));
    }
    Ok(())
}
