//! Isotypical spectrum: closed forms against the projected Hessian.
//!
//! `cargo run --example spectrum -- [n] [--harmonic]`

use equivibe::format::float;
use equivibe::model::{find_equilibrium, PotentialParams};
use equivibe::spectrum::{dense_slice_eigenvalues, SpectralReport};

fn main() -> equivibe::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.iter().find_map(|s| s.parse().ok()).unwrap_or(6);
    let p = if args.iter().any(|a| a == "--harmonic") {
        PotentialParams::harmonic(n)
    } else {
        PotentialParams {
            n,
            ..PotentialParams::reference()
        }
    };
    let eq = find_equilibrium(&p)?;
    let report = SpectralReport::compute(&eq, &p)?;
    println!("n = {n}, r0 = {}", float(report.r0));
    for m in &report.modes {
        println!(
            "  {:<6} {:<4} x{}  {}",
            m.label(),
            m.irrep.to_string(),
            m.real_multiplicity,
            float(m.mu)
        );
    }
    println!(
        "largest cross-block entry     {:.2e}",
        report.max_cross_term
    );
    println!(
        "closed form vs projection     {:.2e}",
        report.closed_form_deviation
    );
    let dense = dense_slice_eigenvalues(&eq, &p)?;
    let listed: Vec<String> = dense.iter().map(|&x| float(x)).collect();
    println!("dense slice eigenvalues: {}", listed.join(" "));
    Ok(())
}
