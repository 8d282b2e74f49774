//! Periodic orbits near the first-harmonic crossings of the `n = 6` ring,
//! written as CSV and SVG under `target/simulate/`.
//!
//! Usage: `cargo run --release --example simulate -- [eps_over_r0]`

use std::fs;
use std::time::Instant;

use equivibe::degrees::hexagonal_irrep;
use equivibe::dynamics::{
    continue_orbit, find_periodic_orbit, symmetry_deviation, ShootingOptions,
};
use equivibe::model::{find_equilibrium, PotentialParams};
use equivibe::spectrum::{critical_set, SpectralReport};
use equivibe::symmetry::Lattice;

fn main() -> equivibe::Result<()> {
    let ratio: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.05);
    let p = PotentialParams::reference();
    let eq = find_equilibrium(&p)?;
    let report = SpectralReport::compute(&eq, &p)?;
    let lat = Lattice::get(6)?;
    let dir = std::path::Path::new("target/simulate");
    fs::create_dir_all(dir)?;
    for c in critical_set(&report, 1)? {
        let t0 = Instant::now();
        let orbit = match find_periodic_orbit(
            &eq,
            &report,
            &c,
            ratio * eq.r0,
            &p,
            &ShootingOptions::default(),
        ) {
            Ok(o) => o,
            Err(e) => {
                println!("{}: {e}", c.label());
                continue;
            }
        };
        let long = continue_orbit(&orbit, 100, &p, 1000)?;
        println!(
            "{:16} mu {:>12.8} lambda {:.8} -> {:.8} ({:+.3}%)  residual {:.2e}  drift(100 periods) {:.2e}  {:.2}s",
            orbit.label,
            orbit.seed_mu,
            orbit.seed_lambda,
            orbit.lambda,
            100.0 * (orbit.lambda / orbit.seed_lambda - 1.0),
            orbit.residual,
            long.max_energy_drift,
            t0.elapsed().as_secs_f64()
        );
        if c.j == 3 || c.j <= 2 {
            let v = if c.j == 3 {
                c.irrep
            } else {
                hexagonal_irrep(c.j)?
            };
            if v == c.irrep {
                for id in equivibe::degrees::representation_maximal_orbit_types(
                    6,
                    equivibe::degrees::IrreducibleLabel::Folded(v, 1),
                )? {
                    println!(
                        "    deviation from {:28} {:.3e}",
                        lat.name(id),
                        symmetry_deviation(&orbit.trajectory, id)?
                    );
                }
            }
        }
        let stem = orbit.label.replace(['{', '}', ','], "_");
        orbit
            .trajectory
            .write_csv(fs::File::create(dir.join(format!("{stem}.csv")))?)?;
        fs::write(
            dir.join(format!("{stem}.svg")),
            orbit.trajectory.to_svg(&orbit.label),
        )?;
    }
    Ok(())
}
