//! Print the class table of `D_6 x O(2)` with Weyl orders.

use equivibe::symmetry::Lattice;

fn main() -> equivibe::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let lat = Lattice::get(n)?;
    for t in &lat.templates {
        let weyl = t.weyl_order.map_or("inf".to_string(), |w| w.to_string());
        println!("{:>3}  {:<28} {}", t.id, t.name, weyl);
    }
    Ok(())
}
