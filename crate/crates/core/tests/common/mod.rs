//! Golden data shared by the integration tests.
#![allow(dead_code)]

use equivibe::burnside::BurnsideElement;
use equivibe::symmetry::{Lattice, Parity};

/// Hexagonal twisted degrees at fold `l`, in fold-one class names.
pub const TWISTED: [&[(i64, &str)]; 4] = [
    &[(1, "D6xO2"), (-1, "D6xD1")],
    &[
        (1, "D6xO2"),
        (-1, "D6^{Z1}x_{D6}D6"),
        (-1, "D2^{D1}x_{Z2}D2"),
        (-1, "D2^{D~1}x_{Z2}D2"),
        (2, "D2^{Z1}_{Z2}x_{D2}D2"),
        (1, "Z2^{Z1}x_{Z2}D2"),
    ],
    &[
        (1, "D6xO2"),
        (-1, "D6^{Z2}x_{D3}D3"),
        (-1, "D2^{Z2}x_{Z2}D2"),
        (-1, "D2xD1"),
        (2, "D2^{Z2}x_{D1}D1"),
        (1, "Z2xD1"),
    ],
    &[(1, "D6xO2"), (-1, "D6^{D~3}x_{Z2}D2")],
];

/// `omega` at the `+` branch of the second component, first harmonic.
pub const OMEGA_PLUS_21: [(i64, &str); 15] = [
    (-1, "D2^{Z2}x_{Z2}D2"),
    (1, "D~1^{Z1}x_{Z2}D2"),
    (-1, "D2xD1"),
    (1, "Z2xD1"),
    (1, "D1xD1"),
    (-1, "Z1xD1"),
    (-1, "D6^{Z2}x_{D3}D3"),
    (1, "D~3^{Z1}x_{D3}D3"),
    (1, "D3^{Z1}x_{D3}D3"),
    (1, "D2^{Z1}_{D~1}x_{D2}D2"),
    (2, "D2^{Z2}x_{D1}D1"),
    (1, "D2^{D1}x_{D1}D1"),
    (-2, "D~1^{Z1}x_{D1}D1"),
    (-1, "Z2^{Z1}x_{D1}D1"),
    (-2, "D1^{Z1}x_{D1}D1"),
];

/// Maximal orbit types of the folded hexagonal irreducibles.
pub const MAXIMAL: [&[&str]; 4] = [
    &["D6xD1"],
    &["D6^{Z1}x_{D6}D6", "D2^{D1}x_{Z2}D2", "D2^{D~1}x_{Z2}D2"],
    &["D6^{Z2}x_{D3}D3", "D2^{Z2}x_{Z2}D2", "D2xD1"],
    &["D6^{D~3}x_{Z2}D2"],
];

pub fn element(terms: &[(i64, &str)], fold: usize) -> BurnsideElement {
    let lat = Lattice::get(6).unwrap();
    let ids = terms.iter().map(|&(c, name)| {
        let id = if name == "D6xO2" {
            lat.top()
        } else {
            lat.by_name(name, 1).unwrap()
        };
        (
            lat.class(
                id.template as usize,
                if lat.fold_of(id).is_some() { fold } else { 0 },
            ),
            c,
        )
    });
    BurnsideElement::from_terms(6, ids).unwrap()
}

/// Quoted critical values, `(j, l, branch, lambda)`.
pub const QUOTED_LAMBDA: [(usize, usize, Option<Parity>, f64); 15] = [
    (1, 1, None, 0.15248819),
    (3, 1, Some(Parity::Minus), 0.22596887),
    (2, 1, Some(Parity::Plus), 0.29587099),
    (1, 2, None, 0.30497638),
    (2, 1, Some(Parity::Minus), 0.36194127),
    (3, 2, Some(Parity::Minus), 0.45193775),
    (1, 3, None, 0.45746457),
    (2, 2, Some(Parity::Minus), 0.72388254),
    (1, 4, None, 0.60995276),
    (3, 3, Some(Parity::Minus), 0.67790662),
    (2, 2, Some(Parity::Plus), 0.59174197),
    (1, 5, None, 0.76244095),
    (2, 3, Some(Parity::Plus), 0.88761296),
    (3, 4, Some(Parity::Minus), 0.90387549),
    (1, 6, None, 0.91492914),
];

/// Quoted limit periods `2 pi lambda`.
pub const QUOTED_PERIODS: [((usize, usize, Option<Parity>), f64); 5] = [
    ((1, 1, None), 0.95811155),
    ((3, 1, Some(Parity::Minus)), 1.41980428),
    ((2, 1, Some(Parity::Plus)), 1.85901226),
    ((1, 2, None), 1.91622311),
    ((2, 1, Some(Parity::Minus)), 2.27414407),
];
