use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use equivibe::burnside::{recurrence_coefficient, recurrence_value, BurnsideElement};
use equivibe::symmetry::window::{Sub, Window};
use equivibe::symmetry::{ClassId, Lattice};
use equivibe::Error;

fn generators(lat: &Lattice) -> Vec<ClassId> {
    (0..lat.templates.len())
        .map(|i| lat.class(i, 1))
        .filter(|&c| lat.is_finite_weyl(c))
        .collect()
}

#[test]
fn ring_axioms_on_random_triples() {
    let n = 6;
    let lat = Lattice::get(n).unwrap();
    let gens = generators(&lat);
    assert_eq!(gens.len(), 76);
    let unit = BurnsideElement::unit(n).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let pick = |rng: &mut StdRng| {
            let g = gens[rng.gen_range(0..gens.len())];
            let c = rng.gen_range(-3i64..=3);
            BurnsideElement::from_terms(n, [(g, c)]).unwrap()
        };
        let a = pick(&mut rng).try_add(&pick(&mut rng)).unwrap();
        let b = pick(&mut rng);
        let c = pick(&mut rng);
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab, b.multiply(&a).unwrap());
        assert_eq!(
            ab.multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
        assert_eq!(a.multiply(&unit).unwrap(), a);
        // distributivity
        let lhs = a.multiply(&b.try_add(&c).unwrap()).unwrap();
        let rhs = ab.try_add(&a.multiply(&c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn only_finite_weyl_classes_carry_coefficients() {
    let lat = Lattice::get(6).unwrap();
    let infinite = lat.class(0, 1);
    assert!(!lat.is_finite_weyl(infinite));
    assert!(matches!(
        BurnsideElement::basis(6, infinite),
        Err(Error::Domain(_))
    ));
    assert!(BurnsideElement::zero(6).is_zero());
    let x = BurnsideElement::basis(6, lat.class(30, 1)).unwrap();
    assert!(x.try_sub(&x).unwrap().is_zero());
}

#[test]
fn recurrence_edge_cases() {
    let lat = Lattice::get(6).unwrap();
    let g = lat.top();
    assert_eq!(
        recurrence_coefficient(&lat, g, g, g, &BTreeMap::new()).unwrap(),
        1
    );
    assert_eq!(recurrence_value(0, 7, 4, &[]).unwrap(), 0);
    assert!(matches!(
        recurrence_value(3, 1, 2, &[]),
        Err(Error::Consistency(_))
    ));
}

/// `|(G/H)^L|`: cosets `gH` fixed by `L`, enumerated in a window that
/// contains a representative of every such coset.
fn mark(w: &Window, l: &Sub, h: &Sub) -> u64 {
    let count = w
        .elements()
        .filter(|&g| l.elems.iter().all(|&x| h.contains(w.conj(w.inv(g), x))))
        .count();
    assert_eq!(count % h.order(), 0);
    (count / h.order()) as u64
}

#[test]
fn products_match_marks_in_a_finite_window() {
    let n = 6;
    let lat = Lattice::get(n).unwrap();
    let w = Window::new(n as u32, (8 * lat.m) as u32);
    let gens = generators(&lat);
    let subs: Vec<Sub> = gens
        .iter()
        .map(|&c| lat.realize_in(c, &w).unwrap())
        .collect();
    // table of marks; row L, column J
    let k = gens.len();
    let marks: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| mark(&w, &subs[i], &subs[j])).collect())
        .collect();
    for i in 0..k {
        assert_eq!(
            marks[i][i],
            lat.weyl(gens[i]).unwrap(),
            "|W({})|",
            lat.name(gens[i])
        );
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(subs[i].order()));
    let mut rng = StdRng::seed_from_u64(17);
    for trial in 0..120 {
        let (a, b) = if trial < 20 {
            (trial % k, (trial * 7 + 3) % k)
        } else {
            (rng.gen_range(0..k), rng.gen_range(0..k))
        };
        let mut coef = vec![0i64; k];
        for &l in &order {
            let mut num = (marks[l][a] * marks[l][b]) as i64;
            for &j in &order {
                if j != l && coef[j] != 0 {
                    num -= coef[j] * marks[l][j] as i64;
                }
            }
            assert_eq!(num % marks[l][l] as i64, 0);
            coef[l] = num / marks[l][l] as i64;
        }
        let oracle = BurnsideElement::from_terms(n, gens.iter().copied().zip(coef)).unwrap();
        let product = BurnsideElement::basis(n, gens[a])
            .unwrap()
            .multiply(&BurnsideElement::basis(n, gens[b]).unwrap())
            .unwrap();
        assert_eq!(
            product,
            oracle,
            "({}) * ({})",
            lat.name(gens[a]),
            lat.name(gens[b])
        );
    }
}
