use std::collections::BTreeSet;

use equivibe::symmetry::window::Window;
use equivibe::symmetry::{subgroup_classes, ClassId, DihedralElement, Lattice, PlanarElement};
use equivibe::Error;

struct Row {
    id: usize,
    h: String,
    k: String,
    l: String,
    z: String,
    r: String,
    weyl: Option<u64>,
}

fn table() -> Vec<Row> {
    include_str!("data/d6_classes.csv")
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            Row {
                id: f[0].parse().unwrap(),
                h: f[1].into(),
                k: f[2].into(),
                l: f[3].into(),
                z: f[4].into(),
                r: f[5].into(),
                weyl: f[6].parse().ok(),
            }
        })
        .collect()
}

#[test]
fn hexagonal_class_table_is_reproduced() {
    let rows = table();
    assert_eq!(rows.len(), 101);
    let classes = subgroup_classes(6).unwrap();
    assert_eq!(classes.len(), 101);
    for (row, c) in rows.iter().zip(&classes) {
        assert_eq!(c.table_id, row.id);
        assert_eq!(c.weyl_order, row.weyl, "|W| of class {}", row.id);
        assert_eq!(c.h, row.h, "H of class {}", row.id);
        assert_eq!(c.k, row.k, "K of class {}", row.id);
        let l = if row.l.is_empty() { "Z1" } else { &row.l };
        assert_eq!(c.l, l, "L of class {}", row.id);
        if !row.z.is_empty() {
            assert_eq!(c.z, row.z, "Z of class {}", row.id);
        }
        if !row.r.is_empty() {
            assert_eq!(c.r, row.r, "R of class {}", row.id);
        }
    }
    assert_eq!(
        classes.iter().filter(|c| c.weyl_order.is_none()).count(),
        25
    );
    let top: Vec<_> = classes.iter().filter(|c| c.name == "D6xO2").collect();
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].weyl_order, Some(1));
    assert_eq!(classes[69].weyl_order, Some(24));
}

#[test]
fn unsupported_sizes_are_rejected() {
    assert!(matches!(subgroup_classes(2), Err(Error::Unsupported(_))));
    assert!(matches!(subgroup_classes(64), Err(Error::Unsupported(_))));
}

#[test]
fn subconjugacy_is_a_partial_order() {
    for n in [4, 6] {
        let lat = Lattice::get(n).unwrap();
        let ids: Vec<ClassId> = (0..lat.templates.len()).map(|i| lat.class(i, 1)).collect();
        let k = ids.len();
        let le: Vec<Vec<bool>> = ids
            .iter()
            .map(|&a| ids.iter().map(|&b| lat.is_subconjugate(a, b)).collect())
            .collect();
        for a in 0..k {
            assert!(le[a][a]);
            for b in 0..k {
                if a != b {
                    assert!(
                        !(le[a][b] && le[b][a]),
                        "{} and {} equivalent",
                        lat.name(ids[a]),
                        lat.name(ids[b])
                    );
                }
                if le[a][b] {
                    for c in 0..k {
                        if le[b][c] {
                            assert!(le[a][c]);
                        }
                    }
                }
            }
        }
        let top = lat.top();
        assert!(ids.iter().all(|&a| lat.is_subconjugate(a, top)));
    }
}

#[test]
fn export_covers_generate_the_order() {
    let lat = Lattice::get(6).unwrap();
    let ex = lat.export(1);
    assert_eq!(ex.classes.len(), 101);
    let k = 101;
    let mut reach = vec![vec![false; k + 1]; k + 1];
    for i in 1..=k {
        reach[i][i] = true;
    }
    for [a, b] in &ex.covers {
        reach[*a][*b] = true;
    }
    for m in 1..=k {
        for i in 1..=k {
            if reach[i][m] {
                for j in 1..=k {
                    if reach[m][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    for (i, a) in ex.classes.iter().enumerate() {
        for (j, b) in ex.classes.iter().enumerate() {
            assert_eq!(
                reach[i + 1][j + 1],
                lat.is_subconjugate(a.id, b.id),
                "{} {}",
                a.name,
                b.name
            );
        }
    }
    let json = serde_json::to_value(&ex).unwrap();
    assert_eq!(json["classes"][100]["name"], "D6xO2");
}

/// Distinct conjugates of `K` containing `L`, i.e. `|N(L,K)/N(K)|`, by
/// enumeration over a window holding every conjugating rotation that can
/// keep reflection axes aligned.
fn brute_force_pairs(lat: &Lattice, l: ClassId, k: ClassId) -> u64 {
    let w = Window::new(lat.n as u32, (8 * lat.m) as u32);
    let ls = lat.realize_in(l, &w).unwrap();
    let ks = lat.realize_in(k, &w).unwrap();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for g in w.elements() {
        let c: BTreeSet<u32> = ks.elems.iter().map(|&x| w.conj(g, x)).collect();
        if ls.elems.iter().all(|x| c.contains(x)) {
            seen.insert(c.into_iter().collect());
        }
    }
    seen.len() as u64
}

#[test]
fn pair_counts_match_enumeration() {
    let lat = Lattice::get(6).unwrap();
    let finite: Vec<ClassId> = (0..lat.templates.len())
        .map(|i| lat.class(i, 1))
        .filter(|&c| lat.is_finite_weyl(c) && lat.fold_of(c).is_some())
        .collect();
    assert_eq!(finite.len(), 44);
    for &l in &finite {
        assert_eq!(lat.n_pairs(l, l).unwrap(), 1);
        for &k in &finite {
            assert_eq!(
                lat.n_pairs(l, k).unwrap(),
                brute_force_pairs(&lat, l, k),
                "n({}, {})",
                lat.name(l),
                lat.name(k)
            );
        }
    }
    let top = lat.top();
    for i in 0..lat.templates.len() {
        let c = lat.class(i, 1);
        if lat.is_finite_weyl(c) {
            assert_eq!(lat.n_pairs(c, top).unwrap(), 1, "{}", lat.name(c));
        } else {
            assert!(matches!(lat.n_pairs(c, top), Err(Error::Unsupported(_))));
        }
    }
}

#[test]
fn dihedral_group_axioms() {
    for n in 3..=8 {
        let all: Vec<DihedralElement> = (0..n)
            .flat_map(|r| [false, true].map(|f| DihedralElement { n, r, reflect: f }))
            .collect();
        let e = DihedralElement::identity(n);
        for a in &all {
            assert_eq!(a.compose(&e), *a);
            assert_eq!(e.compose(a), *a);
            assert_eq!(a.compose(&a.inverse()), e);
            for b in &all {
                let ab = a.compose(b);
                for k in 0..n {
                    assert_eq!(ab.permute(k), a.permute(b.permute(k)));
                }
                for c in &all {
                    assert_eq!(ab.compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }
}

#[test]
fn planar_group_axioms() {
    let samples: Vec<PlanarElement> = (0..12)
        .map(|i| PlanarElement {
            angle: 0.37 * i as f64,
            reflect: i % 3 == 0,
        })
        .collect();
    let close = |a: &PlanarElement, b: &PlanarElement| {
        let p = [0.3, -1.7];
        let (x, y) = (a.apply(p), b.apply(p));
        (x[0] - y[0]).abs().max((x[1] - y[1]).abs()) <= 1e-12
    };
    for a in &samples {
        assert!(close(&a.compose(&a.inverse()), &PlanarElement::identity()));
        for b in &samples {
            let p = [0.8, 0.1];
            let lhs = a.compose(b).apply(p);
            let rhs = a.apply(b.apply(p));
            assert!((lhs[0] - rhs[0]).abs() <= 1e-12 && (lhs[1] - rhs[1]).abs() <= 1e-12);
            for c in &samples {
                assert!(close(&a.compose(b).compose(c), &a.compose(&b.compose(c))));
            }
        }
    }
}
