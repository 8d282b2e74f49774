//! Arithmetic in the Burnside ring of `D_n x O(2)`: integer combinations of
//! classes with finite Weyl group.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symmetry::{ClassId, Lattice};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideElement {
    n: usize,
    terms: BTreeMap<ClassId, i64>,
}

impl BurnsideElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The class of the whole group, the ring unit.
    pub fn unit(n: usize) -> Result<Self> {
        let lat = Lattice::get(n)?;
        Ok(Self::basis_unchecked(n, lat.top()))
    }

    pub fn basis(n: usize, id: ClassId) -> Result<Self> {
        let lat = Lattice::get(n)?;
        if !lat.is_finite_weyl(id) {
            return Err(Error::Domain(format!(
                "{} has an infinite Weyl group and is not a Burnside generator",
                lat.name(id)
            )));
        }
        Ok(Self::basis_unchecked(n, id))
    }

    fn basis_unchecked(n: usize, id: ClassId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, 1);
        Self { n, terms }
    }

    /// Build from `(class, coefficient)` pairs, dropping zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ClassId, i64)>) -> Result<Self> {
        let lat = Lattice::get(n)?;
        let mut out = Self::zero(n);
        for (id, c) in terms {
            if c != 0 && !lat.is_finite_weyl(id) {
                return Err(Error::Domain(format!(
                    "coefficient on {} which has an infinite Weyl group",
                    lat.name(id)
                )));
            }
            out.add_term(id, c);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, id: ClassId) -> i64 {
        self.terms.get(&id).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (ClassId, i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, id: ClassId, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(id).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&id);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.n);
        for (id, c) in self.terms() {
            out.add_term(id, c * k);
        }
        out
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Domain(format!(
                "elements of different rings: n = {} and n = {}",
                self.n, o.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (id, c) in o.terms() {
            out.add_term(id, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.scale(-1))
    }

    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let lat = Lattice::get(self.n)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in self.terms() {
            for (b, cb) in o.terms() {
                let prod = generator_product(&lat, a, b)?;
                for (&l, &c) in prod.iter() {
                    out.add_term(l, ca * cb * c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::unit(self.n)?;
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// `(name, coefficient)` in table order.
    pub fn expansion(&self) -> Vec<(String, i64)> {
        match Lattice::get(self.n) {
            Ok(lat) => self.terms().map(|(id, c)| (lat.name(id), c)).collect(),
            Err(_) => Vec::new(),
        }
    }

    /// Same, with family names (`l` in place of the fold).
    pub fn family_expansion(&self) -> Vec<(String, usize, i64)> {
        match Lattice::get(self.n) {
            Ok(lat) => self
                .terms()
                .map(|(id, c)| (lat.template(id).name.clone(), id.fold as usize, c))
                .collect(),
            Err(_) => Vec::new(),
        }
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (name, c)) in self.expansion().into_iter().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sep = if i > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sep}{sign}({name})")?;
            } else {
                write!(f, "{sep}{sign}{mag}({name})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for BurnsideElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            class: &'a str,
            coefficient: i64,
        }
        let exp = self.expansion();
        let mut seq = s.serialize_seq(Some(exp.len()))?;
        for (name, c) in &exp {
            seq.serialize_element(&Term {
                class: name,
                coefficient: *c,
            })?;
        }
        seq.end()
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, o: Self) -> BurnsideElement {
        self.try_add(o).expect("operands from the same ring")
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, o: Self) -> BurnsideElement {
        self.try_sub(o).expect("operands from the same ring")
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scale(-1)
    }
}

impl Mul for &BurnsideElement {
    type Output = Result<BurnsideElement>;
    fn mul(self, o: Self) -> Result<BurnsideElement> {
        self.multiply(o)
    }
}

/// One step of the top-down recurrence:
/// `(m_h m_k - sum n(L, L~) n_{L~} |W(L~)|) / |W(L)|`, where `m_h`, `m_k`
/// are the marks `n(L, H)|W(H)|` and `n(L, K)|W(K)|` and `larger` lists
/// `(n(L, L~), n_{L~}, |W(L~)|)` over the classes above `L`.
pub fn recurrence_value(
    mark_h: i64,
    mark_k: i64,
    weyl_l: u64,
    larger: &[(u64, i64, u64)],
) -> Result<i64> {
    let mut num = mark_h * mark_k;
    for &(npair, coef, weyl) in larger {
        num -= npair as i64 * coef * weyl as i64;
    }
    let w = weyl_l as i64;
    if num % w != 0 {
        return Err(Error::Consistency(format!(
            "recurrence numerator {num} is not divisible by |W(L)| = {w}"
        )));
    }
    Ok(num / w)
}

/// Coefficient of `(L)` in `(H)(K)`, given the coefficients of every class
/// strictly above `L` in `partial`.
pub fn recurrence_coefficient(
    lat: &Lattice,
    l: ClassId,
    h: ClassId,
    k: ClassId,
    partial: &BTreeMap<ClassId, i64>,
) -> Result<i64> {
    let mark_h = (lat.n_pairs(l, h)? * lat.weyl(h)?) as i64;
    let mark_k = (lat.n_pairs(l, k)? * lat.weyl(k)?) as i64;
    let mut larger = Vec::new();
    for (&lt, &c) in partial {
        if lt == l || c == 0 {
            continue;
        }
        let np = lat.n_pairs(l, lt)?;
        if np > 0 {
            larger.push((np, c, lat.weyl(lt)?));
        }
    }
    recurrence_value(mark_h, mark_k, lat.weyl(l)?, &larger)
}

/// Classes that can occur in `(H)(K)`, largest first.
pub(crate) fn product_candidates(lat: &Lattice, a: ClassId, b: ClassId) -> Vec<ClassId> {
    let mut out = match (lat.fold_of(a), lat.fold_of(b)) {
        (Some(fa), Some(fb)) => lat.finite_weyl_classes(gcd(fa, fb), true, false),
        (Some(f), None) | (None, Some(f)) => lat.finite_weyl_classes(f, true, false),
        (None, None) => lat.finite_weyl_classes(1, false, true),
    };
    out.sort_by_key(|&c| (std::cmp::Reverse(lat.size_key(c)), c));
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(H)(K)` for two generators, memoized per lattice.
pub fn generator_product(
    lat: &Lattice,
    a: ClassId,
    b: ClassId,
) -> Result<Arc<BTreeMap<ClassId, i64>>> {
    let key = if a <= b { (a, b) } else { (b, a) };
    if let Some(v) = lat.products.lock().expect("product cache").get(&key) {
        return Ok(v.clone());
    }
    for c in [a, b] {
        if !lat.is_finite_weyl(c) {
            return Err(Error::Domain(format!(
                "{} has an infinite Weyl group",
                lat.name(c)
            )));
        }
    }
    let mut coeffs: BTreeMap<ClassId, i64> = BTreeMap::new();
    for l in product_candidates(lat, key.0, key.1) {
        if lat.n_pairs(l, key.0)? == 0 || lat.n_pairs(l, key.1)? == 0 {
            continue;
        }
        let c = recurrence_coefficient(lat, l, key.0, key.1, &coeffs)?;
        if c != 0 {
            coeffs.insert(l, c);
        }
    }
    let v = Arc::new(coeffs);
    lat.products
        .lock()
        .expect("product cache")
        .insert(key, v.clone());
    Ok(v)
}

/// Write the products of every pair of `classes` as CSV rows
/// `left,right,product`.
pub fn write_multiplication_table<W: Write>(n: usize, classes: &[ClassId], out: W) -> Result<()> {
    let lat = Lattice::get(n)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["left", "right", "product"])?;
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i..] {
            let p = BurnsideElement::basis(n, a)?.multiply(&BurnsideElement::basis(n, b)?)?;
            w.write_record([lat.name(a), lat.name(b), p.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_law_on_all_fold_one_generators() {
        let lat = Lattice::get(6).unwrap();
        let g = BurnsideElement::unit(6).unwrap();
        for id in lat.finite_weyl_classes(1, true, true) {
            let h = BurnsideElement::basis(6, id).unwrap();
            assert_eq!(g.multiply(&h).unwrap(), h, "{}", lat.name(id));
        }
    }

    #[test]
    fn infinite_weyl_generators_are_rejected() {
        let lat = Lattice::get(6).unwrap();
        assert!(BurnsideElement::basis(6, lat.class(0, 1)).is_err());
    }

    #[test]
    fn recurrence_value_unit_and_exactness() {
        assert_eq!(recurrence_value(1, 1, 1, &[]).unwrap(), 1);
        assert_eq!(recurrence_value(0, 5, 2, &[]).unwrap(), 0);
        assert!(matches!(
            recurrence_value(1, 1, 2, &[]),
            Err(Error::Consistency(_))
        ));
    }

    /// Klein four-group `{1, a, b, ab}` with `D_1 = <a>`: the product of
    /// `G/D_1` with itself has two free `G/D_1`-orbits.
    #[test]
    fn klein_desk_check() {
        // brute-force orbit count on G/<a> x G/<a>
        let mul = |x: u8, y: u8| x ^ y;
        let coset = |g: u8| [g, mul(g, 1)].into_iter().min().unwrap();
        let points: Vec<(u8, u8)> = (0..4u8)
            .flat_map(|x| (0..4u8).map(move |y| (coset(x), coset(y))))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut orbits_with_stab_a = 0;
        for &p in &points {
            if seen.contains(&p) {
                continue;
            }
            let orbit: std::collections::BTreeSet<_> = (0..4u8)
                .map(|g| (coset(mul(g, p.0)), coset(mul(g, p.1))))
                .collect();
            if orbit.len() == 2 {
                orbits_with_stab_a += 1;
            }
            seen.extend(orbit);
        }
        assert_eq!(orbits_with_stab_a, 2);
        // recurrence: W(D_1) = 2, n(D_1, D_1) = 1; then the trivial class
        let top = recurrence_value(2, 2, 2, &[]).unwrap();
        assert_eq!(top, orbits_with_stab_a);
        let trivial = recurrence_value(2, 2, 4, &[(1, top, 2)]).unwrap();
        assert_eq!(trivial, 0);
    }
}
