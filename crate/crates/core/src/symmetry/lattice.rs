//! Conjugacy classes of closed subgroups of `D_n x O(2)`.
//!
//! A class with finite planar part is stored as a *template*: a subgroup
//! `S` of `D_n x D_M` (`M = lcm(n, 2)`) whose intersection with the circle
//! factor is trivial. Its member at fold `f` is `rho_f^{-1}(S)`, where
//! `rho_f(R_t kappa^e) = R_{f t} kappa^e`; the template is the `l`-family of
//! the printed notation and `f` plays the role of `l`. Classes containing
//! `SO(2)` are stored through their image in `D_n x Z_2`.
//!
//! Every count below is an exact finite computation: conjugating elements
//! of `O(2)` can always be taken from a large enough dihedral window.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::window::{Dih, Sub, Window};
use crate::error::{Error, Result};

pub const MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DihedralKind {
    Dihedral,
    Cyclic,
    Tilde,
}

/// Conjugacy class of a subgroup of `D_n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DihedralClass {
    pub kind: DihedralKind,
    pub m: usize,
    pub order: usize,
    pub name: String,
    #[serde(skip)]
    pub(crate) elems: Vec<Dih>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn dihedral_closure(n: u32, gens: &[Dih]) -> Vec<Dih> {
    let mut out = vec![Dih::ONE];
    let mut i = 0;
    while i < out.len() {
        for &g in gens {
            let y = out[i].mul(g, n);
            if !out.contains(&y) {
                out.push(y);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

fn dihedral_classes(n: usize) -> Vec<DihedralClass> {
    let nn = n as u32;
    let mut out = Vec::new();
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let step = (n / m) as u32;
        out.push(DihedralClass {
            kind: DihedralKind::Cyclic,
            m,
            order: m,
            name: format!("Z{m}"),
            elems: dihedral_closure(nn, &[Dih::rot(step % nn)]),
        });
        out.push(DihedralClass {
            kind: DihedralKind::Dihedral,
            m,
            order: 2 * m,
            name: format!("D{m}"),
            elems: dihedral_closure(nn, &[Dih::rot(step % nn), Dih::refl(0)]),
        });
        if (n / m).is_multiple_of(2) {
            out.push(DihedralClass {
                kind: DihedralKind::Tilde,
                m,
                order: 2 * m,
                name: format!("D~{m}"),
                elems: dihedral_closure(nn, &[Dih::rot(step % nn), Dih::refl(1)]),
            });
        }
    }
    out.sort_by_key(|c| (c.order, c.kind));
    out
}

/// Index of the `D_n`-class of an arbitrary subgroup given by its elements.
fn classify_dihedral(n: usize, classes: &[DihedralClass], elems: &[Dih]) -> usize {
    let order = elems.len();
    let reflections: Vec<&Dih> = elems.iter().filter(|d| d.f).collect();
    let kind = if reflections.is_empty() {
        DihedralKind::Cyclic
    } else {
        let m = order / 2;
        if (n / m) % 2 == 1 || reflections.iter().any(|d| d.s % 2 == 0) {
            DihedralKind::Dihedral
        } else {
            DihedralKind::Tilde
        }
    };
    classes
        .iter()
        .position(|c| c.order == order && c.kind == kind)
        .expect("every subgroup of D_n has a class")
}

/// Quotient `L` of a Goursat pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quotient {
    /// `Z_k`; `k = 1` is the trivial group.
    Cyclic(usize),
    Dihedral(usize),
}

impl Quotient {
    fn rank(&self) -> (u8, usize) {
        match *self {
            Quotient::Dihedral(d) => (0, d),
            Quotient::Cyclic(k) => (1, k),
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Quotient::Cyclic(1)
    }
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quotient::Cyclic(k) => write!(f, "Z{k}"),
            Quotient::Dihedral(d) => write!(f, "D{d}"),
        }
    }
}

/// Planar factor `K`; finite ones are `Z_{m l}` or `D_{m l}` at fold `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KPart {
    Cyclic(usize),
    Dihedral(usize),
    SO2,
    O2,
}

impl KPart {
    fn rank(&self) -> u8 {
        match self {
            KPart::Cyclic(_) => 0,
            KPart::Dihedral(_) => 1,
            KPart::SO2 => 2,
            KPart::O2 => 3,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, KPart::Cyclic(_) | KPart::Dihedral(_))
    }

    fn family(&self) -> String {
        let mult = |m: usize| if m == 1 { String::new() } else { m.to_string() };
        match *self {
            KPart::Cyclic(m) => format!("Z{}l", mult(m)),
            KPart::Dihedral(m) => format!("D{}l", mult(m)),
            KPart::SO2 => "SO2".into(),
            KPart::O2 => "O2".into(),
        }
    }

    fn at_fold(&self, f: usize) -> String {
        match *self {
            KPart::Cyclic(m) => format!("Z{}", m * f),
            KPart::Dihedral(m) => format!("D{}", m * f),
            KPart::SO2 => "SO2".into(),
            KPart::O2 => "O2".into(),
        }
    }
}

/// One row of the class table: a fold-parametrised family, or a single
/// class containing `SO(2)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Template {
    /// 1-based position in the table.
    pub id: usize,
    pub h: usize,
    pub z: usize,
    pub r: usize,
    pub quotient: Quotient,
    pub k: KPart,
    pub weyl_order: Option<u64>,
    pub name: String,
    pub show_r: bool,
    #[serde(skip)]
    pub(crate) sub: Vec<u32>,
    #[serde(skip)]
    pub(crate) gens: Vec<u32>,
}

impl Template {
    pub fn is_circle_type(&self) -> bool {
        !self.k.is_finite()
    }
}

/// Reference to a concrete class: a template at a fold (0 for the classes
/// containing `SO(2)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassId {
    pub template: u16,
    pub fold: u16,
}

/// Concrete conjugacy class with its Goursat data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgroupClass {
    pub id: ClassId,
    /// Row of the class table.
    pub table_id: usize,
    pub name: String,
    pub family: String,
    pub h: String,
    pub k: String,
    pub l: String,
    pub z: String,
    pub r: String,
    pub weyl_order: Option<u64>,
}

/// The class lattice of `D_n x O(2)` with exact counting.
pub struct Lattice {
    pub n: usize,
    /// `lcm(n, 2)`: every fold-1 planar part lies in `D_M`.
    pub m: usize,
    pub dihedral: Vec<DihedralClass>,
    pub templates: Vec<Template>,
    keys: HashMap<Vec<u32>, usize>,
    pairs: Mutex<HashMap<(ClassId, ClassId), u64>>,
    pub(crate) products: Mutex<HashMap<(ClassId, ClassId), Arc<BTreeMap<ClassId, i64>>>>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("n", &self.n)
            .field("templates", &self.templates.len())
            .finish()
    }
}

struct Raw {
    h: usize,
    z: usize,
    r: usize,
    quotient: Quotient,
    k: KPart,
    sub: Vec<u32>,
}

impl Lattice {
    /// Shared lattice for `n`, built on first use.
    pub fn get(n: usize) -> Result<Arc<Lattice>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Lattice>>>> = OnceLock::new();
        if !(3..=MAX_N).contains(&n) {
            return Err(Error::Unsupported(format!(
                "subgroup lattice is available for 3 <= n <= {MAX_N}, got {n}"
            )));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(l) = cache.lock().expect("lattice cache").get(&n) {
            return Ok(l.clone());
        }
        let built = Arc::new(Lattice::build(n)?);
        let mut guard = cache.lock().expect("lattice cache");
        Ok(guard.entry(n).or_insert(built).clone())
    }

    /// Window holding fold-1 templates.
    fn base(&self) -> Window {
        Window::new(self.n as u32, self.m as u32)
    }

    /// Window deciding conjugacy of fold-1 templates.
    fn conj_window(&self) -> Window {
        Window::new(self.n as u32, 2 * self.m as u32)
    }

    fn circle_window(&self) -> Window {
        Window::new(self.n as u32, 1)
    }

    fn build(n: usize) -> Result<Self> {
        let m = lcm(n, 2);
        let dihedral = dihedral_classes(n);
        let mut lat = Lattice {
            n,
            m,
            dihedral,
            templates: Vec::new(),
            keys: HashMap::new(),
            pairs: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        };
        let mut raws = lat.goursat_finite();
        raws.extend(lat.goursat_circle());

        raws.sort_by(|a, b| {
            (a.k.rank(), a.quotient.rank(), a.h, a.z, a.r).cmp(&(
                b.k.rank(),
                b.quotient.rank(),
                b.h,
                b.z,
                b.r,
            ))
        });
        let mut templates = Vec::with_capacity(raws.len());
        for (i, raw) in raws.into_iter().enumerate() {
            let w = if raw.k.is_finite() {
                lat.base()
            } else {
                lat.circle_window()
            };
            let s = Sub::from_elems(&w, raw.sub.clone());
            templates.push(Template {
                id: i + 1,
                h: raw.h,
                z: raw.z,
                r: raw.r,
                quotient: raw.quotient,
                k: raw.k,
                weyl_order: None,
                name: String::new(),
                show_r: false,
                sub: raw.sub,
                gens: s.gens,
            });
        }
        // R is displayed only where kernel data alone does not separate rows
        let mut groups: HashMap<(u8, Quotient, usize, usize), usize> = HashMap::new();
        for t in &templates {
            *groups
                .entry((t.k.rank(), t.quotient, t.h, t.z))
                .or_default() += 1;
        }
        for t in templates.iter_mut() {
            t.show_r = groups[&(t.k.rank(), t.quotient, t.h, t.z)] > 1;
        }
        lat.templates = templates;
        for i in 0..lat.templates.len() {
            let name = lat.format_name(&lat.templates[i], None);
            lat.templates[i].name = name;
            let weyl = lat.compute_weyl(i, 1)?;
            lat.templates[i].weyl_order = weyl;
        }
        let base = lat.base();
        let cw = lat.conj_window();
        let mut keys = HashMap::new();
        for (i, t) in lat.templates.iter().enumerate() {
            if t.k.is_finite() {
                let s = Sub::from_elems(&cw, embed(&base, &cw, &t.sub));
                if keys.insert(s.canonical(&cw), i).is_some() {
                    return Err(Error::Consistency(format!(
                        "duplicate class key for {}",
                        t.name
                    )));
                }
            }
        }
        lat.keys = keys;
        Ok(lat)
    }

    /// Goursat subgroups with finite planar part meeting the circle trivially.
    fn goursat_finite(&self) -> Vec<Raw> {
        let nn = self.n as u32;
        let mm = self.m as u32;
        let w = self.base();
        let cw = self.conj_window();
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut out = Vec::new();

        // targets: (K elements, K_0 extra generators, KPart, quotient)
        let mut targets: Vec<(Vec<Dih>, Option<Dih>, KPart, bool)> = Vec::new();
        for k in (1..=self.m).filter(|k| self.m.is_multiple_of(*k)) {
            let step = mm / k as u32;
            targets.push((
                dihedral_closure(mm, &[Dih::rot(step % mm)]),
                None,
                KPart::Cyclic(k),
                false,
            ));
            targets.push((
                dihedral_closure(mm, &[Dih::rot(step % mm), Dih::refl(0)]),
                None,
                KPart::Dihedral(k),
                false,
            ));
        }
        // D_2 over the reflection kernel, and D_1 over itself
        targets.push((
            dihedral_closure(mm, &[Dih::rot(mm / 2)]),
            Some(Dih::refl(0)),
            KPart::Dihedral(2),
            true,
        ));
        targets.push((vec![Dih::ONE], Some(Dih::refl(0)), KPart::Dihedral(1), true));

        for (hi, hc) in self.dihedral.iter().enumerate() {
            let hgens = generators_of(nn, &hc.elems);
            for (kel, k0, kpart, _) in &targets {
                let mut images = vec![0usize; hgens.len()];
                loop {
                    let mut gens: Vec<u32> = hgens
                        .iter()
                        .zip(&images)
                        .map(|(&h, &i)| w.pack(h, kel[i]))
                        .collect();
                    if let Some(x) = k0 {
                        gens.push(w.pack(Dih::ONE, *x));
                    }
                    let s = w.generate(&gens);
                    let kernel0: Vec<Dih> = s
                        .iter()
                        .map(|&x| w.unpack(x))
                        .filter(|(h, _)| *h == Dih::ONE)
                        .map(|(_, k)| k)
                        .collect();
                    let k0_len = if k0.is_some() { 2 } else { 1 };
                    let mut kimg: Vec<Dih> = s.iter().map(|&x| w.unpack(x).1).collect();
                    kimg.sort();
                    kimg.dedup();
                    let want_k = if k0.is_some() {
                        // the D_1-over-D_1 target has image D_1, the other D_2
                        if kel.len() == 1 {
                            2
                        } else {
                            4
                        }
                    } else {
                        kel.len()
                    };
                    if kernel0.len() == k0_len && kimg.len() == want_k {
                        let key = Sub::from_elems(&cw, embed(&w, &cw, &s)).canonical(&cw);
                        if seen.insert(key, ()).is_none() {
                            let (z, r, quotient) = self.kernel_data(&w, &s, *kpart, k0.is_some());
                            out.push(Raw {
                                h: hi,
                                z,
                                r,
                                quotient,
                                k: *kpart,
                                sub: s,
                            });
                        }
                    }
                    if !advance(&mut images, kel.len()) {
                        break;
                    }
                }
            }
        }
        out
    }

    /// `(Z, R, L)` for a fold-1 finite subgroup.
    fn kernel_data(
        &self,
        w: &Window,
        s: &[u32],
        k: KPart,
        over_reflection: bool,
    ) -> (usize, usize, Quotient) {
        let pairs: Vec<(Dih, Dih)> = s.iter().map(|&x| w.unpack(x)).collect();
        let kernel_ok = |kk: Dih| {
            if over_reflection {
                kk.s == 0
            } else {
                kk == Dih::ONE
            }
        };
        let mut z: Vec<Dih> = pairs
            .iter()
            .filter(|(_, kk)| kernel_ok(*kk))
            .map(|(h, _)| *h)
            .collect();
        z.sort();
        z.dedup();
        let mut hs: Vec<Dih> = pairs.iter().map(|(h, _)| *h).collect();
        hs.sort();
        hs.dedup();
        let quotient = match k {
            KPart::Cyclic(c) => Quotient::Cyclic(c),
            KPart::Dihedral(d) if !over_reflection => Quotient::Dihedral(d),
            _ => Quotient::Cyclic(hs.len() / z.len()),
        };
        let r: Vec<Dih> = match quotient {
            Quotient::Dihedral(_) => {
                let mut r: Vec<Dih> = pairs
                    .iter()
                    .filter(|(_, kk)| kk.is_rotation())
                    .map(|(h, _)| *h)
                    .collect();
                r.sort();
                r.dedup();
                r
            }
            Quotient::Cyclic(_) => hs.clone(),
        };
        (
            classify_dihedral(self.n, &self.dihedral, &z),
            classify_dihedral(self.n, &self.dihedral, &r),
            quotient,
        )
    }

    /// Subgroups containing `SO(2)`, through their image in `D_n x Z_2`.
    fn goursat_circle(&self) -> Vec<Raw> {
        let nn = self.n as u32;
        let w = self.circle_window();
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut out = Vec::new();
        let z2 = [Dih::ONE, Dih::refl(0)];
        for (hi, hc) in self.dihedral.iter().enumerate() {
            let hgens = generators_of(nn, &hc.elems);
            // H x SO(2) and H x O(2)
            for full in [false, true] {
                let mut gens: Vec<u32> = hgens.iter().map(|&h| w.pack(h, Dih::ONE)).collect();
                if full {
                    gens.push(w.pack(Dih::ONE, Dih::refl(0)));
                }
                let s = w.generate(&gens);
                let key = Sub::from_elems(&w, s.clone()).canonical(&w);
                if seen.insert(key, ()).is_none() {
                    out.push(Raw {
                        h: hi,
                        z: hi,
                        r: hi,
                        quotient: Quotient::Cyclic(1),
                        k: if full { KPart::O2 } else { KPart::SO2 },
                        sub: s,
                    });
                }
            }
            // graphs of H -> Z_2 onto
            let mut images = vec![0usize; hgens.len()];
            loop {
                let gens: Vec<u32> = hgens
                    .iter()
                    .zip(&images)
                    .map(|(&h, &i)| w.pack(h, z2[i]))
                    .collect();
                let s = w.generate(&gens);
                let graph = s.len() == hc.order;
                let onto = s.iter().any(|&x| w.unpack(x).1.f);
                if graph && onto {
                    let key = Sub::from_elems(&w, s.clone()).canonical(&w);
                    if seen.insert(key, ()).is_none() {
                        let mut z: Vec<Dih> = s
                            .iter()
                            .map(|&x| w.unpack(x))
                            .filter(|(_, k)| !k.f)
                            .map(|(h, _)| h)
                            .collect();
                        z.sort();
                        let zc = classify_dihedral(self.n, &self.dihedral, &z);
                        out.push(Raw {
                            h: hi,
                            z: zc,
                            r: zc,
                            quotient: Quotient::Dihedral(1),
                            k: KPart::O2,
                            sub: s,
                        });
                    }
                }
                if !advance(&mut images, 2) {
                    break;
                }
            }
        }
        out
    }

    fn format_name(&self, t: &Template, fold: Option<usize>) -> String {
        let k = match fold {
            Some(f) => t.k.at_fold(f),
            None => t.k.family(),
        };
        let h = &self.dihedral[t.h].name;
        if t.quotient.is_trivial() {
            format!("{h}x{k}")
        } else {
            let z = &self.dihedral[t.z].name;
            let r = if t.show_r {
                format!("_{{{}}}", self.dihedral[t.r].name)
            } else {
                String::new()
            };
            format!("{h}^{{{z}}}{r}x_{{{}}}{k}", t.quotient)
        }
    }

    /// `|N(S)/S|` at the given fold, or `None` when infinite.
    fn compute_weyl(&self, idx: usize, fold: usize) -> Result<Option<u64>> {
        let t = &self.templates[idx];
        match t.k {
            KPart::Cyclic(_) => Ok(None),
            KPart::Dihedral(_) => {
                let w = Window::new(self.n as u32, (2 * self.m * fold) as u32);
                let s = self.realize(idx, fold, &w);
                let norm = s.normalizer_order(&w);
                if !norm.is_multiple_of(s.order()) {
                    return Err(Error::Consistency(format!(
                        "normalizer of {} not a multiple of its order",
                        t.name
                    )));
                }
                Ok(Some((norm / s.order()) as u64))
            }
            KPart::SO2 | KPart::O2 => {
                let w = self.circle_window();
                let s = Sub::from_elems(&w, t.sub.clone());
                Ok(Some((s.normalizer_order(&w) / s.order()) as u64))
            }
        }
    }

    /// Weyl order of a template evaluated at an explicit fold (test hook).
    pub fn weyl_at_fold(&self, template: usize, fold: usize) -> Result<Option<u64>> {
        self.compute_weyl(template, fold)
    }

    /// Member of a finite template at `fold`, inside `D_n x D_{w.big}`.
    pub fn realize(&self, idx: usize, fold: usize, w: &Window) -> Sub {
        let t = &self.templates[idx];
        let base = self.base();
        let big = w.big as usize;
        assert!(
            big.is_multiple_of(self.m * fold),
            "window too small for fold"
        );
        let q = (big / (self.m * fold)) as u32;
        let lift = |x: u32, j: u32| {
            let (h, k) = base.unpack(x);
            w.pack(
                h,
                Dih {
                    s: (k.s + self.m as u32 * j) * q % w.big,
                    f: k.f,
                },
            )
        };
        let mut gens: Vec<u32> = t.gens.iter().map(|&x| lift(x, 0)).collect();
        if fold > 1 {
            gens.push(w.pack(Dih::ONE, Dih::rot(q * self.m as u32)));
        }
        let mut elems = Vec::with_capacity(t.sub.len() * fold);
        for &x in &t.sub {
            for j in 0..fold as u32 {
                elems.push(lift(x, j));
            }
        }
        elems.sort_unstable();
        let bits = super::window::Bits::new(w.order(), &elems);
        Sub { elems, gens, bits }
    }

    /// Members of a class inside the window `D_n x D_N`; classes containing
    /// `SO(2)` are represented by their preimage of the window rotations.
    pub fn realize_in(&self, id: ClassId, w: &Window) -> Result<Sub> {
        match self.fold_of(id) {
            Some(f) => {
                if !(w.big as usize).is_multiple_of(self.m * f) {
                    return Err(Error::Domain(format!(
                        "window D_{} cannot hold {}",
                        w.big,
                        self.name(id)
                    )));
                }
                Ok(self.realize(id.template as usize, f, w))
            }
            None => {
                let cw = self.circle_window();
                let img = self.circle_image(id);
                let mut gens: Vec<u32> = img
                    .gens
                    .iter()
                    .map(|&x| {
                        let (h, k) = cw.unpack(x);
                        w.pack(h, Dih { s: 0, f: k.f })
                    })
                    .collect();
                gens.push(w.pack(Dih::ONE, Dih::rot(1 % w.big)));
                Ok(Sub::from_gens(w, &gens))
            }
        }
    }

    /// Order used to process classes from the top of the lattice down:
    /// subgroup order at the class fold, or the order of the image in
    /// `D_n x Z_2` for classes containing `SO(2)`.
    pub fn size_key(&self, id: ClassId) -> usize {
        let t = self.template(id);
        if t.k.is_finite() {
            t.sub.len() * id.fold as usize
        } else {
            t.sub.len()
        }
    }

    /// Image in `D_n x Z_2` of a finite class, or the stored circle class.
    fn circle_image(&self, id: ClassId) -> Sub {
        let cw = self.circle_window();
        let t = &self.templates[id.template as usize];
        if t.k.is_finite() {
            let base = self.base();
            let gens: Vec<u32> = t
                .gens
                .iter()
                .map(|&x| {
                    let (h, k) = base.unpack(x);
                    cw.pack(h, Dih { s: 0, f: k.f })
                })
                .collect();
            Sub::from_gens(&cw, &gens)
        } else {
            Sub::from_elems(&cw, t.sub.clone())
        }
    }

    pub fn template(&self, id: ClassId) -> &Template {
        &self.templates[id.template as usize]
    }

    pub fn is_finite_weyl(&self, id: ClassId) -> bool {
        self.template(id).weyl_order.is_some()
    }

    pub fn weyl(&self, id: ClassId) -> Result<u64> {
        self.template(id).weyl_order.ok_or_else(|| {
            Error::Unsupported(format!("{} has an infinite Weyl group", self.name(id)))
        })
    }

    /// Class of the whole group.
    pub fn top(&self) -> ClassId {
        let idx = self
            .templates
            .iter()
            .position(|t| {
                t.k == KPart::O2
                    && t.quotient.is_trivial()
                    && self.dihedral[t.h].order == 2 * self.n
            })
            .expect("full group is a class");
        ClassId {
            template: idx as u16,
            fold: 0,
        }
    }

    /// Class of a template at a fold; circle-type templates ignore the fold.
    pub fn class(&self, template: usize, fold: usize) -> ClassId {
        let t = &self.templates[template];
        ClassId {
            template: template as u16,
            fold: if t.k.is_finite() {
                fold.max(1) as u16
            } else {
                0
            },
        }
    }

    /// Look up a class by table id and fold.
    pub fn by_table_id(&self, table_id: usize, fold: usize) -> Result<ClassId> {
        if table_id == 0 || table_id > self.templates.len() {
            return Err(Error::Domain(format!("no class with table id {table_id}")));
        }
        Ok(self.class(table_id - 1, fold))
    }

    /// Look up a class by its family name (with `l`) and a fold, or by a
    /// concrete name.
    pub fn by_name(&self, name: &str, fold: usize) -> Result<ClassId> {
        for (i, t) in self.templates.iter().enumerate() {
            if t.name == name {
                return Ok(self.class(i, fold));
            }
        }
        for (i, t) in self.templates.iter().enumerate() {
            if t.k.is_finite() {
                for f in 1..=64 {
                    if self.format_name(t, Some(f)) == name {
                        return Ok(self.class(i, f));
                    }
                }
            } else if self.format_name(t, Some(1)) == name {
                return Ok(self.class(i, 0));
            }
        }
        Err(Error::Domain(format!("unknown class name {name}")))
    }

    pub fn name(&self, id: ClassId) -> String {
        let t = self.template(id);
        self.format_name(t, Some(id.fold.max(1) as usize))
    }

    pub fn describe(&self, id: ClassId) -> SubgroupClass {
        let t = self.template(id);
        SubgroupClass {
            id,
            table_id: t.id,
            name: self.name(id),
            family: t.name.clone(),
            h: self.dihedral[t.h].name.clone(),
            k: t.k.at_fold(id.fold.max(1) as usize),
            l: t.quotient.to_string(),
            z: self.dihedral[t.z].name.clone(),
            r: self.dihedral[t.r].name.clone(),
            weyl_order: t.weyl_order,
        }
    }

    /// Finite-Weyl classes at a fold, plus (when `with_circle`) every
    /// finite-Weyl class containing `SO(2)`.
    pub fn finite_weyl_classes(
        &self,
        fold: usize,
        with_finite: bool,
        with_circle: bool,
    ) -> Vec<ClassId> {
        let mut out = Vec::new();
        for (i, t) in self.templates.iter().enumerate() {
            if t.weyl_order.is_none() {
                continue;
            }
            if t.k.is_finite() && with_finite {
                out.push(self.class(i, fold));
            } else if !t.k.is_finite() && with_circle {
                out.push(self.class(i, 0));
            }
        }
        out
    }

    pub fn fold_of(&self, id: ClassId) -> Option<usize> {
        if self.template(id).k.is_finite() {
            Some(id.fold as usize)
        } else {
            None
        }
    }

    /// Number of `g` with `g^{-1} L g` inside `H`, and the normalizer order
    /// of `H`, in a window deciding both.
    fn containment_counts(&self, l: ClassId, h: ClassId) -> Option<(usize, usize)> {
        match (self.fold_of(l), self.fold_of(h)) {
            (Some(fl), Some(fh)) => {
                if fh % fl != 0 {
                    return Some((0, 1));
                }
                let w = Window::new(self.n as u32, (2 * self.m * lcm(fl, fh)) as u32);
                let ls = self.realize(l.template as usize, fl, &w);
                let hs = self.realize(h.template as usize, fh, &w);
                if !hs.order().is_multiple_of(ls.order()) {
                    return Some((0, 1));
                }
                let count = w.elements().filter(|&g| ls.conj_inside(&w, g, &hs)).count();
                Some((count, hs.normalizer_order(&w)))
            }
            (_, Some(_)) => Some((0, 1)),
            (_, None) => {
                let w = self.circle_window();
                let ls = self.circle_image(l);
                let hs = self.circle_image(h);
                let count = w.elements().filter(|&g| ls.conj_inside(&w, g, &hs)).count();
                Some((count, hs.normalizer_order(&w)))
            }
        }
    }

    /// Is `(L) <= (H)`?
    pub fn is_subconjugate(&self, l: ClassId, h: ClassId) -> bool {
        if let (Some(fl), Some(fh)) = (self.fold_of(l), self.fold_of(h)) {
            if fh % fl != 0 {
                return false;
            }
        }
        self.containment_counts(l, h).is_some_and(|(c, _)| c > 0)
    }

    /// Number of conjugates of `H` that contain `L`.
    pub fn n_pairs(&self, l: ClassId, h: ClassId) -> Result<u64> {
        for c in [l, h] {
            if !self.is_finite_weyl(c) {
                return Err(Error::Unsupported(format!(
                    "{} has an infinite Weyl group",
                    self.name(c)
                )));
            }
        }
        if let Some(v) = self.pairs.lock().expect("pair cache").get(&(l, h)) {
            return Ok(*v);
        }
        let (count, norm) = self
            .containment_counts(l, h)
            .expect("both classes are supported");
        if count % norm != 0 {
            return Err(Error::Consistency(format!(
                "n({}, {}): {count} conjugating elements over a normalizer of order {norm}",
                self.name(l),
                self.name(h)
            )));
        }
        let v = (count / norm) as u64;
        self.pairs.lock().expect("pair cache").insert((l, h), v);
        Ok(v)
    }

    /// Identify a finite subgroup of `D_n x D_N` given by its elements.
    pub fn identify(&self, w: &Window, elems: &[u32]) -> Result<ClassId> {
        let big = w.big as usize;
        let fold = elems
            .iter()
            .filter(|&&x| {
                let (h, k) = w.unpack(x);
                h == Dih::ONE && !k.f
            })
            .count();
        if !big.is_multiple_of(self.m * fold) {
            return Err(Error::Domain(format!(
                "window D_{big} cannot hold fold {fold}"
            )));
        }
        // deflate to fold 1 inside D_M
        let base = self.base();
        let scale = big / (self.m * fold);
        let mut img: Vec<u32> = Vec::new();
        for &x in elems {
            let (h, k) = w.unpack(x);
            if !(k.s as usize).is_multiple_of(scale) {
                return Err(Error::Domain("subgroup is not in standard position".into()));
            }
            let s = (k.s as usize / scale) % self.m;
            img.push(base.pack(
                h,
                Dih {
                    s: s as u32,
                    f: k.f,
                },
            ));
        }
        img.sort_unstable();
        img.dedup();
        let cw = self.conj_window();
        let key = Sub::from_elems(&cw, embed(&base, &cw, &img)).canonical(&cw);
        self.keys
            .get(&key)
            .map(|&i| self.class(i, fold))
            .ok_or_else(|| Error::Consistency("subgroup matches no class".into()))
    }
}

fn generators_of(n: u32, elems: &[Dih]) -> Vec<Dih> {
    // a rotation of maximal order plus one reflection generate any subgroup
    let mut rot = Dih::ONE;
    let mut best = 1;
    for &e in elems.iter().filter(|e| !e.f) {
        let ord = n / gcd(e.s as usize, n as usize).max(1) as u32;
        let ord = if e.s == 0 { 1 } else { ord };
        if ord > best {
            best = ord;
            rot = e;
        }
    }
    let mut gens = Vec::new();
    if rot != Dih::ONE {
        gens.push(rot);
    }
    if let Some(r) = elems.iter().find(|e| e.f) {
        gens.push(*r);
    }
    gens
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Embed `D_n x D_N` into `D_n x D_{N'}` for `N | N'`.
fn embed(from: &Window, to: &Window, elems: &[u32]) -> Vec<u32> {
    let q = to.big / from.big;
    let mut out: Vec<u32> = elems
        .iter()
        .map(|&x| {
            let (h, k) = from.unpack(x);
            to.pack(h, Dih { s: k.s * q, f: k.f })
        })
        .collect();
    out.sort_unstable();
    out
}

/// Serializable view of the class lattice at one fold.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeExport {
    pub n: usize,
    pub fold: usize,
    pub classes: Vec<SubgroupClass>,
    /// `[lower, upper]` table ids with `(lower) < (upper)` and nothing
    /// in between.
    pub covers: Vec<[usize; 2]>,
}

impl Lattice {
    /// Classes of the given fold together with the covering relation of
    /// the subconjugacy order.
    pub fn export(&self, fold: usize) -> LatticeExport {
        let ids: Vec<ClassId> = (0..self.templates.len())
            .map(|i| self.class(i, fold))
            .collect();
        let k = ids.len();
        let below: Vec<Vec<bool>> = ids
            .iter()
            .map(|&a| {
                ids.iter()
                    .map(|&b| a != b && self.is_subconjugate(a, b))
                    .collect()
            })
            .collect();
        let mut covers = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if below[a][b] && !(0..k).any(|c| below[a][c] && below[c][b]) {
                    covers.push([self.templates[a].id, self.templates[b].id]);
                }
            }
        }
        LatticeExport {
            n: self.n,
            fold,
            classes: ids.iter().map(|&id| self.describe(id)).collect(),
            covers,
        }
    }
}

/// Concrete classes of the fold-1 table for `n`.
pub fn subgroup_classes(n: usize) -> Result<Vec<SubgroupClass>> {
    let lat = Lattice::get(n)?;
    Ok((0..lat.templates.len())
        .map(|i| lat.describe(lat.class(i, 1)))
        .collect())
}

pub fn n_pairs(n: usize, l: ClassId, h: ClassId) -> Result<u64> {
    Lattice::get(n)?.n_pairs(l, h)
}
