//! Basic and twisted basic degrees, gradient degrees of linear
//! isomorphisms, and the bifurcation invariants `omega(lambda)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::burnside::BurnsideElement;
use crate::error::{Error, Result};
use crate::spectrum::{critical_set, CriticalValue, SpectralReport};
use crate::symmetry::window::{Dih, Window};
use crate::symmetry::{ClassId, Irrep, Lattice, Parity, SubgroupClass};

/// A real irreducible representation of `D_n x O(2)` entering the
/// linearized problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrreducibleLabel {
    /// `V_j` with `O(2)` acting trivially (constant modes).
    Plain(Irrep),
    /// `V_j (x) U_l`, `l >= 1`: `O(2)` rotations act with `l`-fold speed and
    /// the reflection by complex conjugation.
    Folded(Irrep, usize),
}

impl IrreducibleLabel {
    pub fn irrep(&self) -> Irrep {
        match *self {
            IrreducibleLabel::Plain(v) | IrreducibleLabel::Folded(v, _) => v,
        }
    }

    pub fn fold(&self) -> usize {
        match *self {
            IrreducibleLabel::Plain(_) => 0,
            IrreducibleLabel::Folded(_, l) => l,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let v = self.irrep();
        Irrep::new(n, v.j, v.parity)?;
        if let IrreducibleLabel::Folded(_, 0) = self {
            return Err(Error::Domain("folded labels need l >= 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for IrreducibleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleLabel::Plain(v) => write!(f, "{v}"),
            IrreducibleLabel::Folded(v, l) => {
                let s = v.to_string();
                write!(f, "W{},{l}", &s[1..])
            }
        }
    }
}

fn dihedral_character(v: &Irrep, n: usize, h: Dih) -> f64 {
    let g = crate::symmetry::DihedralElement {
        n,
        r: h.s as usize,
        reflect: h.f,
    };
    v.character(&g)
}

/// `dim V^L` for a class, computed by averaging characters over a finite
/// realization.
pub fn fixed_dimension(n: usize, label: IrreducibleLabel, id: ClassId) -> Result<usize> {
    label.check(n)?;
    let lat = Lattice::get(n)?;
    let l = label.fold();
    let fold = lat.fold_of(id);
    if l > 0 && fold.is_none() {
        // SO(2) has no fixed vectors in U_l
        return Ok(0);
    }
    let big = lat.m * fold.unwrap_or(1);
    let w = Window::new(n as u32, big as u32);
    let sub = lat.realize_in(id, &w)?;
    let v = label.irrep();
    let mut total = 0.0;
    for &x in &sub.elems {
        let (h, k) = w.unpack(x);
        let planar = if l == 0 {
            1.0
        } else if k.f {
            0.0
        } else {
            2.0 * (2.0 * PI * (l as u64 * k.s as u64) as f64 / big as f64).cos()
        };
        total += dihedral_character(&v, n, h) * planar;
    }
    let d = total / sub.order() as f64;
    let r = d.round();
    if (d - r).abs() > 1e-9 || r < 0.0 {
        return Err(Error::Consistency(format!(
            "fixed dimension of {label} on {} is {d}",
            lat.name(id)
        )));
    }
    Ok(r as usize)
}

/// Candidate classes of a degree on `label`, largest first.
fn degree_candidates(lat: &Lattice, label: IrreducibleLabel) -> Vec<ClassId> {
    let mut out = match label {
        IrreducibleLabel::Plain(_) => lat.finite_weyl_classes(1, false, true),
        IrreducibleLabel::Folded(_, l) => {
            let mut v = vec![lat.top()];
            v.extend(lat.finite_weyl_classes(l, true, false));
            v
        }
    };
    // circle types come before every finite class
    out.sort_by_key(|&c| {
        (
            lat.fold_of(c).is_some(),
            std::cmp::Reverse(lat.size_key(c)),
            c,
        )
    });
    out
}

fn compute_degree(n: usize, label: IrreducibleLabel) -> Result<BurnsideElement> {
    let lat = Lattice::get(n)?;
    let mut coeffs: BTreeMap<ClassId, i64> = BTreeMap::new();
    for l in degree_candidates(&lat, label) {
        let sign = if fixed_dimension(n, label, l)? % 2 == 0 {
            1
        } else {
            -1
        };
        let mut num = sign;
        for (&lt, &c) in &coeffs {
            let np = lat.n_pairs(l, lt)?;
            num -= np as i64 * c * lat.weyl(lt)? as i64;
        }
        let w = lat.weyl(l)? as i64;
        if num % w != 0 {
            return Err(Error::Consistency(format!(
                "degree recurrence for {label} at {}: {num} over |W| = {w}",
                lat.name(l)
            )));
        }
        if num != 0 {
            coeffs.insert(l, num / w);
        }
    }
    BurnsideElement::from_terms(n, coeffs)
}

fn degree_cache() -> &'static Mutex<HashMap<(usize, IrreducibleLabel), BurnsideElement>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, IrreducibleLabel), BurnsideElement>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Degree of `-Id` on the unit ball of `label`.
pub fn degree(n: usize, label: IrreducibleLabel) -> Result<BurnsideElement> {
    label.check(n)?;
    if let Some(d) = degree_cache()
        .lock()
        .expect("degree cache")
        .get(&(n, label))
    {
        return Ok(d.clone());
    }
    let d = compute_degree(n, label)?;
    degree_cache()
        .lock()
        .expect("degree cache")
        .insert((n, label), d.clone());
    Ok(d)
}

/// `Deg_{V_j}` for a plain irreducible.
pub fn basic_degree(n: usize, v: Irrep) -> Result<BurnsideElement> {
    degree(n, IrreducibleLabel::Plain(v))
}

/// `Deg_{W_{j,l}}`.
pub fn twisted_basic_degree(n: usize, v: Irrep, l: usize) -> Result<BurnsideElement> {
    if l == 0 {
        return Err(Error::Domain("twisted degrees need l >= 1".into()));
    }
    degree(n, IrreducibleLabel::Folded(v, l))
}

/// Product of basic degrees over the negative spectrum, each label raised
/// to its multiplicity.
pub fn linear_gradient_degree(
    n: usize,
    negative: &[(IrreducibleLabel, usize)],
) -> Result<BurnsideElement> {
    let mut parity: BTreeMap<IrreducibleLabel, usize> = BTreeMap::new();
    for &(label, m) in negative {
        *parity.entry(label).or_default() += m;
    }
    let mut out = BurnsideElement::unit(n)?;
    for (label, m) in parity {
        // every basic degree squares to the unit
        if m % 2 == 1 {
            out = out.multiply(&degree(n, label)?)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    /// Twisted degrees of the crossed Fourier modes only.
    #[default]
    PaperStyle,
    /// Also the constant-mode degrees of every positive eigenvalue.
    Literal,
}

impl std::str::FromStr for OmegaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_style" | "paper-style" => Ok(OmegaMode::PaperStyle),
            "literal" => Ok(OmegaMode::Literal),
            _ => Err(Error::Config(format!("unknown omega mode {s}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaInvariant {
    pub crossing: CriticalValue,
    pub label: String,
    pub mode: OmegaMode,
    pub value: BurnsideElement,
    /// Maximal isotropy types of the crossing representation that carry a
    /// nonzero coefficient.
    pub maximal_orbit_types: Vec<SubgroupClass>,
    /// Maximal classes among all nonzero coefficients; every class in
    /// `value` lies below one of them.
    pub predicted_branches: Vec<SubgroupClass>,
    /// The factors multiplied into `value`, in order.
    pub factors: Vec<String>,
}

/// Irreducible of `D_n x O(2)` that a crossing lives in.
pub fn crossing_label(c: &CriticalValue) -> IrreducibleLabel {
    IrreducibleLabel::Folded(c.irrep, c.l)
}

/// Relative separation below which two critical values count as equal.
pub const ISOLATION_TOLERANCE: f64 = 1e-9;

/// `omega(lambda)` at an isolated crossing.
pub fn omega_invariant(
    report: &SpectralReport,
    crossing: &CriticalValue,
    mode: OmegaMode,
) -> Result<OmegaInvariant> {
    report.check_condition_c()?;
    let n = report.n;
    let lat = Lattice::get(n)?;
    let lam = crossing.lambda;
    let mu_min = report
        .modes
        .iter()
        .filter(|m| m.mu > 0.0)
        .fold(f64::INFINITY, |a, m| a.min(m.mu));
    let l_max = ((lam * mu_min.sqrt()).ceil() as usize + 1).max(crossing.l);
    let all = critical_set(report, l_max)?;
    if !all.iter().any(|c| c == crossing) {
        return Err(Error::Domain(format!(
            "{} = {lam} is not a critical value of this spectrum",
            crossing.label()
        )));
    }
    let tol = ISOLATION_TOLERANCE * lam;
    if let Some(other) = all
        .iter()
        .filter(|c| *c != crossing)
        .find(|c| (c.lambda - lam).abs() <= tol)
    {
        return Err(Error::NotIsolated {
            lambda: lam,
            gap: (other.lambda - lam).abs(),
        });
    }
    let mut crossed: Vec<(IrreducibleLabel, usize)> = all
        .iter()
        .filter(|c| c.lambda < lam - tol)
        .map(|c| (crossing_label(c), 1))
        .collect();
    if mode == OmegaMode::Literal {
        for m in report.modes.iter().filter(|m| m.mu > 0.0) {
            crossed.push((IrreducibleLabel::Plain(m.irrep), 1));
        }
    }
    let prefix = linear_gradient_degree(n, &crossed)?;
    let cur = crossing_label(crossing);
    let jump = degree(n, cur)?.try_sub(&BurnsideElement::unit(n)?)?;
    let value = prefix.multiply(&jump)?;

    let mut counts: BTreeMap<IrreducibleLabel, usize> = BTreeMap::new();
    for (l, m) in &crossed {
        *counts.entry(*l).or_default() += m;
    }
    let mut factors: Vec<String> = counts
        .iter()
        .filter(|(_, m)| *m % 2 == 1)
        .map(|(l, _)| format!("Deg[{l}]"))
        .collect();
    factors.push(format!("(Deg[{cur}] - (G))"));

    let maximal_orbit_types = representation_maximal_orbit_types(n, cur)?
        .into_iter()
        .filter(|&id| value.coefficient(id) != 0)
        .map(|id| lat.describe(id))
        .collect();
    let predicted_branches = maximal_classes(&value)?
        .into_iter()
        .map(|id| lat.describe(id))
        .collect();
    Ok(OmegaInvariant {
        crossing: crossing.clone(),
        label: crossing.label(),
        mode,
        value,
        maximal_orbit_types,
        predicted_branches,
        factors,
    })
}

/// Maximal isotropy types of the nonzero vectors of a folded irreducible.
pub fn representation_maximal_orbit_types(
    n: usize,
    label: IrreducibleLabel,
) -> Result<Vec<ClassId>> {
    let lat = Lattice::get(n)?;
    let fold = match label {
        IrreducibleLabel::Folded(_, l) => l,
        IrreducibleLabel::Plain(_) => {
            return Err(Error::Unsupported(
                "orbit types are tabulated for folded labels".into(),
            ));
        }
    };
    let mut with_fixed = Vec::new();
    for id in lat.finite_weyl_classes(fold, true, false) {
        if fixed_dimension(n, label, id)? > 0 {
            with_fixed.push(id);
        }
    }
    Ok(maximal_among(&lat, &with_fixed))
}

fn maximal_among(lat: &Lattice, ids: &[ClassId]) -> Vec<ClassId> {
    ids.iter()
        .copied()
        .filter(|&a| !ids.iter().any(|&b| b != a && lat.is_subconjugate(a, b)))
        .collect()
}

/// Maximal classes (under subconjugacy) among the nonzero coefficients.
pub fn maximal_classes(x: &BurnsideElement) -> Result<Vec<ClassId>> {
    let lat = Lattice::get(x.n())?;
    let ids: Vec<ClassId> = x.terms().map(|(id, _)| id).collect();
    Ok(maximal_among(&lat, &ids))
}

/// The `D_6` irreducible behind the printed label `W_{j,l}`: `j = 3` is the
/// alternating representation whose kernel is `D~3`.
pub fn hexagonal_irrep(j: usize) -> Result<Irrep> {
    match j {
        0..=2 => Irrep::new(6, j, None),
        3 => Irrep::new(6, 3, Some(Parity::Minus)),
        _ => Err(Error::Domain(format!("no irreducible W_{j} for n = 6"))),
    }
}
