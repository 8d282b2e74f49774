//! Ring energy, its derivatives, and the dihedrally symmetric equilibrium.
//!
//! Particles `u_0..u_{n-1}` live in the plane. Neighbours along the ring are
//! bonded by `U(t) = t - 2 sqrt(t)` and every pair interacts through
//! `W(t) = B/t^6 - A/t^3 + sigma/sqrt(t)`, where `t` is a squared distance.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the pair potential together with the particle count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub sigma: f64,
}

impl PotentialParams {
    pub fn new(n: usize, a: f64, b: f64, sigma: f64) -> Result<Self> {
        let p = Self { n, a, b, sigma };
        p.validate()?;
        Ok(p)
    }

    /// The six-particle reference system.
    pub fn reference() -> Self {
        Self {
            n: 6,
            a: 0.2,
            b: 350.0,
            sigma: 0.25,
        }
    }

    /// Pure bond potential, no pair interaction.
    pub fn harmonic(n: usize) -> Self {
        Self {
            n,
            a: 0.0,
            b: 0.0,
            sigma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Domain(format!(
                "n = {} but at least 3 particles are needed",
                self.n
            )));
        }
        if ![self.a, self.b, self.sigma].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain(
                "potential coefficients must be finite".into(),
            ));
        }
        if self.b < 0.0 {
            return Err(Error::Domain(format!("B = {} must be nonnegative", self.b)));
        }
        Ok(())
    }

    fn pair_free(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.sigma == 0.0
    }

    /// `W(t)` and its first two derivatives.
    pub fn w(&self, t: f64) -> [f64; 3] {
        let (a, b, s) = (self.a, self.b, self.sigma);
        let t3 = t * t * t;
        let t6 = t3 * t3;
        let st = t.sqrt();
        [
            b / t6 - a / t3 + s / st,
            -6.0 * b / (t6 * t) + 3.0 * a / (t3 * t) - 0.5 * s / (t * st),
            42.0 * b / (t6 * t * t) - 12.0 * a / (t3 * t * t) + 0.75 * s / (t * t * st),
        ]
    }
}

/// `U(t)` and its first two derivatives.
pub fn bond(t: f64) -> [f64; 3] {
    let st = t.sqrt();
    [t - 2.0 * st, 1.0 - 1.0 / st, 0.5 / (t * st)]
}

/// A planar configuration of the ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub points: Vec<[f64; 2]>,
}

impl Configuration {
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Regular polygon `u_k = r e^{2 pi i k / n}`.
    pub fn polygon(n: usize, r: f64) -> Self {
        let points = (0..n)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / n as f64;
                [r * th.cos(), r * th.sin()]
            })
            .collect();
        Self { points }
    }

    /// Interleaved coordinates `(x_0, y_0, x_1, y_1, ...)`.
    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.len(),
            self.points.iter().flat_map(|p| [p[0], p[1]]),
        )
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            points: v.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
        }
    }

    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..self.len() {
            for k in j + 1..self.len() {
                best = best.min(dist2(self.points[j], self.points[k]).sqrt());
            }
        }
        best
    }
}

fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

fn check(u: &Configuration, p: &PotentialParams) -> Result<()> {
    if u.len() != p.n {
        return Err(Error::Domain(format!(
            "configuration has {} points, parameters expect {}",
            u.len(),
            p.n
        )));
    }
    Ok(())
}

/// Visits every interacting pair `(j, k, F)` where `F` holds the summed
/// potential derivatives `[F', F'']` of that pair at squared distance `t`.
fn for_each_pair<E>(
    x: &[f64],
    p: &PotentialParams,
    mut f: impl FnMut(usize, usize, [f64; 2], [f64; 3]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E>
where
    E: From<Error>,
{
    let n = p.n;
    for j in 0..n {
        for k in j + 1..n {
            let d = [x[2 * j] - x[2 * k], x[2 * j + 1] - x[2 * k + 1]];
            let t = d[0] * d[0] + d[1] * d[1];
            if !(t > 1e-300) {
                return Err(Error::Domain(format!("particles {j} and {k} coincide")).into());
            }
            let mut fs = if p.pair_free() { [0.0; 3] } else { p.w(t) };
            if k == j + 1 || (j == 0 && k == n - 1) {
                let ub = bond(t);
                for i in 0..3 {
                    fs[i] += ub[i];
                }
            }
            f(j, k, d, fs)?;
        }
    }
    Ok(())
}

fn energy_flat(x: &[f64], p: &PotentialParams) -> Result<f64> {
    let mut e = 0.0;
    for_each_pair::<Error>(x, p, |_, _, _, fs| {
        e += fs[0];
        Ok(())
    })?;
    Ok(e)
}

fn gradient_flat(x: &[f64], p: &PotentialParams, g: &mut [f64]) -> Result<()> {
    g.iter_mut().for_each(|v| *v = 0.0);
    for_each_pair::<Error>(x, p, |j, k, d, fs| {
        let c = 2.0 * fs[1];
        for i in 0..2 {
            g[2 * j + i] += c * d[i];
            g[2 * k + i] -= c * d[i];
        }
        Ok(())
    })
}

/// Total energy of a configuration.
pub fn potential_energy(u: &Configuration, p: &PotentialParams) -> Result<f64> {
    check(u, p)?;
    let x = u.to_vector();
    energy_flat(x.as_slice(), p)
}

/// Gradient in interleaved coordinates.
pub fn gradient(u: &Configuration, p: &PotentialParams) -> Result<DVector<f64>> {
    check(u, p)?;
    let x = u.to_vector();
    let mut g = DVector::zeros(2 * p.n);
    gradient_flat(x.as_slice(), p, g.as_mut_slice())?;
    Ok(g)
}

/// Gradient on raw interleaved coordinates, for the integrator's inner loop.
pub(crate) fn gradient_into(x: &[f64], p: &PotentialParams, g: &mut [f64]) -> Result<()> {
    gradient_flat(x, p, g)
}

pub(crate) fn energy_of(x: &[f64], p: &PotentialParams) -> Result<f64> {
    energy_flat(x, p)
}

pub(crate) fn hessian_of(x: &[f64], p: &PotentialParams) -> Result<DMatrix<f64>> {
    let n2 = 2 * p.n;
    let mut h = DMatrix::zeros(n2, n2);
    for_each_pair::<Error>(x, p, |j, k, d, fs| {
        for a in 0..2 {
            for b in 0..2 {
                let mut v = 4.0 * fs[2] * d[a] * d[b];
                if a == b {
                    v += 2.0 * fs[1];
                }
                h[(2 * j + a, 2 * j + b)] += v;
                h[(2 * k + a, 2 * k + b)] += v;
                h[(2 * j + a, 2 * k + b)] -= v;
                h[(2 * k + a, 2 * j + b)] -= v;
            }
        }
        Ok(())
    })?;
    Ok(h)
}

/// Hessian in interleaved coordinates.
pub fn hessian(u: &Configuration, p: &PotentialParams) -> Result<DMatrix<f64>> {
    check(u, p)?;
    let x = u.to_vector();
    hessian_of(x.as_slice(), p)
}

/// Squared chord factors `4 sin^2(pi m / n)` for separations `m = 0..n`.
pub fn chord_factors(n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let s = (PI * m as f64 / n as f64).sin();
            4.0 * s * s
        })
        .collect()
}

/// Energy restricted to regular polygons of circumradius `t`, with its first
/// two derivatives in `t`.
pub fn phi_derivatives(t: f64, p: &PotentialParams) -> Result<[f64; 3]> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("radius {t} must be positive")));
    }
    let n = p.n;
    let c = chord_factors(n);
    let mut out = [0.0; 3];
    let mut add = |fs: [f64; 3], a: f64, weight: f64| {
        out[0] += weight * fs[0];
        out[1] += weight * fs[1] * 2.0 * a * t;
        out[2] += weight * (fs[2] * 4.0 * a * a * t * t + fs[1] * 2.0 * a);
    };
    add(bond(c[1] * t * t), c[1], n as f64);
    if !p.pair_free() {
        // pairs j<k with separation m: n of them for m < n/2, n/2 for m = n/2
        for m in 1..=n / 2 {
            let count = if 2 * m == n { n / 2 } else { n };
            add(p.w(c[m] * t * t), c[m], count as f64);
        }
    }
    Ok(out)
}

/// Energy restricted to regular polygons of circumradius `t`.
pub fn phi(t: f64, p: &PotentialParams) -> Result<f64> {
    Ok(phi_derivatives(t, p)?[0])
}

/// The symmetric equilibrium `u0_k = r0 e^{2 pi i k / n}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Equilibrium {
    pub r0: f64,
    pub u0: Configuration,
    pub a: f64,
    pub a_jk: Vec<Vec<f64>>,
    pub phi_min: f64,
}

/// Minimizer search settings.
#[derive(Debug, Clone, Copy)]
pub struct EquilibriumOptions {
    pub lo: f64,
    /// Upper end of the bracket; `None` means `10 n`.
    pub hi: Option<f64>,
    pub scan_points: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        Self {
            lo: 1e-3,
            hi: None,
            scan_points: 4000,
            max_iterations: 200,
            tolerance: 1e-10,
        }
    }
}

pub fn find_equilibrium(p: &PotentialParams) -> Result<Equilibrium> {
    find_equilibrium_with(p, &EquilibriumOptions::default())
}

pub fn find_equilibrium_with(
    p: &PotentialParams,
    opts: &EquilibriumOptions,
) -> Result<Equilibrium> {
    p.validate()?;
    if p.b == 0.0 && !p.pair_free() {
        return Err(Error::Domain(
            "B = 0 with a nonzero pair potential has no guaranteed minimizer".into(),
        ));
    }
    let lo = opts.lo;
    let hi = opts.hi.unwrap_or(10.0 * p.n as f64);
    let f = |t: f64| phi(t, p);

    // coarse geometric scan to isolate the basin of the smallest value
    let m = opts.scan_points.max(8);
    let ratio = (hi / lo).powf(1.0 / (m - 1) as f64);
    let grid: Vec<f64> = (0..m).map(|i| lo * ratio.powi(i as i32)).collect();
    let mut vals = Vec::with_capacity(m);
    for &t in &grid {
        vals.push(f(t)?);
    }
    let ibest = (0..m)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .expect("nonempty grid");
    if ibest == 0 || ibest == m - 1 {
        return Err(Error::Solver {
            message: "minimum of phi lies on the bracket boundary".into(),
            lo,
            hi,
            iterations: 0,
        });
    }

    // golden-section on the bracketing triple
    let (mut a, mut b) = (grid[ibest - 1], grid[ibest + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut iterations = 0;
    while (b - a) > 1e-7 * (a + b) && iterations < opts.max_iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }

    // Newton polish on phi'
    let (blo, bhi) = (grid[ibest - 1], grid[ibest + 1]);
    let mut t = 0.5 * (a + b);
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        iterations += 1;
        let [_, d1, d2] = phi_derivatives(t, p)?;
        if d1.abs() <= opts.tolerance {
            converged = true;
            break;
        }
        if !(d2 > 0.0) {
            break;
        }
        let next = t - d1 / d2;
        if !(next > blo && next < bhi) {
            break;
        }
        if next == t {
            converged = d1.abs() <= opts.tolerance;
            break;
        }
        t = next;
    }
    if !converged {
        // bisection on phi' as a fallback
        let (mut l, mut h) = (blo, bhi);
        let dl = phi_derivatives(l, p)?[1];
        let dh = phi_derivatives(h, p)?[1];
        if dl.signum() == dh.signum() {
            return Err(Error::Solver {
                message: "phi' does not change sign across the bracket".into(),
                lo: blo,
                hi: bhi,
                iterations,
            });
        }
        for _ in 0..400 {
            iterations += 1;
            let mid = 0.5 * (l + h);
            let dm = phi_derivatives(mid, p)?[1];
            if dm.abs() <= opts.tolerance {
                t = mid;
                converged = true;
                break;
            }
            if dm.signum() == dl.signum() {
                l = mid;
            } else {
                h = mid;
            }
            if h - l <= f64::EPSILON * mid {
                t = mid;
                converged = dm.abs() <= opts.tolerance;
                break;
            }
        }
        if !converged {
            return Err(Error::Solver {
                message: format!("|phi'| did not reach {}", opts.tolerance),
                lo: l,
                hi: h,
                iterations,
            });
        }
    }

    let n = p.n;
    let c = chord_factors(n);
    let a_jk = (0..n)
        .map(|j| (0..n).map(|k| c[(k + n - j) % n]).collect())
        .collect();
    Ok(Equilibrium {
        r0: t,
        u0: Configuration::polygon(n, t),
        a: c[1],
        a_jk,
        phi_min: phi(t, p)?,
    })
}
