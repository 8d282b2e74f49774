//! Time integration of `u'' = -lambda^2 grad V(u)` on the normalized
//! period `2 pi`, periodic-orbit shooting near a critical frequency, and
//! spatio-temporal symmetry checks.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    energy_of, gradient_into, hessian_of, Configuration, Equilibrium, PotentialParams,
};
use crate::spectrum::{CriticalValue, Mode, SpectralReport};
use crate::symmetry::isotypic::null_directions;
use crate::symmetry::window::{Dih, Window};
use crate::symmetry::{ClassId, DihedralElement, GroupElement, Lattice};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegrateOptions {
    pub dt: f64,
    /// Keep every `stride`-th step.
    pub stride: usize,
    /// Minimal pair distance before the run stops; `None` means `1e-6`
    /// times the mean distance from the centroid.
    pub collision_distance: Option<f64>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            stride: 1,
            collision_distance: None,
        }
    }
}

/// Sampled solution. `states[i]` holds positions then velocities, each in
/// interleaved coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub n: usize,
    pub lambda: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub energy: Vec<f64>,
    /// Largest `|E(t) - E(0)| / |E(0)|` over every step, sampled or not.
    pub max_energy_drift: f64,
    pub collided: bool,
    pub seed: Option<String>,
    pub amplitude: f64,
}

fn centroid_scale(x: &[f64]) -> f64 {
    let n = x.len() / 2;
    let (cx, cy) = (0..n).fold((0.0, 0.0), |(a, b), k| (a + x[2 * k], b + x[2 * k + 1]));
    let (cx, cy) = (cx / n as f64, cy / n as f64);
    (0..n)
        .map(|k| (x[2 * k] - cx).hypot(x[2 * k + 1] - cy))
        .sum::<f64>()
        / n as f64
}

fn min_distance(x: &[f64]) -> f64 {
    let n = x.len() / 2;
    let mut d = f64::INFINITY;
    for j in 0..n {
        for k in j + 1..n {
            d = d.min((x[2 * j] - x[2 * k]).hypot(x[2 * j + 1] - x[2 * k + 1]));
        }
    }
    d
}

fn total_energy(x: &[f64], v: &[f64], lambda: f64, p: &PotentialParams) -> Result<f64> {
    let kin: f64 = v.iter().map(|a| a * a).sum::<f64>() / 2.0;
    Ok(kin + lambda * lambda * energy_of(x, p)?)
}

/// Velocity Verlet with `steps` steps of size `h`; `h` may be negative.
fn verlet(
    x0: &[f64],
    v0: &[f64],
    lambda: f64,
    h: f64,
    steps: usize,
    stride: usize,
    guard: f64,
    p: &PotentialParams,
) -> Result<Trajectory> {
    let n2 = x0.len();
    let mut x = x0.to_vec();
    let mut v = v0.to_vec();
    let mut g = vec![0.0; n2];
    gradient_into(&x, p, &mut g)?;
    let l2 = lambda * lambda;
    let e0 = total_energy(&x, &v, lambda, p)?;
    let sample = |x: &[f64], v: &[f64]| -> Vec<f64> { x.iter().chain(v).copied().collect() };
    let mut traj = Trajectory {
        n: n2 / 2,
        lambda,
        dt: h,
        times: vec![0.0],
        states: vec![sample(&x, &v)],
        energy: vec![e0],
        max_energy_drift: 0.0,
        collided: false,
        seed: None,
        amplitude: 0.0,
    };
    let scale = e0.abs().max(f64::MIN_POSITIVE);
    for step in 1..=steps {
        for i in 0..n2 {
            v[i] -= 0.5 * h * l2 * g[i];
            x[i] += h * v[i];
        }
        if min_distance(&x) < guard {
            traj.collided = true;
            break;
        }
        gradient_into(&x, p, &mut g)?;
        for i in 0..n2 {
            v[i] -= 0.5 * h * l2 * g[i];
        }
        let e = total_energy(&x, &v, lambda, p)?;
        traj.max_energy_drift = traj.max_energy_drift.max((e - e0).abs() / scale);
        if step % stride == 0 || step == steps {
            traj.times.push(step as f64 * h);
            traj.states.push(sample(&x, &v));
            traj.energy.push(e);
        }
    }
    Ok(traj)
}

/// Integrate from `(u0, v0)` over `[0, t_end]`. The step is adjusted down
/// so that it divides `t_end`.
pub fn integrate(
    u0: &Configuration,
    v0: &[f64],
    lambda: f64,
    t_end: f64,
    p: &PotentialParams,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    p.validate()?;
    if u0.len() != p.n || v0.len() != 2 * p.n {
        return Err(Error::Domain(format!(
            "state size does not match n = {}",
            p.n
        )));
    }
    if !(opts.dt > 0.0) || !(t_end >= 0.0) || !(lambda > 0.0) || opts.stride == 0 {
        return Err(Error::Domain(
            "dt, lambda and stride must be positive, T nonnegative".into(),
        ));
    }
    let x0 = u0.to_vector();
    let guard = opts
        .collision_distance
        .unwrap_or_else(|| 1e-6 * centroid_scale(x0.as_slice()));
    if min_distance(x0.as_slice()) < guard {
        return Err(Error::Domain(
            "initial configuration has coincident particles".into(),
        ));
    }
    let steps = (t_end / opts.dt).ceil() as usize;
    let h = if steps == 0 {
        opts.dt
    } else {
        t_end / steps as f64
    };
    verlet(x0.as_slice(), v0, lambda, h, steps, opts.stride, guard, p)
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.states[i][..2 * self.n]
    }

    pub fn velocity(&self, i: usize) -> &[f64] {
        &self.states[i][2 * self.n..]
    }

    /// Cubic Hermite interpolation of the positions at `t`, wrapped into
    /// `[0, T)` as for a periodic solution.
    pub fn position_at(&self, t: f64, out: &mut [f64]) {
        let period = self.duration();
        let m = self.times.len();
        if m < 2 || period <= 0.0 {
            out.copy_from_slice(self.position(0));
            return;
        }
        let t = t.rem_euclid(period);
        let h = period / (m - 1) as f64;
        let i = ((t / h).floor() as usize).min(m - 2);
        let s = (t - i as f64 * h) / h;
        let (x0, x1) = (self.position(i), self.position(i + 1));
        let (v0, v1) = (self.velocity(i), self.velocity(i + 1));
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        for k in 0..out.len() {
            out[k] = h00 * x0[k] + h10 * h * v0[k] + h01 * x1[k] + h11 * h * v1[k];
        }
    }

    /// CSV with columns `t, x_0, y_0, ..., E`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        for k in 0..self.n {
            header.push(format!("x_{k}"));
            header.push(format!("y_{k}"));
        }
        header.push("E".into());
        w.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![crate::format::float(self.times[i])];
            row.extend(self.position(i).iter().map(|&x| crate::format::float(x)));
            row.push(crate::format::float(self.energy[i]));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Static SVG of the particle paths.
    pub fn to_svg(&self, title: &str) -> String {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for i in 0..self.times.len() {
            for k in 0..self.n {
                let q = &self.position(i)[2 * k..2 * k + 2];
                for c in 0..2 {
                    lo[c] = lo[c].min(q[c]);
                    hi[c] = hi[c].max(q[c]);
                }
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let size = 480.0;
        let pad = 20.0;
        let map = |q: &[f64]| {
            (
                pad + (q[0] - lo[0]) / span * (size - 2.0 * pad),
                size - pad - (q[1] - lo[1]) / span * (size - 2.0 * pad),
            )
        };
        let colors = [
            "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
        ];
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        );
        let _ = writeln!(s, "<title>{}</title>", escape(title));
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let every = (self.times.len() / 2000).max(1);
        for k in 0..self.n {
            let pts: Vec<String> = (0..self.times.len())
                .step_by(every)
                .map(|i| {
                    let (a, b) = map(&self.position(i)[2 * k..2 * k + 2]);
                    format!("{a:.2},{b:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>",
                colors[k % colors.len()],
                pts.join(" ")
            );
            let (a, b) = map(&self.position(0)[2 * k..2 * k + 2]);
            let _ = writeln!(
                s,
                "<circle cx=\"{a:.2}\" cy=\"{b:.2}\" r=\"3\" fill=\"{}\"/>",
                colors[k % colors.len()]
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShootingOptions {
    pub dt: f64,
    pub max_iterations: usize,
    /// Stop once the periodicity residual is below this.
    pub tolerance: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            max_iterations: 40,
            tolerance: 1e-11,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootingStep {
    pub iteration: usize,
    pub residual: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicOrbit {
    pub label: String,
    pub seed_mu: f64,
    pub seed_lambda: f64,
    pub lambda: f64,
    pub amplitude: f64,
    /// `|(u(2 pi) - u(0), u'(2 pi) - u'(0))|`
    pub residual: f64,
    pub converged: bool,
    pub trace: Vec<ShootingStep>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

/// Flow over one normalized period with the exact tangent of the discrete
/// map: columns `0..2n` follow the initial positions, column `2n` follows
/// `lambda`.
fn flow_with_tangent(
    x0: &[f64],
    lambda: f64,
    steps: usize,
    p: &PotentialParams,
) -> Result<(Vec<f64>, Vec<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let n2 = x0.len();
    let h = 2.0 * PI / steps as f64;
    let l2 = lambda * lambda;
    let mut x = DVector::from_column_slice(x0);
    let mut v = DVector::zeros(n2);
    let mut tx = DMatrix::zeros(n2, n2 + 1);
    for i in 0..n2 {
        tx[(i, i)] = 1.0;
    }
    let mut tv = DMatrix::zeros(n2, n2 + 1);
    let mut g = DVector::zeros(n2);
    let accel = |x: &DVector<f64>,
                 tx: &DMatrix<f64>,
                 g: &mut DVector<f64>|
     -> Result<(DVector<f64>, DMatrix<f64>)> {
        gradient_into(x.as_slice(), p, g.as_mut_slice())?;
        let hess = hessian_of(x.as_slice(), p)?;
        let mut ta = &hess * tx * (-l2);
        for i in 0..n2 {
            ta[(i, n2)] -= 2.0 * lambda * g[i];
        }
        Ok((&*g * (-l2), ta))
    };
    let (mut a, mut ta) = accel(&x, &tx, &mut g)?;
    for _ in 0..steps {
        v += &a * (0.5 * h);
        tv += &ta * (0.5 * h);
        x += &v * h;
        tx += &tv * h;
        let next = accel(&x, &tx, &mut g)?;
        a = next.0;
        ta = next.1;
        v += &a * (0.5 * h);
        tv += &ta * (0.5 * h);
    }
    Ok((x.as_slice().to_vec(), v.as_slice().to_vec(), tx, tv))
}

/// The report mode a crossing refers to.
pub fn crossing_mode<'a>(report: &'a SpectralReport, c: &CriticalValue) -> Result<&'a Mode> {
    report
        .modes
        .iter()
        .find(|m| {
            m.component == c.j && m.branch == c.branch && m.irrep == c.irrep && !m.vector.is_empty()
        })
        .ok_or_else(|| Error::Domain(format!("no eigenvector for {}", c.label())))
}

/// Single shooting for a `2 pi`-periodic solution through
/// `u0 + eps e + ...` with zero initial velocity, `lambda` free.
///
/// Unknowns are the initial positions and `lambda`; besides periodicity the
/// solve fixes the projection on the seed eigenvector to `eps`, the centroid,
/// and the rotation gauge. Each Gauss-Newton step is a least-squares SVD
/// solve with backtracking.
pub fn find_periodic_orbit(
    eq: &Equilibrium,
    report: &SpectralReport,
    crossing: &CriticalValue,
    eps: f64,
    p: &PotentialParams,
    opts: &ShootingOptions,
) -> Result<PeriodicOrbit> {
    if !(eps > 0.0) {
        return Err(Error::Domain("amplitude must be positive".into()));
    }
    let mode = crossing_mode(report, crossing)?;
    let n = p.n;
    let n2 = 2 * n;
    let steps = {
        let s = (2.0 * PI / opts.dt).ceil() as usize;
        s.div_ceil(48) * 48
    };
    let base = eq.u0.to_vector();
    let e = DVector::from_column_slice(&mode.vector);
    let [tx, ty, rot] = null_directions(n);
    let mut x0 = &base + &e * eps;
    let mut lambda = crossing.lambda;

    let evaluate = |x0: &DVector<f64>, lambda: f64| -> Result<(DVector<f64>, f64, DMatrix<f64>)> {
        let (xt, vt, mx, mv) = flow_with_tangent(x0.as_slice(), lambda, steps, p)?;
        let rows = 2 * n2 + 4;
        let mut r = DVector::zeros(rows);
        let mut j = DMatrix::zeros(rows, n2 + 1);
        for i in 0..n2 {
            r[i] = xt[i] - x0[i];
            r[n2 + i] = vt[i];
        }
        let periodic = r.rows(0, 2 * n2).norm();
        j.view_mut((0, 0), (n2, n2 + 1)).copy_from(&mx);
        for i in 0..n2 {
            j[(i, i)] -= 1.0;
        }
        j.view_mut((n2, 0), (n2, n2 + 1)).copy_from(&mv);
        let d = x0 - &base;
        let cons: [(&DVector<f64>, f64); 4] = [(&e, eps), (&tx, 0.0), (&ty, 0.0), (&rot, 0.0)];
        for (k, (dir, target)) in cons.iter().enumerate() {
            r[2 * n2 + k] = dir.dot(&d) - target;
            for i in 0..n2 {
                j[(2 * n2 + k, i)] = dir[i];
            }
        }
        Ok((r, periodic, j))
    };

    let mut trace = Vec::new();
    let (mut r, mut periodic, mut jac) = evaluate(&x0, lambda)?;
    trace.push(ShootingStep {
        iteration: 0,
        residual: periodic,
        lambda,
    });
    let mut converged = periodic <= opts.tolerance;
    for it in 1..=opts.max_iterations {
        if converged {
            break;
        }
        let svd = jac.clone().svd(true, true);
        let dz = svd
            .solve(&r, 1e-12 * svd.singular_values.max())
            .map_err(|m| Error::Shooting {
                message: m.to_string(),
                trace: trace.iter().map(|s| s.residual).collect(),
            })?;
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha >= 1.0 / 64.0 {
            let cand = &x0 - dz.rows(0, n2) * alpha;
            let cl = lambda - alpha * dz[n2];
            if cl > 0.0 {
                if let Ok((cr, cp, cj)) = evaluate(&cand, cl) {
                    if cr.norm() < r.norm() {
                        x0 = cand;
                        lambda = cl;
                        r = cr;
                        periodic = cp;
                        jac = cj;
                        accepted = true;
                        break;
                    }
                }
            }
            alpha /= 2.0;
        }
        trace.push(ShootingStep {
            iteration: it,
            residual: periodic,
            lambda,
        });
        converged = periodic <= opts.tolerance;
        if !accepted {
            break;
        }
    }
    let label = crossing.label();
    if !converged && periodic > 1e-8 {
        return Err(Error::Shooting {
            message: format!(
                "{label}: periodicity residual {periodic:e} after {} iterations",
                trace.len() - 1
            ),
            trace: trace.iter().map(|s| s.residual).collect(),
        });
    }
    let zero = vec![0.0; n2];
    let h = 2.0 * PI / steps as f64;
    let guard = 1e-6 * eq.r0;
    let mut trajectory = verlet(x0.as_slice(), &zero, lambda, h, steps, 1, guard, p)?;
    trajectory.seed = Some(label.clone());
    trajectory.amplitude = eps;
    Ok(PeriodicOrbit {
        label,
        seed_mu: mode.mu,
        seed_lambda: crossing.lambda,
        lambda,
        amplitude: eps,
        residual: periodic,
        converged: true,
        trace,
        trajectory,
    })
}

/// Integrate a found orbit for `periods` normalized periods.
pub fn continue_orbit(
    orbit: &PeriodicOrbit,
    periods: usize,
    p: &PotentialParams,
    stride: usize,
) -> Result<Trajectory> {
    let tr = &orbit.trajectory;
    let x0 = tr.position(0).to_vec();
    let v0 = tr.velocity(0).to_vec();
    let steps = (tr.times.len() - 1) * periods;
    let guard = 1e-6 * centroid_scale(&x0);
    verlet(
        &x0,
        &v0,
        orbit.lambda,
        tr.dt,
        steps,
        stride.max(1),
        guard,
        p,
    )
}

fn element_deviation(traj: &Trajectory, w: &Window, x: u32, buf: &mut [Vec<f64>; 3]) -> f64 {
    let (h, k) = w.unpack(x);
    let g = GroupElement::amalgamated(DihedralElement {
        n: traj.n,
        r: h.s as usize,
        reflect: h.f,
    });
    let theta = 2.0 * PI * k.s as f64 / w.big as f64;
    let period = traj.duration();
    let scale = period / (2.0 * PI);
    let mut worst: f64 = 0.0;
    for (i, &t) in traj.times.iter().enumerate() {
        let src = if k.f {
            theta * scale - t
        } else {
            t - theta * scale
        };
        let [a, b, _] = buf;
        traj.position_at(src, a);
        crate::symmetry::act_flat(&g, a, b);
        let cur = traj.position(i);
        let d: f64 = b
            .iter()
            .zip(cur)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(d);
    }
    worst
}

/// `min` over conjugates of `max` over generators `(h, k)` of
/// `sup_t |h u(k^{-1} t) - u(t)|`, where rotations of `O(2)` shift time and
/// reflections reverse it. The trajectory is read as one period.
pub fn symmetry_deviation(traj: &Trajectory, id: ClassId) -> Result<f64> {
    let lat = Lattice::get(traj.n)?;
    let fold = lat.fold_of(id).unwrap_or(1);
    let w = Window::new(traj.n as u32, (2 * lat.m * fold) as u32);
    let sub = lat.realize_in(id, &w)?;
    if sub.gens.is_empty() {
        return Ok(0.0);
    }
    let best = w
        .elements()
        .collect::<Vec<u32>>()
        .into_par_iter()
        .map(|g| {
            let mut buf = [vec![0.0; 2 * traj.n], vec![0.0; 2 * traj.n], vec![]];
            sub.gens
                .iter()
                .map(|&x| element_deviation(traj, &w, w.conj(g, x), &mut buf))
                .fold(0.0f64, f64::max)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

/// The generator list of a class as `(spatial, temporal)` descriptions.
pub fn class_generators(n: usize, id: ClassId) -> Result<Vec<(DihedralElement, Dih, u32)>> {
    let lat = Lattice::get(n)?;
    let fold = lat.fold_of(id).unwrap_or(1);
    let w = Window::new(n as u32, (lat.m * fold) as u32);
    let sub = lat.realize_in(id, &w)?;
    Ok(sub
        .gens
        .iter()
        .map(|&x| {
            let (h, k) = w.unpack(x);
            (
                DihedralElement {
                    n,
                    r: h.s as usize,
                    reflect: h.f,
                },
                k,
                w.big,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::find_equilibrium;

    #[test]
    fn equilibrium_is_stationary() {
        let p = PotentialParams::reference();
        let eq = find_equilibrium(&p).unwrap();
        let t = integrate(
            &eq.u0,
            &[0.0; 12],
            0.3,
            2.0 * PI,
            &p,
            &IntegrateOptions::default(),
        )
        .unwrap();
        let x0 = eq.u0.to_vector();
        let dev = t
            .states
            .iter()
            .map(|s| {
                s[..12]
                    .iter()
                    .zip(x0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        assert!(dev <= 1e-9, "{dev}");
        let top = Lattice::get(6).unwrap().top();
        assert!(symmetry_deviation(&t, top).unwrap() <= 1e-10);
    }

    #[test]
    fn hermite_reproduces_samples() {
        let p = PotentialParams::harmonic(4);
        let eq = find_equilibrium(&p).unwrap();
        let mut x = eq.u0.clone();
        x.points[0][0] += 0.01;
        let t = integrate(
            &x,
            &[0.0; 8],
            0.5,
            1.0,
            &p,
            &IntegrateOptions {
                dt: 0.01,
                ..Default::default()
            },
        )
        .unwrap();
        let mut out = vec![0.0; 8];
        t.position_at(t.times[17], &mut out);
        for (a, b) in out.iter().zip(t.position(17)) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
