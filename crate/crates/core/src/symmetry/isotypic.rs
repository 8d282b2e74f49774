use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::DihedralElement;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Parity::Plus => '+',
            Parity::Minus => '-',
        }
    }
}

/// Real irreducible representation of `D_n`.
///
/// `j = 0` and, for even `n`, `j = n/2` are one-dimensional and carry a
/// parity: the eigenvalue of the vertex-fixing reflection. Every other `j`
/// is the two-dimensional representation with rotation angle `2 pi j / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Irrep {
    pub j: usize,
    pub parity: Option<Parity>,
}

impl Irrep {
    pub fn new(n: usize, j: usize, parity: Option<Parity>) -> Result<Self> {
        if j > n / 2 {
            return Err(Error::Domain(format!(
                "irrep index {j} exceeds n/2 for n = {n}"
            )));
        }
        let one_dim = j == 0 || 2 * j == n;
        let parity = match (one_dim, parity) {
            (true, None) if j == 0 => Some(Parity::Plus),
            (true, None) => {
                return Err(Error::Domain(format!("irrep {j} of D_{n} needs a parity")));
            }
            (true, p) => p,
            (false, None) => None,
            (false, Some(_)) => {
                return Err(Error::Domain(format!("irrep {j} of D_{n} has no parity")));
            }
        };
        Ok(Self { j, parity })
    }

    pub fn trivial() -> Self {
        Self {
            j: 0,
            parity: Some(Parity::Plus),
        }
    }

    pub fn dim(&self) -> usize {
        if self.parity.is_some() {
            1
        } else {
            2
        }
    }

    pub fn character(&self, g: &DihedralElement) -> f64 {
        let n = g.n;
        match (self.j, self.parity) {
            (0, Some(p)) => {
                if g.reflect {
                    p.sign()
                } else {
                    1.0
                }
            }
            (_, Some(p)) => {
                let rot = if g.r.is_multiple_of(2) { 1.0 } else { -1.0 };
                rot * if g.reflect { p.sign() } else { 1.0 }
            }
            (j, None) => {
                if g.reflect {
                    0.0
                } else {
                    2.0 * (2.0 * PI * (j * g.r) as f64 / n as f64).cos()
                }
            }
        }
    }

    /// Slice irreducibles of the `n`-ring in component order.
    pub fn slice_irreps(n: usize) -> Vec<Irrep> {
        let mut out = vec![Irrep::trivial()];
        for j in 1..=n / 2 {
            if 2 * j == n {
                out.push(Irrep {
                    j,
                    parity: Some(Parity::Plus),
                });
                out.push(Irrep {
                    j,
                    parity: Some(Parity::Minus),
                });
            } else {
                out.push(Irrep { j, parity: None });
            }
        }
        out
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Some(p) if self.j > 0 => write!(f, "V{}{}", self.j, p.symbol()),
            Some(Parity::Minus) => write!(f, "V0-"),
            _ => write!(f, "V{}", self.j),
        }
    }
}

/// Isotypical component `V_j` of the slice at the regular polygon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotypicalComponent {
    pub index: usize,
    pub dim: usize,
    /// Orthonormal basis in interleaved coordinates.
    pub basis: Vec<DVector<f64>>,
    /// Irreducible subspaces as (irrep, basis positions).
    pub parts: Vec<(Irrep, Vec<usize>)>,
}

/// `(gamma^{p k})_k / sqrt(n)` and `i` times it, in interleaved coordinates.
pub(crate) fn fourier_pair(n: usize, p: i64) -> [DVector<f64>; 2] {
    let norm = (n as f64).sqrt();
    let re = DVector::from_fn(2 * n, |i, _| {
        let th = 2.0 * PI * (p * (i / 2) as i64) as f64 / n as f64;
        if i % 2 == 0 {
            th.cos() / norm
        } else {
            th.sin() / norm
        }
    });
    let im = DVector::from_fn(2 * n, |i, _| {
        let th = 2.0 * PI * (p * (i / 2) as i64) as f64 / n as f64;
        if i % 2 == 0 {
            -th.sin() / norm
        } else {
            th.cos() / norm
        }
    });
    [re, im]
}

/// Two translations and the infinitesimal rotation of the polygon.
pub fn null_directions(n: usize) -> [DVector<f64>; 3] {
    let [tx, ty] = fourier_pair(n, 0);
    let [_, rot] = fourier_pair(n, 1);
    [tx, ty, rot]
}

pub fn isotypical_basis(n: usize) -> Result<Vec<IsotypicalComponent>> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "n = {n} but at least 3 particles are needed"
        )));
    }
    let mut out = Vec::new();
    let [radial, _] = fourier_pair(n, 1);
    out.push(IsotypicalComponent {
        index: 0,
        dim: 1,
        basis: vec![radial],
        parts: vec![(Irrep::trivial(), vec![0])],
    });
    let [a, b] = fourier_pair(n, 2);
    out.push(IsotypicalComponent {
        index: 1,
        dim: 2,
        basis: vec![a, b],
        parts: vec![(Irrep { j: 1, parity: None }, vec![0, 1])],
    });
    for j in 2..=n / 2 {
        let p = 1 - j as i64;
        if 2 * j == n {
            let [a, b] = fourier_pair(n, p);
            out.push(IsotypicalComponent {
                index: j,
                dim: 2,
                basis: vec![a, b],
                parts: vec![
                    (
                        Irrep {
                            j,
                            parity: Some(Parity::Plus),
                        },
                        vec![0],
                    ),
                    (
                        Irrep {
                            j,
                            parity: Some(Parity::Minus),
                        },
                        vec![1],
                    ),
                ],
            });
        } else {
            let [a, b] = fourier_pair(n, p);
            let [c, d] = fourier_pair(n, 1 + j as i64);
            let v = Irrep { j, parity: None };
            out.push(IsotypicalComponent {
                index: j,
                dim: 4,
                basis: vec![a, b, c, d],
                parts: vec![(v, vec![0, 1]), (v, vec![2, 3])],
            });
        }
    }
    Ok(out)
}
