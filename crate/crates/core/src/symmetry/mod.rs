//! Dihedral and planar symmetry: the action on configurations, the
//! isotypical decomposition of the slice, and the subgroup lattice of
//! `D_n x O(2)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::model::Configuration;

pub(crate) mod isotypic;
mod lattice;
pub mod window;

pub use isotypic::{isotypical_basis, Irrep, IsotypicalComponent, Parity};
pub use lattice::{
    n_pairs, subgroup_classes, ClassId, DihedralClass, DihedralKind, KPart, Lattice, LatticeExport,
    Quotient, SubgroupClass, Template, MAX_N,
};

/// `gamma^r kappa^e` in `D_n`; acts on vertex labels by `k -> r + (-1)^e k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub n: usize,
    pub r: usize,
    pub reflect: bool,
}

impl DihedralElement {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            r: 0,
            reflect: false,
        }
    }

    /// The generator `xi`: vertex `k` moves to `k + 1`.
    pub fn xi(n: usize) -> Self {
        Self {
            n,
            r: 1 % n,
            reflect: false,
        }
    }

    /// The reflection fixing vertex 0.
    pub fn kappa(n: usize) -> Self {
        Self {
            n,
            r: 0,
            reflect: true,
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        let n = self.n;
        let r = if self.reflect {
            self.r + n - o.r % n
        } else {
            self.r + o.r
        };
        Self {
            n,
            r: r % n,
            reflect: self.reflect ^ o.reflect,
        }
    }

    pub fn inverse(&self) -> Self {
        if self.reflect {
            *self
        } else {
            Self {
                r: (self.n - self.r) % self.n,
                ..*self
            }
        }
    }

    pub fn permute(&self, k: usize) -> usize {
        let n = self.n;
        if self.reflect {
            (self.r + n - k % n) % n
        } else {
            (self.r + k) % n
        }
    }
}

/// `R_angle C^reflect` in `O(2)` with `C` the reflection in the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarElement {
    pub angle: f64,
    pub reflect: bool,
}

impl PlanarElement {
    pub fn identity() -> Self {
        Self {
            angle: 0.0,
            reflect: false,
        }
    }

    pub fn rotation(angle: f64) -> Self {
        Self {
            angle,
            reflect: false,
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        let angle = if self.reflect {
            self.angle - o.angle
        } else {
            self.angle + o.angle
        };
        Self {
            angle: angle.rem_euclid(2.0 * PI),
            reflect: self.reflect ^ o.reflect,
        }
    }

    pub fn inverse(&self) -> Self {
        if self.reflect {
            *self
        } else {
            Self::rotation((-self.angle).rem_euclid(2.0 * PI))
        }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (x, y) = if self.reflect {
            (p[0], -p[1])
        } else {
            (p[0], p[1])
        };
        let (s, c) = self.angle.sin_cos();
        [c * x - s * y, s * x + c * y]
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.angle.sin_cos();
        let f = if self.reflect { -1.0 } else { 1.0 };
        [[c, -s * f], [s, c * f]]
    }
}

/// Element of `D_n x O(2)` acting on configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub dihedral: DihedralElement,
    pub planar: PlanarElement,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self {
            dihedral: DihedralElement::identity(n),
            planar: PlanarElement::identity(),
        }
    }

    /// The diagonal copy of `g` that fixes the regular polygon.
    pub fn amalgamated(g: DihedralElement) -> Self {
        Self {
            dihedral: g,
            planar: PlanarElement {
                angle: 2.0 * PI * g.r as f64 / g.n as f64,
                reflect: g.reflect,
            },
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self {
            dihedral: self.dihedral.compose(&o.dihedral),
            planar: self.planar.compose(&o.planar),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            dihedral: self.dihedral.inverse(),
            planar: self.planar.inverse(),
        }
    }

    /// Interleaved-coordinate matrix of the action.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.dihedral.n;
        let a = self.planar.matrix();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            let t = self.dihedral.permute(k);
            for i in 0..2 {
                for j in 0..2 {
                    m[(2 * t + i, 2 * k + j)] = a[i][j];
                }
            }
        }
        m
    }
}

/// `(g u)_{pi_g(k)} = A u_k`.
pub fn act(g: &GroupElement, u: &Configuration) -> Configuration {
    let n = u.len();
    let mut out = vec![[0.0; 2]; n];
    for (k, p) in u.points.iter().enumerate() {
        out[g.dihedral.permute(k)] = g.planar.apply(*p);
    }
    Configuration::new(out)
}

/// Same action on interleaved coordinates.
pub fn act_flat(g: &GroupElement, x: &[f64], out: &mut [f64]) {
    let n = x.len() / 2;
    for k in 0..n {
        let q = g.planar.apply([x[2 * k], x[2 * k + 1]]);
        let t = g.dihedral.permute(k);
        out[2 * t] = q[0];
        out[2 * t + 1] = q[1];
    }
}

/// Generators of the diagonal symmetry group of the regular polygon.
pub fn polygon_generators(n: usize) -> [GroupElement; 2] {
    [
        GroupElement::amalgamated(DihedralElement::xi(n)),
        GroupElement::amalgamated(DihedralElement::kappa(n)),
    ]
}
