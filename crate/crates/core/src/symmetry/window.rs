//! Exact arithmetic in the finite groups `D_n x D_N`.
//!
//! A dihedral element `(s, f)` of `D_m` stands for `R^s kappa^f` with `R` the
//! rotation by `2 pi / m`. Elements of the product are packed into a `u32`.

use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dih {
    pub s: u32,
    pub f: bool,
}

impl Dih {
    pub const ONE: Dih = Dih { s: 0, f: false };

    pub fn rot(s: u32) -> Self {
        Dih { s, f: false }
    }

    pub fn refl(s: u32) -> Self {
        Dih { s, f: true }
    }

    pub fn mul(self, o: Dih, m: u32) -> Dih {
        let s = if self.f {
            self.s + m - o.s % m
        } else {
            self.s + o.s
        };
        Dih {
            s: s % m,
            f: self.f ^ o.f,
        }
    }

    pub fn inv(self, m: u32) -> Dih {
        if self.f {
            self
        } else {
            Dih {
                s: (m - self.s % m) % m,
                f: false,
            }
        }
    }

    pub fn is_rotation(self) -> bool {
        !self.f
    }
}

/// The group `D_n x D_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n: u32,
    pub big: u32,
}

impl Window {
    pub fn new(n: u32, big: u32) -> Self {
        Self { n, big }
    }

    pub fn order(&self) -> usize {
        (4 * self.n * self.big) as usize
    }

    pub fn pack(&self, h: Dih, k: Dih) -> u32 {
        ((h.s * 2 + h.f as u32) * 2 * self.big) + k.s * 2 + k.f as u32
    }

    pub fn unpack(&self, x: u32) -> (Dih, Dih) {
        let hi = x / (2 * self.big);
        let lo = x % (2 * self.big);
        (
            Dih {
                s: hi / 2,
                f: hi % 2 == 1,
            },
            Dih {
                s: lo / 2,
                f: lo % 2 == 1,
            },
        )
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let (a, b) = self.unpack(x);
        let (c, d) = self.unpack(y);
        self.pack(a.mul(c, self.n), b.mul(d, self.big))
    }

    pub fn inv(&self, x: u32) -> u32 {
        let (a, b) = self.unpack(x);
        self.pack(a.inv(self.n), b.inv(self.big))
    }

    /// `g^{-1} x g`
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generate(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![0u32];
        seen[0] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

/// Membership bitset over a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(size: usize, items: &[u32]) -> Self {
        let mut words = vec![0u64; size.div_ceil(64)];
        for &x in items {
            words[(x / 64) as usize] |= 1 << (x % 64);
        }
        Self { words }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }
}

/// A subgroup of a window, with a generating set and a membership index.
#[derive(Debug, Clone)]
pub struct Sub {
    pub elems: Vec<u32>,
    pub gens: Vec<u32>,
    pub bits: Bits,
}

impl Sub {
    pub fn from_gens(w: &Window, gens: &[u32]) -> Self {
        let elems = w.generate(gens);
        let bits = Bits::new(w.order(), &elems);
        let gens = minimal_gens(w, &elems, gens);
        Self { elems, gens, bits }
    }

    pub fn from_elems(w: &Window, elems: Vec<u32>) -> Self {
        let bits = Bits::new(w.order(), &elems);
        let gens = minimal_gens(w, &elems, &elems);
        Self { elems, gens, bits }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x)
    }

    /// Does `g^{-1} self g` lie inside `other`?
    pub fn conj_inside(&self, w: &Window, g: u32, other: &Sub) -> bool {
        self.gens.iter().all(|&x| other.contains(w.conj(g, x)))
    }

    /// Number of `g` in the window with `g^{-1} self g = self`.
    pub fn normalizer_order(&self, w: &Window) -> usize {
        w.elements()
            .filter(|&g| self.conj_inside(w, g, self))
            .count()
    }

    /// Lexicographically smallest conjugate element list over the window.
    pub fn canonical(&self, w: &Window) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        let mut seen = BTreeSet::new();
        for g in w.elements() {
            let mut c: Vec<u32> = self.elems.iter().map(|&x| w.conj(g, x)).collect();
            c.sort_unstable();
            if !seen.insert(c.clone()) {
                continue;
            }
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
        best.expect("window is nonempty")
    }
}

/// Greedy generating set drawn from `pool`.
fn minimal_gens(w: &Window, elems: &[u32], pool: &[u32]) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut have = vec![0u32];
    // try elements of large order first so that few generators suffice
    let mut cand: Vec<u32> = pool.iter().copied().filter(|&x| x != 0).collect();
    cand.sort_by_key(|&x| std::cmp::Reverse(element_order(w, x)));
    for x in cand {
        if have.len() == elems.len() {
            break;
        }
        if have.binary_search(&x).is_err() {
            gens.push(x);
            have = w.generate(&gens);
        }
    }
    gens
}

pub fn element_order(w: &Window, x: u32) -> u32 {
    let mut y = x;
    let mut k = 1;
    while y != 0 {
        y = w.mul(y, x);
        k += 1;
    }
    k
}
