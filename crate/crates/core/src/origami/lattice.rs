use super::cylinder::gcd;
use super::{CylinderDiagram, Direction, Origami};
use crate::error::Result;

/// A full-rank sublattice of `Z^2` in Hermite normal form: it is spanned by
/// the columns `(a, 0)` and `(b, c)` with `a, c > 0` and `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HolonomyLattice {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HolonomyLattice {
    /// Column-reduces the generators. Returns `None` when they span a
    /// lattice of rank below 2.
    pub fn from_generators(gens: &[(i64, i64)]) -> Option<Self> {
        // current basis: (a, 0) and (b, c)
        let (mut a, mut b, mut c) = (0i64, 0i64, 0i64);
        for &(x, y) in gens {
            let (mut p, mut q) = ((b, c), (x, y));
            while q.1 != 0 {
                let k = p.1.div_euclid(q.1);
                p = (p.0 - k * q.0, p.1 - k * q.1);
                std::mem::swap(&mut p, &mut q);
            }
            // q now lies on the x-axis
            a = gcd(a.unsigned_abs(), q.0.unsigned_abs()) as i64;
            (b, c) = p;
            if c < 0 {
                (b, c) = (-b, -c);
            }
            if a > 0 {
                b = b.rem_euclid(a);
            }
        }
        (a > 0 && c > 0).then_some(HolonomyLattice { a, b, c })
    }

    /// Index of the lattice in `Z^2`.
    pub fn determinant(&self) -> i64 {
        self.a * self.c
    }

    pub fn contains(&self, (x, y): (i64, i64)) -> bool {
        if y % self.c != 0 {
            return false;
        }
        let x = x - (y / self.c) * self.b;
        x % self.a == 0
    }

    /// The period lattice read off cylinder coordinates.
    pub fn of_diagram(d: &CylinderDiagram) -> Self {
        let gens = diagram_generators(d);
        HolonomyLattice::from_generators(&gens).expect("cylinder periods have rank 2")
    }
}

/// Horizontal periods generate `g Z` with `g` the gcd of the horizontal
/// saddle-connection lengths; crossing a cylinder contributes its
/// `(twist, height)` modulo that subgroup.
pub(crate) fn diagram_generators(d: &CylinderDiagram) -> Vec<(i64, i64)> {
    match *d {
        CylinderDiagram::TwoCylinder {
            h1,
            h2,
            w1,
            w2,
            t1,
            t2,
        } => vec![
            (gcd(w1 as u64, w2 as u64) as i64, 0),
            (t1 as i64, h1 as i64),
            (t2 as i64, h2 as i64),
        ],
        CylinderDiagram::OneCylinder { l1, l2, l3, t, h } => vec![
            (gcd(gcd(l1 as u64, l2 as u64), l3 as u64) as i64, 0),
            (t as i64, h as i64),
        ],
    }
}

impl CylinderDiagram {
    pub fn is_primitive(&self) -> bool {
        HolonomyLattice::of_diagram(self).determinant() == 1
    }
}

impl Origami {
    /// Whether the periods of the surface span all of `Z^2`.
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self
            .cylinder_decomposition(Direction::Horizontal)?
            .is_primitive())
    }

    pub fn holonomy_lattice(&self) -> Result<HolonomyLattice> {
        Ok(HolonomyLattice::of_diagram(
            &self.cylinder_decomposition(Direction::Horizontal)?,
        ))
    }
}
