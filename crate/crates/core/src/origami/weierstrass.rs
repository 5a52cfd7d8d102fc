//! Fixed points of the hyperelliptic involution.
//!
//! On a genus-2 origami the involution is the rotation by π that exists as
//! an isomorphism from `(right, up)` onto `(right^-1, up^-1)`. A point of
//! square `i` at local coordinates `(x, y)` goes to `(1-x, 1-y)` in
//! `φ(i)`. Fixed points are located with doubled local coordinates so that
//! everything stays integral: `(0,0)` is a corner, `(1,1)` a centre,
//! `(2,1)` and `(1,2)` the midpoints of the right and top edges.

use super::{cycle_lengths, inverse, Origami};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub square: u32,
    /// Doubled local coordinates inside `square`.
    pub doubled: (u8, u8),
}

impl FixedPoint {
    /// A vertex of the tiling.
    pub fn is_integer(&self) -> bool {
        self.doubled.0.is_multiple_of(2) && self.doubled.1.is_multiple_of(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassPoints {
    pub points: Vec<FixedPoint>,
}

impl WeierstrassPoints {
    pub fn integer_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_integer()).count()
    }
}

impl Origami {
    /// The hyperelliptic involution as a square permutation `φ` with
    /// `φ∘right = right^-1∘φ` and `φ∘up = up^-1∘φ`.
    pub fn hyperelliptic_involution(&self) -> Result<Vec<u32>> {
        if !self.is_in_h2() {
            return Err(Error::NotInH2);
        }
        let rotated = Origami::from_parts_unchecked(inverse(&self.right), inverse(&self.up));
        // a square with the cone point at its bottom-left corner goes to one
        // with the cone point at its top-right corner
        let singular = self.singular_squares();
        let s0 = singular[0] as usize;
        let targets = (0..self.n()).filter(|&j| {
            let tr = self.right[self.up[j] as usize];
            singular.contains(&tr)
        });
        for to in targets {
            if let Some(phi) = self.isomorphism(&rotated, s0, to) {
                return Ok(phi);
            }
        }
        Err(Error::MalformedSurface(
            "no hyperelliptic involution".into(),
        ))
    }

    /// All fixed points of the hyperelliptic involution (six in H(2)).
    pub fn weierstrass_points(&self) -> Result<WeierstrassPoints> {
        let phi = self.hyperelliptic_involution()?;
        let n = self.n();
        let comm = self.commutator();
        // vertex class of the bottom-left corner of each square
        let mut vertex = vec![usize::MAX; n];
        let mut classes = 0;
        for s in 0..n {
            if vertex[s] != usize::MAX {
                continue;
            }
            let mut i = s;
            while vertex[i] == usize::MAX {
                vertex[i] = classes;
                i = comm[i] as usize;
            }
            classes += 1;
        }
        debug_assert_eq!(classes, cycle_lengths(&comm).len());

        let mut points = Vec::new();
        let mut vertex_done = vec![false; classes];
        for i in 0..n {
            let p = phi[i] as usize;
            // the bottom-left corner of i goes to the top-right corner of φ(i)
            let image = vertex[self.right[self.up[p] as usize] as usize];
            if image == vertex[i] && !vertex_done[vertex[i]] {
                vertex_done[vertex[i]] = true;
                points.push(FixedPoint {
                    square: i as u32,
                    doubled: (0, 0),
                });
            }
            if p == i {
                points.push(FixedPoint {
                    square: i as u32,
                    doubled: (1, 1),
                });
            }
            if p == self.right[i] as usize {
                points.push(FixedPoint {
                    square: i as u32,
                    doubled: (2, 1),
                });
            }
            if p == self.up[i] as usize {
                points.push(FixedPoint {
                    square: i as u32,
                    doubled: (1, 2),
                });
            }
        }
        Ok(WeierstrassPoints { points })
    }

    /// Number of Weierstrass points at vertices of the tiling: 1 on the
    /// orbit `A_n`, 3 on `B_n`. Only defined for odd `n`.
    pub fn integer_weierstrass_count(&self) -> Result<usize> {
        if self.n().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "integer Weierstrass count needs odd n, got {}",
                self.n()
            )));
        }
        Ok(self.weierstrass_points()?.integer_count())
    }
}
