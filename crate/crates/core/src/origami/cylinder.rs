//! Cylinder coordinates for surfaces in H(2).
//!
//! Two-cylinder surfaces `S(h1,h2,w1,w2,t1,t2)` stack the narrow cylinder
//! `c1` on top of the wide cylinder `c2`. The top of `c2` is cut into
//! `[0,w1)`, glued to the bottom of `c1`, and `[w1,w2)`, glued back to the
//! bottom of `c2`; the top of `c1` is glued to `[0,w1)` on the bottom of
//! `c2`. A twist `t` shifts the top row of its cylinder: top position `p`
//! is glued as untwisted position `p - t` would be. With this convention
//! the shear `T` acts by `t_i -> t_i + h_i`.
//!
//! One-cylinder surfaces carry saddle connections of lengths `l1,l2,l3`
//! along the top and `l3,l2,l1` along the bottom.

use std::fmt;
use std::str::FromStr;

use super::{power, Origami};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CylinderDiagram {
    OneCylinder {
        l1: u32,
        l2: u32,
        l3: u32,
        t: u32,
        h: u32,
    },
    TwoCylinder {
        h1: u32,
        h2: u32,
        w1: u32,
        w2: u32,
        t1: u32,
        t2: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl CylinderDiagram {
    /// Validates dimensions and reduces twists modulo the widths.
    pub fn two_cylinder(h1: i64, h2: i64, w1: i64, w2: i64, t1: i64, t2: i64) -> Result<Self> {
        if h1 < 1 || h2 < 1 || w1 < 1 || w2 < 1 {
            return Err(Error::InvalidDiagram(format!(
                "heights and widths must be positive: 2cyl({h1},{h2},{w1},{w2},{t1},{t2})"
            )));
        }
        if w1 >= w2 {
            return Err(Error::InvalidDiagram(format!(
                "need w1 < w2, got w1 = {w1}, w2 = {w2}"
            )));
        }
        Ok(CylinderDiagram::TwoCylinder {
            h1: h1 as u32,
            h2: h2 as u32,
            w1: w1 as u32,
            w2: w2 as u32,
            t1: t1.rem_euclid(w1) as u32,
            t2: t2.rem_euclid(w2) as u32,
        })
    }

    pub fn one_cylinder(l1: i64, l2: i64, l3: i64, t: i64, h: i64) -> Result<Self> {
        if l1 < 1 || l2 < 1 || l3 < 1 || h < 1 {
            return Err(Error::InvalidDiagram(format!(
                "lengths and height must be positive: 1cyl({l1},{l2},{l3};{t};{h})"
            )));
        }
        let w = l1 + l2 + l3;
        Ok(CylinderDiagram::OneCylinder {
            l1: l1 as u32,
            l2: l2 as u32,
            l3: l3 as u32,
            t: t.rem_euclid(w) as u32,
            h: h as u32,
        })
    }

    /// `L(a,b) = S(a-1,1,1,b,0,0)`.
    pub fn l_shape(a: i64, b: i64) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::InvalidDiagram(format!(
                "L(a,b) needs a, b >= 2, got L({a},{b})"
            )));
        }
        Self::two_cylinder(a - 1, 1, 1, b, 0, 0)
    }

    pub fn n(&self) -> usize {
        match *self {
            CylinderDiagram::OneCylinder { l1, l2, l3, h, .. } => (h * (l1 + l2 + l3)) as usize,
            CylinderDiagram::TwoCylinder { h1, h2, w1, w2, .. } => (h1 * w1 + h2 * w2) as usize,
        }
    }

    /// `(height, width)` of each cylinder.
    pub fn cylinders(&self) -> Vec<(u32, u32)> {
        match *self {
            CylinderDiagram::OneCylinder { l1, l2, l3, h, .. } => vec![(h, l1 + l2 + l3)],
            CylinderDiagram::TwoCylinder { h1, h2, w1, w2, .. } => vec![(h1, w1), (h2, w2)],
        }
    }

    /// `lcm_i (w_i / gcd(h_i, w_i))`.
    pub fn cusp_width_formula(&self) -> u64 {
        self.cylinders()
            .iter()
            .map(|&(h, w)| (w / gcd(h as u64, w as u64) as u32) as u64)
            .fold(1, lcm)
    }

    /// The origami with exactly this horizontal cylinder decomposition.
    pub fn build(&self) -> Origami {
        match *self {
            CylinderDiagram::TwoCylinder {
                h1,
                h2,
                w1,
                w2,
                t1,
                t2,
            } => build_two(h1, h2, w1, w2, t1, t2),
            CylinderDiagram::OneCylinder { l1, l2, l3, t, h } => build_one(l1, l2, l3, t, h),
        }
    }
}

fn build_two(h1: u32, h2: u32, w1: u32, w2: u32, t1: u32, t2: u32) -> Origami {
    let (h1, h2, w1, w2) = (h1 as usize, h2 as usize, w1 as usize, w2 as usize);
    let big = |row: usize, pos: usize| (row * w2 + pos) as u32;
    let small = |row: usize, pos: usize| (h2 * w2 + row * w1 + pos) as u32;
    let n = h1 * w1 + h2 * w2;
    let mut right = vec![0u32; n];
    let mut up = vec![0u32; n];
    for row in 0..h2 {
        for pos in 0..w2 {
            let i = big(row, pos) as usize;
            right[i] = big(row, (pos + 1) % w2);
            up[i] = if row + 1 < h2 {
                big(row + 1, pos)
            } else {
                let x = (pos + w2 - t2 as usize) % w2;
                if x < w1 {
                    small(0, x)
                } else {
                    big(0, x)
                }
            };
        }
    }
    for row in 0..h1 {
        for pos in 0..w1 {
            let i = small(row, pos) as usize;
            right[i] = small(row, (pos + 1) % w1);
            up[i] = if row + 1 < h1 {
                small(row + 1, pos)
            } else {
                big(0, (pos + w1 - t1 as usize) % w1)
            };
        }
    }
    Origami::from_parts_unchecked(right, up)
}

fn build_one(l1: u32, l2: u32, l3: u32, t: u32, h: u32) -> Origami {
    let (l1, l2, l3, h) = (l1 as usize, l2 as usize, l3 as usize, h as usize);
    let w = l1 + l2 + l3;
    let sq = |row: usize, pos: usize| (row * w + pos) as u32;
    let mut right = vec![0u32; h * w];
    let mut up = vec![0u32; h * w];
    for row in 0..h {
        for pos in 0..w {
            let i = sq(row, pos) as usize;
            right[i] = sq(row, (pos + 1) % w);
            up[i] = if row + 1 < h {
                sq(row + 1, pos)
            } else {
                let x = (pos + w - t as usize) % w;
                let below = if x < l1 {
                    l3 + l2 + x
                } else if x < l1 + l2 {
                    l3 + (x - l1)
                } else {
                    x - l1 - l2
                };
                sq(0, below)
            };
        }
    }
    Origami::from_parts_unchecked(right, up)
}

struct Cylinder {
    /// Leftmost square of the bottom row for the chosen origin.
    bottom: Vec<u32>,
    height: usize,
}

impl Cylinder {
    fn width(&self) -> usize {
        self.bottom.len()
    }
}

impl Origami {
    /// Reads the cylinder coordinates in the given direction. The vertical
    /// decomposition is the horizontal decomposition of the `S`-image.
    pub fn cylinder_decomposition(&self, direction: Direction) -> Result<CylinderDiagram> {
        match direction {
            Direction::Horizontal => self.horizontal_decomposition(),
            Direction::Vertical => self.apply_s().horizontal_decomposition(),
        }
    }

    fn horizontal_decomposition(&self) -> Result<CylinderDiagram> {
        if !self.is_in_h2() {
            return Err(Error::NotInH2);
        }
        let n = self.n();
        let comm = self.commutator();
        let singular: Vec<bool> = (0..n).map(|j| comm[j] as usize != j).collect();

        // rows are the cycles of `right`
        let mut row_of = vec![usize::MAX; n];
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for start in 0..n {
            if row_of[start] != usize::MAX {
                continue;
            }
            let mut row = Vec::new();
            let mut i = start;
            while row_of[i] == usize::MAX {
                row_of[i] = rows.len();
                row.push(i as u32);
                i = self.right[i] as usize;
            }
            rows.push(row);
        }
        // the top edge of a row is interior to a cylinder iff every vertex on
        // it is regular; the top-right corner of `i` is the bottom-left corner
        // of `right(up(i))`
        let top_regular: Vec<bool> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .all(|&i| !singular[self.right[self.up[i as usize] as usize] as usize])
            })
            .collect();

        let mut cylinders: Vec<Cylinder> = Vec::new();
        let mut covered = 0;
        for (r, row) in rows.iter().enumerate() {
            if !row.iter().any(|&i| singular[i as usize]) {
                continue;
            }
            let mut height = 1;
            let mut cur = r;
            while top_regular[cur] {
                cur = row_of[self.up[rows[cur][0] as usize] as usize];
                height += 1;
                if height > n {
                    return Err(Error::MalformedSurface("cylinder does not close".into()));
                }
            }
            covered += height * row.len();
            cylinders.push(Cylinder {
                bottom: row.clone(),
                height,
            });
        }
        if covered != n {
            return Err(Error::MalformedSurface(format!(
                "cylinders cover {covered} of {n} squares"
            )));
        }
        match cylinders.len() {
            1 => self.read_one_cylinder(&cylinders[0], &singular),
            2 => self.read_two_cylinders(cylinders, &singular, &row_of),
            k => Err(Error::MalformedSurface(format!("{k} horizontal cylinders"))),
        }
    }

    /// Square at `(row, pos)` of a cylinder whose bottom row starts at `origin`.
    fn top_row_from(&self, origin: u32, width: usize, height: usize) -> Vec<u32> {
        let lift = power(&self.up, height as i64 - 1);
        let mut out = Vec::with_capacity(width);
        let mut i = origin as usize;
        for _ in 0..width {
            out.push(lift[i]);
            i = self.right[i] as usize;
        }
        out
    }

    fn read_two_cylinders(
        &self,
        mut cyls: Vec<Cylinder>,
        singular: &[bool],
        row_of: &[usize],
    ) -> Result<CylinderDiagram> {
        cyls.sort_by_key(|c| c.width());
        let (c1, c2) = (&cyls[0], &cyls[1]);
        if c1.width() == c2.width() {
            return Err(Error::MalformedSurface(
                "two cylinders of equal width".into(),
            ));
        }
        let down = super::inverse(&self.up);
        let c1_rows: Vec<usize> = {
            let lift_rows = |c: &Cylinder| {
                let mut rows = Vec::new();
                let mut i = c.bottom[0] as usize;
                for _ in 0..c.height {
                    rows.push(row_of[i]);
                    i = self.up[i] as usize;
                }
                rows
            };
            lift_rows(c1)
        };
        let origin2 = *c2
            .bottom
            .iter()
            .find(|&&i| {
                singular[i as usize] && c1_rows.contains(&row_of[down[i as usize] as usize])
            })
            .ok_or_else(|| {
                Error::MalformedSurface("no saddle connection below the wide cylinder".into())
            })?;
        let origin1 = *c1
            .bottom
            .iter()
            .find(|&&i| singular[i as usize])
            .ok_or_else(|| Error::MalformedSurface("narrow cylinder has no cone point".into()))?;
        let top1 = self.top_row_from(origin1, c1.width(), c1.height);
        let top2 = self.top_row_from(origin2, c2.width(), c2.height);
        let t1 = top1
            .iter()
            .position(|&i| self.up[i as usize] == origin2)
            .ok_or_else(|| {
                Error::MalformedSurface("narrow cylinder top not glued to wide bottom".into())
            })?;
        let t2 = top2
            .iter()
            .position(|&i| self.up[i as usize] == origin1)
            .ok_or_else(|| {
                Error::MalformedSurface("wide cylinder top not glued to narrow bottom".into())
            })?;
        CylinderDiagram::two_cylinder(
            c1.height as i64,
            c2.height as i64,
            c1.width() as i64,
            c2.width() as i64,
            t1 as i64,
            t2 as i64,
        )
    }

    fn read_one_cylinder(&self, cyl: &Cylinder, singular: &[bool]) -> Result<CylinderDiagram> {
        let w = cyl.width();
        // walk the bottom row from any square so positions are consistent
        let mut row = Vec::with_capacity(w);
        let mut i = cyl.bottom[0] as usize;
        for _ in 0..w {
            row.push(i as u32);
            i = self.right[i] as usize;
        }
        let marks: Vec<usize> = (0..w).filter(|&p| singular[row[p] as usize]).collect();
        if marks.len() != 3 {
            return Err(Error::MalformedSurface(format!(
                "{} cone points on the cylinder bottom",
                marks.len()
            )));
        }
        let mut best: Option<CylinderDiagram> = None;
        for k in 0..3 {
            let origin = marks[k];
            let gap = |a: usize, b: usize| (b + w - a) % w;
            let l3 = gap(marks[k], marks[(k + 1) % 3]);
            let l2 = gap(marks[(k + 1) % 3], marks[(k + 2) % 3]);
            let l1 = gap(marks[(k + 2) % 3], marks[k]);
            let a_start = row[(origin + l3 + l2) % w];
            let top = self.top_row_from(row[origin], w, cyl.height);
            let t = top
                .iter()
                .position(|&i| self.up[i as usize] == a_start)
                .ok_or_else(|| {
                    Error::MalformedSurface("cylinder top not glued to its bottom".into())
                })?;
            let cand = CylinderDiagram::one_cylinder(
                l1 as i64,
                l2 as i64,
                l3 as i64,
                t as i64,
                cyl.height as i64,
            )?;
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        Ok(best.expect("three readings"))
    }
}

/// `1cyl(l1,l2,l3;t;h)` or `2cyl(h1,h2,w1,w2,t1,t2)`.
impl fmt::Display for CylinderDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CylinderDiagram::OneCylinder { l1, l2, l3, t, h } => {
                write!(f, "1cyl({l1},{l2},{l3};{t};{h})")
            }
            CylinderDiagram::TwoCylinder {
                h1,
                h2,
                w1,
                w2,
                t1,
                t2,
            } => {
                write!(f, "2cyl({h1},{h2},{w1},{w2},{t1},{t2})")
            }
        }
    }
}

/// Accepts the two printed forms and the `L(a,b)` shorthand. Syntax errors
/// are [`Error::Parse`]; well-formed but invalid dimensions are
/// [`Error::InvalidDiagram`].
impl FromStr for CylinderDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|b| (h.trim(), b)))
            .ok_or_else(|| Error::Parse(format!("expected NAME(...), got {s:?}")))?;
        let ints = |part: &str| -> Result<Vec<i64>> {
            part.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer {t:?} in {s:?}")))
                })
                .collect()
        };
        match head {
            "1cyl" => {
                let parts: Vec<&str> = body.split(';').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!(
                        "1cyl expects (l1,l2,l3;t;h), got {s:?}"
                    )));
                }
                let ls = ints(parts[0])?;
                let t = ints(parts[1])?;
                let h = ints(parts[2])?;
                if ls.len() != 3 || t.len() != 1 || h.len() != 1 {
                    return Err(Error::Parse(format!(
                        "1cyl expects (l1,l2,l3;t;h), got {s:?}"
                    )));
                }
                CylinderDiagram::one_cylinder(ls[0], ls[1], ls[2], t[0], h[0])
            }
            "2cyl" => {
                let v = ints(body)?;
                if v.len() != 6 {
                    return Err(Error::Parse(format!(
                        "2cyl expects six integers, got {s:?}"
                    )));
                }
                CylinderDiagram::two_cylinder(v[0], v[1], v[2], v[3], v[4], v[5])
            }
            "L" => {
                let v = ints(body)?;
                if v.len() != 2 {
                    return Err(Error::Parse(format!("L expects (a,b), got {s:?}")));
                }
                CylinderDiagram::l_shape(v[0], v[1])
            }
            other => Err(Error::Parse(format!("unknown surface kind {other:?}"))),
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}
