//! Square-tiled surfaces as pairs of permutations.
//!
//! Squares are labelled `0..n` internally and `1..=n` in every printed form.
//! `right[i]` is the square glued to the right edge of square `i`, `up[i]`
//! the square glued to its top edge.

mod cylinder;
mod lattice;
mod weierstrass;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) use cylinder::{gcd, lcm};
pub use cylinder::{CylinderDiagram, Direction};
pub use lattice::HolonomyLattice;
pub use weierstrass::{FixedPoint, WeierstrassPoints};

/// A connected square-tiled surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Origami {
    right: Vec<u32>,
    up: Vec<u32>,
}

impl Origami {
    /// Builds an origami from 0-based permutation arrays.
    pub fn new(right: Vec<u32>, up: Vec<u32>) -> Result<Self> {
        if right.is_empty() {
            return Err(Error::InvalidPermutation("no squares".into()));
        }
        if right.len() != up.len() {
            return Err(Error::InvalidPermutation(format!(
                "length mismatch: {} vs {}",
                right.len(),
                up.len()
            )));
        }
        check_permutation(&right)?;
        check_permutation(&up)?;
        let o = Origami { right, up };
        if !o.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(o)
    }

    pub(crate) fn from_parts_unchecked(right: Vec<u32>, up: Vec<u32>) -> Self {
        debug_assert_eq!(right.len(), up.len());
        Origami { right, up }
    }

    pub fn n(&self) -> usize {
        self.right.len()
    }

    pub fn right(&self) -> &[u32] {
        &self.right
    }

    pub fn up(&self) -> &[u32] {
        &self.up
    }

    fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        let (ri, ui) = (inverse(&self.right), inverse(&self.up));
        while let Some(i) = stack.pop() {
            for j in [self.right[i], self.up[i], ri[i], ui[i]] {
                let j = j as usize;
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == n
    }

    /// The vertex permutation `u r u^-1 r^-1`: it maps a square to the next
    /// square sharing its bottom-left corner after one full turn. Its cycles
    /// are the vertices of the tiling; a cycle of length `k` is a cone point
    /// of angle `2πk`.
    pub fn commutator(&self) -> Vec<u32> {
        let ri = inverse(&self.right);
        let ui = inverse(&self.up);
        (0..self.n())
            .map(|j| self.up[self.right[ui[ri[j] as usize] as usize] as usize])
            .collect()
    }

    /// Cycle lengths of the commutator, sorted in decreasing order.
    pub fn vertex_angles(&self) -> Vec<usize> {
        let mut lens = cycle_lengths(&self.commutator());
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// One 3-cycle and `n - 3` fixed points: a single cone point of angle 6π.
    pub fn is_in_h2(&self) -> bool {
        let angles = self.vertex_angles();
        angles.first() == Some(&3) && angles[1..].iter().all(|&a| a == 1)
    }

    /// Squares whose bottom-left corner is a cone point.
    pub(crate) fn singular_squares(&self) -> Vec<u32> {
        self.commutator()
            .iter()
            .enumerate()
            .filter(|&(j, &c)| c as usize != j)
            .map(|(j, _)| j as u32)
            .collect()
    }

    /// Simultaneous relabelling: square `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Origami> {
        if perm.len() != self.n() {
            return Err(Error::InvalidPermutation(
                "relabelling has wrong size".into(),
            ));
        }
        check_permutation(perm)?;
        let n = self.n();
        let mut right = vec![0; n];
        let mut up = vec![0; n];
        for i in 0..n {
            right[perm[i] as usize] = perm[self.right[i] as usize];
            up[perm[i] as usize] = perm[self.up[i] as usize];
        }
        Ok(Origami { right, up })
    }

    /// Canonical form up to relabelling of the squares.
    ///
    /// Each candidate base square induces a breadth-first labelling over the
    /// alphabet `(right, up, right^-1, up^-1)`; the key is the lexicographic
    /// minimum of the relabelled `(right, up)` arrays. Candidate bases are
    /// the squares at a cone point when there is one (any relabelling maps
    /// these onto each other), otherwise every square.
    pub fn canonical_key(&self) -> CanonicalKey {
        let n = self.n();
        let ri = inverse(&self.right);
        let ui = inverse(&self.up);
        let singular = self.singular_squares();
        let starts: Vec<u32> = if singular.is_empty() {
            (0..n as u32).collect()
        } else {
            singular
        };
        let mut scratch = LabelScratch::new(n);
        let mut best: Option<Vec<u32>> = None;
        for s in starts {
            let cand = self.bfs_labelling(s as usize, &ri, &ui, &mut scratch);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        CanonicalKey(best.expect("origami has at least one square"))
    }

    fn bfs_labelling(
        &self,
        start: usize,
        ri: &[u32],
        ui: &[u32],
        s: &mut LabelScratch,
    ) -> Vec<u32> {
        let n = self.n();
        s.label.iter_mut().for_each(|l| *l = u32::MAX);
        s.order.clear();
        s.label[start] = 0;
        s.order.push(start as u32);
        let mut head = 0;
        while head < s.order.len() {
            let i = s.order[head] as usize;
            head += 1;
            for j in [self.right[i], self.up[i], ri[i], ui[i]] {
                if s.label[j as usize] == u32::MAX {
                    s.label[j as usize] = s.order.len() as u32;
                    s.order.push(j);
                }
            }
        }
        let mut key = vec![0u32; 2 * n];
        for (new, &old) in s.order.iter().enumerate() {
            let old = old as usize;
            key[new] = s.label[self.right[old] as usize];
            key[n + new] = s.label[self.up[old] as usize];
        }
        key
    }

    /// An isomorphism `self -> other` sending square `from` to square `to`,
    /// if one exists.
    pub fn isomorphism(&self, other: &Origami, from: usize, to: usize) -> Option<Vec<u32>> {
        let n = self.n();
        if other.n() != n {
            return None;
        }
        let (ri, ui) = (inverse(&self.right), inverse(&self.up));
        let (ori, oui) = (inverse(&other.right), inverse(&other.up));
        let mut map = vec![u32::MAX; n];
        let mut used = vec![false; n];
        map[from] = to as u32;
        used[to] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            let mi = map[i] as usize;
            let pairs = [
                (self.right[i], other.right[mi]),
                (self.up[i], other.up[mi]),
                (ri[i], ori[mi]),
                (ui[i], oui[mi]),
            ];
            for (a, b) in pairs {
                let (a, b) = (a as usize, b as usize);
                if map[a] == u32::MAX {
                    if used[b] {
                        return None;
                    }
                    map[a] = b as u32;
                    used[b] = true;
                    queue.push_back(a);
                } else if map[a] as usize != b {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Whether `self` and `other` are the same surface up to relabelling.
    pub fn is_isomorphic(&self, other: &Origami) -> bool {
        self.n() == other.n() && self.canonical_key() == other.canonical_key()
    }
}

struct LabelScratch {
    label: Vec<u32>,
    order: Vec<u32>,
}

impl LabelScratch {
    fn new(n: usize) -> Self {
        LabelScratch {
            label: vec![u32::MAX; n],
            order: Vec::with_capacity(n),
        }
    }
}

/// Two-line cycle notation: the first line is `right`, the second `up`.
/// Labels are 1-based and fixed points are printed.
impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", CycleNotation(&self.right))?;
        write!(f, "{}", CycleNotation(&self.up))
    }
}

impl FromStr for Origami {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.len() != 2 {
            return Err(Error::Parse(format!(
                "expected two permutation lines, found {}",
                lines.len()
            )));
        }
        let r = parse_cycles(lines[0])?;
        let u = parse_cycles(lines[1])?;
        let n = r.len().max(u.len());
        Origami::new(pad_identity(r, n), pad_identity(u, n))
    }
}

struct CycleNotation<'a>(&'a [u32]);

impl fmt::Display for CycleNotation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        let mut seen = vec![false; p.len()];
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = p[i] as usize;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parses `(1,2,3)(4)` into a 0-based image array whose length is the
/// largest label mentioned.
fn parse_cycles(s: &str) -> Result<Vec<u32>> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
        let cycle = body[..close]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| Error::Parse(format!("bad label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
        rest = body[close + 1..].trim_start();
    }
    let n = cycles.iter().flatten().copied().max().unwrap_or(0);
    let mut img = vec![u32::MAX; n];
    for cycle in &cycles {
        for (k, &a) in cycle.iter().enumerate() {
            let b = cycle[(k + 1) % cycle.len()];
            if img[a - 1] != u32::MAX {
                return Err(Error::Parse(format!("label {a} appears twice")));
            }
            img[a - 1] = (b - 1) as u32;
        }
    }
    for (i, v) in img.iter_mut().enumerate() {
        if *v == u32::MAX {
            *v = i as u32;
        }
    }
    Ok(img)
}

fn pad_identity(mut p: Vec<u32>, n: usize) -> Vec<u32> {
    let start = p.len();
    p.extend(start as u32..n as u32);
    p
}

/// A complete invariant of an origami up to relabelling: the `(right, up)`
/// arrays of its canonical labelling, concatenated.
///
/// The printable form is `r1,r2,...;u1,u2,...` with 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// The origami in its canonical labelling.
    pub fn to_origami(&self) -> Origami {
        let n = self.n();
        Origami::from_parts_unchecked(self.0[..n].to_vec(), self.0[n..].to_vec())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let join = |xs: &[u32]| {
            xs.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", join(&self.0[..n]), join(&self.0[n..]))
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    /// Parses a printed key and checks that it is in canonical form.
    fn from_str(s: &str) -> Result<Self> {
        let (r, u) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("key {s:?} lacks ';'")))?;
        let parse = |part: &str| -> Result<Vec<u32>> {
            part.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .map(|v| v - 1)
                        .ok_or_else(|| Error::Parse(format!("bad label {t:?} in key")))
                })
                .collect()
        };
        let o = Origami::new(parse(r)?, parse(u)?)?;
        let key = o.canonical_key();
        if key.0[..o.n()] != *o.right() || key.0[o.n()..] != *o.up() {
            return Err(Error::Parse(format!("key {s:?} is not in canonical form")));
        }
        Ok(key)
    }
}

fn check_permutation(p: &[u32]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        let x = x as usize;
        if x >= p.len() || seen[x] {
            return Err(Error::InvalidPermutation(format!(
                "{p:?} is not a permutation"
            )));
        }
        seen[x] = true;
    }
    Ok(())
}

pub(crate) fn inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// `(a ∘ b)[i] = a[b[i]]`.
pub(crate) fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// `p^k` for any integer `k`, computed cycle by cycle.
pub(crate) fn power(p: &[u32], k: i64) -> Vec<u32> {
    let n = p.len();
    let mut out = vec![0u32; n];
    let mut seen = vec![false; n];
    let mut cycle = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycle.clear();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i as u32);
            i = p[i] as usize;
        }
        let len = cycle.len() as i64;
        let shift = k.rem_euclid(len) as usize;
        for (pos, &x) in cycle.iter().enumerate() {
            out[x as usize] = cycle[(pos + shift) % cycle.len()];
        }
    }
    out
}

pub(crate) fn cycle_lengths(p: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lens = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            len += 1;
            i = p[i] as usize;
        }
        lens.push(len);
    }
    lens
}
