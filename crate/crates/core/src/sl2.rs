//! The action of `SL(2,Z)` on square-tiled surfaces, orbits and cusps.
//!
//! On permutation pairs the generators act by
//!
//! ```text
//! T = [[1,1],[0,1]] : (r, u) -> (r, u∘r^-1)
//! S = [[0,1],[-1,0]]: (r, u) -> (u, r^-1)
//! V = [[1,0],[1,1]] : (r, u) -> (r∘u^-1, u)
//! ```
//!
//! which is a left action: `(M1 M2)·o = M1·(M2·o)`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::origami::{compose, inverse, lcm, power, CanonicalKey, Origami};

/// An integer matrix of determinant 1, `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixZ {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MatrixZ {
    pub const IDENTITY: MatrixZ = MatrixZ {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const MINUS_IDENTITY: MatrixZ = MatrixZ {
        a: -1,
        b: 0,
        c: 0,
        d: -1,
    };
    pub const T: MatrixZ = MatrixZ {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };
    pub const V: MatrixZ = MatrixZ {
        a: 1,
        b: 0,
        c: 1,
        d: 1,
    };
    pub const S: MatrixZ = MatrixZ {
        a: 0,
        b: 1,
        c: -1,
        d: 0,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(MatrixZ { a, b, c, d })
    }

    pub fn t_power(k: i64) -> Self {
        MatrixZ {
            a: 1,
            b: k,
            c: 0,
            d: 1,
        }
    }

    pub fn v_power(k: i64) -> Self {
        MatrixZ {
            a: 1,
            b: 0,
            c: k,
            d: 1,
        }
    }

    pub fn mul(&self, o: &MatrixZ) -> MatrixZ {
        MatrixZ {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> MatrixZ {
        MatrixZ {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Factors the matrix as a product of generator powers, leftmost first.
    ///
    /// Runs the Euclidean algorithm on the bottom row by right
    /// multiplication with `T^-q` and `S` until the row is `(0, ±1)`.
    pub fn generator_word(&self) -> Vec<Generator> {
        let mut w = *self;
        let mut applied = Vec::new();
        while w.c != 0 {
            let q = w.d.div_euclid(w.c);
            if q != 0 {
                w = w.mul(&MatrixZ::t_power(-q));
                applied.push(Generator::T(-q));
            }
            if w.c != 0 {
                w = w.mul(&MatrixZ::S);
                applied.push(Generator::S(1));
            }
        }
        // w = [[d, b], [0, d]] with d = ±1, i.e. ±T^(bd)
        let mut word = Vec::new();
        if w.d == -1 {
            word.push(Generator::S(2));
        }
        if w.b * w.d != 0 {
            word.push(Generator::T(w.b * w.d));
        }
        word.extend(applied.iter().rev().map(Generator::inverse));
        word
    }
}

impl fmt::Display for MatrixZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A power of `T` or of `S` (the latter taken mod 4, `S^2 = -I`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    T(i64),
    S(u8),
}

impl Generator {
    fn inverse(&self) -> Generator {
        match *self {
            Generator::T(k) => Generator::T(-k),
            Generator::S(k) => Generator::S((4 - k % 4) % 4),
        }
    }

    pub fn matrix(&self) -> MatrixZ {
        match *self {
            Generator::T(k) => MatrixZ::t_power(k),
            Generator::S(k) => (0..k % 4).fold(MatrixZ::IDENTITY, |m, _| m.mul(&MatrixZ::S)),
        }
    }
}

impl Origami {
    pub fn apply_t(&self) -> Origami {
        self.apply_t_power(1)
    }

    /// `T^k·(r, u) = (r, u∘r^-k)`.
    pub fn apply_t_power(&self, k: i64) -> Origami {
        let up = compose(self.up(), &power(self.right(), -k));
        Origami::from_parts_unchecked(self.right().to_vec(), up)
    }

    /// `V^k·(r, u) = (r∘u^-k, u)`.
    pub fn apply_v_power(&self, k: i64) -> Origami {
        let right = compose(self.right(), &power(self.up(), -k));
        Origami::from_parts_unchecked(right, self.up().to_vec())
    }

    pub fn apply_s(&self) -> Origami {
        Origami::from_parts_unchecked(self.up().to_vec(), inverse(self.right()))
    }

    pub fn apply_s_power(&self, k: u8) -> Origami {
        match k % 4 {
            0 => self.clone(),
            1 => self.apply_s(),
            2 => Origami::from_parts_unchecked(inverse(self.right()), inverse(self.up())),
            _ => Origami::from_parts_unchecked(inverse(self.up()), self.right().to_vec()),
        }
    }

    pub fn apply_generator(&self, g: Generator) -> Origami {
        match g {
            Generator::T(k) => self.apply_t_power(k),
            Generator::S(k) => self.apply_s_power(k),
        }
    }

    pub fn apply_matrix(&self, m: &MatrixZ) -> Result<Origami> {
        let m = MatrixZ::new(m.a, m.b, m.c, m.d)?;
        Ok(m.generator_word()
            .iter()
            .rev()
            .fold(self.clone(), |o, &g| o.apply_generator(g)))
    }

    /// Size of the `T`-orbit: the least `k >= 1` with `T^k·o ≅ o`.
    pub fn u_orbit_width(&self) -> u64 {
        let key = self.canonical_key();
        let mut cur = self.apply_t();
        let mut k = 1;
        while cur.canonical_key() != key {
            cur = cur.apply_t();
            k += 1;
        }
        k
    }

    /// Whether `M` lies in the Veech group of the surface.
    pub fn stabilised_by(&self, m: &MatrixZ) -> Result<bool> {
        Ok(self.apply_matrix(m)?.canonical_key() == self.canonical_key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspData {
    /// Smallest key of the `T`-orbit.
    pub representative: CanonicalKey,
    pub width: u64,
}

/// The `SL(2,Z)`-orbit of a primitive surface with its `T`/`S` graph.
///
/// Surfaces are sorted by canonical key; `t_edges[i]` and `s_edges[i]` are
/// the indices of the `T`- and `S`-images of surface `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    n: usize,
    base: CanonicalKey,
    surfaces: Vec<CanonicalKey>,
    t_edges: Vec<usize>,
    s_edges: Vec<usize>,
    cusps: Vec<CuspData>,
    /// Index into `cusps` for each surface.
    cusp_of: Vec<usize>,
}

impl Orbit {
    /// Breadth-first closure under `T` and `S`. Closure under the inverses
    /// is automatic since the orbit is finite.
    pub fn compute(o: &Origami) -> Result<Orbit> {
        if !o.is_in_h2() {
            return Err(Error::NotInH2);
        }
        if !o.is_primitive()? {
            return Err(Error::NotPrimitive);
        }
        let base = o.canonical_key();
        let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
        let mut keys = vec![base.clone()];
        let mut t_img: Vec<usize> = Vec::new();
        let mut s_img: Vec<usize> = Vec::new();
        index.insert(base.clone(), 0);
        let mut done = 0;
        while done < keys.len() {
            let frontier = &keys[done..];
            let images: Vec<(CanonicalKey, CanonicalKey)> = frontier
                .par_iter()
                .map(|k| {
                    let o = k.to_origami();
                    (o.apply_t().canonical_key(), o.apply_s().canonical_key())
                })
                .collect();
            done = keys.len();
            for (tk, sk) in images {
                for (img, edges) in [(tk, &mut t_img), (sk, &mut s_img)] {
                    let next = keys.len();
                    let id = *index.entry(img.clone()).or_insert_with(|| {
                        keys.push(img);
                        next
                    });
                    edges.push(id);
                }
            }
        }
        // reorder by key
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
        let mut rank = vec![0; keys.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let surfaces: Vec<CanonicalKey> = order.iter().map(|&i| keys[i].clone()).collect();
        let t_edges = order.iter().map(|&i| rank[t_img[i]]).collect();
        let s_edges = order.iter().map(|&i| rank[s_img[i]]).collect();
        Orbit::from_parts(o.n(), base, surfaces, t_edges, s_edges)
    }

    /// Assembles an orbit from its graph, deriving the cusps and checking
    /// the structural invariants.
    pub fn from_parts(
        n: usize,
        base: CanonicalKey,
        surfaces: Vec<CanonicalKey>,
        t_edges: Vec<usize>,
        s_edges: Vec<usize>,
    ) -> Result<Orbit> {
        let size = surfaces.len();
        let bad = |msg: &str| Err(Error::MalformedSurface(format!("orbit: {msg}")));
        if size == 0 || t_edges.len() != size || s_edges.len() != size {
            return bad("edge lists do not match the surface list");
        }
        if !surfaces.windows(2).all(|w| w[0] < w[1]) {
            return bad("surfaces are not strictly sorted");
        }
        if surfaces.iter().any(|k| k.n() != n) || surfaces.binary_search(&base).is_err() {
            return bad("surface size or base mismatch");
        }
        for edges in [&t_edges, &s_edges] {
            let mut hit = vec![false; size];
            for &e in edges.iter() {
                if e >= size || hit[e] {
                    return bad("edges are not a permutation");
                }
                hit[e] = true;
            }
        }
        let mut cusp_of = vec![usize::MAX; size];
        let mut cusps = Vec::new();
        for start in 0..size {
            if cusp_of[start] != usize::MAX {
                continue;
            }
            let mut i = start;
            let mut width = 0;
            while cusp_of[i] == usize::MAX {
                cusp_of[i] = cusps.len();
                width += 1;
                i = t_edges[i];
            }
            // surfaces are sorted, so `start` is the smallest key of its cycle
            cusps.push(CuspData {
                representative: surfaces[start].clone(),
                width,
            });
        }
        Ok(Orbit {
            n,
            base,
            surfaces,
            t_edges,
            s_edges,
            cusps,
            cusp_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &CanonicalKey {
        &self.base
    }

    pub fn base_index(&self) -> usize {
        self.index_of(&self.base).expect("base is in the orbit")
    }

    /// The index of the Veech group in `SL(2,Z)`.
    pub fn size(&self) -> usize {
        self.surfaces.len()
    }

    pub fn surfaces(&self) -> &[CanonicalKey] {
        &self.surfaces
    }

    pub fn t_edges(&self) -> &[usize] {
        &self.t_edges
    }

    pub fn s_edges(&self) -> &[usize] {
        &self.s_edges
    }

    pub fn cusps(&self) -> &[CuspData] {
        &self.cusps
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.surfaces.binary_search(key).ok()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.index_of(key).is_some()
    }

    /// Horizontal cusp width of surface `i`.
    pub fn horizontal_width(&self, i: usize) -> u64 {
        self.cusps[self.cusp_of[i]].width
    }

    /// Vertical cusp width of surface `i`: the horizontal width of `S·o`,
    /// since `V = S T^-1 S^-1` and `-I` acts trivially.
    pub fn vertical_width(&self, i: usize) -> u64 {
        self.horizontal_width(self.s_edges[i])
    }

    /// Wohlfahrt level: lcm of the cusp widths.
    pub fn level(&self) -> u64 {
        self.cusps.iter().map(|c| c.width).fold(1, lcm)
    }

    /// Cusp widths in increasing order.
    pub fn cusp_widths(&self) -> Vec<u64> {
        let mut w: Vec<u64> = self.cusps.iter().map(|c| c.width).collect();
        w.sort_unstable();
        w
    }

    /// Integer Weierstrass count of the orbit (odd `n` only).
    pub fn invariant(&self) -> Result<usize> {
        self.base.to_origami().integer_weierstrass_count()
    }
}

pub const ORBIT_SCHEMA_VERSION: u32 = 1;

/// On-disk form of an [`Orbit`]; keys use their printable encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDocument {
    pub schema_version: u32,
    pub n: usize,
    pub base_key: String,
    pub surfaces: Vec<String>,
    pub t_edges: Vec<usize>,
    pub s_edges: Vec<usize>,
    pub cusps: Vec<CuspDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspDocument {
    pub rep: String,
    pub width: u64,
}

impl Orbit {
    pub fn to_document(&self) -> OrbitDocument {
        OrbitDocument {
            schema_version: ORBIT_SCHEMA_VERSION,
            n: self.n,
            base_key: self.base.to_string(),
            surfaces: self.surfaces.iter().map(|k| k.to_string()).collect(),
            t_edges: self.t_edges.clone(),
            s_edges: self.s_edges.clone(),
            cusps: self
                .cusps
                .iter()
                .map(|c| CuspDocument {
                    rep: c.representative.to_string(),
                    width: c.width,
                })
                .collect(),
        }
    }

    /// Rebuilds and re-checks an orbit. Besides the structural checks of
    /// [`Orbit::from_parts`], the stored cusps must match the derived ones and
    /// the edges out of the base surface must be the true `T`/`S` images.
    pub fn from_document(doc: &OrbitDocument) -> Result<Orbit> {
        if doc.schema_version != ORBIT_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported orbit schema version {}",
                doc.schema_version
            )));
        }
        let parse = |s: &String| s.parse::<CanonicalKey>();
        let surfaces = doc.surfaces.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let orbit = Orbit::from_parts(
            doc.n,
            parse(&doc.base_key)?,
            surfaces,
            doc.t_edges.clone(),
            doc.s_edges.clone(),
        )?;
        let derived: Vec<CuspDocument> = orbit.to_document().cusps;
        if derived != doc.cusps {
            return Err(Error::MalformedSurface(
                "orbit: stored cusps do not match the graph".into(),
            ));
        }
        let b = orbit.base_index();
        let o = orbit.base.to_origami();
        if orbit.surfaces[orbit.t_edges[b]] != o.apply_t().canonical_key()
            || orbit.surfaces[orbit.s_edges[b]] != o.apply_s().canonical_key()
        {
            return Err(Error::MalformedSurface(
                "orbit: edges out of the base are wrong".into(),
            ));
        }
        Ok(orbit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("orbit documents serialise")
    }

    pub fn from_json(s: &str) -> Result<Orbit> {
        let doc: OrbitDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("orbit JSON: {e}")))?;
        Orbit::from_document(&doc)
    }
}

/// `M ∈ SL(X,ω)`.
pub fn membership(o: &Origami, m: &MatrixZ) -> Result<bool> {
    o.stabilised_by(m)
}

/// Every primitive surface with `n` squares split into orbits, in order of
/// their smallest key.
pub fn orbit_partition(surfaces: &std::collections::BTreeSet<CanonicalKey>) -> Result<Vec<Orbit>> {
    let mut remaining: std::collections::BTreeSet<CanonicalKey> = surfaces.clone();
    let mut orbits = Vec::new();
    while let Some(first) = remaining.pop_first() {
        let orbit = Orbit::compute(&first.to_origami())?;
        for k in orbit.surfaces() {
            if k != &first && !remaining.remove(k) {
                return Err(Error::MalformedSurface(format!(
                    "orbit leaves the surface set at {k}"
                )));
            }
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}
