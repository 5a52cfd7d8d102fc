//! Exhaustive enumeration of square-tiled surfaces in H(2) by cylinder
//! coordinates.
//!
//! Candidates are grouped by shape: the multiset of saddle-connection
//! lengths for one-cylinder surfaces, `(h1,h2,w1,w2)` for two-cylinder ones.
//! Isomorphic candidates always share a shape (the horizontal
//! decomposition is an invariant), so duplicates are removed inside each
//! group and groups are processed independently in parallel.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{a_formula, b_formula, primitive_count_formula};
use crate::error::{Error, Result};
use crate::origami::{gcd, CanonicalKey, CylinderDiagram, Origami};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// Sorted lengths `a <= b <= c` and height.
    One {
        lengths: [u32; 3],
        h: u32,
    },
    Two {
        h1: u32,
        h2: u32,
        w1: u32,
        w2: u32,
    },
}

impl Shape {
    fn is_one_cylinder(&self) -> bool {
        matches!(self, Shape::One { .. })
    }

    fn diagrams(&self) -> Vec<CylinderDiagram> {
        match *self {
            Shape::One {
                lengths: [a, b, c],
                h,
            } => {
                let mut orders = vec![
                    [a, b, c],
                    [a, c, b],
                    [b, a, c],
                    [b, c, a],
                    [c, a, b],
                    [c, b, a],
                ];
                orders.sort_unstable();
                orders.dedup();
                let w = a + b + c;
                orders
                    .into_iter()
                    .flat_map(|[l1, l2, l3]| {
                        (0..w).map(move |t| CylinderDiagram::OneCylinder { l1, l2, l3, t, h })
                    })
                    .collect()
            }
            Shape::Two { h1, h2, w1, w2 } => (0..w1)
                .flat_map(|t1| {
                    (0..w2).map(move |t2| CylinderDiagram::TwoCylinder {
                        h1,
                        h2,
                        w1,
                        w2,
                        t1,
                        t2,
                    })
                })
                .collect(),
        }
    }

    /// Distinct surfaces of this shape, sorted by key.
    fn surfaces(&self, n: usize, primitive_only: bool) -> Result<Vec<(CanonicalKey, Origami)>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for d in self.diagrams() {
            if primitive_only && !d.is_primitive() {
                continue;
            }
            let o = d.build();
            if o.n() != n || !o.is_in_h2() {
                return Err(Error::MalformedSurface(format!(
                    "{d} does not give an {n}-square surface in H(2)"
                )));
            }
            if primitive_only && !o.is_primitive()? {
                return Err(Error::MalformedSurface(format!(
                    "{d}: coordinate and surface primitivity disagree"
                )));
            }
            let key = o.canonical_key();
            if seen.insert(key.clone()) {
                out.push((key, o));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

fn shapes(n: usize, primitive_only: bool) -> Vec<Shape> {
    let n = n as u32;
    let mut out = Vec::new();
    for h in 1..=n {
        if !n.is_multiple_of(h) || (primitive_only && h > 1) {
            continue;
        }
        let w = n / h;
        for a in 1..=w / 3 {
            for b in a..=(w - a) / 2 {
                let c = w - a - b;
                if primitive_only && gcd(gcd(a as u64, b as u64), c as u64) != 1 {
                    continue;
                }
                out.push(Shape::One {
                    lengths: [a, b, c],
                    h,
                });
            }
        }
    }
    for h1 in 1..n {
        for w1 in 1..n {
            if h1 * w1 >= n {
                break;
            }
            let rest = n - h1 * w1;
            for h2 in 1..=rest {
                if !rest.is_multiple_of(h2) {
                    continue;
                }
                let w2 = rest / h2;
                if w2 <= w1 || (primitive_only && gcd(h1 as u64, h2 as u64) != 1) {
                    continue;
                }
                out.push(Shape::Two { h1, h2, w1, w2 });
            }
        }
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "H(2) needs at least 3 squares, got {n}"
        )));
    }
    Ok(())
}

fn collect_keys(n: usize, primitive_only: bool) -> Result<BTreeSet<CanonicalKey>> {
    check_n(n)?;
    let groups = shapes(n, primitive_only)
        .par_iter()
        .map(|s| {
            Ok(s.surfaces(n, primitive_only)?
                .into_iter()
                .map(|(k, _)| k)
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut set = BTreeSet::new();
    for key in groups.into_iter().flatten() {
        if !set.insert(key) {
            return Err(Error::MalformedSurface(
                "one surface in two shape groups".into(),
            ));
        }
    }
    Ok(set)
}

/// Every primitive `n`-square surface in H(2), by canonical key.
pub fn enumerate_primitive(n: usize) -> Result<BTreeSet<CanonicalKey>> {
    collect_keys(n, true)
}

/// Every `n`-square surface in H(2), primitive or not.
pub fn enumerate_h2(n: usize) -> Result<BTreeSet<CanonicalKey>> {
    collect_keys(n, false)
}

/// Orbit split for odd `n >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    pub a_count: u64,
    pub a_formula: u64,
    pub b_count: u64,
    pub b_formula: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n: u64,
    pub total: u64,
    pub formula_total: u64,
    pub split: Option<SplitCounts>,
    /// Informational: surfaces with one horizontal cylinder.
    pub one_cylinder: u64,
    pub two_cylinder: u64,
}

impl CountReport {
    pub const CSV_HEADER: &'static str =
        "n,total,formula_total,a_count,a_formula,b_count,b_formula,match";

    pub fn is_match(&self) -> bool {
        let split_ok = self.split.is_none_or(|s| {
            s.a_count == s.a_formula
                && s.b_count == s.b_formula
                && s.a_count + s.b_count == self.total
        });
        self.total == self.formula_total && split_ok
    }

    pub fn csv_row(&self) -> String {
        let (a, af, b, bf) = match self.split {
            Some(s) => (
                s.a_count.to_string(),
                s.a_formula.to_string(),
                s.b_count.to_string(),
                s.b_formula.to_string(),
            ),
            None => Default::default(),
        };
        format!(
            "{},{},{},{a},{af},{b},{bf},{}",
            self.n,
            self.total,
            self.formula_total,
            self.is_match()
        )
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    one: u64,
    a: u64,
    b: u64,
}

/// Enumerates `n` and compares with the closed formulas; the A/B split is
/// included for odd `n >= 5`.
pub fn count_report(n: usize) -> Result<CountReport> {
    check_n(n)?;
    let split = n % 2 == 1 && n >= 5;
    let tally = shapes(n, true)
        .par_iter()
        .map(|s| {
            let surfaces = s.surfaces(n, true)?;
            let mut t = Tally {
                total: surfaces.len() as u64,
                ..Tally::default()
            };
            if s.is_one_cylinder() {
                t.one = t.total;
            }
            if split {
                for (_, o) in &surfaces {
                    match o.integer_weierstrass_count()? {
                        1 => t.a += 1,
                        3 => t.b += 1,
                        k => {
                            return Err(Error::MalformedSurface(format!(
                                "{k} integer Weierstrass points"
                            )))
                        }
                    }
                }
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |x, y| {
            Ok(Tally {
                total: x.total + y.total,
                one: x.one + y.one,
                a: x.a + y.a,
                b: x.b + y.b,
            })
        })?;
    let n64 = n as u64;
    Ok(CountReport {
        n: n64,
        total: tally.total,
        formula_total: primitive_count_formula(n64),
        split: split.then(|| SplitCounts {
            a_count: tally.a,
            a_formula: a_formula(n64),
            b_count: tally.b,
            b_formula: b_formula(n64),
        }),
        one_cylinder: tally.one,
        two_cylinder: tally.total - tally.one,
    })
}

/// Partition of the primitive surfaces by integer Weierstrass count.
pub fn classify(n: usize) -> Result<CountReport> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "classification needs odd n >= 5, got {n}"
        )));
    }
    count_report(n)
}

/// Reports for every `n` in the range. Mismatches are reported, not raised.
pub fn verify_counts(n_min: usize, n_max: usize) -> Result<Vec<CountReport>> {
    if n_min < 3 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= n_min <= n_max, got [{n_min}, {n_max}]"
        )));
    }
    (n_min..=n_max).map(count_report).collect()
}

/// Sum of divisors.
pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

/// All `n`-square surfaces in H(2): each factors uniquely through a
/// primitive `d`-square surface and a torus covering of degree `n/d`.
pub fn total_count_with_imprimitive(n: u64) -> Result<u64> {
    check_n(n as usize)?;
    Ok((3..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| sigma(n / d) * primitive_count_formula(d))
        .sum())
}
