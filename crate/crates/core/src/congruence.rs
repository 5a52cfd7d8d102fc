//! Index arithmetic for principal congruence subgroups and the Kühnlein
//! noncongruence criterion.
//!
//! Everything is exact. Levels grow like `lcm(1..n)`, which leaves `u64`
//! around `n = 43`, so the arithmetic runs on [`FactoredInteger`] and only
//! converts to a machine integer at the edges.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::origami::{CanonicalKey, CylinderDiagram};
use crate::sl2::{MatrixZ, Orbit};

/// A positive integer as a list of `(prime, exponent)` with increasing primes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger::default()
    }

    /// Builds from arbitrary `(prime, exponent)` pairs; equal primes are merged.
    pub fn from_factors(pairs: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut f: Vec<(u64, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        f.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(f.len());
        for (p, e) in f {
            match merged.last_mut() {
                Some((q, acc)) if *q == p => *acc += e,
                _ => merged.push((p, e)),
            }
        }
        FactoredInteger { factors: merged }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The value, if it fits in `u128`.
    pub fn value(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (p as u128)
                .checked_pow(e)
                .and_then(|pe| acc.checked_mul(pe))
        })
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        FactoredInteger::from_factors(self.factors.iter().chain(other.factors.iter()).copied())
    }

    pub fn divides(&self, other: &FactoredInteger) -> bool {
        self.factors.iter().all(|&(p, e)| other.exponent(p) >= e)
    }

    /// `self / other`, when `other` divides `self`.
    pub fn div(&self, other: &FactoredInteger) -> Option<FactoredInteger> {
        other.divides(self).then(|| {
            FactoredInteger::from_factors(
                self.factors
                    .iter()
                    .map(|&(p, e)| (p, e - other.exponent(p))),
            )
        })
    }

    pub fn is_coprime_to(&self, other: &FactoredInteger) -> bool {
        self.factors.iter().all(|&(p, _)| other.exponent(p) == 0)
    }

    /// `a // b`: the largest divisor of `self` prime to every prime in `b`.
    pub fn coprime_part(&self, b: &FactoredInteger) -> FactoredInteger {
        FactoredInteger {
            factors: self
                .factors
                .iter()
                .copied()
                .filter(|&(p, _)| b.exponent(p) == 0)
                .collect(),
        }
    }
}

/// `2^3*3*5`; `1` for the empty product.
impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for FactoredInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(FactoredInteger::one());
        }
        let pairs = s
            .split('*')
            .map(|part| {
                let (p, e) = part.trim().split_once('^').unwrap_or((part.trim(), "1"));
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                let e: u32 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                if factorize(p)?.factors != [(p, 1)] {
                    return Err(Error::Parse(format!("{p} is not prime")));
                }
                Ok((p, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactoredInteger::from_factors(pairs))
    }
}

/// Trial division.
pub fn factorize(a: u64) -> Result<FactoredInteger> {
    if a == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut factors = Vec::new();
    let mut rest = a;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { factors })
}

fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// `lcm(1, 2, ..., n) = ∏_{p <= n} p^τ` with `p^τ <= n < p^(τ+1)`.
pub fn lcm_upto(n: u64) -> FactoredInteger {
    FactoredInteger::from_factors(primes_upto(n).into_iter().map(|p| {
        let mut tau = 0;
        let mut pk = 1u64;
        while pk * p <= n {
            pk *= p;
            tau += 1;
        }
        (p, tau)
    }))
}

/// `a // b`.
pub fn coprime_part(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument(
            "coprime_part needs positive arguments".into(),
        ));
    }
    let r = factorize(a)?.coprime_part(&factorize(b)?);
    Ok(r.value().expect("divisor of a u64") as u64)
}

/// `[Γ(1):Γ(m)] = ∏_{p^e || m} p^(3e-2) (p^2 - 1)`.
pub fn principal_index_factored(m: &FactoredInteger) -> FactoredInteger {
    jordan_like(m, 3)
}

pub fn principal_index(m: u64) -> Result<u128> {
    let f = factorize(m)?;
    principal_index_factored(&f)
        .value()
        .ok_or_else(|| Error::InvalidArgument(format!("[Γ(1):Γ({m})] overflows u128")))
}

/// `∏_{p^e || a} p^(r e - 2) (p^2 - 1)`, i.e. `a^r ∏_{p | a} (1 - 1/p^2)`.
fn jordan_like(a: &FactoredInteger, r: u32) -> FactoredInteger {
    let mut acc = FactoredInteger::one();
    for &(p, e) in a.factors() {
        let p2m1 = factorize(p * p - 1).expect("p^2 - 1 > 0");
        acc = acc
            .mul(&FactoredInteger::from_factors([(p, r * e - 2)]))
            .mul(&p2m1);
    }
    acc
}

/// `n^2 ∏_{p | n} (1 - 1/p^2)`.
pub fn jordan_totient_2(n: u64) -> Result<u128> {
    let f = factorize(n)?;
    Ok(jordan_like(&f, 2).value().expect("fits for u64 input"))
}

/// `δ = [Γ(m):Γ(ℓ)] = [Γ(1):Γ(ℓ/m)]`, valid when `m | ℓ` and `gcd(m, ℓ/m) = 1`.
pub fn relative_index_factored(
    m: &FactoredInteger,
    level: &FactoredInteger,
) -> Result<FactoredInteger> {
    let quotient = level
        .div(m)
        .ok_or_else(|| Error::InvalidArgument(format!("{m} does not divide {level}")))?;
    if !m.is_coprime_to(&quotient) {
        return Err(Error::InvalidArgument(format!(
            "{m} and {quotient} are not coprime"
        )));
    }
    Ok(principal_index_factored(&quotient))
}

pub fn relative_index(m: u64, level: u64) -> Result<u128> {
    let delta = relative_index_factored(&factorize(m)?, &factorize(level)?)?;
    delta
        .value()
        .ok_or_else(|| Error::InvalidArgument("relative index overflows u128".into()))
}

/// Primitive `n`-square surfaces in H(2): `3/8 (n-2) n^2 ∏(1 - 1/p^2)`.
pub fn primitive_count_formula(n: u64) -> u64 {
    if n < 3 {
        return 0;
    }
    let j = jordan_totient_2(n).expect("n > 0");
    let num = 3 * (n as u128 - 2) * j;
    debug_assert_eq!(num % 8, 0);
    (num / 8) as u64
}

/// `a_n = 3/16 (n-1) n^2 ∏(1 - 1/p^2)` for odd `n`.
pub fn a_formula(n: u64) -> u64 {
    let num = 3 * (n as u128 - 1) * jordan_totient_2(n).expect("n > 0");
    debug_assert_eq!(num % 16, 0);
    (num / 16) as u64
}

/// `b_n = 3/16 (n-3) n^2 ∏(1 - 1/p^2)` for odd `n`.
pub fn b_formula(n: u64) -> u64 {
    let num = 3 * (n as u128 - 3) * jordan_totient_2(n).expect("n > 0");
    debug_assert_eq!(num % 16, 0);
    (num / 16) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitLabel {
    A,
    B,
    C,
}

impl OrbitLabel {
    /// Label of a computed orbit: `C` for even `n`, otherwise `A` or `B` by
    /// the integer Weierstrass count.
    pub fn of_orbit(orb: &Orbit) -> Result<OrbitLabel> {
        if orb.n().is_multiple_of(2) {
            return Ok(OrbitLabel::C);
        }
        match orb.invariant()? {
            1 => Ok(OrbitLabel::A),
            3 => Ok(OrbitLabel::B),
            k => Err(Error::MalformedSurface(format!(
                "{k} integer Weierstrass points"
            ))),
        }
    }

    pub fn check(&self, n: u64) -> Result<()> {
        let ok = match self {
            OrbitLabel::A => n == 3 || (n >= 5 && n % 2 == 1),
            OrbitLabel::B => n >= 5 && n % 2 == 1,
            OrbitLabel::C => n >= 4 && n.is_multiple_of(2),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("no orbit {self}_{n}")))
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitLabel::A => "A",
            OrbitLabel::B => "B",
            OrbitLabel::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(OrbitLabel::A),
            "B" | "b" => Ok(OrbitLabel::B),
            "C" | "c" => Ok(OrbitLabel::C),
            other => Err(Error::Parse(format!(
                "orbit label must be A, B or C, got {other:?}"
            ))),
        }
    }
}

/// Index of `Γ_{A_n}`, `Γ_{B_n}` or `Γ_{C_n}` in `SL(2,Z)`, written as
/// `f(n) ∏_{p^ν || n} p^(2ν-2) (p^2 - 1)`.
pub fn expected_index(label: OrbitLabel, n: u64) -> Result<u64> {
    label.check(n)?;
    let (num, den) = match label {
        OrbitLabel::A => (3 * (n - 1), 16),
        OrbitLabel::B => (3 * (n - 3), 16),
        OrbitLabel::C => (3 * (n - 2), 8),
    };
    let total = num as u128 * jordan_like(&factorize(n)?, 2).value().expect("fits");
    if !total.is_multiple_of(den) {
        return Err(Error::InvalidArgument(format!(
            "index of {label}_{n} is not integral"
        )));
    }
    Ok((total / den) as u64)
}

/// Arithmetic part of the criterion for a group of index `d` and level `ℓ`
/// containing `T^k` and `V^k'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KuhnleinOutcome {
    /// `ℓ // k k'`.
    pub m: FactoredInteger,
    /// `[Γ(m):Γ(ℓ)]`.
    pub delta: FactoredInteger,
    /// `d ∤ δ`: the group is not a congruence subgroup.
    pub noncongruence: bool,
}

pub fn kuhnlein_check(
    d: u64,
    level: &FactoredInteger,
    k: u64,
    k_prime: u64,
) -> Result<KuhnleinOutcome> {
    if d == 0 || k == 0 || k_prime == 0 {
        return Err(Error::InvalidArgument(
            "d, k and k' must be positive".into(),
        ));
    }
    let kk = factorize(k)?.mul(&factorize(k_prime)?);
    let m = level.coprime_part(&kk);
    let delta = relative_index_factored(&m, level)?;
    let noncongruence = !factorize(d)?.divides(&delta);
    Ok(KuhnleinOutcome {
        m,
        delta,
        noncongruence,
    })
}

/// A checked witness that the Veech group of `surface` is noncongruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncongruenceCertificate {
    pub n: usize,
    pub orbit_label: OrbitLabel,
    pub surface: CanonicalKey,
    pub k: u64,
    pub k_prime: u64,
    pub d: u64,
    pub level: FactoredInteger,
    pub m: FactoredInteger,
    pub delta: FactoredInteger,
}

impl NoncongruenceCertificate {
    /// Re-derives every claim from scratch, including both memberships.
    pub fn verify(&self) -> Result<bool> {
        let kk = factorize(self.k)?.mul(&factorize(self.k_prime)?);
        let Some(quotient) = self.level.div(&self.m) else {
            return Ok(false);
        };
        let arithmetic = self.m.is_coprime_to(&kk)
            && self.m.is_coprime_to(&quotient)
            && principal_index_factored(&quotient) == self.delta
            && !factorize(self.d)?.divides(&self.delta);
        if !arithmetic {
            return Ok(false);
        }
        let o = self.surface.to_origami();
        Ok(o.stabilised_by(&MatrixZ::t_power(self.k as i64))?
            && o.stabilised_by(&MatrixZ::v_power(self.k_prime as i64))?)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            schema_version: 1,
            n: self.n,
            orbit_label: self.orbit_label.to_string(),
            surface_key: Some(self.surface.to_string()),
            k: Some(self.k),
            k_prime: Some(self.k_prime),
            d: self.d,
            level: self.level.value(),
            level_factored: self.level.to_string(),
            m: self.m.value(),
            delta: self.delta.value(),
            delta_factored: Some(self.delta.to_string()),
            verdict: "noncongruence".into(),
        }
    }
}

/// Serialised form of a search result; the optional fields are empty for
/// an inconclusive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema_version: u32,
    pub n: usize,
    pub orbit_label: String,
    pub surface_key: Option<String>,
    pub k: Option<u64>,
    pub k_prime: Option<u64>,
    pub d: u64,
    pub level: Option<u128>,
    pub level_factored: String,
    pub m: Option<u128>,
    pub delta: Option<u128>,
    pub delta_factored: Option<String>,
    pub verdict: String,
}

impl CertificateJson {
    pub fn inconclusive(orb: &Orbit, label: OrbitLabel) -> Self {
        let level = factorize(orb.level()).expect("level >= 1");
        CertificateJson {
            schema_version: 1,
            n: orb.n(),
            orbit_label: label.to_string(),
            surface_key: None,
            k: None,
            k_prime: None,
            d: orb.size() as u64,
            level: level.value(),
            level_factored: level.to_string(),
            m: None,
            delta: None,
            delta_factored: None,
            verdict: "inconclusive".into(),
        }
    }
}

/// Scans the orbit for a surface whose horizontal and vertical cusp widths
/// `k, k'` give `d ∤ δ`. The base surface is tried first, then the others in
/// key order. `None` does not mean the group is congruence.
pub fn noncongruence_search(orb: &Orbit) -> Result<Option<NoncongruenceCertificate>> {
    let d = orb.size() as u64;
    let level = factorize(orb.level())?;
    let label = OrbitLabel::of_orbit(orb)?;
    let base = orb.base_index();
    let order = std::iter::once(base).chain((0..orb.size()).filter(|&i| i != base));
    for i in order {
        let (k, k_prime) = (orb.horizontal_width(i), orb.vertical_width(i));
        let outcome = kuhnlein_check(d, &level, k, k_prime)?;
        if !outcome.noncongruence {
            continue;
        }
        let cert = NoncongruenceCertificate {
            n: orb.n(),
            orbit_label: label,
            surface: orb.surfaces()[i].clone(),
            k,
            k_prime,
            d,
            level: level.clone(),
            m: outcome.m,
            delta: outcome.delta,
        };
        if cert.verify()? {
            return Ok(Some(cert));
        }
        return Err(Error::MalformedSurface(format!(
            "certificate for {} failed re-verification",
            cert.surface
        )));
    }
    Ok(None)
}

/// Level-2 congruence test: the Veech group of the base surface contains
/// `Γ(2) = ⟨-I, T^2, V^2⟩`.
pub fn congruence_verify_level2(orb: &Orbit) -> Result<bool> {
    let level = orb.level();
    if level != 2 {
        return Err(Error::UnsupportedLevel(level));
    }
    let o = orb.base().to_origami();
    for m in [
        MatrixZ::MINUS_IDENTITY,
        MatrixZ::t_power(2),
        MatrixZ::v_power(2),
    ] {
        if !o.stabilised_by(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primes `p <= limit` such that `p^2 - 1` has no prime factor besides 2 and 3.
pub fn smooth_p2m1_scan(limit: u64) -> Vec<u64> {
    let strip = |mut x: u64| {
        while x.is_multiple_of(2) {
            x /= 2;
        }
        while x.is_multiple_of(3) {
            x /= 3;
        }
        x
    };
    primes_upto(limit)
        .into_iter()
        .filter(|&p| strip(p - 1) == 1 && strip(p + 1) == 1)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BadCase {
    NotBad,
    /// `n - 3 = 2^r 3^s` with `1 <= r <= 4`, `s >= 1`.
    Bad {
        r: u32,
        s: u32,
    },
}

pub fn bad_case_classifier(n: u64) -> Result<BadCase> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "bad-case test needs odd n >= 5, got {n}"
        )));
    }
    let mut rest = n - 3;
    let (mut r, mut s) = (0, 0);
    while rest.is_multiple_of(2) {
        rest /= 2;
        r += 1;
    }
    while rest.is_multiple_of(3) {
        rest /= 3;
        s += 1;
    }
    Ok(if rest == 1 && (1..=4).contains(&r) && s >= 1 {
        BadCase::Bad { r, s }
    } else {
        BadCase::NotBad
    })
}

/// The surface used to attack each orbit by hand: the first one the
/// certificate search tries.
pub fn strategy_surface(label: OrbitLabel, n: u64) -> Result<CylinderDiagram> {
    label.check(n)?;
    let n = n as i64;
    let one_cyl = || CylinderDiagram::one_cylinder(1, n - 3, 2, 0, 1);
    let pow2 = |x: i64| x > 0 && x & (x - 1) == 0;
    match label {
        OrbitLabel::A if n == 3 => CylinderDiagram::l_shape(2, 2),
        OrbitLabel::A if pow2(n - 1) => CylinderDiagram::l_shape(2, n - 1),
        OrbitLabel::A => CylinderDiagram::two_cylinder(n - 2, 1, 1, 2, 0, 1),
        OrbitLabel::B => match bad_case_classifier(n as u64)? {
            BadCase::Bad { .. } => CylinderDiagram::l_shape(5, n - 4),
            BadCase::NotBad => one_cyl(),
        },
        OrbitLabel::C if n == 4 || !pow2(n - 2) => one_cyl(),
        OrbitLabel::C => CylinderDiagram::two_cylinder(1, 1, 2, n - 2, 1, 0),
    }
}

/// One row of the table of first bad cases for `B_n`, using `L(5, n-4)`
/// with `k = n - 4`, `k' = 5` and `ℓ = lcm(1..n)/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadCaseRow {
    pub n: u64,
    pub d: FactoredInteger,
    pub delta: FactoredInteger,
    pub noncongruence: bool,
}

pub fn bad_case_row(n: u64) -> Result<BadCaseRow> {
    let d = expected_index(OrbitLabel::B, n)?;
    let level = lcm_upto(n)
        .div(&FactoredInteger::from_factors([(2, 2)]))
        .ok_or_else(|| Error::InvalidArgument(format!("lcm(1..{n}) is not divisible by 4")))?;
    let outcome = kuhnlein_check(d, &level, n - 4, 5)?;
    Ok(BadCaseRow {
        n,
        d: factorize(d)?,
        delta: outcome.delta,
        noncongruence: outcome.noncongruence,
    })
}

pub const TABLE73_NS: [u64; 5] = [9, 15, 21, 27, 51];

pub fn table73() -> Result<Vec<BadCaseRow>> {
    TABLE73_NS.iter().map(|&n| bad_case_row(n)).collect()
}
