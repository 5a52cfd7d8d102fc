//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's arithmetic, decomposition or
//! canonical forms; the point is to have a second, naive derivation of
//! every number the library produces.

#![allow(dead_code)]

/// Trial-division factorisation.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

/// `lcm(1, ..., n)` by repeated lcm.
pub fn lcm_range(n: u64) -> u128 {
    (1..=n as u128).fold(1, lcm)
}

/// `n^2 ∏_{p | n} (1 - 1/p^2)` as an exact rational, checked to be integral.
pub fn jordan2(n: u64) -> u128 {
    let (mut num, mut den) = ((n as u128).pow(2), 1u128);
    for (p, _) in factor(n) {
        let p = p as u128;
        num *= p * p - 1;
        den *= p * p;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    assert_eq!(den, 1);
    num
}

/// `(3/8)(n-2) n^2 ∏(1 - 1/p^2)`.
pub fn formula_total(n: u64) -> u128 {
    let x = 3 * (n as u128 - 2) * jordan2(n);
    assert_eq!(x % 8, 0);
    x / 8
}

/// `(3/16)(n-1) n^2 ∏(1 - 1/p^2)`.
pub fn formula_a(n: u64) -> u128 {
    let x = 3 * (n as u128 - 1) * jordan2(n);
    assert_eq!(x % 16, 0);
    x / 16
}

/// `(3/16)(n-3) n^2 ∏(1 - 1/p^2)`.
pub fn formula_b(n: u64) -> u128 {
    let x = 3 * (n as u128 - 3) * jordan2(n);
    assert_eq!(x % 16, 0);
    x / 16
}

/// `|SL(2, Z/m)|` by counting matrices.
pub fn sl2_mod_order(m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut count = 0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if (a * d + m * m - b * c) % m == 1 % m {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Renders a factorisation as `2^3*3*5`.
pub fn factored_string(n: u128) -> String {
    let mut parts = Vec::new();
    let mut rest = n;
    let mut p = 2u128;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e == 1 {
            parts.push(p.to_string());
        } else if e > 1 {
            parts.push(format!("{p}^{e}"));
        }
        p += 1;
    }
    if rest > 1 {
        parts.push(rest.to_string());
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

// ---- permutations -------------------------------------------------------

pub type Perm = Vec<u32>;

pub fn inv(p: &[u32]) -> Perm {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x as usize] = i as u32;
    }
    q
}

/// `(a∘b)(i) = a(b(i))`.
pub fn comp(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Whether `⟨r, u⟩` acts transitively.
pub fn transitive(r: &[u32], u: &[u32]) -> bool {
    let n = r.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for j in [r[i] as usize, u[i] as usize] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// Cycle type of `r u r^-1 u^-1` is one 3-cycle and fixed points.
pub fn commutator_is_3_cycle(r: &[u32], u: &[u32]) -> bool {
    let c = comp(&comp(r, u), &comp(&inv(r), &inv(u)));
    let moved = c
        .iter()
        .enumerate()
        .filter(|&(i, &x)| i as u32 != x)
        .count();
    if moved != 3 {
        return false;
    }
    let i = c
        .iter()
        .enumerate()
        .find(|&(i, &x)| i as u32 != x)
        .unwrap()
        .0;
    c[c[c[i] as usize] as usize] as usize == i
}

/// Canonical form: smallest relabelling over all starting squares, with
/// squares numbered in depth-first preorder following `r` before `u`.
pub fn canonical_form(r: &[u32], u: &[u32]) -> (Perm, Perm) {
    let n = r.len();
    let mut best: Option<(Perm, Perm)> = None;
    for start in 0..n {
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            if label[i] != u32::MAX {
                continue;
            }
            label[i] = next;
            next += 1;
            stack.push(u[i] as usize);
            stack.push(r[i] as usize);
        }
        let mut r2 = vec![0; n];
        let mut u2 = vec![0; n];
        for i in 0..n {
            r2[label[i] as usize] = label[r[i] as usize];
            u2[label[i] as usize] = label[u[i] as usize];
        }
        let cand = (r2, u2);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

/// Generators of the period lattice: lay squares out along a spanning tree
/// of the dual graph and collect the mismatch of every remaining edge.
pub fn period_vectors(r: &[u32], u: &[u32]) -> Vec<(i64, i64)> {
    let n = r.len();
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
    pos[0] = Some((0, 0));
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut tree = std::collections::HashSet::new();
    while let Some(i) = queue.pop_front() {
        let (x, y) = pos[i].unwrap();
        for (j, p, kind) in [
            (r[i] as usize, (x + 1, y), 0),
            (u[i] as usize, (x, y + 1), 1),
        ] {
            if pos[j].is_none() {
                pos[j] = Some(p);
                tree.insert((i, kind));
                queue.push_back(j);
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        let (x, y) = pos[i].unwrap();
        for (j, (dx, dy), kind) in [(r[i] as usize, (1, 0), 0), (u[i] as usize, (0, 1), 1)] {
            if !tree.contains(&(i, kind)) {
                let (a, b) = pos[j].unwrap();
                out.push((x + dx - a, y + dy - b));
            }
        }
    }
    out
}

/// Primitive iff no proper sublattice of index at most `n` contains every
/// period. Sublattices of index `d` are `⟨(a,0), (b,c)⟩` with `ac = d` and
/// `0 <= b < a`.
pub fn primitive_by_sublattices(r: &[u32], u: &[u32]) -> bool {
    let n = r.len() as i64;
    let gens = period_vectors(r, u);
    for d in 2..=n {
        for a in 1..=d {
            if d % a != 0 {
                continue;
            }
            let c = d / a;
            for b in 0..a {
                let inside = gens
                    .iter()
                    .all(|&(x, y)| y.rem_euclid(c) == 0 && (x - (y / c) * b).rem_euclid(a) == 0);
                if inside {
                    return false;
                }
            }
        }
    }
    true
}

/// Horizontal cylinders as `(height, width)`. Rows are the cycles of `r`;
/// a row continues into the row above when `u` commutes with `r` all along
/// it, i.e. there is no cone point on the boundary between them.
pub fn cylinders(r: &[u32], u: &[u32]) -> Vec<(u64, u64)> {
    let n = r.len();
    let mut row_of = vec![usize::MAX; n];
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if row_of[s] != usize::MAX {
            continue;
        }
        let mut row = Vec::new();
        let mut i = s;
        while row_of[i] == usize::MAX {
            row_of[i] = rows.len();
            row.push(i);
            i = r[i] as usize;
        }
        rows.push(row);
    }
    let continues = |row: &Vec<usize>| row.iter().all(|&i| u[r[i] as usize] == r[u[i] as usize]);
    let above = |row: &Vec<usize>| row_of[u[row[0]] as usize];
    // bottoms: rows not continued into from below
    let mut has_below = vec![false; rows.len()];
    for row in &rows {
        if continues(row) {
            has_below[above(row)] = true;
        }
    }
    let mut out = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        if has_below[k] {
            continue;
        }
        let mut h = 1;
        let mut cur = k;
        while continues(&rows[cur]) {
            cur = above(&rows[cur]);
            h += 1;
        }
        out.push((h, row.len() as u64));
    }
    out.sort_unstable();
    out
}

/// Size of the orbit under `T: (r, u) -> (r, u∘r^-1)`, tracked through the
/// oracle canonical form.
pub fn t_orbit_width(r: &[u32], u: &[u32]) -> u64 {
    let target = canonical_form(r, u);
    let rinv = inv(r);
    let mut cur = comp(u, &rinv);
    let mut k = 1;
    while canonical_form(r, &cur) != target {
        cur = comp(&cur, &rinv);
        k += 1;
    }
    k
}

/// Partitions of `n` in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A permutation with the given cycle type, cycles on consecutive labels.
pub fn with_cycle_type(parts: &[usize]) -> Perm {
    let n: usize = parts.iter().sum();
    let mut p = vec![0; n];
    let mut start = 0;
    for &len in parts {
        for j in 0..len {
            p[start + j] = (start + (j + 1) % len) as u32;
        }
        start += len;
    }
    p
}

/// Every permutation of `0..n` via Heap's algorithm.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut a: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Isomorphism classes of primitive `n`-square surfaces in H(2), found by
/// running over all pairs `(r, u)` with `r` a fixed representative of its
/// conjugacy class.
pub fn brute_force_primitive_h2(n: usize) -> std::collections::BTreeSet<(Perm, Perm)> {
    let mut out = std::collections::BTreeSet::new();
    for parts in partitions(n) {
        let r = with_cycle_type(&parts);
        for_each_permutation(n, |u| {
            if commutator_is_3_cycle(&r, u) && transitive(&r, u) && primitive_by_sublattices(&r, u)
            {
                out.insert(canonical_form(&r, u));
            }
        });
    }
    out
}
