//! A-hypergeometric systems: toric ideals, Euler operators, normalized
//! volumes, the Cohen–Macaulay test and parameter sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dimension::{krull_dimension, CommutativeIdeal};
use crate::frontend::{analyze, AnalyzeOptions};
use crate::groebner::{buchberger, syzygies, FreeElement, FreeModule, GroebnerBasis, Term};
use crate::kpoly::{monomial_k_polynomial, LaurentPoly2, Multidegree};
use crate::order::{TermOrder, Tier};
use crate::rational::Rational;
use crate::ring::{Bidegree, Monomial, Ring, VarSpec, WeylElement};
use crate::Error;

/// Largest box radius tried when searching for a positive row functional.
const HALFSPACE_SEARCH_LIMIT: i64 = 12;

/// Integer matrix `A` (d×n) with a rational parameter vector `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkzInstance {
    a: Vec<Vec<i64>>,
    beta: Vec<Rational>,
    positive: Vec<i64>,
}

/// Which variables carry V-weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VSelector {
    /// All variables: the V-filtration along the origin.
    Origin,
    /// Only `x_i` (0-based): along the hyperplane `x_i = 0`.
    Hyperplane(usize),
    /// An explicit set of 0-based indices.
    Explicit(Vec<usize>),
}

impl VSelector {
    pub fn flags(&self, n: usize) -> Result<Vec<bool>, Error> {
        let mut f = vec![false; n];
        match self {
            VSelector::Origin => f.iter_mut().for_each(|x| *x = true),
            VSelector::Hyperplane(i) => {
                if *i >= n {
                    return Err(Error::InvalidVars(format!("no variable x{}", i + 1)));
                }
                f[*i] = true;
            }
            VSelector::Explicit(idx) => {
                for &i in idx {
                    if i >= n {
                        return Err(Error::InvalidVars(format!("no variable x{}", i + 1)));
                    }
                    f[i] = true;
                }
            }
        }
        Ok(f)
    }
}

impl fmt::Display for VSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VSelector::Origin => f.write_str("origin"),
            VSelector::Hyperplane(i) => write!(f, "x{}", i + 1),
            VSelector::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|i| format!("x{}", i + 1)).collect();
                f.write_str(&s.join(" "))
            }
        }
    }
}

impl GkzInstance {
    /// Validates that the columns generate `ℤ^d` and lie in an open
    /// halfspace.
    pub fn new(a: Vec<Vec<i64>>, beta: Vec<Rational>) -> Result<Self, Error> {
        let d = a.len();
        if d == 0 || a[0].is_empty() {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        let n = a[0].len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows have different lengths".into()));
        }
        if beta.len() != d {
            return Err(Error::InvalidMatrix(format!(
                "beta has {} entries, matrix has {d} rows",
                beta.len()
            )));
        }
        let divisors = elementary_divisors(&a);
        if divisors.len() != d || divisors.iter().any(|&x| x != 1) {
            return Err(Error::InvalidMatrix(format!(
                "columns do not generate Z^{d} (elementary divisors {divisors:?})"
            )));
        }
        let positive = positive_functional(&a).ok_or_else(|| {
            Error::InvalidMatrix("columns do not lie in an open halfspace".into())
        })?;
        Ok(GkzInstance { a, beta, positive })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn d(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.a[0].len()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.a.iter().map(|r| r[j]).collect()
    }

    pub fn with_beta(&self, beta: Vec<Rational>) -> Result<Self, Error> {
        if beta.len() != self.d() {
            return Err(Error::InvalidMatrix(format!(
                "beta has {} entries, matrix has {} rows",
                beta.len(),
                self.d()
            )));
        }
        Ok(GkzInstance { beta, ..self.clone() })
    }

    /// Positive grading of the variables: `w·a_j` for the found functional.
    pub fn grading(&self) -> Vec<i64> {
        (0..self.n())
            .map(|j| self.a.iter().zip(&self.positive).map(|(r, w)| r[j] * w).sum())
            .collect()
    }

    /// Variables `x1..xn` with the t-block chosen by `sel`.
    pub fn varspec(&self, sel: &VSelector) -> Result<VarSpec, Error> {
        VarSpec::indexed("x", self.n()).with_flags(sel.flags(self.n())?)
    }

    /// Whether `(1, …, 1)` lies in the rational row space.
    pub fn is_homogeneous(&self) -> bool {
        let mut rows = self.a.clone();
        let r0 = rank(&rows);
        rows.push(vec![1; self.n()]);
        rank(&rows) == r0
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonzero diagonal of the Smith normal form.
pub fn elementary_divisors(a: &[Vec<i64>]) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (rows, cols) = (m.len(), m[0].len());
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        loop {
            let piv = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = piv else {
                out.sort();
                return out;
            };
            m.swap(k, pi);
            for r in m.iter_mut() {
                r.swap(k, pj);
            }
            let p = m[k][k];
            let mut clean = true;
            for i in k + 1..rows {
                let q = m[i][k] / p;
                for j in k..cols {
                    m[i][j] -= q * m[k][j];
                }
                clean &= m[i][k] == 0;
            }
            for j in k + 1..cols {
                let q = m[k][j] / p;
                for i in k..rows {
                    m[i][j] -= q * m[i][k];
                }
                clean &= m[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the rest
            if let Some((i, _)) = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % p != 0)
            {
                for j in k..cols {
                    m[k][j] += m[i][j];
                }
                continue;
            }
            out.push(p.abs());
            break;
        }
    }
    out.sort();
    out
}

fn rank(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> =
        a.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let v = &m[i][j] - &(&f * &m[r][j]);
                    m[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// An integer row vector `w` with `w·a_j > 0` for every column, searched in
/// growing boxes.
fn positive_functional(a: &[Vec<i64>]) -> Option<Vec<i64>> {
    let d = a.len();
    let n = a[0].len();
    for radius in 1..=HALFSPACE_SEARCH_LIMIT {
        let side = (2 * radius + 1) as usize;
        if side.checked_pow(d as u32).map_or(true, |c| c > 5_000_000) {
            return None;
        }
        let mut w = vec![-radius; d];
        loop {
            if w.iter().any(|x| x.abs() == radius)
                && (0..n).all(|j| a.iter().zip(&w).map(|(r, x)| r[j] * x).sum::<i64>() > 0)
            {
                return Some(w);
            }
            let mut k = 0;
            while k < d {
                w[k] += 1;
                if w[k] > radius {
                    w[k] = -radius;
                    k += 1;
                } else {
                    break;
                }
            }
            if k == d {
                break;
            }
        }
    }
    None
}

/// A ℤ-basis of `ker_ℤ(A)` from the unimodular transform of a Hermite
/// reduction of `Aᵀ`, size-reduced pairwise.
pub fn lattice_kernel(inst: &GkzInstance) -> Vec<Vec<i64>> {
    let (d, n) = (inst.d(), inst.n());
    // rows: [a_j | e_j]
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut r: Vec<i128> = inst.column(j).iter().map(|&x| x as i128).collect();
            r.extend((0..n).map(|k| (k == j) as i128));
            r
        })
        .collect();
    let mut row = 0;
    for c in 0..d {
        loop {
            let Some(p) = (row..n).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs()) else {
                break;
            };
            m.swap(row, p);
            let mut done = true;
            for i in row + 1..n {
                let q = m[i][c] / m[row][c];
                if q != 0 {
                    for j in 0..d + n {
                        m[i][j] -= q * m[row][j];
                    }
                }
                done &= m[i][c] == 0;
            }
            if done {
                row += 1;
                break;
            }
        }
    }
    let mut basis: Vec<Vec<i64>> = m[row..].iter().map(|r| r[d..].iter().map(|&x| x as i64).collect()).collect();
    size_reduce(&mut basis);
    basis
}

fn size_reduce(b: &mut [Vec<i64>]) {
    let norm = |v: &[i64]| v.iter().map(|x| x.abs()).sum::<i64>();
    loop {
        let mut changed = false;
        for i in 0..b.len() {
            for j in 0..b.len() {
                if i == j {
                    continue;
                }
                for s in [1i64, -1] {
                    let cand: Vec<i64> = b[i].iter().zip(&b[j]).map(|(x, y)| x - s * y).collect();
                    if norm(&cand) < norm(&b[i]) {
                        b[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for v in b.iter_mut() {
        // first nonzero entry positive
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Commutative ring in the derivative slots of the GKZ variable layout.
pub fn toric_ring(inst: &GkzInstance) -> Ring {
    Ring::commutative(VarSpec::indexed("x", inst.n()))
}

fn binomial(ring: &Ring, u: &[i64]) -> WeylElement {
    let n = ring.n();
    let mut plus = ring.one();
    let mut minus = ring.one();
    for (j, &x) in u.iter().enumerate() {
        if x > 0 {
            plus.set(n + j, x as u16);
        } else if x < 0 {
            minus.set(n + j, (-x) as u16);
        }
    }
    WeylElement::from_terms([(plus, Rational::ONE), (minus, Rational::from_int(-1))])
}

/// Order with `∂_i` cheapest among elements homogeneous for the positive
/// grading: weight tier, then reverse lex with `∂_i` last.
fn cheapest_order(inst: &GkzInstance, ring: &Ring, i: usize) -> TermOrder {
    let n = inst.n();
    let mut w = vec![0i64; ring.slots()];
    for (j, g) in inst.grading().into_iter().enumerate() {
        w[n + j] = g;
    }
    let mut seq: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| n + j).collect();
    seq.push(n + i);
    TermOrder::new(vec![Tier::Weight(w), Tier::RevLex(seq)])
}

/// Default order for I_A: grevlex `∂1 > … > ∂n`.
pub fn toric_order(ring: &Ring) -> TermOrder {
    TermOrder::grevlex((0..ring.n()).map(|j| ring.deriv(j)).collect())
}

fn divide_slot(f: &FreeElement, slot: usize, module: &FreeModule) -> (FreeElement, bool) {
    let k = f.terms().iter().map(|t| t.mon.exp(slot)).min().unwrap_or(0);
    if k == 0 {
        return (f.clone(), false);
    }
    let terms = f
        .terms()
        .iter()
        .map(|t| {
            let mut m = t.mon.clone();
            m.set(slot, m.exp(slot) - k);
            Term { mon: m, comp: t.comp, coef: t.coef.clone() }
        })
        .collect();
    (module.normalize(terms), true)
}

/// The toric ideal `I_A` as a reduced Gröbner basis under [`toric_order`].
pub fn toric_ideal(inst: &GkzInstance) -> Result<GroebnerBasis, Error> {
    let ring = toric_ring(inst);
    let n = inst.n();
    let mut gens: Vec<WeylElement> = lattice_kernel(inst).iter().map(|u| binomial(&ring, u)).collect();
    let mut stable_rounds = 0;
    let mut i = 0;
    let mut rounds = 0;
    while stable_rounds < n && !gens.is_empty() {
        rounds += 1;
        if rounds > crate::groebner::MAX_SATURATION_ROUNDS * n {
            return Err(Error::Saturation("toric saturation did not stabilize".into()));
        }
        let module = Arc::new(FreeModule::with_rank(ring.clone(), 1, cheapest_order(inst, &ring, i)));
        let elems: Vec<_> = gens.iter().map(|g| module.from_weyl(0, g)).collect();
        let gb = buchberger(module.clone(), &elems)?;
        let mut changed = false;
        gens = gb
            .elements()
            .iter()
            .map(|g| {
                let (q, c) = divide_slot(g, n + i, &module);
                changed |= c;
                q.entry(0)
            })
            .collect();
        if changed {
            stable_rounds = 0;
        } else {
            stable_rounds += 1;
            i = (i + 1) % n;
        }
    }
    let module = Arc::new(FreeModule::with_rank(ring.clone(), 1, toric_order(&ring)));
    let elems: Vec<_> = gens.iter().map(|g| module.from_weyl(0, g)).collect();
    buchberger(module, &elems)
}

/// Whether two generator lists span the same ideal (mutual membership).
pub fn same_ideal(ring: &Ring, a: &[WeylElement], b: &[WeylElement]) -> Result<bool, Error> {
    let module = Arc::new(FreeModule::with_rank(ring.clone(), 1, TermOrder::default_for(ring)));
    let to = |v: &[WeylElement]| v.iter().map(|g| module.from_weyl(0, g)).collect::<Vec<_>>();
    let ga = buchberger(module.clone(), &to(a))?;
    let gb = buchberger(module.clone(), &to(b))?;
    Ok(to(b).iter().all(|x| ga.is_member(x)) && to(a).iter().all(|x| gb.is_member(x)))
}

/// `Σ_j a_ij x_j ∂_j − β_i` in the Weyl algebra on `x1..xn`.
pub fn euler_operators(inst: &GkzInstance, ring: &Ring) -> Vec<WeylElement> {
    let n = inst.n();
    inst.a
        .iter()
        .zip(&inst.beta)
        .map(|(row, b)| {
            let mut e = WeylElement::zero();
            for (j, &a) in row.iter().enumerate() {
                let mut m = ring.one();
                m.set(j, 1);
                m.set(n + j, 1);
                e.add_term(m, Rational::from_int(a));
            }
            e.add_term(ring.one(), -b);
            e
        })
        .collect()
}

/// Generators of `H_A(β)`: the toric binomials, then the Euler operators.
pub fn hypergeometric_ideal(inst: &GkzInstance, sel: &VSelector) -> Result<(Ring, Vec<WeylElement>), Error> {
    let d = Ring::weyl(inst.varspec(sel)?);
    let toric = toric_ideal(inst)?;
    let mut gens: Vec<WeylElement> = toric.elements().iter().map(|g| g.entry(0)).collect();
    gens.extend(euler_operators(inst, &d));
    Ok((d, gens))
}

/// `d!·vol(conv{0, a_1, …, a_n})`: the convex-hull route for `d ≤ 3`, the
/// degree of the toric ideal for homogeneous `A` otherwise.
pub fn normalized_volume(inst: &GkzInstance) -> Result<u64, Error> {
    if inst.d() <= 3 {
        Ok(hull_volume(inst))
    } else if inst.is_homogeneous() {
        volume_by_degree(inst)
    } else {
        Err(Error::Unsupported(format!(
            "volume of a non-homogeneous configuration in dimension {}",
            inst.d()
        )))
    }
}

fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        1 => m[0][0] as i128,
        2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
        _ => {
            let c = |i: usize, j: usize| m[i][j] as i128;
            c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) - c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0))
                + c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0))
        }
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(u: &[i64], v: &[i64]) -> Vec<i64> {
    vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Pyramids from the vertex `0` over every facet not containing it.
fn hull_volume(inst: &GkzInstance) -> u64 {
    let d = inst.d();
    let mut pts: Vec<Vec<i64>> = (0..inst.n()).map(|j| inst.column(j)).collect();
    pts.sort();
    pts.dedup();
    let mut facets: BTreeMap<(Vec<i64>, i64), ()> = BTreeMap::new();
    let mut total: i128 = 0;
    // candidate hyperplanes through d points
    let idx: Vec<Vec<usize>> = combinations(pts.len(), d);
    for c in idx {
        let normal: Vec<i64> = match d {
            1 => vec![1],
            2 => {
                let e = sub(&pts[c[1]], &pts[c[0]]);
                vec![-e[1], e[0]]
            }
            _ => cross(&sub(&pts[c[1]], &pts[c[0]]), &sub(&pts[c[2]], &pts[c[0]])),
        };
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let g = normal.iter().fold(0i128, |g, &x| gcd(g, x as i128)) as i64;
        let mut normal: Vec<i64> = normal.iter().map(|x| x / g).collect();
        let mut off = dot(&normal, &pts[c[0]]);
        if off == 0 {
            continue; // through the origin: zero-volume pyramid
        }
        if off < 0 {
            normal.iter_mut().for_each(|x| *x = -*x);
            off = -off;
        }
        // supporting: every point (and 0) on the side ≤ off
        if pts.iter().any(|p| dot(&normal, p) > off) {
            continue;
        }
        if facets.insert((normal.clone(), off), ()).is_some() {
            continue;
        }
        let on: Vec<Vec<i64>> = pts.iter().filter(|p| dot(&normal, p) == off).cloned().collect();
        total += facet_volume(&on, d);
    }
    total as u64
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `Σ |det|` of the simplices `(0, facet triangle)` triangulating the facet.
fn facet_volume(on: &[Vec<i64>], d: usize) -> i128 {
    match d {
        1 => on[0][0].abs() as i128,
        2 => {
            // extreme pair along the edge
            let dir = sub(&on[on.len() - 1], &on[0]);
            let key = |p: &Vec<i64>| dot(&dir, p);
            let a = on.iter().min_by_key(|p| key(p)).unwrap();
            let b = on.iter().max_by_key(|p| key(p)).unwrap();
            det(&[a.clone(), b.clone()]).abs()
        }
        _ => {
            let hull = planar_hull(on);
            (1..hull.len().saturating_sub(1))
                .map(|k| det(&[hull[0].clone(), hull[k].clone(), hull[k + 1].clone()]).abs())
                .sum()
        }
    }
}

/// Convex hull (cyclic order) of coplanar points in ℤ³.
fn planar_hull(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let normal = (0..pts.len())
        .flat_map(|i| (0..pts.len()).map(move |j| (i, j)))
        .map(|(i, j)| cross(&sub(&pts[i], &pts[0]), &sub(&pts[j], &pts[0])))
        .find(|c| c.iter().any(|&x| x != 0))
        .unwrap_or_else(|| vec![0, 0, 1]);
    // drop the coordinate with the largest normal component
    let drop = (0..3).max_by_key(|&k| normal[k].abs()).unwrap();
    let proj: Vec<(i64, i64, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let q: Vec<i64> = (0..3).filter(|&k| k != drop).map(|k| p[k]).collect();
            (q[0], q[1], i)
        })
        .collect();
    let mut s = proj;
    s.sort();
    let cr = |o: &(i64, i64, usize), a: &(i64, i64, usize), b: &(i64, i64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(i64, i64, usize)> = Vec::new();
    for p in &s {
        while lower.len() >= 2 && cr(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(i64, i64, usize)> = Vec::new();
    for p in s.iter().rev() {
        while upper.len() >= 2 && cr(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(_, _, i)| pts[i].clone()).collect()
}

/// Degree of the projective toric variety: `Q(1)` for the Hilbert series
/// `K(t)/(1−t)^n = Q(t)/(1−t)^d` of `S/in(I_A)`. Requires homogeneous `A`.
pub fn volume_by_degree(inst: &GkzInstance) -> Result<u64, Error> {
    if !inst.is_homogeneous() {
        return Err(Error::Unsupported("degree route needs a homogeneous matrix".into()));
    }
    let gb = toric_ideal(inst)?;
    let leads: Vec<Monomial> = gb.leads().into_iter().map(|(m, _)| m).collect();
    let k = monomial_k_polynomial(&[(leads, (0, 0))], &|m: &Monomial| (m.degree() as i64, 0));
    let one_minus = LaurentPoly2::from_terms([(0, 0, 1), (1, 0, -1)]);
    let q = k
        .div_exact(&one_minus.pow((inst.n() - inst.d()) as u32))
        .ok_or_else(|| Error::Internal("Hilbert numerator not divisible by (1-t)^codim".into()))?;
    let v: i64 = q.terms().map(|(_, _, c)| c).sum();
    u64::try_from(v).map_err(|_| Error::Internal(format!("negative degree {v}")))
}

/// `vol(A)·T1^d·(T1 + T2)^{n−d}`.
pub fn generic_prediction(inst: &GkzInstance) -> Result<LaurentPoly2, Error> {
    let vol = normalized_volume(inst)? as i64;
    let p = &LaurentPoly2::monomial(inst.d() as i64, 0, vol)
        * &LaurentPoly2::linear(1, 1).pow((inst.n() - inst.d()) as u32);
    Ok(p)
}

/// Cohen–Macaulayness of `k[∂, h]/H(I_A)`, `H` the homogenization of a
/// degree-compatible basis: projective dimension of a minimized free
/// resolution against `(n+1) − dim`.
pub fn is_cohen_macaulay_toric(inst: &GkzInstance) -> Result<bool, Error> {
    let ring = toric_ring(inst);
    let gb = toric_ideal(inst)?;
    let n = inst.n();
    let h = ring.h();
    let homog: Vec<WeylElement> = gb
        .elements()
        .iter()
        .map(|g| {
            let top = g.terms().iter().map(|t| t.mon.degree()).max().unwrap();
            WeylElement::from_terms(g.terms().iter().map(|t| {
                let mut m = t.mon.clone();
                m.set(h, (top - t.mon.degree()) as u16);
                (m, t.coef.clone())
            }))
        })
        .collect();
    let mut seq: Vec<usize> = (0..n).map(|j| ring.deriv(j)).collect();
    seq.push(h);
    let ideal = CommutativeIdeal::new(&ring, homog.clone()).with_variables(seq.clone());
    let dim = krull_dimension(&ideal)?;
    let pd = projective_dimension(&ring, &homog, TermOrder::grevlex(seq))?;
    Ok(pd as i64 == (n as i64 + 1) - dim)
}

/// Length of the minimized Schreyer resolution of `S/I`.
pub fn projective_dimension(ring: &Ring, gens: &[WeylElement], order: TermOrder) -> Result<usize, Error> {
    let module = Arc::new(FreeModule::new(ring.clone(), vec![Bidegree::ZERO], crate::order::ModuleOrder::top(order)));
    let elems: Vec<_> = gens.iter().map(|g| module.from_weyl(0, g)).collect();
    let mut gb = buchberger(module.clone(), &elems)?;
    // matrices: maps[i] columns are images of generators of F_{i+1}
    let mut maps: Vec<Vec<Vec<WeylElement>>> = Vec::new();
    let mut ranks = vec![1usize];
    while !gb.is_empty() {
        let r = gb.module().rank();
        maps.push(gb.elements().iter().map(|c| c.to_vector(r)).collect());
        ranks.push(gb.len());
        gb = syzygies(&gb)?;
    }
    minimize(ring, &mut maps);
    Ok(maps.iter().take_while(|m| !m.is_empty()).count())
}

/// Splits off unit entries: a constant entry `(r, c)` of `φ_i` cancels
/// generator `c` of `F_{i+1}` against generator `r` of `F_i`.
fn minimize(ring: &Ring, maps: &mut [Vec<Vec<WeylElement>>]) {
    loop {
        let mut found = None;
        'outer: for (i, cols) in maps.iter().enumerate() {
            for (c, col) in cols.iter().enumerate() {
                for (r, e) in col.iter().enumerate() {
                    if !e.is_zero() && e.len() == 1 && e.terms().next().unwrap().0.is_one() {
                        found = Some((i, r, c));
                        break 'outer;
                    }
                }
            }
        }
        let Some((i, r, c)) = found else { return };
        let u = maps[i][c][r].coeff(&maps[i][c][r].terms().next().unwrap().0.clone());
        let pivot = maps[i][c].clone();
        for (c2, col) in maps[i].iter_mut().enumerate() {
            if c2 == c || col[r].is_zero() {
                continue;
            }
            let f = col[r].scale(&u.recip());
            for (k, e) in col.iter_mut().enumerate() {
                *e = e.sub(&f.multiply(&pivot[k], ring));
            }
        }
        maps[i].remove(c);
        for col in maps[i].iter_mut() {
            col.remove(r);
        }
        if i > 0 {
            maps[i - 1].remove(r);
        }
        if i + 1 < maps.len() {
            for col in maps[i + 1].iter_mut() {
                col.remove(c);
            }
        }
    }
}

/// One row of a parameter sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub beta: Vec<String>,
    pub codim: Option<u32>,
    #[serde(serialize_with = "ser_opt_poly")]
    pub multidegree: Option<LaurentPoly2>,
    pub b: Vec<i64>,
    pub exceptional: bool,
    /// `b_i(β) ≥ b_i(generic)` for every `i`.
    pub dominates_generic: bool,
    pub negative_coefficient: bool,
    pub lower_terms_vanish: bool,
    pub error: Option<String>,
}

fn ser_opt_poly<S: serde::Serializer>(p: &Option<LaurentPoly2>, s: S) -> Result<S::Ok, S::Error> {
    p.as_ref().map(|p| p.to_json()).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub selector: VSelector,
    #[serde(serialize_with = "ser_opt_poly")]
    pub generic: Option<LaurentPoly2>,
    /// How the generic value was chosen: `prediction` or `modal`.
    pub generic_source: String,
    pub sample_size: usize,
    pub rows: Vec<SweepRow>,
}

/// Runs the pipeline for every `β` (in parallel) and flags the points whose
/// multidegree differs from the generic one.
pub fn sweep_beta(
    inst: &GkzInstance,
    betas: &[Vec<Rational>],
    sel: &VSelector,
    opts: &AnalyzeOptions,
) -> SweepTable {
    let results: Vec<Result<Multidegree, String>> = betas
        .par_iter()
        .map(|b| {
            let inst = inst.with_beta(b.clone()).map_err(|e| e.to_string())?;
            let (ring, gens) = hypergeometric_ideal(&inst, sel).map_err(|e| e.to_string())?;
            let gens: Vec<Vec<WeylElement>> = gens.into_iter().map(|g| vec![g]).collect();
            let a = analyze(&ring, 1, &[Bidegree::ZERO], &gens, opts).map_err(|e| e.to_string())?;
            if !a.verify.ok() {
                return Err(format!("verification failed: {}", a.verify.failures[0]));
            }
            a.multidegree.ok_or_else(|| "zero module".to_string())
        })
        .collect();
    let prediction = match sel {
        VSelector::Origin => generic_prediction(inst).ok(),
        _ => None,
    };
    let (generic, source) = match prediction {
        Some(p) => (Some(p), "prediction"),
        None => {
            let mut counts: Vec<(LaurentPoly2, usize)> = Vec::new();
            for m in results.iter().flatten() {
                match counts.iter_mut().find(|(p, _)| *p == m.poly) {
                    Some(e) => e.1 += 1,
                    None => counts.push((m.poly.clone(), 1)),
                }
            }
            // first most frequent value in input order
            let best = counts.iter().map(|c| c.1).max();
            (counts.into_iter().find(|c| Some(c.1) == best).map(|c| c.0), "modal")
        }
    };
    let generic_b: Option<Vec<i64>> = generic.as_ref().and_then(|g| {
        results.iter().flatten().next().map(|m| {
            (0..=m.codim as i64).map(|i| g.coeff(m.codim as i64 - i, i)).collect()
        })
    });
    let rows = betas
        .iter()
        .zip(results)
        .map(|(b, r)| {
            let beta = b.iter().map(|x| x.to_string()).collect();
            match r {
                Ok(m) => SweepRow {
                    beta,
                    codim: Some(m.codim),
                    exceptional: generic.as_ref().is_some_and(|g| *g != m.poly),
                    dominates_generic: generic_b
                        .as_ref()
                        .is_some_and(|g| g.len() == m.b.len() && m.b.iter().zip(g).all(|(x, y)| x >= y)),
                    negative_coefficient: m.has_negative_coefficient(),
                    lower_terms_vanish: m.lower_terms_vanish,
                    b: m.b,
                    multidegree: Some(m.poly),
                    error: None,
                },
                Err(e) => SweepRow {
                    beta,
                    codim: None,
                    multidegree: None,
                    b: vec![],
                    exceptional: false,
                    dominates_generic: false,
                    negative_coefficient: false,
                    lower_terms_vanish: false,
                    error: Some(e),
                },
            }
        })
        .collect::<Vec<_>>();
    SweepTable {
        selector: sel.clone(),
        generic,
        generic_source: source.into(),
        sample_size: rows.len(),
        rows,
    }
}

impl fmt::Display for SweepTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "V-filtration along {}", self.selector)?;
        match &self.generic {
            Some(g) => writeln!(f, "generic ({}, {} points): {g}", self.generic_source, self.sample_size)?,
            None => writeln!(f, "generic: undetermined")?,
        }
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                let beta = format!("({})", r.beta.join(", "));
                match &r.error {
                    Some(e) => [beta, "-".into(), format!("error: {e}"), String::new()],
                    None => {
                        let mut flags = Vec::new();
                        if r.exceptional {
                            flags.push("exceptional");
                            if r.dominates_generic {
                                flags.push("b >= generic");
                            }
                        }
                        if r.negative_coefficient {
                            flags.push("negative b");
                        }
                        if !r.lower_terms_vanish {
                            flags.push("lower terms");
                        }
                        [
                            beta,
                            r.codim.map_or("-".into(), |c| c.to_string()),
                            r.multidegree.as_ref().map_or(String::new(), |m| m.to_string()),
                            flags.join(", "),
                        ]
                    }
                }
            })
            .collect();
        let header = ["beta".to_string(), "codim".into(), "multidegree".into(), "flags".into()];
        let mut width = [0usize; 4];
        for row in std::iter::once(&header).chain(cells.iter()) {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        for row in std::iter::once(&header).chain(cells.iter()) {
            let line: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
            writeln!(f, "{}", line.join("  ").trim_end())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(a: Vec<Vec<i64>>) -> GkzInstance {
        let d = a.len();
        GkzInstance::new(a, vec![Rational::ZERO; d]).unwrap()
    }

    fn ex3() -> GkzInstance {
        inst(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])
    }

    #[test]
    fn validation() {
        assert!(GkzInstance::new(vec![vec![2, 2]], vec![Rational::ZERO]).is_err());
        assert!(GkzInstance::new(vec![vec![1, -1]], vec![Rational::ZERO]).is_err());
        assert!(GkzInstance::new(vec![vec![1, 1]], vec![]).is_err());
        assert_eq!(elementary_divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn kernels() {
        let k = lattice_kernel(&ex3());
        assert_eq!(k.len(), 2);
        for u in &k {
            for row in ex3().matrix() {
                assert_eq!(dot(row, u), 0);
            }
        }
        assert!(lattice_kernel(&inst(vec![vec![1, 0], vec![0, 1]])).is_empty());
        assert_eq!(lattice_kernel(&inst(vec![vec![1, 1]])), vec![vec![1, -1]]);
    }

    #[test]
    fn volumes() {
        assert_eq!(normalized_volume(&ex3()).unwrap(), 3);
        assert_eq!(volume_by_degree(&ex3()).unwrap(), 3);
        assert_eq!(normalized_volume(&inst(vec![vec![1, 0], vec![0, 1]])).unwrap(), 1);
        let cube = inst(vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        // conv{0, e1, e2, e3, (1,1,1)}: 3!·(1/6 + 1/3)
        assert_eq!(normalized_volume(&cube).unwrap(), 3);
    }

    #[test]
    fn dimension_one_prediction() {
        let a = inst(vec![vec![1, 1]]);
        assert_eq!(
            generic_prediction(&a).unwrap(),
            LaurentPoly2::from_terms([(2, 0, 1), (1, 1, 1)])
        );
        assert!(is_cohen_macaulay_toric(&a).unwrap());
    }
}
