//! K-polynomials in `ℤ[T1^±, T2^±]`, the substitution `T ↦ 1 − T` as a
//! truncated series, and the multidegree slice.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::ring::Monomial;
use crate::Error;

/// Integer Laurent polynomial in two variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), i64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2::default()
    }

    pub fn one() -> Self {
        LaurentPoly2::monomial(0, 0, 1)
    }

    pub fn monomial(a: i64, b: i64, c: i64) -> Self {
        let mut p = LaurentPoly2::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64, i64)>) -> Self {
        let mut p = LaurentPoly2::zero();
        for (a, b, c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: i64, b: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: i64, b: i64) -> i64 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Terms as `(a, b, c)` for `c·T1^a·T2^b`, ascending by exponent pair.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    /// Terms in display order: descending total degree, then descending
    /// T1-exponent.
    pub fn display_terms(&self) -> Vec<(i64, i64, i64)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|x, y| (y.0 + y.1, y.0).cmp(&(x.0 + x.1, x.0)));
        t
    }

    pub fn is_homogeneous(&self, deg: i64) -> bool {
        self.terms().all(|(a, b, _)| a + b == deg)
    }

    /// `(T1 + T2)^k` style helper: the linear form `c1·T1 + c2·T2`.
    pub fn linear(c1: i64, c2: i64) -> Self {
        LaurentPoly2::from_terms([(1, 0, c1), (0, 1, c2)])
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentPoly2::one(), |acc, _| &acc * self)
    }

    /// Exact division, if `other` divides `self` with polynomial quotient.
    /// Both must be honest polynomials (no negative exponents).
    pub fn div_exact(&self, other: &LaurentPoly2) -> Option<LaurentPoly2> {
        if other.is_zero() {
            return None;
        }
        let lead = |p: &LaurentPoly2| p.terms().max_by_key(|&(a, b, _)| (a + b, a)).unwrap();
        let (oa, ob, oc) = lead(other);
        let mut rem = self.clone();
        let mut q = LaurentPoly2::zero();
        while !rem.is_zero() {
            let (ra, rb, rc) = lead(&rem);
            if ra < oa || rb < ob || rc % oc != 0 {
                return None;
            }
            let t = LaurentPoly2::monomial(ra - oa, rb - ob, rc / oc);
            rem = &rem - &(&t * other);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn to_json(&self) -> Vec<[i64; 3]> {
        self.display_terms().into_iter().map(|(a, b, c)| [a, b, c]).collect()
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut r = self.clone();
        for (a, b, c) in o.terms() {
            r.add_term(a, b, c);
        }
        r
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut r = self.clone();
        for (a, b, c) in o.terms() {
            r.add_term(a, b, -c);
        }
        r
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut r = LaurentPoly2::zero();
        for (a, b, c) in self.terms() {
            for (a2, b2, c2) in o.terms() {
                r.add_term(a + a2, b + b2, c * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2::from_terms(self.terms().map(|(a, b, c)| (a, b, -c)))
    }
}

fn power(var: &str, e: i64) -> String {
    match e {
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

fn render_terms(terms: &[(i64, i64, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (a, b, c)) in terms.iter().enumerate() {
        let neg = c.starts_with('-');
        let mag = c.trim_start_matches('-');
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if *a != 0 {
            factors.push(power("T1", *a));
        }
        if *b != 0 {
            factors.push(power("T2", *b));
        }
        if factors.is_empty() {
            out.push_str(mag);
        } else {
            if mag != "1" {
                out.push_str(mag);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<_> = self.display_terms().into_iter().map(|(a, b, c)| (a, b, c.to_string())).collect();
        f.write_str(&render_terms(&t))
    }
}

/// Power series in `T1, T2` truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    order: u32,
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl TruncatedSeries2 {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    /// The homogeneous part of total degree `d`.
    pub fn slice(&self, d: u32) -> Vec<(u32, u32, BigInt)> {
        self.terms()
            .filter(|(a, b, _)| a + b == d)
            .map(|(a, b, c)| (a, b, c.clone()))
            .collect()
    }
}

impl fmt::Display for TruncatedSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut t: Vec<_> = self
            .terms()
            .map(|(a, b, c)| (a as i64, b as i64, c.to_string()))
            .collect();
        t.sort_by(|x, y| (x.0 + x.1, -x.0).cmp(&(y.0 + y.1, -y.0)));
        write!(f, "{} + O(T^{})", render_terms(&t), self.order + 1)
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Coefficients of `(1 − T)^a` up to degree `trunc`; negative `a` uses
/// `(1 − T)^{−k} = Σ C(k−1+j, j) T^j`.
fn one_minus_power(a: i64, trunc: u32) -> Vec<BigInt> {
    (0..=trunc as i64)
        .map(|j| {
            if a >= 0 {
                let c = binom(a, j);
                if j % 2 == 1 {
                    -c
                } else {
                    c
                }
            } else {
                binom(-a - 1 + j, j)
            }
        })
        .collect()
}

/// `K(1 − T1, 1 − T2)` truncated at total degree `trunc`.
pub fn substitute_one_minus(k: &LaurentPoly2, trunc: u32) -> TruncatedSeries2 {
    let mut terms: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for (a, b, c) in k.terms() {
        let s1 = one_minus_power(a, trunc);
        let s2 = one_minus_power(b, trunc);
        for (i, x) in s1.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in s2.iter().enumerate().take(trunc as usize + 1 - i) {
                if y.is_zero() {
                    continue;
                }
                *terms.entry((i as u32, j as u32)).or_default() += x * y * BigInt::from(c);
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    TruncatedSeries2 { order: trunc, terms }
}

/// The degree-`codim` part of `K(1 − T1, 1 − T2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Multidegree {
    pub codim: u32,
    #[serde(serialize_with = "ser_poly")]
    pub poly: LaurentPoly2,
    /// `b[i]` is the coefficient of `T1^{c−i} T2^i`.
    pub b: Vec<i64>,
    pub lower_terms_vanish: bool,
}

fn ser_poly<S: serde::Serializer>(p: &LaurentPoly2, s: S) -> Result<S::Ok, S::Error> {
    p.to_json().serialize(s)
}

impl Multidegree {
    /// Whether some `b_i` is negative.
    pub fn has_negative_coefficient(&self) -> bool {
        self.b.iter().any(|&x| x < 0)
    }

    /// `b_i(self) ≥ b_i(other)` for every `i`.
    pub fn dominates(&self, other: &Multidegree) -> bool {
        self.b.len() == other.b.len() && self.b.iter().zip(&other.b).all(|(x, y)| x >= y)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

pub fn multidegree(k: &LaurentPoly2, codim: u32) -> Result<Multidegree, Error> {
    let s = substitute_one_minus(k, codim);
    let lower_terms_vanish = s.terms().all(|(a, b, _)| a + b == codim);
    let mut poly = LaurentPoly2::zero();
    let mut b = vec![0i64; codim as usize + 1];
    for (x, y, c) in s.slice(codim) {
        let c = c
            .to_i64()
            .ok_or_else(|| Error::Unsupported(format!("multidegree coefficient {c} overflows")))?;
        poly.add_term(x as i64, y as i64, c);
        b[y as usize] = c;
    }
    Ok(Multidegree { codim, poly, b, lower_terms_vanish })
}

/// K-polynomial of `S^r / L` for a monomial submodule `L` of a polynomial
/// ring, coarsened by `weight`: component `c` contributes
/// `T^{shift_c}·K(S / L_c)`, with `K(S/I)` from the colon recursion
/// `K(S/⟨I, m⟩) = K(S/I) − T^{w(m)}·K(S/(I : m))`.
pub fn monomial_k_polynomial(
    components: &[(Vec<Monomial>, (i64, i64))],
    weight: &dyn Fn(&Monomial) -> (i64, i64),
) -> LaurentPoly2 {
    let mut total = LaurentPoly2::zero();
    for (gens, (f, v)) in components {
        let k = cyclic_k(&minimalize(gens.clone()), weight);
        total = &total + &(&LaurentPoly2::monomial(*f, *v, 1) * &k);
    }
    total
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn cyclic_k(gens: &[Monomial], weight: &dyn Fn(&Monomial) -> (i64, i64)) -> LaurentPoly2 {
    if gens.is_empty() {
        return LaurentPoly2::one();
    }
    if gens.iter().any(|m| m.is_one()) {
        return LaurentPoly2::zero();
    }
    // pairwise coprime generators: product formula
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.gcd_is_one(b)));
    if coprime {
        return gens.iter().fold(LaurentPoly2::one(), |acc, m| {
            let (a, b) = weight(m);
            &acc * &(&LaurentPoly2::one() - &LaurentPoly2::monomial(a, b, 1))
        });
    }
    let (last, rest) = gens.split_last().unwrap();
    let colon: Vec<Monomial> = rest.iter().map(|m| last.quotient_of(&m.lcm(last))).collect();
    let (a, b) = weight(last);
    &cyclic_k(rest, weight) - &(&LaurentPoly2::monomial(a, b, 1) * &cyclic_k(&minimalize(colon), weight))
}
