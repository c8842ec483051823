//! Weyl algebra arithmetic in normal-ordered form.
//!
//! Every ring in this crate shares one dense exponent layout over `N` base
//! variables: slots `0..N` hold base exponents, `N..2N` derivative exponents,
//! then one slot each for the homogenizer `h`, the V-homogenizer `θ`, and an
//! auxiliary central variable used only for elimination. The [`Algebra`]
//! decides how `∂_i` and `x_i` commute:
//!
//! * `Commutative`: they commute (polynomial rings, symbols, toric ideals);
//! * `Weyl`: `∂_i x_i = x_i ∂_i + 1` (the ring D);
//! * `HomogenizedWeyl`: `∂_i x_i = x_i ∂_i + h` (the ring W, with central
//!   `h`, `θ`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::rational::Rational;
use crate::Error;

/// Base variables with names and their V-filtration role.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSpec {
    names: Vec<String>,
    t_type: Vec<bool>,
}

impl VarSpec {
    pub fn new(names: Vec<String>, t_type: Vec<bool>) -> Result<Self, Error> {
        if names.is_empty() {
            return Err(Error::InvalidVars("at least one variable is required".into()));
        }
        if names.len() != t_type.len() {
            return Err(Error::InvalidVars("t-block flags do not match variable count".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::InvalidVars(format!("bad variable name `{n}`")));
            }
            if !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidVars(format!("bad variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidVars(format!("duplicate variable `{n}`")));
            }
            if matches!(n.as_str(), "h" | "theta") {
                return Err(Error::InvalidVars(format!("`{n}` is reserved")));
            }
        }
        Ok(VarSpec { names, t_type })
    }

    /// Every variable t-type: the V-filtration along the origin.
    pub fn along_origin<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, Error> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let t = vec![true; names.len()];
        Self::new(names, t)
    }

    /// Only the listed variables are t-type.
    pub fn with_t_block<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        t_block: &[&str],
    ) -> Result<Self, Error> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for t in t_block {
            if !names.iter().any(|n| n == t) {
                return Err(Error::InvalidVars(format!("t-block names unknown variable `{t}`")));
            }
        }
        let t = names.iter().map(|n| t_block.contains(&n.as_str())).collect();
        Self::new(names, t)
    }

    /// Variables `x1..xn`, all t-type.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::along_origin((1..=n).map(|i| format!("{prefix}{i}"))).expect("valid names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_t(&self, i: usize) -> bool {
        self.t_type[i]
    }

    pub fn t_flags(&self) -> &[bool] {
        &self.t_type
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same names, different t-block.
    pub fn with_flags(&self, t_type: Vec<bool>) -> Result<Self, Error> {
        Self::new(self.names.clone(), t_type)
    }
}

/// Exponent vector in the shared slot layout.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub(crate) SmallVec<[u16; 16]>);

impl Monomial {
    pub fn one(slots: usize) -> Self {
        Monomial(SmallVec::from_elem(0, slots))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, slot: usize) -> u16 {
        self.0[slot]
    }

    pub fn set(&mut self, slot: usize, e: u16) {
        self.0[slot] = e;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Exponent-wise product (commutative product of the symbols).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff slot `i` has positive exponent (slots ≥ 64 fold).
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
    }
}

/// `(F-degree, V-degree)` of a monomial, generator or shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Bidegree {
    pub f: i64,
    pub v: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { f: 0, v: 0 };

    pub fn new(f: i64, v: i64) -> Self {
        Bidegree { f, v }
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.f + o.f, self.v + o.v)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.f - o.f, self.v - o.v)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    Commutative,
    Weyl,
    HomogenizedWeyl,
}

/// A central homogenizing variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Central {
    H,
    Theta,
    Aux,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    vars: VarSpec,
    algebra: Algebra,
}

impl Ring {
    pub fn new(vars: VarSpec, algebra: Algebra) -> Self {
        Ring { vars, algebra }
    }

    /// The plain Weyl algebra D.
    pub fn weyl(vars: VarSpec) -> Self {
        Self::new(vars, Algebra::Weyl)
    }

    /// The bihomogenized ring W.
    pub fn homogenized(vars: VarSpec) -> Self {
        Self::new(vars, Algebra::HomogenizedWeyl)
    }

    pub fn commutative(vars: VarSpec) -> Self {
        Self::new(vars, Algebra::Commutative)
    }

    pub fn vars(&self) -> &VarSpec {
        &self.vars
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn with_algebra(&self, algebra: Algebra) -> Ring {
        Ring::new(self.vars.clone(), algebra)
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn slots(&self) -> usize {
        2 * self.n() + 3
    }

    pub fn base(&self, i: usize) -> usize {
        i
    }

    pub fn deriv(&self, i: usize) -> usize {
        self.n() + i
    }

    pub fn central(&self, c: Central) -> usize {
        let n2 = 2 * self.n();
        match c {
            Central::H => n2,
            Central::Theta => n2 + 1,
            Central::Aux => n2 + 2,
        }
    }

    pub fn h(&self) -> usize {
        self.central(Central::H)
    }

    pub fn theta(&self) -> usize {
        self.central(Central::Theta)
    }

    pub fn aux(&self) -> usize {
        self.central(Central::Aux)
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.slots())
    }

    pub fn var_monomial(&self, slot: usize) -> Monomial {
        let mut m = self.one();
        m.0[slot] = 1;
        m
    }

    /// F-weights: 1 on derivatives and `h`, 0 elsewhere.
    pub fn f_weight(&self, slot: usize) -> i64 {
        let n = self.n();
        if (n..2 * n).contains(&slot) || slot == self.h() {
            1
        } else if slot == self.aux() {
            -1
        } else {
            0
        }
    }

    /// V-weights: −1 on t-type base variables, +1 on their derivatives and
    /// on `θ`, 0 elsewhere.
    pub fn v_weight(&self, slot: usize) -> i64 {
        let n = self.n();
        if slot < n {
            if self.vars.is_t(slot) {
                -1
            } else {
                0
            }
        } else if slot < 2 * n {
            if self.vars.is_t(slot - n) {
                1
            } else {
                0
            }
        } else if slot == self.theta() {
            1
        } else if slot == self.aux() {
            -1
        } else {
            0
        }
    }

    pub fn bidegree_of_monomial(&self, m: &Monomial) -> Bidegree {
        let mut b = Bidegree::ZERO;
        for (slot, &e) in m.0.iter().enumerate() {
            if e > 0 {
                b.f += self.f_weight(slot) * e as i64;
                b.v += self.v_weight(slot) * e as i64;
            }
        }
        b
    }

    /// Whether the variables in `a` and `b` pairwise commute.
    pub fn supports_commute(&self, a: u64, b: u64) -> bool {
        if self.algebra == Algebra::Commutative {
            return true;
        }
        let n = self.n();
        (0..n).all(|i| {
            let (x, d) = (1u64 << (i % 64), 1u64 << ((n + i) % 64));
            !((a & x != 0 && b & d != 0) || (a & d != 0 && b & x != 0))
        })
    }

    /// Normal-ordered expansion of the product of two monomials `a · b`.
    ///
    /// Per variable pair, `∂^p x^q = Σ_k k!·C(p,k)·C(q,k)·x^{q−k}∂^{p−k}`
    /// (times `h^k` in W). Coefficients are returned as integers.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> SmallVec<[(Monomial, i64); 4]> {
        let base = a.mul(b);
        let mut out: SmallVec<[(Monomial, i64); 4]> = SmallVec::new();
        out.push((base, 1));
        if self.algebra == Algebra::Commutative {
            return out;
        }
        let n = self.n();
        let h = self.h();
        let homog = self.algebra == Algebra::HomogenizedWeyl;
        for i in 0..n {
            let p = a.0[n + i];
            let q = b.0[i];
            if p == 0 || q == 0 {
                continue;
            }
            let kmax = p.min(q);
            let mut next: SmallVec<[(Monomial, i64); 4]> = SmallVec::new();
            for (m, c) in out.iter() {
                let mut coef: i64 = 1;
                for k in 0..=kmax {
                    if k > 0 {
                        coef = coef * ((p - k + 1) as i64) * ((q - k + 1) as i64) / (k as i64);
                    }
                    let mut mm = m.clone();
                    mm.0[i] -= k;
                    mm.0[n + i] -= k;
                    if homog {
                        mm.0[h] += k;
                    }
                    next.push((mm, c * coef));
                }
            }
            out = next;
        }
        out
    }
}

/// An element of D, W or a commutative polynomial ring, in normal form.
///
/// The map from normal-ordered monomials to nonzero coefficients is the
/// normal form itself.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeylElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::term(ring.one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut e = WeylElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn variable(ring: &Ring, slot: usize) -> Self {
        Self::term(ring.var_monomial(slot), Rational::ONE)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = WeylElement::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero();
        }
        WeylElement { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn multiply(&self, other: &WeylElement, ring: &Ring) -> WeylElement {
        let mut r = WeylElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (m, k) in ring.mul_monomials(a, b) {
                    r.add_term(m, &c * &Rational::from_int(k));
                }
            }
        }
        r
    }

    pub fn pow(&self, e: u32, ring: &Ring) -> WeylElement {
        let mut r = WeylElement::constant(ring, Rational::ONE);
        for _ in 0..e {
            r = r.multiply(self, ring);
        }
        r
    }

    pub fn ord_f(&self, ring: &Ring) -> Result<i64, Error> {
        self.terms
            .keys()
            .map(|m| ring.bidegree_of_monomial(m).f)
            .max()
            .ok_or(Error::ZeroElement)
    }

    pub fn ord_v(&self, ring: &Ring) -> Result<i64, Error> {
        self.terms
            .keys()
            .map(|m| ring.bidegree_of_monomial(m).v)
            .max()
            .ok_or(Error::ZeroElement)
    }

    /// The common bidegree when every term shares one.
    pub fn bidegree(&self, ring: &Ring) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|m| ring.bidegree_of_monomial(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_bihomogeneous(&self, ring: &Ring) -> bool {
        self.is_zero() || self.bidegree(ring).is_some()
    }

    /// Multiplies each monomial of bidegree `(f, v)` by
    /// `h^{ord_F − f} θ^{ord_V − v}`.
    pub fn bihomogenize(&self, ring: &Ring) -> Result<WeylElement, Error> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (h, th) = (ring.h(), ring.theta());
        if self.terms.keys().any(|m| m.exp(h) > 0 || m.exp(th) > 0) {
            return Err(Error::AlreadyHomogenized);
        }
        let top = Bidegree::new(self.ord_f(ring)?, self.ord_v(ring)?);
        Ok(self.homogenize_to(ring, top))
    }

    pub(crate) fn homogenize_to(&self, ring: &Ring, top: Bidegree) -> WeylElement {
        let (h, th) = (ring.h(), ring.theta());
        WeylElement::from_terms(self.terms.iter().map(|(m, c)| {
            let b = ring.bidegree_of_monomial(m);
            let mut mm = m.clone();
            mm.0[h] += (top.f - b.f) as u16;
            mm.0[th] += (top.v - b.v) as u16;
            (mm, c.clone())
        }))
    }

    /// Specializes `h = θ = 1` (and the auxiliary variable).
    pub fn dehomogenize(&self, ring: &Ring) -> WeylElement {
        WeylElement::from_terms(self.terms.iter().map(|(m, c)| {
            let mut mm = m.clone();
            mm.0[ring.h()] = 0;
            mm.0[ring.theta()] = 0;
            mm.0[ring.aux()] = 0;
            (mm, c.clone())
        }))
    }

    /// Terms in display order: descending degree, then descending
    /// exponents slot by slot.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| b.0 .0.cmp(&a.0 .0)));
        v
    }

    pub fn display<'a>(&'a self, ring: &'a Ring) -> DisplayElement<'a> {
        DisplayElement { elem: self, ring }
    }
}

/// Printable name of a slot.
pub fn slot_name(ring: &Ring, slot: usize) -> String {
    let n = ring.n();
    if slot < n {
        ring.vars().name(slot).to_string()
    } else if slot < 2 * n {
        format!("d{}", ring.vars().name(slot - n))
    } else if slot == ring.h() {
        "h".into()
    } else if slot == ring.theta() {
        "theta".into()
    } else {
        "s_".into()
    }
}

pub fn render_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (slot, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(slot_name(ring, slot)),
            _ => parts.push(format!("{}^{}", slot_name(ring, slot), e)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub struct DisplayElement<'a> {
    elem: &'a WeylElement,
    ring: &'a Ring,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.elem.display_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", render_monomial(self.ring, m))?;
            } else {
                write!(f, "{abs}*{}", render_monomial(self.ring, m))?;
            }
        }
        Ok(())
    }
}

/// `∂^b x^a` in W for a single variable pair, from the closed contraction
/// formula: `Σ_k k!·C(a,k)·C(b,k)·x^{a−k}∂^{b−k}h^k`.
pub fn normal_form_product(ring: &Ring, var: usize, b: u16, a: u16) -> WeylElement {
    let mut d = ring.one();
    d.set(ring.deriv(var), b);
    let mut x = ring.one();
    x.set(ring.base(var), a);
    WeylElement::from_terms(
        ring.mul_monomials(&d, &x)
            .into_iter()
            .map(|(m, c)| (m, Rational::from_int(c))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring_t(n: usize, alg: Algebra) -> Ring {
        Ring::new(VarSpec::indexed("t", n), alg)
    }

    fn mono(ring: &Ring, slots: &[(usize, u16)]) -> Monomial {
        let mut m = ring.one();
        for &(s, e) in slots {
            m.set(s, e);
        }
        m
    }

    fn el(ring: &Ring, terms: &[(i64, &[(usize, u16)])]) -> WeylElement {
        WeylElement::from_terms(terms.iter().map(|(c, m)| (mono(ring, m), Rational::from_int(*c))))
    }

    #[test]
    fn bidegrees_of_monomials() {
        let r = ring_t(2, Algebra::HomogenizedWeyl);
        assert_eq!(r.bidegree_of_monomial(&r.one()), Bidegree::ZERO);
        let t_dt = mono(&r, &[(0, 1), (2, 1)]);
        assert_eq!(r.bidegree_of_monomial(&t_dt), Bidegree::new(1, 0));
        let dt_theta = mono(&r, &[(2, 1), (r.theta(), 1)]);
        assert_eq!(r.bidegree_of_monomial(&dt_theta), Bidegree::new(1, 2));
    }

    #[test]
    fn orders_of_example_generators() {
        let r = ring_t(2, Algebra::Weyl);
        let a = el(&r, &[(1, &[(2, 1)]), (-1, &[(3, 1)])]);
        assert_eq!((a.ord_f(&r).unwrap(), a.ord_v(&r).unwrap()), (1, 1));
        let b = el(&r, &[(1, &[(0, 1), (2, 1)]), (1, &[(1, 1), (3, 1)])]);
        assert_eq!((b.ord_f(&r).unwrap(), b.ord_v(&r).unwrap()), (1, 0));
        let c = WeylElement::constant(&r, Rational::from_int(5));
        assert_eq!((c.ord_f(&r).unwrap(), c.ord_v(&r).unwrap()), (0, 0));
        assert!(WeylElement::zero().ord_f(&r).is_err());
    }

    #[test]
    fn fundamental_relation() {
        let d = ring_t(1, Algebra::Weyl);
        let dt = WeylElement::variable(&d, 1);
        let t = WeylElement::variable(&d, 0);
        assert_eq!(dt.multiply(&t, &d), el(&d, &[(1, &[(0, 1), (1, 1)]), (1, &[])]));

        let w = ring_t(1, Algebra::HomogenizedWeyl);
        let dt = WeylElement::variable(&w, 1);
        let t = WeylElement::variable(&w, 0);
        let p = dt.multiply(&t, &w);
        assert_eq!(p, el(&w, &[(1, &[(0, 1), (1, 1)]), (1, &[(w.h(), 1)])]));
        assert_eq!(p.bidegree(&w), Some(Bidegree::new(1, 0)));
    }

    /// Oracle: apply `∂x = x∂ + 1` one swap at a time.
    fn commute_by_swaps(b: u16, a: u16) -> BTreeMap<(u16, u16, u16), i64> {
        // word of symbols: true = ∂, false = x; normal order wants x first.
        let mut pending: Vec<(Vec<bool>, u16, i64)> =
            vec![((0..b).map(|_| true).chain((0..a).map(|_| false)).collect(), 0, 1)];
        let mut out = BTreeMap::new();
        while let Some((w, hpow, c)) = pending.pop() {
            match w.windows(2).position(|p| p[0] && !p[1]) {
                None => {
                    let xs = w.iter().filter(|s| !**s).count() as u16;
                    let ds = w.len() as u16 - xs;
                    *out.entry((xs, ds, hpow)).or_insert(0) += c;
                }
                Some(i) => {
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    pending.push((swapped, hpow, c));
                    let mut contracted = w.clone();
                    contracted.drain(i..i + 2);
                    pending.push((contracted, hpow + 1, c));
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn contraction_formula_matches_single_swaps() {
        let w = ring_t(1, Algebra::HomogenizedWeyl);
        for b in 0..5u16 {
            for a in 0..5u16 {
                let got = normal_form_product(&w, 0, b, a);
                let oracle = commute_by_swaps(b, a);
                let expect = WeylElement::from_terms(oracle.iter().map(|(&(x, d, hp), &c)| {
                    (mono(&w, &[(0, x), (1, d), (w.h(), hp)]), Rational::from_int(c))
                }));
                assert_eq!(got, expect, "b={b} a={a}");
            }
        }
        // frozen case: ∂²x² = x²∂² + 4x∂h + 2h²
        let p = normal_form_product(&w, 0, 2, 2);
        let e = el(&w, &[(1, &[(0, 2), (1, 2)]), (4, &[(0, 1), (1, 1), (w.h(), 1)]), (2, &[(w.h(), 2)])]);
        assert_eq!(p, e);
        assert_eq!(normal_form_product(&w, 0, 0, 3), el(&w, &[(1, &[(0, 3)])]));
    }

    #[test]
    fn weyl_square_product_and_dehomogenize() {
        let d = Ring::new(VarSpec::indexed("x", 1), Algebra::Weyl);
        let dd = el(&d, &[(1, &[(1, 2)])]);
        let xx = el(&d, &[(1, &[(0, 2)])]);
        let expect = el(&d, &[(1, &[(0, 2), (1, 2)]), (4, &[(0, 1), (1, 1)]), (2, &[])]);
        assert_eq!(dd.multiply(&xx, &d), expect);

        let w = d.with_algebra(Algebra::HomogenizedWeyl);
        let pw = el(&w, &[(1, &[(1, 2)])]).multiply(&el(&w, &[(1, &[(0, 2)])]), &w);
        assert_eq!(pw.dehomogenize(&w), expect);
        let h2t = el(&w, &[(1, &[(w.h(), 2), (w.theta(), 1)])]);
        assert_eq!(h2t.dehomogenize(&w), WeylElement::constant(&w, Rational::ONE));
    }

    #[test]
    fn bihomogenize_examples() {
        let w = ring_t(2, Algebra::HomogenizedWeyl);
        let euler = el(&w, &[(1, &[(0, 1), (2, 1)]), (1, &[(1, 1), (3, 1)])]);
        assert_eq!(euler.bihomogenize(&w).unwrap(), euler);

        let w1 = ring_t(1, Algebra::HomogenizedWeyl);
        let p = el(&w1, &[(1, &[(1, 1)]), (-1, &[])]);
        let hp = p.bihomogenize(&w1).unwrap();
        assert_eq!(hp, el(&w1, &[(1, &[(1, 1)]), (-1, &[(w1.h(), 1), (w1.theta(), 1)])]));
        assert_eq!(hp.dehomogenize(&w1), p);

        let wx = Ring::homogenized(VarSpec::with_t_block(["x"], &[]).unwrap());
        let q = el(&wx, &[(1, &[(0, 1), (1, 1)]), (-1, &[])]);
        assert_eq!(
            q.bihomogenize(&wx).unwrap(),
            el(&wx, &[(1, &[(0, 1), (1, 1)]), (-1, &[(wx.h(), 1)])])
        );
        assert!(WeylElement::zero().bihomogenize(&wx).is_err());
    }

    #[test]
    fn display_is_readable() {
        let w = ring_t(2, Algebra::Weyl);
        let a = el(&w, &[(1, &[(2, 1)]), (-1, &[(3, 1)])]);
        assert_eq!(a.display(&w).to_string(), "dt1 - dt2");
        let b = el(&w, &[(1, &[(0, 1), (2, 1)]), (3, &[(1, 1), (3, 1)]), (-2, &[])]);
        assert_eq!(b.display(&w).to_string(), "t1*dt1 + 3*t2*dt2 - 2");
    }

    fn arb_elem(alg: Algebra) -> impl Strategy<Value = WeylElement> {
        let ring = ring_t(3, alg);
        let slots = ring.slots();
        let homog = alg == Algebra::HomogenizedWeyl;
        prop::collection::vec(
            (prop::collection::vec(0u16..=3, 6), 0u16..=1, -3i64..=3),
            1..=4,
        )
        .prop_map(move |terms| {
            WeylElement::from_terms(terms.into_iter().map(|(e, hh, c)| {
                let mut m = Monomial::one(slots);
                // keep total degree ≤ 3 by clamping
                let mut budget = 3u16;
                for (i, x) in e.into_iter().enumerate() {
                    let take = x.min(budget);
                    budget -= take;
                    m.set(i, take);
                }
                if homog && budget > 0 {
                    m.set(6, hh);
                }
                (m, Rational::from_int(c))
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn ring_axioms_in_d(p in arb_elem(Algebra::Weyl), q in arb_elem(Algebra::Weyl), r in arb_elem(Algebra::Weyl)) {
            let ring = ring_t(3, Algebra::Weyl);
            prop_assert_eq!(p.multiply(&q, &ring).multiply(&r, &ring), p.multiply(&q.multiply(&r, &ring), &ring));
            prop_assert_eq!(p.multiply(&q.add(&r), &ring), p.multiply(&q, &ring).add(&p.multiply(&r, &ring)));
            prop_assert_eq!(q.add(&r).multiply(&p, &ring), q.multiply(&p, &ring).add(&r.multiply(&p, &ring)));
        }

        #[test]
        fn ring_axioms_in_w(p in arb_elem(Algebra::HomogenizedWeyl), q in arb_elem(Algebra::HomogenizedWeyl), r in arb_elem(Algebra::HomogenizedWeyl)) {
            let ring = ring_t(3, Algebra::HomogenizedWeyl);
            prop_assert_eq!(p.multiply(&q, &ring).multiply(&r, &ring), p.multiply(&q.multiply(&r, &ring), &ring));
            prop_assert_eq!(p.multiply(&q.add(&r), &ring), p.multiply(&q, &ring).add(&p.multiply(&r, &ring)));
            for (_, c) in p.multiply(&q, &ring).terms() {
                prop_assert!(c.is_normalized());
            }
        }

        #[test]
        fn orders_are_additive(p in arb_elem(Algebra::Weyl), q in arb_elem(Algebra::Weyl)) {
            let ring = ring_t(3, Algebra::Weyl);
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = p.multiply(&q, &ring);
            prop_assert_eq!(pq.ord_f(&ring).unwrap(), p.ord_f(&ring).unwrap() + q.ord_f(&ring).unwrap());
            prop_assert_eq!(pq.ord_v(&ring).unwrap(), p.ord_v(&ring).unwrap() + q.ord_v(&ring).unwrap());
        }

        #[test]
        fn bihomogenize_is_bihomogeneous(p in arb_elem(Algebra::Weyl)) {
            let w = ring_t(3, Algebra::HomogenizedWeyl);
            prop_assume!(!p.is_zero());
            let hp = p.bihomogenize(&w).unwrap();
            prop_assert!(hp.is_bihomogeneous(&w));
            prop_assert_eq!(hp.bidegree(&w).unwrap(), Bidegree::new(p.ord_f(&w).unwrap(), p.ord_v(&w).unwrap()));
            prop_assert_eq!(hp.dehomogenize(&w), p);
        }
    }

    #[test]
    fn commutators_of_generators() {
        for alg in [Algebra::Weyl, Algebra::HomogenizedWeyl] {
            let ring = ring_t(3, alg);
            let gens: Vec<usize> = (0..6).chain([ring.h(), ring.theta()]).collect();
            for &u in &gens {
                for &v in &gens {
                    let a = WeylElement::variable(&ring, u);
                    let b = WeylElement::variable(&ring, v);
                    let comm = a.multiply(&b, &ring).sub(&b.multiply(&a, &ring));
                    let unit = match alg {
                        Algebra::Weyl => WeylElement::constant(&ring, Rational::ONE),
                        _ => WeylElement::variable(&ring, ring.h()),
                    };
                    let expect = if u >= 3 && u < 6 && v == u - 3 {
                        unit
                    } else if v >= 3 && v < 6 && u == v - 3 {
                        unit.scale(&Rational::from_int(-1))
                    } else {
                        WeylElement::zero()
                    };
                    assert_eq!(comm, expect, "[{u},{v}] in {alg:?}");
                }
            }
        }
    }
}
