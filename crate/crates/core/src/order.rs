//! Monomial orders on the shared slot layout and module orders on free
//! modules, including Schreyer orders induced by a Gröbner basis.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::ring::{slot_name, Algebra, Monomial, Ring};
use crate::Error;

/// One comparison tier. Slot sequences list variables highest priority first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tier {
    Weight(Vec<i64>),
    Grevlex(Vec<usize>),
    Lex(Vec<usize>),
    /// Reverse lexicographic without a degree tier; only valid after a
    /// weight tier that is positive on the same slots.
    RevLex(Vec<usize>),
}

/// A composite monomial order. A final lexicographic comparison over all
/// slots makes every order total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    tiers: Vec<Tier>,
}

impl TermOrder {
    pub fn new(tiers: Vec<Tier>) -> Self {
        TermOrder { tiers }
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    /// Grevlex with priority derivatives > base variables > θ > h.
    pub fn default_for(ring: &Ring) -> Self {
        TermOrder::new(vec![Tier::Grevlex(default_priority(ring))])
    }

    /// Grevlex over an explicit slot sequence.
    pub fn grevlex(seq: Vec<usize>) -> Self {
        TermOrder::new(vec![Tier::Grevlex(seq)])
    }

    /// Puts a weight tier in front of the existing tiers.
    pub fn with_leading_weight(&self, w: Vec<i64>) -> Self {
        let mut tiers = vec![Tier::Weight(w)];
        tiers.extend(self.tiers.iter().cloned());
        TermOrder::new(tiers)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.compare_by(a.exps().len(), |s| a.exp(s) as u32, |s| b.exp(s) as u32)
    }

    /// Appends a sort key for the exponent vector `e`: keys compare
    /// lexicographically exactly as the order compares monomials.
    pub fn push_key(&self, slots: usize, e: impl Fn(usize) -> u32, out: &mut OrderKey) {
        for tier in &self.tiers {
            match tier {
                Tier::Weight(w) => out.push(w.iter().enumerate().map(|(s, &x)| e(s) as i64 * x).sum()),
                Tier::Grevlex(seq) => {
                    out.push(seq.iter().map(|&s| e(s) as i64).sum());
                    out.extend(seq.iter().rev().map(|&s| -(e(s) as i64)));
                }
                Tier::RevLex(seq) => out.extend(seq.iter().rev().map(|&s| -(e(s) as i64))),
                Tier::Lex(seq) => out.extend(seq.iter().map(|&s| e(s) as i64)),
            }
        }
        out.extend((0..slots).map(|s| e(s) as i64));
    }

    /// Compares `a·a2` with `b·b2` without forming the products.
    pub fn compare_products(&self, a: &Monomial, a2: &Monomial, b: &Monomial, b2: &Monomial) -> Ordering {
        self.compare_by(
            a.exps().len(),
            |s| (a.exp(s) + a2.exp(s)) as u32,
            |s| (b.exp(s) + b2.exp(s)) as u32,
        )
    }

    #[inline]
    fn compare_by(&self, slots: usize, a: impl Fn(usize) -> u32, b: impl Fn(usize) -> u32) -> Ordering {
        for tier in &self.tiers {
            let o = match tier {
                Tier::Weight(w) => {
                    let wa: i64 = w.iter().enumerate().map(|(s, &x)| a(s) as i64 * x).sum();
                    let wb: i64 = w.iter().enumerate().map(|(s, &x)| b(s) as i64 * x).sum();
                    wa.cmp(&wb)
                }
                Tier::Grevlex(seq) => {
                    let da: u32 = seq.iter().map(|&s| a(s)).sum();
                    let db: u32 = seq.iter().map(|&s| b(s)).sum();
                    da.cmp(&db).then_with(|| revlex(seq, &a, &b))
                }
                Tier::RevLex(seq) => revlex(seq, &a, &b),
                Tier::Lex(seq) => seq
                    .iter()
                    .map(|&s| a(s).cmp(&b(s)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal),
            };
            if o.is_ne() {
                return o;
            }
        }
        (0..slots).map(|s| a(s).cmp(&b(s))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }

    /// Checks well-foundedness and, in W, that `x_i ∂_i > h` so that leading
    /// monomials multiply.
    pub fn validate(&self, ring: &Ring) -> Result<(), Error> {
        let mut positive: Vec<bool> = vec![false; ring.slots()];
        for tier in &self.tiers {
            match tier {
                Tier::Weight(w) => {
                    if w.len() != ring.slots() {
                        return Err(Error::InvalidOrder(format!(
                            "weight vector has length {}, expected {}",
                            w.len(),
                            ring.slots()
                        )));
                    }
                    if w.iter().any(|&x| x < 0) {
                        return Err(Error::InvalidOrder(
                            "negative weights do not give a well-order".into(),
                        ));
                    }
                    for (p, &x) in positive.iter_mut().zip(w) {
                        *p |= x > 0;
                    }
                }
                Tier::RevLex(seq) => {
                    if let Some(&s) = seq.iter().find(|&&s| !positive[s]) {
                        return Err(Error::InvalidOrder(format!(
                            "reverse-lex tier over `{}` needs a positive weight tier first",
                            slot_name(ring, s)
                        )));
                    }
                }
                Tier::Grevlex(seq) | Tier::Lex(seq) => {
                    if let Some(&s) = seq.iter().find(|&&s| s >= ring.slots()) {
                        return Err(Error::InvalidOrder(format!("slot {s} out of range")));
                    }
                }
            }
        }
        if ring.algebra() == Algebra::HomogenizedWeyl {
            let h = ring.var_monomial(ring.h());
            for i in 0..ring.n() {
                let xd = ring.var_monomial(ring.base(i)).mul(&ring.var_monomial(ring.deriv(i)));
                if self.compare(&xd, &h) != Ordering::Greater {
                    return Err(Error::InvalidOrder(format!(
                        "{}*d{} must exceed h",
                        ring.vars().name(i),
                        ring.vars().name(i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses `grevlex`, `lex`, `grevlex(d1,d2,...)`, `weighted(w..)`
    /// joined by `;`. Six weights are read per block as
    /// `(x-type, t-type, dx-type, dt-type, h, theta)`; `2N+2` weights are
    /// read per variable (base, derivatives, h, theta).
    pub fn parse(spec: &str, ring: &Ring) -> Result<Self, Error> {
        let mut tiers = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (head, args) = match part.split_once('(') {
                Some((h, rest)) => {
                    let inner = rest
                        .strip_suffix(')')
                        .ok_or_else(|| Error::InvalidOrder(format!("unclosed `(` in `{part}`")))?;
                    (h.trim(), Some(inner))
                }
                None => (part, None),
            };
            let names = |args: Option<&str>| -> Result<Vec<usize>, Error> {
                let mut seq = Vec::new();
                if let Some(a) = args {
                    for name in a.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let s = slot_by_name(ring, name)
                            .ok_or_else(|| Error::InvalidOrder(format!("unknown variable `{name}`")))?;
                        if seq.contains(&s) {
                            return Err(Error::InvalidOrder(format!("`{name}` listed twice")));
                        }
                        seq.push(s);
                    }
                }
                for s in default_priority(ring) {
                    if !seq.contains(&s) {
                        seq.push(s);
                    }
                }
                Ok(seq)
            };
            let tier = match head {
                "grevlex" => Tier::Grevlex(names(args)?),
                "lex" => Tier::Lex(names(args)?),
                "weighted" | "weight" => {
                    let a = args.ok_or_else(|| Error::InvalidOrder("weighted needs a vector".into()))?;
                    let w: Vec<i64> = a
                        .split(',')
                        .map(|s| s.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| Error::InvalidOrder(format!("bad weight vector `{a}`")))?;
                    Tier::Weight(expand_weights(ring, &w)?)
                }
                other => return Err(Error::InvalidOrder(format!("unknown order `{other}`"))),
            };
            tiers.push(tier);
        }
        if tiers.is_empty() {
            return Err(Error::InvalidOrder("empty order".into()));
        }
        let o = TermOrder::new(tiers);
        o.validate(ring)?;
        Ok(o)
    }

    pub fn describe(&self, ring: &Ring) -> String {
        let seq = |s: &[usize]| s.iter().map(|&i| slot_name(ring, i)).collect::<Vec<_>>().join(",");
        self.tiers
            .iter()
            .map(|t| match t {
                Tier::Weight(w) => format!(
                    "weighted({})",
                    w[..ring.slots() - 1].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                ),
                Tier::Grevlex(s) => format!("grevlex({})", seq(s)),
                Tier::Lex(s) => format!("lex({})", seq(s)),
                Tier::RevLex(s) => format!("revlex({})", seq(s)),
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn revlex(seq: &[usize], a: &impl Fn(usize) -> u32, b: &impl Fn(usize) -> u32) -> Ordering {
    seq.iter()
        .rev()
        .map(|&s| b(s).cmp(&a(s)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Derivatives, then base variables, then θ, then h.
pub fn default_priority(ring: &Ring) -> Vec<usize> {
    let n = ring.n();
    let mut seq: Vec<usize> = (0..n).map(|i| ring.deriv(i)).collect();
    seq.extend((0..n).map(|i| ring.base(i)));
    seq.push(ring.theta());
    seq.push(ring.h());
    seq
}

pub fn slot_by_name(ring: &Ring, name: &str) -> Option<usize> {
    match name {
        "h" => return Some(ring.h()),
        "theta" => return Some(ring.theta()),
        _ => {}
    }
    if let Some(i) = ring.vars().index_of(name) {
        return Some(ring.base(i));
    }
    let rest = name.strip_prefix('d')?;
    if let Some(i) = ring.vars().index_of(rest) {
        return Some(ring.deriv(i));
    }
    // `d<k>` with k a 1-based index, when no variable is literally named k
    let k: usize = rest.parse().ok()?;
    (1..=ring.n()).contains(&k).then(|| ring.deriv(k - 1))
}

fn expand_weights(ring: &Ring, w: &[i64]) -> Result<Vec<i64>, Error> {
    let n = ring.n();
    let mut out = vec![0; ring.slots()];
    if w.len() == 6 && 2 * n + 2 != 6 {
        for i in 0..n {
            let t = ring.vars().is_t(i) as usize;
            out[ring.base(i)] = w[t];
            out[ring.deriv(i)] = w[2 + t];
        }
        out[ring.h()] = w[4];
        out[ring.theta()] = w[5];
    } else if w.len() == 2 * n + 2 {
        out[..2 * n + 2].copy_from_slice(w);
    } else {
        return Err(Error::InvalidOrder(format!(
            "weight vector needs 6 block weights or {} per-variable weights",
            2 * n + 2
        )));
    }
    Ok(out)
}

/// Lexicographically ordered key of a monomial or module term.
pub type OrderKey = SmallVec<[i64; 32]>;

/// How components are compared in a free module.
#[derive(Clone, Debug)]
pub enum ComponentRule {
    /// Term first, ties by position (lower index is greater).
    TermOverPosition,
    /// Position first by the priority list (earlier is greater), then term.
    PositionOverTerm(Vec<usize>),
    Schreyer(Arc<SchreyerFrame>),
}

/// Flattened Schreyer data: each generator's lead pushed all the way down to
/// the level-0 module, plus the component path used for tie-breaks.
#[derive(Clone, Debug)]
pub struct SchreyerFrame {
    base: ModuleOrder,
    total: Vec<Monomial>,
    path: Vec<SmallVec<[u32; 8]>>,
}

#[derive(Clone, Debug)]
pub struct ModuleOrder {
    term: Arc<TermOrder>,
    rule: ComponentRule,
}

impl ModuleOrder {
    pub fn new(term: TermOrder, rule: ComponentRule) -> Self {
        ModuleOrder { term: Arc::new(term), rule }
    }

    pub fn top(term: TermOrder) -> Self {
        Self::new(term, ComponentRule::TermOverPosition)
    }

    pub fn pot(term: TermOrder, priority: Vec<usize>) -> Self {
        Self::new(term, ComponentRule::PositionOverTerm(priority))
    }

    pub fn term_order(&self) -> &TermOrder {
        &self.term
    }

    pub fn rule(&self) -> &ComponentRule {
        &self.rule
    }

    pub fn is_schreyer(&self) -> bool {
        matches!(self.rule, ComponentRule::Schreyer(_))
    }

    pub fn compare(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        match &self.rule {
            ComponentRule::TermOverPosition => {
                self.term.compare(a.0, b.0).then_with(|| b.1.cmp(&a.1))
            }
            ComponentRule::PositionOverTerm(prio) => {
                let rank = |c: usize| prio.iter().position(|&p| p == c).unwrap_or(prio.len() + c);
                rank(b.1).cmp(&rank(a.1)).then_with(|| self.term.compare(a.0, b.0))
            }
            ComponentRule::Schreyer(fr) => {
                let (pa, pb) = (&fr.path[a.1], &fr.path[b.1]);
                fr.base
                    .compare_products((a.0, &fr.total[a.1], pa[0] as usize), (b.0, &fr.total[b.1], pb[0] as usize))
                    .then_with(|| {
                        pa[1..]
                            .iter()
                            .zip(&pb[1..])
                            .map(|(x, y)| y.cmp(x))
                            .find(|o| o.is_ne())
                            .unwrap_or(Ordering::Equal)
                    })
                    .then_with(|| b.1.cmp(&a.1))
            }
        }
    }

    /// Sort key of the term `(m, c)`; larger keys are larger terms.
    pub fn key(&self, m: &Monomial, c: usize) -> OrderKey {
        let mut out = OrderKey::new();
        match &self.rule {
            ComponentRule::Schreyer(fr) => {
                let t = &fr.total[c];
                let p = &fr.path[c];
                fr.base.push_key_product(m, t, p[0] as usize, &mut out);
                out.extend(p[1..].iter().map(|&x| -(x as i64)));
                out.push(-(c as i64));
            }
            _ => self.push_key_product(m, &Monomial::one(m.exps().len()), c, &mut out),
        }
        out
    }

    fn push_key_product(&self, a: &Monomial, b: &Monomial, c: usize, out: &mut OrderKey) {
        let slots = a.exps().len();
        let e = |s: usize| (a.exp(s) + b.exp(s)) as u32;
        match &self.rule {
            ComponentRule::TermOverPosition => {
                self.term.push_key(slots, e, out);
                out.push(-(c as i64));
            }
            ComponentRule::PositionOverTerm(prio) => {
                let rank = prio.iter().position(|&p| p == c).unwrap_or(prio.len() + c);
                out.push(-(rank as i64));
                self.term.push_key(slots, e, out);
            }
            ComponentRule::Schreyer(_) => unreachable!("Schreyer frames are flattened"),
        }
    }

    /// Compares `(a·a2, ca)` with `(b·b2, cb)` in a non-Schreyer order.
    fn compare_products(&self, a: (&Monomial, &Monomial, usize), b: (&Monomial, &Monomial, usize)) -> Ordering {
        let term = || self.term.compare_products(a.0, a.1, b.0, b.1);
        match &self.rule {
            ComponentRule::TermOverPosition => term().then_with(|| b.2.cmp(&a.2)),
            ComponentRule::PositionOverTerm(prio) => {
                let rank = |c: usize| prio.iter().position(|&p| p == c).unwrap_or(prio.len() + c);
                rank(b.2).cmp(&rank(a.2)).then_with(term)
            }
            ComponentRule::Schreyer(_) => unreachable!("Schreyer frames are flattened"),
        }
    }

    /// The order on a new free module with one generator per lead, where
    /// `(m, i) < (m', j)` iff `m·lead_i < m'·lead_j`, ties going to the
    /// lower index.
    pub fn schreyer(leads: &[(Monomial, usize)], base: &ModuleOrder) -> ModuleOrder {
        let (root, total, path) = match &base.rule {
            ComponentRule::Schreyer(fr) => {
                let total = leads.iter().map(|(m, c)| m.mul(&fr.total[*c])).collect();
                let path = leads
                    .iter()
                    .map(|(_, c)| {
                        let mut p = fr.path[*c].clone();
                        p.push(*c as u32);
                        p
                    })
                    .collect();
                (fr.base.clone(), total, path)
            }
            _ => (
                base.clone(),
                leads.iter().map(|(m, _)| m.clone()).collect(),
                leads.iter().map(|(_, c)| SmallVec::from_elem(*c as u32, 1)).collect(),
            ),
        };
        ModuleOrder {
            term: base.term.clone(),
            rule: ComponentRule::Schreyer(Arc::new(SchreyerFrame { base: root, total, path })),
        }
    }
}

impl fmt::Display for ModuleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            ComponentRule::TermOverPosition => write!(f, "term-over-position"),
            ComponentRule::PositionOverTerm(_) => write!(f, "position-over-term"),
            ComponentRule::Schreyer(fr) => write!(f, "schreyer[{} generators]", fr.total.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VarSpec;
    use proptest::prelude::*;

    fn w_ring(n: usize) -> Ring {
        Ring::homogenized(VarSpec::indexed("x", n))
    }

    fn m(ring: &Ring, e: &[(usize, u16)]) -> Monomial {
        let mut x = ring.one();
        for &(s, k) in e {
            x.set(s, k);
        }
        x
    }

    #[test]
    fn grevlex_basics() {
        let r = Ring::commutative(VarSpec::indexed("x", 2));
        let o = TermOrder::grevlex(vec![0, 1]);
        assert_eq!(o.compare(&m(&r, &[(0, 1), (1, 1)]), &m(&r, &[(0, 2)])), Ordering::Less);
        assert_eq!(o.compare(&r.one(), &m(&r, &[(1, 1)])), Ordering::Less);
    }

    #[test]
    fn weight_first_orders_by_f_degree() {
        let r = Ring::homogenized(VarSpec::indexed("t", 1));
        let o = TermOrder::parse("weighted(0,0,1,1,1,0);grevlex", &r).unwrap();
        // t^2 has F-weight 0, dt has 1
        assert_eq!(o.compare(&m(&r, &[(0, 2)]), &m(&r, &[(1, 1)])), Ordering::Less);
    }

    #[test]
    fn parse_and_reject() {
        let r = w_ring(2);
        assert!(TermOrder::parse("grevlex", &r).is_ok());
        assert!(TermOrder::parse("grevlex(dx2, dx1)", &r).is_ok());
        assert!(TermOrder::parse("grevlex(d2,d1)", &r).is_ok());
        assert!(TermOrder::parse("grevlex(zz)", &r).is_err());
        assert!(TermOrder::parse("weighted(1,2)", &r).is_err());
        assert!(TermOrder::parse("weighted(0,-1,0,1,0,1);grevlex", &r).is_err());
        // h before everything breaks x*dx > h
        assert!(TermOrder::parse("lex(h)", &r).is_err());
        assert!(TermOrder::parse("", &r).is_err());
    }

    #[test]
    fn schreyer_examples() {
        let r = Ring::commutative(VarSpec::indexed("x", 2));
        let base = ModuleOrder::top(TermOrder::grevlex(vec![r.deriv(0), r.deriv(1)]));
        let one = r.one();
        // trivial leads reduce to base order with position tiebreak
        let s = ModuleOrder::schreyer(&[(one.clone(), 0), (one.clone(), 0)], &base);
        let x = m(&r, &[(r.deriv(0), 1)]);
        assert_eq!(s.compare((&x, 1), (&one, 0)), Ordering::Greater);
        assert_eq!(s.compare((&one, 0), (&one, 1)), Ordering::Greater);

        let d1 = m(&r, &[(r.deriv(0), 1)]);
        let d2 = m(&r, &[(r.deriv(1), 1)]);
        let s = ModuleOrder::schreyer(&[(d1.clone(), 0), (d2.clone(), 0)], &base);
        assert_eq!(s.compare((&one, 0), (&one, 1)), Ordering::Greater);
        // equal products d1*d2: lower index wins
        assert_eq!(s.compare((&d2, 0), (&d1, 1)), Ordering::Greater);
        assert_eq!(s.compare((&d1, 1), (&d2, 0)), Ordering::Less);
    }

    #[test]
    fn nested_schreyer_matches_recursive_definition() {
        let r = Ring::commutative(VarSpec::indexed("x", 2));
        let base = ModuleOrder::top(TermOrder::grevlex(vec![r.deriv(0), r.deriv(1)]));
        let d1 = m(&r, &[(r.deriv(0), 1)]);
        let d2 = m(&r, &[(r.deriv(1), 1)]);
        let lvl1 = ModuleOrder::schreyer(&[(d1.clone(), 0), (d2.clone(), 1), (d2.clone(), 0)], &base);
        let leads2 = vec![(d2.clone(), 0), (d1.clone(), 2), (r.one(), 1)];
        let lvl2 = ModuleOrder::schreyer(&leads2, &lvl1);
        let monos: Vec<Monomial> = (0..3u16)
            .flat_map(|a| (0..3u16).map(move |b| (a, b)))
            .map(|(a, b)| m(&r, &[(r.deriv(0), a), (r.deriv(1), b)]))
            .collect();
        for a in &monos {
            for b in &monos {
                for i in 0..3 {
                    for j in 0..3 {
                        let expect = lvl1
                            .compare((&a.mul(&leads2[i].0), leads2[i].1), (&b.mul(&leads2[j].0), leads2[j].1))
                            .then_with(|| j.cmp(&i));
                        assert_eq!(lvl2.compare((a, i), (b, j)), expect);
                        assert_eq!(lvl2.key(a, i).cmp(&lvl2.key(b, j)), expect);
                    }
                }
            }
        }
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..=5, 6).prop_map(|v| {
            let mut e = v;
            e.push(0);
            Monomial::from_exps(&e)
        })
    }

    fn orders(r: &Ring) -> Vec<TermOrder> {
        vec![
            TermOrder::default_for(r),
            TermOrder::parse("weighted(0,0,1,1,1,0);grevlex", r).unwrap(),
            TermOrder::parse("grevlex(d2,d1,x2,x1,theta,h)", r).unwrap(),
            TermOrder::parse("lex", r).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn total_antisymmetric_transitive(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            let r = w_ring(2);
            for o in orders(&r) {
                let ab = o.compare(&a, &b);
                prop_assert_eq!(ab, o.compare(&b, &a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                if ab != Ordering::Greater && o.compare(&b, &c) != Ordering::Greater {
                    prop_assert_ne!(o.compare(&a, &c), Ordering::Greater);
                }
            }
        }

        #[test]
        fn multiplicative_with_minimum_one(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            let r = w_ring(2);
            for o in orders(&r) {
                prop_assert_eq!(o.compare(&a.mul(&c), &b.mul(&c)), o.compare(&a, &b));
                prop_assert_ne!(o.compare(&r.one(), &a), Ordering::Greater);
            }
        }

        #[test]
        fn keys_sort_like_the_order(a in arb_mono(), b in arb_mono(), i in 0usize..3, j in 0usize..3) {
            let r = w_ring(2);
            for o in orders(&r) {
                for mo in [ModuleOrder::top(o.clone()), ModuleOrder::pot(o.clone(), vec![2, 0])] {
                    prop_assert_eq!(mo.key(&a, i).cmp(&mo.key(&b, j)), mo.compare((&a, i), (&b, j)));
                }
            }
        }
    }
}
