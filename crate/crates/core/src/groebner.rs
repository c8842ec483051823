//! Left Gröbner bases over D, W and commutative polynomial rings: reduction,
//! Buchberger's algorithm, Schreyer syzygies and saturation by the central
//! homogenizers.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::order::{ComponentRule, ModuleOrder, OrderKey, TermOrder, Tier};
use crate::rational::Rational;
use crate::ring::{Algebra, Bidegree, Central, Monomial, Ring, WeylElement};
use crate::Error;

/// Guard for the saturation loops.
pub const MAX_SATURATION_ROUNDS: usize = 50;

/// A free left module `R^rank` with bidegree shifts and a module order.
#[derive(Clone, Debug)]
pub struct FreeModule {
    ring: Ring,
    shifts: Vec<Bidegree>,
    order: ModuleOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub mon: Monomial,
    pub comp: usize,
    pub coef: Rational,
}

/// Element of a free module; terms sorted strictly descending in the
/// module order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeElement {
    terms: Vec<Term>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Entry `comp` as a ring element.
    pub fn entry(&self, comp: usize) -> WeylElement {
        WeylElement::from_terms(
            self.terms
                .iter()
                .filter(|t| t.comp == comp)
                .map(|t| (t.mon.clone(), t.coef.clone())),
        )
    }

    pub fn to_vector(&self, rank: usize) -> Vec<WeylElement> {
        (0..rank).map(|c| self.entry(c)).collect()
    }

    pub fn components(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.terms.iter().map(|t| t.comp).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

impl FreeModule {
    pub fn new(ring: Ring, shifts: Vec<Bidegree>, order: ModuleOrder) -> Self {
        FreeModule { ring, shifts, order }
    }

    /// Rank `r`, zero shifts, term-over-position with the given term order.
    pub fn with_rank(ring: Ring, rank: usize, term: TermOrder) -> Self {
        FreeModule::new(ring, vec![Bidegree::ZERO; rank], ModuleOrder::top(term))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[Bidegree] {
        &self.shifts
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn with_order(&self, order: ModuleOrder) -> FreeModule {
        FreeModule::new(self.ring.clone(), self.shifts.clone(), order)
    }

    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.order.compare((&a.mon, a.comp), (&b.mon, b.comp))
    }

    /// Sorts descending and merges duplicate `(monomial, component)` pairs.
    pub fn normalize(&self, mut terms: Vec<Term>) -> FreeElement {
        terms.retain(|t| !t.coef.is_zero());
        terms.sort_by_cached_key(|t| std::cmp::Reverse(self.order.key(&t.mon, t.comp)));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mon == t.mon && last.comp == t.comp => {
                    last.coef = &last.coef + &t.coef;
                    if last.coef.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        FreeElement { terms: out }
    }

    pub fn from_weyl(&self, comp: usize, e: &WeylElement) -> FreeElement {
        self.normalize(
            e.terms()
                .map(|(m, c)| Term { mon: m.clone(), comp, coef: c.clone() })
                .collect(),
        )
    }

    pub fn from_vector(&self, v: &[WeylElement]) -> FreeElement {
        self.normalize(
            v.iter()
                .enumerate()
                .flat_map(|(comp, e)| {
                    e.terms().map(move |(m, c)| Term { mon: m.clone(), comp, coef: c.clone() })
                })
                .collect(),
        )
    }

    pub fn term_bidegree(&self, t: &Term) -> Bidegree {
        self.ring.bidegree_of_monomial(&t.mon) + self.shifts[t.comp]
    }

    /// The common bidegree of all terms, if there is one.
    pub fn bidegree(&self, f: &FreeElement) -> Option<Bidegree> {
        let mut it = f.terms.iter().map(|t| self.term_bidegree(t));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_bihomogeneous(&self, f: &FreeElement) -> bool {
        f.is_zero() || self.bidegree(f).is_some()
    }

    pub fn scale(&self, f: &FreeElement, c: &Rational) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement {
            terms: f
                .terms
                .iter()
                .map(|t| Term { mon: t.mon.clone(), comp: t.comp, coef: &t.coef * c })
                .collect(),
        }
    }

    /// `c · m · f` with `m` a monomial acting on the left.
    pub fn mul_term(&self, c: &Rational, m: &Monomial, f: &FreeElement) -> FreeElement {
        let commuting = self.ring.algebra() == Algebra::Commutative || {
            let n = self.ring.n();
            let md = (0..n).any(|i| m.exp(n + i) > 0);
            !md || f.terms.iter().all(|t| (0..n).all(|i| m.exp(n + i) == 0 || t.mon.exp(i) == 0))
        };
        if commuting {
            // multiplicative order: sortedness is preserved
            return FreeElement {
                terms: f
                    .terms
                    .iter()
                    .map(|t| Term { mon: m.mul(&t.mon), comp: t.comp, coef: &t.coef * c })
                    .collect(),
            };
        }
        let mut out = Vec::with_capacity(f.terms.len() * 2);
        for t in &f.terms {
            let tc = &t.coef * c;
            for (mm, k) in self.ring.mul_monomials(m, &t.mon) {
                out.push(Term { mon: mm, comp: t.comp, coef: &tc * &Rational::from_int(k) });
            }
        }
        self.normalize(out)
    }

    /// `p · f` for a ring element `p`.
    pub fn left_mul(&self, p: &WeylElement, f: &FreeElement) -> FreeElement {
        let mut acc = FreeElement::zero();
        for (m, c) in p.terms() {
            acc = self.add(&acc, &self.mul_term(c, m, f));
        }
        acc
    }

    pub fn add(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        self.merge(&a.terms, &b.terms, &Rational::ONE)
    }

    pub fn sub(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        self.merge(&a.terms, &b.terms, &Rational::from_int(-1))
    }

    /// `a + s·b` for sorted term slices.
    fn merge(&self, a: &[Term], b: &[Term], s: &Rational) -> FreeElement {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.cmp_terms(&a[i], &b[j]) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { mon: b[j].mon.clone(), comp: b[j].comp, coef: &b[j].coef * s });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].coef + &(&b[j].coef * s);
                    if !c.is_zero() {
                        out.push(Term { mon: a[i].mon.clone(), comp: a[i].comp, coef: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|t| Term { mon: t.mon.clone(), comp: t.comp, coef: &t.coef * s }));
        FreeElement { terms: out }
    }

    pub fn make_monic(&self, f: &FreeElement) -> FreeElement {
        match f.lead() {
            Some(t) if !t.coef.is_one() => self.scale(f, &t.coef.recip()),
            _ => f.clone(),
        }
    }

    /// Re-sorts an element under this module's order.
    pub fn adopt(&self, f: &FreeElement) -> FreeElement {
        self.normalize(f.terms.clone())
    }
}

/// Lead data of a basis for fast divisor lookup.
struct ReducerIndex {
    leads: Vec<(Monomial, usize, u64)>,
}

impl ReducerIndex {
    fn new(basis: &[FreeElement]) -> Self {
        ReducerIndex {
            leads: basis
                .iter()
                .map(|g| {
                    let t = g.lead().expect("nonzero basis element");
                    (t.mon.clone(), t.comp, t.mon.support_mask())
                })
                .collect(),
        }
    }

    fn push(&mut self, g: &FreeElement) {
        let t = g.lead().expect("nonzero basis element");
        self.leads.push((t.mon.clone(), t.comp, t.mon.support_mask()));
    }

    /// Lowest-index basis element whose lead divides `t`.
    fn find(&self, t: &Term, skip: Option<usize>) -> Option<usize> {
        let mask = t.mon.support_mask();
        self.leads.iter().enumerate().position(|(k, (m, c, lm))| {
            Some(k) != skip && *c == t.comp && lm & !mask == 0 && m.divides(&t.mon)
        })
    }
}

/// One recorded division step: `coef · mon · basis[index]`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub index: usize,
    pub mon: Monomial,
    pub coef: Rational,
}

/// Division of `f` by `basis`. With `full`, every reducible term is
/// reduced (normal form); otherwise only leading terms. Returns the
/// remainder and, when `record`, the quotient terms.
fn divide(
    module: &FreeModule,
    f: &FreeElement,
    basis: &[FreeElement],
    index: &ReducerIndex,
    full: bool,
    record: bool,
    skip: Option<usize>,
) -> (FreeElement, Vec<Quotient>) {
    // pending terms keyed by the module order; the largest is reduced first
    let mut rest: BTreeMap<OrderKey, Term> =
        f.terms.iter().map(|t| (module.order.key(&t.mon, t.comp), t.clone())).collect();
    let mut done: Vec<Term> = Vec::new();
    let mut quots = Vec::new();
    while let Some((_, t)) = rest.pop_last() {
        let Some(k) = index.find(&t, skip) else {
            done.push(t);
            if !full {
                done.extend(rest.into_values().rev());
                break;
            }
            continue;
        };
        let g = &basis[k];
        let lg = g.lead().unwrap();
        let q = lg.mon.quotient_of(&t.mon);
        let c = &t.coef / &lg.coef;
        let prod = module.mul_term(&c, &q, g);
        debug_assert_eq!(prod.terms[0].mon, t.mon);
        for p in prod.terms.into_iter().skip(1) {
            match rest.entry(module.order.key(&p.mon, p.comp)) {
                Entry::Occupied(mut e) => {
                    let sum = &e.get().coef - &p.coef;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        e.get_mut().coef = sum;
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(Term { coef: -p.coef, ..p });
                }
            }
        }
        if record {
            quots.push(Quotient { index: k, mon: q, coef: c });
        }
    }
    (FreeElement { terms: done }, quots)
}

/// A left Gröbner basis of a submodule of a free module.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    module: Arc<FreeModule>,
    elems: Vec<FreeElement>,
    reduced: bool,
}

impl GroebnerBasis {
    /// Wraps elements known to form a Gröbner basis (e.g. Schreyer
    /// syzygies). Not reduced.
    pub fn from_trusted(module: Arc<FreeModule>, elems: Vec<FreeElement>) -> Self {
        GroebnerBasis { module, elems, reduced: false }
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn module_arc(&self) -> &Arc<FreeModule> {
        &self.module
    }

    pub fn elements(&self) -> &[FreeElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn leads(&self) -> Vec<(Monomial, usize)> {
        self.elems
            .iter()
            .map(|g| {
                let t = g.lead().unwrap();
                (t.mon.clone(), t.comp)
            })
            .collect()
    }

    /// Whether the basis generates the whole free module.
    pub fn is_unit(&self) -> bool {
        let r = self.module.rank();
        (0..r).all(|c| self.leads().iter().any(|(m, k)| *k == c && m.is_one()))
    }

    /// Bidegree of each element (from its lead term).
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        self.elems
            .iter()
            .map(|g| self.module.term_bidegree(g.lead().unwrap()))
            .collect()
    }

    /// Full normal form.
    pub fn reduce(&self, f: &FreeElement) -> FreeElement {
        let idx = ReducerIndex::new(&self.elems);
        divide(&self.module, f, &self.elems, &idx, true, false, None).0
    }

    /// Normal form plus the quotients: `f = Σ coef·mon·g_index + remainder`.
    pub fn reduce_with_quotients(&self, f: &FreeElement) -> (FreeElement, Vec<Quotient>) {
        let idx = ReducerIndex::new(&self.elems);
        divide(&self.module, f, &self.elems, &idx, true, true, None)
    }

    pub fn is_member(&self, f: &FreeElement) -> bool {
        self.reduce(f).is_zero()
    }

    /// S-element of the pair `(i, j)`, or `None` when the leads sit in
    /// different components.
    pub fn s_element(&self, i: usize, j: usize) -> Option<FreeElement> {
        s_pair(&self.module, &self.elems[i], &self.elems[j])
    }

    /// Re-checks that every S-pair reduces to zero. Returns the first
    /// failing pair.
    pub fn certify(&self) -> Result<(), (usize, usize)> {
        let idx = ReducerIndex::new(&self.elems);
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if let Some(s) = self.s_element(i, j) {
                    let (r, _) = divide(&self.module, &s, &self.elems, &idx, false, false, None);
                    if !r.is_zero() {
                        return Err((i, j));
                    }
                }
            }
        }
        Ok(())
    }
}

fn s_pair(module: &FreeModule, f: &FreeElement, g: &FreeElement) -> Option<FreeElement> {
    let (lf, lg) = (f.lead()?, g.lead()?);
    if lf.comp != lg.comp {
        return None;
    }
    let l = lf.mon.lcm(&lg.mon);
    let a = module.mul_term(&lg.coef, &lf.mon.quotient_of(&l), f);
    let b = module.mul_term(&lf.coef, &lg.mon.quotient_of(&l), g);
    Some(module.sub(&a, &b))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: usize,
}

/// Weight tiers with negative entries, which are only admissible on input
/// homogeneous for them.
fn split_negative_tiers(order: &TermOrder) -> (Vec<Vec<i64>>, TermOrder) {
    let mut neg = Vec::new();
    let mut keep = Vec::new();
    for t in order.tiers() {
        match t {
            Tier::Weight(w) if w.iter().any(|&x| x < 0) => neg.push(w.clone()),
            other => keep.push(other.clone()),
        }
    }
    (neg, TermOrder::new(keep))
}

/// Buchberger's algorithm with the normal selection strategy. The result is
/// reduced: leads pairwise indivisible, tails in normal form, monic, sorted
/// by ascending lead.
pub fn buchberger(module: Arc<FreeModule>, gens: &[FreeElement]) -> Result<GroebnerBasis, Error> {
    let ring = module.ring().clone();
    let (neg, rest) = split_negative_tiers(module.order().term_order());
    rest.validate(&ring)?;
    for w in &neg {
        for g in gens {
            let mut ws = g.terms.iter().map(|t| {
                t.mon.exps().iter().zip(w).map(|(&e, &x)| e as i64 * x).sum::<i64>()
            });
            let first = ws.next();
            if ws.any(|x| Some(x) != first) {
                return Err(Error::NotHomogeneous(
                    "negative weight tier needs homogeneous generators".into(),
                ));
            }
        }
    }

    let mut basis: Vec<FreeElement> = Vec::new();
    let mut index = ReducerIndex { leads: Vec::new() };
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let product_ok = module.rank() == 1;

    let mut queue: Vec<FreeElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    // feed inputs smallest lead first
    queue.sort_by(|a, b| module.cmp_terms(&b.terms[0], &a.terms[0]));
    let mut inputs = queue.into_iter();

    loop {
        // pick the next element to insert: pending input or S-pair remainder
        let next = if let Some(g) = inputs.next() {
            Some(g)
        } else {
            let mut found = None;
            while !pairs.is_empty() {
                let best = (0..pairs.len())
                    .min_by(|&a, &b| {
                        module
                            .order()
                            .compare((&pairs[a].lcm, pairs[a].comp), (&pairs[b].lcm, pairs[b].comp))
                            .then_with(|| (pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
                    })
                    .unwrap();
                let p = pairs.swap_remove(best);
                pending.remove(&(p.i, p.j));
                if chain_criterion(&p, &index, &pending) {
                    continue;
                }
                let s = s_pair(&module, &basis[p.i], &basis[p.j]).expect("same component");
                let (r, _) = divide(&module, &s, &basis, &index, false, false, None);
                if !r.is_zero() {
                    found = Some(r);
                    break;
                }
            }
            found
        };
        let Some(g) = next else { break };
        let (g, _) = divide(&module, &g, &basis, &index, false, false, None);
        if g.is_zero() {
            continue;
        }
        let g = module.make_monic(&g);
        let k = basis.len();
        let lg = g.lead().unwrap().clone();
        let g_mask = support_of(&g);
        for (i, b) in basis.iter().enumerate() {
            let lb = b.lead().unwrap();
            if lb.comp != lg.comp {
                continue;
            }
            if product_ok
                && lb.mon.gcd_is_one(&lg.mon)
                && ring.supports_commute(support_of(b), g_mask)
            {
                continue;
            }
            pairs.push(Pair { i, j: k, lcm: lb.mon.lcm(&lg.mon), comp: lg.comp });
            pending.insert((i, k));
        }
        index.push(&g);
        basis.push(g);
    }

    Ok(interreduce(module, basis))
}

fn support_of(f: &FreeElement) -> u64 {
    f.terms.iter().fold(0, |m, t| m | t.mon.support_mask())
}

/// Skip `(i, j)` if some `k` has lead dividing the lcm and both `(i, k)` and
/// `(k, j)` are already treated.
fn chain_criterion(p: &Pair, index: &ReducerIndex, pending: &HashSet<(usize, usize)>) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    index.leads.iter().enumerate().any(|(k, (m, c, _))| {
        k != p.i
            && k != p.j
            && *c == p.comp
            && m.divides(&p.lcm)
            && !pending.contains(&key(p.i, k))
            && !pending.contains(&key(k, p.j))
    })
}

/// Minimalizes, tail-reduces, normalizes to monic and sorts.
pub fn interreduce(module: Arc<FreeModule>, basis: Vec<FreeElement>) -> GroebnerBasis {
    let mut basis: Vec<FreeElement> = basis.into_iter().filter(|g| !g.is_zero()).collect();
    // drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        let li = basis[i].lead().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].lead().unwrap();
            if lj.comp == li.comp && lj.mon.divides(&li.mon) && (lj.mon != li.mon || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut it = keep.iter();
    basis.retain(|_| *it.next().unwrap());
    basis.sort_by(|a, b| module.cmp_terms(&a.terms[0], &b.terms[0]));
    let index = ReducerIndex::new(&basis);
    let reduced: Vec<FreeElement> = (0..basis.len())
        .map(|i| {
            let g = &basis[i];
            let tail = FreeElement { terms: g.terms[1..].to_vec() };
            let (r, _) = divide(&module, &tail, &basis, &index, true, false, Some(i));
            let mut terms = vec![g.terms[0].clone()];
            terms.extend(r.terms);
            module.make_monic(&FreeElement { terms })
        })
        .collect();
    GroebnerBasis { module, elems: reduced, reduced: true }
}

/// Schreyer syzygies of a Gröbner basis.
///
/// Returns the new free module (one generator per basis element, shifted by
/// that element's bidegree, ordered by the induced Schreyer order) and a
/// Gröbner basis of the syzygy module in it. Only pairs whose lead quotient
/// is a minimal generator for its component are used.
pub fn syzygies(gb: &GroebnerBasis) -> Result<GroebnerBasis, Error> {
    let module = gb.module();
    let leads = gb.leads();
    let new_module = Arc::new(FreeModule::new(
        module.ring().clone(),
        gb.bidegrees(),
        ModuleOrder::schreyer(&leads, module.order()),
    ));
    let idx = ReducerIndex::new(&gb.elems);
    let mut out = Vec::new();
    for i in 0..leads.len() {
        let (li, ci) = &leads[i];
        let mut cands: Vec<(Monomial, usize)> = (i + 1..leads.len())
            .filter(|&j| leads[j].1 == *ci)
            .map(|j| (li.quotient_of(&li.lcm(&leads[j].0)), j))
            .collect();
        let minimal: Vec<(Monomial, usize)> = cands
            .iter()
            .enumerate()
            .filter(|(a, (m, _))| {
                !cands.iter().enumerate().any(|(b, (m2, _))| {
                    b != *a && m2.divides(m) && (m2 != m || b < *a)
                })
            })
            .map(|(_, x)| x.clone())
            .collect();
        cands = minimal;
        // descending lex keeps the next frame short (Schreyer's bound)
        cands.sort_by(|a, b| b.0.cmp(&a.0));
        for (mij, j) in cands {
            let gi = &gb.elems[i];
            let gj = &gb.elems[j];
            let (lci, lcj) = (&gi.terms[0].coef, &gj.terms[0].coef);
            let mji = leads[j].0.quotient_of(&li.lcm(&leads[j].0));
            let s = module.sub(&module.mul_term(lcj, &mij, gi), &module.mul_term(lci, &mji, gj));
            let (r, quots) = divide(module, &s, &gb.elems, &idx, false, true, None);
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "S-pair ({i}, {j}) does not reduce to zero: input is not a Gröbner basis"
                )));
            }
            let mut terms = vec![
                Term { mon: mij.clone(), comp: i, coef: lcj.clone() },
                Term { mon: mji, comp: j, coef: -lci },
            ];
            terms.extend(quots.into_iter().map(|q| Term { mon: q.mon, comp: q.index, coef: -q.coef }));
            let syz = new_module.normalize(terms);
            debug_assert!(syz.terms[0].mon == mij && syz.terms[0].comp == i);
            out.push(syz);
        }
    }
    Ok(GroebnerBasis::from_trusted(new_module, out))
}

/// Saturation `(M : v^∞)` of the module generated by `gb`.
///
/// For `h`, the division loop runs under an order where the lead of an
/// F-homogeneous element has the fewest `h` (the derivative count is a
/// weight tier), so `h | lead ⇒ h | element` and a basis without elements
/// divisible by `h` is saturated. For `θ` no well-order has that property,
/// so the saturation is computed exactly by eliminating an auxiliary
/// central `s` from `M + ⟨(1 − s·θ)e_j⟩`. The result is a reduced basis in
/// the input's order.
pub fn saturate_central(gb: &GroebnerBasis, v: Central) -> Result<GroebnerBasis, Error> {
    saturate_generators(gb.module_arc().clone(), gb.elements(), v)
}

/// Saturation of the module generated by arbitrary generators; see
/// [`saturate_central`].
pub fn saturate_generators(
    module: Arc<FreeModule>,
    gens: &[FreeElement],
    v: Central,
) -> Result<GroebnerBasis, Error> {
    let ring = module.ring();
    if ring.algebra() != Algebra::HomogenizedWeyl && v == Central::H {
        return Err(Error::Saturation("h is not a variable of this ring".into()));
    }
    if matches!(module.order().rule(), ComponentRule::Schreyer(_)) {
        return Err(Error::Saturation("Schreyer-ordered modules are not supported".into()));
    }
    let slot = ring.central(v);
    let base_term = module.order().term_order();
    if !places_last(base_term, ring, slot) {
        return Err(Error::Saturation(format!(
            "order must place {} cheapest",
            crate::ring::slot_name(ring, slot)
        )));
    }
    let divided: Vec<FreeElement> = gens.iter().map(|g| divide_out(g, slot)).collect();
    let sat = match v {
        Central::H => saturate_by_division(&module, divided, slot)?,
        _ => saturate_by_elimination(&module, divided, slot)?,
    };
    if sat.module().order().term_order() == base_term
        && sat.module().order().is_schreyer() == module.order().is_schreyer()
        && matches!(module.order().rule(), ComponentRule::TermOverPosition)
    {
        return Ok(GroebnerBasis { module, elems: sat.elems, reduced: true });
    }
    buchberger(module, sat.elements())
}

/// The exact elimination route for any central slot (used for θ, and as a
/// cross-check for h).
pub fn saturate_central_by_elimination(gb: &GroebnerBasis, v: Central) -> Result<GroebnerBasis, Error> {
    let module = gb.module_arc().clone();
    let slot = module.ring().central(v);
    let divided: Vec<FreeElement> = gb.elements().iter().map(|g| divide_out(g, slot)).collect();
    let sat = saturate_by_elimination(&module, divided, slot)?;
    buchberger(module, sat.elements())
}

fn places_last(order: &TermOrder, ring: &Ring, slot: usize) -> bool {
    // v must lose against every base and derivative variable; the other
    // central slot may come after it.
    let vm = ring.var_monomial(slot);
    (0..2 * ring.n())
        .all(|s| order.compare(&ring.var_monomial(s), &vm) == Ordering::Greater)
}

fn divide_out(f: &FreeElement, slot: usize) -> FreeElement {
    let k = f.terms.iter().map(|t| t.mon.exp(slot)).min().unwrap_or(0);
    if k == 0 {
        return f.clone();
    }
    FreeElement {
        terms: f
            .terms
            .iter()
            .map(|t| {
                let mut m = t.mon.clone();
                m.set(slot, m.exp(slot) - k);
                Term { mon: m, comp: t.comp, coef: t.coef.clone() }
            })
            .collect(),
    }
}

fn saturate_by_division(
    module: &Arc<FreeModule>,
    gens: Vec<FreeElement>,
    slot: usize,
) -> Result<GroebnerBasis, Error> {
    let ring = module.ring();
    let n = ring.n();
    let mut dcount = vec![0i64; ring.slots()];
    for i in 0..n {
        dcount[ring.deriv(i)] = 1;
    }
    let order = ModuleOrder::top(TermOrder::default_for(ring).with_leading_weight(dcount));
    let work = Arc::new(module.with_order(order));
    let mut gens: Vec<FreeElement> = gens.iter().map(|g| work.adopt(g)).collect();
    for _ in 0..MAX_SATURATION_ROUNDS {
        let gb = buchberger(work.clone(), &gens)?;
        if gb.elements().iter().all(|g| g.terms.iter().any(|t| t.mon.exp(slot) == 0)) {
            return Ok(gb);
        }
        gens = gb.elements().iter().map(|g| divide_out(g, slot)).collect();
    }
    Err(Error::Saturation(format!(
        "no fixpoint after {MAX_SATURATION_ROUNDS} rounds"
    )))
}

fn saturate_by_elimination(
    module: &Arc<FreeModule>,
    gens: Vec<FreeElement>,
    slot: usize,
) -> Result<GroebnerBasis, Error> {
    let ring = module.ring();
    let aux = ring.aux();
    let mut w = vec![0i64; ring.slots()];
    w[aux] = 1;
    let elim_term = module.order().term_order().with_leading_weight(w);
    let work = Arc::new(module.with_order(ModuleOrder::top(elim_term)));
    let mut all: Vec<FreeElement> = gens.iter().map(|g| work.adopt(g)).collect();
    for j in 0..module.rank() {
        let mut sv = ring.one();
        sv.set(aux, 1);
        sv.set(slot, 1);
        all.push(work.normalize(vec![
            Term { mon: ring.one(), comp: j, coef: Rational::ONE },
            Term { mon: sv, comp: j, coef: Rational::from_int(-1) },
        ]));
    }
    let gb = buchberger(work.clone(), &all)?;
    let kept: Vec<FreeElement> = gb
        .elements()
        .iter()
        .filter(|g| g.terms.iter().all(|t| t.mon.exp(aux) == 0))
        .cloned()
        .collect();
    let plain = Arc::new(module.with_order(ModuleOrder::top(module.order().term_order().clone())));
    let kept: Vec<FreeElement> = kept.iter().map(|g| plain.adopt(g)).collect();
    Ok(interreduce(plain, kept))
}
