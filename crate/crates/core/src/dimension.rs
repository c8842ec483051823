//! Codimension of a D-module from its characteristic ideal.

use std::fmt;
use std::sync::Arc;

use crate::groebner::{buchberger, FreeModule};
use crate::order::{default_priority, TermOrder};
use crate::ring::{Algebra, Ring, WeylElement};
use crate::Error;

/// Largest variable count accepted by the independent-set search.
pub const MAX_DIMENSION_VARS: usize = 16;

/// A submodule of `S^rank`, `S` the commutative polynomial ring on the
/// base and symbol slots of a ring layout.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutativeIdeal {
    ring: Ring,
    rank: usize,
    gens: Vec<Vec<WeylElement>>,
    vars: Vec<usize>,
}

impl CommutativeIdeal {
    pub fn new(ring: &Ring, gens: Vec<WeylElement>) -> Self {
        CommutativeIdeal::module(ring, 1, gens.into_iter().map(|g| vec![g]).collect())
    }

    pub fn module(ring: &Ring, rank: usize, gens: Vec<Vec<WeylElement>>) -> Self {
        let gens = gens.into_iter().filter(|v| v.iter().any(|e| !e.is_zero())).collect();
        CommutativeIdeal {
            ring: ring.with_algebra(Algebra::Commutative),
            rank,
            gens,
            vars: (0..2 * ring.n()).collect(),
        }
    }

    /// Restricts the polynomial variables to the given slots (for example
    /// the derivative slots plus `h`).
    pub fn with_variables(mut self, slots: Vec<usize>) -> Self {
        self.vars = slots;
        self
    }

    pub fn variables(&self) -> &[usize] {
        &self.vars
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<WeylElement>] {
        &self.gens
    }

    /// Number of polynomial variables.
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }
}

impl fmt::Display for CommutativeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|v| {
                if self.rank == 1 {
                    v[0].display(&self.ring).to_string()
                } else {
                    let e: Vec<String> = v.iter().map(|x| x.display(&self.ring).to_string()).collect();
                    format!("[{}]", e.join(", "))
                }
            })
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

fn f_weight_order(ring: &Ring, priority: Option<Vec<usize>>) -> TermOrder {
    let mut w = vec![0i64; ring.slots()];
    for i in 0..ring.n() {
        w[ring.deriv(i)] = 1;
    }
    TermOrder::grevlex(priority.unwrap_or_else(|| default_priority(ring))).with_leading_weight(w)
}

/// F-leading forms of a Gröbner basis of `N ⊆ D^rank` under the F-weight
/// order refined by grevlex (`priority`, default ∂ > x). Derivative slots
/// become the commuting symbols.
pub fn characteristic_ideal(
    ring: &Ring,
    rank: usize,
    gens: &[Vec<WeylElement>],
    priority: Option<Vec<usize>>,
) -> Result<CommutativeIdeal, Error> {
    let d = ring.with_algebra(Algebra::Weyl);
    let module = Arc::new(FreeModule::with_rank(d.clone(), rank, f_weight_order(&d, priority)));
    let elems: Vec<_> = gens
        .iter()
        .map(|v| {
            let v: Vec<WeylElement> = v.iter().map(|e| e.dehomogenize(ring)).collect();
            module.from_vector(&v)
        })
        .filter(|e| !e.is_zero())
        .collect();
    let gb = buchberger(module.clone(), &elems)?;
    let symbols = gb
        .elements()
        .iter()
        .map(|g| {
            let top = g.terms().iter().map(|t| d.bidegree_of_monomial(&t.mon).f).max().unwrap();
            let lead = module.normalize(
                g.terms()
                    .iter()
                    .filter(|t| d.bidegree_of_monomial(&t.mon).f == top)
                    .cloned()
                    .collect(),
            );
            lead.to_vector(rank)
        })
        .collect();
    Ok(CommutativeIdeal::module(&d, rank, symbols))
}

/// Krull dimension of `S^rank / I`, read from the grevlex initial module as
/// the largest set of variables containing no leading support; `-1` for the
/// zero quotient.
pub fn krull_dimension(ideal: &CommutativeIdeal) -> Result<i64, Error> {
    let nv = ideal.var_count();
    if nv > MAX_DIMENSION_VARS {
        return Err(Error::Unsupported(format!(
            "dimension search over {nv} variables (limit {MAX_DIMENSION_VARS})"
        )));
    }
    let ring = ideal.ring();
    let module = Arc::new(FreeModule::with_rank(ring.clone(), ideal.rank(), TermOrder::default_for(ring)));
    let elems: Vec<_> = ideal.generators().iter().map(|v| module.from_vector(v)).collect();
    let gb = buchberger(module, &elems)?;
    let leads = gb.leads();
    let mut best = -1i64;
    for c in 0..ideal.rank() {
        let masks: Vec<u64> = leads
            .iter()
            .filter(|(_, k)| *k == c)
            .map(|(m, _)| {
                ideal.vars.iter().enumerate().fold(0u64, |acc, (bit, &s)| {
                    acc | (((m.exp(s) > 0) as u64) << bit)
                })
            })
            .collect();
        if masks.contains(&0) {
            continue;
        }
        best = best.max(max_independent(nv, &masks) as i64);
    }
    Ok(best)
}

fn max_independent(nv: usize, masks: &[u64]) -> u32 {
    let mut best = 0;
    for s in 0u64..(1u64 << nv) {
        let size = s.count_ones();
        if size > best && masks.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    best
}

/// Codimension of a module; the zero module has infinite codimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codim {
    Finite(u32),
    Infinite,
}

impl Codim {
    pub fn value(self) -> Option<u32> {
        match self {
            Codim::Finite(c) => Some(c),
            Codim::Infinite => None,
        }
    }

    /// Holonomic means codimension equal to the number of variables.
    pub fn is_holonomic(self, n: usize) -> bool {
        self == Codim::Finite(n as u32)
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(c) => write!(f, "{c}"),
            Codim::Infinite => f.write_str("infinite"),
        }
    }
}

/// `codim(D^rank / N) = 2N − dim(characteristic ideal)`.
pub fn codim(ring: &Ring, rank: usize, gens: &[Vec<WeylElement>]) -> Result<Codim, Error> {
    codim_with_priority(ring, rank, gens, None)
}

pub fn codim_with_priority(
    ring: &Ring,
    rank: usize,
    gens: &[Vec<WeylElement>],
    priority: Option<Vec<usize>>,
) -> Result<Codim, Error> {
    let ch = characteristic_ideal(ring, rank, gens, priority)?;
    let dim = krull_dimension(&ch)?;
    if dim < 0 {
        return Ok(Codim::Infinite);
    }
    let n = ring.n() as i64;
    let c = 2 * n - dim;
    if c > n {
        return Err(Error::Internal(format!(
            "codimension {c} exceeds the number of variables {n}"
        )));
    }
    Ok(Codim::Finite(c as u32))
}
