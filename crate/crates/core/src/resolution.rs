//! Rees presentations and bifiltered free resolutions over W.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::groebner::{
    buchberger, saturate_generators, syzygies, FreeElement, FreeModule, GroebnerBasis, Term,
};
use crate::kpoly::{monomial_k_polynomial, LaurentPoly2};
use crate::order::{ModuleOrder, TermOrder};
use crate::ring::{Algebra, Bidegree, Central, Ring, WeylElement};
use crate::Error;

/// Options for building a presentation.
#[derive(Clone, Debug, Default)]
pub struct PresentationOptions {
    /// Term order on W; defaults to grevlex with ∂ > base > θ > h.
    pub order: Option<TermOrder>,
    pub allow_negative_shifts: bool,
}

/// A module `D^r / N` with a good bifiltration given by shifts, together
/// with the saturated bihomogenized Gröbner basis of its Rees module.
#[derive(Clone, Debug)]
pub struct BifilteredPresentation {
    ring: Ring,
    gens: Vec<Vec<WeylElement>>,
    gb: GroebnerBasis,
}

impl BifilteredPresentation {
    /// The bihomogenized ring W.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gb.module().rank()
    }

    pub fn shifts(&self) -> &[Bidegree] {
        self.gb.module().shifts()
    }

    /// The generators as given (in D).
    pub fn generators(&self) -> &[Vec<WeylElement>] {
        &self.gens
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn module(&self) -> &Arc<FreeModule> {
        self.gb.module_arc()
    }
}

/// Bihomogenizes a vector relative to the component shifts: every term is
/// raised by powers of `h` and `θ` to the maximal F- and V-degree.
pub fn bihomogenize_vector(module: &FreeModule, v: &[WeylElement]) -> Result<FreeElement, Error> {
    let ring = module.ring();
    let f = module.from_vector(v);
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    if f.terms().iter().any(|t| t.mon.exp(ring.h()) > 0 || t.mon.exp(ring.theta()) > 0) {
        return Err(Error::AlreadyHomogenized);
    }
    let degs: Vec<Bidegree> = f.terms().iter().map(|t| module.term_bidegree(t)).collect();
    let top_f = degs.iter().map(|b| b.f).max().unwrap();
    let top_v = degs.iter().map(|b| b.v).max().unwrap();
    let terms = f
        .terms()
        .iter()
        .zip(&degs)
        .map(|(t, b)| {
            let mut m = t.mon.clone();
            m.set(ring.h(), (top_f - b.f) as u16);
            m.set(ring.theta(), (top_v - b.v) as u16);
            Term { mon: m, comp: t.comp, coef: t.coef.clone() }
        })
        .collect();
    Ok(module.normalize(terms))
}

/// Bihomogenizes the generators in W, then saturates by θ and by h.
///
/// `(M : θ^∞) : h^∞` is already θ-saturated (θ and h are central), so one
/// pass reaches the joint fixpoint.
pub fn rees_presentation(
    vars_ring: &Ring,
    rank: usize,
    shifts: &[Bidegree],
    gens: &[Vec<WeylElement>],
    opts: &PresentationOptions,
) -> Result<BifilteredPresentation, Error> {
    let w = vars_ring.with_algebra(Algebra::HomogenizedWeyl);
    if shifts.len() != rank {
        return Err(Error::InvalidMatrix(format!(
            "{} shifts for rank {rank}",
            shifts.len()
        )));
    }
    if !opts.allow_negative_shifts && shifts.iter().any(|s| s.f < 0 || s.v < 0) {
        return Err(Error::Unsupported("negative shifts need the override flag".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.len() != rank) {
        return Err(Error::InvalidMatrix(format!(
            "generator has {} entries, expected {rank}",
            g.len()
        )));
    }
    let term = opts.order.clone().unwrap_or_else(|| TermOrder::default_for(&w));
    term.validate(&w)?;
    let module = Arc::new(FreeModule::new(w.clone(), shifts.to_vec(), ModuleOrder::top(term)));
    let gens: Vec<Vec<WeylElement>> = gens
        .iter()
        .filter(|g| g.iter().any(|e| !e.is_zero()))
        .map(|g| g.iter().map(|e| e.dehomogenize(vars_ring)).collect())
        .collect();
    let homog = gens
        .iter()
        .map(|g| bihomogenize_vector(&module, g))
        .collect::<Result<Vec<_>, _>>()?;
    let gb = if homog.is_empty() {
        buchberger(module.clone(), &[])?
    } else {
        let sat_theta = saturate_generators(module.clone(), &homog, Central::Theta)?;
        saturate_generators(module.clone(), sat_theta.elements(), Central::H)?
    };
    Ok(BifilteredPresentation { ring: w, gens, gb })
}

/// A bifiltered free resolution `0 → F_δ → … → F_1 → F_0`, with `F_i`
/// carrying the shifts and `maps[i]` the images of the generators of
/// `F_{i+1}` in `F_i`.
#[derive(Clone, Debug)]
pub struct BifilteredResolution {
    ring: Ring,
    modules: Vec<Arc<FreeModule>>,
    maps: Vec<Vec<FreeElement>>,
}

/// Upper bound on the number of levels, `2N + 3`.
pub fn level_cap(ring: &Ring) -> usize {
    2 * ring.n() + 3
}

pub fn bifiltered_resolution(p: &BifilteredPresentation) -> Result<BifilteredResolution, Error> {
    let cap = level_cap(p.ring());
    let mut modules = vec![p.module().clone()];
    let mut maps = Vec::new();
    let mut gb = p.groebner_basis().clone();
    while !gb.is_empty() {
        if modules.len() > cap {
            return Err(Error::Internal(format!("resolution exceeded {cap} levels")));
        }
        let syz = syzygies(&gb)?;
        modules.push(syz.module_arc().clone());
        maps.push(gb.elements().to_vec());
        gb = syz;
    }
    Ok(BifilteredResolution { ring: p.ring().clone(), modules, maps })
}

/// One problem found by [`verify_complex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyFailure {
    /// Index `i` of the map `F_i → F_{i-1}`.
    pub level: usize,
    pub generator: usize,
    pub component: Option<usize>,
    pub message: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} generator {}", self.level, self.generator)?;
        if let Some(c) = self.component {
            write!(f, " component {c}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl BifilteredResolution {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `δ`: index of the last free module.
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    pub fn module(&self, i: usize) -> &FreeModule {
        &self.modules[i]
    }

    pub fn shifts(&self, i: usize) -> &[Bidegree] {
        self.modules[i].shifts()
    }

    /// Images of the generators of `F_i` in `F_{i-1}` (`i ≥ 1`).
    pub fn map(&self, i: usize) -> &[FreeElement] {
        &self.maps[i - 1]
    }

    /// Replaces one column of `φ_i`; used to build negative controls.
    pub fn set_map_column(&mut self, i: usize, generator: usize, image: FreeElement) {
        self.maps[i - 1][generator] = image;
    }

    /// `Σ_i (−1)^i Σ_j T1^{n_j} T2^{m_j}`.
    pub fn k_polynomial(&self) -> LaurentPoly2 {
        let mut k = LaurentPoly2::zero();
        for (i, m) in self.modules.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for s in m.shifts() {
                k.add_term(s.f, s.v, sign);
            }
        }
        k
    }

    /// Image of `x ∈ F_i` under `φ_i`.
    pub fn apply(&self, i: usize, x: &FreeElement) -> FreeElement {
        let target = &self.modules[i - 1];
        let cols = &self.maps[i - 1];
        let terms = x
            .terms()
            .iter()
            .flat_map(|t| target.mul_term(&t.coef, &t.mon, &cols[t.comp]).into_terms())
            .collect();
        target.normalize(terms)
    }

    /// Checks `φ_{i}∘φ_{i+1} = 0`, bihomogeneity of every column against
    /// the shifts and, with `exactness`, that each level's generators form
    /// a Gröbner basis whose recomputed syzygies lie in the next level.
    pub fn verify(&self, exactness: bool) -> VerifyReport {
        let mut failures = Vec::new();
        for i in 1..self.modules.len() {
            let (src, dst) = (&self.modules[i], &self.modules[i - 1]);
            for (j, col) in self.maps[i - 1].iter().enumerate() {
                for t in col.terms() {
                    let b = dst.term_bidegree(t);
                    if b != src.shifts()[j] {
                        failures.push(VerifyFailure {
                            level: i,
                            generator: j,
                            component: Some(t.comp),
                            message: format!("entry has bidegree {b}, expected {}", src.shifts()[j]),
                        });
                        break;
                    }
                }
                if i >= 2 {
                    let img = self.apply(i - 1, col);
                    if !img.is_zero() {
                        let comp = img.lead().map(|t| t.comp);
                        failures.push(VerifyFailure {
                            level: i,
                            generator: j,
                            component: comp,
                            message: "composition with the previous map is nonzero".into(),
                        });
                    }
                }
            }
            if exactness {
                let gb = GroebnerBasis::from_trusted(self.modules[i - 1].clone(), self.maps[i - 1].clone());
                if let Err((a, b)) = gb.certify() {
                    failures.push(VerifyFailure {
                        level: i,
                        generator: a,
                        component: None,
                        message: format!("S-pair ({a}, {b}) of the columns does not reduce to zero"),
                    });
                    continue;
                }
                let next = self.maps.get(i).cloned().unwrap_or_default();
                let next_gb = GroebnerBasis::from_trusted(self.modules[i].clone(), next);
                match syzygies(&gb) {
                    Ok(fresh) => {
                        for (k, s) in fresh.elements().iter().enumerate() {
                            let s = self.modules[i].adopt(s);
                            if !next_gb.is_member(&s) {
                                failures.push(VerifyFailure {
                                    level: i,
                                    generator: k,
                                    component: None,
                                    message: "kernel element not generated by the next level".into(),
                                });
                            }
                        }
                    }
                    Err(e) => failures.push(VerifyFailure {
                        level: i,
                        generator: 0,
                        component: None,
                        message: e.to_string(),
                    }),
                }
            }
        }
        VerifyReport { failures }
    }
}

pub fn verify_complex(res: &BifilteredResolution, exactness: bool) -> VerifyReport {
    res.verify(exactness)
}

/// K-polynomial of the resolution of the commutative lead module, which
/// the Schreyer frame shares with the actual resolution.
pub fn lead_k_polynomial(p: &BifilteredPresentation) -> LaurentPoly2 {
    let ring = p.ring();
    let leads = p.groebner_basis().leads();
    let comps: Vec<_> = (0..p.rank())
        .map(|c| {
            let s = p.shifts()[c];
            (
                leads.iter().filter(|(_, k)| *k == c).map(|(m, _)| m.clone()).collect(),
                (s.f, s.v),
            )
        })
        .collect();
    let weight = |m: &crate::ring::Monomial| {
        let b = ring.bidegree_of_monomial(m);
        (b.f, b.v)
    };
    monomial_k_polynomial(&comps, &weight)
}

fn fmt_shifts(xs: impl Iterator<Item = i64>) -> String {
    let v: Vec<String> = xs.map(|x| x.to_string()).collect();
    format!("[{}]", v.join(", "))
}

impl fmt::Display for BifilteredResolution {
    /// Per level: rank and shifts, then the dehomogenized columns of the map
    /// into the previous level.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.modules.iter().enumerate() {
            writeln!(
                f,
                "level {i}: rank {}, F-shifts {}, V-shifts {}",
                m.rank(),
                fmt_shifts(m.shifts().iter().map(|s| s.f)),
                fmt_shifts(m.shifts().iter().map(|s| s.v)),
            )?;
            if i == 0 {
                continue;
            }
            let prev_rank = self.modules[i - 1].rank();
            for col in &self.maps[i - 1] {
                let entries: Vec<String> = col
                    .to_vector(prev_rank)
                    .iter()
                    .map(|e| e.dehomogenize(&self.ring).display(&self.ring).to_string())
                    .collect();
                writeln!(f, "  ({})", entries.join(", "))?;
            }
        }
        Ok(())
    }
}
