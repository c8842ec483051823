//! Problem files, operator parsing, the analysis pipeline and reports.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::dimension::{codim, Codim};
use crate::gkz::{
    generic_prediction, hypergeometric_ideal, is_cohen_macaulay_toric, normalized_volume, sweep_beta,
    toric_ideal, toric_ring, GkzInstance, SweepTable, VSelector,
};
use crate::kpoly::{multidegree, LaurentPoly2, Multidegree};
use crate::order::{slot_by_name, TermOrder};
use crate::rational::Rational;
use crate::resolution::{
    bifiltered_resolution, rees_presentation, BifilteredPresentation, BifilteredResolution,
    PresentationOptions, VerifyReport,
};
use crate::ring::{Algebra, Bidegree, Ring, VarSpec, WeylElement};
use crate::Error;

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// operators

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let r: Rational = text
                .parse()
                .map_err(|_| ParseError::new(line, col, format!("bad number `{text}`")))?;
            toks.push((Tok::Num(r), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    toks.push((Tok::End, col0 + chars.len()));
    Ok(Lexer { toks, pos: 0 })
}

struct OpParser<'a> {
    lx: Lexer,
    ring: &'a Ring,
    line: usize,
}

impl OpParser<'_> {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.lx.pos].0
    }

    fn col(&self) -> usize {
        self.lx.toks[self.lx.pos].1
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn bump(&mut self) -> Tok {
        let t = self.lx.toks[self.lx.pos].0.clone();
        if t != Tok::End {
            self.lx.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<WeylElement, ParseError> {
        let mut neg = false;
        if let Tok::Sym(c @ ('+' | '-')) = *self.peek() {
            neg = c == '-';
            self.bump();
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&Rational::from_int(-1));
        }
        while let Tok::Sym(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<WeylElement, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            let f = self.factor()?;
            acc = acc.multiply(&f, self.ring);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WeylElement, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Num(r) => {
                let e = r
                    .to_i64()
                    .filter(|&e| e >= 0 && r.is_integer())
                    .ok_or_else(|| self.err_prev("exponent must be a natural number"))?;
                if e as u64 > MAX_EXPONENT {
                    return Err(self.err_prev(format!("exponent {e} exceeds {MAX_EXPONENT}")));
                }
                Ok(base.pow(e as u32, self.ring))
            }
            _ => Err(self.err_prev("expected an exponent after `^`")),
        }
    }

    fn err_prev(&self, msg: impl Into<String>) -> ParseError {
        let p = self.lx.pos.saturating_sub(1);
        ParseError::new(self.line, self.lx.toks[p].1, msg)
    }

    fn atom(&mut self) -> Result<WeylElement, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(r) => Ok(WeylElement::constant(self.ring, r)),
            Tok::Ident(name) => {
                let slot = slot_by_name(self.ring, &name)
                    .ok_or_else(|| ParseError::new(self.line, col, format!("unknown identifier `{name}`")))?;
                let central = slot == self.ring.h() || slot == self.ring.theta();
                if central && self.ring.algebra() != Algebra::HomogenizedWeyl {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        format!("`{name}` only exists in the homogenized ring"),
                    ));
                }
                Ok(WeylElement::variable(self.ring, slot))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                if self.bump() != Tok::Sym(')') {
                    return Err(self.err_prev("expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(ParseError::new(self.line, col, "unexpected end of input")),
            Tok::Sym(c) => Err(ParseError::new(self.line, col, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses an operator such as `x1*dx1 - 2*dx2^2` into normal form.
/// Products keep their written order.
pub fn parse_operator(src: &str, ring: &Ring) -> Result<WeylElement, ParseError> {
    parse_operator_at(src, ring, 1, 1)
}

fn parse_operator_at(src: &str, ring: &Ring, line: usize, col0: usize) -> Result<WeylElement, ParseError> {
    let mut p = OpParser { lx: lex(src, line, col0)?, ring, line };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::Ident(_) | Tok::Num(_) | Tok::Sym('(') => Err(p.err("expected an operator (`+`, `-`, `*`)")),
        _ => Err(p.err("unexpected token")),
    }
}

/// Renders an operator in the syntax accepted by [`parse_operator`].
pub fn render_operator(e: &WeylElement, ring: &Ring) -> String {
    e.display(ring).to_string()
}

// ---------------------------------------------------------------------------
// problem files

/// Which variables carry V-weight, as written in a problem file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TBlock {
    Origin,
    None,
    Names(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct ModuleJob {
    /// The Weyl algebra D with its t-block.
    pub ring: Ring,
    pub rank: usize,
    pub shifts: Vec<Bidegree>,
    pub gens: Vec<Vec<WeylElement>>,
}

#[derive(Clone, Debug)]
pub struct GkzJob {
    pub instance: GkzInstance,
    pub selector: VSelector,
    /// Parameters from `beta_list`, or the single `beta`.
    pub betas: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub enum JobKind {
    Module(ModuleJob),
    Gkz(GkzJob),
}

#[derive(Clone, Debug)]
pub struct Job {
    pub kind: JobKind,
    pub order: Option<String>,
}

#[derive(Default)]
struct Raw {
    vars: Option<(usize, Vec<String>)>,
    tblock: Option<(usize, TBlock)>,
    shifts_f: Option<(usize, Vec<i64>)>,
    shifts_v: Option<(usize, Vec<i64>)>,
    rank: Option<(usize, usize)>,
    order: Option<String>,
    gens: Vec<(usize, usize, String)>,
    matrix: Vec<(usize, Vec<i64>)>,
    beta: Option<(usize, Vec<Rational>)>,
    beta_list: Vec<(usize, Vec<Rational>)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Block {
    None,
    Gens,
    Matrix,
    BetaList,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

fn words(s: &str) -> Vec<&str> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .map(|w| w.trim_matches(|c| matches!(c, '(' | ')' | '[' | ']')))
        .filter(|w| !w.is_empty())
        .collect()
}

fn ints(s: &str, line: usize, col: usize) -> Result<Vec<i64>, ParseError> {
    words(s)
        .into_iter()
        .map(|w| w.parse().map_err(|_| ParseError::new(line, col, format!("expected an integer, got `{w}`"))))
        .collect()
}

fn rationals(s: &str, line: usize, col: usize) -> Result<Vec<Rational>, ParseError> {
    words(s)
        .into_iter()
        .map(|w| w.parse().map_err(|_| ParseError::new(line, col, format!("`{w}` is not rational: parameters must be integers or p/q"))))
        .collect()
}

/// Splits `[a, b, c]` at top-level commas, returning each entry with its
/// character offset.
fn split_vector(s: &str, line: usize, col: usize) -> Result<Vec<(usize, String)>, ParseError> {
    let inner = s
        .trim_end()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(line, col, "vector generator must be written `[e1, e2, ...]`"))?;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let chars: Vec<char> = inner.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((col + 1 + start, chars[start..i].iter().collect()));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((col + 1 + start, chars[start..].iter().collect()));
    Ok(out)
}

fn lex_file(src: &str) -> Result<Raw, ParseError> {
    let mut raw = Raw::default();
    let mut block = Block::None;
    for (idx, full) in src.lines().enumerate() {
        let ln = idx + 1;
        let line = strip_comment(full);
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let col = indent + 1;
        let body = line.trim();
        if indent > 0 {
            match block {
                Block::Gens => raw.gens.push((ln, col, body.to_string())),
                Block::Matrix => raw.matrix.push((ln, ints(body, ln, col)?)),
                Block::BetaList => raw.beta_list.push((ln, rationals(body, ln, col)?)),
                Block::None => return Err(ParseError::new(ln, col, "indented line outside a block")),
            }
            continue;
        }
        block = Block::None;
        if let Some(key) = body.strip_suffix(':') {
            block = match key.trim() {
                "gens" => Block::Gens,
                "matrix" => Block::Matrix,
                "beta_list" => Block::BetaList,
                other => return Err(ParseError::new(ln, 1, format!("unknown block `{other}`"))),
            };
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `key = value` or `block:`"))?;
        let key = key.trim();
        let vcol = line.find('=').unwrap() + 2;
        let value = value.trim();
        let dup = |present: bool| {
            if present {
                Err(ParseError::new(ln, 1, format!("`{key}` given twice")))
            } else {
                Ok(())
            }
        };
        match key {
            "vars" => {
                dup(raw.vars.is_some())?;
                raw.vars = Some((ln, words(value).into_iter().map(String::from).collect()));
            }
            "tblock" => {
                dup(raw.tblock.is_some())?;
                let t = match value {
                    "origin" | "all" => TBlock::Origin,
                    "none" => TBlock::None,
                    _ => TBlock::Names(words(value).into_iter().map(String::from).collect()),
                };
                raw.tblock = Some((ln, t));
            }
            "shifts_F" => {
                dup(raw.shifts_f.is_some())?;
                raw.shifts_f = Some((ln, ints(value, ln, vcol)?));
            }
            "shifts_V" => {
                dup(raw.shifts_v.is_some())?;
                raw.shifts_v = Some((ln, ints(value, ln, vcol)?));
            }
            "rank" => {
                dup(raw.rank.is_some())?;
                let r = value
                    .parse::<usize>()
                    .ok()
                    .filter(|&r| r > 0)
                    .ok_or_else(|| ParseError::new(ln, vcol, "rank must be a positive integer"))?;
                raw.rank = Some((ln, r));
            }
            "order" => {
                dup(raw.order.is_some())?;
                raw.order = Some(value.to_string());
            }
            "beta" => {
                dup(raw.beta.is_some())?;
                raw.beta = Some((ln, rationals(value, ln, vcol)?));
            }
            other => return Err(ParseError::new(ln, 1, format!("unknown key `{other}`"))),
        }
    }
    Ok(raw)
}

fn var_error(line: usize, e: Error) -> ParseError {
    ParseError::new(line, 1, e.to_string())
}

/// Parses a problem file. A file with a `matrix:` block is a GKZ problem;
/// otherwise it lists generators of a submodule of `D^rank`.
pub fn parse_problem(src: &str) -> Result<Job, ParseError> {
    let raw = lex_file(src)?;
    let order = raw.order.clone();
    let kind = if raw.matrix.is_empty() { module_job(raw)? } else { gkz_job(raw)? };
    Ok(Job { kind, order })
}

fn module_job(raw: Raw) -> Result<JobKind, ParseError> {
    let (vline, names) = raw.vars.ok_or_else(|| ParseError::new(1, 1, "missing `vars`"))?;
    let tline = raw.tblock.as_ref().map_or(vline, |t| t.0);
    let vars = match raw.tblock.map(|t| t.1).unwrap_or(TBlock::Origin) {
        TBlock::Origin => VarSpec::along_origin(names),
        TBlock::None => VarSpec::with_t_block(names, &[]),
        TBlock::Names(t) => VarSpec::with_t_block(names, &t.iter().map(String::as_str).collect::<Vec<_>>()),
    }
    .map_err(|e| var_error(tline, e))?;
    let ring = Ring::weyl(vars);
    let mut gens = Vec::new();
    for (ln, col, text) in &raw.gens {
        let v = if text.starts_with('[') {
            split_vector(text, *ln, *col)?
                .into_iter()
                .map(|(c, s)| parse_operator_at(&s, &ring, *ln, c))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            vec![parse_operator_at(text, &ring, *ln, *col)?]
        };
        gens.push((*ln, v));
    }
    let rank = match raw.rank {
        Some((_, r)) => r,
        None => gens.first().map_or(1, |g| g.1.len()),
    };
    if let Some((ln, g)) = gens.iter().find(|g| g.1.len() != rank) {
        return Err(ParseError::new(*ln, 1, format!("generator has {} entries, expected {rank}", g.len())));
    }
    let shift = |s: Option<(usize, Vec<i64>)>, name: &str| -> Result<Vec<i64>, ParseError> {
        match s {
            None => Ok(vec![0; rank]),
            Some((_, v)) if v.len() == rank => Ok(v),
            Some((ln, v)) => Err(ParseError::new(ln, 1, format!("{name} has {} entries, expected {rank}", v.len()))),
        }
    };
    let f = shift(raw.shifts_f, "shifts_F")?;
    let v = shift(raw.shifts_v, "shifts_V")?;
    let shifts = f.into_iter().zip(v).map(|(f, v)| Bidegree::new(f, v)).collect();
    Ok(JobKind::Module(ModuleJob { ring, rank, shifts, gens: gens.into_iter().map(|g| g.1).collect() }))
}

fn gkz_job(raw: Raw) -> Result<JobKind, ParseError> {
    if let Some((ln, _, _)) = raw.gens.first() {
        return Err(ParseError::new(*ln, 1, "a GKZ problem takes no `gens:` block"));
    }
    let mline = raw.matrix[0].0;
    let a: Vec<Vec<i64>> = raw.matrix.iter().map(|r| r.1.clone()).collect();
    let n = a[0].len();
    let names: Vec<String> = match &raw.vars {
        Some((ln, v)) if v.len() != n => {
            return Err(ParseError::new(*ln, 1, format!("{} variables for {n} matrix columns", v.len())))
        }
        Some((_, v)) => v.clone(),
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let selector = match raw.tblock {
        None | Some((_, TBlock::Origin)) => VSelector::Origin,
        Some((ln, TBlock::None)) => return Err(ParseError::new(ln, 1, "a GKZ problem needs a nonempty t-block")),
        Some((ln, TBlock::Names(t))) => {
            let mut idx = Vec::new();
            for name in &t {
                let i = names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| ParseError::new(ln, 1, format!("t-block names unknown variable `{name}`")))?;
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            idx.sort_unstable();
            match idx.len() {
                n1 if n1 == n => VSelector::Origin,
                1 => VSelector::Hyperplane(idx[0]),
                _ => VSelector::Explicit(idx),
            }
        }
    };
    let d = a.len();
    let check = |ln: usize, b: &[Rational]| {
        if b.len() == d {
            Ok(())
        } else {
            Err(ParseError::new(ln, 1, format!("beta has {} entries, expected {d}", b.len())))
        }
    };
    let mut betas = Vec::new();
    if let Some((ln, b)) = &raw.beta {
        check(*ln, b)?;
        betas.push(b.clone());
    }
    for (ln, b) in &raw.beta_list {
        check(*ln, b)?;
        betas.push(b.clone());
    }
    let beta = betas.first().cloned().unwrap_or_else(|| vec![Rational::from_int(0); d]);
    let instance = GkzInstance::new(a, beta).map_err(|e| ParseError::new(mline, 1, e.to_string()))?;
    Ok(JobKind::Gkz(GkzJob { instance, selector, betas }))
}

// ---------------------------------------------------------------------------
// pipeline

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    /// Term order on W in the syntax of [`TermOrder::parse`].
    pub order: Option<String>,
    pub allow_negative_shifts: bool,
    /// Also check exactness of the resolution, not only `d² = 0` and
    /// bihomogeneity.
    pub verify_exactness: bool,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub presentation: BifilteredPresentation,
    pub resolution: BifilteredResolution,
    pub verify: VerifyReport,
    pub kpoly: LaurentPoly2,
    pub codim: Codim,
    pub holonomic: bool,
    /// `None` for the zero module.
    pub multidegree: Option<Multidegree>,
}

/// Presentation, resolution, K-polynomial, codimension and multidegree of
/// `D^rank / N` with the given shifts.
pub fn analyze(
    ring: &Ring,
    rank: usize,
    shifts: &[Bidegree],
    gens: &[Vec<WeylElement>],
    opts: &AnalyzeOptions,
) -> Result<Analysis, Error> {
    let d = ring.with_algebra(Algebra::Weyl);
    let w = ring.with_algebra(Algebra::HomogenizedWeyl);
    let order = opts.order.as_deref().map(|s| TermOrder::parse(s, &w)).transpose()?;
    let popts = PresentationOptions { order, allow_negative_shifts: opts.allow_negative_shifts };
    let presentation = rees_presentation(&d, rank, shifts, gens, &popts)?;
    let resolution = bifiltered_resolution(&presentation)?;
    let verify = resolution.verify(opts.verify_exactness);
    let kpoly = resolution.k_polynomial();
    let codim = codim(&d, rank, gens)?;
    let multidegree = codim.value().map(|c| multidegree(&kpoly, c)).transpose()?;
    Ok(Analysis {
        presentation,
        resolution,
        verify,
        kpoly,
        holonomic: codim.is_holonomic(d.n()),
        codim,
        multidegree,
    })
}

// ---------------------------------------------------------------------------
// reports

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Multidegree,
    Gkz,
    Toric,
    Volume,
    Resolve,
    Sweep,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub json: bool,
    /// Overrides the order given in the problem file.
    pub order: Option<String>,
    pub show_resolution: bool,
    pub verify_exactness: bool,
    pub allow_negative_shifts: bool,
}

#[derive(Debug)]
pub enum RunError {
    Parse(ParseError),
    Engine(Error),
    /// The report was produced but the resolution failed its checks.
    Verification { output: String, failures: Vec<String> },
}

impl RunError {
    /// 2 for bad input, 3 for failed verification or internal faults, 1
    /// otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => 2,
            RunError::Engine(
                Error::InvalidVars(_) | Error::InvalidOrder(_) | Error::InvalidMatrix(_) | Error::NotHomogeneous(_),
            ) => 2,
            RunError::Engine(Error::Internal(_)) | RunError::Verification { .. } => 3,
            RunError::Engine(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Parse(e) => write!(f, "parse error: {e}"),
            RunError::Engine(e) => write!(f, "{e}"),
            RunError::Verification { failures, .. } => {
                write!(f, "verification failed: {}", failures.join("; "))
            }
        }
    }
}

impl std::error::Error for RunError {}

impl From<ParseError> for RunError {
    fn from(e: ParseError) -> Self {
        RunError::Parse(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Engine(e)
    }
}

/// Everything a `multidegree` or `gkz` run reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input: Value,
    pub codim: Option<u32>,
    pub holonomic: bool,
    pub kpoly: Vec<[i64; 3]>,
    pub multidegree: Option<Vec<[i64; 3]>>,
    pub b: Option<Vec<i64>>,
    pub lower_terms_vanish: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction_eq2: Option<Vec<[i64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohen_macaulay: Option<bool>,
    #[serde(skip)]
    text: TextParts,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionSummary {
    pub ranks: Vec<usize>,
    #[serde(rename = "shifts_F")]
    pub shifts_f: Vec<Vec<i64>>,
    #[serde(rename = "shifts_V")]
    pub shifts_v: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default)]
struct TextParts {
    header: Vec<String>,
    kpoly: String,
    multidegree: Option<String>,
    prediction: Option<String>,
    resolution: Option<String>,
}

impl Report {
    fn from_analysis(input: Value, header: Vec<String>, a: &Analysis, show_resolution: bool) -> Report {
        let res = &a.resolution;
        let summary = show_resolution.then(|| ResolutionSummary {
            ranks: res.ranks(),
            shifts_f: (0..=res.length()).map(|i| res.shifts(i).iter().map(|s| s.f).collect()).collect(),
            shifts_v: (0..=res.length()).map(|i| res.shifts(i).iter().map(|s| s.v).collect()).collect(),
        });
        Report {
            input,
            codim: a.codim.value(),
            holonomic: a.holonomic,
            kpoly: a.kpoly.to_json(),
            multidegree: a.multidegree.as_ref().map(|m| m.poly.to_json()),
            b: a.multidegree.as_ref().map(|m| m.b.clone()),
            lower_terms_vanish: a.multidegree.as_ref().map(|m| m.lower_terms_vanish),
            resolution: summary,
            volume: None,
            prediction_eq2: None,
            cohen_macaulay: None,
            text: TextParts {
                header,
                kpoly: a.kpoly.to_string(),
                multidegree: a.multidegree.as_ref().map(|m| m.poly.to_string()),
                prediction: None,
                resolution: show_resolution.then(|| res.to_string()),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.text.header {
            writeln!(f, "{h}")?;
        }
        writeln!(f, "K-polynomial: {}", self.text.kpoly)?;
        match self.codim {
            Some(c) => writeln!(f, "codim: {c}{}", if self.holonomic { " (holonomic)" } else { "" })?,
            None => writeln!(f, "codim: infinite (zero module)")?,
        }
        if let (Some(m), Some(b), Some(l)) = (&self.text.multidegree, &self.b, self.lower_terms_vanish) {
            writeln!(f, "multidegree: {m}")?;
            let b: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            writeln!(f, "b: {}", b.join(" "))?;
            writeln!(f, "lower terms vanish: {}", if l { "yes" } else { "no" })?;
        }
        if let Some(v) = self.volume {
            writeln!(f, "volume: {v}")?;
        }
        if let Some(p) = &self.text.prediction {
            writeln!(f, "generic prediction: {p}")?;
        }
        if let Some(cm) = self.cohen_macaulay {
            writeln!(f, "toric ring Cohen-Macaulay: {}", if cm { "yes" } else { "no" })?;
        }
        if let Some(r) = &self.text.resolution {
            write!(f, "resolution:\n{r}")?;
        }
        Ok(())
    }
}

fn fmt_vec<T: fmt::Display>(v: &[T]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn module_input(job: &ModuleJob) -> (Value, Vec<String>) {
    let ring = &job.ring;
    let names = ring.vars().names().to_vec();
    let tblock: Vec<&String> = names.iter().enumerate().filter(|(i, _)| ring.vars().is_t(*i)).map(|x| x.1).collect();
    let gens: Vec<Value> = job
        .gens
        .iter()
        .map(|g| {
            let s: Vec<String> = g.iter().map(|e| render_operator(e, ring)).collect();
            if job.rank == 1 {
                Value::String(s[0].clone())
            } else {
                json!(s)
            }
        })
        .collect();
    let sf: Vec<i64> = job.shifts.iter().map(|s| s.f).collect();
    let sv: Vec<i64> = job.shifts.iter().map(|s| s.v).collect();
    let input = json!({
        "vars": names,
        "tblock": tblock,
        "rank": job.rank,
        "shifts_F": sf,
        "shifts_V": sv,
        "gens": gens,
    });
    let t: Vec<&str> = tblock.iter().map(|s| s.as_str()).collect();
    let header = vec![
        format!(
            "module: D^{} / N, {} generator{}",
            job.rank,
            job.gens.len(),
            if job.gens.len() == 1 { "" } else { "s" }
        ),
        format!("variables: {} (t-block: {})", names.join(" "), if t.is_empty() { "none".into() } else { t.join(" ") }),
    ];
    (input, header)
}

fn gkz_input(inst: &GkzInstance, sel: &VSelector) -> (Value, Vec<String>) {
    let beta: Vec<String> = inst.beta().iter().map(|b| b.to_string()).collect();
    let input = json!({
        "matrix": inst.matrix(),
        "beta": beta,
        "tblock": sel.to_string(),
    });
    let rows: Vec<String> = inst.matrix().iter().map(|r| fmt_vec(r)).collect();
    let header = vec![
        format!("GKZ system: A = [{}], beta = {}", rows.join(", "), fmt_vec(&beta)),
        format!("V-filtration along {sel}"),
    ];
    (input, header)
}

fn analyze_opts(job: &Job, opts: &RunOptions) -> AnalyzeOptions {
    AnalyzeOptions {
        order: opts.order.clone().or_else(|| job.order.clone()),
        allow_negative_shifts: opts.allow_negative_shifts,
        verify_exactness: opts.verify_exactness,
    }
}

fn single_beta(g: &GkzJob) -> Result<GkzInstance, RunError> {
    match g.betas.len() {
        0 | 1 => Ok(g.instance.clone()),
        _ => Err(RunError::Engine(Error::Unsupported(
            "several parameters given; use the sweep command".into(),
        ))),
    }
}

fn gkz_only(job: &Job) -> Result<&GkzJob, RunError> {
    match &job.kind {
        JobKind::Gkz(g) => Ok(g),
        JobKind::Module(_) => Err(RunError::Engine(Error::Unsupported("this command needs a `matrix:` block".into()))),
    }
}

/// Runs the analysis for a module or a single GKZ parameter.
pub fn report(job: &Job, opts: &RunOptions, with_gkz_data: bool) -> Result<(Report, VerifyReport), RunError> {
    let aopts = analyze_opts(job, opts);
    let (report, verify) = match &job.kind {
        JobKind::Module(m) => {
            let a = analyze(&m.ring, m.rank, &m.shifts, &m.gens, &aopts)?;
            let (input, header) = module_input(m);
            (Report::from_analysis(input, header, &a, opts.show_resolution), a.verify)
        }
        JobKind::Gkz(g) => {
            let inst = single_beta(g)?;
            let (ring, gens) = hypergeometric_ideal(&inst, &g.selector)?;
            let gens: Vec<Vec<WeylElement>> = gens.into_iter().map(|e| vec![e]).collect();
            let a = analyze(&ring, 1, &[Bidegree::ZERO], &gens, &aopts)?;
            let (input, header) = gkz_input(&inst, &g.selector);
            let mut r = Report::from_analysis(input, header, &a, opts.show_resolution);
            if with_gkz_data {
                r.volume = Some(normalized_volume(&inst)?);
                if g.selector == VSelector::Origin {
                    let p = generic_prediction(&inst)?;
                    r.prediction_eq2 = Some(p.to_json());
                    r.text.prediction = Some(p.to_string());
                }
                r.cohen_macaulay = Some(is_cohen_macaulay_toric(&inst)?);
            }
            (r, a.verify)
        }
    };
    Ok((report, verify))
}

/// Executes a command and returns the text to print on success.
pub fn run(job: &Job, cmd: Command, opts: &RunOptions) -> Result<String, RunError> {
    match cmd {
        Command::Multidegree | Command::Gkz | Command::Resolve => {
            if cmd == Command::Gkz {
                gkz_only(job)?;
            }
            let mut o = opts.clone();
            o.show_resolution |= cmd == Command::Resolve;
            let (r, verify) = report(job, &o, cmd == Command::Gkz)?;
            let out = if opts.json { r.to_json() + "\n" } else { r.to_string() };
            if verify.ok() {
                Ok(out)
            } else {
                Err(RunError::Verification {
                    output: out,
                    failures: verify.failures.iter().map(|f| f.to_string()).collect(),
                })
            }
        }
        Command::Toric => {
            let g = gkz_only(job)?;
            let gb = toric_ideal(&g.instance)?;
            let ring = toric_ring(&g.instance);
            let gens: Vec<String> = gb.elements().iter().map(|e| render_operator(&e.entry(0), &ring)).collect();
            Ok(if opts.json {
                serde_json::to_string(&json!({ "matrix": g.instance.matrix(), "toric": gens })).unwrap() + "\n"
            } else {
                gens.iter().map(|s| format!("{s}\n")).collect()
            })
        }
        Command::Volume => {
            let g = gkz_only(job)?;
            let v = normalized_volume(&g.instance)?;
            Ok(if opts.json {
                serde_json::to_string(&json!({ "matrix": g.instance.matrix(), "volume": v })).unwrap() + "\n"
            } else {
                format!("{v}\n")
            })
        }
        Command::Sweep => {
            let g = gkz_only(job)?;
            let betas = if g.betas.is_empty() { vec![g.instance.beta().to_vec()] } else { g.betas.clone() };
            let table: SweepTable = sweep_beta(&g.instance, &betas, &g.selector, &analyze_opts(job, opts));
            Ok(if opts.json {
                serde_json::to_string(&table).unwrap() + "\n"
            } else {
                table.to_string()
            })
        }
    }
}
