//! Finitary polynomial functors `F(X) = Σ_i m_i · X^i`.
//!
//! A [`PolyFunctor`] is an unnormalized expression tree; [`normalize`] expands
//! it into a [`NormalForm`], a map from exponent to multiplicity. Equality of
//! normal forms is equality of the underlying polynomials. Given a finite set
//! of size `n`, [`cardinality`] counts `F(n)` exactly and [`enumerate`] lists
//! its elements in lexicographic order.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::parse_functor;

/// Default limit on expression nodes and on normalization work.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;
/// Default limit on the number of elements [`enumerate`] may emit.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;
/// Default limit on expression nesting.
pub const DEFAULT_MAX_DEPTH: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("{0} node has no children")]
    EmptyNode(&'static str),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("invalid normal form: {0}")]
    InvalidNormalForm(String),
}

/// Resource limits shared by normalization and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub nodes: usize,
    pub depth: usize,
    pub enumeration: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
            depth: DEFAULT_MAX_DEPTH,
            enumeration: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Expression tree of a finitary polynomial functor in one variable `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolyFunctor {
    /// The constant functor with `c` elements.
    Const(u64),
    /// The identity functor `X`.
    Var,
    Sum(Vec<PolyFunctor>),
    Prod(Vec<PolyFunctor>),
    /// `X^k`. `Pow(0)` is the constant functor `1`.
    Pow(u32),
}

impl PolyFunctor {
    pub fn sum(children: impl IntoIterator<Item = PolyFunctor>) -> Self {
        PolyFunctor::Sum(children.into_iter().collect())
    }

    pub fn prod(children: impl IntoIterator<Item = PolyFunctor>) -> Self {
        PolyFunctor::Prod(children.into_iter().collect())
    }

    pub fn node_count(&self) -> usize {
        match self {
            PolyFunctor::Sum(cs) | PolyFunctor::Prod(cs) => {
                1 + cs.iter().map(PolyFunctor::node_count).sum::<usize>()
            }
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PolyFunctor::Sum(cs) | PolyFunctor::Prod(cs) => {
                1 + cs.iter().map(PolyFunctor::depth).max().unwrap_or(0)
            }
            _ => 1,
        }
    }

    /// Check the structural invariants against `budget`.
    pub fn validate(&self, budget: &Budget) -> Result<(), FunctorError> {
        fn walk(
            f: &PolyFunctor,
            depth: usize,
            budget: &Budget,
            seen: &mut usize,
        ) -> Result<(), FunctorError> {
            *seen += 1;
            if *seen > budget.nodes {
                return Err(FunctorError::BudgetExceeded(format!(
                    "expression has more than {} nodes",
                    budget.nodes
                )));
            }
            if depth > budget.depth {
                return Err(FunctorError::BudgetExceeded(format!(
                    "expression deeper than {}",
                    budget.depth
                )));
            }
            match f {
                PolyFunctor::Sum(cs) if cs.is_empty() => Err(FunctorError::EmptyNode("sum")),
                PolyFunctor::Prod(cs) if cs.is_empty() => Err(FunctorError::EmptyNode("product")),
                PolyFunctor::Sum(cs) | PolyFunctor::Prod(cs) => {
                    cs.iter().try_for_each(|c| walk(c, depth + 1, budget, seen))
                }
                _ => Ok(()),
            }
        }
        walk(self, 1, budget, &mut 0)
    }
}

impl fmt::Display for PolyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 0 = sum context, 1 = product context
        fn go(t: &PolyFunctor, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                PolyFunctor::Const(c) => write!(f, "{c}"),
                PolyFunctor::Var => write!(f, "X"),
                PolyFunctor::Pow(k) => write!(f, "X^{k}"),
                PolyFunctor::Sum(cs) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    for (i, c) in cs.iter().enumerate() {
                        if i > 0 {
                            write!(f, " + ")?;
                        }
                        go(c, u8::from(matches!(c, PolyFunctor::Sum(_))), f)?;
                    }
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                PolyFunctor::Prod(cs) => {
                    for (i, c) in cs.iter().enumerate() {
                        if i > 0 {
                            write!(f, " * ")?;
                        }
                        // nested products are parenthesized so the tree shape survives a reparse
                        if matches!(c, PolyFunctor::Prod(_)) {
                            write!(f, "(")?;
                            go(c, 0, f)?;
                            write!(f, ")")?;
                        } else {
                            go(c, 1, f)?;
                        }
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

/// Canonical form `Σ mult · X^exp` with no zero multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "NormalFormJson", into = "NormalFormJson")]
pub struct NormalForm {
    terms: BTreeMap<u32, u64>,
}

impl NormalForm {
    /// The zero functor (empty sum).
    pub fn zero() -> Self {
        NormalForm::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Result<Self, FunctorError> {
        let mut nf = NormalForm::zero();
        for (exp, mult) in terms {
            nf.add_term(exp, mult)?;
        }
        Ok(nf)
    }

    /// Single monomial `X^exp`.
    pub fn monomial(exp: u32) -> Self {
        NormalForm {
            terms: BTreeMap::from([(exp, 1)]),
        }
    }

    pub fn terms(&self) -> &BTreeMap<u32, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent, `None` for the zero functor.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: u32, mult: u64) -> Result<(), FunctorError> {
        if mult == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot = slot.checked_add(mult).ok_or_else(|| {
            FunctorError::BudgetExceeded(format!("multiplicity of X^{exp} overflows"))
        })?;
        Ok(())
    }

    fn plus(&self, other: &NormalForm) -> Result<NormalForm, FunctorError> {
        let mut out = self.clone();
        for (&e, &m) in &other.terms {
            out.add_term(e, m)?;
        }
        Ok(out)
    }

    fn times(&self, other: &NormalForm, work: &mut Work) -> Result<NormalForm, FunctorError> {
        work.charge(self.terms.len().saturating_mul(other.terms.len()))?;
        let mut out = NormalForm::zero();
        for (&e1, &m1) in &self.terms {
            for (&e2, &m2) in &other.terms {
                let e = e1
                    .checked_add(e2)
                    .ok_or_else(|| FunctorError::BudgetExceeded("exponent overflows".into()))?;
                let m = m1
                    .checked_mul(m2)
                    .ok_or_else(|| FunctorError::BudgetExceeded("multiplicity overflows".into()))?;
                out.add_term(e, m)?;
            }
        }
        Ok(out)
    }

    /// Render back into an expression tree (`0` for the zero functor).
    pub fn render(&self) -> PolyFunctor {
        let mut summands: Vec<PolyFunctor> = self
            .terms
            .iter()
            .rev()
            .map(|(&exp, &mult)| match (exp, mult) {
                (0, m) => PolyFunctor::Const(m),
                (e, 1) => PolyFunctor::Pow(e),
                (e, m) => PolyFunctor::Prod(vec![PolyFunctor::Const(m), PolyFunctor::Pow(e)]),
            })
            .collect();
        match summands.len() {
            0 => PolyFunctor::Const(0),
            1 => summands.pop().unwrap(),
            _ => PolyFunctor::Sum(summands),
        }
    }

    /// Summands in enumeration order: descending exponent, each repeated `mult` times.
    fn summand_exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms
            .iter()
            .rev()
            .flat_map(|(&e, &m)| std::iter::repeat_n(e, m as usize))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: u32,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct NormalFormJson {
    terms: Vec<TermJson>,
}

impl From<NormalForm> for NormalFormJson {
    fn from(nf: NormalForm) -> Self {
        NormalFormJson {
            terms: nf
                .terms
                .iter()
                .rev()
                .map(|(&exp, &mult)| TermJson { exp, mult })
                .collect(),
        }
    }
}

impl TryFrom<NormalFormJson> for NormalForm {
    type Error = FunctorError;

    fn try_from(json: NormalFormJson) -> Result<Self, Self::Error> {
        let mut terms = BTreeMap::new();
        for t in json.terms {
            if t.mult == 0 {
                return Err(FunctorError::InvalidNormalForm(format!(
                    "zero multiplicity at X^{}",
                    t.exp
                )));
            }
            if terms.insert(t.exp, t.mult).is_some() {
                return Err(FunctorError::InvalidNormalForm(format!(
                    "duplicate exponent {}",
                    t.exp
                )));
            }
        }
        Ok(NormalForm { terms })
    }
}

struct Work {
    used: usize,
    limit: usize,
}

impl Work {
    fn charge(&mut self, amount: usize) -> Result<(), FunctorError> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.limit {
            return Err(FunctorError::BudgetExceeded(format!(
                "normalization needs more than {} steps",
                self.limit
            )));
        }
        Ok(())
    }
}

/// Expand `f` into its sum-of-powers normal form using the default budget.
pub fn normalize(f: &PolyFunctor) -> Result<NormalForm, FunctorError> {
    normalize_with(f, &Budget::default())
}

pub fn normalize_with(f: &PolyFunctor, budget: &Budget) -> Result<NormalForm, FunctorError> {
    f.validate(budget)?;
    let mut work = Work {
        used: 0,
        limit: budget.nodes,
    };
    expand(f, &mut work)
}

fn expand(f: &PolyFunctor, work: &mut Work) -> Result<NormalForm, FunctorError> {
    work.charge(1)?;
    match f {
        PolyFunctor::Const(c) => NormalForm::from_terms([(0, *c)]),
        PolyFunctor::Var => Ok(NormalForm::monomial(1)),
        PolyFunctor::Pow(k) => Ok(NormalForm::monomial(*k)),
        PolyFunctor::Sum(cs) => cs
            .iter()
            .try_fold(NormalForm::zero(), |acc, c| acc.plus(&expand(c, work)?)),
        PolyFunctor::Prod(cs) => cs.iter().try_fold(NormalForm::monomial(0), |acc, c| {
            acc.times(&expand(c, work)?, work)
        }),
    }
}

/// A finite carrier set `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSet {
    size: usize,
}

impl FiniteSet {
    pub fn new(size: usize) -> Self {
        FiniteSet { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// Exact size of `F(A)` for `|A| = n`.
pub fn cardinality(nf: &NormalForm, n: usize) -> BigUint {
    let base = BigUint::from(n);
    nf.terms.iter().fold(BigUint::zero(), |acc, (&e, &m)| {
        acc + BigUint::from(m) * base.pow(e)
    })
}

/// An element of `F(A)`: which summand it lives in, and its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    pub summand: usize,
    pub coords: Vec<usize>,
}

/// List every element of `F(A)` in lexicographic `(summand, coords)` order.
///
/// Summands are numbered in descending exponent order; a term with
/// multiplicity `m` contributes `m` consecutive summands.
pub fn enumerate(nf: &NormalForm, set: FiniteSet) -> Result<Vec<Element>, FunctorError> {
    enumerate_with(nf, set, &Budget::default())
}

pub fn enumerate_with(
    nf: &NormalForm,
    set: FiniteSet,
    budget: &Budget,
) -> Result<Vec<Element>, FunctorError> {
    let total = cardinality(nf, set.size());
    let total = total
        .to_usize()
        .filter(|&t| t <= budget.enumeration)
        .ok_or_else(|| {
            FunctorError::BudgetExceeded(format!(
                "{total} elements exceed the enumeration limit {}",
                budget.enumeration
            ))
        })?;
    let mut out = Vec::with_capacity(total);
    for (summand, exp) in nf.summand_exponents().enumerate() {
        let width = exp as usize;
        // summand sizes are bounded by `total`, checked above
        let count = set.size().pow(exp);
        for index in 0..count {
            let mut coords = vec![0usize; width];
            let mut rest = index;
            for slot in coords.iter_mut().rev() {
                *slot = rest % set.size();
                rest /= set.size();
            }
            out.push(Element { summand, coords });
        }
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// `n^n`, the number of total functions on an `n`-element set.
pub fn function_space_size(n: usize) -> BigUint {
    let base = BigUint::from(n);
    if n == 0 {
        return BigUint::one();
    }
    base.pow(n as u32)
}
