use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::{type_of, ProofError, Term, Type};
use crate::quotient_he::FunctionTable;

/// Largest function domain that [`denote`] will tabulate.
pub const MAX_TABLE_DOMAIN: u64 = 4096;

/// A closed value of the finite-set semantics.
///
/// Functions are tabulated over their domain in enumeration order: the
/// elements of `Base n` are `0..n`, products are ordered lexicographically,
/// sums list the left summand first, and function spaces are ordered like
/// [`FunctionTable::code`] with the first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Denotation {
    Elem {
        index: u32,
    },
    Unit,
    Pair {
        left: Box<Denotation>,
        right: Box<Denotation>,
    },
    Inl {
        value: Box<Denotation>,
    },
    Inr {
        value: Box<Denotation>,
    },
    Table {
        entries: Vec<Denotation>,
    },
}

impl Denotation {
    /// Reads a table of length `n` with entries below `n` as a function table.
    pub fn as_function_table(&self) -> Option<FunctionTable> {
        let Denotation::Table { entries } = self else {
            return None;
        };
        let n = entries.len();
        let values = entries
            .iter()
            .map(|d| match d {
                Denotation::Elem { index } if (*index as usize) < n => Some(*index),
                _ => None,
            })
            .collect::<Option<Vec<u32>>>()?;
        FunctionTable::new(values).ok()
    }

    /// Whether this value belongs to the semantic set of `ty`.
    pub fn inhabits(&self, ty: &Type) -> bool {
        match (self, ty) {
            (Denotation::Elem { index }, Type::Base(n)) => index < n,
            (Denotation::Unit, Type::Unit) => true,
            (Denotation::Pair { left, right }, Type::Prod(l, r)) => {
                left.inhabits(l) && right.inhabits(r)
            }
            (Denotation::Inl { value }, Type::Sum(l, _)) => value.inhabits(l),
            (Denotation::Inr { value }, Type::Sum(_, r)) => value.inhabits(r),
            (Denotation::Table { entries }, Type::Arrow(d, c)) => {
                d.cardinality() == Some(entries.len() as u64)
                    && entries.iter().all(|e| e.inhabits(c))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Denotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denotation::Elem { index } => write!(f, "{index}"),
            Denotation::Unit => write!(f, "()"),
            Denotation::Pair { left, right } => write!(f, "<{left}, {right}>"),
            Denotation::Inl { value } => write!(f, "inl {value}"),
            Denotation::Inr { value } => write!(f, "inr {value}"),
            Denotation::Table { entries } => {
                write!(f, "(")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Env {
    Empty,
    Bind(String, Value, Rc<Env>),
}

impl Env {
    fn lookup(&self, x: &str) -> Option<&Value> {
        let mut env = self;
        loop {
            match env {
                Env::Empty => return None,
                Env::Bind(y, v, rest) => {
                    if y == x {
                        return Some(v);
                    }
                    env = rest;
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Value {
    Elem(u32, u32),
    Unit,
    Pair(Rc<Value>, Rc<Value>),
    Inl(Rc<Value>),
    Inr(Rc<Value>),
    Closure(String, Rc<Term>, Rc<Env>),
    Succ(u32),
    /// A decoded function-space element, indexed by argument position.
    Table(Type, Rc<Vec<Value>>),
}

fn internal(msg: impl Into<String>) -> ProofError {
    ProofError::Semantics(msg.into())
}

fn bind(env: &Rc<Env>, x: &str, v: Value) -> Rc<Env> {
    Rc::new(Env::Bind(x.to_owned(), v, env.clone()))
}

fn eval(t: &Term, env: &Rc<Env>) -> Result<Value, ProofError> {
    Ok(match t {
        Term::Var(x) => env
            .lookup(x)
            .cloned()
            .ok_or_else(|| ProofError::UnboundVariable(x.clone()))?,
        Term::Unit => Value::Unit,
        Term::Elem { index, size } => Value::Elem(*index, *size),
        Term::Succ(n) => Value::Succ(*n),
        Term::Lam(x, _, body) => Value::Closure(x.clone(), Rc::new((**body).clone()), env.clone()),
        Term::App(f, a) => apply(&eval(f, env)?, eval(a, env)?)?,
        Term::Pair(l, r) => Value::Pair(Rc::new(eval(l, env)?), Rc::new(eval(r, env)?)),
        Term::Fst(p) | Term::Snd(p) => match eval(p, env)? {
            Value::Pair(l, r) => (*if matches!(t, Term::Fst(_)) { l } else { r }).clone(),
            _ => return Err(internal("projection from a non-pair")),
        },
        Term::Inl(v, _) => Value::Inl(Rc::new(eval(v, env)?)),
        Term::Inr(v, _) => Value::Inr(Rc::new(eval(v, env)?)),
        Term::Case(s, x, l, y, r) => match eval(s, env)? {
            Value::Inl(v) => eval(l, &bind(env, x, (*v).clone()))?,
            Value::Inr(v) => eval(r, &bind(env, y, (*v).clone()))?,
            _ => return Err(internal("case on a non-injection")),
        },
    })
}

fn apply(f: &Value, a: Value) -> Result<Value, ProofError> {
    match f {
        Value::Closure(x, body, env) => eval(body, &bind(env, x, a)),
        Value::Succ(n) => match a {
            Value::Elem(i, m) if m == *n => Ok(Value::Elem((i + 1) % n, *n)),
            _ => Err(internal("successor applied to a foreign element")),
        },
        Value::Table(dom, entries) => {
            let i = index_of(&a, dom)?;
            entries
                .get(i as usize)
                .cloned()
                .ok_or_else(|| internal("table argument out of range"))
        }
        _ => Err(internal("application of a non-function")),
    }
}

fn table_domain(dom: &Type) -> Result<u64, ProofError> {
    match dom.cardinality() {
        Some(size) if size <= MAX_TABLE_DOMAIN => Ok(size),
        _ => Err(ProofError::DenotationTooLarge {
            ty: dom.to_string(),
            limit: MAX_TABLE_DOMAIN,
        }),
    }
}

fn too_large(ty: &Type) -> ProofError {
    ProofError::DenotationTooLarge {
        ty: ty.to_string(),
        limit: MAX_TABLE_DOMAIN,
    }
}

/// Position of `v` in the enumeration of `ty`.
fn index_of(v: &Value, ty: &Type) -> Result<u64, ProofError> {
    match (v, ty) {
        (Value::Elem(i, _), Type::Base(_)) => Ok(u64::from(*i)),
        (Value::Unit, Type::Unit) => Ok(0),
        (Value::Pair(l, r), Type::Prod(lt, rt)) => {
            let width = rt.cardinality().ok_or_else(|| too_large(ty))?;
            index_of(l, lt)?
                .checked_mul(width)
                .and_then(|x| x.checked_add(index_of(r, rt).ok()?))
                .ok_or_else(|| too_large(ty))
        }
        (Value::Inl(v), Type::Sum(lt, _)) => index_of(v, lt),
        (Value::Inr(v), Type::Sum(lt, rt)) => {
            let offset = lt.cardinality().ok_or_else(|| too_large(ty))?;
            Ok(offset + index_of(v, rt)?)
        }
        (f, Type::Arrow(dom, cod)) => {
            let size = table_domain(dom)?;
            let base = cod.cardinality().ok_or_else(|| too_large(ty))?;
            let mut acc: u64 = 0;
            for j in 0..size {
                let out = apply(f, decode(dom, j)?)?;
                acc = acc
                    .checked_mul(base)
                    .and_then(|x| x.checked_add(index_of(&out, cod).ok()?))
                    .ok_or_else(|| too_large(ty))?;
            }
            Ok(acc)
        }
        _ => Err(internal("value does not match its type")),
    }
}

/// The `k`-th element of `ty`.
fn decode(ty: &Type, k: u64) -> Result<Value, ProofError> {
    match ty {
        Type::Base(n) => Ok(Value::Elem(k as u32, *n)),
        Type::Unit => Ok(Value::Unit),
        Type::Prod(l, r) => {
            let width = r.cardinality().ok_or_else(|| too_large(ty))?;
            Ok(Value::Pair(
                Rc::new(decode(l, k / width)?),
                Rc::new(decode(r, k % width)?),
            ))
        }
        Type::Sum(l, r) => {
            let left = l.cardinality().ok_or_else(|| too_large(ty))?;
            if k < left {
                Ok(Value::Inl(Rc::new(decode(l, k)?)))
            } else {
                Ok(Value::Inr(Rc::new(decode(r, k - left)?)))
            }
        }
        Type::Arrow(dom, cod) => {
            let size = table_domain(dom)?;
            let base = cod.cardinality().ok_or_else(|| too_large(ty))?;
            let mut digits = vec![0u64; size as usize];
            let mut rest = k;
            for d in digits.iter_mut().rev() {
                *d = rest % base;
                rest /= base;
            }
            let entries = digits
                .into_iter()
                .map(|d| decode(cod, d))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Value::Table((**dom).clone(), Rc::new(entries)))
        }
    }
}

fn reify(v: &Value, ty: &Type) -> Result<Denotation, ProofError> {
    Ok(match (v, ty) {
        (Value::Elem(i, _), Type::Base(_)) => Denotation::Elem { index: *i },
        (Value::Unit, Type::Unit) => Denotation::Unit,
        (Value::Pair(l, r), Type::Prod(lt, rt)) => Denotation::Pair {
            left: Box::new(reify(l, lt)?),
            right: Box::new(reify(r, rt)?),
        },
        (Value::Inl(x), Type::Sum(lt, _)) => Denotation::Inl {
            value: Box::new(reify(x, lt)?),
        },
        (Value::Inr(x), Type::Sum(_, rt)) => Denotation::Inr {
            value: Box::new(reify(x, rt)?),
        },
        (f, Type::Arrow(dom, cod)) => {
            let size = table_domain(dom)?;
            let entries = (0..size)
                .map(|j| reify(&apply(f, decode(dom, j)?)?, cod))
                .collect::<Result<Vec<_>, _>>()?;
            Denotation::Table { entries }
        }
        _ => return Err(internal("value does not match its type")),
    })
}

/// Meaning of a closed, well-typed term.
pub fn denote(t: &Term) -> Result<Denotation, ProofError> {
    let ty = type_of(t)?;
    let v = eval(t, &Rc::new(Env::Empty))?;
    reify(&v, &ty)
}
