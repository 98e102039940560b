use std::collections::BTreeSet;

use super::{ProofError, Term};

/// Step budget used when callers have no opinion.
pub const DEFAULT_FUEL: u64 = 100_000;

/// Reduction strategy.
///
/// `Full` contracts the leftmost-outermost redex anywhere, including under
/// binders and inside case branches, and stops at the β-normal form. `Weak`
/// is call-by-value and never reduces under `λ` or inside unselected
/// branches; for closed terms it stops at a value, which already has the same
/// denotation as the full normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Full,
    Weak,
}

fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding `body[x := s]`.
pub fn substitute(body: &Term, x: &str, s: &Term) -> Term {
    let fv = s.free_vars();
    subst(body, x, s, &fv)
}

/// Rebinds `y` in `body` to a name that cannot capture anything in `fv`.
fn rebind(y: &str, body: &Term, x: &str, fv: &BTreeSet<String>) -> (String, Term) {
    if !fv.contains(y) {
        return (y.to_owned(), body.clone());
    }
    let mut avoid = fv.clone();
    avoid.extend(body.free_vars());
    avoid.insert(x.to_owned());
    let y2 = fresh(y, &avoid);
    let renamed = substitute(body, y, &Term::Var(y2.clone()));
    (y2, renamed)
}

fn subst(t: &Term, x: &str, s: &Term, fv: &BTreeSet<String>) -> Term {
    let go = |u: &Term| Box::new(subst(u, x, s, fv));
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => t.clone(),
        Term::Lam(y, ty, body) => {
            if y == x {
                return t.clone();
            }
            let (y, body) = rebind(y, body, x, fv);
            Term::Lam(y, ty.clone(), Box::new(subst(&body, x, s, fv)))
        }
        Term::App(a, b) => Term::App(go(a), go(b)),
        Term::Pair(a, b) => Term::Pair(go(a), go(b)),
        Term::Fst(a) => Term::Fst(go(a)),
        Term::Snd(a) => Term::Snd(go(a)),
        Term::Inl(a, ty) => Term::Inl(go(a), ty.clone()),
        Term::Inr(a, ty) => Term::Inr(go(a), ty.clone()),
        Term::Case(scrut, y, l, z, r) => {
            let branch = |v: &String, b: &Term| {
                if v == x {
                    (v.clone(), b.clone())
                } else {
                    let (v, b) = rebind(v, b, x, fv);
                    let b = subst(&b, x, s, fv);
                    (v, b)
                }
            };
            let (y, l) = branch(y, l);
            let (z, r) = branch(z, r);
            Term::Case(go(scrut), y, Box::new(l), z, Box::new(r))
        }
    }
}

/// Contracts a redex at the root, if there is one.
fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match (&**f, &**a) {
            (Term::Lam(x, _, body), _) => Some(substitute(body, x, a)),
            (Term::Succ(n), Term::Elem { index, size }) if n == size => Some(Term::Elem {
                index: (index + 1) % size,
                size: *size,
            }),
            _ => None,
        },
        Term::Fst(p) => match &**p {
            Term::Pair(l, _) => Some((**l).clone()),
            _ => None,
        },
        Term::Snd(p) => match &**p {
            Term::Pair(_, r) => Some((**r).clone()),
            _ => None,
        },
        Term::Case(s, x, l, y, r) => match &**s {
            Term::Inl(v, _) => Some(substitute(l, x, v)),
            Term::Inr(v, _) => Some(substitute(r, y, v)),
            _ => None,
        },
        _ => None,
    }
}

/// One leftmost-outermost step.
fn step_full(t: &Term) -> Option<Term> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        Term::App(f, a) => step_full(f)
            .map(|f| Term::App(Box::new(f), a.clone()))
            .or_else(|| step_full(a).map(|a| Term::App(f.clone(), Box::new(a)))),
        Term::Pair(l, r) => step_full(l)
            .map(|l| Term::Pair(Box::new(l), r.clone()))
            .or_else(|| step_full(r).map(|r| Term::Pair(l.clone(), Box::new(r)))),
        Term::Lam(x, ty, b) => step_full(b).map(|b| Term::Lam(x.clone(), ty.clone(), Box::new(b))),
        Term::Fst(p) => step_full(p).map(|p| Term::Fst(Box::new(p))),
        Term::Snd(p) => step_full(p).map(|p| Term::Snd(Box::new(p))),
        Term::Inl(v, ty) => step_full(v).map(|v| Term::Inl(Box::new(v), ty.clone())),
        Term::Inr(v, ty) => step_full(v).map(|v| Term::Inr(Box::new(v), ty.clone())),
        Term::Case(s, x, l, y, r) => {
            if let Some(s) = step_full(s) {
                return Some(Term::Case(
                    Box::new(s),
                    x.clone(),
                    l.clone(),
                    y.clone(),
                    r.clone(),
                ));
            }
            if let Some(l) = step_full(l) {
                return Some(Term::Case(
                    s.clone(),
                    x.clone(),
                    Box::new(l),
                    y.clone(),
                    r.clone(),
                ));
            }
            step_full(r)
                .map(|r| Term::Case(s.clone(), x.clone(), l.clone(), y.clone(), Box::new(r)))
        }
        Term::Var(_) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => None,
    }
}

fn is_value(t: &Term) -> bool {
    match t {
        Term::Lam(..) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => true,
        Term::Pair(l, r) => is_value(l) && is_value(r),
        Term::Inl(v, _) | Term::Inr(v, _) => is_value(v),
        _ => false,
    }
}

/// One call-by-value step. Stuck open terms are left alone.
fn step_weak(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if !is_value(f) {
                return step_weak(f).map(|f| Term::App(Box::new(f), a.clone()));
            }
            if !is_value(a) {
                return step_weak(a).map(|a| Term::App(f.clone(), Box::new(a)));
            }
            contract(t)
        }
        Term::Pair(l, r) => step_weak(l)
            .map(|l| Term::Pair(Box::new(l), r.clone()))
            .or_else(|| step_weak(r).map(|r| Term::Pair(l.clone(), Box::new(r)))),
        Term::Fst(p) | Term::Snd(p) => {
            if is_value(p) {
                return contract(t);
            }
            let p = Box::new(step_weak(p)?);
            Some(if matches!(t, Term::Fst(_)) {
                Term::Fst(p)
            } else {
                Term::Snd(p)
            })
        }
        Term::Inl(v, ty) => step_weak(v).map(|v| Term::Inl(Box::new(v), ty.clone())),
        Term::Inr(v, ty) => step_weak(v).map(|v| Term::Inr(Box::new(v), ty.clone())),
        Term::Case(s, x, l, y, r) => {
            if is_value(s) {
                return contract(t);
            }
            step_weak(s)
                .map(|s| Term::Case(Box::new(s), x.clone(), l.clone(), y.clone(), r.clone()))
        }
        Term::Lam(..) | Term::Var(_) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => None,
    }
}

/// Reduces to full normal form within `fuel` steps.
pub fn normalize_term(t: &Term, fuel: u64) -> Result<Term, ProofError> {
    normalize_with(t, fuel, Strategy::Full)
}

pub fn normalize_with(t: &Term, fuel: u64, strategy: Strategy) -> Result<Term, ProofError> {
    normalize_counting(t, fuel, strategy).map(|(t, _)| t)
}

/// Like [`normalize_with`], also returning the number of steps taken.
pub fn normalize_counting(
    t: &Term,
    fuel: u64,
    strategy: Strategy,
) -> Result<(Term, u64), ProofError> {
    let step = match strategy {
        Strategy::Full => step_full,
        Strategy::Weak => step_weak,
    };
    let mut current = t.clone();
    let mut steps = 0;
    while let Some(next) = step(&current) {
        if steps == fuel {
            return Err(ProofError::FuelExhausted { fuel });
        }
        steps += 1;
        current = next;
    }
    Ok((current, steps))
}
