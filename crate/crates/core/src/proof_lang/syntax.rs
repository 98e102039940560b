use std::collections::BTreeSet;
use std::fmt;

/// Propositions of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    /// A finite carrier with `n >= 1` elements.
    Base(u32),
    Unit,
    Prod(Box<Type>, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn prod(l: Type, r: Type) -> Type {
        Type::Prod(Box::new(l), Box::new(r))
    }

    pub fn sum(l: Type, r: Type) -> Type {
        Type::Sum(Box::new(l), Box::new(r))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Size of the type's semantic set, `None` on overflow.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Type::Base(n) => Some(u64::from(*n)),
            Type::Unit => Some(1),
            Type::Prod(l, r) => l.cardinality()?.checked_mul(r.cardinality()?),
            Type::Sum(l, r) => l.cardinality()?.checked_add(r.cardinality()?),
            Type::Arrow(d, c) => c
                .cardinality()?
                .checked_pow(u32::try_from(d.cardinality()?).ok()?),
        }
    }

    /// Every `Base` carrier is nonempty.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Type::Base(n) => *n >= 1,
            Type::Unit => true,
            Type::Prod(l, r) | Type::Sum(l, r) | Type::Arrow(l, r) => {
                l.is_well_formed() && r.is_well_formed()
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 0: arrow (right assoc), 1: sum, 2: product, 3: atom
        fn go(t: &Type, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let own = match t {
                Type::Arrow(..) => 0,
                Type::Sum(..) => 1,
                Type::Prod(..) => 2,
                Type::Base(_) | Type::Unit => 3,
            };
            if own < prec {
                write!(f, "(")?;
            }
            match t {
                Type::Base(n) => write!(f, "B{n}")?,
                Type::Unit => write!(f, "Unit")?,
                Type::Arrow(d, c) => {
                    go(d, 1, f)?;
                    write!(f, " -> ")?;
                    go(c, 0, f)?;
                }
                Type::Sum(l, r) => {
                    go(l, 1, f)?;
                    write!(f, " + ")?;
                    go(r, 2, f)?;
                }
                Type::Prod(l, r) => {
                    go(l, 2, f)?;
                    write!(f, " * ")?;
                    go(r, 3, f)?;
                }
            }
            if own < prec {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

/// Proof terms. There is no recursion, so every well-typed term normalizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    /// Left injection, annotated with the full sum type.
    Inl(Box<Term>, Type),
    Inr(Box<Term>, Type),
    /// `case scrutinee of {inl x -> left | inr y -> right}`.
    Case(Box<Term>, String, Box<Term>, String, Box<Term>),
    Unit,
    /// Element `index` of `Base(size)`.
    Elem {
        index: u32,
        size: u32,
    },
    /// The map `i ↦ (i + 1) mod n` on `Base(n)`.
    Succ(u32),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn lam(name: &str, ty: Type, body: Term) -> Term {
        Term::Lam(name.to_owned(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(l: Term, r: Term) -> Term {
        Term::Pair(Box::new(l), Box::new(r))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Box::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Box::new(t))
    }

    pub fn inl(t: Term, sum: Type) -> Term {
        Term::Inl(Box::new(t), sum)
    }

    pub fn inr(t: Term, sum: Type) -> Term {
        Term::Inr(Box::new(t), sum)
    }

    pub fn case(scrutinee: Term, x: &str, left: Term, y: &str, right: Term) -> Term {
        Term::Case(
            Box::new(scrutinee),
            x.to_owned(),
            Box::new(left),
            y.to_owned(),
            Box::new(right),
        )
    }

    pub fn elem(index: u32, size: u32) -> Term {
        Term::Elem { index, size }
    }

    /// Height of the syntax tree.
    pub fn depth(&self) -> usize {
        1 + match self {
            Term::Var(_) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => 0,
            Term::Lam(_, _, b)
            | Term::Fst(b)
            | Term::Snd(b)
            | Term::Inl(b, _)
            | Term::Inr(b, _) => b.depth(),
            Term::App(a, b) | Term::Pair(a, b) => a.depth().max(b.depth()),
            Term::Case(s, _, l, _, r) => s.depth().max(l.depth()).max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            Term::Var(_) | Term::Unit | Term::Elem { .. } | Term::Succ(_) => 0,
            Term::Lam(_, _, b)
            | Term::Fst(b)
            | Term::Snd(b)
            | Term::Inl(b, _)
            | Term::Inr(b, _) => b.size(),
            Term::App(a, b) | Term::Pair(a, b) => a.size() + b.size(),
            Term::Case(s, _, l, _, r) => s.size() + l.size() + r.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Fst(t) | Term::Snd(t) | Term::Inl(t, _) | Term::Inr(t, _) => {
                t.collect_free(bound, out)
            }
            Term::Case(s, x, l, y, r) => {
                s.collect_free(bound, out);
                bound.push(x.clone());
                l.collect_free(bound, out);
                bound.pop();
                bound.push(y.clone());
                r.collect_free(bound, out);
                bound.pop();
            }
            Term::Unit | Term::Elem { .. } | Term::Succ(_) => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 0: binder level (λ, case), 1: application level, 2: atom
        fn go(t: &Term, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let own = match t {
                Term::Lam(..) | Term::Case(..) => 0,
                Term::App(..) | Term::Fst(_) | Term::Snd(_) | Term::Inl(..) | Term::Inr(..) => 1,
                _ => 2,
            };
            if own < prec {
                write!(f, "(")?;
            }
            match t {
                Term::Var(x) => write!(f, "{x}")?,
                Term::Unit => write!(f, "()")?,
                Term::Elem { index, size } => write!(f, "e{index}_{size}")?,
                Term::Succ(n) => write!(f, "succ{n}")?,
                Term::Lam(x, ty, b) => {
                    write!(f, "\\{x}:{ty}. ")?;
                    go(b, 0, f)?;
                }
                Term::App(a, b) => {
                    go(a, 1, f)?;
                    write!(f, " ")?;
                    go(b, 2, f)?;
                }
                Term::Pair(a, b) => {
                    write!(f, "(")?;
                    go(a, 0, f)?;
                    write!(f, ", ")?;
                    go(b, 0, f)?;
                    write!(f, ")")?;
                }
                Term::Fst(t) => {
                    write!(f, "fst ")?;
                    go(t, 2, f)?;
                }
                Term::Snd(t) => {
                    write!(f, "snd ")?;
                    go(t, 2, f)?;
                }
                Term::Inl(t, ty) => {
                    write!(f, "inl[{ty}] ")?;
                    go(t, 2, f)?;
                }
                Term::Inr(t, ty) => {
                    write!(f, "inr[{ty}] ")?;
                    go(t, 2, f)?;
                }
                Term::Case(s, x, l, y, r) => {
                    write!(f, "case ")?;
                    go(s, 0, f)?;
                    write!(f, " of {{inl {x} -> ")?;
                    go(l, 0, f)?;
                    write!(f, " | inr {y} -> ")?;
                    go(r, 0, f)?;
                    write!(f, "}}")?;
                }
            }
            if own < prec {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_printing_respects_precedence() {
        let t = Type::arrow(
            Type::arrow(Type::Base(2), Type::Unit),
            Type::sum(Type::Base(1), Type::prod(Type::Unit, Type::Base(3))),
        );
        assert_eq!(t.to_string(), "(B2 -> Unit) -> B1 + Unit * B3");
        let left_nested_sum = Type::sum(Type::Unit, Type::sum(Type::Base(1), Type::Base(2)));
        assert_eq!(left_nested_sum.to_string(), "Unit + (B1 + B2)");
    }

    #[test]
    fn cardinalities() {
        assert_eq!(
            Type::arrow(Type::Base(4), Type::Base(4)).cardinality(),
            Some(256)
        );
        assert_eq!(
            Type::sum(Type::Unit, Type::prod(Type::Base(2), Type::Base(3))).cardinality(),
            Some(7)
        );
        assert_eq!(
            Type::arrow(Type::Base(100), Type::Base(100)).cardinality(),
            None
        );
    }

    #[test]
    fn term_printing() {
        let id = Term::lam("x", Type::Base(4), Term::var("x"));
        assert_eq!(id.to_string(), "\\x:B4. x");
        assert_eq!(
            Term::app(id.clone(), Term::elem(2, 4)).to_string(),
            "(\\x:B4. x) e2_4"
        );
        let nested = Term::app(Term::Succ(4), Term::app(Term::Succ(4), Term::elem(0, 4)));
        assert_eq!(nested.to_string(), "succ4 (succ4 e0_4)");
        assert_eq!(
            Term::fst(Term::pair(Term::Unit, Term::elem(0, 1))).to_string(),
            "fst ((), e0_1)"
        );
    }

    #[test]
    fn free_variables_respect_binders() {
        let t = Term::lam("x", Type::Unit, Term::pair(Term::var("x"), Term::var("y")));
        assert_eq!(
            t.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["y".to_string()]
        );
        let c = Term::case(Term::var("s"), "a", Term::var("a"), "b", Term::var("a"));
        assert_eq!(
            c.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["a".to_string(), "s".to_string()]
        );
    }
}
