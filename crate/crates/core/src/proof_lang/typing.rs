use super::{ProofError, Term, Type};

/// Typing context. Later bindings shadow earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    bindings: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, ty: Type) -> Self {
        self.bindings.push((name.to_owned(), ty));
        self
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.bindings
            .iter()
            .rev()
            .find(|(x, _)| x == name)
            .map(|(_, t)| t)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.iter().map(|(x, _)| x.as_str())
    }

    fn push(&mut self, name: &str, ty: Type) {
        self.bindings.push((name.to_owned(), ty));
    }

    fn pop(&mut self) {
        self.bindings.pop();
    }
}

fn mismatch(term: &Term, expected: impl Into<String>, found: &Type) -> ProofError {
    ProofError::TypeMismatch {
        term: term.to_string(),
        expected: expected.into(),
        found: found.to_string(),
    }
}

fn check_annotation(term: &Term, ty: &Type) -> Result<(), ProofError> {
    if ty.is_well_formed() {
        Ok(())
    } else {
        Err(ProofError::InvalidConstant {
            term: term.to_string(),
            reason: format!("annotation `{ty}` mentions an empty base type"),
        })
    }
}

fn infer(ctx: &mut Context, t: &Term) -> Result<Type, ProofError> {
    match t {
        Term::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| ProofError::UnboundVariable(x.clone())),
        Term::Unit => Ok(Type::Unit),
        Term::Elem { index, size } => {
            if index < size {
                Ok(Type::Base(*size))
            } else {
                Err(ProofError::InvalidConstant {
                    term: t.to_string(),
                    reason: format!("index {index} is outside B{size}"),
                })
            }
        }
        Term::Succ(0) => Err(ProofError::InvalidConstant {
            term: t.to_string(),
            reason: "B0 has no elements".into(),
        }),
        Term::Succ(n) => Ok(Type::arrow(Type::Base(*n), Type::Base(*n))),
        Term::Lam(x, ty, body) => {
            check_annotation(t, ty)?;
            ctx.push(x, ty.clone());
            let body_ty = infer(ctx, body);
            ctx.pop();
            Ok(Type::arrow(ty.clone(), body_ty?))
        }
        Term::App(f, a) => {
            let f_ty = infer(ctx, f)?;
            let Type::Arrow(dom, cod) = f_ty else {
                return Err(mismatch(f, "a function type", &f_ty));
            };
            let a_ty = infer(ctx, a)?;
            if a_ty != *dom {
                return Err(mismatch(a, dom.to_string(), &a_ty));
            }
            Ok(*cod)
        }
        Term::Pair(l, r) => Ok(Type::prod(infer(ctx, l)?, infer(ctx, r)?)),
        Term::Fst(p) | Term::Snd(p) => match infer(ctx, p)? {
            Type::Prod(l, r) => Ok(if matches!(t, Term::Fst(_)) { *l } else { *r }),
            other => Err(mismatch(p, "a product type", &other)),
        },
        Term::Inl(inner, ann) | Term::Inr(inner, ann) => {
            check_annotation(t, ann)?;
            let Type::Sum(l, r) = ann else {
                return Err(ProofError::TypeMismatch {
                    term: t.to_string(),
                    expected: "a sum type annotation".into(),
                    found: ann.to_string(),
                });
            };
            let want = if matches!(t, Term::Inl(..)) { l } else { r };
            let got = infer(ctx, inner)?;
            if got != **want {
                return Err(mismatch(inner, want.to_string(), &got));
            }
            Ok(ann.clone())
        }
        Term::Case(s, x, left, y, right) => {
            let s_ty = infer(ctx, s)?;
            let Type::Sum(l, r) = s_ty else {
                return Err(mismatch(s, "a sum type", &s_ty));
            };
            ctx.push(x, *l);
            let left_ty = infer(ctx, left);
            ctx.pop();
            let left_ty = left_ty?;
            ctx.push(y, *r);
            let right_ty = infer(ctx, right);
            ctx.pop();
            let right_ty = right_ty?;
            if left_ty != right_ty {
                return Err(mismatch(right, left_ty.to_string(), &right_ty));
            }
            Ok(left_ty)
        }
    }
}

/// The unique type of `t` in `ctx`.
pub fn typecheck(ctx: &Context, t: &Term) -> Result<Type, ProofError> {
    let mut scratch = ctx.clone();
    infer(&mut scratch, t)
}

/// Shorthand for closed terms.
pub fn type_of(t: &Term) -> Result<Type, ProofError> {
    typecheck(&Context::new(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof_lang::{parse, parse_with_scope};

    fn b(n: u32) -> Type {
        Type::Base(n)
    }

    #[test]
    fn identity_and_pairing() {
        assert_eq!(
            type_of(&parse("\\x:B4. x").unwrap()).unwrap(),
            Type::arrow(b(4), b(4))
        );
        assert_eq!(
            type_of(&parse("((), e0_4)").unwrap()).unwrap(),
            Type::prod(Type::Unit, b(4))
        );
    }

    #[test]
    fn applying_a_non_function_reports_the_head() {
        match type_of(&Term::app(Term::elem(0, 4), Term::Unit)) {
            Err(ProofError::TypeMismatch { term, found, .. }) => {
                assert_eq!(term, "e0_4");
                assert_eq!(found, "B4");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn argument_mismatch_reports_the_argument() {
        match type_of(&parse("succ4 e1_5").unwrap()) {
            Err(ProofError::TypeMismatch {
                term,
                expected,
                found,
            }) => {
                assert_eq!(
                    (term.as_str(), expected.as_str(), found.as_str()),
                    ("e1_5", "B4", "B5")
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbound_variables() {
        assert!(
            matches!(type_of(&Term::var("z")), Err(ProofError::UnboundVariable(x)) if x == "z")
        );
        let t = parse_with_scope("f e0_2", &["f"]).unwrap();
        let ctx = Context::new().with("f", Type::arrow(b(2), Type::Unit));
        assert_eq!(typecheck(&ctx, &t).unwrap(), Type::Unit);
    }

    #[test]
    fn shadowing_uses_innermost_binding() {
        let t = parse("\\x:B2. \\x:Unit. x").unwrap();
        assert_eq!(
            type_of(&t).unwrap(),
            Type::arrow(b(2), Type::arrow(Type::Unit, Type::Unit))
        );
    }

    #[test]
    fn sums_and_case() {
        let t = parse("\\s:B2 + Unit. case s of {inl a -> succ2 a | inr u -> e0_2}").unwrap();
        assert_eq!(
            type_of(&t).unwrap(),
            Type::arrow(Type::sum(b(2), Type::Unit), b(2))
        );
        let bad = parse("\\s:B2 + Unit. case s of {inl a -> a | inr u -> u}").unwrap();
        assert!(matches!(
            type_of(&bad),
            Err(ProofError::TypeMismatch { .. })
        ));
        assert!(matches!(
            type_of(&parse("inl[B2] e0_2").unwrap()),
            Err(ProofError::TypeMismatch { .. })
        ));
        assert!(matches!(
            type_of(&parse("inr[B2 + B3] e0_2").unwrap()),
            Err(ProofError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn constants_are_range_checked() {
        assert!(matches!(
            type_of(&Term::elem(4, 4)),
            Err(ProofError::InvalidConstant { .. })
        ));
        assert!(matches!(
            type_of(&Term::Succ(0)),
            Err(ProofError::InvalidConstant { .. })
        ));
        assert!(matches!(
            type_of(&Term::lam("x", b(0), Term::Unit)),
            Err(ProofError::InvalidConstant { .. })
        ));
    }
}
