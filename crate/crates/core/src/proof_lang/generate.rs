//! Random closed, well-typed terms for property tests and corpora.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Term, Type};
use crate::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Upper bound on [`Term::depth`] of emitted terms.
    pub max_depth: usize,
    pub max_base: u32,
    pub max_type_depth: usize,
    /// Largest function domain a generated type may have.
    pub max_domain: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_depth: 6,
            max_base: 3,
            max_type_depth: 2,
            max_domain: 8,
        }
    }
}

const NAMES: &[&str] = &["x", "y", "z"];

struct Gen<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    cfg: GeneratorConfig,
    ctx: Vec<(String, Type)>,
}

impl<R: Rng + ?Sized> Gen<'_, R> {
    fn base(&mut self) -> Type {
        if self.rng.random_ratio(1, 5) {
            Type::Unit
        } else {
            Type::Base(self.rng.random_range(1..=self.cfg.max_base))
        }
    }

    fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.random_ratio(2, 5) {
            return self.base();
        }
        let l = self.ty(depth - 1);
        let r = self.ty(depth - 1);
        match self.rng.random_range(0..3) {
            0 => Type::prod(l, r),
            1 => Type::sum(l, r),
            _ => {
                if l.cardinality().is_some_and(|c| c <= self.cfg.max_domain) {
                    Type::arrow(l, r)
                } else {
                    Type::arrow(self.base(), r)
                }
            }
        }
    }

    /// Variables of type `ty` that are not shadowed.
    fn visible(&self, ty: &Type) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (x, t)) in self.ctx.iter().enumerate() {
            let shadowed = self.ctx[i + 1..].iter().any(|(y, _)| y == x);
            if t == ty && !shadowed {
                out.push(x.clone());
            }
        }
        out
    }

    fn binder(&mut self) -> String {
        NAMES.choose(self.rng).expect("nonempty").to_string()
    }

    fn under(&mut self, x: &str, ty: Type, body_ty: &Type, depth: usize) -> Term {
        self.ctx.push((x.to_owned(), ty));
        let body = self.term(body_ty, depth);
        self.ctx.pop();
        body
    }

    /// An introduction form for `ty` with subterms at `depth`.
    fn intro(&mut self, ty: &Type, depth: usize) -> Term {
        match ty {
            Type::Base(n) => Term::elem(self.rng.random_range(0..*n), *n),
            Type::Unit => Term::Unit,
            Type::Prod(l, r) => Term::pair(self.term(l, depth), self.term(r, depth)),
            Type::Sum(l, r) => {
                if self.rng.random_bool(0.5) {
                    Term::inl(self.term(l, depth), ty.clone())
                } else {
                    Term::inr(self.term(r, depth), ty.clone())
                }
            }
            Type::Arrow(d, c) => {
                if let (Type::Base(a), Type::Base(b)) = (&**d, &**c) {
                    if a == b && self.rng.random_ratio(1, 4) {
                        return Term::Succ(*a);
                    }
                }
                let x = self.binder();
                let body = self.under(&x, (**d).clone(), c, depth);
                Term::Lam(x, (**d).clone(), Box::new(body))
            }
        }
    }

    fn term(&mut self, ty: &Type, depth: usize) -> Term {
        let vars = self.visible(ty);
        if !vars.is_empty() && self.rng.random_ratio(1, 3) {
            return Term::Var(vars.choose(self.rng).expect("nonempty").clone());
        }
        if depth == 0 {
            return self.intro(ty, 0);
        }
        let d = depth - 1;
        match self.rng.random_range(0..6) {
            0 => self.intro(ty, d),
            2 => {
                let arg_ty = self.ty(1);
                if arg_ty
                    .cardinality()
                    .is_some_and(|c| c > self.cfg.max_domain)
                {
                    return self.intro(ty, d);
                }
                let f = self.term(&Type::arrow(arg_ty.clone(), ty.clone()), d);
                let a = self.term(&arg_ty, d);
                Term::app(f, a)
            }
            3 => {
                let other = self.ty(1);
                if self.rng.random_bool(0.5) {
                    Term::fst(self.term(&Type::prod(ty.clone(), other), d))
                } else {
                    Term::snd(self.term(&Type::prod(other, ty.clone()), d))
                }
            }
            4 => {
                let (l, r) = (self.ty(1), self.ty(1));
                let scrutinee = self.term(&Type::sum(l.clone(), r.clone()), d);
                let (x, y) = (self.binder(), self.binder());
                let left = self.under(&x, l, ty, d);
                let right = self.under(&y, r, ty, d);
                Term::Case(Box::new(scrutinee), x, Box::new(left), y, Box::new(right))
            }
            _ => match ty {
                Type::Base(n) => Term::app(Term::Succ(*n), self.term(ty, d)),
                _ => self.intro(ty, d),
            },
        }
    }
}

/// A closed term of depth at most `cfg.max_depth`, with its type.
pub fn generate_term<R: Rng + ?Sized>(rng: &mut R, cfg: &GeneratorConfig) -> (Term, Type) {
    loop {
        let mut g = Gen {
            rng: &mut *rng,
            cfg: *cfg,
            ctx: Vec::new(),
        };
        let ty = g.ty(cfg.max_type_depth);
        let top = cfg.max_depth.saturating_sub(2);
        let budget = g.rng.random_range(top.min(2)..=top);
        let t = g.term(&ty, budget);
        if t.depth() <= cfg.max_depth {
            return (t, ty);
        }
    }
}

/// `count` terms drawn from a stream seeded with `seed`.
pub fn generate_corpus(seed: u64, count: usize, cfg: &GeneratorConfig) -> Vec<(Term, Type)> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| generate_term(&mut rng, cfg)).collect()
}
