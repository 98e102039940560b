//! Text syntax: `0`, `1` (any natural), `X`, `X^k`, `f + g`, `f * g`, parentheses.

use super::{FunctorError, PolyFunctor};

/// Parse a functor expression. Whitespace is ignored; `+` and `*` are left
/// associative and flattened into n-ary nodes.
pub fn parse_functor(text: &str) -> Result<PolyFunctor, FunctorError> {
    let mut p = Parser {
        chars: text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        pos: 0,
        len: text.chars().count(),
    };
    let f = p.sum()?;
    if let Some(&(col, c)) = p.chars.get(p.pos) {
        return Err(p.error_at(col, format!("unexpected '{c}'")));
    }
    Ok(f)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn error_at(&self, column: usize, message: String) -> FunctorError {
        FunctorError::Syntax {
            column: column + 1,
            message,
        }
    }

    fn sum(&mut self) -> Result<PolyFunctor, FunctorError> {
        let mut terms = vec![self.product()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.product()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PolyFunctor::Sum(terms)
        })
    }

    fn product(&mut self) -> Result<PolyFunctor, FunctorError> {
        let mut factors = vec![self.atom()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.atom()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PolyFunctor::Prod(factors)
        })
    }

    fn atom(&mut self) -> Result<PolyFunctor, FunctorError> {
        let col = self.column();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error_at(self.column(), "expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('X') => {
                self.pos += 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let k = self.natural()?;
                    let k = u32::try_from(k)
                        .map_err(|_| self.error_at(col, "exponent too large".into()))?;
                    Ok(PolyFunctor::Pow(k))
                } else {
                    Ok(PolyFunctor::Var)
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(PolyFunctor::Const(self.natural()?)),
            Some(c) => Err(self.error_at(col, format!("unexpected '{c}'"))),
            None => Err(self.error_at(col, "unexpected end of input".into())),
        }
    }

    fn natural(&mut self) -> Result<u64, FunctorError> {
        let col = self.column();
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error_at(col, "expected a natural number".into()));
        }
        digits
            .parse()
            .map_err(|_| self.error_at(col, format!("number {digits} out of range")))
    }
}
