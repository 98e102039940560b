use super::{ProofError, Term, Type};

/// Inputs longer than this are rejected before lexing.
pub const MAX_INPUT_BYTES: usize = 1 << 20;

const KEYWORDS: &[&str] = &["fst", "snd", "inl", "inr", "case", "of", "Unit"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Ident(String),
    Base(u32),
    UnitTy,
    Elem(u32, u32),
    Succ(u32),
    Fst,
    Snd,
    Inl,
    Inr,
    Case,
    Of,
    Colon,
    Dot,
    Comma,
    Pipe,
    Arrow,
    Star,
    Plus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(x) => format!("identifier `{x}`"),
            Tok::Base(n) => format!("`B{n}`"),
            Tok::Elem(k, n) => format!("`e{k}_{n}`"),
            Tok::Succ(n) => format!("`succ{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Lambda => "\\",
            Tok::UnitTy => "Unit",
            Tok::Fst => "fst",
            Tok::Snd => "snd",
            Tok::Inl => "inl",
            Tok::Inr => "inr",
            Tok::Case => "case",
            Tok::Of => "of",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ProofError {
    ProofError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_number(digits: &str, line: usize, column: usize) -> Result<u32, ProofError> {
    digits
        .parse::<u32>()
        .map_err(|_| syntax(line, column, format!("number `{digits}` is out of range")))
}

/// `eK_N`, `succN`, `BN`, keywords, or a plain identifier.
fn classify_word(word: &str, line: usize, column: usize) -> Result<Tok, ProofError> {
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some(rest) = word.strip_prefix("succ") {
        if all_digits(rest) {
            return Ok(Tok::Succ(parse_number(rest, line, column)?));
        }
    }
    if let Some(rest) = word.strip_prefix('e') {
        if let Some((k, n)) = rest.split_once('_') {
            if all_digits(k) && all_digits(n) {
                return Ok(Tok::Elem(
                    parse_number(k, line, column)?,
                    parse_number(n, line, column)?,
                ));
            }
        }
    }
    if let Some(rest) = word.strip_prefix('B') {
        if all_digits(rest) {
            return Ok(Tok::Base(parse_number(rest, line, column)?));
        }
    }
    Ok(match word {
        "fst" => Tok::Fst,
        "snd" => Tok::Snd,
        "inl" => Tok::Inl,
        "inr" => Tok::Inr,
        "case" => Tok::Case,
        "of" => Tok::Of,
        "Unit" => Tok::UnitTy,
        _ => Tok::Ident(word.to_owned()),
    })
}

fn lex(text: &str) -> Result<Vec<Spanned>, ProofError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let mut push = |tok: Tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *column += width;
        };
        match c {
            '\\' | 'λ' => push(Tok::Lambda, 1, &mut i, &mut column),
            ':' => push(Tok::Colon, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '|' => push(Tok::Pipe, 1, &mut i, &mut column),
            '*' => push(Tok::Star, 1, &mut i, &mut column),
            '+' => push(Tok::Plus, 1, &mut i, &mut column),
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            '[' => push(Tok::LBracket, 1, &mut i, &mut column),
            ']' => push(Tok::RBracket, 1, &mut i, &mut column),
            '{' => push(Tok::LBrace, 1, &mut i, &mut column),
            '}' => push(Tok::RBrace, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut column),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = classify_word(&word, start_line, start_col)?;
                push(tok, j - i, &mut i, &mut column);
            }
            other => {
                return Err(syntax(
                    line,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ProofError {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ProofError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<String, ProofError> {
        match &self.peek().tok {
            Tok::Ident(x) => {
                let x = x.clone();
                self.bump();
                Ok(x)
            }
            other => Err(self.error_here(format!(
                "expected a variable name, found {}",
                other.describe()
            ))),
        }
    }

    // type := sum ('->' type)?
    fn ty(&mut self) -> Result<Type, ProofError> {
        let dom = self.sum_ty()?;
        if self.peek().tok == Tok::Arrow {
            self.bump();
            Ok(Type::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn sum_ty(&mut self) -> Result<Type, ProofError> {
        let mut t = self.prod_ty()?;
        while self.peek().tok == Tok::Plus {
            self.bump();
            t = Type::sum(t, self.prod_ty()?);
        }
        Ok(t)
    }

    fn prod_ty(&mut self) -> Result<Type, ProofError> {
        let mut t = self.atom_ty()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            t = Type::prod(t, self.atom_ty()?);
        }
        Ok(t)
    }

    fn atom_ty(&mut self) -> Result<Type, ProofError> {
        let here = self.peek().clone();
        match here.tok {
            Tok::Base(0) => Err(syntax(
                here.line,
                here.column,
                "base types need at least one element",
            )),
            Tok::Base(n) => {
                self.bump();
                Ok(Type::Base(n))
            }
            Tok::UnitTy => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(syntax(
                here.line,
                here.column,
                format!("expected a type, found {}", other.describe()),
            )),
        }
    }

    fn bound<T>(
        &mut self,
        name: String,
        f: impl FnOnce(&mut Self) -> Result<T, ProofError>,
    ) -> Result<T, ProofError> {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    // term := lambda | case | app
    fn term(&mut self) -> Result<Term, ProofError> {
        match self.peek().tok {
            Tok::Lambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.bound(x.clone(), |p| p.term())?;
                Ok(Term::Lam(x, ty, Box::new(body)))
            }
            Tok::Case => {
                self.bump();
                let scrutinee = self.term()?;
                self.expect(Tok::Of)?;
                self.expect(Tok::LBrace)?;
                self.expect(Tok::Inl)?;
                let x = self.ident()?;
                self.expect(Tok::Arrow)?;
                let left = self.bound(x.clone(), |p| p.term())?;
                self.expect(Tok::Pipe)?;
                self.expect(Tok::Inr)?;
                let y = self.ident()?;
                self.expect(Tok::Arrow)?;
                let right = self.bound(y.clone(), |p| p.term())?;
                self.expect(Tok::RBrace)?;
                Ok(Term::Case(
                    Box::new(scrutinee),
                    x,
                    Box::new(left),
                    y,
                    Box::new(right),
                ))
            }
            _ => self.app(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().tok,
            Tok::Ident(_) | Tok::Elem(..) | Tok::Succ(_) | Tok::LParen
        )
    }

    // app := head atom*
    fn app(&mut self) -> Result<Term, ProofError> {
        let mut t = self.head()?;
        while self.starts_atom() {
            t = Term::app(t, self.atom()?);
        }
        Ok(t)
    }

    fn head(&mut self) -> Result<Term, ProofError> {
        match self.peek().tok {
            Tok::Fst => {
                self.bump();
                Ok(Term::fst(self.atom()?))
            }
            Tok::Snd => {
                self.bump();
                Ok(Term::snd(self.atom()?))
            }
            Tok::Inl | Tok::Inr => {
                let left = self.bump().tok == Tok::Inl;
                self.expect(Tok::LBracket)?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket)?;
                let t = self.atom()?;
                Ok(if left {
                    Term::inl(t, ty)
                } else {
                    Term::inr(t, ty)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term, ProofError> {
        let here = self.peek().clone();
        match here.tok {
            Tok::Ident(x) => {
                if !self.scope.contains(&x) {
                    return Err(ProofError::Scope {
                        name: x,
                        line: here.line,
                        column: here.column,
                    });
                }
                self.bump();
                Ok(Term::Var(x))
            }
            Tok::Elem(index, size) => {
                self.bump();
                Ok(Term::Elem { index, size })
            }
            Tok::Succ(n) => {
                self.bump();
                Ok(Term::Succ(n))
            }
            Tok::LParen => {
                self.bump();
                if self.peek().tok == Tok::RParen {
                    self.bump();
                    return Ok(Term::Unit);
                }
                let first = self.term()?;
                if self.peek().tok == Tok::Comma {
                    self.bump();
                    let second = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::pair(first, second));
                }
                self.expect(Tok::RParen)?;
                Ok(first)
            }
            other => Err(syntax(
                here.line,
                here.column,
                format!("expected a term, found {}", other.describe()),
            )),
        }
    }
}

fn run<T>(
    text: &str,
    scope: &[&str],
    f: impl FnOnce(&mut Parser) -> Result<T, ProofError>,
) -> Result<T, ProofError> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(ProofError::InputTooLarge {
            bytes: text.len(),
            limit: MAX_INPUT_BYTES,
        });
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: scope.iter().map(|s| s.to_string()).collect(),
    };
    let out = f(&mut p)?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after the end",
            p.peek().tok.describe()
        )));
    }
    Ok(out)
}

/// Parses a closed term; any free variable is a scope error.
pub fn parse(text: &str) -> Result<Term, ProofError> {
    parse_with_scope(text, &[])
}

/// Parses a term whose free variables must be among `scope`.
pub fn parse_with_scope(text: &str, scope: &[&str]) -> Result<Term, ProofError> {
    run(text, scope, |p| p.term())
}

pub fn parse_type(text: &str) -> Result<Type, ProofError> {
    run(text, &[], |p| p.ty())
}

/// Whether `name` can be printed as a variable and read back unchanged.
pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let starts_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    starts_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&name)
        && matches!(classify_word(name, 1, 1), Ok(Tok::Ident(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_lambda() {
        assert_eq!(
            parse("\\x:B4. x").unwrap(),
            Term::lam("x", Type::Base(4), Term::var("x"))
        );
        assert_eq!(parse("λx:B4. x").unwrap(), parse("\\x:B4. x").unwrap());
    }

    #[test]
    fn nested_successor() {
        assert_eq!(
            parse("succ4 (succ4 e0_4)").unwrap(),
            Term::app(Term::Succ(4), Term::app(Term::Succ(4), Term::elem(0, 4)))
        );
    }

    #[test]
    fn unbound_variable_is_a_scope_error() {
        match parse("fst (x, y)") {
            Err(ProofError::Scope { name, line, column }) => {
                assert_eq!((name.as_str(), line, column), ("x", 1, 6));
            }
            other => panic!("expected a scope error, got {other:?}"),
        }
        assert!(parse_with_scope("fst (x, y)", &["x", "y"]).is_ok());
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_with_scope("f a b", &["f", "a", "b"]).unwrap();
        assert_eq!(
            t,
            Term::app(Term::app(Term::var("f"), Term::var("a")), Term::var("b"))
        );
    }

    #[test]
    fn type_precedence() {
        assert_eq!(
            parse_type("B1 * B2 + Unit -> B3 -> B4").unwrap(),
            Type::arrow(
                Type::sum(Type::prod(Type::Base(1), Type::Base(2)), Type::Unit),
                Type::arrow(Type::Base(3), Type::Base(4))
            )
        );
        assert_eq!(
            parse_type("B1 + B2 + B3").unwrap(),
            Type::sum(Type::sum(Type::Base(1), Type::Base(2)), Type::Base(3))
        );
    }

    #[test]
    fn case_and_injections() {
        let text = "case inl[B2 + Unit] e1_2 of {inl a -> a | inr b -> e0_2}";
        let sum = Type::sum(Type::Base(2), Type::Unit);
        assert_eq!(
            parse(text).unwrap(),
            Term::case(
                Term::inl(Term::elem(1, 2), sum),
                "a",
                Term::var("a"),
                "b",
                Term::elem(0, 2)
            )
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("\\x:B4.\n  (x") {
            Err(ProofError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        match parse("e0_4 $") {
            Err(ProofError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("\\x:B0. x"), Err(ProofError::Syntax { .. })));
        assert!(matches!(parse("(e0_1,)"), Err(ProofError::Syntax { .. })));
        assert!(matches!(parse(""), Err(ProofError::Syntax { .. })));
    }

    #[test]
    fn oversized_input_is_rejected() {
        let big = "(".repeat(MAX_INPUT_BYTES + 1);
        assert!(matches!(parse(&big), Err(ProofError::InputTooLarge { .. })));
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "\\x:B4. x",
            "(\\x:B4. x) e2_4",
            "\\f:B2 -> B2. \\x:B2. f (f x)",
            "fst ((), e0_1)",
            "\\p:(B2 + Unit) * B3. case fst p of {inl a -> inr[Unit + B2] a | inr b -> inl[Unit + B2] b}",
            "(case inr[B1 + B1] e0_1 of {inl a -> \\z:Unit. z | inr b -> \\z:Unit. ()}) ()",
            "\\x':B3 -> B3 * B3. snd (x' e2_3)",
        ] {
            let t = parse(text).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn identifiers() {
        assert!(is_valid_identifier("x'"));
        assert!(is_valid_identifier("e"));
        assert!(is_valid_identifier("elem"));
        assert!(!is_valid_identifier("e1_2"));
        assert!(!is_valid_identifier("succ3"));
        assert!(!is_valid_identifier("B2"));
        assert!(!is_valid_identifier("case"));
        assert!(!is_valid_identifier("'x"));
    }
}
