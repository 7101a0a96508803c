//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
//! primary := NUMBER | IDENT | KERNEL '(' expr ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{ParseError, ParseErrorKind};
use crate::expr::Expr;
use crate::poly::Kernel;
use crate::symbol::SymbolTable;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(_, s) => s.clone(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() || c == '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value = parse_decimal(text).ok_or_else(|| {
                    ParseError::new(ParseErrorKind::BadNumber(text.to_string()), src, start)
                })?;
                out.push((Tok::Num(value, text.to_string()), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(ParseError::new(ParseErrorKind::UnexpectedChar(ch), src, i));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(_, o)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(kind, self.src, self.offset())
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken {
                found: t.text(),
                expected,
            }),
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).ok_or_else(|| {
                        ParseError::new(ParseErrorKind::DivisionByZero, self.src, at)
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base_at = self.offset();
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let n = self.exponent()?;
        if self.peek() == Some(&Tok::Caret) {
            return Err(self.err(ParseErrorKind::ChainedPower));
        }
        base.checked_pow(n)
            .ok_or_else(|| ParseError::new(ParseErrorKind::DivisionByZero, self.src, base_at))
    }

    fn signed_int(&mut self) -> Result<i32, ParseError> {
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        match self.peek().cloned() {
            Some(Tok::Num(v, text)) => {
                if !v.is_integer() || text.contains(['.', 'e', 'E']) {
                    return Err(self.err(ParseErrorKind::NonIntegerExponent(text)));
                }
                let n: i32 = v
                    .to_integer()
                    .try_into()
                    .map_err(|_| self.err(ParseErrorKind::NonIntegerExponent(text.clone())))?;
                self.pos += 1;
                Ok(if negative { -n } else { n })
            }
            Some(t) => Err(self.err(ParseErrorKind::NonIntegerExponent(t.text()))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd {
                expected: "integer exponent",
            })),
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            match self.signed_int() {
                Ok(n) if self.peek() == Some(&Tok::RParen) => {
                    self.pos += 1;
                    Ok(n)
                }
                _ => {
                    self.pos = save;
                    let text = self.toks[save..]
                        .iter()
                        .map(|(t, _)| t.text())
                        .take(6)
                        .collect::<Vec<_>>()
                        .join("");
                    Err(self.err(ParseErrorKind::NonIntegerExponent(text)))
                }
            }
        } else {
            self.signed_int()
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v, _)) => {
                self.pos += 1;
                Ok(Expr::rational(v))
            }
            Some(Tok::Ident(name)) => {
                if let Some(k) = Kernel::from_name(&name) {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::call(k, arg));
                }
                if self.toks.get(self.pos + 1).map(|(t, _)| t) == Some(&Tok::LParen) {
                    return Err(self.err(ParseErrorKind::UnknownFunction(name)));
                }
                match self.symbols.lookup(&name) {
                    Some(s) => {
                        self.pos += 1;
                        Ok(Expr::symbol(&s))
                    }
                    None => Err(self.err(ParseErrorKind::UnknownIdentifier(name))),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected("a number, identifier or `(`")),
        }
    }
}

/// Parses `text` into a canonical expression, resolving identifiers
/// against `symbols`.
pub fn parse_expr(text: &str, symbols: &SymbolTable) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        src: text,
        toks,
        pos: 0,
        symbols,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SymbolTable {
        SymbolTable::new(&["t", "phi", "r", "z"], &["a", "m"]).unwrap()
    }

    #[test]
    fn commutativity_canonicalizes() {
        let t = table();
        assert_eq!(parse_expr("2*a*r^2", &t).unwrap(), parse_expr("a*r^2*2", &t).unwrap());
        let e = parse_expr("r^2 - a^2*r^4", &t).unwrap();
        assert_eq!(e.num().num_terms(), 2);
        assert_eq!(e.to_string(), "-a^2*r^4 + r^2");
    }

    #[test]
    fn precedence() {
        let t = table();
        let p = |s: &str| parse_expr(s, &t).unwrap();
        assert_eq!(p("-a^2"), -p("a*a"));
        assert_eq!(p("2/3*a"), p("(2/3)*a"));
        assert_eq!(p("a - r - 1"), p("a - (r + 1)"));
        assert_eq!(p("r^-2"), p("1/(r*r)"));
        assert_eq!(p("r^(-2)"), p("1/r^2"));
        assert_eq!(p("0.25"), p("1/4"));
        assert_eq!(p("1.5e2"), p("150"));
    }

    #[test]
    fn kernels_parse() {
        let t = table();
        let e = parse_expr("sinh(m*r/2)^2", &t).unwrap();
        assert_eq!(e.num().num_terms(), 1);
        let (m, _) = e.num().leading().unwrap();
        assert_eq!(m.total_degree(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let t = table();
        let e = parse_expr("a + b", &t).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("b".into()));
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_expr("r^x", &t).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NonIntegerExponent(_)));
        let e = parse_expr("r^1.5", &t).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NonIntegerExponent(_)));
        let e = parse_expr("r^2^3", &t).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ChainedPower);
        let e = parse_expr("1/(a-a)", &t).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);
        let e = parse_expr("tan(r)", &t).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownFunction("tan".into()));
        let e = parse_expr("(a", &t).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        let e = parse_expr("a\n + $", &t).unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
    }
}
