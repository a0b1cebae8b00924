//! Recursive-descent parser for the field expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" integer)?
//! atom   := number | ident | func "(" expr ")" | "(" expr ")"
//! ident  := ("x"|"y") integer
//! func   := "sin" | "cos" | "exp" | "log" | "sqrt"
//! ```

use super::{Expr, Func, Var};
use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
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
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number {s}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let start = pos;
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_digit() || c == '.' {
            let mut s = String::new();
            while matches!(chars.peek(), Some(c) if c.is_ascii_digit() || *c == '.') {
                s.push(advance(&mut chars));
            }
            if matches!(chars.peek(), Some('e' | 'E')) {
                s.push(advance(&mut chars));
                if matches!(chars.peek(), Some('+' | '-')) {
                    s.push(advance(&mut chars));
                }
                while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                    s.push(advance(&mut chars));
                }
            }
            Tok::Num(s)
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while matches!(chars.peek(), Some(c) if c.is_ascii_alphabetic()) {
                s.push(advance(&mut chars));
            }
            while matches!(chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
                s.push(advance(&mut chars));
            }
            Tok::Ident(s)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(ParseError {
                        line: start.line,
                        column: start.column,
                        kind: ParseErrorKind::UnexpectedChar(other),
                    })
                }
            };
            advance(&mut chars);
            t
        };
        out.push((tok, start));
    }
    Ok((out, pos))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
    m: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err(&self, pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(
                self.pos(),
                ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
            ),
            None => self.err(self.end, ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                let k = s
                    .parse::<u32>()
                    .map_err(|_| self.err(pos, ParseErrorKind::NonIntegerExponent(s.clone())))?;
                Ok(Expr::Pow(Box::new(base), k))
            }
            Some(t) => Err(self.err(pos, ParseErrorKind::NonIntegerExponent(t.describe()))),
            None => Err(self.err(
                self.end,
                ParseErrorKind::UnexpectedEnd {
                    expected: "integer exponent",
                },
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                let v = s
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(pos, ParseErrorKind::InvalidNumber(s.clone())))?;
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "'(' after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                self.variable(&name, pos).map(Expr::Var)
            }
            _ => Err(self.unexpected("number, variable, function or '('")),
        }
    }

    fn variable(&self, name: &str, pos: Pos) -> Result<Var, ParseError> {
        let unknown = || self.err(pos, ParseErrorKind::UnknownIdentifier(name.to_string()));
        let (head, digits) = name.split_at(1);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let index: usize = digits.parse().map_err(|_| unknown())?;
        let var = match head {
            "x" => Var::X,
            "y" => Var::Y,
            _ => return Err(unknown()),
        };
        if index == 0 || index > self.m {
            return Err(self.err(
                pos,
                ParseErrorKind::IndexOutOfRange {
                    name: name.to_string(),
                    max: self.m,
                },
            ));
        }
        Ok(var(index - 1))
    }
}

/// Parses `source` as a scalar field on a chart of a manifold of dimension
/// `2n`, so variables range over `x1..x{2n}` and `y1..y{2n}`.
pub fn parse_expression(source: &str, n: usize) -> Result<Expr, ParseError> {
    let (toks, end) = lex(source)?;
    let mut p = Parser {
        toks,
        at: 0,
        end,
        m: 2 * n,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var(v: Var) -> Box<Expr> {
        Box::new(Expr::Var(v))
    }

    #[test]
    fn sum_of_squares() {
        let e = parse_expression("y1^2 + y2^2", 1).unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(var(Var::Y(0)), 2)),
                Box::new(Expr::Pow(var(Var::Y(1)), 2)),
            )
        );
    }

    #[test]
    fn call_times_group() {
        let e = parse_expression("exp(x1)*(y1^2+y2^2)", 1).unwrap();
        let Expr::Mul(lhs, rhs) = e else {
            panic!("expected Mul")
        };
        assert_eq!(*lhs, Expr::Call(Func::Exp, var(Var::X(0))));
        assert!(matches!(*rhs, Expr::Add(..)));
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expression("y1^2 + z3", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("z3".into()));
        assert_eq!((err.line, err.column), (1, 8));
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_expression("y1 + y3", 1).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::IndexOutOfRange { .. }));
        assert!(parse_expression("y1 + y3", 2).is_ok());
        assert!(parse_expression("x0", 2).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tighter than unary minus.
        let e = parse_expression("-y1^2", 1).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(var(Var::Y(0)), 2))));
        // left associativity
        let e = parse_expression("y1 - y2 - x1", 1).unwrap();
        assert_eq!(e.eval(&[5.0, 0.0], &[1.0, 2.0]).unwrap(), -6.0);
        let e = parse_expression("y1 / y2 / x1", 1).unwrap();
        assert_eq!(e.eval(&[4.0, 0.0], &[8.0, 2.0]).unwrap(), 1.0);
        let e = parse_expression("2 + 3*y1^2", 1).unwrap();
        assert_eq!(e.eval(&[0.0, 0.0], &[2.0, 0.0]).unwrap(), 14.0);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expression("y1 +\n  * y2", 1).unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_expression("y1^2.5", 1).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonIntegerExponent(_)));
        let err = parse_expression("y1^y2", 1).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonIntegerExponent(_)));
        let err = parse_expression("(y1 + y2", 1).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));
        let err = parse_expression("y1 $ y2", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
        assert!(parse_expression("y1 y2", 1).is_err());
        assert!(parse_expression("tan(y1)", 1).is_err());
        assert!(parse_expression("", 1).is_err());
        assert!(parse_expression("1.2.3", 1).is_err());
    }

    #[test]
    fn scientific_literals() {
        let e = parse_expression("1.5e-3*y1 + 2E2", 1).unwrap();
        assert_eq!(e.eval(&[0.0; 2], &[1000.0, 0.0]).unwrap(), 201.5);
    }

    fn arb_expr(m: usize) -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(|v| Expr::Num(v as f64 / 8.0)),
            (0..m).prop_map(Expr::x),
            (0..m).prop_map(Expr::y),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            let b = |e: Expr| Box::new(e);
            prop_oneof![
                inner.clone().prop_map(move |a| Expr::Neg(b(a))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Add(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Sub(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Mul(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Div(b(a), b(c))),
                (inner.clone(), 0u32..5).prop_map(move |(a, k)| Expr::Pow(b(a), k)),
                (
                    inner,
                    prop_oneof![
                        Just(Func::Sin),
                        Just(Func::Cos),
                        Just(Func::Exp),
                        Just(Func::Log),
                        Just(Func::Sqrt)
                    ]
                )
                    .prop_map(move |(a, f)| Expr::Call(f, b(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr(4)) {
            let text = e.to_string();
            let back = parse_expression(&text, 2).unwrap();
            prop_assert_eq!(back, e, "{}", text);
        }
    }
}
