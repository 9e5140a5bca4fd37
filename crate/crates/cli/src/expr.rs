//! The expression language for comp-calculus terms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := ['-'] INT ['/' INT] '*' term  |  '-' term  |  chain
//! chain   := comp ('*' comp)*               total composition, left-assoc
//! comp    := primary ('o_' INT primary)*    partial composition, left-assoc
//! primary := IDENT | 'I' | '(' expr ')' | call
//! call    := cup(f,g) | comm(f,g) | delta(f) | dev_total(f,g)
//!          | brace(h;f;g) | assoc(h;f;g) | dev_brace(h;f;g)
//!          | lam(k;f;g) | lamp(k;f;g)
//! ```
//!
//! Arguments may be separated by `,` or `;`. `a - b` parses as
//! `a + -1 * b` and `-x` as `-1 * x`. Composition indices are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Unit,
    CompAt(Box<Expr>, usize, Box<Expr>),
    Cup(Box<Expr>, Box<Expr>),
    Total(Box<Expr>, Box<Expr>),
    Braces(Box<Expr>, Box<Expr>, Box<Expr>),
    Assoc(Box<Expr>, Box<Expr>, Box<Expr>),
    Comm(Box<Expr>, Box<Expr>),
    Delta(Box<Expr>),
    DevTotal(Box<Expr>, Box<Expr>),
    DevBraces(Box<Expr>, Box<Expr>, Box<Expr>),
    Lambda(usize, Box<Expr>, Box<Expr>),
    LambdaPrime(usize, Box<Expr>, Box<Expr>),
    ScalarMul(BigRational, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
}

/// A syntax error: where it happened and what would have been accepted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} at byte {offset} (found {found})", describe(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

fn describe(expected: &BTreeSet<String>) -> String {
    let items: Vec<&str> = expected.iter().map(String::as_str).collect();
    match items.as_slice() {
        [] => "unexpected input".into(),
        [one] => format!("expected {one}"),
        many => format!("expected one of {}", many.join(", ")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Comp(usize),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sep,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Comp(k) => write!(f, "`o_{k}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Sep => f.write_str("separator"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' | b';' => Tok::Sep,
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                out.push((start, Tok::Int(src[start..pos].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                let word = &src[start..pos];
                let tok = match word.strip_prefix("o_") {
                    Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                        let k = digits.parse().map_err(|_| ParseError {
                            offset: start,
                            expected: ["composition index below 2^64".to_string()].into(),
                            found: format!("`{word}`"),
                        })?;
                        Tok::Comp(k)
                    }
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("non-empty");
                return Err(ParseError {
                    offset: start,
                    expected: ["expression".to_string()].into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, ParseError>;

const FUNCTIONS: &[(&str, usize)] = &[
    ("cup", 2),
    ("comm", 2),
    ("delta", 1),
    ("dev_total", 2),
    ("brace", 3),
    ("assoc", 3),
    ("dev_brace", 3),
    ("lam", 3),
    ("lamp", 3),
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        self.expected.clear();
        tok
    }

    /// Notes an alternative tried at the current position.
    fn want(&mut self, what: &str) {
        self.expected.insert(what.to_string());
    }

    fn fail<T>(&mut self) -> PResult<T> {
        Err(ParseError {
            offset: self.offset(),
            expected: std::mem::take(&mut self.expected),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, tok: &Tok, what: &str) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            self.want(what);
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<()> {
        if self.eat(tok, what) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus, "`+`") {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus, "`-`") {
                let rhs = self.term()?;
                acc = Expr::Add(Box::new(acc), Box::new(negate(rhs)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let negative = matches!(self.peek(), Tok::Minus);
        let literal = match (self.peek(), self.peek2()) {
            (Tok::Int(_), _) => true,
            (Tok::Minus, Tok::Int(_)) => true,
            _ => false,
        };
        if literal {
            if negative {
                self.bump();
            }
            let mut value = BigRational::from_integer(self.int()?);
            if self.eat(&Tok::Slash, "`/`") {
                let den = self.int()?;
                if den.is_zero() {
                    self.want("nonzero denominator");
                    self.at -= 1;
                    return self.fail();
                }
                value /= BigRational::from_integer(den);
            }
            if negative {
                value = -value;
            }
            self.expect(&Tok::Star, "`*`")?;
            return Ok(Expr::ScalarMul(value, Box::new(self.term()?)));
        }
        if self.eat(&Tok::Minus, "`-`") {
            return Ok(negate(self.term()?));
        }
        self.chain()
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => {
                self.want("integer");
                self.fail()
            }
        }
    }

    fn chain(&mut self) -> PResult<Expr> {
        let mut acc = self.comp()?;
        while self.eat(&Tok::Star, "`*`") {
            acc = Expr::Total(Box::new(acc), Box::new(self.comp()?));
        }
        Ok(acc)
    }

    fn comp(&mut self) -> PResult<Expr> {
        let mut acc = self.primary()?;
        loop {
            match self.peek() {
                Tok::Comp(k) => {
                    let k = *k;
                    self.bump();
                    acc = Expr::CompAt(Box::new(acc), k, Box::new(self.primary()?));
                }
                _ => {
                    self.want("`o_<k>`");
                    return Ok(acc);
                }
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "I" => {
                self.bump();
                Ok(Expr::Unit)
            }
            Tok::Ident(name) => {
                self.bump();
                match FUNCTIONS.iter().find(|(f, _)| *f == name) {
                    Some(&(f, arity)) if self.peek() == &Tok::LParen => {
                        self.bump();
                        self.call(f, arity)
                    }
                    _ => Ok(Expr::Var(name)),
                }
            }
            _ => {
                self.want("expression");
                self.fail()
            }
        }
    }

    fn index(&mut self) -> PResult<usize> {
        let offset = self.offset();
        let n = self.int()?;
        usize::try_from(n).map_err(|_| ParseError {
            offset,
            expected: ["small index".to_string()].into(),
            found: "oversized integer".into(),
        })
    }

    fn call(&mut self, name: &str, arity: usize) -> PResult<Expr> {
        let index = if matches!(name, "lam" | "lamp") {
            let k = self.index()?;
            self.expect(&Tok::Sep, "`;`")?;
            Some(k)
        } else {
            None
        };
        let operands = if index.is_some() { arity - 1 } else { arity };
        let mut args = Vec::with_capacity(operands);
        for n in 0..operands {
            if n > 0 {
                self.expect(&Tok::Sep, if arity == 3 { "`;`" } else { "`,`" })?;
            }
            args.push(Box::new(self.expr()?));
        }
        self.expect(&Tok::RParen, "`)`")?;
        let mut args = args.into_iter();
        let mut next = || args.next().expect("operand count");
        Ok(match name {
            "cup" => Expr::Cup(next(), next()),
            "comm" => Expr::Comm(next(), next()),
            "delta" => Expr::Delta(next()),
            "dev_total" => Expr::DevTotal(next(), next()),
            "brace" => Expr::Braces(next(), next(), next()),
            "assoc" => Expr::Assoc(next(), next(), next()),
            "dev_brace" => Expr::DevBraces(next(), next(), next()),
            "lam" => Expr::Lambda(index.expect("index"), next(), next()),
            "lamp" => Expr::LambdaPrime(index.expect("index"), next(), next()),
            _ => unreachable!("listed in FUNCTIONS"),
        })
    }
}

fn negate(x: Expr) -> Expr {
    Expr::ScalarMul(-BigRational::one(), Box::new(x))
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        toks: lex(src)?,
        at: 0,
        expected: BTreeSet::new(),
    };
    let expr = parser.expr()?;
    if parser.peek() != &Tok::End {
        parser.want("end of input");
        return parser.fail();
    }
    Ok(expr)
}

// Binding strength, loosest first.
const SUM: u8 = 0;
const TERM: u8 = 1;
const CHAIN: u8 = 2;
const COMP: u8 = 3;
const ATOM: u8 = 4;

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) => SUM,
            Expr::ScalarMul(..) => TERM,
            Expr::Total(..) => CHAIN,
            Expr::CompAt(..) => COMP,
            _ => ATOM,
        }
    }

    fn write(&self, out: &mut String, need: u8) {
        let parens = self.level() < need;
        if parens {
            out.push('(');
        }
        let call = |out: &mut String, name: &str, sep: &str, args: &[&Expr]| {
            out.push_str(name);
            out.push('(');
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                a.write(out, SUM);
            }
            out.push(')');
        };
        match self {
            Expr::Var(name) => out.push_str(name),
            Expr::Unit => out.push('I'),
            Expr::Add(a, b) => {
                a.write(out, SUM);
                out.push_str(" + ");
                b.write(out, TERM);
            }
            Expr::ScalarMul(s, x) => {
                if s.is_integer() {
                    out.push_str(&s.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", s.numer(), s.denom()));
                }
                out.push_str(" * ");
                x.write(out, TERM);
            }
            Expr::Total(a, b) => {
                a.write(out, CHAIN);
                out.push_str(" * ");
                b.write(out, COMP);
            }
            Expr::CompAt(a, k, b) => {
                a.write(out, COMP);
                out.push_str(&format!(" o_{k} "));
                b.write(out, ATOM);
            }
            Expr::Cup(f, g) => call(out, "cup", ", ", &[f, g]),
            Expr::Comm(f, g) => call(out, "comm", ", ", &[f, g]),
            Expr::Delta(f) => call(out, "delta", ", ", &[f]),
            Expr::DevTotal(f, g) => call(out, "dev_total", ", ", &[f, g]),
            Expr::Braces(h, f, g) => call(out, "brace", "; ", &[h, f, g]),
            Expr::Assoc(h, f, g) => call(out, "assoc", "; ", &[h, f, g]),
            Expr::DevBraces(h, f, g) => call(out, "dev_brace", "; ", &[h, f, g]),
            Expr::Lambda(k, f, g) => {
                out.push_str(&format!("lam({k}; "));
                f.write(out, SUM);
                out.push_str("; ");
                g.write(out, SUM);
                out.push(')');
            }
            Expr::LambdaPrime(k, f, g) => {
                out.push_str(&format!("lamp({k}; "));
                f.write(out, SUM);
                out.push_str("; ");
                g.write(out, SUM);
                out.push(')');
            }
        }
        if parens {
            out.push(')');
        }
    }
}

/// The canonical printer; `parse` maps its output back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write(&mut out, SUM);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var(s: &str) -> Box<Expr> {
        Box::new(Expr::Var(s.into()))
    }

    /// Variable names that the lexer reads back as plain identifiers.
    fn printable(e: &Expr) -> bool {
        match e {
            Expr::Var(name) => {
                name != "I"
                    && !FUNCTIONS.iter().any(|(f, _)| f == name)
                    && lex(name).is_ok_and(|t| matches!(t.as_slice(), [(_, Tok::Ident(_)), _]))
            }
            Expr::Unit => true,
            Expr::Delta(a) | Expr::ScalarMul(_, a) => printable(a),
            Expr::CompAt(a, _, b)
            | Expr::Cup(a, b)
            | Expr::Total(a, b)
            | Expr::Comm(a, b)
            | Expr::DevTotal(a, b)
            | Expr::Lambda(_, a, b)
            | Expr::LambdaPrime(_, a, b)
            | Expr::Add(a, b) => printable(a) && printable(b),
            Expr::Braces(a, b, c) | Expr::Assoc(a, b, c) | Expr::DevBraces(a, b, c) => {
                printable(a) && printable(b) && printable(c)
            }
        }
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn nested_composition() {
        assert_eq!(
            parse("(h o_2 f) o_0 g").unwrap(),
            Expr::CompAt(Box::new(Expr::CompAt(var("h"), 2, var("f"))), 0, var("g"))
        );
        // left-assoc without parentheses
        assert_eq!(parse("h o_2 f o_0 g").unwrap(), parse("(h o_2 f) o_0 g").unwrap());
    }

    #[test]
    fn scalar_multiples() {
        assert_eq!(
            parse("cup(f,g) + -1 * cup(g,f)").unwrap(),
            Expr::Add(
                Box::new(Expr::Cup(var("f"), var("g"))),
                Box::new(Expr::ScalarMul(int(-1), Box::new(Expr::Cup(var("g"), var("f")))))
            )
        );
        assert_eq!(parse("cup(f,g) - cup(g,f)").unwrap(), parse("cup(f,g) + -1 * cup(g,f)").unwrap());
        assert_eq!(
            parse("-3/4 * f").unwrap(),
            Expr::ScalarMul(BigRational::new((-3).into(), 4.into()), var("f"))
        );
        assert_eq!(
            parse("2 * f * g").unwrap(),
            Expr::ScalarMul(int(2), Box::new(Expr::Total(var("f"), var("g"))))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("f * g o_0 h").unwrap(),
            Expr::Total(var("f"), Box::new(Expr::CompAt(var("g"), 0, var("h"))))
        );
        assert_eq!(
            parse("f * g * h").unwrap(),
            Expr::Total(Box::new(Expr::Total(var("f"), var("g"))), var("h"))
        );
        assert_eq!(parse("I o_0 f").unwrap(), Expr::CompAt(Box::new(Expr::Unit), 0, var("f")));
    }

    #[test]
    fn calls() {
        assert_eq!(
            parse("brace(h;f;g)").unwrap(),
            Expr::Braces(var("h"), var("f"), var("g"))
        );
        assert_eq!(parse("brace(h, f, g)").unwrap(), parse("brace(h;f;g)").unwrap());
        assert_eq!(parse("lam(0; f; g)").unwrap(), Expr::Lambda(0, var("f"), var("g")));
        assert_eq!(parse("lamp(2;f;g)").unwrap(), Expr::LambdaPrime(2, var("f"), var("g")));
        assert_eq!(parse("delta(f)").unwrap(), Expr::Delta(var("f")));
        assert_eq!(parse("dev_brace(h;f;g)").unwrap(), Expr::DevBraces(var("h"), var("f"), var("g")));
        // function names without a call are variables
        assert_eq!(parse("cup").unwrap(), Expr::Var("cup".into()));
    }

    #[test]
    fn diagnostics() {
        let err = parse("f o_5").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(err.expected.contains("expression"));
        assert!(err.to_string().starts_with("expected expression"), "{err}");

        let err = parse("cup(f g)").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains("`,`"));

        let err = parse("(f + g").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains("`)`"));

        assert_eq!(parse("2 f").unwrap_err().offset, 2);
        assert_eq!(parse("f $ g").unwrap_err().offset, 2);
        assert!(parse("f g").unwrap_err().expected.contains("end of input"));
        assert!(parse("1/0 * f").is_err());
        assert!(parse("").unwrap_err().expected.contains("expression"));
    }

    #[test]
    fn printer_is_canonical() {
        for (src, printed) in [
            ("(h o_2 f) o_0 g", "h o_2 f o_0 g"),
            ("h o_2 (f o_0 g)", "h o_2 (f o_0 g)"),
            ("cup(f,g) - cup(g,f)", "cup(f, g) + -1 * cup(g, f)"),
            ("f * (g * h)", "f * (g * h)"),
            ("(f * g) * h", "f * g * h"),
            ("(f + g) o_1 h", "(f + g) o_1 h"),
            ("f + (g + h)", "f + (g + h)"),
            ("2 * (f + g)", "2 * (f + g)"),
            ("-f * g", "-1 * f * g"),
            ("lam(1;f;g)", "lam(1; f; g)"),
            ("(2 * f) o_0 g", "(2 * f) o_0 g"),
        ] {
            assert_eq!(parse(src).unwrap().to_string(), printed, "{src}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["f", "g", "h", "mu", "x1"]).prop_map(|s| Expr::Var(s.into())),
            Just(Expr::Unit),
        ];
        leaf.prop_recursive(5, 48, 3, |inner| {
            let b = |e: Expr| Box::new(e);
            let scalar = (-5i64..=5, 1i64..=4)
                .prop_filter("nonzero", |(n, _)| *n != 0)
                .prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
            prop_oneof![
                (inner.clone(), 0usize..6, inner.clone()).prop_map(move |(a, k, c)| Expr::CompAt(b(a), k, b(c))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Cup(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Total(b(a), b(c))),
                (inner.clone(), inner.clone(), inner.clone()).prop_map(move |(a, c, d)| Expr::Braces(b(a), b(c), b(d))),
                (inner.clone(), inner.clone(), inner.clone()).prop_map(move |(a, c, d)| Expr::Assoc(b(a), b(c), b(d))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::Comm(b(a), b(c))),
                inner.clone().prop_map(move |a| Expr::Delta(b(a))),
                (inner.clone(), inner.clone()).prop_map(move |(a, c)| Expr::DevTotal(b(a), b(c))),
                (inner.clone(), inner.clone(), inner.clone()).prop_map(move |(a, c, d)| Expr::DevBraces(b(a), b(c), b(d))),
                (0usize..5, inner.clone(), inner.clone()).prop_map(move |(k, a, c)| Expr::Lambda(k, b(a), b(c))),
                (0usize..5, inner.clone(), inner.clone()).prop_map(move |(k, a, c)| Expr::LambdaPrime(k, b(a), b(c))),
                (scalar, inner.clone()).prop_map(move |(s, a)| Expr::ScalarMul(s, b(a))),
                (inner.clone(), inner).prop_map(move |(a, c)| Expr::Add(b(a), b(c))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            prop_assume!(printable(&e));
            let text = e.to_string();
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn parse_print_parse_is_stable(src in "[fgh IO_o0-9+*() ,;-]{0,24}") {
            if let Ok(e) = parse(&src) {
                prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
            }
        }
    }
}
