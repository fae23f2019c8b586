//! A little language for operator expressions, so identities between
//! functor combinations are data rather than code.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*      -- direct sum / difference
//! term    := factor ('*' factor)*          -- composition, left applied last
//! factor  := primary ('^' integer)*        -- multiplicity power
//! primary := atom | '(' expr ')'
//! atom    := H1p H1m H2p H2m H3p H3m E1p E1m E2 E3 F1p F1m F2 F3 ID
//!          | E1 F1 H1 H2 H3                -- virtual mode only
//! ```
//!
//! Strict mode admits only direct sums, compositions and powers of the
//! honest operator atoms; these stay in the class of induced maps of
//! projective functors, where matrix equality certifies isomorphism.
//! Virtual mode additionally allows formal differences and the five
//! difference atoms `E1 = E1p - E1m`, `F1 = F1p - F1m`, `Hi = Hip - Him`.
//! The power is multiplicity, not iteration: `e^k` evaluates to `k·[e]`
//! (the induced map of a k-fold direct sum), and `e^0` is the zero operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functors::{named_op, Generator};
use crate::zmod::LinearOp;

/// Which node kinds an expression may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Virtual,
}

/// The five formal differences of Theorem-level operator pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VirtualGen {
    E1,
    F1,
    H1,
    H2,
    H3,
}

impl VirtualGen {
    pub const ALL: [VirtualGen; 5] =
        [VirtualGen::E1, VirtualGen::F1, VirtualGen::H1, VirtualGen::H2, VirtualGen::H3];

    pub fn name(self) -> &'static str {
        match self {
            VirtualGen::E1 => "E1",
            VirtualGen::F1 => "F1",
            VirtualGen::H1 => "H1",
            VirtualGen::H2 => "H2",
            VirtualGen::H3 => "H3",
        }
    }

    /// The honest pair whose difference this atom denotes.
    pub fn parts(self) -> (Generator, Generator) {
        match self {
            VirtualGen::E1 => (Generator::E1p, Generator::E1m),
            VirtualGen::F1 => (Generator::F1p, Generator::F1m),
            VirtualGen::H1 => (Generator::H1p, Generator::H1m),
            VirtualGen::H2 => (Generator::H2p, Generator::H2m),
            VirtualGen::H3 => (Generator::H3p, Generator::H3m),
        }
    }

    pub fn parse(s: &str) -> Option<VirtualGen> {
        VirtualGen::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// An operator expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpExpr {
    Atom(Generator),
    Virtual(VirtualGen),
    /// `a * b`: apply `b` first, then `a`.
    Compose(Box<OpExpr>, Box<OpExpr>),
    /// `a + b`: pointwise sum (direct sum at the functor level).
    DirectSum(Box<OpExpr>, Box<OpExpr>),
    /// `a - b`: pointwise difference; virtual mode only.
    Difference(Box<OpExpr>, Box<OpExpr>),
    /// `e ^ k`: multiplicity `k`, with `e ^ 0` the zero operator.
    Power(Box<OpExpr>, u32),
}

impl OpExpr {
    pub fn compose(a: OpExpr, b: OpExpr) -> OpExpr {
        OpExpr::Compose(Box::new(a), Box::new(b))
    }

    pub fn sum(a: OpExpr, b: OpExpr) -> OpExpr {
        OpExpr::DirectSum(Box::new(a), Box::new(b))
    }

    pub fn diff(a: OpExpr, b: OpExpr) -> OpExpr {
        OpExpr::Difference(Box::new(a), Box::new(b))
    }

    pub fn power(e: OpExpr, k: u32) -> OpExpr {
        OpExpr::Power(Box::new(e), k)
    }

    /// True when the tree contains no virtual-mode nodes.
    pub fn is_strict(&self) -> bool {
        match self {
            OpExpr::Atom(_) => true,
            OpExpr::Virtual(_) => false,
            OpExpr::Difference(_, _) => false,
            OpExpr::Compose(a, b) | OpExpr::DirectSum(a, b) => a.is_strict() && b.is_strict(),
            OpExpr::Power(e, _) => e.is_strict(),
        }
    }
}

impl std::fmt::Display for OpExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print(self))
    }
}

/// Canonical fully-parenthesized form; `parse(print(e))` is structurally `e`.
pub fn print(expr: &OpExpr) -> String {
    match expr {
        OpExpr::Atom(g) => g.name().to_string(),
        OpExpr::Virtual(v) => v.name().to_string(),
        OpExpr::Compose(a, b) => format!("({} * {})", print(a), print(b)),
        OpExpr::DirectSum(a, b) => format!("({} + {})", print(a), print(b)),
        OpExpr::Difference(a, b) => format!("({} - {})", print(a), print(b)),
        OpExpr::Power(e, k) => format!("({} ^ {})", print(e), k),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Star,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let v: u32 = text[start..i].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("integer literal '{}' too large", &text[start..i]),
                })?;
                toks.push((Tok::Int(v), start));
            }
            _ => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    mode: Mode,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<OpExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = OpExpr::sum(lhs, rhs);
                }
                Some(Tok::Minus) => {
                    let pos = self.here();
                    if self.mode == Mode::Strict {
                        return Err(Error::Parse {
                            pos,
                            msg: "formal difference '-' is not allowed in strict mode".into(),
                        });
                    }
                    self.bump();
                    let rhs = self.term()?;
                    lhs = OpExpr::diff(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OpExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.factor()?;
            lhs = OpExpr::compose(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OpExpr> {
        let mut e = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(k)) => {
                    e = OpExpr::power(e, k);
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected a nonnegative integer after '^'".into(),
                    })
                }
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<OpExpr> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let pos = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse { pos, msg: "expected ')'".into() }),
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(g) = Generator::parse(&name) {
                    return Ok(OpExpr::Atom(g));
                }
                if let Some(v) = VirtualGen::parse(&name) {
                    if self.mode == Mode::Strict {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("virtual atom '{name}' is not allowed in strict mode"),
                        });
                    }
                    return Ok(OpExpr::Virtual(v));
                }
                Err(Error::Parse { pos, msg: format!("unknown operator atom '{name}'") })
            }
            Some(other) => {
                Err(Error::Parse { pos, msg: format!("unexpected token {other:?}") })
            }
            None => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses an expression in the given mode.
pub fn parse(text: &str, mode: Mode) -> Result<OpExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), mode };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse { pos: p.here(), msg: "trailing input after expression".into() });
    }
    Ok(e)
}

/// Evaluates an expression to the operator it denotes on `K(O^n)`.
pub fn eval(expr: &OpExpr, n: usize) -> LinearOp {
    match expr {
        OpExpr::Atom(g) => named_op(*g, n),
        OpExpr::Virtual(v) => {
            let (p, m) = v.parts();
            named_op(p, n).sub(&named_op(m, n))
        }
        OpExpr::Compose(a, b) => eval(a, n).compose(&eval(b, n)),
        OpExpr::DirectSum(a, b) => eval(a, n).add(&eval(b, n)),
        OpExpr::Difference(a, b) => eval(a, n).sub(&eval(b, n)),
        OpExpr::Power(e, k) => eval(e, n).scale(*k as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Seq;
    use crate::zmod::{apply, ZVec};

    fn seq(letters: &[u8]) -> Seq {
        Seq::new(letters.to_vec()).unwrap()
    }

    fn strict(text: &str) -> OpExpr {
        parse(text, Mode::Strict).unwrap()
    }

    #[test]
    fn precedence_sum_over_compose_over_power() {
        assert_eq!(
            strict("E1p*F1p + H1m"),
            OpExpr::sum(
                OpExpr::compose(OpExpr::Atom(Generator::E1p), OpExpr::Atom(Generator::F1p)),
                OpExpr::Atom(Generator::H1m)
            )
        );
        assert_eq!(
            strict("E2^2*E3 + E3*E2^2"),
            OpExpr::sum(
                OpExpr::compose(
                    OpExpr::power(OpExpr::Atom(Generator::E2), 2),
                    OpExpr::Atom(Generator::E3)
                ),
                OpExpr::compose(
                    OpExpr::Atom(Generator::E3),
                    OpExpr::power(OpExpr::Atom(Generator::E2), 2)
                )
            )
        );
    }

    #[test]
    fn strict_mode_rejects_virtual_syntax() {
        assert!(matches!(parse("E1 - E1p", Mode::Strict), Err(Error::Parse { .. })));
        assert!(matches!(parse("E1", Mode::Strict), Err(Error::Parse { .. })));
        assert!(parse("E1 - E1p", Mode::Virtual).is_ok());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("E2 $ E3", Mode::Strict) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("E2 + Q7", Mode::Strict) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn print_round_trips() {
        let exprs = [
            "E1p*F1p + H1m",
            "E2^2*E3 + E3*E2^2",
            "(E2*E3*E2)^2",
            "ID^0 + ID^1",
        ];
        for text in exprs {
            let e = strict(text);
            let printed = print(&e);
            assert_eq!(parse(&printed, Mode::Strict).unwrap(), e, "{text} -> {printed}");
        }
        let v = parse("E1 - (H1*F1)^2", Mode::Virtual).unwrap();
        assert_eq!(parse(&print(&v), Mode::Virtual).unwrap(), v);
    }

    #[test]
    fn power_is_multiplicity() {
        let op = eval(&strict("ID^3"), 1);
        let v = ZVec::single(seq(&[5]), 1);
        assert_eq!(apply(&op, &v).unwrap(), ZVec::single(seq(&[5]), 3));
        let zero = eval(&strict("E2^0"), 1);
        assert!(apply(&zero, &v).unwrap().is_zero());
    }

    #[test]
    fn both_sides_of_a_commutation_instance_agree_on_a_column() {
        // E3*F3 + H3m and F3*E3 + H3p on the one-letter label (7)
        let v = ZVec::single(seq(&[7]), 1);
        let lhs = apply(&eval(&strict("E3*F3 + H3m"), 1), &v).unwrap();
        let rhs = apply(&eval(&strict("F3*E3 + H3p"), 1), &v).unwrap();
        assert_eq!(lhs, v);
        assert_eq!(rhs, v);
    }

    #[test]
    fn virtual_difference_atom() {
        let e1 = eval(&parse("E1", Mode::Virtual).unwrap(), 2);
        let image = apply(&e1, &ZVec::single(seq(&[2, 3]), 1)).unwrap();
        assert_eq!(
            image,
            ZVec::from_terms(2, [(seq(&[4, 3]), 1), (seq(&[2, 5]), 1)]).unwrap()
        );
    }
}
