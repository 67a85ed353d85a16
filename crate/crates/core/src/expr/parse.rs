//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := unary ("^" INTEGER)? ;
//! unary  := "-" unary | atom ;
//! atom   := "z" | "i" | NUMBER | "(" expr ")" ;
//! ```
//!
//! Constant subtrees are folded while parsing, so `0.5+0.5*i` becomes a
//! single constant.

use num_complex::Complex64;

use super::{fold_node, Expr};

/// Trees deeper than this are rejected; evaluation and differentiation are
/// recursive.
pub const MAX_DEPTH: usize = 256;

const ATOM_START: &[&str] = &["z", "i", "number", "(", "-"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },
    #[error("exponent at byte {offset} is not a non-negative integer")]
    IntegerExponent { offset: usize },
    #[error("numeric literal at byte {offset} is not finite")]
    NonFiniteLiteral { offset: usize },
    #[error("expression at byte {offset} nests deeper than {limit} levels")]
    TooDeep { offset: usize, limit: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::IntegerExponent { offset }
            | ParseError::NonFiniteLiteral { offset }
            | ParseError::TooDeep { offset, .. } => *offset,
        }
    }
}

/// Parse `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let (e, _) = p.expr(0)?;
    match p.peek() {
        None => Ok(e),
        Some(_) => Err(ParseError::Syntax {
            offset: p.pos,
            expected: vec!["+", "-", "*", "/", "^", "end of input"],
        }),
    }
}

type Parsed = Result<(Expr, usize), ParseError>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn check_depth(&self, depth: usize) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            Err(ParseError::TooDeep { offset: self.pos, limit: MAX_DEPTH })
        } else {
            Ok(())
        }
    }

    fn expr(&mut self, nesting: usize) -> Parsed {
        let (mut lhs, mut depth) = self.term(nesting)?;
        loop {
            let op = match self.peek() {
                Some(b @ (b'+' | b'-')) => b,
                _ => return Ok((lhs, depth)),
            };
            self.pos += 1;
            let (rhs, d) = self.term(nesting)?;
            depth = 1 + depth.max(d);
            self.check_depth(depth)?;
            lhs = fold_node(if op == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            });
        }
    }

    fn term(&mut self, nesting: usize) -> Parsed {
        let (mut lhs, mut depth) = self.factor(nesting)?;
        loop {
            let op = match self.peek() {
                Some(b @ (b'*' | b'/')) => b,
                _ => return Ok((lhs, depth)),
            };
            self.pos += 1;
            let (rhs, d) = self.factor(nesting)?;
            depth = 1 + depth.max(d);
            self.check_depth(depth)?;
            lhs = fold_node(if op == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            });
        }
    }

    fn factor(&mut self, nesting: usize) -> Parsed {
        let (base, depth) = self.unary(nesting)?;
        if self.peek() != Some(b'^') {
            return Ok((base, depth));
        }
        self.pos += 1;
        let n = self.exponent()?;
        self.check_depth(depth + 1)?;
        Ok((fold_node(Expr::Pow(Box::new(base), n)), depth + 1))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let start = match self.peek() {
            Some(b) if b.is_ascii_digit() => self.pos,
            Some(b'-' | b'+' | b'.' | b'(' | b'z' | b'i') => {
                return Err(ParseError::IntegerExponent { offset: self.pos })
            }
            _ => {
                return Err(ParseError::Syntax { offset: self.pos, expected: vec!["integer"] })
            }
        };
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E')) {
            return Err(ParseError::IntegerExponent { offset: start });
        }
        // digits only, so the slice is ASCII
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        text.parse::<u32>().map_err(|_| ParseError::IntegerExponent { offset: start })
    }

    fn unary(&mut self, nesting: usize) -> Parsed {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.check_depth(nesting + 1)?;
            let (inner, depth) = self.unary(nesting + 1)?;
            self.check_depth(depth + 1)?;
            return Ok((fold_node(Expr::Neg(Box::new(inner))), depth + 1));
        }
        self.atom(nesting)
    }

    fn atom(&mut self, nesting: usize) -> Parsed {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok((Expr::Var, 1))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok((Expr::Const(Complex64::new(0.0, 1.0)), 1))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(b'(') => {
                self.pos += 1;
                self.check_depth(nesting + 1)?;
                let inner = self.expr(nesting + 1)?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Syntax {
                        offset: self.pos,
                        expected: vec!["+", "-", "*", "/", "^", ")"],
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(ParseError::Syntax { offset: self.pos, expected: ATOM_START.to_vec() }),
        }
    }

    fn number(&mut self) -> Parsed {
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        let digits = |i: &mut usize| {
            let from = *i;
            while *i < s.len() && s[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - from
        };
        let mut mantissa = digits(&mut i);
        if i < s.len() && s[i] == b'.' {
            i += 1;
            mantissa += digits(&mut i);
        }
        if mantissa == 0 {
            return Err(ParseError::Syntax { offset: start, expected: vec!["number"] });
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        self.pos = i;
        let text = std::str::from_utf8(&s[start..i]).unwrap_or_default();
        let value: f64 = text
            .parse()
            .map_err(|_| ParseError::Syntax { offset: start, expected: vec!["number"] })?;
        if !value.is_finite() {
            return Err(ParseError::NonFiniteLiteral { offset: start });
        }
        Ok((Expr::real(value), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn atoms() {
        assert_eq!(parse("z").unwrap(), Expr::Var);
        assert_eq!(parse(" i ").unwrap(), Expr::Const(c(0.0, 1.0)));
        assert_eq!(parse("0.5+0.5*i").unwrap(), Expr::Const(c(0.5, 0.5)));
        assert_eq!(parse("1e-3").unwrap(), Expr::real(1e-3));
        assert_eq!(parse(".25").unwrap(), Expr::real(0.25));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse("( z - 1 ) * ( 1 - z )").unwrap(), parse("(z-1)*(1-z)").unwrap());
    }

    #[test]
    fn precedence_follows_grammar() {
        // a unary minus binds tighter than ^
        assert_eq!(parse("-z^2").unwrap(), Expr::Var.neg_pow_for_test());
        assert_eq!(parse("1-z*z").unwrap(), Expr::one() - Expr::Var * Expr::Var);
        assert_eq!(
            parse("z-z-z").unwrap(),
            (Expr::Var - Expr::Var) - Expr::Var
        );
    }

    impl Expr {
        fn neg_pow_for_test(self) -> Expr {
            Expr::Pow(Box::new(Expr::Neg(Box::new(self))), 2)
        }
    }

    #[test]
    fn syntax_errors_carry_offset() {
        let err = parse("z + * 2").unwrap_err();
        assert_eq!(err, ParseError::Syntax { offset: 4, expected: ATOM_START.to_vec() });
        assert_eq!(parse("(z").unwrap_err().offset(), 2);
        assert_eq!(parse("z)").unwrap_err().offset(), 1);
        assert_eq!(parse("").unwrap_err().offset(), 0);
        assert_eq!(parse("sin(z)").unwrap_err().offset(), 0);
        assert!(matches!(parse("zz"), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(matches!(parse("z^"), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn non_integer_exponents() {
        assert_eq!(parse("z^2.5").unwrap_err(), ParseError::IntegerExponent { offset: 2 });
        assert_eq!(parse("z^-1").unwrap_err(), ParseError::IntegerExponent { offset: 2 });
        assert_eq!(parse("z^ 1e3").unwrap_err(), ParseError::IntegerExponent { offset: 3 });
        assert!(matches!(parse("z^99999999999"), Err(ParseError::IntegerExponent { .. })));
        assert!(parse("z^0").is_ok());
    }

    #[test]
    fn rejects_infinite_literals_and_deep_nesting() {
        assert_eq!(parse("1e999").unwrap_err(), ParseError::NonFiniteLiteral { offset: 0 });
        let deep = format!("{}z{}", "(".repeat(400), ")".repeat(400));
        assert!(matches!(parse(&deep), Err(ParseError::TooDeep { .. })));
        let long = vec!["z"; 1000].join("+");
        assert!(matches!(parse(&long), Err(ParseError::TooDeep { .. })));
        let negs = format!("{}z", "-".repeat(1000));
        assert!(matches!(parse(&negs), Err(ParseError::TooDeep { .. })));
    }

    #[test]
    fn non_ascii_is_a_syntax_error() {
        assert!(matches!(parse("z·z"), Err(ParseError::Syntax { offset: 1, .. })));
    }
}
