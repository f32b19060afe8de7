//! Variety expressions:
//!
//! ```text
//! expr := "pt" | "P(" nat ")" | "prod(" expr "," expr ")"
//!       | "projbundle(" expr ";" chernList ")" | "blowup(P(" nat "),P(" nat "))"
//! ```
//!
//! `chernList` is a comma-separated list of polynomial literals in the
//! base's generators, `c_1` first.

use std::fmt;

use motbiv_core::varmodel::{
    make_blowup_linear, make_point, make_product, make_proj, make_proj_bundle, Variety,
};
use motbiv_core::{GradedClass, Rational};

/// A rejected expression. `column` is 1-based; 0 means the text parsed but
/// does not describe a valid variety or class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            0 => write!(f, "invalid expression: {}", self.message),
            c => write!(f, "parse error at column {c}: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyExpr {
    Point,
    Proj(usize),
    Prod(Box<VarietyExpr>, Box<VarietyExpr>),
    /// Base and the Chern class literals, whitespace removed.
    ProjBundle(Box<VarietyExpr>, Vec<String>),
    Blowup(usize, usize),
}

impl fmt::Display for VarietyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyExpr::Point => write!(f, "pt"),
            VarietyExpr::Proj(n) => write!(f, "P({n})"),
            VarietyExpr::Prod(a, b) => write!(f, "prod({a},{b})"),
            VarietyExpr::ProjBundle(b, cs) => write!(f, "projbundle({b};{})", cs.join(",")),
            VarietyExpr::Blowup(n, m) => write!(f, "blowup(P({n}),P({m}))"),
        }
    }
}

impl VarietyExpr {
    /// Builds the variety; the result's key is the normalized expression.
    pub fn eval(&self) -> Result<Variety, ParseError> {
        let fail = |message: String| ParseError { column: 0, message };
        match self {
            VarietyExpr::Point => Ok(make_point()),
            VarietyExpr::Proj(n) => Ok(make_proj(*n)),
            VarietyExpr::Prod(a, b) => Ok(make_product(&a.eval()?, &b.eval()?)),
            VarietyExpr::ProjBundle(b, cs) => {
                let base = b.eval()?;
                let classes = cs
                    .iter()
                    .map(|c| parse_class(&base, c))
                    .collect::<Result<Vec<_>, _>>()?;
                make_proj_bundle(&base, &classes).map_err(|e| fail(e.to_string()))
            }
            VarietyExpr::Blowup(n, m) => {
                make_blowup_linear(*n, *m).map_err(|e| fail(e.to_string()))
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn variety(s: &str) -> Result<Variety, ParseError> {
    parse(s)?.eval()
}

pub fn parse(s: &str) -> Result<VarietyExpr, ParseError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {lit:?}")))
        }
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| ParseError {
            column: start + 1,
            message: "expected a natural number".into(),
        })
    }

    fn expr(&mut self) -> Result<VarietyExpr, ParseError> {
        if self.eat("pt") {
            return Ok(VarietyExpr::Point);
        }
        if self.eat("P(") {
            let n = self.nat()?;
            self.expect(")")?;
            return Ok(VarietyExpr::Proj(n));
        }
        if self.eat("prod(") {
            let a = self.expr()?;
            self.expect(",")?;
            let b = self.expr()?;
            self.expect(")")?;
            return Ok(VarietyExpr::Prod(Box::new(a), Box::new(b)));
        }
        if self.eat("projbundle(") {
            let base = self.expr()?;
            self.expect(";")?;
            let mut chern = vec![self.literal()?];
            while self.eat(",") {
                chern.push(self.literal()?);
            }
            self.expect(")")?;
            return Ok(VarietyExpr::ProjBundle(Box::new(base), chern));
        }
        if self.eat("blowup(") {
            self.expect("P(")?;
            let n = self.nat()?;
            self.expect(")")?;
            self.expect(",")?;
            self.expect("P(")?;
            let m = self.nat()?;
            self.expect(")")?;
            self.expect(")")?;
            return Ok(VarietyExpr::Blowup(n, m));
        }
        Err(self.error("expected pt, P(n), prod(..), projbundle(..) or blowup(..)"))
    }

    /// Raw text of one polynomial literal, up to a `,` or `)` at depth zero.
    fn literal(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                b',' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        let text: String = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| self.error("invalid utf-8"))?
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if text.is_empty() {
            return Err(ParseError {
                column: start + 1,
                message: "empty Chern class literal".into(),
            });
        }
        Ok(text)
    }
}

/// Parses a polynomial literal in the generators of `x`: sums, products,
/// powers `^`, parentheses and rational constants `a/b`.
pub fn parse_class(x: &Variety, s: &str) -> Result<GradedClass, ParseError> {
    let mut p = ClassParser {
        x,
        src: s.as_bytes(),
        pos: 0,
    };
    let c = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("trailing input in class literal"));
    }
    Ok(c)
}

struct ClassParser<'a> {
    x: &'a Variety,
    src: &'a [u8],
    pos: usize,
}

impl ClassParser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<GradedClass, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.product()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<GradedClass, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.number()?;
                    if d == Rational::from_integer(0.into()) {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale_rational(&(Rational::from_integer(1.into()) / d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<GradedClass, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            if !e.is_integer() || e < Rational::from_integer(0.into()) {
                return Err(self.error("exponent must be a natural number"));
            }
            let k: usize = e
                .to_integer()
                .to_string()
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GradedClass, ParseError> {
        let ring = self.x.ring();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(GradedClass::one(ring).scale_rational(&self.number()?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name =
                    std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                self.x.gen(name).ok_or_else(|| ParseError {
                    column: start + 1,
                    message: format!("{name:?} is not a generator of {}", self.x.key()),
                })
            }
            _ => Err(self.error("expected a number, a generator or '('")),
        }
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse::<Rational>().map_err(|_| ParseError {
            column: start + 1,
            message: "expected a number".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        for s in [
            "pt",
            "P(3)",
            "prod(P(1),P(2))",
            "blowup(P(3),P(1))",
            "projbundle(P(1);3*h,0)",
            "projbundle(P(2);h,h^2)",
        ] {
            let x = variety(s).unwrap();
            assert_eq!(x.key(), s);
            assert_eq!(parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn render_normalizes_whitespace() {
        let e = parse(" prod( P(1) , projbundle(P(1); 2 * h , 0) ) ").unwrap();
        assert_eq!(e.to_string(), "prod(P(1),projbundle(P(1);2*h,0))");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn classes() {
        let x = variety("prod(P(1),P(2))").unwrap();
        let c = parse_class(&x, "(h + h2)^2 - 2*h*h2").unwrap();
        assert_eq!(c, parse_class(&x, "h2^2").unwrap());
        assert_eq!(parse_class(&x, "1/2*h + h/2").unwrap(), x.gen("h").unwrap());
        assert!(parse_class(&x, "y*h").is_err());
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("prod(P(1) P(2))").unwrap_err();
        assert_eq!(e.column, 11);
        assert!(parse("P(x)").is_err());
        assert!(parse("blowup(P(2),P(3))").unwrap().eval().is_err());
        assert!(variety("projbundle(P(2);h^2,0)").is_err());
    }
}
