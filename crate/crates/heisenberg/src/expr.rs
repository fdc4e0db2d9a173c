//! Closed-form Heisenberg-homogeneous symbols.
//!
//! The grammar covers polynomials in `ξ₀, ξ₁, ξ₂` and in the gauge `norm`,
//! real powers, quotients, and a smooth degree-0 cone bump:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" number)?
//! atom  := number | "xi0" | "xi1" | "xi2" | "norm" | "(" expr ")"
//!        | "cone(" a0 "," a1 "," a2 "," angle ")"
//! ```

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::HeisenbergError;
use crate::group::{dilate_unchecked, hnorm, unit_gauge};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Xi(usize),
    Norm,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, f64),
    /// `ψ(|ξ̂ − â| / angle)` on the unit gauge sphere, `ψ(r) = e^{1 − 1/(1−r²)}`
    /// for `r < 1` and 0 otherwise.
    Cone { axis: [f64; 3], angle: f64 },
}

/// Smooth bump with `ψ(0) = 1`, supported in `[0, 1)`.
pub fn bump(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

/// Smooth step: 0 for `r ≤ 1/4`, 1 for `r ≥ 1/2`.
pub fn low_cutoff(r: f64) -> f64 {
    let u = (r - 0.25) * 4.0;
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let f = |v: f64| if v > 0.0 { (-1.0 / v).exp() } else { 0.0 };
    f(u) / (f(u) + f(1.0 - u))
}

impl Expr {
    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Xi(i) => xi[*i],
            Expr::Norm => hnorm(xi),
            Expr::Add(a, b) => a.eval(xi) + b.eval(xi),
            Expr::Sub(a, b) => a.eval(xi) - b.eval(xi),
            Expr::Mul(a, b) => a.eval(xi) * b.eval(xi),
            Expr::Div(a, b) => a.eval(xi) / b.eval(xi),
            Expr::Neg(a) => -a.eval(xi),
            Expr::Pow(a, e) => {
                let v = a.eval(xi);
                if e.fract() == 0.0 && e.abs() < 64.0 {
                    v.powi(*e as i32)
                } else {
                    v.powf(*e)
                }
            }
            Expr::Cone { axis, angle } => {
                let a = unit_gauge(*axis);
                let u = unit_gauge(xi);
                let d = ((u[0] - a[0]).powi(2) + (u[1] - a[1]).powi(2) + (u[2] - a[2]).powi(2)).sqrt();
                bump(d / angle)
            }
        }
    }

    pub fn parse(src: &str) -> Result<Expr, HeisenbergError> {
        let mut p = Parser {
            toks: tokenize(src)?,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8| {
            if e.prec() < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "({})", fmt_num(*c)),
            Expr::Const(c) => write!(f, "{}", fmt_num(*c)),
            Expr::Xi(i) => write!(f, "xi{i}"),
            Expr::Norm => write!(f, "norm"),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{} * {}", wrap(a, 2), wrap(b, 3)),
            Expr::Div(a, b) => write!(f, "{} / {}", wrap(a, 2), wrap(b, 3)),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, 3)),
            Expr::Pow(a, e) => write!(f, "{}^({})", wrap(a, 5), fmt_num(*e)),
            Expr::Cone { axis, angle } => write!(
                f,
                "cone({}, {}, {}, {})",
                fmt_num(axis[0]),
                fmt_num(axis[1]),
                fmt_num(axis[2]),
                fmt_num(*angle)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, HeisenbergError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| HeisenbergError::Parse {
                pos: start,
                msg: format!("bad number {s:?}"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(HeisenbergError::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> HeisenbergError {
        let pos = self.toks.get(self.pos).map_or(usize::MAX, |t| t.0);
        HeisenbergError::Parse { pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HeisenbergError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, HeisenbergError> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, HeisenbergError> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, HeisenbergError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.signed_number()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_number(&mut self) -> Result<f64, HeisenbergError> {
        if self.eat('(') {
            let v = self.signed_number()?;
            self.expect(')')?;
            return Ok(v);
        }
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn atom(&mut self) -> Result<Expr, HeisenbergError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "xi0" => Ok(Expr::Xi(0)),
                    "xi1" => Ok(Expr::Xi(1)),
                    "xi2" => Ok(Expr::Xi(2)),
                    "norm" => Ok(Expr::Norm),
                    "cone" => {
                        self.expect('(')?;
                        let mut v = [0.0; 4];
                        for (i, slot) in v.iter_mut().enumerate() {
                            if i > 0 {
                                self.expect(',')?;
                            }
                            *slot = self.signed_number()?;
                        }
                        self.expect(')')?;
                        if v[3] <= 0.0 || hnorm([v[0], v[1], v[2]]) == 0.0 {
                            return Err(self.err("cone needs a nonzero axis and a positive angle"));
                        }
                        Ok(Expr::Cone {
                            axis: [v[0], v[1], v[2]],
                            angle: v[3],
                        })
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.err(&format!("unknown identifier {name:?}")))
                    }
                }
            }
            _ => Err(self.err("expected an operand")),
        }
    }
}

/// A function on `ℝ³ ∖ 0` with `p(t.ξ) = t^m p(ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HHomogeneousSymbol {
    pub degree: f64,
    pub expr: Expr,
}

const HOMOGENEITY_RAYS: usize = 16;
const HOMOGENEITY_TOL: f64 = 1e-9;

impl HHomogeneousSymbol {
    /// Checks homogeneity on random rays before accepting the expression.
    pub fn new(expr: Expr, degree: f64) -> Result<Self, HeisenbergError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4865_6973);
        for _ in 0..HOMOGENEITY_RAYS {
            let xi = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let v = expr.eval(xi);
            for t in [0.5, 1.7, 3.0] {
                let w = expr.eval(dilate_unchecked(xi, t));
                let expected = v * t.powf(degree);
                let defect = (w - expected).abs() / expected.abs().max(1e-300);
                if !(defect < HOMOGENEITY_TOL || (w - expected).abs() < 1e-14 * (1.0 + v.abs())) {
                    return Err(HeisenbergError::NotHomogeneous {
                        degree,
                        defect,
                        point: xi,
                    });
                }
            }
        }
        Ok(HHomogeneousSymbol { degree, expr })
    }

    pub fn parse(src: &str, degree: f64) -> Result<Self, HeisenbergError> {
        HHomogeneousSymbol::new(Expr::parse(src)?, degree)
    }

    /// `‖ξ‖^m`.
    pub fn gauge_power(m: f64) -> Self {
        HHomogeneousSymbol {
            degree: m,
            expr: Expr::Pow(Box::new(Expr::Norm), m),
        }
    }

    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        self.expr.eval(xi)
    }

    /// The symbol with the singularity at the origin removed by `χ(‖ξ‖)`.
    pub fn eval_regularized(&self, xi: [f64; 3]) -> f64 {
        let c = low_cutoff(hnorm(xi));
        if c == 0.0 {
            0.0
        } else {
            c * self.eval(xi)
        }
    }
}

impl fmt::Display for HHomogeneousSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let e = Expr::parse("norm^-2 * (1 + 0.3*xi1/norm) - xi0^2/norm^6").unwrap();
        let xi = [0.5, 1.0, -0.25];
        let n = hnorm(xi);
        let expected = n.powi(-2) * (1.0 + 0.3 * xi[1] / n) - 0.25 / n.powi(6);
        assert!((e.eval(xi) - expected).abs() < 1e-15);
        assert!(Expr::parse("xi3").is_err());
        assert!(Expr::parse("(xi1").is_err());
        assert!(Expr::parse("xi1 xi2").is_err());
    }

    #[test]
    fn display_round_trip() {
        for src in ["norm^(-1.5) * (1 + 0.2*xi0/norm^2)", "-xi1 * (xi2 - 3) / norm^4", "cone(0, 1, 0, 0.3) * norm^(-1)"] {
            let e = Expr::parse(src).unwrap();
            assert_eq!(Expr::parse(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }

    #[test]
    fn homogeneity_is_verified() {
        assert!(HHomogeneousSymbol::parse("norm^(-2) * (1 + 0.3*xi1/norm)", -2.0).is_ok());
        assert!(HHomogeneousSymbol::parse("xi0 + xi1^2", 2.0).is_ok());
        assert!(HHomogeneousSymbol::parse("xi0 + xi1", 2.0).is_err());
        assert!(HHomogeneousSymbol::parse("cone(0, 1, 0, 0.5) * norm^(-1)", -1.0).is_ok());
    }

    #[test]
    fn cutoffs() {
        assert_eq!(low_cutoff(0.2), 0.0);
        assert_eq!(low_cutoff(0.5), 1.0);
        assert!((low_cutoff(0.375) - 0.5).abs() < 1e-12);
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 0.0);
    }
}
