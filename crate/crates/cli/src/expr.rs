//! Expressions over `{t, pi, theta, digits, + - * / ^ ( )}`, evaluated to
//! `j^{−pole}·p(t)` with `p` a polynomial over the base field. Division is by
//! constants times powers of `j = t − θ` only.

use std::fmt;

use tmodels_core::tower::{taylor_shift, Field, TPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        column,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<i64>()
                .or_else(|_| err(col, "number too large"))?;
            out.push((Tok::Num(n), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else if c == '−' {
            out.push((Tok::Op('-'), col));
            i += 1;
        } else {
            return err(col, format!("unexpected character '{}'", c));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            let col = self.col();
            self.pos += 1;
            let neg = self.eat('-');
            let had_paren = self.eat('(');
            let neg = neg || (had_paren && self.eat('-'));
            let n = match self.peek() {
                Some(Tok::Num(n)) => *n,
                _ => return err(self.col(), "expected an integer exponent"),
            };
            self.pos += 1;
            if had_paren && !self.eat(')') {
                return err(self.col(), "expected ')'");
            }
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }, col));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return err(self.col(), "expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => err(col, format!("unexpected '{}'", c)),
            None => err(col, "unexpected end of expression"),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.col(), "unexpected trailing input");
    }
    Ok(e)
}

/// `j^{−pole}·num`.
#[derive(Clone, Debug)]
pub struct JValue<K: Field> {
    pub pole: u32,
    pub num: TPoly<K>,
}

/// Evaluation context: the field, `θ`, and the meaning of `pi`.
pub struct Env<'a, K: Field> {
    pub field: &'a K,
    pub theta: &'a K::Elem,
    pub pi: Option<K::Elem>,
}

impl<K: Field> Env<'_, K> {
    fn j(&self) -> TPoly<K> {
        TPoly::j(self.field, self.theta)
    }

    fn lift(&self, v: &JValue<K>, pole: u32) -> TPoly<K> {
        v.num
            .mul(self.field, &self.j().pow(self.field, pole - v.pole))
    }

    fn constant(&self, c: K::Elem) -> JValue<K> {
        JValue {
            pole: 0,
            num: TPoly::constant(self.field, c),
        }
    }

    /// `1/v` when `v` is a constant times a power of `j`.
    fn invert(&self, v: &JValue<K>, col: usize) -> Result<JValue<K>, ExprError> {
        let k = self.field;
        let exp = taylor_shift(k, &v.num, self.theta);
        let mut nz = exp.iter().enumerate().filter(|(_, c)| !k.is_zero(c));
        let Some((m, c)) = nz.next() else {
            return err(col, "division by zero");
        };
        if nz.next().is_some() {
            return err(
                col,
                "can only divide by a constant times a power of (t - theta)",
            );
        }
        let ci = k.inv(c).ok_or(ExprError {
            column: col,
            message: "division by zero".into(),
        })?;
        // 1/(j^{−p}·c·j^m) = c⁻¹·j^{p−m}.
        let e = v.pole as i64 - m as i64;
        Ok(if e >= 0 {
            JValue {
                pole: 0,
                num: TPoly::constant(k, ci).mul(k, &self.j().pow(k, e as u32)),
            }
        } else {
            JValue {
                pole: (-e) as u32,
                num: TPoly::constant(k, ci),
            }
        })
    }

    fn mul(&self, a: &JValue<K>, b: &JValue<K>) -> JValue<K> {
        JValue {
            pole: a.pole + b.pole,
            num: a.num.mul(self.field, &b.num),
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<JValue<K>, ExprError> {
        let k = self.field;
        Ok(match e {
            Expr::Num(n) => self.constant(k.from_int(*n)),
            Expr::Var(v) => match v.as_str() {
                "t" => JValue {
                    pole: 0,
                    num: TPoly::t(k),
                },
                "theta" => self.constant(self.theta.clone()),
                "pi" => match &self.pi {
                    Some(p) => self.constant(p.clone()),
                    None => return err(1, "pi is not available over a global base"),
                },
                other => return err(1, format!("unknown variable '{}'", other)),
            },
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                JValue {
                    pole: a.pole,
                    num: a.num.neg(k),
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                let p = a.pole.max(b.pole);
                let (x, y) = (self.lift(&a, p), self.lift(&b, p));
                let num = if matches!(e, Expr::Add(..)) {
                    x.add(k, &y)
                } else {
                    x.sub(k, &y)
                };
                JValue { pole: p, num }
            }
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Expr::Div(a, b, col) => {
                let inv = self.invert(&self.eval(b)?, *col)?;
                self.mul(&self.eval(a)?, &inv)
            }
            Expr::Pow(a, n, col) => {
                let base = self.eval(a)?;
                let base = if *n < 0 {
                    self.invert(&base, *col)?
                } else {
                    base
                };
                let mut acc = self.constant(k.one());
                for _ in 0..n.unsigned_abs() {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
        })
    }

    /// Evaluates to an element of the base field; `t` must not occur.
    pub fn eval_constant(&self, e: &Expr) -> Result<K::Elem, ExprError> {
        let v = self.eval(e)?;
        let num = self.lift(&v, v.pole);
        if v.pole > 0 || num.degree().is_some_and(|d| d > 0) {
            return err(1, "expected a constant");
        }
        Ok(num.coeff(self.field, 0))
    }
}

/// A polynomial in `t` over `F_q` (for `ℓ`), coefficients low degree first.
pub fn parse_fq_poly(s: &str, q: u64) -> Result<Vec<u32>, ExprError> {
    let k = tmodels_core::tower::Gf::new(q, 1).ok_or(ExprError {
        column: 1,
        message: "bad q".into(),
    })?;
    let e = parse(s)?;
    let zero = 0u32;
    let env = Env {
        field: &k,
        theta: &zero,
        pi: None,
    };
    let v = env.eval(&e)?;
    if v.pole > 0 {
        return err(1, "expected a polynomial in t");
    }
    Ok(v.num.coeffs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tmodels_core::tower::LocalField;

    #[test]
    fn parses_and_evaluates() {
        let e = LocalField::over(2, 1).unwrap();
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let env = Env {
            field: &e,
            theta: &th,
            pi: Some(e.pi()),
        };
        let v = env.eval(&parse("t^2 + pi*t - 1/pi").unwrap()).unwrap();
        assert_eq!(v.pole, 0);
        assert_eq!(v.num.degree(), Some(2));
        assert!(e.eq_elem(&v.num.coeff(&e, 0), &e.pi().powi(-1).unwrap()));

        let w = env.eval(&parse("1/(t - theta)^2 + 1").unwrap()).unwrap();
        assert_eq!(w.pole, 2);
        let w = env
            .eval(&parse("(t-theta)^(-1) * (t - theta)").unwrap())
            .unwrap();
        assert_eq!(w.pole, 1);
        assert_eq!(parse_fq_poly("t^2+t+1", 2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(parse("t + * 2").unwrap_err().column, 5);
        assert_eq!(parse("(t + 1").unwrap_err().column, 7);
        assert_eq!(parse("t $ 1").unwrap_err().column, 3);
        let e = LocalField::over(2, 1).unwrap();
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let env = Env {
            field: &e,
            theta: &th,
            pi: Some(e.pi()),
        };
        assert!(env.eval(&parse("1/t").unwrap()).is_err());
    }
}
