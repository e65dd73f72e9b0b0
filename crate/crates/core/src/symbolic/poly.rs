use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Exponent pair `(degree in n, degree in k)`.
pub type Monomial = (u32, u32);

/// Polynomial in `n` and `k` over the rationals.
///
/// Zero coefficients are never stored and the map is ordered, so equality is
/// structural. The leading term is the lexicographically largest monomial
/// (`n` before `k`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn n() -> Self {
        Self::monomial(Rational::from(1), 1, 0)
    }

    pub fn k() -> Self {
        Self::monomial(Rational::from(1), 0, 1)
    }

    pub fn monomial(c: Rational, dn: u32, dk: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((dn, dk), c);
        p
    }

    /// `c0 + cn·n + ck·k`.
    pub fn linear(c0: &Rational, cn: &Rational, ck: &Rational) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c0.clone());
        p.add_term((1, 0), cn.clone());
        p.add_term((0, 1), ck.clone());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.coeff((0, 0)))
    }

    pub fn deg_n(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0).max()
    }

    pub fn deg_k(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.1).max()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0 + m.1).max()
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, Rational::from(v * c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at an exact point.
    pub fn eval(&self, n: &Rational, k: &Rational) -> Rational {
        let mut acc = Rational::new();
        for (&(a, b), c) in &self.terms {
            let t = Rational::from(c * pow_q(n, a)) * pow_q(k, b);
            acc += t;
        }
        acc
    }

    /// `p(n + a, k + b)`.
    pub fn shift(&self, a: &Rational, b: &Rational) -> Self {
        if *a == 0 && *b == 0 {
            return self.clone();
        }
        let n_shift = &Self::n() + &Self::constant(a.clone());
        let k_shift = &Self::k() + &Self::constant(b.clone());
        self.compose(&n_shift, &k_shift)
    }

    /// `p(N, K)` for polynomials `N`, `K`.
    pub fn compose(&self, n_poly: &Self, k_poly: &Self) -> Self {
        let max_n = self.deg_n().unwrap_or(0);
        let max_k = self.deg_k().unwrap_or(0);
        let mut npow = vec![Self::one()];
        for i in 1..=max_n as usize {
            npow.push(&npow[i - 1] * n_poly);
        }
        let mut kpow = vec![Self::one()];
        for i in 1..=max_k as usize {
            kpow.push(&kpow[i - 1] * k_poly);
        }
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let t = (&npow[a as usize] * &kpow[b as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    /// Substitutes `n = v`, leaving a polynomial in `k` alone.
    pub fn subst_n(&self, v: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term((0, b), Rational::from(c * pow_q(v, a)));
        }
        out
    }

    /// Substitutes `k = v`, leaving a polynomial in `n` alone.
    pub fn subst_k(&self, v: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term((a, 0), Rational::from(c * pow_q(v, b)));
        }
        out
    }

    /// Coefficients as a polynomial in `n` over `Q[k]`, lowest degree first.
    pub fn coeffs_in_n(&self) -> Vec<Self> {
        let Some(d) = self.deg_n() else {
            return Vec::new();
        };
        let mut out = vec![Self::zero(); d as usize + 1];
        for (&(a, b), c) in &self.terms {
            out[a as usize].add_term((0, b), c.clone());
        }
        out
    }

    fn from_coeffs_in_n(coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (a, c) in coeffs.iter().enumerate() {
            for (&(_, b), v) in &c.terms {
                out.add_term((a as u32, b), v.clone());
            }
        }
        out
    }

    pub fn depends_on_n(&self) -> bool {
        self.terms.keys().any(|m| m.0 > 0)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            if m.0 < dm.0 || m.1 < dm.1 {
                return None;
            }
            let qm = (m.0 - dm.0, m.1 - dm.1);
            let qc = Rational::from(c / &dc);
            let t = Self::monomial(qc, qm.0, qm.1);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Makes the leading coefficient 1; returns the factor divided out.
    pub fn monic(&self) -> (Self, Rational) {
        match self.leading() {
            None => (Self::zero(), Rational::from(1)),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&Rational::from(c.recip_ref())), c)
            }
        }
    }

    /// Greatest common divisor, monic (leading coefficient 1); `gcd(0, 0) = 0`.
    ///
    /// Content in `Q[k]` times the primitive part of a primitive
    /// pseudo-remainder sequence in `n`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic().0;
        }
        if other.is_zero() {
            return self.monic().0;
        }
        if !self.depends_on_n() && !other.depends_on_n() {
            return gcd_k(self, other);
        }
        let (ca, pa) = content_split(self);
        let (cb, pb) = content_split(other);
        let c = gcd_k(&ca, &cb);
        let (mut a, mut b) = (pa, pb);
        if a.deg_n() < b.deg_n() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = prem_n(&a, &b);
            a = b;
            b = if r.is_zero() { r } else { content_split(&r).1 };
        }
        let g = if a.depends_on_n() {
            content_split(&a).1
        } else {
            Self::one()
        };
        (&c * &g).monic().0
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c == 1)
    }
}

fn pow_q(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Polynomial remainder for polynomials in `k` only.
fn rem_k(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (bm, bc) = b.leading().expect("nonzero divisor");
    let bc = bc.clone();
    let mut r = a.clone();
    while let Some((m, c)) = r.leading() {
        if m.1 < bm.1 {
            break;
        }
        let t = MultiPoly::monomial(Rational::from(c / &bc), 0, m.1 - bm.1);
        r = &r - &(&t * b);
    }
    r
}

/// Monic gcd of polynomials in `k` only, by Euclid over Q.
fn gcd_k(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    if a.deg_k() < b.deg_k() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = rem_k(&a, &b);
        a = b;
        b = r.monic().0;
    }
    if a.is_zero() {
        return MultiPoly::zero();
    }
    a.monic().0
}

/// Splits `p` into its content in `Q[k]` (monic) and primitive part.
fn content_split(p: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let coeffs = p.coeffs_in_n();
    let mut g = MultiPoly::zero();
    for c in &coeffs {
        if !c.is_zero() {
            g = gcd_k(&g, c);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return (MultiPoly::one(), p.clone());
    }
    let prim: Vec<MultiPoly> = coeffs
        .iter()
        .map(|c| c.div_exact(&g).expect("content divides every coefficient"))
        .collect();
    (g, MultiPoly::from_coeffs_in_n(&prim))
}

/// Pseudo-remainder of `a` by `b` as polynomials in `n` over `Q[k]`.
fn prem_n(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let db = b.deg_n().expect("nonzero divisor");
    let bc = b.coeffs_in_n();
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while let Some(dr) = r.deg_n() {
        if r.is_zero() || dr < db {
            break;
        }
        let lr = r.coeffs_in_n()[dr as usize].clone();
        let shift = MultiPoly::monomial(Rational::from(1), dr - db, 0);
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, Rational::from(-c));
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), Rational::from(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical text form, highest monomial first, e.g. `2*n^2*k - 1/2*k + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&(a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if abs != 1 || (a == 0 && b == 0) {
                factors.push(abs.to_string());
            }
            for (var, e) in [("n", a), ("k", b)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for MultiPoly {
    type Err = Error;

    /// Parses `+ - * ^`, parentheses, integers, rationals `p/q` and the
    /// variables `n`, `k`. Juxtaposition is not multiplication.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(parse_err(format!("unexpected trailing input in `{s}`")));
        }
        Ok(out)
    }
}

fn parse_err(msg: String) -> Error {
    Error::Parse { line: 0, msg }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Integer),
    Var(char),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let v = Integer::from_str_radix(&digits, 10).map_err(|e| parse_err(e.to_string()))?;
            out.push(Tok::Num(v));
        } else if c == 'n' || c == 'k' {
            out.push(Tok::Var(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(parse_err(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if self.eat_op('-') {
            -&self.term()?
        } else {
            self.eat_op('+');
            self.term()?
        };
        loop {
            if self.eat_op('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_op('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while self.eat_op('*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    let e = e
                        .to_u32()
                        .ok_or_else(|| parse_err("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(parse_err("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(p)) => {
                self.pos += 1;
                if self.eat_op('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(q)) if q != 0 => {
                            self.pos += 1;
                            Ok(MultiPoly::constant(Rational::from((p, q))))
                        }
                        _ => Err(parse_err("expected a nonzero denominator after `/`".into())),
                    }
                } else {
                    Ok(MultiPoly::constant(Rational::from(p)))
                }
            }
            Some(Tok::Var('n')) => {
                self.pos += 1;
                Ok(MultiPoly::n())
            }
            Some(Tok::Var(_)) => {
                self.pos += 1;
                Ok(MultiPoly::k())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(parse_err("missing `)`".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            other => Err(parse_err(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let a = p("(2*n+1)*(86*n+19) + 4*k*(20*n+7) + 12*k^2");
        let b = p(&a.to_string());
        assert_eq!(a, b);
        assert_eq!(p("1/2*n - k").to_string(), "1/2*n - k");
        assert_eq!(p("-(n+k)^2").to_string(), "-n^2 - 2*n*k - k^2");
    }

    #[test]
    fn shift_matches_substitution() {
        let a = p("3*k^3 + k^2*(20*n+3) + k*n*(43*n+12) + n^2*(30*n+11)");
        let s = a.shift(&Rational::from(1), &Rational::from((-1, 2)));
        let pt = (Rational::from((2, 7)), Rational::from(5));
        let direct = a.eval(
            &(pt.0.clone() + 1u32),
            &(pt.1.clone() - Rational::from((1, 2))),
        );
        assert_eq!(s.eval(&pt.0, &pt.1), direct);
    }

    #[test]
    fn gcd_and_exact_division() {
        let g = p("n + k");
        let a = &g * &p("2*n + 1");
        let b = &(&g * &g) * &p("k - 3");
        assert_eq!(a.gcd(&b), g);
        assert_eq!(a.div_exact(&g).unwrap(), p("2*n + 1"));
        assert!(a.div_exact(&p("n - k")).is_none());
        let ka = p("k^2 - 1");
        let kb = &p("k + 1") * &p("n");
        assert_eq!(ka.gcd(&kb), p("k + 1"));
        assert_eq!(p("4*n").gcd(&p("6*n*k")), p("n"));
    }
}
