//! Compactly supported planar Hamiltonians and their text form.
//!
//! A Hamiltonian is a sum of terms `c * bump(r[,cx,cy]) * x^a * y^b * t^k`.
//! The bump profile is `exp(1 - 1/(1-u))` with `u = |p - center|^2 / r^2`,
//! extended by zero for `u >= 1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Real;

pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("literal is representable")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonianError {
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("term {0} has no bump factor and would not be compactly supported")]
    Unbounded(usize),
    #[error("term {0} has more than one bump factor")]
    DoubleBump(usize),
    #[error("bump radius must be positive, got {0}")]
    Radius(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump<T> {
    pub radius: T,
    pub cx: T,
    pub cy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub coeff: T,
    pub bump: Bump<T>,
    pub px: u32,
    pub py: u32,
    pub pt: u32,
}

/// Value, gradient and Hessian of a Hamiltonian at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub gx: T,
    pub gy: T,
    pub hxx: T,
    pub hxy: T,
    pub hyy: T,
}

impl<T: Real> Jet<T> {
    fn zero() -> Self {
        let z = T::zero();
        Jet { value: z, gx: z, gy: z, hxx: z, hxy: z, hyy: z }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarHamiltonian<T> {
    terms: Vec<Term<T>>,
}

/// `x^n` together with its first two derivatives, without `0 * inf` at the origin.
fn power_jet<T: Real>(x: T, n: u32) -> (T, T, T) {
    let n_t = T::from_u32(n).unwrap();
    let p = |k: u32| x.powi(k as i32);
    match n {
        0 => (T::one(), T::zero(), T::zero()),
        1 => (x, T::one(), T::zero()),
        _ => (p(n), n_t * p(n - 1), n_t * (n_t - T::one()) * p(n - 2)),
    }
}

impl<T: Real> Bump<T> {
    /// Profile value and its first two derivatives in `u`, or `None` outside the disk.
    fn profile(&self, x: T, y: T) -> Option<(T, T, T, T, T)> {
        let q = x - self.cx;
        let w = y - self.cy;
        let k = (self.radius * self.radius).recip();
        let u = k * (q * q + w * w);
        if u >= T::one() {
            return None;
        }
        let v = (T::one() - u).recip();
        let b = (T::one() - v).exp();
        let b1 = -v * v * b;
        let b2 = b * (v * v * v * v - lit::<T>(2.0) * v * v * v);
        Some((b, b1, b2, q, w))
    }

    pub fn contains(&self, x: T, y: T, margin: T) -> bool {
        let q = x - self.cx;
        let w = y - self.cy;
        let r = self.radius + margin;
        q * q + w * w < r * r
    }
}

impl<T: Real> Term<T> {
    fn add_jet(&self, x: T, y: T, t: T, acc: &mut Jet<T>) {
        let Some((b, b1, b2, q, w)) = self.bump.profile(x, y) else {
            return;
        };
        let two = lit::<T>(2.0);
        let k = (self.bump.radius * self.bump.radius).recip();
        let bx = b1 * two * k * q;
        let by = b1 * two * k * w;
        let bxx = b2 * two * two * k * k * q * q + b1 * two * k;
        let byy = b2 * two * two * k * k * w * w + b1 * two * k;
        let bxy = b2 * two * two * k * k * q * w;
        let (mx, mx1, mx2) = power_jet(x, self.px);
        let (my, my1, my2) = power_jet(y, self.py);
        let m = mx * my;
        let c = self.coeff * t.powi(self.pt as i32);
        acc.value = acc.value + c * b * m;
        acc.gx = acc.gx + c * (bx * m + b * mx1 * my);
        acc.gy = acc.gy + c * (by * m + b * mx * my1);
        acc.hxx = acc.hxx + c * (bxx * m + two * bx * mx1 * my + b * mx2 * my);
        acc.hyy = acc.hyy + c * (byy * m + two * by * mx * my1 + b * mx * my2);
        acc.hxy = acc.hxy + c * (bxy * m + bx * mx * my1 + by * mx1 * my + b * mx1 * my1);
    }
}

impl<T: Real> Term<T> {
    fn add_gradient(&self, x: T, y: T, t: T, acc: &mut (T, T, T)) {
        let q = x - self.bump.cx;
        let w = y - self.bump.cy;
        let r2 = self.bump.radius * self.bump.radius;
        let gap = r2 - (q * q + w * w);
        if gap <= T::zero() {
            return;
        }
        // v = 1 / (1 - u) = r^2 / gap, and d/du exp(1 - v) = -v^2 exp(1 - v)
        let inv = gap.recip();
        let v = r2 * inv;
        let b = (T::one() - v).exp();
        let s = -lit::<T>(2.0) * v * inv * b;
        let (mx, mx1, _) = power_jet(x, self.px);
        let (my, my1, _) = power_jet(y, self.py);
        let m = mx * my;
        let c = if self.pt == 0 { self.coeff } else { self.coeff * t.powi(self.pt as i32) };
        acc.0 = acc.0 + c * b * m;
        acc.1 = acc.1 + c * (s * q * m + b * mx1 * my);
        acc.2 = acc.2 + c * (s * w * m + b * mx * my1);
    }
}

impl<T: Real> PlanarHamiltonian<T> {
    /// Value and gradient only, the hot path of the flow.
    pub fn gradient(&self, x: T, y: T, t: T) -> (T, T, T) {
        let mut acc = (T::zero(), T::zero(), T::zero());
        for term in &self.terms {
            term.add_gradient(x, y, t, &mut acc);
        }
        acc
    }

    pub fn zero() -> Self {
        PlanarHamiltonian { terms: Vec::new() }
    }

    pub fn new(terms: Vec<Term<T>>) -> Result<Self, HamiltonianError> {
        for t in &terms {
            if t.bump.radius.is_nan() || t.bump.radius <= T::zero() {
                return Err(HamiltonianError::Radius(format!("{}", t.bump.radius)));
            }
        }
        Ok(PlanarHamiltonian { terms })
    }

    /// `c * bump(r)` centred at the origin.
    pub fn radial(c: T, r: T) -> Self {
        let z = T::zero();
        PlanarHamiltonian {
            terms: vec![Term { coeff: c, bump: Bump { radius: r, cx: z, cy: z }, px: 0, py: 0, pt: 0 }],
        }
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == T::zero())
    }

    pub fn scaled(&self, k: T) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * k, ..t.clone() }).collect();
        PlanarHamiltonian { terms }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PlanarHamiltonian { terms }
    }

    pub fn is_autonomous(&self) -> bool {
        self.terms.iter().all(|t| t.pt == 0)
    }

    /// Radius of a disk about the origin containing every bump.
    pub fn support_radius(&self) -> T {
        self.terms
            .iter()
            .map(|t| (t.bump.cx * t.bump.cx + t.bump.cy * t.bump.cy).sqrt() + t.bump.radius)
            .fold(T::zero(), T::max)
    }

    /// Whether `(x, y)` lies within `margin` of some bump disk.
    pub fn near_support(&self, x: T, y: T, margin: T) -> bool {
        self.terms.iter().any(|t| t.coeff != T::zero() && t.bump.contains(x, y, margin))
    }

    pub fn jet(&self, x: T, y: T, t: T) -> Jet<T> {
        let mut acc = Jet::zero();
        for term in &self.terms {
            term.add_jet(x, y, t, &mut acc);
        }
        acc
    }

    pub fn value(&self, x: T, y: T, t: T) -> T {
        self.jet(x, y, t).value
    }
}

impl<T: Real> fmt::Display for PlanarHamiltonian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            match (i, c < T::zero()) {
                (0, false) => write!(f, "{c}")?,
                (0, true) => write!(f, "-{}", -c)?,
                (_, false) => write!(f, " + {c}")?,
                (_, true) => write!(f, " - {}", -c)?,
            }
            let b = &t.bump;
            if b.cx == T::zero() && b.cy == T::zero() {
                write!(f, " * bump({})", b.radius)?;
            } else {
                write!(f, " * bump({},{},{})", b.radius, b.cx, b.cy)?;
            }
            for (name, p) in [("x", t.px), ("y", t.py), ("t", t.pt)] {
                match p {
                    0 => {}
                    1 => write!(f, " * {name}")?,
                    _ => write!(f, " * {name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<R>(&self, msg: impl Into<String>) -> Result<R, HamiltonianError> {
        Err(HamiltonianError::Parse { at: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HamiltonianError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<f64, HamiltonianError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut end = 0;
        let bytes = rest.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() {
            let c = bytes[end];
            let exp_sign = (c == b'-' || c == b'+') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                end += 1;
            } else {
                break;
            }
        }
        match rest[..end].parse::<f64>() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err("expected a number"),
        }
    }

    fn exponent(&mut self) -> Result<u32, HamiltonianError> {
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        match rest[..end].parse::<u32>() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err("expected a non-negative integer exponent"),
        }
    }

    fn term<T: Real>(&mut self, index: usize, sign: f64) -> Result<Term<T>, HamiltonianError> {
        let mut coeff = sign;
        let mut bump: Option<Bump<T>> = None;
        let (mut px, mut py, mut pt) = (0, 0, 0);
        loop {
            match self.peek() {
                Some('x') => {
                    self.pos += 1;
                    px += self.exponent()?;
                }
                Some('y') => {
                    self.pos += 1;
                    py += self.exponent()?;
                }
                Some('t') => {
                    self.pos += 1;
                    pt += self.exponent()?;
                }
                Some('b') => {
                    if !self.src[self.pos..].starts_with("bump") {
                        return self.err("unknown identifier");
                    }
                    self.pos += 4;
                    self.expect('(')?;
                    let r = self.number()?;
                    let (mut cx, mut cy) = (0.0, 0.0);
                    if self.eat(',') {
                        cx = self.number()?;
                        self.expect(',')?;
                        cy = self.number()?;
                    }
                    self.expect(')')?;
                    if r.is_nan() || r <= 0.0 {
                        return Err(HamiltonianError::Radius(r.to_string()));
                    }
                    if bump.is_some() {
                        return Err(HamiltonianError::DoubleBump(index));
                    }
                    bump = Some(Bump { radius: lit(r), cx: lit(cx), cy: lit(cy) });
                }
                Some(c) if c.is_ascii_digit() || c == '.' => coeff *= self.number()?,
                _ => return self.err("expected a factor"),
            }
            if !self.eat('*') {
                break;
            }
        }
        let bump = bump.ok_or(HamiltonianError::Unbounded(index))?;
        Ok(Term { coeff: lit(coeff), bump, px, py, pt })
    }
}

impl<T: Real> FromStr for PlanarHamiltonian<T> {
    type Err = HamiltonianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        if p.peek() == Some('0') && s.trim() == "0" {
            return Ok(PlanarHamiltonian::zero());
        }
        let mut terms = Vec::new();
        let mut sign = if p.eat('-') { -1.0 } else { 1.0 };
        loop {
            terms.push(p.term(terms.len(), sign)?);
            if p.eat('+') {
                sign = 1.0;
            } else if p.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        PlanarHamiltonian::new(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let h: PlanarHamiltonian<f64> = "0.5 * bump(1) * x^2 - bump(0.4,1,-0.5) * y * t".parse().unwrap();
        assert_eq!(h.terms().len(), 2);
        assert_eq!(h.to_string(), "0.5 * bump(1) * x^2 - 1 * bump(0.4,1,-0.5) * y * t");
        let again: PlanarHamiltonian<f64> = h.to_string().parse().unwrap();
        assert_eq!(again, h);
        assert!("x * y".parse::<PlanarHamiltonian<f64>>().is_err());
        assert!("bump(1) * bump(2)".parse::<PlanarHamiltonian<f64>>().is_err());
        assert!("bump(-1)".parse::<PlanarHamiltonian<f64>>().is_err());
        assert!("0".parse::<PlanarHamiltonian<f64>>().unwrap().is_zero());
    }

    #[test]
    fn jet_matches_finite_differences() {
        let h: PlanarHamiltonian<f64> = "0.7 * bump(1.2,0.1,0.2) * x * y^2 + bump(0.8,-0.3,0.4) * x^3".parse().unwrap();
        let e = 1e-5;
        for &(x, y) in &[(0.3, -0.2), (-0.5, 0.6), (0.0, 0.0), (0.9, 0.1)] {
            let j = h.jet(x, y, 0.0);
            let dx = |f: &dyn Fn(f64, f64) -> f64| (f(x + e, y) - f(x - e, y)) / (2.0 * e);
            let dy = |f: &dyn Fn(f64, f64) -> f64| (f(x, y + e) - f(x, y - e)) / (2.0 * e);
            let v = |a: f64, b: f64| h.value(a, b, 0.0);
            let gx = |a: f64, b: f64| h.jet(a, b, 0.0).gx;
            let gy = |a: f64, b: f64| h.jet(a, b, 0.0).gy;
            assert!((dx(&v) - j.gx).abs() < 1e-8);
            assert!((dy(&v) - j.gy).abs() < 1e-8);
            assert!((dx(&gx) - j.hxx).abs() < 1e-7);
            assert!((dy(&gx) - j.hxy).abs() < 1e-7);
            assert!((dy(&gy) - j.hyy).abs() < 1e-7);
            let (v0, g0, g1) = h.gradient(x, y, 0.0);
            assert!((v0 - j.value).abs() < 1e-15 && (g0 - j.gx).abs() < 1e-13 && (g1 - j.gy).abs() < 1e-13);
        }
        assert_eq!(h.value(3.0, 3.0, 0.0), 0.0);
    }
}
