//! Sparse bivariate polynomials in `z1, z2` over the Gaussian rationals, and
//! dense univariate polynomials used as coefficients in the recursive view.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::coeff::GaussRat;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly(Vec<GaussRat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: GaussRat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(GaussRat::one())
    }

    /// `c·x^k`.
    pub fn monomial(c: GaussRat, k: usize) -> Self {
        let mut v = vec![GaussRat::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> GaussRat {
        self.0.last().cloned().unwrap_or_default()
    }

    /// Order of vanishing at 0.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = GaussRat::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &GaussRat) -> UPoly {
        if k.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![GaussRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        UPoly::new(v)
    }

    pub fn pow(&self, e: usize) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division over the coefficient field.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let inv = d.lc().inv();
        let mut r = self.clone();
        let mut q = vec![GaussRat::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let k = dr - dd;
            let c = &r.lc() * &inv;
            q[k] = &q[k] + &c;
            r = r.sub(&UPoly::monomial(c, k).mul(d));
        }
        (UPoly::new(q), r)
    }

    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lc().inv())
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c.to_c64())
    }
}

/// Sparse polynomial in `z1, z2`; keys are exponent pairs `(deg_z1, deg_z2)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

/// Graded lexicographic key with `z1 > z2`.
fn grlex(e: &(u32, u32)) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: GaussRat) -> Self {
        BivarPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: GaussRat, e1: u32, e2: u32) -> Self {
        let mut p = BivarPoly::zero();
        if !c.is_zero() {
            p.terms.insert((e1, e2), c);
        }
        p
    }

    pub fn z1() -> Self {
        BivarPoly::monomial(GaussRat::one(), 1, 0)
    }

    pub fn z2() -> Self {
        BivarPoly::monomial(GaussRat::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), GaussRat)>) -> Self {
        let mut p = BivarPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&e) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e1: u32, e2: u32) -> GaussRat {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(0, 0)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().unwrap_or(0) == 0
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| if var == 0 { e.0 } else { e.1 })
            .max()
    }

    /// Leading term in graded lexicographic order.
    pub fn leading(&self) -> Option<((u32, u32), GaussRat)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| grlex(e))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Scales so the graded-lex leading coefficient is 1.
    pub fn normalized(&self) -> BivarPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => BivarPoly::zero(),
        }
    }

    pub fn add(&self, o: &BivarPoly) -> BivarPoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &BivarPoly) -> BivarPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &GaussRat) -> BivarPoly {
        if k.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &BivarPoly) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                p.add_term((a.0 + b.0, a.1 + b.1), ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        (0..e).fold(BivarPoly::constant(GaussRat::one()), |acc, _| acc.mul(self))
    }

    /// Multiplies by `z1^a z2^b`.
    pub fn shift(&self, a: u32, b: u32) -> BivarPoly {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ((e.0 + a, e.1 + b), c.clone()))
                .collect(),
        }
    }

    /// `∂/∂z1` for `var = 0`, `∂/∂z2` for `var = 1`.
    pub fn derivative(&self, var: usize) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for (e, c) in &self.terms {
            let k = if var == 0 { e.0 } else { e.1 };
            if k == 0 {
                continue;
            }
            let ne = if var == 0 {
                (e.0 - 1, e.1)
            } else {
                (e.0, e.1 - 1)
            };
            p.add_term(ne, c * &GaussRat::int(k as i64));
        }
        p
    }

    /// Exchanges `z1` and `z2`.
    pub fn swap_vars(&self) -> BivarPoly {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ((e.1, e.0), c.clone()))
                .collect(),
        }
    }

    /// `f(z1, 0)` as a univariate polynomial in `z1`.
    pub fn restrict_z2_zero(&self) -> UPoly {
        let d = self.degree_in(0).unwrap_or(0) as usize;
        let mut v = vec![GaussRat::zero(); d + 1];
        for (e, c) in &self.terms {
            if e.1 == 0 {
                v[e.0 as usize] = c.clone();
            }
        }
        UPoly::new(v)
    }

    /// Divides by `z2`; only valid when every term contains `z2`.
    pub fn div_z2(&self) -> Option<BivarPoly> {
        if self.terms.keys().any(|e| e.1 == 0) {
            return None;
        }
        Some(BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ((e.0, e.1 - 1), c.clone()))
                .collect(),
        })
    }

    pub fn eval_c64(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, (e, c)| {
            acc + c.to_c64() * z1.powu(e.0) * z2.powu(e.1)
        })
    }

    /// Recursive view: coefficient of `z2^k` (a polynomial in `z1`) at index `k`.
    pub fn to_rec(&self) -> Vec<UPoly> {
        let d2 = match self.degree_in(1) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let d1 = self.degree_in(0).unwrap_or(0) as usize;
        let mut rows = vec![vec![GaussRat::zero(); d1 + 1]; d2 + 1];
        for (e, c) in &self.terms {
            rows[e.1 as usize][e.0 as usize] = c.clone();
        }
        let mut out: Vec<UPoly> = rows.into_iter().map(UPoly::new).collect();
        while out.last().is_some_and(|u| u.is_zero()) {
            out.pop();
        }
        out
    }

    pub fn from_rec(rec: &[UPoly]) -> BivarPoly {
        let mut p = BivarPoly::zero();
        for (k, u) in rec.iter().enumerate() {
            for (j, c) in u.coeffs().iter().enumerate() {
                p.add_term((j as u32, k as u32), c.clone());
            }
        }
        p
    }

    /// Specializes `z1` to a complex number, giving a polynomial in `z2` with float coefficients.
    pub fn at_z1(&self, z1: Complex64) -> Vec<Complex64> {
        let d2 = self.degree_in(1).unwrap_or(0) as usize;
        let mut v = vec![Complex64::zero(); d2 + 1];
        for (e, c) in &self.terms {
            v[e.1 as usize] += c.to_c64() * z1.powu(e.0);
        }
        v
    }

    /// Parses strings such as `"z1^3 - z2^2"` or `"1/2*z1*z2 + (2+i)*z2^4"`.
    pub fn parse(s: &str) -> Result<BivarPoly> {
        let e = expr::parse(s)?;
        from_expr(&e)
    }
}

fn from_expr(e: &Expr) -> Result<BivarPoly> {
    Ok(match e {
        Expr::Num(t) => BivarPoly::constant(GaussRat::real(expr::parse_rational(t)?)),
        Expr::Var(v) => match v.as_str() {
            "z1" => BivarPoly::z1(),
            "z2" => BivarPoly::z2(),
            "i" => BivarPoly::constant(GaussRat::i()),
            _ => {
                return Err(Error::Parse(format!(
                    "unknown variable `{v}` (use z1, z2, i)"
                )))
            }
        },
        Expr::Neg(a) => from_expr(a)?.neg(),
        Expr::Add(a, b) => from_expr(a)?.add(&from_expr(b)?),
        Expr::Sub(a, b) => from_expr(a)?.sub(&from_expr(b)?),
        Expr::Mul(a, b) => from_expr(a)?.mul(&from_expr(b)?),
        Expr::Div(a, b) => {
            let d = from_expr(b)?;
            if !d.is_constant() || d.is_zero() {
                return Err(Error::Parse(
                    "division is only allowed by nonzero constants".into(),
                ));
            }
            from_expr(a)?.scale(&d.constant_term().inv())
        }
        Expr::Pow(a, b) => {
            let k = expr::constant_rational(b)
                .filter(|r| r.is_integer() && !r.is_negative())
                .and_then(|r| r.to_integer().to_u32())
                .ok_or_else(|| Error::Parse("exponents must be nonnegative integers".into()))?;
            from_expr(a)?.pow(k)
        }
        Expr::Call(name, _) => {
            return Err(Error::Parse(format!(
                "function `{name}` not allowed in a polynomial"
            )))
        }
    })
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|e| std::cmp::Reverse(grlex(e)));
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let (neg, mag) = if c.is_real() && c.re.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (e.0 == 0 && e.1 == 0) {
                factors.push(mag.to_string());
            }
            for (var, k) in [("z1", e.0), ("z2", e.1)] {
                match k {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Convenience constructor for integer coefficients.
pub fn poly_int(terms: &[((u32, u32), i64)]) -> BivarPoly {
    BivarPoly::from_terms(terms.iter().map(|&(e, c)| (e, GaussRat::int(c))))
}

/// Tests whether two polynomials differ by a nonzero constant factor.
pub fn associates(a: &BivarPoly, b: &BivarPoly) -> bool {
    a.normalized() == b.normalized()
}
