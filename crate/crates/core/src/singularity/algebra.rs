//! Exact GCD and resultant for bivariate polynomials, treated as polynomials in
//! `z2` with coefficients in `K[z1]`, `K` the Gaussian rationals.

use super::poly::{BivarPoly, UPoly};

type RPoly = Vec<UPoly>;

fn trim(mut a: RPoly) -> RPoly {
    while a.last().is_some_and(|u| u.is_zero()) {
        a.pop();
    }
    a
}

fn lc(a: &RPoly) -> &UPoly {
    a.last().expect("leading coefficient of zero polynomial")
}

/// Monic gcd of all `z1`-coefficients.
fn content(a: &RPoly) -> UPoly {
    a.iter().fold(UPoly::zero(), |g, c| g.gcd(c))
}

fn div_coeff(a: &RPoly, d: &UPoly) -> RPoly {
    a.iter()
        .map(|c| c.exact_div(d).expect("content divides every coefficient"))
        .collect()
}

fn primitive(a: &RPoly) -> RPoly {
    if a.is_empty() {
        return Vec::new();
    }
    div_coeff(a, &content(a))
}

/// `c·z2^k·b` subtracted from `a`.
fn sub_shifted(a: &RPoly, c: &UPoly, k: usize, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len() + k);
    let mut out = vec![UPoly::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, x) in b.iter().enumerate() {
        out[i + k] = out[i + k].sub(&c.mul(x));
    }
    trim(out)
}

fn scale(a: &RPoly, c: &UPoly) -> RPoly {
    trim(a.iter().map(|x| x.mul(c)).collect())
}

/// Pseudo-remainder of `a` by nonzero `b`.
fn prem(a: &RPoly, b: &RPoly) -> RPoly {
    let db = b.len() - 1;
    let lb = lc(b).clone();
    let mut r = a.clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = lc(&r).clone();
        r = sub_shifted(&scale(&r, &lb), &lr, k, b);
    }
    r
}

/// Exact division in `K[z1][z2]`; `None` when `b` does not divide `a`.
fn exact_div(a: &RPoly, b: &RPoly) -> Option<RPoly> {
    let db = b.len() - 1;
    let mut r = a.clone();
    let mut q = vec![UPoly::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = lc(&r).exact_div(lc(b))?;
        q[k] = q[k].add(&c);
        r = sub_shifted(&r, &c, k, b);
    }
    r.is_empty().then(|| trim(q))
}

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
/// Returns zero only when both inputs are zero.
pub fn gcd(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let (ra, rb) = (a.to_rec(), b.to_rec());
    let cont = content(&ra).gcd(&content(&rb));
    let (mut p, mut q) = (primitive(&ra), primitive(&rb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = primitive(&r);
    }
    let g: RPoly = p.iter().map(|c| c.mul(&cont)).collect();
    BivarPoly::from_rec(&g).normalized()
}

/// Exact quotient `a / b`, `None` if `b` does not divide `a`.
pub fn divide(a: &BivarPoly, b: &BivarPoly) -> Option<BivarPoly> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(BivarPoly::zero());
    }
    exact_div(&a.to_rec(), &b.to_rec()).map(|q| BivarPoly::from_rec(&q))
}

/// Resultant with respect to `z2`, a polynomial in `z1`.
/// Zero when either input is zero.
pub fn resultant_z2(a: &BivarPoly, b: &BivarPoly) -> UPoly {
    let (ra, rb) = (a.to_rec(), b.to_rec());
    if ra.is_empty() || rb.is_empty() {
        return UPoly::zero();
    }
    let (m, n) = (ra.len() - 1, rb.len() - 1);
    if m == 0 {
        return ra[0].pow(n);
    }
    if n == 0 {
        return rb[0].pow(m);
    }
    let size = m + n;
    let mut mat = vec![vec![UPoly::zero(); size]; size];
    for row in 0..n {
        for (j, c) in ra.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in rb.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss(mat)
}

/// Fraction-free determinant over `K[z1]`.
fn bareiss(mut a: Vec<Vec<UPoly>>) -> UPoly {
    let n = a.len();
    let mut sign = false;
    let mut prev = UPoly::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = UPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}
