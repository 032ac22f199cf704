//! Kernel fields of `Df`, their reduction, and exact local intersection multiplicity.

use serde::Serialize;

use super::algebra;
use super::poly::{BivarPoly, UPoly};
use crate::error::{Error, Result};

/// `(∂f/∂z2, −∂f/∂z1)`, spanning `ker Df`.
pub fn tangent_field(f: &BivarPoly) -> Result<(BivarPoly, BivarPoly)> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    Ok((f.derivative(1), f.derivative(0).neg()))
}

/// Divides both components by their normalized gcd; returns `(h1, h2, gcd)`.
pub fn reduce(g1: &BivarPoly, g2: &BivarPoly) -> Result<(BivarPoly, BivarPoly, BivarPoly)> {
    if g1.is_zero() && g2.is_zero() {
        return Err(Error::Domain("cannot reduce the zero field".into()));
    }
    let g = algebra::gcd(g1, g2);
    let h1 =
        algebra::divide(g1, &g).ok_or_else(|| Error::Invariant("gcd does not divide g1".into()))?;
    let h2 =
        algebra::divide(g2, &g).ok_or_else(|| Error::Invariant("gcd does not divide g2".into()))?;
    Ok((h1, h2, g))
}

/// Full account of a singularity computation.
#[derive(Clone, Debug, Serialize)]
pub struct HopfAnalysis {
    pub polynomial: BivarPoly,
    pub field: (BivarPoly, BivarPoly),
    pub common_factor: BivarPoly,
    pub reduced: (BivarPoly, BivarPoly),
    /// `Res_z2(h1, h2)`, printed; nonzero certifies finitely many common zeros.
    pub resultant: String,
    pub regular: bool,
    pub degree: u64,
}

pub fn analyze(f: &BivarPoly) -> Result<HopfAnalysis> {
    let (g1, g2) = tangent_field(f)?;
    let (h1, h2, common) = reduce(&g1, &g2)?;
    let res = algebra::resultant_z2(&h1, &h2);
    let regular = !h1.vanishes_at_origin() || !h2.vanishes_at_origin();
    if regular && common.vanishes_at_origin() {
        return Err(Error::NonIsolated {
            factor: common.to_string(),
        });
    }
    let degree = if regular {
        0
    } else {
        certify_isolated(&h1, &h2, &res)?;
        intersection_multiplicity(&h1, &h2)?
    };
    Ok(HopfAnalysis {
        polynomial: f.clone(),
        field: (g1, g2),
        common_factor: common,
        reduced: (h1, h2),
        resultant: poly_z1_string(&res),
        regular,
        degree,
    })
}

/// Hopf degree of the singularity of `ker Df` at the origin.
pub fn hopf_degree(f: &BivarPoly) -> Result<u64> {
    Ok(analyze(f)?.degree)
}

fn certify_isolated(h1: &BivarPoly, h2: &BivarPoly, res: &UPoly) -> Result<()> {
    let both_z2_free = h1.degree_in(1) == Some(0) && h2.degree_in(1) == Some(0);
    if res.is_zero() && !both_z2_free {
        return Err(Error::NonIsolated {
            factor: algebra::gcd(h1, h2).to_string(),
        });
    }
    Ok(())
}

fn poly_z1_string(u: &UPoly) -> String {
    BivarPoly::from_rec(std::slice::from_ref(u)).to_string()
}

/// Local intersection multiplicity at the origin of two curves without a
/// common component through it.
pub fn intersection_multiplicity(f: &BivarPoly, g: &BivarPoly) -> Result<u64> {
    let (mut f, mut g) = (f.clone(), g.clone());
    let mut total = 0u64;
    loop {
        if f.is_zero() || g.is_zero() {
            let other = if f.is_zero() { &g } else { &f };
            return Err(Error::NonIsolated {
                factor: other.to_string(),
            });
        }
        if !f.vanishes_at_origin() || !g.vanishes_at_origin() {
            return Ok(total);
        }
        let (fx, gx) = (f.restrict_z2_zero(), g.restrict_z2_zero());
        match (fx.is_zero(), gx.is_zero()) {
            (true, true) => {
                return Err(Error::NonIsolated {
                    factor: "z2".into(),
                });
            }
            (true, false) => {
                total += gx.ord().expect("nonzero") as u64;
                f = f.div_z2().expect("f(z1,0) = 0");
            }
            (false, true) => std::mem::swap(&mut f, &mut g),
            (false, false) => {
                let (r, s) = (fx.degree().unwrap(), gx.degree().unwrap());
                if r > s {
                    std::mem::swap(&mut f, &mut g);
                    continue;
                }
                let shift = (s - r) as u32;
                g = g.scale(&fx.lc()).sub(&f.shift(shift, 0).scale(&gx.lc()));
            }
        }
    }
}
