//! Numerical root count of `h(z) = w` near the origin, used to cross-check
//! exact Hopf degrees.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::algebra;
use super::coeff::GaussRat;
use super::multiplicity::{reduce, tangent_field};
use super::poly::BivarPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OracleParams {
    pub radius: f64,
    pub trials: usize,
    /// Magnitude of the random target value `w`.
    pub w_scale: f64,
    pub seed: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            radius: 0.5,
            trials: 7,
            w_scale: 1e-3,
            seed: 0,
        }
    }
}

/// Modal number of solutions of `(h1, h2) = w` in the polydisc, over random small `w`.
pub fn hopf_degree_oracle(f: &BivarPoly, params: &OracleParams) -> Result<u64> {
    if params.trials == 0 {
        return Err(Error::Domain("oracle needs at least one trial".into()));
    }
    let (g1, g2) = tangent_field(f)?;
    let (h1, h2, _) = reduce(&g1, &g2)?;
    let counts: Vec<Result<usize>> = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(t as u64));
            let w1 = random_target(&mut rng, params.w_scale);
            let w2 = random_target(&mut rng, params.w_scale);
            count_solutions(&h1, &h2, &w1, &w2, params.radius)
        })
        .collect();
    let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
    for c in counts {
        *tally.entry(c?).or_default() += 1;
    }
    let (&mode, &freq) = tally
        .iter()
        .max_by_key(|(k, v)| (**v, std::cmp::Reverse(**k)))
        .expect("at least one trial");
    if 2 * freq <= params.trials {
        return Err(Error::Unstable(format!("counts per trial {tally:?}")));
    }
    Ok(mode as u64)
}

fn random_target(rng: &mut ChaCha8Rng, scale: f64) -> GaussRat {
    let angle = rng.gen::<f64>() * TAU;
    let r = scale * rng.gen_range(0.5..1.5);
    GaussRat::approx(Complex64::from_polar(r, angle), 12)
}

fn count_solutions(
    h1: &BivarPoly,
    h2: &BivarPoly,
    w1: &GaussRat,
    w2: &GaussRat,
    radius: f64,
) -> Result<usize> {
    let f1 = h1.sub(&BivarPoly::constant(w1.clone()));
    let f2 = h2.sub(&BivarPoly::constant(w2.clone()));
    let sols = solve_system(&f1, &f2)?;
    Ok(sols
        .iter()
        .filter(|(a, b)| a.norm() < radius && b.norm() < radius)
        .count())
}

/// All complex solutions of `f1 = f2 = 0`, assuming they are finitely many and simple.
pub fn solve_system(f1: &BivarPoly, f2: &BivarPoly) -> Result<Vec<(Complex64, Complex64)>> {
    for (a, b) in [(f1, f2), (f2, f1)] {
        if a.degree_in(1).unwrap_or(0) == 0 {
            return Ok(lift(&coeffs_z1(a), b));
        }
    }
    for (a, b) in [(f1, f2), (f2, f1)] {
        if a.degree_in(0).unwrap_or(0) == 0 {
            let swapped = lift(&coeffs_z1(&a.swap_vars()), &b.swap_vars());
            return Ok(swapped.into_iter().map(|(x, y)| (y, x)).collect());
        }
    }
    let res = algebra::resultant_z2(f1, f2);
    if res.is_zero() {
        return Err(Error::Domain("system has a common component".into()));
    }
    let z1s = roots(&res.coeffs().iter().map(|c| c.to_c64()).collect::<Vec<_>>())?;
    let mut out = Vec::new();
    for z1 in z1s {
        let p1 = f1.at_z1(z1);
        let cands = roots(&p1)?;
        let best = cands
            .into_iter()
            .map(|z2| (z2, f2.eval_c64(z1, z2).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((z2, _)) = best {
            out.push((z1, z2));
        }
    }
    Ok(out)
}

fn coeffs_z1(a: &BivarPoly) -> Vec<Complex64> {
    a.restrict_z2_zero()
        .coeffs()
        .iter()
        .map(|c| c.to_c64())
        .collect()
}

/// Roots of the `z2`-free polynomial `a`, each completed by the roots of `b(z1, ·)`.
fn lift(a: &[Complex64], b: &BivarPoly) -> Vec<(Complex64, Complex64)> {
    let mut out = Vec::new();
    for z1 in roots(a).unwrap_or_default() {
        for z2 in roots(&b.at_z1(z1)).unwrap_or_default() {
            out.push((z1, z2));
        }
    }
    out
}

/// Roots of `Σ c_k x^k` via the Schur form of the companion matrix.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Domain(
            "zero polynomial has no isolated roots".into(),
        ));
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() <= 1e-14 * scale) {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 100_000)
        .ok_or_else(|| Error::Unstable("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..d).map(|i| t[(i, i)]).collect())
}
