//! Pointwise audit of a 2-form against a plane field: leafwise positivity and
//! leafwise closedness at sample points. Tautness itself is a global property
//! and is not decided here.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use super::chart::two_form_from;
use super::connection::{partial_matrix, Scheme, MARGIN_STEPS};
use super::field::{Domain, Field};
use crate::error::{Error, Result};

/// Below this `|τ₁ ∧ τ₂|` the plane is degenerate.
pub const MIN_WEDGE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RummlerOptions {
    pub h: f64,
    pub tol: f64,
    pub scheme: Scheme,
}

impl Default for RummlerOptions {
    fn default() -> Self {
        RummlerOptions {
            h: 1e-3,
            tol: 1e-6,
            scheme: Scheme::Central2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RummlerSample {
    pub point: [f64; 4],
    pub mu_on_plane: f64,
    /// `max_k |dμ(τ₁, τ₂, ∂_k)|`.
    pub max_dmu: f64,
    pub positive: bool,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RummlerReport {
    pub samples: usize,
    pub positive_pass: usize,
    pub closed_pass: usize,
    pub both_pass: usize,
    pub details: Vec<RummlerSample>,
}

impl RummlerReport {
    pub fn all_pass(&self) -> bool {
        self.both_pass == self.samples
    }
}

fn wedge_norm(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let w = a[i] * b[j] - a[j] * b[i];
            s += w * w;
        }
    }
    s.sqrt()
}

pub fn rummler_check(
    mu: &dyn Field,
    tau1: &dyn Field,
    tau2: &dyn Field,
    domain: &Domain,
    points: &[[f64; 4]],
    opts: &RummlerOptions,
) -> Result<RummlerReport> {
    if ![6, 16].contains(&mu.components()) || tau1.components() != 4 || tau2.components() != 4 {
        return Err(Error::Parse(
            "rummler check needs a 6- or 16-component 2-form and two 4-vector fields".into(),
        ));
    }
    let mu_at = |q: &[f64; 4]| -> Result<Matrix4<f64>> { Ok(two_form_from(&mu.eval(q))) };
    let mut details = Vec::with_capacity(points.len());
    for p in points {
        domain.check_margin(p, MARGIN_STEPS * opts.h)?;
        let t1 = Vector4::from_vec(tau1.eval(p));
        let t2 = Vector4::from_vec(tau2.eval(p));
        let w = wedge_norm(&t1, &t2);
        if w < MIN_WEDGE {
            return Err(Error::DegeneratePlane(format!(
                "|tau1 ^ tau2| = {w:e} at {p:?}"
            )));
        }
        let m = mu_at(p)?;
        let mu_on_plane = (t1.transpose() * m * t2)[0];
        let mut d = [Matrix4::zeros(); 4];
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = partial_matrix(&mu_at, p, k, opts.h, opts.scheme)?;
        }
        let mut max_dmu: f64 = 0.0;
        for k in 0..4 {
            // dμ(a, b, ∂_k) = Σ a^i b^j (∂_i μ_jk + ∂_j μ_ki + ∂_k μ_ij)
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    s += t1[i] * t2[j] * (d[i][(j, k)] + d[j][(k, i)] + d[k][(i, j)]);
                }
            }
            max_dmu = max_dmu.max(s.abs());
        }
        details.push(RummlerSample {
            point: *p,
            mu_on_plane,
            max_dmu,
            positive: mu_on_plane > 0.0,
            closed: max_dmu < opts.tol,
        });
    }
    let count = |f: &dyn Fn(&RummlerSample) -> bool| details.iter().filter(|s| f(s)).count();
    Ok(RummlerReport {
        samples: details.len(),
        positive_pass: count(&|s| s.positive),
        closed_pass: count(&|s| s.closed),
        both_pass: count(&|s| s.positive && s.closed),
        details,
    })
}
