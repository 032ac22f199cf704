//! Finite-difference check of
//! `dω(x, Jx, z) = ⟨[x, Jx], Jz⟩ − ⟨∇ₓx + ∇_{Jx}Jx, z⟩` with `ω(a, b) = ⟨Ja, b⟩`.

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;
use serde::Serialize;

use super::chart::ChartField;
use super::connection::{
    check_orthogonal, christoffel, contract, partial_matrix, partial_vector, AlmostComplex,
    Christoffel, Scheme, MARGIN_STEPS,
};
use crate::error::{Error, Result};

/// How the left-hand side `dω` is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsRoute {
    /// Cyclic sum of `∇ω` with Christoffel corrections.
    #[default]
    Covariant,
    /// Cyclic sum of coordinate partials of `ω`.
    Coordinate,
}

impl LhsRoute {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "covariant" => Ok(LhsRoute::Covariant),
            "coordinate" => Ok(LhsRoute::Coordinate),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomegaOptions {
    pub h: f64,
    pub scheme: Scheme,
    pub route: LhsRoute,
}

impl Default for DomegaOptions {
    fn default() -> Self {
        DomegaOptions {
            h: 1e-3,
            scheme: Scheme::Central2,
            route: LhsRoute::Covariant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomegaResult {
    pub point: [f64; 4],
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Components `T[i][j][k] = dω(∂_i, ∂_j, ∂_k)`.
pub type ThreeForm = [[[f64; 4]; 4]; 4];

pub fn eval_three_form(t: &ThreeForm, a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                s += t[i][j][k] * a[i] * b[j] * c[k];
            }
        }
    }
    s
}

fn prepare(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    p: &[f64; 4],
    opts: &DomegaOptions,
) -> Result<(Matrix4<f64>, Matrix4<f64>, Christoffel)> {
    if !(opts.h > 0.0) {
        return Err(Error::Domain(format!(
            "step h must be positive, got {}",
            opts.h
        )));
    }
    chart.domain.check_margin(p, MARGIN_STEPS * opts.h)?;
    let g = chart.metric_at(p)?;
    let jm = j.at(p)?;
    check_orthogonal(&jm, &g, p)?;
    let gamma = christoffel(chart.metric.as_ref(), &chart.domain, p, opts.h, opts.scheme)?;
    Ok((g, jm, gamma))
}

/// `dω` at `p` as a 3-tensor.
pub fn domega_tensor(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    p: &[f64; 4],
    opts: &DomegaOptions,
) -> Result<ThreeForm> {
    let (g, jm, gamma) = prepare(chart, j, p, opts)?;
    assemble(chart, j, p, opts, &g, &jm, &gamma)
}

fn assemble(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    p: &[f64; 4],
    opts: &DomegaOptions,
    g: &Matrix4<f64>,
    jm: &Matrix4<f64>,
    gamma: &Christoffel,
) -> Result<ThreeForm> {
    let omega = jm.transpose() * g;
    let omega_at =
        |q: &[f64; 4]| -> Result<Matrix4<f64>> { Ok(j.at(q)?.transpose() * chart.metric_at(q)?) };
    let mut d = [Matrix4::zeros(); 4];
    for (k, dk) in d.iter_mut().enumerate() {
        *dk = partial_matrix(&omega_at, p, k, opts.h, opts.scheme)?;
    }
    // nabla[k](a,b) = (∇_k ω)_ab
    let nabla: [Matrix4<f64>; 4] = match opts.route {
        LhsRoute::Coordinate => d,
        LhsRoute::Covariant => {
            let mut out = d;
            for k in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        let mut s = 0.0;
                        for l in 0..4 {
                            s += gamma[l][k][a] * omega[(l, b)] + gamma[l][k][b] * omega[(a, l)];
                        }
                        out[k][(a, b)] -= s;
                    }
                }
            }
            out
        }
    };
    let mut t = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                t[a][b][c] = nabla[a][(b, c)] + nabla[b][(c, a)] + nabla[c][(a, b)];
            }
        }
    }
    Ok(t)
}

/// Both sides of the identity at `p`.
pub fn verify_domega(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    p: &[f64; 4],
    opts: &DomegaOptions,
) -> Result<DomegaResult> {
    let (g, jm, gamma) = prepare(chart, j, p, opts)?;
    let t = assemble(chart, j, p, opts, &g, &jm, &gamma)?;
    let x = chart.x_at(p);
    let z = chart.z_at(p);
    let y = jm * x;
    let lhs = eval_three_form(&t, &x, &y, &z);

    let xf = |q: &[f64; 4]| -> Result<Vector4<f64>> { Ok(chart.x_at(q)) };
    let yf = |q: &[f64; 4]| -> Result<Vector4<f64>> { Ok(j.at(q)? * chart.x_at(q)) };
    let mut dx = [Vector4::zeros(); 4];
    let mut dy = [Vector4::zeros(); 4];
    for i in 0..4 {
        dx[i] = partial_vector(&xf, p, i, opts.h, opts.scheme)?;
        dy[i] = partial_vector(&yf, p, i, opts.h, opts.scheme)?;
    }
    let along = |v: &Vector4<f64>, d: &[Vector4<f64>; 4]| -> Vector4<f64> {
        (0..4).fold(Vector4::zeros(), |acc, i| acc + d[i] * v[i])
    };
    let bracket = along(&x, &dy) - along(&y, &dx);
    let nabla_xx = along(&x, &dx) + contract(&gamma, &x, &x);
    let nabla_yy = along(&y, &dy) + contract(&gamma, &y, &y);
    let inner = |a: &Vector4<f64>, b: &Vector4<f64>| (a.transpose() * g * b)[0];
    let rhs = inner(&bracket, &(jm * z)) - inner(&(nabla_xx + nabla_yy), &z);
    Ok(DomegaResult {
        point: *p,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Evaluates at every point; order of results follows `points`.
pub fn verify_domega_points(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    points: &[[f64; 4]],
    opts: &DomegaOptions,
) -> Result<Vec<DomegaResult>> {
    points
        .par_iter()
        .map(|p| verify_domega(chart, j, p, opts))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub max_residuals: Vec<f64>,
    /// `max_residuals[i] / max_residuals[i+1]`; about 4 for a second-order scheme.
    pub ratios: Vec<f64>,
}

/// Repeats the check with `h0, h0/2, …` (`levels` values).
pub fn convergence_study(
    chart: &ChartField,
    j: &dyn AlmostComplex,
    points: &[[f64; 4]],
    opts: &DomegaOptions,
    levels: usize,
) -> Result<ConvergenceStudy> {
    let mut steps = Vec::new();
    let mut max_residuals = Vec::new();
    let mut h = opts.h;
    for _ in 0..levels {
        let o = DomegaOptions { h, ..*opts };
        let r = verify_domega_points(chart, j, points, &o)?;
        steps.push(h);
        max_residuals.push(r.iter().map(|x| x.residual).fold(0.0, f64::max));
        h /= 2.0;
    }
    let ratios = max_residuals.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(ConvergenceStudy {
        steps,
        max_residuals,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::connection::{orthogonal_j_from_frame, standard_j, ConstantJ};
    use crate::geometry::field::{Domain, ExprField, Field};
    use std::sync::Arc;

    fn flat_chart(x: &str, z: &str) -> ChartField {
        let g: Arc<dyn Field> = Arc::new(ExprField::parse("1;1;1;1").unwrap());
        ChartField::new(
            Domain::cube(-1.0, 1.0),
            g,
            Arc::new(ExprField::parse(x).unwrap()),
            Arc::new(ExprField::parse(z).unwrap()),
            None,
        )
        .unwrap()
    }

    #[test]
    fn flat_linear_is_exact() {
        let c = flat_chart("1 + x2; 2*x3 - x1; 0.5; x4 - x1", "x1; 1; x2 + x3; -2");
        let j = ConstantJ(standard_j());
        for p in c.sample_points(10, 0.1, 3).unwrap() {
            let r = verify_domega(&c, &j, &p, &DomegaOptions::default()).unwrap();
            assert!(r.residual < 1e-12, "{r:?}");
            assert_eq!(r.lhs, 0.0);
        }
    }

    #[test]
    fn flat_smooth_rhs_vanishes() {
        let c = flat_chart(
            "sin(x1*x2); cos(x3) + x4^2; x1*x4; exp(x2/3)",
            "x1^2; x2; 1; x3*x4",
        );
        let j = ConstantJ(standard_j());
        let p = [0.2, -0.3, 0.4, 0.1];
        let r = verify_domega(&c, &j, &p, &DomegaOptions::default()).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs.abs() < 1e-5);
    }

    #[test]
    fn random_chart_identity_and_routes() {
        let c = ChartField::random_smooth(11).unwrap();
        let j = orthogonal_j_from_frame(c.metric.clone(), 5);
        let pts = c.sample_points(20, 0.1, 2).unwrap();
        let cov = verify_domega_points(&c, &j, &pts, &DomegaOptions::default()).unwrap();
        let coord_opts = DomegaOptions {
            route: LhsRoute::Coordinate,
            ..Default::default()
        };
        let crd = verify_domega_points(&c, &j, &pts, &coord_opts).unwrap();
        for (a, b) in cov.iter().zip(&crd) {
            assert!(a.residual < 1e-4, "{a:?}");
            assert!((a.lhs - b.lhs).abs() < 1e-9);
        }
    }

    #[test]
    fn alternating() {
        let c = ChartField::random_smooth(2).unwrap();
        let j = orthogonal_j_from_frame(c.metric.clone(), 0);
        let t = domega_tensor(&c, &j, &[0.1, 0.2, -0.3, 0.0], &DomegaOptions::default()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for k in 0..4 {
                    assert!((t[a][b][k] + t[b][a][k]).abs() < 1e-9);
                    assert!((t[a][b][k] + t[a][k][b]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let c = flat_chart("1;0;0;0", "0;1;0;0");
        let mut bad = standard_j();
        bad[(0, 1)] = -2.0;
        let err = verify_domega(&c, &ConstantJ(bad), &[0.0; 4], &DomegaOptions::default());
        assert!(matches!(err, Err(Error::NotOrthogonal(_))));
        let near = verify_domega(
            &c,
            &ConstantJ(standard_j()),
            &[0.9995, 0.0, 0.0, 0.0],
            &DomegaOptions::default(),
        );
        assert!(matches!(near, Err(Error::Boundary(_))));
    }
}
