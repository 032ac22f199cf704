//! Finite differences, Christoffel symbols and g-orthogonal almost-complex structures.

use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use super::chart::metric_from;
use super::field::{Domain, Field};
use crate::error::{Error, Result};

/// Pointwise tolerance for `J² = −I` and `JᵀgJ = g`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// `(f(p+h) − f(p−h)) / 2h`.
    #[default]
    Central2,
    /// Five-point stencil, fourth order.
    Central4,
}

impl Scheme {
    /// Largest stencil offset in units of `h`.
    pub fn reach(self) -> f64 {
        match self {
            Scheme::Central2 => 1.0,
            Scheme::Central4 => 2.0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "central2" | "2" => Ok(Scheme::Central2),
            "central4" | "4" => Ok(Scheme::Central4),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Required distance from the boundary for derivatives at a point.
pub const MARGIN_STEPS: f64 = 2.0;

fn offset(p: &[f64; 4], axis: usize, d: f64) -> [f64; 4] {
    let mut q = *p;
    q[axis] += d;
    q
}

/// `∂f/∂x_axis` at `p` for a vector-valued `f`.
pub fn partial<F>(f: &F, p: &[f64; 4], axis: usize, h: f64, scheme: Scheme) -> Result<Vec<f64>>
where
    F: Fn(&[f64; 4]) -> Result<Vec<f64>> + ?Sized,
{
    let a = f(&offset(p, axis, h))?;
    let b = f(&offset(p, axis, -h))?;
    match scheme {
        Scheme::Central2 => Ok(a.iter().zip(&b).map(|(a, b)| (a - b) / (2.0 * h)).collect()),
        Scheme::Central4 => {
            let a2 = f(&offset(p, axis, 2.0 * h))?;
            let b2 = f(&offset(p, axis, -2.0 * h))?;
            Ok((0..a.len())
                .map(|i| (-a2[i] + 8.0 * a[i] - 8.0 * b[i] + b2[i]) / (12.0 * h))
                .collect())
        }
    }
}

/// `∂_axis` of a matrix-valued function.
pub fn partial_matrix<F>(
    f: &F,
    p: &[f64; 4],
    axis: usize,
    h: f64,
    scheme: Scheme,
) -> Result<Matrix4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<Matrix4<f64>> + ?Sized,
{
    let flat = |q: &[f64; 4]| f(q).map(|m| m.as_slice().to_vec());
    Ok(Matrix4::from_column_slice(&partial(
        &flat, p, axis, h, scheme,
    )?))
}

/// `∂_axis` of a vector-valued function.
pub fn partial_vector<F>(
    f: &F,
    p: &[f64; 4],
    axis: usize,
    h: f64,
    scheme: Scheme,
) -> Result<Vector4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<Vector4<f64>> + ?Sized,
{
    let flat = |q: &[f64; 4]| f(q).map(|v| v.as_slice().to_vec());
    Ok(Vector4::from_vec(partial(&flat, p, axis, h, scheme)?))
}

/// Levi-Civita symbols, indexed `gamma[k][i][j] = Γ^k_ij`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

pub fn christoffel(
    metric: &dyn Field,
    domain: &Domain,
    p: &[f64; 4],
    h: f64,
    scheme: Scheme,
) -> Result<Christoffel> {
    domain.check_margin(p, MARGIN_STEPS * h)?;
    let g = metric_from(metric, p)?;
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::DegenerateMetric(format!("singular metric at {p:?}")))?;
    let gf = |q: &[f64; 4]| metric_from(metric, q);
    let mut dg = [Matrix4::zeros(); 4];
    for (i, d) in dg.iter_mut().enumerate() {
        *d = partial_matrix(&gf, p, i, h, scheme)?;
    }
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in i..4 {
                let mut s = 0.0;
                for l in 0..4 {
                    s += ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gamma[k][i][j] = 0.5 * s;
                gamma[k][j][i] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// `Γ(u, v)^k = Γ^k_ij u^i v^j`.
pub fn contract(gamma: &Christoffel, u: &Vector4<f64>, v: &Vector4<f64>) -> Vector4<f64> {
    let mut out = Vector4::zeros();
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                out[k] += gamma[k][i][j] * u[i] * v[j];
            }
        }
    }
    out
}

/// A field of endomorphisms `J` with `J² = −I`.
pub trait AlmostComplex: Send + Sync {
    fn at(&self, p: &[f64; 4]) -> Result<Matrix4<f64>>;
    fn describe(&self) -> String;
}

/// Standard complex structure on the frame: `e1 ↦ e2 ↦ −e1`, `e3 ↦ e4 ↦ −e3`.
pub fn standard_j() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(1, 0)] = 1.0;
    j[(0, 1)] = -1.0;
    j[(3, 2)] = 1.0;
    j[(2, 3)] = -1.0;
    j
}

/// `J` obtained by rotating the g-orthonormal frame built by Gram–Schmidt from
/// the coordinate vectors taken in a seed-chosen order.
#[derive(Clone, Debug)]
pub struct FrameJ {
    metric: Arc<dyn Field>,
    pub order: [usize; 4],
}

/// Permutation number `seed mod 24` in lexicographic order.
pub fn permutation(seed: u64) -> [usize; 4] {
    let mut pool = vec![0usize, 1, 2, 3];
    let mut k = (seed % 24) as usize;
    let mut out = [0usize; 4];
    for (slot, fact) in out.iter_mut().zip([6usize, 2, 1, 1]) {
        *slot = pool.remove(k / fact);
        k %= fact;
    }
    out
}

pub fn orthogonal_j_from_frame(metric: Arc<dyn Field>, seed: u64) -> FrameJ {
    FrameJ {
        metric,
        order: permutation(seed),
    }
}

impl FrameJ {
    /// Columns are the g-orthonormal frame.
    pub fn frame(&self, p: &[f64; 4]) -> Result<Matrix4<f64>> {
        let g = metric_from(self.metric.as_ref(), p)?;
        let mut e = Matrix4::<f64>::zeros();
        for (col, &axis) in self.order.iter().enumerate() {
            let mut v = Vector4::<f64>::zeros();
            v[axis] = 1.0;
            for prev in 0..col {
                let u = e.column(prev).into_owned();
                let c = u.dot(&(g * v));
                v -= u * c;
            }
            let n2 = v.dot(&(g * v));
            if !(n2 > 1e-24) {
                return Err(Error::DegenerateMetric(format!(
                    "Gram–Schmidt breakdown at {p:?}"
                )));
            }
            e.set_column(col, &(v / n2.sqrt()));
        }
        Ok(e)
    }
}

impl AlmostComplex for FrameJ {
    fn at(&self, p: &[f64; 4]) -> Result<Matrix4<f64>> {
        let g = metric_from(self.metric.as_ref(), p)?;
        let e = self.frame(p)?;
        Ok(e * standard_j() * e.transpose() * g)
    }

    fn describe(&self) -> String {
        let o: Vec<String> = self.order.iter().map(|a| format!("x{}", a + 1)).collect();
        format!("frame J, Gram-Schmidt order {}", o.join(","))
    }
}

/// The same matrix at every point; orthogonality is checked where it is used.
#[derive(Clone, Debug)]
pub struct ConstantJ(pub Matrix4<f64>);

impl AlmostComplex for ConstantJ {
    fn at(&self, _p: &[f64; 4]) -> Result<Matrix4<f64>> {
        Ok(self.0)
    }
    fn describe(&self) -> String {
        format!("constant J {:?}", self.0.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthogonalityResidual {
    pub square_plus_identity: f64,
    pub metric_defect: f64,
}

/// Frobenius norms of `J² + I` and `JᵀgJ − g`.
pub fn orthogonality_residual(j: &Matrix4<f64>, g: &Matrix4<f64>) -> OrthogonalityResidual {
    OrthogonalityResidual {
        square_plus_identity: (j * j + Matrix4::identity()).norm(),
        metric_defect: (j.transpose() * g * j - g).norm(),
    }
}

pub fn check_orthogonal(j: &Matrix4<f64>, g: &Matrix4<f64>, p: &[f64; 4]) -> Result<()> {
    let r = orthogonality_residual(j, g);
    if r.square_plus_identity >= ORTHOGONALITY_TOL || r.metric_defect >= ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(format!(
            "at {p:?}: |J^2+I| = {:e}, |J^T g J - g| = {:e}",
            r.square_plus_identity, r.metric_defect
        )));
    }
    Ok(())
}
