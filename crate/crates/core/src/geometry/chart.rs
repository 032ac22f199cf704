use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::{Domain, ExprField, Field};
use crate::error::{Error, Result};

/// Smallest admissible metric eigenvalue.
pub const MIN_EIGENVALUE: f64 = 1e-8;

/// Metric, two vector fields and an optional 2-form on a coordinate box.
#[derive(Clone, Debug)]
pub struct ChartField {
    pub domain: Domain,
    pub metric: Arc<dyn Field>,
    pub x: Arc<dyn Field>,
    pub z: Arc<dyn Field>,
    pub mu: Option<Arc<dyn Field>>,
}

/// Printable description of a chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartSummary {
    pub domain: Domain,
    pub metric: String,
    pub x: String,
    pub z: String,
    pub mu: Option<String>,
}

impl ChartField {
    /// `metric` has 16 (full), 10 (upper triangle, row-major) or 4 (diagonal)
    /// components; `mu` has 16 or 6 (`μ12, μ13, μ14, μ23, μ24, μ34`).
    pub fn new(
        domain: Domain,
        metric: Arc<dyn Field>,
        x: Arc<dyn Field>,
        z: Arc<dyn Field>,
        mu: Option<Arc<dyn Field>>,
    ) -> Result<Self> {
        if ![16, 10, 4].contains(&metric.components()) {
            return Err(Error::Parse(format!(
                "metric needs 16, 10 or 4 components, got {}",
                metric.components()
            )));
        }
        for (name, f) in [("x", &x), ("z", &z)] {
            if f.components() != 4 {
                return Err(Error::Parse(format!(
                    "vector field {name} needs 4 components, got {}",
                    f.components()
                )));
            }
        }
        if let Some(m) = &mu {
            two_form_components(m.components())?;
        }
        let mut d = domain;
        let fields: Vec<&Arc<dyn Field>> =
            [&metric, &x, &z].into_iter().chain(mu.as_ref()).collect();
        for f in fields {
            if let Some(fd) = f.domain() {
                d = d.intersect(&fd);
            }
        }
        if (0..4).any(|a| d.lo[a] >= d.hi[a]) {
            return Err(Error::Domain("chart fields have no common domain".into()));
        }
        Ok(ChartField {
            domain: d,
            metric,
            x,
            z,
            mu,
        })
    }

    /// Grid spacing shared by grid-backed fields, if any.
    pub fn grid_spacing(&self) -> Option<f64> {
        [&self.metric, &self.x, &self.z]
            .into_iter()
            .chain(self.mu.as_ref())
            .filter_map(|f| f.spacing())
            .reduce(f64::min)
    }

    pub fn metric_at(&self, p: &[f64; 4]) -> Result<Matrix4<f64>> {
        metric_from(self.metric.as_ref(), p)
    }

    pub fn x_at(&self, p: &[f64; 4]) -> Vector4<f64> {
        Vector4::from_vec(self.x.eval(p))
    }

    pub fn z_at(&self, p: &[f64; 4]) -> Vector4<f64> {
        Vector4::from_vec(self.z.eval(p))
    }

    pub fn mu_at(&self, p: &[f64; 4]) -> Option<Matrix4<f64>> {
        self.mu.as_ref().map(|m| two_form_from(&m.eval(p)))
    }

    pub fn summary(&self) -> ChartSummary {
        ChartSummary {
            domain: self.domain,
            metric: self.metric.describe(),
            x: self.x.describe(),
            z: self.z.describe(),
            mu: self.mu.as_ref().map(|m| m.describe()),
        }
    }

    /// Smooth random chart on `[-1,1]^4`: `g = I + 0.1·S` with `S` symmetric and
    /// built from sines, `x` and `z` quadratic polynomials.
    pub fn random_smooth(seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut metric = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let wave = random_wave(&mut rng);
                metric.push(if i == j {
                    format!("1 + 0.1*{wave}")
                } else {
                    format!("0.1*{wave}")
                });
            }
        }
        let x: Vec<String> = (0..4).map(|_| random_quadratic(&mut rng)).collect();
        let z: Vec<String> = (0..4).map(|_| random_quadratic(&mut rng)).collect();
        ChartField::new(
            Domain::cube(-1.0, 1.0),
            Arc::new(ExprField::parse(&metric.join("; "))?),
            Arc::new(ExprField::parse(&x.join("; "))?),
            Arc::new(ExprField::parse(&z.join("; "))?),
            None,
        )
    }

    /// `count` seeded points, each at least `margin` inside the domain.
    pub fn sample_points(&self, count: usize, margin: f64, seed: u64) -> Result<Vec<[f64; 4]>> {
        let d = &self.domain;
        if (0..4).any(|a| d.hi[a] - d.lo[a] <= 2.0 * margin) {
            return Err(Error::Boundary(format!(
                "domain too small for margin {margin}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count)
            .map(|_| {
                let mut p = [0.0; 4];
                for a in 0..4 {
                    p[a] = rng.gen_range(d.lo[a] + margin..d.hi[a] - margin);
                }
                p
            })
            .collect())
    }
}

fn coef(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    format!("{:.3}", rng.gen_range(lo..hi))
}

fn random_wave(rng: &mut ChaCha8Rng) -> String {
    let mut s = String::from("sin(");
    for a in 1..=4 {
        let _ = write!(s, "{}*x{a} + ", coef(rng, -1.5, 1.5));
    }
    let _ = write!(s, "{})", coef(rng, -3.0, 3.0));
    s.replace("+ -", "- ")
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> String {
    let mut terms = vec![coef(rng, -1.0, 1.0)];
    for a in 1..=4 {
        terms.push(format!("{}*x{a}", coef(rng, -1.0, 1.0)));
    }
    for a in 1..=4 {
        for b in a..=4 {
            terms.push(format!("{}*x{a}*x{b}", coef(rng, -0.5, 0.5)));
        }
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// Evaluates and validates a metric field at `p`.
pub fn metric_from(field: &dyn Field, p: &[f64; 4]) -> Result<Matrix4<f64>> {
    let v = field.eval(p);
    let g = match v.len() {
        16 => Matrix4::from_row_slice(&v),
        10 => {
            let mut g = Matrix4::zeros();
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    g[(i, j)] = v[k];
                    g[(j, i)] = v[k];
                    k += 1;
                }
            }
            g
        }
        4 => Matrix4::from_diagonal(&Vector4::from_vec(v)),
        n => return Err(Error::Parse(format!("metric has {n} components"))),
    };
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateMetric(format!(
            "non-finite metric at {p:?}"
        )));
    }
    let asym = (g - g.transpose()).amax();
    if asym > 1e-12 * g.amax().max(1.0) {
        return Err(Error::DegenerateMetric(format!(
            "metric not symmetric at {p:?} ({asym:e})"
        )));
    }
    let min = SymmetricEigen::new(g).eigenvalues.min();
    if min <= MIN_EIGENVALUE {
        return Err(Error::DegenerateMetric(format!(
            "metric not positive-definite at {p:?} (min eigenvalue {min:e})"
        )));
    }
    Ok(g)
}

fn two_form_components(n: usize) -> Result<()> {
    if n == 16 || n == 6 {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "2-form needs 16 or 6 components, got {n}"
        )))
    }
}

/// Antisymmetric matrix from 16 entries or the 6 upper entries.
pub fn two_form_from(v: &[f64]) -> Matrix4<f64> {
    if v.len() == 16 {
        let m = Matrix4::from_row_slice(v);
        return (m - m.transpose()) * 0.5;
    }
    let mut m = Matrix4::zeros();
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            m[(i, j)] = v[k];
            m[(j, i)] = -v[k];
            k += 1;
        }
    }
    m
}
