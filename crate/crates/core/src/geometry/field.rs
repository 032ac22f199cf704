use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use super::grid::GridField;
use crate::error::{Error, Result};
use crate::expr::RealExpr;

/// Axis-aligned box in the four chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Domain {
    pub fn cube(lo: f64, hi: f64) -> Self {
        Domain {
            lo: [lo; 4],
            hi: [hi; 4],
        }
    }

    pub fn intersect(&self, o: &Domain) -> Domain {
        let mut d = *self;
        for a in 0..4 {
            d.lo[a] = d.lo[a].max(o.lo[a]);
            d.hi[a] = d.hi[a].min(o.hi[a]);
        }
        d
    }

    pub fn contains(&self, p: &[f64; 4]) -> bool {
        (0..4).all(|a| p[a] >= self.lo[a] && p[a] <= self.hi[a])
    }

    /// Errors unless `p` is at least `margin` inside every face.
    pub fn check_margin(&self, p: &[f64; 4], margin: f64) -> Result<()> {
        for a in 0..4 {
            if p[a] - margin < self.lo[a] || p[a] + margin > self.hi[a] {
                return Err(Error::Boundary(format!(
                    "coordinate x{} = {} needs margin {margin} inside [{}, {}]",
                    a + 1,
                    p[a],
                    self.lo[a],
                    self.hi[a]
                )));
            }
        }
        Ok(())
    }
}

/// A smooth assignment of `components()` reals to each point of a chart.
pub trait Field: Send + Sync + fmt::Debug {
    fn components(&self) -> usize;
    fn eval(&self, p: &[f64; 4]) -> Vec<f64>;
    /// Region where the field is defined, if restricted.
    fn domain(&self) -> Option<Domain> {
        None
    }
    /// Sample spacing for grid-backed fields.
    fn spacing(&self) -> Option<f64> {
        None
    }
    fn describe(&self) -> String;
}

/// Components given by `;`-separated expressions in `x1..x4`.
#[derive(Clone, Debug)]
pub struct ExprField {
    exprs: Vec<RealExpr>,
}

impl ExprField {
    pub fn parse(s: &str) -> Result<Self> {
        let exprs = s
            .split(';')
            .map(|t| RealExpr::parse(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExprField { exprs })
    }
}

impl Field for ExprField {
    fn components(&self) -> usize {
        self.exprs.len()
    }
    fn eval(&self, p: &[f64; 4]) -> Vec<f64> {
        self.exprs.iter().map(|e| e.eval(p)).collect()
    }
    fn describe(&self) -> String {
        self.exprs
            .iter()
            .map(|e| e.source().to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

type FieldFn = dyn Fn(&[f64; 4]) -> Vec<f64> + Send + Sync;

/// A field backed by a Rust closure.
#[derive(Clone)]
pub struct FnField {
    n: usize,
    label: String,
    f: Arc<FieldFn>,
}

impl FnField {
    pub fn new(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&[f64; 4]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        FnField {
            n,
            label: label.into(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnField({})", self.label)
    }
}

impl Field for FnField {
    fn components(&self) -> usize {
        self.n
    }
    fn eval(&self, p: &[f64; 4]) -> Vec<f64> {
        (self.f)(p)
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Loader for one kind of field definition.
pub trait FieldSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn load(&self, arg: &str) -> Result<Arc<dyn Field>>;
}

struct ExprSource;
struct GridSource;

impl FieldSource for ExprSource {
    fn name(&self) -> &'static str {
        "expr"
    }
    fn load(&self, arg: &str) -> Result<Arc<dyn Field>> {
        Ok(Arc::new(ExprField::parse(arg)?))
    }
}

impl FieldSource for GridSource {
    fn name(&self) -> &'static str {
        "grid"
    }
    fn load(&self, arg: &str) -> Result<Arc<dyn Field>> {
        Ok(Arc::new(GridField::load(Path::new(arg))?))
    }
}

pub struct FieldRegistry {
    sources: BTreeMap<&'static str, Box<dyn FieldSource>>,
}

impl FieldRegistry {
    pub fn standard() -> Self {
        let mut r = FieldRegistry {
            sources: BTreeMap::new(),
        };
        r.register(Box::new(ExprSource));
        r.register(Box::new(GridSource));
        r
    }

    pub fn register(&mut self, s: Box<dyn FieldSource>) {
        self.sources.insert(s.name(), s);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.sources.keys().copied().collect()
    }

    /// `grid:PATH`, `expr:EXPRS`, or bare expressions.
    pub fn load(&self, spec: &str) -> Result<Arc<dyn Field>> {
        if let Some((head, rest)) = spec.split_once(':') {
            if let Some(src) = self.sources.get(head.trim()) {
                return src.load(rest);
            }
        }
        self.sources["expr"].load(spec)
    }
}

impl Default for FieldRegistry {
    fn default() -> Self {
        FieldRegistry::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_fields() {
        let f = ExprField::parse("x1; x2^2; sin(x3); 1").unwrap();
        assert_eq!(f.components(), 4);
        let v = f.eval(&[2.0, 3.0, 0.0, 7.0]);
        assert_eq!(v, vec![2.0, 9.0, 0.0, 1.0]);
        let reg = FieldRegistry::standard();
        assert_eq!(
            reg.load("expr:x4").unwrap().eval(&[0.0, 0.0, 0.0, 5.0]),
            vec![5.0]
        );
        assert!(reg.load("grid:/nonexistent/file").is_err());
    }

    #[test]
    fn margins() {
        let d = Domain::cube(-1.0, 1.0);
        assert!(d.check_margin(&[0.0; 4], 0.5).is_ok());
        assert!(matches!(
            d.check_margin(&[0.99, 0.0, 0.0, 0.0], 0.02),
            Err(Error::Boundary(_))
        ));
    }
}
