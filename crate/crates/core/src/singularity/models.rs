//! Singularity models, the family and degree-method registries, plan synthesis
//! and the singularity ledger.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::multiplicity::hopf_degree;
use super::oracle::{hopf_degree_oracle, OracleParams};
use super::poly::BivarPoly;
use crate::bundle::solve_modification;
use crate::error::{Error, Result};
use crate::existence::Splitting;
use crate::lattice::ManifoldInvariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedModel {
    /// Levels of `z1/z2`.
    Pencil,
    /// Levels of `z1·z2`.
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Source {
    Polynomial { f: BivarPoly },
    Named { model: NamedModel },
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityModel {
    pub label: String,
    pub source: Source,
    pub sign: Sign,
    pub degree: u64,
}

impl SingularityModel {
    pub fn pencil() -> Self {
        SingularityModel {
            label: "pencil".into(),
            source: Source::Named {
                model: NamedModel::Pencil,
            },
            sign: Sign::Positive,
            degree: 1,
        }
    }

    pub fn quadratic() -> Self {
        SingularityModel {
            label: "quadratic".into(),
            source: Source::Named {
                model: NamedModel::Quadratic,
            },
            sign: Sign::Positive,
            degree: 1,
        }
    }

    pub fn explicit(degree: u64) -> Self {
        SingularityModel {
            label: format!("deg:{degree}"),
            source: Source::Explicit,
            sign: Sign::Positive,
            degree,
        }
    }

    /// Degree computed exactly from the polynomial.
    pub fn polynomial(label: impl Into<String>, f: BivarPoly) -> Result<Self> {
        let degree = hopf_degree(&f)?;
        Ok(SingularityModel {
            label: label.into(),
            source: Source::Polynomial { f },
            sign: Sign::Positive,
            degree,
        })
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }

    /// Parses `pencil`, `cusp`, `crossing:p,q`, `power:p,q`, `deg:N`, or a
    /// polynomial in `z1, z2`. A leading `-` marks a negative-type model.
    pub fn parse(s: &str, families: &FamilyRegistry) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('-').filter(|r| !r.contains('z')) {
            return Ok(SingularityModel::parse(rest, families)?.with_sign(Sign::Negative));
        }
        if s.contains("z1") || s.contains("z2") {
            let f = BivarPoly::parse(s)?;
            return SingularityModel::polynomial(f.to_string(), f);
        }
        if let Some(d) = s.strip_prefix("deg:") {
            let d = d
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad explicit degree `{d}`")))?;
            return Ok(SingularityModel::explicit(d));
        }
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), parse_params(p)?),
            None => (s, Vec::new()),
        };
        families.get(name)?.model(&params)
    }
}

impl fmt::Display for SingularityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { "" } else { "-" };
        write!(f, "{sign}{} (degree {})", self.label, self.degree)
    }
}

fn parse_params(p: &str) -> Result<Vec<u32>> {
    p.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad family parameter `{t}`")))
        })
        .collect()
}

/// A named family of singularity models, possibly parameterized.
pub trait SingularityFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn arity(&self) -> usize;
    fn model(&self, params: &[u32]) -> Result<SingularityModel>;
}

fn check_arity(fam: &dyn SingularityFamily, params: &[u32]) -> Result<()> {
    if params.len() != fam.arity() {
        return Err(Error::Parse(format!(
            "family `{}` takes {} parameter(s), got {}",
            fam.name(),
            fam.arity(),
            params.len()
        )));
    }
    if params.contains(&0) {
        return Err(Error::Parse(format!(
            "family `{}` needs positive parameters",
            fam.name()
        )));
    }
    Ok(())
}

struct Pencil;
struct Quadratic;
struct Cusp;
struct Crossing;
struct Power;

impl SingularityFamily for Pencil {
    fn name(&self) -> &'static str {
        "pencil"
    }
    fn describe(&self) -> &'static str {
        "levels of z1/z2, degree 1"
    }
    fn arity(&self) -> usize {
        0
    }
    fn model(&self, params: &[u32]) -> Result<SingularityModel> {
        check_arity(self, params)?;
        Ok(SingularityModel::pencil())
    }
}

impl SingularityFamily for Quadratic {
    fn name(&self) -> &'static str {
        "quadratic"
    }
    fn describe(&self) -> &'static str {
        "levels of z1*z2, degree 1"
    }
    fn arity(&self) -> usize {
        0
    }
    fn model(&self, params: &[u32]) -> Result<SingularityModel> {
        check_arity(self, params)?;
        Ok(SingularityModel::quadratic())
    }
}

impl SingularityFamily for Cusp {
    fn name(&self) -> &'static str {
        "cusp"
    }
    fn describe(&self) -> &'static str {
        "z1^3 - z2^2"
    }
    fn arity(&self) -> usize {
        0
    }
    fn model(&self, params: &[u32]) -> Result<SingularityModel> {
        check_arity(self, params)?;
        SingularityModel::polynomial("cusp", BivarPoly::parse("z1^3 - z2^2")?)
    }
}

impl SingularityFamily for Crossing {
    fn name(&self) -> &'static str {
        "crossing"
    }
    fn describe(&self) -> &'static str {
        "normal crossing z1^p * z2^q"
    }
    fn arity(&self) -> usize {
        2
    }
    fn model(&self, params: &[u32]) -> Result<SingularityModel> {
        check_arity(self, params)?;
        let (p, q) = (params[0], params[1]);
        let f = BivarPoly::parse(&format!("z1^{p}*z2^{q}"))?;
        SingularityModel::polynomial(format!("crossing:{p},{q}"), f)
    }
}

impl SingularityFamily for Power {
    fn name(&self) -> &'static str {
        "power"
    }
    fn describe(&self) -> &'static str {
        "z1^(p+1) + z2^(q+1), degree p*q"
    }
    fn arity(&self) -> usize {
        2
    }
    fn model(&self, params: &[u32]) -> Result<SingularityModel> {
        check_arity(self, params)?;
        let (p, q) = (params[0], params[1]);
        let f = BivarPoly::parse(&format!("z1^{} + z2^{}", p + 1, q + 1))?;
        SingularityModel::polynomial(format!("power:{p},{q}"), f)
    }
}

#[derive(Clone)]
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Arc<dyn SingularityFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: BTreeMap::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = FamilyRegistry::empty();
        r.register(Arc::new(Pencil));
        r.register(Arc::new(Quadratic));
        r.register(Arc::new(Cusp));
        r.register(Arc::new(Crossing));
        r.register(Arc::new(Power));
        r
    }

    pub fn register(&mut self, fam: Arc<dyn SingularityFamily>) {
        self.families.insert(fam.name(), fam);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn SingularityFamily>> {
        self.families
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        FamilyRegistry::standard()
    }
}

/// A way of computing the Hopf degree of a polynomial singularity.
pub trait HopfDegreeMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn degree(&self, f: &BivarPoly) -> Result<u64>;
}

/// Local intersection multiplicity of the reduced kernel field.
pub struct ExactMethod;

/// Numerical root count; a cross-check, not a source of truth.
pub struct OracleMethod(pub OracleParams);

impl HopfDegreeMethod for ExactMethod {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn degree(&self, f: &BivarPoly) -> Result<u64> {
        hopf_degree(f)
    }
}

impl HopfDegreeMethod for OracleMethod {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn degree(&self, f: &BivarPoly) -> Result<u64> {
        hopf_degree_oracle(f, &self.0)
    }
}

/// Looks up a degree method; `params` configures the oracle.
pub fn degree_method(name: &str, params: OracleParams) -> Result<Box<dyn HopfDegreeMethod>> {
    match name {
        "exact" => Ok(Box::new(ExactMethod)),
        "oracle" => Ok(Box::new(OracleMethod(params))),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

pub const DEGREE_METHODS: [&str; 2] = ["exact", "oracle"];

/// How to fill a total degree with singularity models.
#[derive(Clone, Debug)]
pub enum PlanStrategy {
    /// `n` pencil singularities.
    Default,
    /// One singularity `z1^(n+1) + z2^2`.
    Single,
    /// Deterministic: largest usable degree first.
    Menu(Vec<SingularityModel>),
    /// Uniform choice among usable menu items at each step.
    Random {
        menu: Vec<SingularityModel>,
        seed: u64,
    },
}

impl PlanStrategy {
    /// `default`, `single`, or a `;`-separated menu such as
    /// `pencil;cusp;power:2,1`. `seed` turns a menu into a random strategy.
    pub fn parse(s: &str, seed: Option<u64>, families: &FamilyRegistry) -> Result<Self> {
        match s.trim() {
            "default" => Ok(PlanStrategy::Default),
            "single" => Ok(PlanStrategy::Single),
            menu => {
                let items = menu
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| SingularityModel::parse(t, families))
                    .collect::<Result<Vec<_>>>()?;
                Ok(match seed {
                    Some(seed) => PlanStrategy::Random { menu: items, seed },
                    None => PlanStrategy::Menu(items),
                })
            }
        }
    }
}

/// Positive-type models with degrees summing to exactly `n`.
pub fn synthesize_plan(n: u64, strategy: &PlanStrategy) -> Result<Vec<SingularityModel>> {
    match strategy {
        PlanStrategy::Default => Ok(vec![SingularityModel::pencil(); n as usize]),
        PlanStrategy::Single => {
            if n == 0 {
                return Ok(Vec::new());
            }
            let f = BivarPoly::parse(&format!("z1^{} + z2^2", n + 1))?;
            Ok(vec![SingularityModel::polynomial(
                format!("power:{n},1"),
                f,
            )?])
        }
        PlanStrategy::Menu(menu) => fill(n, menu, |usable| usable[0]),
        PlanStrategy::Random { menu, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            fill(n, menu, |usable| {
                *usable.choose(&mut rng).expect("nonempty")
            })
        }
    }
}

fn fill<F>(n: u64, menu: &[SingularityModel], mut pick: F) -> Result<Vec<SingularityModel>>
where
    F: FnMut(&[usize]) -> usize,
{
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut items: Vec<&SingularityModel> = menu.iter().filter(|m| m.degree > 0).collect();
    if items.is_empty() {
        return Err(Error::Plan(format!(
            "menu has no singularity of positive degree to reach {n}"
        )));
    }
    items.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.label.cmp(&b.label)));
    let n = n as usize;
    // reachable[k]: k is a sum of menu degrees
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for k in 1..=n {
        reachable[k] = items
            .iter()
            .any(|m| m.degree as usize <= k && reachable[k - m.degree as usize]);
    }
    if !reachable[n] {
        return Err(Error::Plan(format!(
            "degree {n} is not a sum of menu degrees"
        )));
    }
    let mut rest = n;
    let mut out = Vec::new();
    while rest > 0 {
        let usable: Vec<usize> = (0..items.len())
            .filter(|&i| {
                let d = items[i].degree as usize;
                d <= rest && reachable[rest - d]
            })
            .collect();
        let i = pick(&usable);
        rest -= items[i].degree as usize;
        out.push(items[i].clone().with_sign(Sign::Positive));
    }
    Ok(out)
}

/// A splitting with singularities of both types; `achiral` selects the ledger.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoliationPlan {
    pub splitting: Splitting,
    pub achiral: bool,
    pub positive: Vec<SingularityModel>,
    pub negative: Vec<SingularityModel>,
}

impl FoliationPlan {
    pub fn positive_degree(&self) -> u64 {
        self.positive.iter().map(|s| s.degree).sum()
    }

    pub fn negative_degree(&self) -> u64 {
        self.negative.iter().map(|s| s.degree).sum()
    }
}

/// Singularity bookkeeping for a plan.
///
/// Chiral: `χ = Σ deg p_i + τ·ν` with only positive singularities.
/// Achiral: `Σ deg p_i = n` and `Σ deg q_i = m`, recomputed from the splitting.
pub fn ledger_check(inv: &ManifoldInvariants, plan: &FoliationPlan) -> bool {
    let sp = &plan.splitting;
    let Ok(tn) = inv.form.pair(&sp.tau, &sp.nu) else {
        return false;
    };
    let signs_ok = plan.positive.iter().all(|s| s.is_positive())
        && plan.negative.iter().all(|s| !s.is_positive());
    if !signs_ok {
        return false;
    }
    let pos = plan.positive_degree() as i64;
    let neg = plan.negative_degree() as i64;
    if !plan.achiral {
        return plan.negative.is_empty() && inv.euler_characteristic() == pos + tn;
    }
    match solve_modification(inv, &sp.tau, &sp.nu) {
        Ok(mn) => pos == mn.n && neg == mn.m,
        Err(_) => false,
    }
}
