//! Existence verdicts for singular and achiral singular foliations.

use serde::Serialize;

use crate::bundle::solve_modification;
use crate::error::{Error, Result};
use crate::lattice::{box_search, CohClass, ManifoldInvariants, DEFAULT_SEARCH_LIMIT};
use crate::singularity::models::{
    synthesize_plan, FoliationPlan, PlanStrategy, Sign, SingularityModel,
};
use crate::verdict::{cite, Verdict, Witness};

pub const DEFAULT_BOUND: i64 = 5;

/// `c = τ + ν` with the modification `(m, n)` turning `L_τ ⊕ L_ν` into `TM`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub tau: CohClass,
    pub nu: CohClass,
    pub c: CohClass,
    pub m: i64,
    pub n: i64,
}

impl Splitting {
    /// Fails unless `τ + ν` is characteristic.
    pub fn new(inv: &ManifoldInvariants, tau: &CohClass, nu: &CohClass) -> Result<Self> {
        let mn = solve_modification(inv, tau, nu)?;
        Ok(Splitting {
            tau: tau.clone(),
            nu: nu.clone(),
            c: tau.add(nu)?,
            m: mn.m,
            n: mn.n,
        })
    }
}

/// `c ≡ w₂ (mod 2)` and `c² = 2χ + p₁`.
pub fn is_complex_class(inv: &ManifoldInvariants, c: &CohClass) -> Result<bool> {
    let form = &inv.form;
    Ok(form.is_characteristic(c)? && form.square(c)? == 2 * inv.euler_characteristic() + inv.p1())
}

/// Complex classes with `|c_i| ≤ bound`, sorted lexicographically.
pub fn enumerate_complex_classes(inv: &ManifoldInvariants, bound: i64) -> Result<Vec<CohClass>> {
    let target = 2 * inv.euler_characteristic() + inv.p1();
    inv.form
        .characteristic_box(bound, DEFAULT_SEARCH_LIMIT, |c| {
            inv.form.square(c).map(|s| s == target).unwrap_or(false)
        })
}

/// Singularities to use: either given explicitly or synthesized.
#[derive(Clone, Debug)]
pub enum Prescription {
    Given(Vec<SingularityModel>),
    Synthesize(PlanStrategy),
}

impl Default for Prescription {
    fn default() -> Self {
        Prescription::Synthesize(PlanStrategy::Default)
    }
}

impl Prescription {
    fn resolve(&self, degree: u64, sign: Sign) -> Result<Option<Vec<SingularityModel>>> {
        match self {
            Prescription::Given(list) => {
                let total: u64 = list.iter().map(|s| s.degree).sum();
                Ok((total == degree)
                    .then(|| list.iter().map(|s| s.clone().with_sign(sign)).collect()))
            }
            Prescription::Synthesize(strategy) => Ok(Some(
                synthesize_plan(degree, strategy)?
                    .into_iter()
                    .map(|s| s.with_sign(sign))
                    .collect(),
            )),
        }
    }
}

fn degree_sum(p: &Prescription) -> Option<u64> {
    match p {
        Prescription::Given(list) => Some(list.iter().map(|s| s.degree).sum()),
        Prescription::Synthesize(_) => None,
    }
}

/// Existence of a singular foliation with `e(T) = τ`, `e(N) = ν` and positive
/// singularities as prescribed.
pub fn foliation_exists(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
    sings: &Prescription,
) -> Result<Verdict> {
    let c = tau.add(nu)?;
    inv.form.check(&c)?;
    if let Prescription::Given(list) = sings {
        if let Some(bad) = list.iter().find(|s| !s.is_positive()) {
            return Err(Error::NegativeSingularity(bad.label.clone()));
        }
    }
    if !is_complex_class(inv, &c)? {
        return Ok(Verdict::obstructed(
            format!(
                "c = {c} is not a complex class (c^2 = {}, 2 chi + p1 = {}, characteristic: {})",
                inv.form.square(&c)?,
                2 * inv.euler_characteristic() + inv.p1(),
                inv.form.is_characteristic(&c)?
            ),
            cite::COMPLEX_CLASS,
        ));
    }
    let sp = Splitting::new(inv, tau, nu)?;
    let n = inv.euler_characteristic() - inv.form.pair(tau, nu)?;
    if n < 0 {
        return Ok(Verdict::unknown(
            format!("chi - tau.nu = {n} < 0; the sufficient condition fails and no obstruction is known"),
            cite::CHIRAL_EXISTENCE,
        ));
    }
    let Some(positive) = sings.resolve(n as u64, Sign::Positive)? else {
        return Ok(Verdict::unknown(
            format!(
                "prescribed singularities have total degree {}, but chi - tau.nu = {n}",
                degree_sum(sings).unwrap_or(0)
            ),
            cite::PRESCRIBED_SINGULARITIES,
        ));
    };
    let count = positive.len();
    let plan = FoliationPlan {
        splitting: sp,
        achiral: false,
        positive,
        negative: Vec::new(),
    };
    Ok(Verdict::exists(
        Witness::Plan(plan),
        format!("c = {c} is complex and chi - tau.nu = {n} >= 0; {count} singularities"),
        cite::CHIRAL_EXISTENCE,
    ))
}

/// `1 − b₁ + b₂ < m` for a positive-definite (or empty) form.
pub fn positive_definite_obstruction(inv: &ManifoldInvariants, m: i64) -> Result<bool> {
    if !inv.form.is_positive_definite_or_empty() {
        return Err(Error::NotApplicable(format!(
            "intersection form of {} is not positive-definite",
            inv.name
        )));
    }
    Ok(1 - inv.b1 as i64 + inv.b2() < m)
}

/// Existence of an achiral singular foliation from a characteristic `c = τ + ν`.
pub fn achiral_exists(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
    pos: &Prescription,
    neg: &Prescription,
) -> Result<Verdict> {
    if let Prescription::Given(list) = pos {
        if let Some(bad) = list.iter().find(|s| !s.is_positive()) {
            return Err(Error::NegativeSingularity(bad.label.clone()));
        }
    }
    let sp = Splitting::new(inv, tau, nu)?;
    let (m, n) = (sp.m, sp.n);
    if m >= 0 && n >= 0 {
        let p = pos.resolve(n as u64, Sign::Positive)?;
        let q = neg.resolve(m as u64, Sign::Negative)?;
        let (Some(positive), Some(negative)) = (p, q) else {
            return Ok(Verdict::unknown(
                format!(
                    "(m,n) = ({m},{n}); prescribed negative/positive degrees do not match m and n"
                ),
                cite::PRESCRIBED_SINGULARITIES,
            ));
        };
        let plan = FoliationPlan {
            splitting: sp,
            achiral: true,
            positive,
            negative,
        };
        return Ok(Verdict::exists(
            Witness::Plan(plan),
            format!("(m,n) = ({m},{n}) with m >= 0 and n >= 0"),
            cite::ACHIRAL_EXISTENCE,
        ));
    }
    // total negative degree is a sum of nonnegative Hopf degrees
    let need = m.max(0);
    match positive_definite_obstruction(inv, need) {
        Ok(true) => Ok(Verdict::obstructed(
            format!(
                "(m,n) = ({m},{n}); 1 - b1 + b2 = {} < {need}",
                1 - inv.b1 as i64 + inv.b2()
            ),
            cite::ACHIRAL_OBSTRUCTION,
        )),
        Ok(false) => Ok(Verdict::unknown(
            format!(
                "(m,n) = ({m},{n}) has a negative entry; 1 - b1 + b2 = {} >= {need}, no obstruction",
                1 - inv.b1 as i64 + inv.b2()
            ),
            cite::ACHIRAL_EXISTENCE,
        )),
        Err(Error::NotApplicable(why)) => Ok(Verdict::unknown(
            format!("(m,n) = ({m},{n}) has a negative entry; obstruction not applicable: {why}"),
            cite::ACHIRAL_EXISTENCE,
        )),
        Err(e) => Err(e),
    }
}

/// All `τ` with `|τ_i| ≤ bound` and `χ − τ·(c − τ) ≥ 0`.
pub fn find_splittings(
    inv: &ManifoldInvariants,
    c: &CohClass,
    bound: i64,
) -> Result<Vec<Splitting>> {
    require_complex(inv, c)?;
    let form = &inv.form;
    let chi = inv.euler_characteristic();
    let ranges = vec![(-bound..=bound).collect::<Vec<i64>>(); form.rank()];
    let taus = box_search(&ranges, DEFAULT_SEARCH_LIMIT, |t| {
        let nu = c.sub(t).expect("same rank");
        chi - form.pair(t, &nu).expect("same rank") >= 0
    })?;
    taus.iter()
        .map(|t| Splitting::new(inv, t, &c.sub(t)?))
        .collect()
}

fn require_complex(inv: &ManifoldInvariants, c: &CohClass) -> Result<()> {
    if !is_complex_class(inv, c)? {
        return Err(Error::NotComplex(c.to_string()));
    }
    Ok(())
}

/// `α` with `α² > 0` and the least `k0 ≥ 0` such that `τ = kα` gives a valid
/// splitting for every `k ≥ k0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinitudeWitness {
    pub alpha: CohClass,
    pub alpha_square: i64,
    pub c_dot_alpha: i64,
    pub k0: i64,
}

pub fn infinite_splittings_witness(
    inv: &ManifoldInvariants,
    c: &CohClass,
    bound: i64,
) -> Result<Option<InfinitudeWitness>> {
    require_complex(inv, c)?;
    let form = &inv.form;
    if form.b2_plus() == 0 {
        return Ok(None);
    }
    let Some(alpha) = first_positive_class(inv, bound)? else {
        return Ok(None);
    };
    let a2 = form.square(&alpha)?;
    let ca = form.pair(c, &alpha)?;
    let chi = inv.euler_characteristic();
    Ok(Some(InfinitudeWitness {
        k0: least_k0(chi, ca, a2),
        alpha,
        alpha_square: a2,
        c_dot_alpha: ca,
    }))
}

/// Search order: by ∞-norm, then lexicographic with coordinate values ordered
/// `0, 1, −1, 2, −2, …`.
fn first_positive_class(inv: &ManifoldInvariants, bound: i64) -> Result<Option<CohClass>> {
    let rank = inv.form.rank();
    let size = (2 * bound as u128 + 1).saturating_pow(rank as u32);
    if size > DEFAULT_SEARCH_LIMIT {
        return Err(Error::SearchTooLarge {
            size,
            limit: DEFAULT_SEARCH_LIMIT,
        });
    }
    let key = |v: &i64| (v.abs(), *v < 0);
    for r in 1..=bound {
        let mut values: Vec<i64> = (-r..=r).collect();
        values.sort_by_key(key);
        let mut idx = vec![0usize; rank];
        'odometer: loop {
            let v: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
            if v.iter().any(|x| x.abs() == r) {
                let a = CohClass::new(v);
                if inv.form.square(&a)? > 0 {
                    return Ok(Some(a));
                }
            }
            let mut k = rank;
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    Ok(None)
}

/// Least `k0 ≥ 0` with `χ − k·cα + k²α² ≥ 0` for all `k ≥ k0`; needs `α² > 0`.
pub fn least_k0(chi: i64, ca: i64, a2: i64) -> i64 {
    assert!(a2 > 0);
    let q = |k: i128| chi as i128 - k * ca as i128 + k * k * a2 as i128;
    // q < 0 only between the roots, both below this bound
    let hi = (ca.unsigned_abs() as i128 + chi.unsigned_abs() as i128) / a2 as i128 + 2;
    (0..=hi)
        .rev()
        .find(|&k| q(k) < 0)
        .map_or(0, |k| (k + 1) as i64)
}
