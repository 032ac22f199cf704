//! Closed leaves, closed transversals and adjunct surfaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::existence::{is_complex_class, Splitting};
use crate::lattice::{CohClass, IntersectionForm, ManifoldInvariants};
use crate::singularity::models::{synthesize_plan, FoliationPlan, PlanStrategy, Sign};
use crate::verdict::{cite, Verdict, Witness};

/// A closed connected oriented surface, by its class and genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    pub cls: CohClass,
    pub genus: u32,
    pub connected: bool,
    pub chi: i64,
    pub self_int: i64,
}

impl SurfaceData {
    pub fn new(
        form: &IntersectionForm,
        cls: CohClass,
        genus: u32,
        connected: bool,
    ) -> Result<Self> {
        if !connected {
            return Err(Error::Disconnected);
        }
        let self_int = form.square(&cls)?;
        Ok(SurfaceData {
            cls,
            genus,
            connected,
            chi: 2 - 2 * genus as i64,
            self_int,
        })
    }
}

struct Conditions(Vec<(String, bool)>);

impl Conditions {
    fn new() -> Self {
        Conditions(Vec::new())
    }
    fn add(&mut self, label: String, ok: bool) {
        self.0.push((label, ok));
    }
    fn all(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
    fn failing(&self) -> String {
        let f: Vec<&str> = self
            .0
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(l, _)| l.as_str())
            .collect();
        format!("fails: {}", f.join("; "))
    }
    fn summary(&self) -> String {
        self.0
            .iter()
            .map(|(l, _)| l.as_str())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn chiral_plan(inv: &ManifoldInvariants, tau: &CohClass, nu: &CohClass) -> Result<FoliationPlan> {
    let sp = Splitting::new(inv, tau, nu)?;
    let n = (inv.euler_characteristic() - inv.form.pair(tau, nu)?).max(0) as u64;
    Ok(FoliationPlan {
        splitting: sp,
        achiral: false,
        positive: synthesize_plan(n, &PlanStrategy::Default)?,
        negative: Vec::new(),
    })
}

fn check_surface(inv: &ManifoldInvariants, s: &SurfaceData) -> Result<()> {
    if !s.connected {
        return Err(Error::Disconnected);
    }
    inv.form.check(&s.cls)
}

/// Foliation with `S` as a closed transversal.
pub fn transversal_check(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
    s: &SurfaceData,
) -> Result<Verdict> {
    check_surface(inv, s)?;
    let form = &inv.form;
    let c = tau.add(nu)?;
    let slack = inv.euler_characteristic() - form.pair(tau, nu)?;
    let (nu_s, tau_s) = (form.pair(nu, &s.cls)?, form.pair(tau, &s.cls)?);
    let mut cond = Conditions::new();
    cond.add(format!("c = {c} complex"), is_complex_class(inv, &c)?);
    cond.add(format!("chi - tau.nu = {slack} >= 0"), slack >= 0);
    cond.add(format!("chi(S) = {} = nu.S = {nu_s}", s.chi), s.chi == nu_s);
    cond.add(
        format!("S.S = {} = tau.S = {tau_s}", s.self_int),
        s.self_int == tau_s,
    );
    if !cond.all() {
        return Ok(Verdict::unknown(cond.failing(), cite::TRANSVERSAL));
    }
    Ok(Verdict::exists(
        Witness::Surface {
            plan: chiral_plan(inv, tau, nu)?,
            singularities_on_surface: 0,
        },
        cond.summary(),
        cite::TRANSVERSAL,
    ))
}

/// Foliation with `S` as a closed leaf; `S·S < 0` is delegated to
/// [`achiral_leaf_check`].
pub fn leaf_check(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
    s: &SurfaceData,
) -> Result<Verdict> {
    check_surface(inv, s)?;
    if s.self_int < 0 {
        return achiral_leaf_check(inv, tau, nu, s);
    }
    let form = &inv.form;
    let c = tau.add(nu)?;
    let slack = inv.euler_characteristic() - form.pair(tau, nu)?;
    let (nu_s, tau_s) = (form.pair(nu, &s.cls)?, form.pair(tau, &s.cls)?);
    let ss = s.self_int;
    let mut cond = Conditions::new();
    cond.add(format!("c = {c} complex"), is_complex_class(inv, &c)?);
    cond.add(format!("chi - tau.nu = {slack} >= S.S = {ss}"), slack >= ss);
    cond.add(
        format!("chi(S) = {} = tau.S = {tau_s}", s.chi),
        s.chi == tau_s,
    );
    cond.add(format!("S.S = {ss} = nu.S = {nu_s}"), ss == nu_s);
    if !cond.all() {
        return Ok(Verdict::unknown(cond.failing(), cite::LEAF));
    }
    Ok(Verdict::exists(
        Witness::Surface {
            plan: chiral_plan(inv, tau, nu)?,
            singularities_on_surface: ss,
        },
        format!("{}; {ss} singularities on S", cond.summary()),
        cite::LEAF,
    ))
}

/// Closed leaf with negative self-intersection in an achiral foliation.
pub fn achiral_leaf_check(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
    s: &SurfaceData,
) -> Result<Verdict> {
    check_surface(inv, s)?;
    let ss = s.self_int;
    if ss >= 0 {
        return Err(Error::WrongRoute(format!(
            "achiral leaf check needs S.S < 0, got {ss}; use the leaf check"
        )));
    }
    let c = tau.add(nu)?;
    if !inv.form.is_characteristic(&c)? {
        return Ok(Verdict::unknown(
            format!("c = {c} is not characteristic"),
            cite::ACHIRAL_LEAF,
        ));
    }
    let sp = Splitting::new(inv, tau, nu)?;
    let (m, n) = (sp.m, sp.n);
    let mut cond = Conditions::new();
    cond.add(format!("m = {m} >= -S.S = {}", -ss), m >= -ss);
    cond.add(format!("n = {n} >= 0"), n >= 0);
    if !cond.all() {
        return Ok(Verdict::unknown(cond.failing(), cite::ACHIRAL_LEAF));
    }
    let plan = FoliationPlan {
        splitting: sp,
        achiral: true,
        positive: synthesize_plan(n as u64, &PlanStrategy::Default)?,
        negative: synthesize_plan(m as u64, &PlanStrategy::Default)?
            .into_iter()
            .map(|x| x.with_sign(Sign::Negative))
            .collect(),
    };
    Ok(Verdict::exists(
        Witness::Surface {
            plan,
            singularities_on_surface: -ss,
        },
        cond.summary(),
        cite::ACHIRAL_LEAF,
    ))
}

fn require_complex(inv: &ManifoldInvariants, c: &CohClass) -> Result<()> {
    if !is_complex_class(inv, c)? {
        return Err(Error::NotComplex(c.to_string()));
    }
    Ok(())
}

/// Verdicts for `S` as a transversal (`τ = S`, `ν = c − S`) and as a leaf
/// (`τ = c − S`, `ν = S`).
pub fn adjunct_surfaces(
    inv: &ManifoldInvariants,
    c: &CohClass,
    s: &SurfaceData,
) -> Result<(Verdict, Verdict)> {
    require_complex(inv, c)?;
    check_surface(inv, s)?;
    let cs = inv.form.pair(c, &s.cls)?;
    if s.chi + s.self_int != cs {
        let why = format!(
            "adjunction equality fails: chi(S) + S.S = {} != c.S = {cs}",
            s.chi + s.self_int
        );
        return Ok((
            Verdict::unknown(why.clone(), cite::ADJUNCT),
            Verdict::unknown(why, cite::ADJUNCT),
        ));
    }
    let rest = c.sub(&s.cls)?;
    let transversal = transversal_check(inv, &s.cls, &rest, s)?;
    let leaf = if s.self_int < 0 {
        Verdict::unknown(
            format!(
                "S.S = {} < 0; the leaf construction needs S.S >= 0",
                s.self_int
            ),
            cite::LEAF,
        )
    } else {
        leaf_check(inv, &rest, &s.cls, s)?
    };
    Ok((transversal, leaf))
}

/// `χ(S) + S·S = c·S`.
pub fn jhol_representable(inv: &ManifoldInvariants, c: &CohClass, s: &SurfaceData) -> Result<bool> {
    require_complex(inv, c)?;
    check_surface(inv, s)?;
    Ok(s.chi + s.self_int == inv.form.pair(c, &s.cls)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusBound {
    pub genus: i64,
    /// Set unless the manifold is asserted to be a product `N × S¹`.
    pub conjectural: bool,
    pub caveat: Option<String>,
}

/// Least genus allowed by `χ(S) + S·S ≤ ε·S` for a surface in class `a`.
pub fn kronheimer_bound(
    form: &IntersectionForm,
    eps: &CohClass,
    a: &CohClass,
    product_with_circle: bool,
) -> Result<GenusBound> {
    let t = form.pair(eps, a)? - form.square(a)?;
    // 2 - 2g <= t  <=>  g >= (2 - t) / 2
    let g = -((t - 2).div_euclid(2));
    let caveat = a.is_zero().then(|| {
        "trivial class: bound assumes no sphere components; a sphere would violate it".to_string()
    });
    Ok(GenusBound {
        genus: g.max(0),
        conjectural: !product_with_circle,
        caveat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Status;

    fn cp2() -> ManifoldInvariants {
        ManifoldInvariants::new("CP2", 0, IntersectionForm::diagonal(&[1]).unwrap())
    }
    fn cl(v: &[i64]) -> CohClass {
        CohClass::new(v.to_vec())
    }
    fn surf(inv: &ManifoldInvariants, v: &[i64], g: u32) -> SurfaceData {
        SurfaceData::new(&inv.form, cl(v), g, true).unwrap()
    }

    #[test]
    fn transversal_examples() {
        let m = cp2();
        let line = surf(&m, &[1], 0);
        assert!(transversal_check(&m, &cl(&[1]), &cl(&[2]), &line)
            .unwrap()
            .is_exists());
        let v = transversal_check(&m, &cl(&[0]), &cl(&[3]), &line).unwrap();
        assert_eq!(v.status, Status::Unknown);
        assert!(v.reason.contains("chi(S)"));
        let torus = surf(&m, &[0], 1);
        assert!(transversal_check(&m, &cl(&[0]), &cl(&[3]), &torus)
            .unwrap()
            .is_exists());
    }

    #[test]
    fn leaf_examples() {
        let m = cp2();
        let line = surf(&m, &[1], 0);
        let v = leaf_check(&m, &cl(&[2]), &cl(&[1]), &line).unwrap();
        assert!(v.is_exists());
        assert!(matches!(
            v.witness,
            Some(Witness::Surface {
                singularities_on_surface: 1,
                ..
            })
        ));
        let conic = surf(&m, &[2], 0);
        assert_eq!(
            leaf_check(&m, &cl(&[1]), &cl(&[2]), &conic).unwrap().status,
            Status::Unknown
        );
        assert!(SurfaceData::new(&m.form, cl(&[1]), 0, false).is_err());
    }

    #[test]
    fn adjunct_examples() {
        let m = cp2();
        let c = cl(&[3]);
        let (f1, f2) = adjunct_surfaces(&m, &c, &surf(&m, &[1], 0)).unwrap();
        assert!(f1.is_exists() && f2.is_exists());
        let (f1, f2) = adjunct_surfaces(&m, &c, &surf(&m, &[2], 0)).unwrap();
        assert!(f1.is_exists());
        assert_eq!(f2.status, Status::Unknown);
        assert!(jhol_representable(&m, &c, &surf(&m, &[1], 0)).unwrap());
        assert!(!jhol_representable(&m, &c, &surf(&m, &[1], 1)).unwrap());
        assert!(jhol_representable(&m, &c, &surf(&m, &[0], 1)).unwrap());
        assert!(adjunct_surfaces(&m, &cl(&[1]), &surf(&m, &[1], 0)).is_err());
    }

    #[test]
    fn achiral_leaf() {
        let m = ManifoldInvariants::new("CP2bar", 0, IntersectionForm::diagonal(&[-1]).unwrap());
        let e = surf(&m, &[1], 0);
        let mut found = false;
        for t in -3..=3 {
            for n in -3..=3 {
                let (tau, nu) = (cl(&[t]), cl(&[n]));
                if !m.form.is_characteristic(&tau.add(&nu).unwrap()).unwrap() {
                    continue;
                }
                let sp = Splitting::new(&m, &tau, &nu).unwrap();
                let v = achiral_leaf_check(&m, &tau, &nu, &e).unwrap();
                assert_eq!(v.is_exists(), sp.m >= 1 && sp.n >= 0);
                found |= v.is_exists();
            }
        }
        assert!(found);
        let cp = cp2();
        assert!(matches!(
            achiral_leaf_check(&cp, &cl(&[0]), &cl(&[3]), &surf(&cp, &[0], 1)),
            Err(Error::WrongRoute(_))
        ));
    }

    #[test]
    fn genus_bounds() {
        let q = IntersectionForm::diagonal(&[1]).unwrap();
        assert_eq!(
            kronheimer_bound(&q, &cl(&[3]), &cl(&[1]), false)
                .unwrap()
                .genus,
            0
        );
        let h = IntersectionForm::hyperbolic();
        let b = kronheimer_bound(&h, &cl(&[0, 0]), &cl(&[1, 1]), true).unwrap();
        assert_eq!((b.genus, b.conjectural), (2, false));
        let z = kronheimer_bound(&h, &cl(&[0, 0]), &cl(&[0, 0]), false).unwrap();
        assert_eq!(z.genus, 1);
        assert!(z.caveat.is_some() && z.conjectural);
    }
}
