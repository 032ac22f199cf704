//! Subcommands, each behind the [`Command`] trait and looked up by name.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use serde_json::{json, Value};

use foliage_core::catalog::{catalog, load_manifold, self_test};
use foliage_core::existence::{
    achiral_exists, enumerate_complex_classes, find_splittings, foliation_exists,
    infinite_splittings_witness, is_complex_class, Prescription, Splitting, DEFAULT_BOUND,
};
use foliage_core::geometry::chart::ChartField;
use foliage_core::geometry::connection::MARGIN_STEPS;
use foliage_core::geometry::domega::ConvergenceStudy;
use foliage_core::geometry::{
    convergence_study, orthogonal_j_from_frame, verify_domega_points, AlmostComplex, Domain,
    DomegaOptions, FieldRegistry, LhsRoute, Scheme,
};
use foliage_core::lattice::{CohClass, ManifoldInvariants};
use foliage_core::singularity::models::{
    degree_method, ledger_check, synthesize_plan, FamilyRegistry, FoliationPlan, PlanStrategy,
    Sign, SingularityModel,
};
use foliage_core::singularity::multiplicity::analyze;
use foliage_core::singularity::oracle::OracleParams;
use foliage_core::singularity::poly::BivarPoly;
use foliage_core::surface::{
    adjunct_surfaces, jhol_representable, kronheimer_bound, leaf_check, transversal_check,
    SurfaceData,
};
use foliage_core::verdict::{Status, Verdict};

use crate::format::{
    citations, manifold_json, manifold_line, plan_text, splitting_line, verdict_text,
};
use crate::{bool_exit, status_exit, CliError, Invocation, Outcome, EXIT_TRUE, EXIT_UNKNOWN};

type CliResult<T> = std::result::Result<T, CliError>;

/// Flags every command accepts.
const COMMON: [&str; 3] = ["command", "target", "json"];

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Flag ids (clap argument ids) beyond [`COMMON`].
    fn flags(&self) -> &'static [&'static str];
    fn run(&self, inv: &Invocation) -> CliResult<Outcome>;
}

#[derive(Default)]
pub struct Registry {
    commands: BTreeMap<&'static str, Arc<dyn Command>>,
}

impl Registry {
    pub fn standard() -> Self {
        let mut r = Registry::default();
        r.register(Arc::new(Classes));
        r.register(Arc::new(Splittings));
        r.register(Arc::new(Exists));
        r.register(Arc::new(Achiral));
        r.register(Arc::new(SurfaceCommand::Leaf));
        r.register(Arc::new(SurfaceCommand::Transversal));
        r.register(Arc::new(Adjunct));
        r.register(Arc::new(Degree));
        r.register(Arc::new(Ledger));
        r.register(Arc::new(GenusBoundCommand));
        r.register(Arc::new(VerifyDomega));
        r.register(Arc::new(Catalog));
        r
    }

    pub fn register(&mut self, c: Arc<dyn Command>) {
        self.commands.insert(c.name(), c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.commands.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<dyn Command>> {
        self.commands.get(name)
    }

    /// Finds the command, rejects flags it does not take, and runs it.
    pub fn dispatch(&self, inv: &Invocation) -> CliResult<Outcome> {
        let name = inv.args.command.as_str();
        let cmd = self.get(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown command `{name}`; expected one of {}",
                self.names().join(", ")
            ))
        })?;
        let stray: Vec<String> = inv
            .explicit
            .iter()
            .filter(|f| !COMMON.contains(&f.as_str()) && !cmd.flags().contains(&f.as_str()))
            .map(|f| format!("--{}", f.replace('_', "-")))
            .collect();
        if !stray.is_empty() {
            return Err(CliError::Usage(format!(
                "`{name}` does not take {}",
                stray.join(", ")
            )));
        }
        cmd.run(inv)
    }
}

fn manifold(inv: &Invocation) -> CliResult<ManifoldInvariants> {
    let t = inv
        .args
        .target
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("`{}` needs a manifold", inv.args.command)))?;
    Ok(load_manifold(t)?)
}

fn class_or_zero(s: Option<&str>, m: &ManifoldInvariants) -> CliResult<CohClass> {
    match s {
        Some(s) => Ok(CohClass::parse(s, m.form.rank())?),
        None => Ok(CohClass::zero(m.form.rank())),
    }
}

fn tau_nu(inv: &Invocation, m: &ManifoldInvariants) -> CliResult<(CohClass, CohClass)> {
    Ok((
        class_or_zero(inv.args.tau.as_deref(), m)?,
        class_or_zero(inv.args.nu.as_deref(), m)?,
    ))
}

/// `--c`, else `--tau + --nu`; `None` when neither is given.
fn complex_class(inv: &Invocation, m: &ManifoldInvariants) -> CliResult<Option<CohClass>> {
    let a = &inv.args;
    if let Some(c) = &a.c {
        if a.tau.is_some() || a.nu.is_some() {
            return Err(CliError::Usage(
                "give either --c or --tau/--nu, not both".into(),
            ));
        }
        return Ok(Some(CohClass::parse(c, m.form.rank())?));
    }
    if a.tau.is_none() && a.nu.is_none() {
        return Ok(None);
    }
    let (t, n) = tau_nu(inv, m)?;
    Ok(Some(t.add(&n)?))
}

fn required_complex_class(inv: &Invocation, m: &ManifoldInvariants) -> CliResult<CohClass> {
    complex_class(inv, m)?
        .ok_or_else(|| CliError::Usage(format!("`{}` needs --c or --tau/--nu", inv.args.command)))
}

fn surface(inv: &Invocation, m: &ManifoldInvariants) -> CliResult<SurfaceData> {
    let cls = inv
        .args
        .class
        .as_deref()
        .ok_or_else(|| CliError::Usage("surface needs --class".into()))?;
    let genus = inv
        .args
        .genus
        .ok_or_else(|| CliError::Usage("surface needs --genus".into()))?;
    Ok(SurfaceData::new(
        &m.form,
        CohClass::parse(cls, m.form.rank())?,
        genus,
        true,
    )?)
}

fn model_list(s: &str) -> CliResult<Vec<SingularityModel>> {
    let reg = FamilyRegistry::standard();
    Ok(s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| SingularityModel::parse(t, &reg))
        .collect::<foliage_core::error::Result<Vec<_>>>()?)
}

fn strategy(inv: &Invocation) -> CliResult<PlanStrategy> {
    let s = inv.args.strategy.as_deref().unwrap_or("default");
    Ok(PlanStrategy::parse(
        s,
        inv.args.seed,
        &FamilyRegistry::standard(),
    )?)
}

fn prescription(list: Option<&str>, inv: &Invocation) -> CliResult<Prescription> {
    match list {
        Some(l) => {
            if inv.args.strategy.is_some() {
                return Err(CliError::Usage(
                    "an explicit singularity list excludes --strategy".into(),
                ));
            }
            Ok(Prescription::Given(model_list(l)?))
        }
        None => Ok(Prescription::Synthesize(strategy(inv)?)),
    }
}

fn verdict_outcome(inputs: Value, v: Verdict, header: &str) -> Outcome {
    Outcome {
        citations: citations(&[&v]),
        text: format!("{header}{}", verdict_text("", &v)),
        exit_code: status_exit(v.status),
        result: json!({ "verdict": v }),
        inputs,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub struct Classes;

impl Command for Classes {
    fn name(&self) -> &'static str {
        "classes"
    }
    fn about(&self) -> &'static str {
        "complex classes within a coordinate bound"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["bound"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let bound = inv.args.bound.unwrap_or(DEFAULT_BOUND);
        let classes = enumerate_complex_classes(&m, bound)?;
        let mut text = format!("{}\n", manifold_line(&m));
        let _ = writeln!(
            text,
            "complex classes with |c_i| <= {bound}: {}",
            classes.len()
        );
        for c in &classes {
            let _ = writeln!(text, "  {c}");
        }
        Ok(Outcome {
            inputs: json!({ "manifold": manifold_json(&m), "bound": bound }),
            result: json!({ "complex_classes": classes }),
            citations: vec![foliage_core::verdict::cite::COMPLEX_CLASS.to_string()],
            text,
            exit_code: bool_exit(!classes.is_empty()),
        })
    }
}

pub struct Splittings;

impl Command for Splittings {
    fn name(&self) -> &'static str {
        "splittings"
    }
    fn about(&self) -> &'static str {
        "splittings c = tau + nu with chi - tau.nu >= 0, and an infinitude witness"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["c", "tau", "nu", "bound"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let bound = inv.args.bound.unwrap_or(DEFAULT_BOUND);
        let cs = match complex_class(inv, &m)? {
            Some(c) => vec![c],
            None => enumerate_complex_classes(&m, bound)?,
        };
        let mut text = format!("{}\n", manifold_line(&m));
        let mut rows = Vec::new();
        let mut any = false;
        for c in &cs {
            if !is_complex_class(&m, c)? {
                return Err(CliError::Core(foliage_core::error::Error::NotComplex(
                    c.to_string(),
                )));
            }
            let sp = find_splittings(&m, c, bound)?;
            let w = infinite_splittings_witness(&m, c, bound)?;
            any |= !sp.is_empty();
            let _ = writeln!(
                text,
                "c = {c}: {} splittings with |tau_i| <= {bound}",
                sp.len()
            );
            for s in &sp {
                let _ = writeln!(text, "  {}", splitting_line(s));
            }
            match &w {
                Some(w) => {
                    let _ = writeln!(
                        text,
                        "  infinitely many: tau = k {} for every k >= {} (alpha^2 = {}, c.alpha = {})",
                        w.alpha, w.k0, w.alpha_square, w.c_dot_alpha
                    );
                }
                None => {
                    let _ = writeln!(text, "  no positive class found; no infinitude witness");
                }
            }
            rows.push(json!({ "c": c, "splittings": sp, "infinitude_witness": w }));
        }
        Ok(Outcome {
            inputs: json!({ "manifold": manifold_json(&m), "bound": bound }),
            result: json!({ "classes": rows }),
            citations: vec![foliage_core::verdict::cite::CHIRAL_EXISTENCE.to_string()],
            text,
            exit_code: bool_exit(any),
        })
    }
}

pub struct Exists;

impl Command for Exists {
    fn name(&self) -> &'static str {
        "exists"
    }
    fn about(&self) -> &'static str {
        "singular foliation with prescribed Euler classes and positive singularities"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["tau", "nu", "sing", "strategy", "seed"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let (t, n) = tau_nu(inv, &m)?;
        let p = prescription(inv.args.sing.as_deref(), inv)?;
        let v = foliation_exists(&m, &t, &n, &p)?;
        let inputs = json!({
            "manifold": manifold_json(&m), "tau": t, "nu": n,
            "sing": inv.args.sing, "strategy": inv.args.strategy,
        });
        Ok(verdict_outcome(
            inputs,
            v,
            &format!("{}\n", manifold_line(&m)),
        ))
    }
}

pub struct Achiral;

impl Command for Achiral {
    fn name(&self) -> &'static str {
        "achiral"
    }
    fn about(&self) -> &'static str {
        "achiral singular foliation, with the positive-definite obstruction"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["tau", "nu", "pos", "neg", "strategy", "seed"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let (t, n) = tau_nu(inv, &m)?;
        let pos = prescription(inv.args.pos.as_deref(), inv)?;
        let neg = match inv.args.neg.as_deref() {
            Some(l) => Prescription::Given(model_list(l)?),
            None => Prescription::Synthesize(strategy(inv)?),
        };
        let v = achiral_exists(&m, &t, &n, &pos, &neg)?;
        let inputs = json!({
            "manifold": manifold_json(&m), "tau": t, "nu": n,
            "pos": inv.args.pos, "neg": inv.args.neg, "strategy": inv.args.strategy,
        });
        Ok(verdict_outcome(
            inputs,
            v,
            &format!("{}\n", manifold_line(&m)),
        ))
    }
}

pub enum SurfaceCommand {
    Leaf,
    Transversal,
}

impl Command for SurfaceCommand {
    fn name(&self) -> &'static str {
        match self {
            SurfaceCommand::Leaf => "leaf",
            SurfaceCommand::Transversal => "transversal",
        }
    }
    fn about(&self) -> &'static str {
        match self {
            SurfaceCommand::Leaf => "foliation with a given surface as a closed leaf",
            SurfaceCommand::Transversal => "foliation with a given surface as a closed transversal",
        }
    }
    fn flags(&self) -> &'static [&'static str] {
        &["tau", "nu", "class", "genus"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let (t, n) = tau_nu(inv, &m)?;
        let s = surface(inv, &m)?;
        let v = match self {
            SurfaceCommand::Leaf => leaf_check(&m, &t, &n, &s)?,
            SurfaceCommand::Transversal => transversal_check(&m, &t, &n, &s)?,
        };
        let inputs = json!({ "manifold": manifold_json(&m), "tau": t, "nu": n, "surface": s });
        let header = format!(
            "{}\nsurface: class {}, genus {}, chi {}, self-intersection {}\n",
            manifold_line(&m),
            s.cls,
            s.genus,
            s.chi,
            s.self_int
        );
        Ok(verdict_outcome(inputs, v, &header))
    }
}

pub struct Adjunct;

impl Command for Adjunct {
    fn name(&self) -> &'static str {
        "adjunct"
    }
    fn about(&self) -> &'static str {
        "a surface with chi(S) + S.S = c.S as transversal and as leaf"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["c", "tau", "nu", "class", "genus"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let c = required_complex_class(inv, &m)?;
        let s = surface(inv, &m)?;
        let (f1, f2) = adjunct_surfaces(&m, &c, &s)?;
        let jhol = jhol_representable(&m, &c, &s)?;
        let exit = if f1.is_exists() || f2.is_exists() {
            EXIT_TRUE
        } else if f1.status == Status::Obstructed && f2.status == Status::Obstructed {
            crate::EXIT_FALSE
        } else {
            EXIT_UNKNOWN
        };
        let mut text = format!("{}\n", manifold_line(&m));
        let _ = writeln!(text, "c = {c}; surface class {}, genus {}", s.cls, s.genus);
        let _ = writeln!(text, "adjunction equality chi(S) + S.S = c.S: {jhol}");
        text.push_str(&verdict_text("as transversal: ", &f1));
        text.push_str(&verdict_text("as leaf: ", &f2));
        Ok(Outcome {
            inputs: json!({ "manifold": manifold_json(&m), "c": c, "surface": s }),
            result: json!({ "jhol_representable": jhol, "transversal": f1, "leaf": f2 }),
            citations: citations(&[&f1, &f2]),
            text,
            exit_code: exit,
        })
    }
}

pub struct Degree;

impl Command for Degree {
    fn name(&self) -> &'static str {
        "degree"
    }
    fn about(&self) -> &'static str {
        "Hopf degree of the singularity of ker Df at the origin"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["method", "trials", "radius", "seed"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let a = &inv.args;
        let src = a
            .target
            .as_deref()
            .ok_or_else(|| CliError::Usage("`degree` needs a polynomial in z1, z2".into()))?;
        let f = BivarPoly::parse(src)?;
        let params = OracleParams {
            radius: a.radius,
            trials: a.trials,
            seed: inv.seed(),
            ..OracleParams::default()
        };
        let method = degree_method(&a.method, params.clone())?;
        let degree = method.degree(&f)?;
        let analysis = if method.name() == "exact" {
            Some(analyze(&f)?)
        } else {
            None
        };
        let mut text = format!("f = {f}\ndegree ({}): {degree}\n", method.name());
        if let Some(an) = &analysis {
            let _ = writeln!(text, "  kernel field: ({}, {})", an.field.0, an.field.1);
            if !an.common_factor.is_constant() {
                let _ = writeln!(text, "  common factor removed: {}", an.common_factor);
            }
            let _ = writeln!(text, "  resultant in z1: {}", an.resultant);
        }
        let mut inputs = json!({ "polynomial": f.to_string(), "method": method.name() });
        if method.name() == "oracle" {
            inputs["oracle"] = json!({ "radius": params.radius, "trials": params.trials, "w_scale": params.w_scale });
        }
        Ok(Outcome {
            inputs,
            result: json!({ "degree": degree, "analysis": analysis }),
            citations: Vec::new(),
            text,
            exit_code: EXIT_TRUE,
        })
    }
}

pub struct Ledger;

fn signed(list: Vec<SingularityModel>, sign: Sign) -> Vec<SingularityModel> {
    list.into_iter().map(|s| s.with_sign(sign)).collect()
}

/// Synthesized models for `degree`, or none when it is negative.
fn synthesize(degree: i64, inv: &Invocation, sign: Sign) -> CliResult<Vec<SingularityModel>> {
    if degree < 0 {
        return Ok(Vec::new());
    }
    Ok(signed(
        synthesize_plan(degree as u64, &strategy(inv)?)?,
        sign,
    ))
}

impl Command for Ledger {
    fn name(&self) -> &'static str {
        "ledger"
    }
    fn about(&self) -> &'static str {
        "singularity bookkeeping of a plan against chi and tau.nu"
    }
    fn flags(&self) -> &'static [&'static str] {
        &[
            "tau", "nu", "sing", "strategy", "seed", "achiral", "pos", "neg",
        ]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let a = &inv.args;
        let m = manifold(inv)?;
        let (t, n) = tau_nu(inv, &m)?;
        let sp = Splitting::new(&m, &t, &n)?;
        let chi = m.euler_characteristic();
        let tn = m.form.pair(&t, &n)?;
        let plan = if a.achiral {
            if a.sing.is_some() {
                return Err(CliError::Usage("use --pos/--neg with --achiral".into()));
            }
            let positive = match a.pos.as_deref() {
                Some(l) => model_list(l)?,
                None => synthesize(sp.n, inv, Sign::Positive)?,
            };
            let negative = match a.neg.as_deref() {
                Some(l) => signed(model_list(l)?, Sign::Negative),
                None => synthesize(sp.m, inv, Sign::Negative)?,
            };
            FoliationPlan {
                splitting: sp,
                achiral: true,
                positive,
                negative,
            }
        } else {
            if a.pos.is_some() || a.neg.is_some() {
                return Err(CliError::Usage("--pos/--neg need --achiral".into()));
            }
            let positive = match a.sing.as_deref() {
                Some(l) => model_list(l)?,
                None => synthesize(chi - tn, inv, Sign::Positive)?,
            };
            FoliationPlan {
                splitting: sp,
                achiral: false,
                positive,
                negative: Vec::new(),
            }
        };
        let ok = ledger_check(&m, &plan);
        let mut text = format!("{}\n", manifold_line(&m));
        text.push_str(&plan_text(&plan));
        if plan.achiral {
            let _ = writeln!(
                text,
                "ledger: positive {} vs n = {}, negative {} vs m = {}: {}",
                plan.positive_degree(),
                plan.splitting.n,
                plan.negative_degree(),
                plan.splitting.m,
                if ok { "balanced" } else { "unbalanced" }
            );
        } else {
            let _ = writeln!(
                text,
                "ledger: chi = {chi}, sum of degrees + tau.nu = {} + {tn}: {}",
                plan.positive_degree(),
                if ok { "balanced" } else { "unbalanced" }
            );
        }
        Ok(Outcome {
            inputs: json!({
                "manifold": manifold_json(&m), "tau": t, "nu": n, "achiral": a.achiral,
                "sing": a.sing, "pos": a.pos, "neg": a.neg, "strategy": a.strategy,
            }),
            result: json!({
                "balanced": ok, "chi": chi, "tau_dot_nu": tn,
                "positive_degree": plan.positive_degree(),
                "negative_degree": plan.negative_degree(),
                "plan": plan,
            }),
            citations: vec![foliage_core::verdict::cite::PRESCRIBED_SINGULARITIES.to_string()],
            text,
            exit_code: bool_exit(ok),
        })
    }
}

pub struct GenusBoundCommand;

impl Command for GenusBoundCommand {
    fn name(&self) -> &'static str {
        "genus-bound"
    }
    fn about(&self) -> &'static str {
        "least genus allowed by chi(S) + S.S <= c.S"
    }
    fn flags(&self) -> &'static [&'static str] {
        &["class", "c", "tau", "nu", "product"]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let m = manifold(inv)?;
        let eps = required_complex_class(inv, &m)?;
        let a = inv
            .args
            .class
            .as_deref()
            .ok_or_else(|| CliError::Usage("`genus-bound` needs --class".into()))?;
        let a = CohClass::parse(a, m.form.rank())?;
        let b = kronheimer_bound(&m.form, &eps, &a, inv.args.product)?;
        let mut text = format!(
            "{}\nclass {a}, c = {eps}: genus >= {}\n",
            manifold_line(&m),
            b.genus
        );
        if b.conjectural {
            text.push_str(
                "  conditional: unconditional only for products N x S1 (pass --product)\n",
            );
        }
        if let Some(cv) = &b.caveat {
            let _ = writeln!(text, "  caveat: {cv}");
        }
        Ok(Outcome {
            inputs: json!({ "manifold": manifold_json(&m), "c": eps, "class": a, "product": inv.args.product }),
            result: to_value(&b),
            citations: vec![foliage_core::verdict::cite::ADJUNCT.to_string()],
            text,
            exit_code: EXIT_TRUE,
        })
    }
}

pub struct VerifyDomega;

fn parse_domain(s: &str) -> CliResult<Domain> {
    let bad = || CliError::Usage(format!("--domain expects \"lo,hi\", got `{s}`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok(Domain::cube(lo, hi))
}

impl Command for VerifyDomega {
    fn name(&self) -> &'static str {
        "verify-domega"
    }
    fn about(&self) -> &'static str {
        "numerical check of the d(omega) identity for a g-orthogonal J"
    }
    fn flags(&self) -> &'static [&'static str] {
        &[
            "h", "points", "seed", "tol", "scheme", "route", "levels", "metric", "x", "z", "domain",
        ]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let a = &inv.args;
        if a.target.is_some() {
            return Err(CliError::Usage(
                "`verify-domega` takes no positional argument".into(),
            ));
        }
        let seed = inv.seed();
        let chart = match (&a.metric, &a.x, &a.z) {
            (None, None, None) => ChartField::random_smooth(seed)?,
            (Some(g), Some(x), Some(z)) => {
                let reg = FieldRegistry::standard();
                ChartField::new(
                    parse_domain(&a.domain)?,
                    reg.load(g)?,
                    reg.load(x)?,
                    reg.load(z)?,
                    None,
                )?
            }
            _ => {
                return Err(CliError::Usage(
                    "give all of --metric, --x, --z or none".into(),
                ))
            }
        };
        let scheme = Scheme::parse(&a.scheme)?;
        let route = LhsRoute::parse(&a.route)?;
        let h = match (a.h, chart.grid_spacing()) {
            (Some(h), _) => h,
            (None, Some(gh)) => gh,
            (None, None) => DomegaOptions::default().h,
        };
        if !(h > 0.0) || a.points == 0 {
            return Err(CliError::Usage(
                "--h must be positive and --points nonzero".into(),
            ));
        }
        let opts = DomegaOptions { h, scheme, route };
        // the convergence study starts at h and only shrinks it
        let margin = (4.0 * MARGIN_STEPS * scheme.reach() * h).max(0.05);
        let pts = chart.sample_points(a.points, margin, seed)?;
        let j = orthogonal_j_from_frame(chart.metric.clone(), seed);
        let res = verify_domega_points(&chart, &j, &pts, &opts)?;
        let max = res.iter().map(|r| r.residual).fold(0.0, f64::max);
        let mean = res.iter().map(|r| r.residual).sum::<f64>() / res.len() as f64;
        let worst = res
            .iter()
            .max_by(|x, y| x.residual.total_cmp(&y.residual))
            .expect("nonempty");
        let study: Option<ConvergenceStudy> = if a.levels > 0 {
            Some(convergence_study(&chart, &j, &pts, &opts, a.levels + 1)?)
        } else {
            None
        };
        let pass = max <= a.tol;
        let mut text = format!(
            "chart: metric {}\n  x {}\n  z {}\nJ: {}\n",
            chart.metric.describe(),
            chart.x.describe(),
            chart.z.describe(),
            j.describe()
        );
        let _ = writeln!(
            text,
            "{} points, h = {h:e}, scheme {}, route {}",
            pts.len(),
            a.scheme,
            a.route
        );
        let _ = writeln!(
            text,
            "max residual {max:.3e} (mean {mean:.3e}) at {:?}",
            worst.point
        );
        if let Some(s) = &study {
            for (h, r) in s.steps.iter().zip(&s.max_residuals) {
                let _ = writeln!(text, "  h = {h:e}: max residual {r:.3e}");
            }
            let ratios: Vec<String> = s.ratios.iter().map(|r| format!("{r:.3}")).collect();
            let _ = writeln!(text, "  ratios under halving: {}", ratios.join(", "));
        }
        let _ = writeln!(
            text,
            "{} (tolerance {:e})",
            if pass { "PASS" } else { "FAIL" },
            a.tol
        );
        Ok(Outcome {
            inputs: json!({
                "chart": chart.summary(), "j": j.describe(), "h": h, "points": a.points,
                "scheme": scheme, "route": route, "tol": a.tol, "levels": a.levels,
            }),
            result: json!({
                "pass": pass, "max_residual": max, "mean_residual": mean,
                "worst": worst, "convergence": study,
            }),
            citations: Vec::new(),
            text,
            exit_code: bool_exit(pass),
        })
    }
}

pub struct Catalog;

impl Command for Catalog {
    fn name(&self) -> &'static str {
        "catalog"
    }
    fn about(&self) -> &'static str {
        "built-in manifolds and their self-test, or the invariants of one manifold"
    }
    fn flags(&self) -> &'static [&'static str] {
        &[]
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        if inv.args.target.is_some() {
            let m = manifold(inv)?;
            return Ok(Outcome {
                inputs: json!({ "manifold": inv.args.target }),
                result: json!({ "manifold": manifold_json(&m), "parity": m.form.parity(),
                                "definiteness": m.form.definiteness() }),
                citations: Vec::new(),
                text: format!("{}\nQ = {:?}\n", manifold_line(&m), m.form.matrix()),
                exit_code: EXIT_TRUE,
            });
        }
        let tests = self_test();
        let mut text = String::new();
        let mut entries = Vec::new();
        for (e, t) in catalog().iter().zip(&tests) {
            let _ = writeln!(
                text,
                "{}  [{}]\n  {}",
                manifold_line(&e.invariants),
                if t.pass { "ok" } else { "MISMATCH" },
                e.provenance
            );
            entries.push(json!({
                "manifold": manifold_json(&e.invariants),
                "provenance": e.provenance,
                "self_test": t,
            }));
        }
        text.push_str(
            "also accepted: kNAME for k-fold connected sums, A#B, and JSON files {name, b1, Q}\n",
        );
        let all = tests.iter().all(|t| t.pass);
        Ok(Outcome {
            inputs: Value::Null,
            result: json!({ "entries": entries, "self_test_pass": all }),
            citations: Vec::new(),
            text,
            exit_code: bool_exit(all),
        })
    }
}
