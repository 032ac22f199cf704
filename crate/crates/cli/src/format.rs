//! Text rendering shared by the commands.

use std::fmt::Write;

use serde_json::{json, Value};

use foliage_core::existence::Splitting;
use foliage_core::lattice::ManifoldInvariants;
use foliage_core::singularity::models::{FoliationPlan, SingularityModel};
use foliage_core::verdict::{Verdict, Witness};

pub fn manifold_json(inv: &ManifoldInvariants) -> Value {
    json!({
        "name": inv.name,
        "b1": inv.b1,
        "Q": inv.form.matrix(),
        "rank": inv.form.rank(),
        "euler_characteristic": inv.euler_characteristic(),
        "signature": inv.signature(),
        "p1": inv.p1(),
    })
}

pub fn manifold_line(inv: &ManifoldInvariants) -> String {
    format!(
        "{}: b1 = {}, b2 = {}, chi = {}, sigma = {}, p1 = {}",
        inv.name,
        inv.b1,
        inv.b2(),
        inv.euler_characteristic(),
        inv.signature(),
        inv.p1()
    )
}

pub fn splitting_line(s: &Splitting) -> String {
    format!(
        "tau = {}, nu = {}, c = {}, (m, n) = ({}, {})",
        s.tau, s.nu, s.c, s.m, s.n
    )
}

fn models(list: &[SingularityModel]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    // run-length encode consecutive equal labels
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < list.len() {
        let mut j = i;
        while j < list.len() && list[j].label == list[i].label {
            j += 1;
        }
        let k = j - i;
        let item = format!("{} (degree {})", list[i].label, list[i].degree);
        out.push(if k > 1 { format!("{k} x {item}") } else { item });
        i = j;
    }
    out.join(", ")
}

pub fn plan_text(p: &FoliationPlan) -> String {
    let mut s = format!("  splitting: {}\n", splitting_line(&p.splitting));
    let _ = writeln!(
        s,
        "  positive singularities: {} (total degree {})",
        models(&p.positive),
        p.positive_degree()
    );
    if p.achiral || !p.negative.is_empty() {
        let _ = writeln!(
            s,
            "  negative singularities: {} (total degree {})",
            models(&p.negative),
            p.negative_degree()
        );
    }
    s
}

pub fn verdict_text(label: &str, v: &Verdict) -> String {
    let mut s = format!("{label}{}\n", v.status);
    let _ = writeln!(s, "  reason: {}", v.reason);
    if !v.citation.is_empty() {
        let _ = writeln!(s, "  citation: {}", v.citation);
    }
    match &v.witness {
        Some(Witness::Splitting(sp)) => {
            let _ = writeln!(s, "  splitting: {}", splitting_line(sp));
        }
        Some(Witness::Plan(p)) => s.push_str(&plan_text(p)),
        Some(Witness::Surface {
            plan,
            singularities_on_surface,
        }) => {
            s.push_str(&plan_text(plan));
            let _ = writeln!(
                s,
                "  singularities on the surface: {singularities_on_surface}"
            );
        }
        None => {}
    }
    s
}

pub fn citations(vs: &[&Verdict]) -> Vec<String> {
    let mut out: Vec<String> = vs
        .iter()
        .map(|v| v.citation.clone())
        .filter(|c| !c.is_empty())
        .collect();
    out.dedup();
    out
}
