//! Built-in manifolds and the manifold loader.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntersectionForm, ManifoldInvariants};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub invariants: ManifoldInvariants,
    pub provenance: &'static str,
}

/// Cartan matrix of E8 (positive-definite, even, unimodular).
pub fn e8() -> IntersectionForm {
    // chain 1-2-3-4-5-6-7 with node 8 attached to node 5
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    IntersectionForm::new(m).expect("E8 is unimodular")
}

fn negate(f: &IntersectionForm) -> IntersectionForm {
    let m = f
        .matrix()
        .iter()
        .map(|r| r.iter().map(|x| -x).collect())
        .collect();
    IntersectionForm::new(m).expect("negation preserves unimodularity")
}

fn k3_form() -> IntersectionForm {
    let ne8 = negate(&e8());
    let h = IntersectionForm::hyperbolic();
    ne8.block_sum(&ne8)
        .block_sum(&h)
        .block_sum(&h)
        .block_sum(&h)
}

pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |name, b1, form, provenance| CatalogEntry {
        name,
        invariants: ManifoldInvariants::new(name, b1, form),
        provenance,
    };
    vec![
        entry("S4", 0, IntersectionForm::empty(), "4-sphere; H2 = 0"),
        entry(
            "CP2",
            0,
            IntersectionForm::diagonal(&[1]).expect("unimodular"),
            "complex projective plane; H2 generated by the line h, h.h = 1",
        ),
        entry(
            "CP2bar",
            0,
            IntersectionForm::diagonal(&[-1]).expect("unimodular"),
            "CP2 with reversed orientation; e.e = -1",
        ),
        entry(
            "S2xS2",
            0,
            IntersectionForm::hyperbolic(),
            "product of spheres; basis of the two factors, hyperbolic form",
        ),
        entry(
            "K3",
            0,
            k3_form(),
            "K3 surface; form 2(-E8) + 3H, signature -16, Euler characteristic 24",
        ),
        entry(
            "S3xS1",
            1,
            IntersectionForm::empty(),
            "S3 x S1; b1 = 1, H2 = 0",
        ),
    ]
}

/// Hand-computed `(χ, σ, p₁)` for each entry, kept apart from the forms.
const EXPECTED: [(&str, i64, i64, i64); 6] = [
    ("S4", 2, 0, 0),
    ("CP2", 3, 1, 3),
    ("CP2bar", 3, -1, -3),
    ("S2xS2", 4, 0, 0),
    ("K3", 24, -16, -48),
    ("S3xS1", 0, 0, 0),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfTestLine {
    pub name: &'static str,
    /// `[χ, σ, p₁]`.
    pub expected: [i64; 3],
    pub computed: [i64; 3],
    pub pass: bool,
}

/// Compares every entry with [`EXPECTED`]; a missing expectation fails.
pub fn self_test() -> Vec<SelfTestLine> {
    catalog()
        .into_iter()
        .map(|e| {
            let inv = &e.invariants;
            let computed = [inv.euler_characteristic(), inv.signature(), inv.p1()];
            let expected = EXPECTED
                .iter()
                .find(|x| x.0 == e.name)
                .map_or([i64::MIN; 3], |x| [x.1, x.2, x.3]);
            SelfTestLine {
                name: e.name,
                expected,
                computed,
                pass: expected == computed,
            }
        })
        .collect()
}

pub fn names() -> Vec<&'static str> {
    catalog().into_iter().map(|e| e.name).collect()
}

fn lookup(name: &str) -> Result<ManifoldInvariants> {
    catalog()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .map(|e| e.invariants)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ManifoldFile {
    pub name: String,
    pub b1: u32,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
}

pub fn load_file(path: &Path) -> Result<ManifoldInvariants> {
    let text = std::fs::read_to_string(path)?;
    let f: ManifoldFile = serde_json::from_str(&text)?;
    let form = if f.q.is_empty() {
        IntersectionForm::empty()
    } else {
        IntersectionForm::new(f.q)?
    };
    Ok(ManifoldInvariants::new(f.name, f.b1, form))
}

/// `kNAME`: connected sum of `k` copies, `0NAME` being `S4`.
fn load_term(term: &str) -> Result<ManifoldInvariants> {
    let term = term.trim();
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    let name = &term[digits..];
    if name.is_empty() {
        return Err(Error::Parse(format!("missing manifold name in `{term}`")));
    }
    let base = lookup(name)?;
    if digits == 0 {
        return Ok(base);
    }
    let k: u32 = term[..digits]
        .parse()
        .map_err(|_| Error::Parse(format!("bad multiplier in `{term}`")))?;
    let mut acc = ManifoldInvariants::new("S4", 0, IntersectionForm::empty());
    for _ in 0..k {
        acc = acc.connected_sum(&base);
    }
    acc.name = term.to_string();
    Ok(acc)
}

/// A JSON file path, a catalog name, `kNAME`, or connected sums `A#B#…`.
pub fn load_manifold(spec: &str) -> Result<ManifoldInvariants> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        return load_file(path);
    }
    let mut parts = spec.split('#').map(load_term);
    let mut acc = parts
        .next()
        .ok_or_else(|| Error::Parse("empty manifold".into()))??;
    for p in parts {
        acc = acc.connected_sum(&p?);
    }
    acc.name = spec.to_string();
    Ok(acc)
}
