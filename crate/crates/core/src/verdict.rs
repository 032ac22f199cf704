use std::fmt;

use serde::Serialize;

use crate::existence::Splitting;
use crate::singularity::models::FoliationPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Exists,
    Obstructed,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exists => "EXISTS",
            Status::Obstructed => "OBSTRUCTED",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Splitting(Splitting),
    Plan(FoliationPlan),
    /// A plan together with the number of singularities placed on the surface.
    Surface {
        plan: FoliationPlan,
        singularities_on_surface: i64,
    },
}

/// Three-valued answer. `EXISTS` always carries a witness, `OBSTRUCTED` always
/// names the obstruction in `citation`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub reason: String,
    pub citation: String,
}

impl Verdict {
    pub fn exists(
        witness: Witness,
        reason: impl Into<String>,
        citation: impl Into<String>,
    ) -> Self {
        Verdict {
            status: Status::Exists,
            witness: Some(witness),
            reason: reason.into(),
            citation: citation.into(),
        }
    }

    pub fn obstructed(reason: impl Into<String>, citation: impl Into<String>) -> Self {
        let citation = citation.into();
        assert!(!citation.is_empty(), "an obstruction must be cited");
        Verdict {
            status: Status::Obstructed,
            witness: None,
            reason: reason.into(),
            citation,
        }
    }

    pub fn unknown(reason: impl Into<String>, citation: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unknown,
            witness: None,
            reason: reason.into(),
            citation: citation.into(),
        }
    }

    pub fn is_exists(&self) -> bool {
        self.status == Status::Exists
    }

    pub fn plan(&self) -> Option<&FoliationPlan> {
        match &self.witness {
            Some(Witness::Plan(p)) | Some(Witness::Surface { plan: p, .. }) => Some(p),
            _ => None,
        }
    }
}

/// Names of the results a verdict can rest on.
pub mod cite {
    pub const COMPLEX_CLASS: &str = "complex class: c = w2 mod 2 and p1 = c^2 - 2 chi";
    pub const CHIRAL_EXISTENCE: &str =
        "singular foliation from a splitting c = tau + nu with chi - tau.nu >= 0";
    pub const PRESCRIBED_SINGULARITIES: &str =
        "prescribed positive singularities with total Hopf degree chi - tau.nu";
    pub const ACHIRAL_EXISTENCE: &str =
        "achiral singular foliation from a characteristic c when m >= 0 and n >= 0";
    pub const ACHIRAL_OBSTRUCTION: &str =
        "positive-definite obstruction: negative singularities need 1 - b1 + b2 >= m";
    pub const TRANSVERSAL: &str = "closed transversal S: chi(S) = nu.S and S.S = tau.S";
    pub const LEAF: &str = "closed leaf S: chi(S) = tau.S, S.S = nu.S, chi - tau.nu >= S.S >= 0";
    pub const ACHIRAL_LEAF: &str = "achiral closed leaf with S.S < 0: m >= -S.S and n >= 0";
    pub const ADJUNCT: &str = "adjunction equality chi(S) + S.S = c.S";
}
