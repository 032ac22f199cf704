//! Oriented rank-4 bundles over a closed 4-manifold, tracked by `(w₂, e, p₁)`.
//!
//! By the Dold–Whitney classification these three classes determine the
//! bundle, so a bundle is identified with its class triple (plus Chern data
//! when a complex structure is carried along).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{CohClass, IntersectionForm, ManifoldInvariants};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexData {
    pub c1: CohClass,
    pub c2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleClasses {
    /// `w₂` as coordinates in `{0,1}`.
    pub w2: Vec<u8>,
    /// Euler number `⟨e, [M]⟩`.
    pub e: i64,
    /// `⟨p₁, [M]⟩`.
    pub p1: i64,
    pub complex: Option<ComplexData>,
}

impl BundleClasses {
    /// The trivial bundle `C² × M`, carrying its complex structure.
    pub fn trivial(rank: usize) -> Self {
        BundleClasses {
            w2: vec![0; rank],
            e: 0,
            p1: 0,
            complex: Some(ComplexData {
                c1: CohClass::zero(rank),
                c2: 0,
            }),
        }
    }

    pub fn base_rank(&self) -> usize {
        self.w2.len()
    }

    /// Checks `p₁ = c₁² − 2c₂`, `w₂ ≡ c₁` and `e = c₂` when Chern data is present.
    pub fn is_consistent(&self, form: &IntersectionForm) -> Result<bool> {
        let Some(cx) = &self.complex else {
            return Ok(true);
        };
        Ok(self.p1 == form.square(&cx.c1)? - 2 * cx.c2
            && self.w2 == cx.c1.mod2()
            && self.e == cx.c2)
    }
}

/// Classes of `L_τ ⊕ L_ν`: `c₁ = τ+ν`, `c₂ = e = τ·ν`, `p₁ = c₁² − 2c₂`.
pub fn whitney_sum_classes(
    form: &IntersectionForm,
    tau: &CohClass,
    nu: &CohClass,
) -> Result<BundleClasses> {
    let c = tau.add(nu)?;
    let c2 = form.pair(tau, nu)?;
    let p1 = form.square(&c)? - 2 * c2;
    Ok(BundleClasses {
        w2: c.mod2(),
        e: c2,
        p1,
        complex: Some(ComplexData { c1: c, c2 }),
    })
}

/// The `(m,n)`-surgery modification: `e += m+n`, `p₁ += 2m − 2n`, `w₂` unchanged.
///
/// The complex structure survives only a `(0,n)` modification, which is
/// `C`-linear; for `m ≠ 0` the Chern data is dropped.
pub fn modify(bundle: &BundleClasses, m: i64, n: i64) -> BundleClasses {
    let complex = match (&bundle.complex, m) {
        (Some(cx), 0) => Some(ComplexData {
            c1: cx.c1.clone(),
            c2: cx.c2 + n,
        }),
        _ => None,
    };
    BundleClasses {
        w2: bundle.w2.clone(),
        e: bundle.e + m + n,
        p1: bundle.p1 + 2 * m - 2 * n,
        complex,
    }
}

pub fn dold_whitney_equal(a: &BundleClasses, b: &BundleClasses) -> Result<bool> {
    if a.base_rank() != b.base_rank() {
        return Err(Error::DimensionMismatch {
            expected: a.base_rank(),
            found: b.base_rank(),
        });
    }
    Ok(a.w2 == b.w2 && a.e == b.e && a.p1 == b.p1)
}

/// `(w₂(M), χ(M), p₁(M))`.
pub fn tangent_classes(inv: &ManifoldInvariants) -> BundleClasses {
    BundleClasses {
        w2: inv.form.wu_class(),
        e: inv.euler_characteristic(),
        p1: inv.p1(),
        complex: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Modification {
    pub m: i64,
    pub n: i64,
}

/// The unique `(m, n)` with `(L_τ ⊕ L_ν)_{m,n} ≅ TM`:
///
/// `m = (p₁ + 2χ − c²)/4`, `n = (−p₁ + 2χ + c² − 4τν)/4`, `c = τ + ν`.
pub fn solve_modification(
    inv: &ManifoldInvariants,
    tau: &CohClass,
    nu: &CohClass,
) -> Result<Modification> {
    let form = &inv.form;
    let c = tau.add(nu)?;
    form.check(&c)?;
    if !form.is_characteristic(&c)? {
        return Err(Error::NotCharacteristic(c.to_string()));
    }
    let chi = inv.euler_characteristic();
    let p1 = inv.p1();
    let c2 = form.square(&c)?;
    let tn = form.pair(tau, nu)?;
    let num_m = p1 + 2 * chi - c2;
    let num_n = -p1 + 2 * chi + c2 - 4 * tn;
    let (m, rm) = num_m.div_rem(&4);
    let (n, rn) = num_n.div_rem(&4);
    if rm != 0 || rn != 0 {
        return Err(Error::Invariant(format!(
            "non-integral modification: m = {num_m}/4, n = {num_n}/4 for c = {c}"
        )));
    }
    let sum = whitney_sum_classes(form, tau, nu)?;
    let modified = modify(&sum, m, n);
    if !dold_whitney_equal(&modified, &tangent_classes(inv))? {
        return Err(Error::Invariant(format!(
            "(m,n) = ({m},{n}) does not reproduce the tangent bundle classes"
        )));
    }
    Ok(Modification { m, n })
}

/// Scalars admissible as quaternion components.
pub trait QuatScalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn is_unit_norm(norm_sq: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl QuatScalar for f64 {
    fn is_unit_norm(norm_sq: &Self) -> bool {
        (norm_sq.sqrt() - 1.0).abs() <= 1e-9
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl QuatScalar for BigRational {
    fn is_unit_norm(norm_sq: &Self) -> bool {
        norm_sq.is_one()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `w + x i + y j + z k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: QuatScalar> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn one() -> Self {
        Quaternion::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// The basis element `1, i, j, k` for `idx = 0..4`.
    pub fn basis(idx: usize) -> Self {
        let mut c = [T::zero(), T::zero(), T::zero(), T::zero()];
        c[idx] = T::one();
        let [w, x, y, z] = c;
        Quaternion::new(w, x, y, z)
    }

    pub fn components(&self) -> [T; 4] {
        [
            self.w.clone(),
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
        ]
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(
            self.w.clone(),
            -self.x.clone(),
            -self.y.clone(),
            -self.z.clone(),
        )
    }

    pub fn norm_sq(&self) -> T {
        self.w.clone() * self.w.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    pub fn is_unit(&self) -> bool {
        T::is_unit_norm(&self.norm_sq())
    }

    pub fn mul(&self, r: &Self) -> Self {
        let (a, b, c, d) = (&self.w, &self.x, &self.y, &self.z);
        let (e, f, g, h) = (&r.w, &r.x, &r.y, &r.z);
        Quaternion {
            w: a.clone() * e.clone()
                - b.clone() * f.clone()
                - c.clone() * g.clone()
                - d.clone() * h.clone(),
            x: a.clone() * f.clone() + b.clone() * e.clone() + c.clone() * h.clone()
                - d.clone() * g.clone(),
            y: a.clone() * g.clone() - b.clone() * h.clone()
                + c.clone() * e.clone()
                + d.clone() * f.clone(),
            z: a.clone() * h.clone() + b.clone() * g.clone() - c.clone() * f.clone()
                + d.clone() * e.clone(),
        }
    }

    /// `q^k` for a unit quaternion; negative powers use the conjugate as inverse.
    pub fn unit_pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.conj() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Quaternion::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(
            self.w.to_f64(),
            self.x.to_f64(),
            self.y.to_f64(),
            self.z.to_f64(),
        )
    }
}

/// Matrix of `h ↦ qᵐ h qⁿ` in the basis `(1, i, j, k)`; column `c` is the image of basis `c`.
pub fn xi<T: QuatScalar>(m: i64, n: i64, q: &Quaternion<T>) -> Result<[[T; 4]; 4]> {
    if !q.is_unit() {
        return Err(Error::Domain(format!(
            "xi needs a unit quaternion, |q|² = {}",
            q.norm_sq().to_f64()
        )));
    }
    let left = q.unit_pow(m);
    let right = q.unit_pow(n);
    let cols: Vec<[T; 4]> = (0..4)
        .map(|c| left.mul(&Quaternion::basis(c)).mul(&right).components())
        .collect();
    Ok(std::array::from_fn(|r| {
        std::array::from_fn(|c| cols[c][r].clone())
    }))
}

pub fn xi_matrix(m: i64, n: i64, q: &Quaternion<f64>) -> Result<Matrix4<f64>> {
    let a = xi(m, n, q)?;
    Ok(Matrix4::from_fn(|r, c| a[r][c]))
}

/// Left multiplication by a fixed quaternion, as a matrix in `(1, i, j, k)`.
pub fn left_mul_matrix(p: &Quaternion<f64>) -> Matrix4<f64> {
    let cols: Vec<[f64; 4]> = (0..4)
        .map(|c| p.mul(&Quaternion::basis(c)).components())
        .collect();
    Matrix4::from_fn(|r, c| cols[c][r])
}
