//! Exact arithmetic on intersection forms and second cohomology classes.
//!
//! Classes live in `H^2(M;Z)/torsion` expressed in a fixed basis; every cup
//! product is evaluated through the intersection matrix. Signatures are
//! obtained by congruence diagonalization over the rationals, never by
//! floating-point eigenvalues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of lattice points a bounded search may visit.
pub const DEFAULT_SEARCH_LIMIT: u128 = 50_000_000;

/// A class in `H^2(M;Z)/torsion`, as integer coordinates in the basis of the form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohClass(pub Vec<i64>);

impl CohClass {
    pub fn new(coords: Vec<i64>) -> Self {
        CohClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        CohClass(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        CohClass(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        check_len(self.rank(), other.rank())?;
        Ok(CohClass(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &CohClass) -> Result<CohClass> {
        check_len(self.rank(), other.rank())?;
        Ok(CohClass(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn neg(&self) -> CohClass {
        CohClass(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> CohClass {
        CohClass(self.0.iter().map(|a| k * a).collect())
    }

    /// Coordinates reduced into `{0, 1}`.
    pub fn mod2(&self) -> Vec<u8> {
        self.0.iter().map(|a| a.rem_euclid(2) as u8).collect()
    }

    /// Parses `"a1,a2,..."`. The literal `"0"` stands for the zero class of any rank.
    pub fn parse(s: &str, rank: usize) -> Result<CohClass> {
        let s = s.trim();
        if s == "0" {
            return Ok(CohClass::zero(rank));
        }
        let trimmed = s.trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return Ok(CohClass::zero(rank));
        }
        let coords = trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("class coordinate `{}`: {e}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        check_len(rank, coords.len())?;
        Ok(CohClass(coords))
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
    ZeroRank,
}

/// A symmetric unimodular integer matrix together with its derived invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
    rank: usize,
    signature: i64,
    b2_plus: usize,
    b2_minus: usize,
    parity: Parity,
    definiteness: Definiteness,
}

impl IntersectionForm {
    /// Validates symmetry and unimodularity, then derives the invariants.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let r = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidForm(format!(
                    "row {i} has length {}, expected {r}",
                    row.len()
                )));
            }
        }
        for i in 0..r {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidForm(format!(
                        "not symmetric at ({i},{j}): {} != {}",
                        matrix[i][j], matrix[j][i]
                    )));
                }
            }
        }
        if r > 0 {
            let det = determinant(&matrix);
            if det.abs() != BigInt::one() {
                return Err(Error::InvalidForm(format!("determinant {det} is not ±1")));
            }
        }
        let (pos, neg, zero) = inertia(&matrix);
        debug_assert_eq!(zero, 0);
        let parity = if (0..r).all(|i| matrix[i][i].is_even()) {
            Parity::Even
        } else {
            Parity::Odd
        };
        let definiteness = match (r, pos, neg) {
            (0, _, _) => Definiteness::ZeroRank,
            (_, _, 0) => Definiteness::Positive,
            (_, 0, _) => Definiteness::Negative,
            _ => Definiteness::Indefinite,
        };
        Ok(IntersectionForm {
            matrix,
            rank: r,
            signature: pos as i64 - neg as i64,
            b2_plus: pos,
            b2_minus: neg,
            parity,
            definiteness,
        })
    }

    pub fn empty() -> Self {
        IntersectionForm::new(Vec::new()).expect("empty form is valid")
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let r = entries.len();
        let mut m = vec![vec![0; r]; r];
        for (i, &d) in entries.iter().enumerate() {
            m[i][i] = d;
        }
        IntersectionForm::new(m)
    }

    pub fn hyperbolic() -> Self {
        IntersectionForm::new(vec![vec![0, 1], vec![1, 0]]).expect("H is unimodular")
    }

    /// Block sum, the form of a connected sum.
    pub fn block_sum(&self, other: &IntersectionForm) -> IntersectionForm {
        let r = self.rank + other.rank;
        let mut m = vec![vec![0; r]; r];
        for i in 0..self.rank {
            m[i][..self.rank].copy_from_slice(&self.matrix[i]);
        }
        for i in 0..other.rank {
            m[self.rank + i][self.rank..].copy_from_slice(&other.matrix[i]);
        }
        IntersectionForm::new(m).expect("block sum of unimodular forms is unimodular")
    }

    /// The form conjugated by a change of basis `P` (rows of `P` are the new basis vectors).
    pub fn change_basis(&self, p: &[Vec<i64>]) -> Result<IntersectionForm> {
        let r = self.rank;
        check_len(r, p.len())?;
        let mut m = vec![vec![0; r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut s = 0;
                for a in 0..r {
                    for b in 0..r {
                        s += p[i][a] * self.matrix[a][b] * p[j][b];
                    }
                }
                m[i][j] = s;
            }
        }
        IntersectionForm::new(m)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn signature(&self) -> i64 {
        self.signature
    }
    pub fn b2_plus(&self) -> usize {
        self.b2_plus
    }
    pub fn b2_minus(&self) -> usize {
        self.b2_minus
    }
    pub fn parity(&self) -> Parity {
        self.parity
    }
    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    /// Positive-definite in the wide sense used by the achiral obstruction: rank zero counts.
    pub fn is_positive_definite_or_empty(&self) -> bool {
        matches!(
            self.definiteness,
            Definiteness::Positive | Definiteness::ZeroRank
        )
    }

    pub fn check(&self, a: &CohClass) -> Result<()> {
        check_len(self.rank, a.rank())
    }

    /// `aᵀ Q b`.
    pub fn pair(&self, a: &CohClass, b: &CohClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        let mut s = 0i64;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            let row: i64 = (0..self.rank).map(|j| self.matrix[i][j] * b.0[j]).sum();
            s += a.0[i] * row;
        }
        Ok(s)
    }

    pub fn square(&self, a: &CohClass) -> Result<i64> {
        self.pair(a, a)
    }

    /// `c·α ≡ α·α (mod 2)` for every α; by linearity mod 2 it suffices to test basis vectors.
    pub fn is_characteristic(&self, c: &CohClass) -> Result<bool> {
        self.check(c)?;
        Ok((0..self.rank).all(|i| {
            let ce: i64 = (0..self.rank).map(|j| self.matrix[i][j] * c.0[j]).sum();
            (ce - self.matrix[i][i]).is_even()
        }))
    }

    /// The Wu class: the unique `w ∈ (Z/2)^r` with `Q w ≡ diag(Q) (mod 2)`.
    /// Every characteristic class reduces to it.
    pub fn wu_class(&self) -> Vec<u8> {
        let r = self.rank;
        // augmented system over GF(2)
        let mut a: Vec<Vec<u8>> = (0..r)
            .map(|i| {
                let mut row: Vec<u8> = self.matrix[i]
                    .iter()
                    .map(|x| x.rem_euclid(2) as u8)
                    .collect();
                row.push(self.matrix[i][i].rem_euclid(2) as u8);
                row
            })
            .collect();
        let mut row = 0;
        let mut pivots = Vec::with_capacity(r);
        for col in 0..r {
            let Some(p) = (row..r).find(|&i| a[i][col] == 1) else {
                continue;
            };
            a.swap(row, p);
            for i in 0..r {
                if i != row && a[i][col] == 1 {
                    for k in col..=r {
                        a[i][k] ^= a[row][k];
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        // Q is invertible mod 2 (det = ±1), so every column is a pivot.
        let mut w = vec![0u8; r];
        for (i, &col) in pivots.iter().enumerate() {
            w[col] = a[i][r];
        }
        w
    }

    /// Minimum of `c²` over characteristic `c` with `|c_i| ≤ bound`.
    pub fn min_characteristic_square(&self, bound: i64) -> Result<MinCharacteristicSquare> {
        if !self.is_positive_definite_or_empty() {
            return Err(Error::Domain(format!(
                "min_characteristic_square needs a positive-definite form, got {:?}",
                self.definiteness
            )));
        }
        let floor = self.rank as i64;
        if self.rank == 0 {
            return Ok(MinCharacteristicSquare {
                value: 0,
                witness: CohClass::zero(0),
                floor,
                bound,
            });
        }
        let cands = self.characteristic_box(bound, DEFAULT_SEARCH_LIMIT, |c| {
            self.is_characteristic(c).unwrap_or(false)
        })?;
        let best = cands
            .into_iter()
            .map(|c| (self.square(&c).expect("rank checked"), c))
            .min()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "no characteristic vector with |entries| <= {bound}"
                ))
            })?;
        Ok(MinCharacteristicSquare {
            value: best.0,
            witness: best.1,
            floor,
            bound,
        })
    }

    /// All classes `c ≡ w (mod 2)` with `|c_i| ≤ bound` satisfying `keep`, sorted.
    pub fn characteristic_box<F>(&self, bound: i64, limit: u128, keep: F) -> Result<Vec<CohClass>>
    where
        F: Fn(&CohClass) -> bool + Sync,
    {
        let wu = self.wu_class();
        let ranges: Vec<Vec<i64>> = wu
            .iter()
            .map(|&w| {
                (-bound..=bound)
                    .filter(|v| v.rem_euclid(2) as u8 == w)
                    .collect()
            })
            .collect();
        box_search(&ranges, limit, keep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinCharacteristicSquare {
    /// Smallest `c²` found inside the search box.
    pub value: i64,
    pub witness: CohClass,
    /// Analytic floor `b₂` for a diagonalizable positive-definite form.
    pub floor: i64,
    pub bound: i64,
}

/// Enumerates the product of `ranges`, keeping points accepted by `keep`.
/// Work is split over the first coordinate; the output is sorted so the result
/// does not depend on scheduling.
pub fn box_search<F>(ranges: &[Vec<i64>], limit: u128, keep: F) -> Result<Vec<CohClass>>
where
    F: Fn(&CohClass) -> bool + Sync,
{
    let size: u128 = ranges.iter().map(|r| r.len() as u128).product();
    if size > limit {
        return Err(Error::SearchTooLarge { size, limit });
    }
    if ranges.is_empty() {
        let c = CohClass(Vec::new());
        return Ok(if keep(&c) { vec![c] } else { Vec::new() });
    }
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(Vec::new());
    }
    let rest = &ranges[1..];
    let mut out: Vec<CohClass> = ranges[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut found = Vec::new();
            let mut idx = vec![0usize; rest.len()];
            let mut point = Vec::with_capacity(ranges.len());
            loop {
                point.clear();
                point.push(first);
                point.extend(idx.iter().zip(rest).map(|(&i, r)| r[i]));
                let c = CohClass(point.clone());
                if keep(&c) {
                    found.push(c);
                }
                // odometer
                let mut k = rest.len();
                loop {
                    if k == 0 {
                        return found;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < rest[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Box `[-bound, bound]^rank`.
pub fn full_box(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    vec![(-bound..=bound).collect(); rank]
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Counts of positive, negative and zero entries in a rational congruence diagonalization.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    let active = n;
    while k < active {
        // find a nonzero diagonal pivot among the remaining block
        if let Some(p) = (k..active).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, k, p);
        } else if let Some((i, j)) = (k..active)
            .flat_map(|i| (i + 1..active).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // e_i ← e_i + e_j makes the diagonal 2 a_ij ≠ 0
            add_sym(&mut a, i, j);
            swap_sym(&mut a, k, i);
        } else {
            // the remaining block is identically zero
            zero += active - k;
            break;
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..active {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..active {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            for j in k..active {
                a[j][i] = a[i][j].clone();
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let v = a[j][k].clone();
        a[i][k] += v;
    }
    for k in 0..n {
        let v = a[k][j].clone();
        a[k][i] += v;
    }
}

/// `b₁` plus an intersection form; everything else is derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldInvariants {
    pub name: String,
    pub b1: u32,
    pub form: IntersectionForm,
}

impl ManifoldInvariants {
    pub fn new(name: impl Into<String>, b1: u32, form: IntersectionForm) -> Self {
        ManifoldInvariants {
            name: name.into(),
            b1,
            form,
        }
    }

    pub fn b2(&self) -> i64 {
        self.form.rank() as i64
    }

    /// `χ = 2 − 2 b₁ + b₂`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2()
    }

    pub fn signature(&self) -> i64 {
        self.form.signature()
    }

    /// `p₁ = 3σ`.
    pub fn p1(&self) -> i64 {
        3 * self.signature()
    }

    /// Connected sum: `b₁` adds and the forms are block-summed.
    pub fn connected_sum(&self, other: &ManifoldInvariants) -> ManifoldInvariants {
        ManifoldInvariants {
            name: format!("{}#{}", self.name, other.name),
            b1: self.b1 + other.b1,
            form: self.form.block_sum(&other.form),
        }
    }
}
