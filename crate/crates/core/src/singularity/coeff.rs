use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        GaussRat::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse; panics on zero, callers check first.
    pub fn inv(&self) -> GaussRat {
        assert!(!self.is_zero(), "inverse of zero");
        let n = &self.re * &self.re + &self.im * &self.im;
        GaussRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Nearest Gaussian rational with denominator `10^digits`.
    pub fn approx(z: Complex64, digits: u32) -> GaussRat {
        let scale = 10f64.powi(digits as i32);
        let den = BigInt::from(10).pow(digits);
        let q = |x: f64| BigRational::new(BigInt::from((x * scale).round() as i64), den.clone());
        GaussRat::new(q(z.re), q(z.im))
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::int(n)
    }
}

impl From<BigRational> for GaussRat {
    fn from(r: BigRational) -> Self {
        GaussRat::real(r)
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, r: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &r.re, &self.im + &r.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, r: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &r.re, &self.im - &r.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, r: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &r.re - &self.im * &r.im,
            &self.re * &r.im + &self.im * &r.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, r: GaussRat) -> GaussRat {
        &self + &r
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, r: GaussRat) -> GaussRat {
        &self - &r
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, r: GaussRat) -> GaussRat {
        &self * &r
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else {
                    write!(f, "{}*i", fmt_rat(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                let im = self.im.abs();
                if im.is_one() {
                    write!(f, "({}{}i)", fmt_rat(&self.re), sign)
                } else {
                    write!(f, "({}{}{}*i)", fmt_rat(&self.re), sign, fmt_rat(&im))
                }
            }
        }
    }
}
