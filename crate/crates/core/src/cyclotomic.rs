//! Exact arithmetic in the cyclotomic field Q(ζ), ζ a primitive n-th root of unity.
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(n)-1} reduced modulo the
//! n-th cyclotomic polynomial, as integer numerators over one positive common
//! denominator kept in lowest terms. That makes the representation canonical:
//! two values are equal iff their stored fields are equal.
//!
//! Throughout the crate n = 4r and ζ = exp(iπ/2r) is the Kauffman bracket
//! variable A.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduction tables for one root order.
pub struct CycField {
    order: u32,
    degree: usize,
    /// `reduce[k]` holds the power-basis coordinates of ζ^k for `k < order`.
    reduce: Vec<Vec<i64>>,
    units: Vec<u32>,
}

impl CycField {
    /// Returns the (process-wide, cached) tables for root order `order`.
    pub fn get(order: u32) -> &'static CycField {
        static CACHE: OnceLock<Mutex<HashMap<u32, &'static CycField>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("cyclotomic cache poisoned");
        guard
            .entry(order)
            .or_insert_with(|| Box::leak(Box::new(CycField::build(order))))
    }

    fn build(order: u32) -> CycField {
        assert!(order >= 1, "root order must be positive");
        let phi = cyclotomic_polynomial(order as usize);
        let degree = phi.len() - 1;
        let n = order as usize;
        let mut reduce = Vec::with_capacity(n);
        for k in 0..n {
            if k < degree {
                let mut row = vec![0i64; degree];
                row[k] = 1;
                reduce.push(row);
            } else {
                let prev: &Vec<i64> = &reduce[k - 1];
                // multiply by x, then eliminate x^degree using the monic relation
                let top = prev[degree - 1];
                let mut row = vec![0i64; degree];
                for j in (1..degree).rev() {
                    row[j] = prev[j - 1];
                }
                for (j, r) in row.iter_mut().enumerate() {
                    *r -= top * phi[j];
                }
                reduce.push(row);
            }
        }
        let units = (1..order).filter(|k| k.gcd(&order) == 1).collect();
        CycField {
            order,
            degree,
            reduce,
            units,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Euler totient of the order: the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Residues k with gcd(k, order) = 1, i.e. the Galois group.
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    /// Folds a coefficient vector indexed by powers 0..order into the power basis.
    fn fold(&self, buf: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = buf[..self.degree.min(buf.len())].to_vec();
        out.resize(self.degree, BigInt::zero());
        for (k, c) in buf.iter().enumerate().skip(self.degree) {
            if c.is_zero() {
                continue;
            }
            let row = &self.reduce[k % self.order as usize];
            for (o, &m) in out.iter_mut().zip(row) {
                if m != 0 {
                    *o += c * m;
                }
            }
        }
        out
    }
}

/// Coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd] / lead;
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// An exact element of Q(ζ_n).
#[derive(Clone)]
pub struct CycNumber {
    field: &'static CycField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    pub fn zero(order: u32) -> Self {
        let field = CycField::get(order);
        CycNumber {
            field,
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: u32, value: i64) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = BigInt::from(value);
        z
    }

    pub fn from_rational(order: u32, value: &BigRational) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = value.numer().clone();
        z.den = value.denom().clone();
        z.normalize();
        z
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let field = CycField::get(order);
        let idx = k.rem_euclid(order as i64) as usize;
        CycNumber {
            field,
            num: field.reduce[idx].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds a value from rational coordinates in the power basis. Extra
    /// coordinates beyond the field degree are reduced.
    pub fn from_coeffs(order: u32, coeffs: &[BigRational]) -> Self {
        let field = CycField::get(order);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let buf: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut out = CycNumber {
            field,
            num: field.fold(&buf),
            den,
        };
        out.normalize();
        out
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Rational coordinates in the power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Returns the value as a rational number if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.num {
                *n = -std::mem::take(n);
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            if !n.is_zero() {
                g = g.gcd(n);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.num {
                *n /= &g;
            }
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::LevelMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let l = self.den.lcm(&other.den);
            let fa = &l / &self.den;
            let fb = &l / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &fa, b * &fb);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, l)
        };
        let mut out = CycNumber {
            field: self.field,
            num,
            den,
        };
        out.normalize();
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.field.degree;
        let mut buf = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    buf[i + j] += a * b;
                }
            }
        }
        let mut out = CycNumber {
            field: self.field,
            num: self.field.fold(&buf),
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    /// Multiplies by ζ^k without general multiplication.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let n = self.field.order as i64;
        let shift = k.rem_euclid(n) as usize;
        let mut buf = vec![BigInt::zero(); self.field.order as usize];
        for (i, a) in self.num.iter().enumerate() {
            if !a.is_zero() {
                buf[(i + shift) % n as usize] += a;
            }
        }
        CycNumber {
            field: self.field,
            num: self.field.fold(&buf),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let mut out = CycNumber {
            field: self.field,
            num: self.num.iter().map(|n| n * factor.numer()).collect(),
            den: &self.den * factor.denom(),
        };
        out.normalize();
        out
    }

    /// The Galois automorphism ζ ↦ ζ^k, for k coprime to the order.
    pub fn galois(&self, k: u32) -> Self {
        let n = self.field.order as usize;
        debug_assert_eq!((k as usize).gcd(&n), 1);
        let mut buf = vec![BigInt::zero(); n];
        for (i, a) in self.num.iter().enumerate() {
            if !a.is_zero() {
                buf[(i * k as usize) % n] += a;
            }
        }
        CycNumber {
            field: self.field,
            num: self.field.fold(&buf),
            den: self.den.clone(),
        }
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conjugate(&self) -> Self {
        self.galois(self.field.order - 1)
    }

    /// Multiplicative inverse via the field norm: x · ∏_{σ≠1} σ(x) is rational.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cofactor = CycNumber::one(self.order());
        for &k in &self.field.units[1..] {
            cofactor = cofactor.mul_unchecked(&self.galois(k));
        }
        let norm = self
            .mul_unchecked(&cofactor)
            .as_rational()
            .expect("field norm must be rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = CycNumber::one(self.order());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        Ok(acc)
    }

    /// Evaluates the power basis at ζ = exp(2πi/n).
    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = BigRational::new(c.clone(), self.den.clone())
                .to_f64()
                .unwrap_or(f64::NAN);
            acc += Complex64::from_polar(v, 2.0 * PI * j as f64 / n);
        }
        acc
    }

    /// Coefficient strings ("p/q") for machine-readable output.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|c| c.to_string()).collect()
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNumber {}

impl Hash for CycNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[n={}]({})", self.field.order, self)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match j {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", abs)?;
                    }
                    if j == 1 {
                        write!(f, "ζ")?;
                    } else {
                        write!(f, "ζ^{}", j)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CycNumber", 3)?;
        s.serialize_field("order", &self.field.order)?;
        s.serialize_field("coeffs", &self.coeff_strings())?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                assert_eq!(
                    self.field.order, rhs.field.order,
                    "cyclotomic level mismatch"
                );
                $body(self, rhs)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNumber, b: &CycNumber| a
    .add_unchecked(b, false));
forward_binop!(Sub, sub, |a: &CycNumber, b: &CycNumber| a
    .add_unchecked(b, true));
forward_binop!(Mul, mul, |a: &CycNumber, b: &CycNumber| a.mul_unchecked(b));

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycNumber> for CycNumber {
    fn mul_assign(&mut self, rhs: &CycNumber) {
        *self = &*self * rhs;
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: self.field,
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}
