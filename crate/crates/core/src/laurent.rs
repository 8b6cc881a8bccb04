//! Exact Laurent polynomials in `A` with integer coefficients.
//!
//! Polynomials in `q^{1/2}` are stored through `q = A⁴`, i.e. `q^{k/2}` is
//! the monomial `A^{2k}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Coeff = i128;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    // exponent of A -> coefficient, never zero
    terms: BTreeMap<i32, Coeff>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·A^k`.
    pub fn monomial(c: Coeff, k: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    /// `c·q^{half/2}` with `q = A⁴`.
    pub fn q_half_monomial(c: Coeff, half: i32) -> Self {
        Self::monomial(c, 2 * half)
    }

    /// The loop value `δ = −A² − A⁻²`.
    pub fn delta() -> Self {
        Self::from_terms([(2, -1), (-2, -1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Coeff)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i32, c: Coeff) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(k).or_insert(0);
        *slot = slot.checked_add(c).expect("Laurent coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i32) -> Coeff {
        self.terms.get(&k).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Coeff)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `max_exp − min_exp`, zero for the zero polynomial.
    pub fn span(&self) -> i32 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Multiply by `A^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// Substitute `A → A^m` (`m` may be negative).
    pub fn substitute_power(&self, m: i32) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k * m, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Horner evaluation at a complex point.
    pub fn evaluate(&self, a: Complex64) -> Complex64 {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Complex64::new(0.0, 0.0);
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (lo..=hi).rev() {
            acc = acc * a + Complex64::new(self.coeff(k) as f64, 0.0);
        }
        acc * a.powi(lo)
    }

    /// Exact division; fails unless `divisor` divides `self` in `ℤ[A, A⁻¹]`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (Some(dlo), Some(dhi)) = (divisor.min_exp(), divisor.max_exp()) else {
            return Err(Error::InexactDivision("division by zero polynomial".into()));
        };
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(rhi) = rem.max_exp() {
            // once the remainder is shorter than the divisor nothing divides
            if rem.span() < dhi - dlo {
                break;
            }
            let c = rem.coeff(rhi);
            if c % lead != 0 {
                return Err(Error::InexactDivision(format!(
                    "leading coefficient {c} not divisible by {lead}"
                )));
            }
            let step = LaurentPoly::monomial(c / lead, rhi - dhi);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InexactDivision(format!("({self}) / ({divisor}) leaves ({rem})")))
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ka, ca) in self.terms() {
            for (kb, cb) in rhs.terms() {
                out.add_term(ka + kb, ca.checked_mul(cb).expect("Laurent coefficient overflow"));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for LaurentPoly {
    /// Ascending `coeff*A^k` terms joined by `" + "`; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*A^{k}")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let bad = || Error::Config(format!("cannot parse Laurent polynomial {s:?}"));
        let mut p = LaurentPoly::zero();
        for term in s.split(" + ") {
            let (c, k) = term.trim().split_once("*A^").ok_or_else(bad)?;
            p.add_term(k.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
        }
        Ok(p)
    }
}

/// An unreduced quotient `num / den` of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalLaurent {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RationalLaurent {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        RationalLaurent { num, den }
    }

    pub fn evaluate(&self, a: Complex64) -> Result<Complex64> {
        let den = self.den.evaluate(a);
        if den.norm() < 1e-12 {
            return Err(Error::Pole { what: "denominator vanishes", at: a.arg() });
        }
        Ok(self.num.evaluate(a) / den)
    }
}
