//! The 2×2 braid representation of B₃ and evaluation of braid words.
//!
//! States are indexed `0 ≙ |↑⟩`, `1 ≙ |↓⟩`. The phase `θ` fixes
//! `A = e^{iθ}` and the loop value `d = −A² − A⁻² = −2cos2θ`.
//!
//! Generator 1 braids strands 1 and 2 and is represented by the
//! non-diagonal matrix `R₂`; generator 2 braids strands 2 and 3 and is
//! represented by the diagonal `R₁`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `|d|` at which `R₂` and `F` are still evaluated.
pub const POLE_GUARD: f64 = 1e-9;

/// Slack used when testing membership of the closed unitarity intervals.
const DOMAIN_SLACK: f64 = 1e-12;

/// Closed θ-intervals (mod 2π) on which `R₁`, `R₂` are unitary.
pub const UNITARY_INTERVALS: [(f64, f64); 5] = [
    (0.0, PI / 6.0),
    (PI / 3.0, 2.0 * PI / 3.0),
    (5.0 * PI / 6.0, 7.0 * PI / 6.0),
    (4.0 * PI / 3.0, 5.0 * PI / 3.0),
    (11.0 * PI / 6.0, 2.0 * PI),
];

pub fn in_unitary_domain(theta: f64) -> bool {
    let t = theta.rem_euclid(2.0 * PI);
    UNITARY_INTERVALS
        .iter()
        .any(|&(lo, hi)| t >= lo - DOMAIN_SLACK && t <= hi + DOMAIN_SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub theta: f64,
    pub a: Complex64,
    pub d: f64,
    pub unitary: bool,
}

impl Params {
    pub fn new(theta: f64) -> Self {
        Params {
            theta,
            a: Complex64::from_polar(1.0, theta),
            d: -2.0 * (2.0 * theta).cos(),
            unitary: in_unitary_domain(theta),
        }
    }

    pub fn near_pole(&self, eps: f64) -> bool {
        self.d.abs() <= eps
    }

    fn guard(&self, what: &'static str) -> Result<()> {
        if self.near_pole(POLE_GUARD) {
            Err(Error::Pole { what, at: self.theta })
        } else {
            Ok(())
        }
    }
}

pub fn make_params(theta: f64) -> Params {
    Params::new(theta)
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Matrix2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Matrix2([[a, z], [z, d]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn add(&self, other: &Matrix2) -> Self {
        let (m, o) = (&self.0, &other.0);
        Matrix2([
            [m[0][0] + o[0][0], m[0][1] + o[0][1]],
            [m[1][0] + o[1][0], m[1][1] + o[1][1]],
        ])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Matrix2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let m = &self.0;
        let inv = det.inv();
        Some(Matrix2([
            [m[1][1] * inv, -m[0][1] * inv],
            [-m[1][0] * inv, m[0][0] * inv],
        ]))
    }

    /// Integer power; negative exponents use the true inverse.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let mut base = if exp < 0 { self.inverse()? } else { *self };
        let mut e = exp.unsigned_abs();
        let mut acc = Matrix2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Some(acc)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Matrix2::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Principal `√(1 − d⁻²)`, the off-diagonal entry of `U₂`.
fn off_diagonal(d: f64) -> Complex64 {
    real(1.0 - 1.0 / (d * d)).sqrt()
}

/// Temperley-Lieb generator on strands 2–3: `diag(d, 0)`.
pub fn tl_u1(p: &Params) -> Matrix2 {
    Matrix2::diag(real(p.d), real(0.0))
}

/// Temperley-Lieb generator on strands 1–2.
pub fn tl_u2(p: &Params) -> Result<Matrix2> {
    p.guard("U2 contains 1/d")?;
    let d = p.d;
    let s = off_diagonal(d);
    Ok(Matrix2::new(real(1.0 / d), s, s, real(d - 1.0 / d)))
}

/// `R₁ = A·I + A⁻¹·U₁ = diag(−A⁻³, A)`.
pub fn r1(p: &Params) -> Matrix2 {
    Matrix2::identity().scale(p.a).add(&tl_u1(p).scale(p.a.inv()))
}

/// `R₂ = A·I + A⁻¹·U₂`.
pub fn r2(p: &Params) -> Result<Matrix2> {
    Ok(Matrix2::identity().scale(p.a).add(&tl_u2(p)?.scale(p.a.inv())))
}

/// Basis change with `R₂ = F R₁ F⁻¹`.
///
/// The root `√(d² − 1)` is taken as `d·√(1 − d⁻²)` so that the branch
/// agrees with the one used in `U₂`; for `d > 0` this is the principal
/// root, for `d < 0` it is its negative.
pub fn f_matrix(p: &Params) -> Result<Matrix2> {
    p.guard("F contains 1/d")?;
    let d = p.d;
    let c = real(1.0 / d);
    let s = off_diagonal(d);
    Ok(Matrix2::new(c, -s, s, c))
}

/// Braid generator. `B1` braids strands 1–2 (matrix `R₂`), `B2` braids
/// strands 2–3 (matrix `R₁`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    B1,
    B2,
}

impl Generator {
    pub fn index(self) -> u8 {
        match self {
            Generator::B1 => 1,
            Generator::B2 => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Generator::B1),
            2 => Ok(Generator::B2),
            other => Err(Error::InvalidWord(format!("generator {other} is not 1 or 2"))),
        }
    }

    pub fn matrix(self, p: &Params) -> Result<Matrix2> {
        match self {
            Generator::B1 => r2(p),
            Generator::B2 => Ok(r1(p)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i64,
}

/// A braid word. The last-listed letter acts first on `|↑⟩`, so the word
/// `[(1, l), (2, −n), (1, m)]` is the operator `R₂ˡ R₁⁻ⁿ R₂ᵐ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BraidWord {
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from `(generator, exponent)` pairs.
    pub fn new<I>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u8, i64)>,
    {
        let letters = letters
            .into_iter()
            .map(|(g, e)| {
                if e == 0 {
                    return Err(Error::InvalidWord("zero exponent".into()));
                }
                Ok(Letter { generator: Generator::from_index(g)?, exponent: e })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BraidWord { letters })
    }

    /// Like [`BraidWord::new`] but silently drops zero exponents.
    pub(crate) fn from_powers<I>(letters: I) -> Self
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        BraidWord {
            letters: letters
                .into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|(generator, exponent)| Letter { generator, exponent })
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of crossings, `Σ|exponent|`.
    pub fn crossing_count(&self) -> usize {
        self.letters.iter().map(|l| l.exponent.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { generator: l.generator, exponent: -l.exponent })
                .collect(),
        }
    }

    /// `self · other`; `other` acts first.
    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}^{}", l.generator.index(), l.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Parses `"1^3,2^-2,1"`; a bare generator means exponent 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (g, e) = match tok.split_once('^') {
                Some((g, e)) => (g.trim(), e.trim()),
                None => (tok, "1"),
            };
            let g: u8 = g
                .parse()
                .map_err(|_| Error::InvalidWord(format!("bad generator in {tok:?}")))?;
            let e: i64 = e
                .parse()
                .map_err(|_| Error::InvalidWord(format!("bad exponent in {tok:?}")))?;
            pairs.push((g, e));
        }
        BraidWord::new(pairs)
    }
}

impl TryFrom<String> for BraidWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BraidWord> for String {
    fn from(w: BraidWord) -> String {
        w.to_string()
    }
}

/// Operator of the word: product of per-letter powers, first-acting
/// letter rightmost.
pub fn eval_braid(word: &BraidWord, p: &Params) -> Result<Matrix2> {
    let mut acc = Matrix2::identity();
    if word.is_empty() {
        return Ok(acc);
    }
    let m_r2 = r2(p)?;
    let m_r1 = r1(p);
    for l in word.letters() {
        let base = match l.generator {
            Generator::B1 => m_r2,
            Generator::B2 => m_r1,
        };
        let power = base
            .pow(l.exponent)
            .ok_or(Error::Pole { what: "singular generator matrix", at: p.theta })?;
        acc = acc * power;
    }
    Ok(acc)
}

/// `⟨↑|B|↑⟩`.
pub fn amplitude(word: &BraidWord, p: &Params) -> Result<Complex64> {
    Ok(eval_braid(word, p)?.entry(0, 0))
}

/// `|⟨↑|B|↑⟩|²`. Values above one only occur outside the unitary domain.
pub fn transmission(word: &BraidWord, p: &Params) -> Result<f64> {
    Ok(amplitude(word, p)?.norm_sqr())
}
