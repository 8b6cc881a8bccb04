//! Braid words and closed-form transmission for the torus (2,n), twist,
//! double-braid, chain and pretzel families.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braid::{self, BraidWord, Generator, Params, POLE_GUARD};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub mod pretzel;
pub mod table;

pub use pretzel::{jones_pretzel, pretzel_transmission, quantum_integer, quantum_integer_at_root, Normalization};
pub use table::{framing_factor, TabulatedKnot};

/// `(−1)^n`.
pub(crate) fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn ipow(a: Complex64, k: i64) -> Complex64 {
    a.powi(i32::try_from(k).expect("exponent out of range"))
}

fn guard_cos2(theta: f64, what: &'static str) -> Result<f64> {
    let c = (2.0 * theta).cos();
    if c.abs() <= POLE_GUARD {
        Err(Error::Pole { what, at: theta })
    } else {
        Ok(c)
    }
}

fn guard_complex(den: Complex64, a: Complex64, what: &'static str) -> Result<()> {
    if den.norm() <= POLE_GUARD {
        Err(Error::Pole { what, at: a.arg() })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `R₂ⁿ`, the (2,n) torus knots and links.
    Torus { n: i64 },
    /// `R₂ˡ R₁⁻ⁿ R₂ᵐ`.
    Twist { l: i64, n: i64, m: i64 },
    /// `R₂^{m_N} R₁^{n_{N−1}} ⋯ R₁^{n_1} R₂^{m_1}`; `links.len() == blocks.len() − 1`.
    Chain { blocks: Vec<i64>, links: Vec<i64> },
    /// Channel windings `n₀ … n_g`.
    Pretzel { ns: Vec<i64> },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Chain { blocks, links } => chain_word(blocks, links).map(|_| ()),
            FamilySpec::Pretzel { ns } if ns.is_empty() => {
                Err(Error::UnsupportedFamily("pretzel needs at least one channel".into()))
            }
            _ => Ok(()),
        }
    }

    /// Braid word of the family member. Pretzel knots have no word in the
    /// three-strand representation.
    pub fn word(&self) -> Result<BraidWord> {
        match self {
            FamilySpec::Torus { n } => Ok(torus_word(*n)),
            FamilySpec::Twist { l, n, m } => Ok(twist_word(*l, *n, *m)),
            FamilySpec::Chain { blocks, links } => chain_word(blocks, links),
            FamilySpec::Pretzel { .. } => {
                Err(Error::UnsupportedFamily("pretzel knots are evaluated in closed form".into()))
            }
        }
    }
}

pub fn torus_word(n: i64) -> BraidWord {
    BraidWord::from_powers([(Generator::B1, n)])
}

/// Word for `R₂ˡ R₁⁻ⁿ R₂ᵐ` (the `R₂ᵐ` block acts first).
pub fn twist_word(l: i64, n: i64, m: i64) -> BraidWord {
    BraidWord::from_powers([(Generator::B1, l), (Generator::B2, -n), (Generator::B1, m)])
}

/// Chain of `R₂^{m_k}` blocks joined by `R₁^{n_j}`; `blocks[0]` acts first.
pub fn chain_word(blocks: &[i64], links: &[i64]) -> Result<BraidWord> {
    if blocks.is_empty() {
        return Err(Error::InvalidWord("chain needs at least one block".into()));
    }
    if links.len() + 1 != blocks.len() {
        return Err(Error::InvalidWord(format!(
            "{} blocks need {} links, got {}",
            blocks.len(),
            blocks.len() - 1,
            links.len()
        )));
    }
    let mut powers = Vec::with_capacity(2 * blocks.len());
    powers.push((Generator::B1, blocks[0]));
    for (m, n) in blocks[1..].iter().zip(links) {
        powers.push((Generator::B2, *n));
        powers.push((Generator::B1, *m));
    }
    powers.reverse();
    Ok(BraidWord::from_powers(powers))
}

/// `count` copies of `R₂ᵐ` joined by `R₁ⁿ`.
pub fn uniform_chain(m: i64, n: i64, count: usize) -> Result<BraidWord> {
    chain_word(&vec![m; count], &vec![n; count.saturating_sub(1)])
}

pub fn torus_transmission_closed(n: i64, theta: f64) -> Result<f64> {
    let c2 = guard_cos2(theta, "sec 2θ")?;
    let g = 1.0 + 2.0 * (4.0 * theta).cos();
    let osc = 2.0 * (4.0 * n as f64 * theta).cos();
    Ok((1.0 + g * g + parity_sign(n) * g * osc) / (16.0 * c2.powi(4)))
}

/// `Jones(2,n)` as an exact polynomial in `A` (`q = A⁴`).
pub fn jones_torus(n: i64) -> Result<LaurentPoly> {
    let n32 = i32::try_from(n).map_err(|_| Error::UnsupportedFamily(format!("n = {n} too large")))?;
    let inner = LaurentPoly::from_terms([
        (4 * (1 - n32), parity_sign(n) as i128),
        (0, 1),
        (4, 1),
        (8, 1),
    ]);
    let one_plus_q = LaurentPoly::from_terms([(0, 1), (4, 1)]);
    let quotient = inner.div_exact(&one_plus_q)?;
    let prefactor = LaurentPoly::monomial(-parity_sign(n) as i128, -2 * (n32 + 1));
    Ok(&prefactor * &quotient)
}

pub fn torus_amplitude_closed(n: i64, a: Complex64) -> Result<Complex64> {
    let a4 = a.powi(4);
    let den = ipow(a, 3 * n) * (1.0 + a4) * (1.0 + a4);
    guard_complex(den, a, "(1 + A⁴)²")?;
    let num = a4 * parity_sign(n) + ipow(a, 4 * n) * (1.0 + a4 + a4 * a4);
    Ok(num / den)
}

/// `|⟨↑|R₂² R₁⁻ⁿ R₂|↑⟩|²`.
pub fn twist_transmission_closed(n: i64, theta: f64) -> Result<f64> {
    let c2 = guard_cos2(theta, "sec 2θ")?;
    let nf = n as f64;
    let cos = |k: f64| (k * theta).cos();
    let osc = cos(4.0 * (nf - 1.0)) + cos(4.0 * (nf + 1.0)) - cos(4.0 * (nf + 2.0)) - cos(4.0 * (nf + 4.0));
    Ok((2.0 + cos(8.0) - cos(12.0) + parity_sign(n) * osc) / (8.0 * c2.powi(4)))
}

/// Closed form for `⟨↑|R₂ R₁⁻ⁿ R₂ᵐ|↑⟩`. It agrees with the matrix
/// amplitude up to the unit phase `A^{−6n}`.
pub fn double_braid_amplitude_closed(n: i64, m: i64, a: Complex64) -> Result<Complex64> {
    let a4 = a.powi(4);
    let p = 1.0 + a4;
    let den = ipow(a, 3 * n) * p * p * p;
    guard_complex(den, a, "(1 + A⁴)³")?;
    let head = ipow(a, 1 + m - 4 * n) - ipow(a, 1 - 3 * m - 4 * n) * parity_sign(m)
        + ipow(a, 5 + m) * parity_sign(n);
    let num = head * (1.0 + a4 + a4 * a4) + ipow(a, 9 - 3 * m) * parity_sign(n + m);
    Ok(num / den)
}

/// Lower envelope `cos²4θ / (4cos⁴2θ)` of the torus family.
pub fn envelope_torus(theta: f64) -> Result<f64> {
    let c2 = guard_cos2(theta, "sec 2θ")?;
    Ok((4.0 * theta).cos().powi(2) / (4.0 * c2.powi(4)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalPoint {
    pub theta: f64,
    pub value: f64,
}

/// Phase at which every member of the `R₂ R₁⁻ⁿ R₂ᵐ` family has the same
/// transmission (`m = 2` is the twist family).
pub fn universal_point(m: i64) -> Result<UniversalPoint> {
    let (theta, value) = match m {
        2 | 4 => (PI / 8.0, 0.5),
        3 => (PI / 12.0, 1.0 / 3.0),
        5 => {
            let r5 = 5f64.sqrt();
            (PI / 20.0, (3.0 + r5) / (10.0 + 4.0 * r5))
        }
        _ => return Err(Error::UnsupportedFamily(format!("no tabulated universal point for m = {m}"))),
    };
    Ok(UniversalPoint { theta, value })
}

/// Transmission of a family member at `theta` (matrix route for braid
/// families, closed form for pretzels).
pub fn family_transmission(spec: &FamilySpec, theta: f64, norm: Normalization) -> Result<f64> {
    match spec {
        FamilySpec::Pretzel { ns } => pretzel_transmission(ns, theta, norm),
        other => braid::transmission(&other.word()?, &Params::new(theta)),
    }
}
