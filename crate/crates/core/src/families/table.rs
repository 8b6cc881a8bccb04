//! The individual knots with known Jones polynomials and the framing
//! factors relating them to braid amplitudes.

use num_complex::Complex64;

use super::{jones_torus, torus_word, twist_word, FamilySpec};
use crate::braid::{BraidWord, Params};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TabulatedKnot {
    Hopf,
    Trefoil,
    FigureEight,
    K5_2,
    K6_1,
    K7_2,
    K8_1,
    K7_3,
    K9_3,
    /// The (2,n) torus knot or link.
    Torus(i64),
}

/// Jones polynomials as `(power of q, coefficient)`, mirror-image
/// convention `q → 1/q` relative to the usual knot tables.
const JONES_4_1: &[(i32, i128)] = &[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)];
const JONES_5_2: &[(i32, i128)] = &[(-6, -1), (-5, 1), (-4, -1), (-3, 2), (-2, -1), (-1, 1)];
const JONES_6_1: &[(i32, i128)] = &[(2, 1), (1, -1), (0, 2), (-1, -2), (-2, 1), (-3, -1), (-4, 1)];
const JONES_7_2: &[(i32, i128)] =
    &[(-1, 1), (-2, -1), (-3, 2), (-4, -2), (-5, 2), (-6, -1), (-7, 1), (-8, -1)];
const JONES_8_1: &[(i32, i128)] =
    &[(3, 1), (2, -1), (1, 2), (0, -2), (-1, 2), (-2, -2), (-3, 1), (-4, -1), (-5, 1)];
const JONES_7_3: &[(i32, i128)] = &[(2, 1), (3, -1), (4, 2), (5, -2), (6, 3), (7, -2), (8, 1), (9, -1)];
const JONES_9_3: &[(i32, i128)] =
    &[(3, 1), (4, -1), (5, 2), (6, -2), (7, 3), (8, -3), (9, 3), (10, -2), (11, 1), (12, -1)];

fn from_q_powers(terms: &[(i32, i128)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (4 * k, c)))
}

impl TabulatedKnot {
    pub const NAMED: [TabulatedKnot; 9] = [
        TabulatedKnot::Hopf,
        TabulatedKnot::Trefoil,
        TabulatedKnot::FigureEight,
        TabulatedKnot::K5_2,
        TabulatedKnot::K6_1,
        TabulatedKnot::K7_2,
        TabulatedKnot::K8_1,
        TabulatedKnot::K7_3,
        TabulatedKnot::K9_3,
    ];

    pub fn name(&self) -> String {
        match self {
            TabulatedKnot::Hopf => "2^2_1".into(),
            TabulatedKnot::Trefoil => "3_1".into(),
            TabulatedKnot::FigureEight => "4_1".into(),
            TabulatedKnot::K5_2 => "5_2".into(),
            TabulatedKnot::K6_1 => "6_1".into(),
            TabulatedKnot::K7_2 => "7_2".into(),
            TabulatedKnot::K8_1 => "8_1".into(),
            TabulatedKnot::K7_3 => "7_3".into(),
            TabulatedKnot::K9_3 => "9_3".into(),
            TabulatedKnot::Torus(n) => format!("T(2,{n})"),
        }
    }

    pub fn word(&self) -> BraidWord {
        match *self {
            TabulatedKnot::Hopf => torus_word(2),
            TabulatedKnot::Trefoil => torus_word(3),
            TabulatedKnot::FigureEight => twist_word(2, 1, 1),
            TabulatedKnot::K5_2 => twist_word(2, 2, 1),
            TabulatedKnot::K6_1 => twist_word(2, 3, 1),
            TabulatedKnot::K7_2 => twist_word(2, 4, 1),
            TabulatedKnot::K8_1 => twist_word(2, 5, 1),
            TabulatedKnot::K7_3 => twist_word(1, 3, 3),
            TabulatedKnot::K9_3 => twist_word(1, 5, 3),
            TabulatedKnot::Torus(n) => torus_word(n),
        }
    }

    /// Jones polynomial in `A` with `q = A⁴`.
    pub fn jones(&self) -> Result<LaurentPoly> {
        Ok(match *self {
            TabulatedKnot::Hopf => jones_torus(2)?,
            TabulatedKnot::Trefoil => jones_torus(3)?,
            TabulatedKnot::Torus(n) => jones_torus(n)?,
            TabulatedKnot::FigureEight => from_q_powers(JONES_4_1),
            TabulatedKnot::K5_2 => from_q_powers(JONES_5_2),
            TabulatedKnot::K6_1 => from_q_powers(JONES_6_1),
            TabulatedKnot::K7_2 => from_q_powers(JONES_7_2),
            TabulatedKnot::K8_1 => from_q_powers(JONES_8_1),
            TabulatedKnot::K7_3 => from_q_powers(JONES_7_3),
            TabulatedKnot::K9_3 => from_q_powers(JONES_9_3),
        })
    }
}

impl TryFrom<&FamilySpec> for TabulatedKnot {
    type Error = Error;

    fn try_from(spec: &FamilySpec) -> Result<Self> {
        match *spec {
            FamilySpec::Torus { n } => Ok(TabulatedKnot::Torus(n)),
            FamilySpec::Twist { l: 2, n, m: 1 } if (1..=5).contains(&n) => Ok(TabulatedKnot::NAMED[n as usize + 1]),
            FamilySpec::Twist { l: 1, n: 3, m: 3 } => Ok(TabulatedKnot::K7_3),
            FamilySpec::Twist { l: 1, n: 5, m: 3 } => Ok(TabulatedKnot::K9_3),
            _ => Err(Error::UnsupportedFamily(format!("{spec:?} has no tabulated Jones polynomial"))),
        }
    }
}

/// Factor `f` with `|⟨↑|B|↑⟩| = |Jones / f|`; always a unit phase times `d`.
///
/// For 8₁ the amplitude is related to Jones(8₁) (not Jones(7₂)).
pub fn framing_factor(knot: TabulatedKnot, a: Complex64) -> Complex64 {
    let d = -(a * a) - (a * a).inv();
    let neg_a3 = -a.powi(3);
    let neg_a3_inv = -a.powi(-3);
    let phase = match knot {
        TabulatedKnot::Hopf => a.powi(-6),
        TabulatedKnot::Trefoil => neg_a3_inv.powi(3),
        TabulatedKnot::FigureEight => neg_a3.powi(2),
        TabulatedKnot::K5_2 => neg_a3_inv.powi(5),
        TabulatedKnot::K6_1 => -neg_a3_inv.powi(2),
        TabulatedKnot::K7_2 => neg_a3_inv.powi(7),
        TabulatedKnot::K8_1 => -neg_a3_inv.powi(4),
        TabulatedKnot::K7_3 => neg_a3.powi(7),
        TabulatedKnot::K9_3 => neg_a3.powi(9),
        TabulatedKnot::Torus(n) => (-a).powi(i32::try_from(3 * n).expect("n out of range")),
    };
    phase * d
}

/// `|Jones(A⁴)| / |d|`, which should equal `|⟨↑|B|↑⟩|`.
pub fn jones_magnitude_over_d(knot: TabulatedKnot, theta: f64) -> Result<f64> {
    let p = Params::new(theta);
    Ok(knot.jones()?.evaluate(p.a).norm() / p.d.abs())
}
