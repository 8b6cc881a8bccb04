//! Symbolic Kauffman-bracket evaluation of the plat closure of a braid word.
//!
//! Works with planar matchings of four bottom and four top points (the
//! Temperley-Lieb algebra TL₄). Every crossing is resolved by the skein
//! rule `σ = A·id + A⁻¹·U`, `σ⁻¹ = A⁻¹·id + A·U`, and every closed loop
//! contributes `δ = −A² − A⁻²`. Nothing here touches the 2×2 matrices of
//! [`crate::braid`], so agreement between the two is a real cross-check.
//!
//! The closure caps boundary points (2,3) and (1,4) at both the top and
//! the bottom. Generator 1 acts on strands (1,2), generator 2 on (2,3).

use std::collections::BTreeMap;

use crate::braid::{BraidWord, Generator};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalLaurent};

pub const STRANDS: usize = 4;

/// Crossing budget of [`plat_bracket`]. Each crossing at most doubles the
/// coefficient mass and adds one loop (another doubling), so coefficients
/// stay below `2^{2c+3}`, inside `i128` for `c ≤ 61`.
pub const MAX_CROSSINGS: usize = 60;

/// Crossing budget of the brute-force [`state_sum_bracket`].
pub const MAX_STATE_SUM_CROSSINGS: usize = 24;

/// Cap pairing used by the closure, 0-based: (1,2) and (0,3).
const CLOSURE_CAPS: [usize; STRANDS] = [3, 2, 1, 0];

/// Adjacent strand pair acted on by a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrandPair {
    /// strands 1 and 2
    First,
    /// strands 2 and 3
    Second,
}

impl StrandPair {
    fn left(self) -> usize {
        match self {
            StrandPair::First => 0,
            StrandPair::Second => 1,
        }
    }
}

impl From<Generator> for StrandPair {
    fn from(g: Generator) -> Self {
        match g {
            Generator::B1 => StrandPair::First,
            Generator::B2 => StrandPair::Second,
        }
    }
}

/// A planar perfect matching of 4 bottom points (`0..4`) and 4 top points
/// (`4..8`), stored as a partner table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    partner: [u8; 2 * STRANDS],
}

impl TLDiagram {
    pub fn identity() -> Self {
        let mut partner = [0u8; 2 * STRANDS];
        for i in 0..STRANDS {
            partner[i] = (i + STRANDS) as u8;
            partner[i + STRANDS] = i as u8;
        }
        TLDiagram { partner }
    }

    /// Cup-cap on the given adjacent pair, straight strands elsewhere.
    pub fn cup_cap(pair: StrandPair) -> Self {
        let mut d = Self::identity();
        let i = pair.left();
        let (b0, b1, t0, t1) = (i, i + 1, i + STRANDS, i + 1 + STRANDS);
        d.link(b0, b1);
        d.link(t0, t1);
        d
    }

    fn link(&mut self, a: usize, b: usize) {
        self.partner[a] = b as u8;
        self.partner[b] = a as u8;
    }

    pub fn partner(&self, point: usize) -> usize {
        self.partner[point] as usize
    }

    /// True when no two arcs cross.
    pub fn is_planar(&self) -> bool {
        // walk the boundary circle: bottom 0..4 left to right, then top right to left
        let order: Vec<usize> = (0..STRANDS).chain((STRANDS..2 * STRANDS).rev()).collect();
        let mut pos = [0usize; 2 * STRANDS];
        for (k, &p) in order.iter().enumerate() {
            pos[p] = k;
        }
        let arcs: Vec<(usize, usize)> = (0..2 * STRANDS)
            .filter(|&p| p < self.partner(p))
            .map(|p| {
                let (a, b) = (pos[p], pos[self.partner(p)]);
                (a.min(b), a.max(b))
            })
            .collect();
        arcs.iter().all(|&(a, b)| {
            arcs.iter().all(|&(c, d)| !(a < c && c < b && b < d))
        })
    }

    /// Stack `self` on top of `lower`. Returns the product diagram and the
    /// number of closed loops created in the middle.
    pub fn compose(&self, lower: &TLDiagram) -> (TLDiagram, usize) {
        let mut out = [0u8; 2 * STRANDS];
        let mut seen_mid = [false; STRANDS];

        // follow an arc starting at an outer point until it exits again
        let trace = |start_lower: bool, start: usize, seen_mid: &mut [bool; STRANDS]| -> usize {
            let (mut in_lower, mut p) = (start_lower, start);
            loop {
                let q = if in_lower { lower.partner(p) } else { self.partner(p) };
                let exits = if in_lower { q < STRANDS } else { q >= STRANDS };
                if exits {
                    return q;
                }
                let mid = q % STRANDS;
                seen_mid[mid] = true;
                // cross the seam
                p = if in_lower { mid } else { mid + STRANDS };
                in_lower = !in_lower;
            }
        };

        for b in 0..STRANDS {
            let end = trace(true, b, &mut seen_mid);
            out[b] = end as u8;
        }
        for t in STRANDS..2 * STRANDS {
            let end = trace(false, t, &mut seen_mid);
            out[t] = end as u8;
        }

        let mut loops = 0;
        for m in 0..STRANDS {
            if seen_mid[m] {
                continue;
            }
            loops += 1;
            // alternate: lower's top side, then upper's bottom side
            let mut cur = m;
            loop {
                seen_mid[cur] = true;
                let a = lower.partner(cur + STRANDS) - STRANDS;
                seen_mid[a] = true;
                let b = self.partner(a);
                if b == m {
                    break;
                }
                cur = b;
            }
        }
        (TLDiagram { partner: out }, loops)
    }

    /// Number of loops after capping top and bottom with `(2,3)`, `(1,4)`.
    pub fn closure_loops(&self) -> usize {
        let cap = |p: usize| -> usize {
            if p < STRANDS {
                CLOSURE_CAPS[p]
            } else {
                CLOSURE_CAPS[p - STRANDS] + STRANDS
            }
        };
        let mut seen = [false; 2 * STRANDS];
        let mut loops = 0;
        for start in 0..2 * STRANDS {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            loop {
                seen[p] = true;
                let q = self.partner(p);
                seen[q] = true;
                p = cap(q);
                if p == start {
                    break;
                }
            }
        }
        loops
    }
}

/// A formal `LaurentPoly`-linear combination of diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TLElement {
    terms: BTreeMap<TLDiagram, LaurentPoly>,
}

impl TLElement {
    pub fn identity() -> Self {
        let mut e = Self::default();
        e.add(TLDiagram::identity(), LaurentPoly::one());
        e
    }

    pub fn add(&mut self, d: TLDiagram, w: LaurentPoly) {
        let slot = self.terms.entry(d).or_default();
        *slot = &*slot + &w;
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self · lower` (`lower` drawn underneath).
    pub fn compose(&self, lower: &TLElement) -> TLElement {
        let delta = LaurentPoly::delta();
        let mut out = TLElement::default();
        for (du, wu) in &self.terms {
            for (dl, wl) in &lower.terms {
                let (d, loops) = du.compose(dl);
                let w = &(wu * wl) * &delta.pow(loops as u32);
                out.add(d, w);
            }
        }
        out
    }

    /// Plat-closure value `Σ w·δ^{loops}`.
    pub fn close(&self) -> LaurentPoly {
        let delta = LaurentPoly::delta();
        self.terms.iter().fold(LaurentPoly::zero(), |acc, (d, w)| {
            &acc + &(w * &delta.pow(d.closure_loops() as u32))
        })
    }
}

/// Skein expansion of one crossing.
pub fn resolve_crossing(pair: StrandPair, sign: i8) -> TLElement {
    let (id_w, u_w) = if sign > 0 { (1, -1) } else { (-1, 1) };
    let mut e = TLElement::default();
    e.add(TLDiagram::identity(), LaurentPoly::monomial(1, id_w));
    e.add(TLDiagram::cup_cap(pair), LaurentPoly::monomial(1, u_w));
    e
}

/// Crossings of the word from the first-acting (bottom) upward.
fn crossings_bottom_up(word: &BraidWord) -> Vec<(StrandPair, i8)> {
    word.letters()
        .iter()
        .rev()
        .flat_map(|l| {
            let sign = if l.exponent > 0 { 1 } else { -1 };
            std::iter::repeat_n((StrandPair::from(l.generator), sign), l.exponent.unsigned_abs() as usize)
        })
        .collect()
}

/// Kauffman bracket of the plat closure, combining equal diagrams as the
/// crossings are resolved bottom-up.
pub fn plat_bracket(word: &BraidWord) -> Result<LaurentPoly> {
    let c = word.crossing_count();
    if c > MAX_CROSSINGS {
        return Err(Error::SizeLimit { crossings: c, limit: MAX_CROSSINGS });
    }
    let mut acc = TLElement::identity();
    for (pair, sign) in crossings_bottom_up(word) {
        acc = resolve_crossing(pair, sign).compose(&acc);
    }
    Ok(acc.close())
}

/// The same bracket as a literal sum over all `2^c` smoothings.
pub fn state_sum_bracket(word: &BraidWord) -> Result<LaurentPoly> {
    let crossings = crossings_bottom_up(word);
    let c = crossings.len();
    if c > MAX_STATE_SUM_CROSSINGS {
        return Err(Error::SizeLimit { crossings: c, limit: MAX_STATE_SUM_CROSSINGS });
    }
    let smoothings: Vec<[TLDiagram; 2]> = crossings
        .iter()
        .map(|&(pair, _)| [TLDiagram::identity(), TLDiagram::cup_cap(pair)])
        .collect();

    // (power of A, number of loops) -> multiplicity
    let mut tally: BTreeMap<(i32, u32), i128> = BTreeMap::new();
    for state in 0u32..(1u32 << c) {
        let mut diagram = TLDiagram::identity();
        let mut loops = 0usize;
        let mut power = 0i32;
        for (k, &(_, sign)) in crossings.iter().enumerate() {
            let pick_u = (state >> k) & 1 == 1;
            let (next, l) = smoothings[k][pick_u as usize].compose(&diagram);
            diagram = next;
            loops += l;
            power += match (sign > 0, pick_u) {
                (true, false) | (false, true) => 1,
                _ => -1,
            };
        }
        loops += diagram.closure_loops();
        *tally.entry((power, loops as u32)).or_insert(0) += 1;
    }

    let delta = LaurentPoly::delta();
    Ok(tally.into_iter().fold(LaurentPoly::zero(), |acc, ((power, loops), n)| {
        &acc + &(&LaurentPoly::monomial(n, power) * &delta.pow(loops))
    }))
}

/// `⟨↑|B|↑⟩` as `bracket / δ²`, unreduced.
pub fn plat_amplitude(word: &BraidWord) -> Result<RationalLaurent> {
    Ok(RationalLaurent::new(plat_bracket(word)?, LaurentPoly::delta().pow(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    fn delta2() -> LaurentPoly {
        LaurentPoly::delta().pow(2)
    }

    #[test]
    fn diagrams_are_planar() {
        assert!(TLDiagram::identity().is_planar());
        assert!(TLDiagram::cup_cap(StrandPair::First).is_planar());
        let (d, _) = TLDiagram::cup_cap(StrandPair::First).compose(&TLDiagram::cup_cap(StrandPair::Second));
        assert!(d.is_planar());
    }

    #[test]
    fn temperley_lieb_relations() {
        let u1 = TLDiagram::cup_cap(StrandPair::First);
        let u2 = TLDiagram::cup_cap(StrandPair::Second);
        // U² = δU
        assert_eq!(u1.compose(&u1), (u1, 1));
        // U₁U₂U₁ = U₁
        let (u21, l1) = u2.compose(&u1);
        assert_eq!(u1.compose(&u21), (u1, 0));
        assert_eq!(l1, 0);
        let (u12, _) = u1.compose(&u2);
        assert_eq!(u2.compose(&u12), (u2, 0));
    }

    #[test]
    fn resolve_examples() {
        let pos = resolve_crossing(StrandPair::First, 1);
        let u = TLDiagram::cup_cap(StrandPair::First);
        let got: Vec<_> = pos.terms().map(|(d, w)| (*d, w.clone())).collect();
        assert!(got.contains(&(TLDiagram::identity(), LaurentPoly::monomial(1, 1))));
        assert!(got.contains(&(u, LaurentPoly::monomial(1, -1))));

        let neg = resolve_crossing(StrandPair::First, -1);
        let got: Vec<_> = neg.terms().map(|(d, w)| (*d, w.clone())).collect();
        assert!(got.contains(&(TLDiagram::identity(), LaurentPoly::monomial(1, -1))));
        assert!(got.contains(&(u, LaurentPoly::monomial(1, 1))));

        // σσ⁻¹ = identity with weight 1
        assert_eq!(pos.compose(&neg), TLElement::identity());
    }

    #[test]
    fn empty_word_is_two_loops() {
        assert_eq!(plat_bracket(&BraidWord::empty()).unwrap(), delta2());
        let amp = plat_amplitude(&BraidWord::empty()).unwrap();
        let v = amp.evaluate(Complex64::from_polar(1.0, 0.3)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hopf_bracket() {
        // δ²A² + δ(1 − A⁻⁴)
        let d = LaurentPoly::delta();
        let want = &(&delta2() * &LaurentPoly::monomial(1, 2))
            + &(&d * &LaurentPoly::from_terms([(0, 1), (-4, -1)]));
        assert_eq!(plat_bracket(&word("1^2")).unwrap(), want);

        let amp = plat_amplitude(&word("1^2")).unwrap();
        for k in 0..20 {
            let a = Complex64::from_polar(1.0, 0.05 + 0.15 * k as f64);
            let Ok(v) = amp.evaluate(a) else { continue };
            let closed = (1.0 + a.powi(8)) / (a.powi(2) + a.powi(6));
            assert!((v - closed).norm() < 1e-10);
        }
        let at_zero = amp.evaluate(Complex64::from_polar(1.0, std::f64::consts::PI / 8.0)).unwrap();
        assert!(at_zero.norm() < 1e-12);
    }

    #[test]
    fn diagonal_generator_is_a_phase() {
        let want = &LaurentPoly::monomial(-1, -3) * &delta2();
        assert_eq!(plat_bracket(&word("2")).unwrap(), want);
    }

    #[test]
    fn trefoil_amplitude() {
        let amp = plat_amplitude(&word("1^3")).unwrap();
        for k in 0..20 {
            let a = Complex64::from_polar(1.0, 0.07 + 0.15 * k as f64);
            let Ok(v) = amp.evaluate(a) else { continue };
            let closed = (-1.0 + a.powi(4) + a.powi(12)) / (a.powi(5) + a.powi(9));
            assert!((v - closed).norm() < 1e-9);
        }
    }

    #[test]
    fn size_limits() {
        let long = BraidWord::new([(1, 31), (2, 30)]).unwrap();
        assert!(matches!(plat_bracket(&long), Err(Error::SizeLimit { crossings: 61, .. })));
        // the largest admissible words evaluate without coefficient overflow
        for w in ["1^30,2^30", "1^60", "1^10,2^-10,1^10,2^-10,1^10,2^-10"] {
            plat_bracket(&w.parse().unwrap()).unwrap();
        }
        let mid = BraidWord::new([(1, 13), (2, 12)]).unwrap();
        assert!(matches!(state_sum_bracket(&mid), Err(Error::SizeLimit { .. })));
    }

    fn small_word() -> impl Strategy<Value = BraidWord> {
        proptest::collection::vec((1u8..=2, prop_oneof![-3i64..=-1, 1i64..=3]), 0..5)
            .prop_map(|v| BraidWord::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn grouped_sum_matches_state_sum(w in small_word()) {
            prop_assume!(w.crossing_count() <= 12);
            prop_assert_eq!(plat_bracket(&w).unwrap(), state_sum_bracket(&w).unwrap());
        }

        #[test]
        fn span_grows_linearly(w in small_word()) {
            let b = plat_bracket(&w).unwrap();
            // the two closure loops alone give δ², which spans 8
            prop_assert!(b.span() as usize <= 4 * w.crossing_count() + 8);
        }
    }
}
