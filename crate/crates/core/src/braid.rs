//! Braid words over the Artin generators σᵢ^±1.
//!
//! Words are written in a small ASCII grammar, whitespace separated:
//!
//! ```text
//! word := term* ;  term := "s" INT ( "^" SIGNED_INT )?
//! ```
//!
//! with `INT ≥ 1` and `SIGNED_INT ≠ 0`, so `s1^3 s2^-1` is σ₁σ₁σ₁σ₂⁻¹. The
//! parser accepts any strand count; the 2×2 representation checks for three
//! strands itself.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braid needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator s{index} at position {pos} is out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize, pos: usize },
    #[error("zero exponent at position {pos}")]
    ZeroExponent { pos: usize },
}

/// σᵢ (`inverse == false`) or σᵢ⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidGenerator {
    index: usize,
    inverse: bool,
}

impl BraidGenerator {
    /// Panics if `index == 0`; generator indices are 1-based.
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index >= 1, "braid generator indices start at 1");
        Self { index, inverse }
    }

    pub fn positive(index: usize) -> Self {
        Self::new(index, false)
    }

    pub fn negative(index: usize) -> Self {
        Self::new(index, true)
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// +1 for σᵢ, −1 for σᵢ⁻¹.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(self) -> Self {
        Self {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

/// An element of the braid group on `strands` strands, as a word in the
/// generators. The empty word is the identity braid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidGenerator>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidGenerator>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands));
        }
        if let Some(pos) = letters.iter().position(|g| g.index() >= strands) {
            return Err(BraidError::IndexOutOfRange {
                index: letters[pos].index(),
                strands,
                pos,
            });
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidGenerator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of the exponents of the word, I(b).
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|g| g.sign()).sum()
    }

    /// The inverse braid: letters reversed with every sign flipped.
    pub fn invert(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|g| g.inverted()).collect(),
        }
    }

    /// `self` followed by `other`. Panics on a strand-count mismatch.
    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.strands, other.strands, "strand count mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self {
            strands: self.strands,
            letters,
        }
    }

    /// The same letters read as a braid on more strands (spectator strands
    /// added on the right).
    pub fn with_strands(&self, strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, self.letters.clone())
    }
}

/// Canonical printer: runs of equal letters are grouped, `s1^3 s2^-1`.
impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let g = self.letters[i];
            let run = self.letters[i..].iter().take_while(|&&h| h == g).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exp = run as i64 * g.sign();
            if exp == 1 {
                write!(f, "s{}", g.index())?;
            } else {
                write!(f, "s{}^{}", g.index(), exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord, BraidError> {
    if strands < 2 {
        return Err(BraidError::TooFewStrands(strands));
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let syntax = |pos: usize, msg: &str| BraidError::Syntax {
        pos,
        msg: msg.to_string(),
    };

    loop {
        let ws_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if !letters.is_empty() && pos == ws_start {
            return Err(syntax(pos, "terms must be separated by whitespace"));
        }

        let term_start = pos;
        if bytes[pos] != b's' {
            return Err(syntax(pos, "expected 's'"));
        }
        pos += 1;
        let (index, next) = read_digits(bytes, pos).ok_or_else(|| syntax(pos, "expected generator index"))?;
        if index == 0 {
            return Err(syntax(pos, "generator index must be at least 1"));
        }
        pos = next;
        if index >= strands as u64 {
            return Err(BraidError::IndexOutOfRange {
                index: index as usize,
                strands,
                pos: term_start,
            });
        }

        let mut exponent: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let exp_start = pos;
            let negative = pos < bytes.len() && bytes[pos] == b'-';
            if negative || (pos < bytes.len() && bytes[pos] == b'+') {
                pos += 1;
            }
            let (magnitude, next) = read_digits(bytes, pos).ok_or_else(|| syntax(pos, "expected exponent"))?;
            pos = next;
            if magnitude == 0 {
                return Err(BraidError::ZeroExponent { pos: exp_start });
            }
            if magnitude > 1 << 20 {
                return Err(syntax(exp_start, "exponent too large"));
            }
            exponent = if negative {
                -(magnitude as i64)
            } else {
                magnitude as i64
            };
        }
        if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            return Err(syntax(pos, "unexpected character"));
        }

        let g = BraidGenerator::new(index as usize, exponent < 0);
        letters.extend(std::iter::repeat_n(g, exponent.unsigned_abs() as usize));
    }

    BraidWord::new(strands, letters)
}

fn read_digits(bytes: &[u8], start: usize) -> Option<(u64, usize)> {
    let end = start + bytes[start..].iter().take_while(|b| b.is_ascii_digit()).count();
    if end == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..end])
        .ok()?
        .parse()
        .ok()
        .map(|v| (v, end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(i: usize) -> BraidGenerator {
        BraidGenerator::positive(i)
    }

    fn si(i: usize) -> BraidGenerator {
        BraidGenerator::negative(i)
    }

    #[test]
    fn parses_power() {
        let b = parse_braid("s1^3", 3).unwrap();
        assert_eq!(b.letters(), &[s(1), s(1), s(1)]);
        assert_eq!(b.exponent_sum(), 3);
    }

    #[test]
    fn parses_empty_as_identity() {
        let b = parse_braid("", 3).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.exponent_sum(), 0);
        assert_eq!(parse_braid("   \t ", 3).unwrap(), b);
    }

    #[test]
    fn parses_mixed_signs() {
        let b = parse_braid("s1 s2^-1 s1 s2^-1", 3).unwrap();
        assert_eq!(b.letters(), &[s(1), si(2), s(1), si(2)]);
        let b = parse_braid("s2^-3", 3).unwrap();
        assert_eq!(b.letters(), &[si(2), si(2), si(2)]);
    }

    #[test]
    fn rejects_out_of_range_index() {
        assert!(matches!(
            parse_braid("s3", 3),
            Err(BraidError::IndexOutOfRange {
                index: 3,
                strands: 3,
                pos: 0
            })
        ));
    }

    #[test]
    fn rejects_bad_syntax() {
        assert!(matches!(
            parse_braid("s1^0", 3),
            Err(BraidError::ZeroExponent { pos: 3 })
        ));
        assert!(matches!(parse_braid("s0", 3), Err(BraidError::Syntax { pos: 1, .. })));
        assert!(matches!(
            parse_braid("s1 x2", 3),
            Err(BraidError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_braid("s1s2", 3), Err(BraidError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_braid("s1^", 3), Err(BraidError::Syntax { .. })));
        assert!(matches!(parse_braid("σ1", 3), Err(BraidError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_braid("s1", 1), Err(BraidError::TooFewStrands(1))));
    }

    #[test]
    fn parser_is_not_limited_to_three_strands() {
        let b = parse_braid("s5 s7^-2", 8).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.exponent_sum(), -1);
    }

    #[test]
    fn exponent_sums() {
        let borromean = parse_braid("s1 s2^-1 s1 s2^-1 s1 s2^-1", 3).unwrap();
        assert_eq!(borromean.exponent_sum(), 0);
    }

    #[test]
    fn inversion() {
        let b = BraidWord::new(3, vec![s(1), si(2)]).unwrap();
        assert_eq!(b.invert().letters(), &[s(2), si(1)]);
        let id = BraidWord::identity(3).unwrap();
        assert_eq!(id.invert(), id);
        let t = parse_braid("s1^3", 3).unwrap();
        assert_eq!(t.invert(), parse_braid("s1^-3", 3).unwrap());
    }

    #[test]
    fn display_groups_runs() {
        let b = parse_braid("s1 s1 s2^-1 s2^-1 s1", 3).unwrap();
        assert_eq!(b.to_string(), "s1^2 s2^-2 s1");
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..7).prop_flat_map(|n| {
            prop::collection::vec((1..n, any::<bool>()), 0..24).prop_map(move |gens| {
                let letters = gens.into_iter().map(|(i, inv)| BraidGenerator::new(i, inv)).collect();
                BraidWord::new(n, letters).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn render_round_trips(b in arb_word()) {
            prop_assert_eq!(parse_braid(&b.to_string(), b.strands()).unwrap(), b);
        }

        #[test]
        fn inverse_negates_exponent_sum(b in arb_word()) {
            prop_assert_eq!(b.invert().exponent_sum(), -b.exponent_sum());
            prop_assert_eq!(b.invert().invert(), b);
        }

        #[test]
        fn exponent_sum_is_additive(a in arb_word(), b in arb_word()) {
            let b = BraidWord::new(a.strands().max(b.strands()), b.letters().to_vec()).unwrap();
            let a = a.with_strands(b.strands()).unwrap();
            prop_assert_eq!(a.concat(&b).exponent_sum(), a.exponent_sum() + b.exponent_sum());
        }
    }
}
