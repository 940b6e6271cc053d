//! Bracket, normalised invariant and Jones value of a three-strand braid
//! closure, computed from the trace of its representation matrix.
//!
//! For b ∈ B₃ with exponent sum I(b):
//!
//! ```text
//! ⟨b̄⟩ = tr ρ(b) + A^{I(b)}·(δ² − 2)
//! f(b̄) = (−A³)^{−I(b)}·⟨b̄⟩
//! V(b̄)(t) = f(b̄) evaluated at A = t^{−1/4}
//! ```
//!
//! Evaluating f at a given A is evaluating V at t = A⁻⁴; both are reported so
//! that no fourth-root branch has to be chosen.

use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::tl_rep::{ReprError, ReprParams, Representation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantValues {
    /// tr ρ(b).
    pub trace: Complex64,
    /// Bracket polynomial of the closure.
    pub bracket: Complex64,
    /// Writhe-normalised bracket.
    pub f: Complex64,
    /// t = A⁻⁴.
    pub t: Complex64,
    /// V(b̄)(t); numerically equal to `f`.
    pub jones: Complex64,
}

impl InvariantValues {
    /// Completes the invariants from a trace of ρ(b), exact or estimated.
    pub fn from_trace(trace: Complex64, exponent_sum: i64, params: &ReprParams) -> Self {
        let a = params.a();
        let i = exponent_sum as i32;
        let delta = params.delta();
        let bracket = trace + a.powi(i) * (delta * delta - 2.0);
        let f = (-a.powi(3)).powi(-i) * bracket;
        Self {
            trace,
            bracket,
            f,
            t: a.powi(-4),
            jones: f,
        }
    }
}

pub fn evaluate(b: &BraidWord, params: &ReprParams) -> Result<InvariantValues, ReprError> {
    evaluate_with(b, &Representation::new(*params))
}

/// As [`evaluate`], reusing a prepared representation.
pub fn evaluate_with(b: &BraidWord, rep: &Representation) -> Result<InvariantValues, ReprError> {
    let trace = rep.word(b)?.trace();
    Ok(InvariantValues::from_trace(trace, b.exponent_sum(), rep.params()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::state_sum::bracket_state_sum;
    use crate::tl_rep::rho_word;

    const TOL: f64 = 1e-12;

    fn grid() -> impl Iterator<Item = ReprParams> {
        (0..=30).map(|deg| ReprParams::new(f64::from(deg).to_radians()).unwrap())
    }

    #[test]
    fn identity_braid() {
        let b = parse_braid("", 3).unwrap();
        for p in grid() {
            let v = evaluate(&b, &p).unwrap();
            let d2 = p.delta() * p.delta();
            assert!((v.trace - 2.0).norm() < TOL);
            assert!((v.bracket - d2).norm() < TOL);
            assert!((v.f - d2).norm() < TOL);
        }
    }

    #[test]
    fn trefoil_closed_form() {
        let b = parse_braid("s1^3", 3).unwrap();
        for p in grid() {
            let a = p.a();
            let v = evaluate(&b, &p).unwrap();
            let trace = a.powi(3) - a.powi(-9);
            let bracket = trace + a.powi(3) * (p.delta() * p.delta() - 2.0);
            assert!((v.trace - trace).norm() < TOL);
            assert!((v.bracket - bracket).norm() < TOL);
            assert!((v.t - a.powi(-4)).norm() < TOL);
            assert_eq!(v.jones, v.f);
        }
        let v = evaluate(&b, &ReprParams::new(0.0).unwrap()).unwrap();
        assert!(v.trace.norm() < TOL);
        assert!((v.bracket - 2.0).norm() < TOL);
    }

    #[test]
    fn trefoil_jones_polynomial() {
        // On three strands σ₁³ closes to a trefoil plus a spectator circle.
        // Expanding f = (−A³)⁻³(A⁷ + A³ + A⁻¹ − A⁻⁹) and substituting
        // t = A⁻⁴ gives δ·(t + t³ − t⁴), the trefoil factor times the
        // circle factor δ = −t^{1/2} − t^{−1/2}.
        let b = parse_braid("s1^3", 3).unwrap();
        for p in grid() {
            let v = evaluate(&b, &p).unwrap();
            let t = v.t;
            let expected = (t + t.powi(3) - t.powi(4)) * p.delta();
            assert!((v.jones - expected).norm() < 1e-10, "θ={}", p.theta());
        }
    }

    #[test]
    fn figure_eight_jones_polynomial() {
        // Amphichiral: V = t² − t + 1 − t⁻¹ + t⁻².
        let b = parse_braid("s1 s2^-1 s1 s2^-1", 3).unwrap();
        for p in grid() {
            let v = evaluate(&b, &p).unwrap();
            let t = v.t;
            let expected = t * t - t + 1.0 - t.inv() + t.powi(-2);
            assert!((v.jones - expected).norm() < 1e-10, "θ={}", p.theta());
        }
    }

    #[test]
    fn trace_is_conjugation_invariant() {
        let b = parse_braid("s1^2 s2^-1", 3).unwrap();
        let g = parse_braid("s2 s1^-1 s2", 3).unwrap();
        let conj = g.concat(&b).concat(&g.invert());
        assert_eq!(conj.exponent_sum(), b.exponent_sum());
        for p in grid() {
            let t1 = rho_word(&b, &p).unwrap().trace();
            let t2 = rho_word(&conj, &p).unwrap().trace();
            assert!((t1 - t2).norm() < TOL);
        }
    }

    #[test]
    fn agrees_with_state_sum_on_random_words() {
        let words = ["s1", "s2^-1", "s1 s2", "s1^2 s2^-2 s1", "s2 s1^-1 s2 s2 s1^-1 s1"];
        for w in words {
            let b = parse_braid(w, 3).unwrap();
            for p in grid() {
                let v = evaluate(&b, &p).unwrap();
                let oracle = bracket_state_sum(&b, p.a()).unwrap();
                assert!((v.bracket - oracle).norm() < 1e-10, "{w} at θ={}", p.theta());
            }
        }
    }

    #[test]
    fn rejects_other_strand_counts() {
        let b = parse_braid("s1^3", 2).unwrap();
        assert!(evaluate(&b, &ReprParams::new(0.1).unwrap()).is_err());
    }
}
