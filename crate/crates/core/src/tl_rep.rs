//! Two-projector Temperley-Lieb representation on three strands and the
//! braid-group representation ρ(σᵢ) = A·1 + A⁻¹·Uᵢ built from it.
//!
//! With A = e^{iθ} the loop value is δ = −A² − A⁻² = −2cos 2θ. The matrices
//!
//! ```text
//! U₁ = [δ 0; 0 0]      U₂ = [δ⁻¹  √(1−δ⁻²); √(1−δ⁻²)  δ−δ⁻¹]
//! ```
//!
//! are real symmetric (so ρ is unitary) exactly when δ² ≥ 1, i.e. for θ in
//! [0,π/6] ∪ [π/3,2π/3] ∪ [5π/6,7π/6] ∪ [4π/3,5π/3] ∪ [11π/6,2π].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::braid::{BraidGenerator, BraidWord};
use crate::matrix::ComplexMatrix;

/// Slack on `δ² ≥ 1` so that interval endpoints reached through degree
/// conversion (e.g. 30° → π/6) still count as admissible.
pub const ADMISSIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReprError {
    #[error("θ = {theta} is not admissible: δ² = {delta_sq} < 1 gives a non-unitary representation")]
    NotAdmissible { theta: f64, delta_sq: f64 },
    #[error("δ = 0 at θ = {theta}: U₂ is undefined")]
    Singular { theta: f64 },
    #[error("θ = {0} is not finite")]
    NonFinite(f64),
    #[error("generator s{0} is not supported by the three-strand representation")]
    UnsupportedGenerator(usize),
    #[error("braid on {0} strands; the representation is for three strands")]
    UnsupportedStrands(usize),
}

/// The closed intervals of [0, 2π] on which ρ is unitary.
pub const ADMISSIBLE_INTERVALS: [(f64, f64); 5] = [
    (0.0, PI / 6.0),
    (PI / 3.0, 2.0 * PI / 3.0),
    (5.0 * PI / 6.0, 7.0 * PI / 6.0),
    (4.0 * PI / 3.0, 5.0 * PI / 3.0),
    (11.0 * PI / 6.0, 2.0 * PI),
];

pub fn delta_from_theta(theta: f64) -> f64 {
    -2.0 * (2.0 * theta).cos()
}

/// θ reduced into [0, 2π).
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Whether ρ is unitary at `theta`; equivalently δ² ≥ 1.
pub fn is_admissible(theta: f64) -> bool {
    let d = delta_from_theta(canonical_angle(theta));
    d * d >= 1.0 - ADMISSIBILITY_SLACK
}

/// Draws θ uniformly from the admissible union.
pub fn sample_admissible_theta<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let total: f64 = ADMISSIBLE_INTERVALS.iter().map(|(a, b)| b - a).sum();
    let mut x = rng.random_range(0.0..total);
    for (a, b) in ADMISSIBLE_INTERVALS {
        if x <= b - a {
            return a + x;
        }
        x -= b - a;
    }
    ADMISSIBLE_INTERVALS[4].1
}

/// Parameters of the representation at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReprParams {
    theta: f64,
    a: Complex64,
    delta: f64,
    unitary_regime: bool,
}

impl ReprParams {
    /// Parameters at an admissible angle. `theta` is reduced mod 2π.
    pub fn new(theta: f64) -> Result<Self, ReprError> {
        let p = Self::unrestricted(theta)?;
        if !p.unitary_regime {
            return Err(ReprError::NotAdmissible {
                theta: p.theta,
                delta_sq: p.delta * p.delta,
            });
        }
        Ok(p)
    }

    /// Parameters at any angle with δ ≠ 0. Outside the admissible set the
    /// off-diagonal of U₂ becomes imaginary and ρ(σ₂) stops being unitary.
    pub fn unrestricted(theta: f64) -> Result<Self, ReprError> {
        if !theta.is_finite() {
            return Err(ReprError::NonFinite(theta));
        }
        let theta = canonical_angle(theta);
        let delta = delta_from_theta(theta);
        if delta == 0.0 {
            return Err(ReprError::Singular { theta });
        }
        Ok(Self {
            theta,
            a: Complex64::from_polar(1.0, theta),
            delta,
            unitary_regime: delta * delta >= 1.0 - ADMISSIBILITY_SLACK,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// A = e^{iθ}.
    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_unitary_regime(&self) -> bool {
        self.unitary_regime
    }
}

/// The Temperley-Lieb generators (U₁, U₂).
pub fn build_u(params: &ReprParams) -> (ComplexMatrix, ComplexMatrix) {
    let d = params.delta;
    let inv = 1.0 / d;
    let off_sq = 1.0 - inv * inv;
    // Clamp the endpoint round-off; a genuinely negative value only occurs
    // for unrestricted parameters, where the entry is imaginary.
    let off = if params.unitary_regime {
        Complex64::new(off_sq.max(0.0).sqrt(), 0.0)
    } else {
        Complex64::new(off_sq, 0.0).sqrt()
    };
    let z = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let u1 = ComplexMatrix::from_rows(&[[re(d), z], [z, z]]);
    let u2 = ComplexMatrix::from_rows(&[[re(inv), off], [off, re(d - inv)]]);
    (u1, u2)
}

/// A cached (U₁, U₂) pair with ρ(σᵢ^±1) for one parameter set.
#[derive(Debug, Clone)]
pub struct Representation {
    params: ReprParams,
    u: [ComplexMatrix; 2],
    rho: [ComplexMatrix; 2],
    rho_inv: [ComplexMatrix; 2],
}

impl Representation {
    pub fn new(params: ReprParams) -> Self {
        let (u1, u2) = build_u(&params);
        let a = params.a;
        let id = ComplexMatrix::identity(2);
        let gen = |u: &ComplexMatrix| &id.scale(a) + &u.scale(a.inv());
        let rho = [gen(&u1), gen(&u2)];
        // The inverse generator is ρ⁻¹ = A⁻¹·1 + A·U, which equals ρ† when U
        // is real symmetric. Outside the unitary regime only the algebraic
        // form is a true inverse.
        let inv = |u: &ComplexMatrix| &id.scale(a.inv()) + &u.scale(a);
        let rho_inv = if params.unitary_regime {
            [rho[0].adjoint(), rho[1].adjoint()]
        } else {
            [inv(&u1), inv(&u2)]
        };
        Self {
            params,
            u: [u1, u2],
            rho,
            rho_inv,
        }
    }

    pub fn params(&self) -> &ReprParams {
        &self.params
    }

    pub fn u1(&self) -> &ComplexMatrix {
        &self.u[0]
    }

    pub fn u2(&self) -> &ComplexMatrix {
        &self.u[1]
    }

    pub fn generator(&self, g: BraidGenerator) -> Result<&ComplexMatrix, ReprError> {
        let slot = match g.index() {
            1 => 0,
            2 => 1,
            i => return Err(ReprError::UnsupportedGenerator(i)),
        };
        Ok(if g.is_inverse() {
            &self.rho_inv[slot]
        } else {
            &self.rho[slot]
        })
    }

    /// ρ(b): the left-to-right product of the letter images.
    pub fn word(&self, b: &BraidWord) -> Result<ComplexMatrix, ReprError> {
        if b.strands() != 3 {
            return Err(ReprError::UnsupportedStrands(b.strands()));
        }
        b.letters()
            .iter()
            .try_fold(ComplexMatrix::identity(2), |acc, &g| Ok(&acc * self.generator(g)?))
    }
}

/// ρ(σᵢ) for sign +1, ρ(σᵢ)† = ρ(σᵢ)⁻¹ for sign −1.
pub fn rho_generator(g: BraidGenerator, params: &ReprParams) -> Result<ComplexMatrix, ReprError> {
    Representation::new(*params).generator(g).cloned()
}

pub fn rho_word(b: &BraidWord, params: &ReprParams) -> Result<ComplexMatrix, ReprError> {
    Representation::new(*params).word(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_from_theta(0.0), -2.0);
        assert!((delta_from_theta(FRAC_PI_2) - 2.0).abs() < TOL);
        assert!((delta_from_theta(FRAC_PI_6) + 1.0).abs() < TOL);
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(PI / 12.0));
        assert!(!is_admissible(FRAC_PI_4));
        assert!(is_admissible(FRAC_PI_2));
        assert!(is_admissible(30f64.to_radians()));
        assert!(is_admissible(-0.1));
        assert!(!is_admissible(FRAC_PI_4 + 2.0 * PI));
        assert!(matches!(
            ReprParams::new(FRAC_PI_4 + 0.1),
            Err(ReprError::NotAdmissible { .. })
        ));
        assert!(matches!(
            ReprParams::unrestricted(f64::NAN),
            Err(ReprError::NonFinite(_))
        ));
    }

    #[test]
    fn u_matrices_at_half_pi() {
        let (u1, u2) = build_u(&ReprParams::new(FRAC_PI_2).unwrap());
        let exp1 = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 0.0]]);
        let r = 3f64.sqrt() / 2.0;
        let exp2 = ComplexMatrix::from_real_rows(&[[0.5, r], [r, 1.5]]);
        assert!(u1.max_abs_diff(&exp1) < TOL);
        assert!(u2.max_abs_diff(&exp2) < TOL);
    }

    #[test]
    fn u2_degenerates_at_interval_endpoint() {
        let (u1, u2) = build_u(&ReprParams::new(FRAC_PI_6).unwrap());
        let exp = ComplexMatrix::from_real_rows(&[[-1.0, 0.0], [0.0, 0.0]]);
        assert!(u2.max_abs_diff(&exp) < TOL);
        assert!(u1.max_abs_diff(&exp) < TOL);
    }

    #[test]
    fn sigma1_is_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = ReprParams::new(sample_admissible_theta(&mut rng)).unwrap();
            let a = p.a();
            let r = rho_generator(BraidGenerator::positive(1), &p).unwrap();
            let exp = ComplexMatrix::from_diag(&[-a.powi(-3), a]);
            assert!(r.max_abs_diff(&exp) < TOL);
        }
        let r = rho_generator(BraidGenerator::positive(1), &ReprParams::new(0.0).unwrap()).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(1.0, 0.0)])) < TOL);
    }

    #[test]
    fn generator_times_inverse_is_identity() {
        let p = ReprParams::new(0.3).unwrap();
        for i in [1, 2] {
            let g = rho_generator(BraidGenerator::positive(i), &p).unwrap();
            let gi = rho_generator(BraidGenerator::negative(i), &p).unwrap();
            assert!((&g * &gi).max_abs_diff(&ComplexMatrix::identity(2)) < TOL);
        }
    }

    #[test]
    fn unsupported_generator() {
        let p = ReprParams::new(0.3).unwrap();
        assert_eq!(
            rho_generator(BraidGenerator::positive(3), &p),
            Err(ReprError::UnsupportedGenerator(3))
        );
        let b = parse_braid("s1", 4).unwrap();
        assert_eq!(rho_word(&b, &p), Err(ReprError::UnsupportedStrands(4)));
    }

    #[test]
    fn word_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let id = parse_braid("", 3).unwrap();
        let trefoil = parse_braid("s1^3", 3).unwrap();
        let lhs = parse_braid("s1 s2 s1", 3).unwrap();
        let rhs = parse_braid("s2 s1 s2", 3).unwrap();
        for _ in 0..100 {
            let p = ReprParams::new(sample_admissible_theta(&mut rng)).unwrap();
            let a = p.a();
            assert!(rho_word(&id, &p).unwrap().max_abs_diff(&ComplexMatrix::identity(2)) < TOL);
            let t = rho_word(&trefoil, &p).unwrap();
            assert!(t.max_abs_diff(&ComplexMatrix::from_diag(&[-a.powi(-9), a.powi(3)])) < TOL);
            assert!((t.trace() - (a.powi(3) - a.powi(-9))).norm() < TOL);
            let l = rho_word(&lhs, &p).unwrap();
            let r = rho_word(&rhs, &p).unwrap();
            assert!(l.max_abs_diff(&r) < TOL, "braid relation fails at θ={}", p.theta());
        }
    }

    #[test]
    fn temperley_lieb_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = ReprParams::new(sample_admissible_theta(&mut rng)).unwrap();
            let d = Complex64::new(p.delta(), 0.0);
            let (u1, u2) = build_u(&p);
            assert!((&u1 * &u1).max_abs_diff(&u1.scale(d)) < TOL);
            assert!((&u2 * &u2).max_abs_diff(&u2.scale(d)) < TOL);
            assert!((&(&u1 * &u2) * &u1).max_abs_diff(&u1) < TOL);
            assert!((&(&u2 * &u1) * &u2).max_abs_diff(&u2) < TOL);
            assert!((u1.trace() - d).norm() < TOL);
            assert!((u2.trace() - d).norm() < TOL);
            assert!(((&u1 * &u2).trace() - 1.0).norm() < TOL);
            assert!(((&u2 * &u1).trace() - 1.0).norm() < TOL);
        }
    }

    #[test]
    fn gap_angles_break_unitarity() {
        for theta in [0.6, 0.9, 2.5, 4.0, 5.5] {
            assert!(!is_admissible(theta));
            let rep = Representation::new(ReprParams::unrestricted(theta).unwrap());
            let g = rep.generator(BraidGenerator::positive(2)).unwrap();
            assert!(g.unitarity_defect() > 1e-6, "θ={theta}");
            // σ₁ stays unitary everywhere; only σ₂ sees the imaginary entry.
            assert!(rep.generator(BraidGenerator::positive(1)).unwrap().is_unitary(TOL));
            let gi = rep.generator(BraidGenerator::negative(2)).unwrap();
            assert!((g * gi).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
        }
    }

    #[test]
    fn inverse_word_is_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let p = ReprParams::new(sample_admissible_theta(&mut rng)).unwrap();
            let letters = (0..rng.random_range(0..12))
                .map(|_| BraidGenerator::new(rng.random_range(1..3), rng.random()))
                .collect();
            let b = BraidWord::new(3, letters).unwrap();
            let m = rho_word(&b, &p).unwrap();
            let mi = rho_word(&b.invert(), &p).unwrap();
            assert!(m.is_unitary(TOL));
            assert!(mi.max_abs_diff(&m.adjoint()) < TOL);
            assert!((&m * &mi).max_abs_diff(&ComplexMatrix::identity(2)) < TOL);
        }
    }
}
