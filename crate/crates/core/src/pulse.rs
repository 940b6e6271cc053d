//! Two-spin pulse programs for controlled-s₁/s₂ and their verification.
//!
//! Spin 1 (I) is the control and the more significant tensor factor, spin 2
//! (S) the target. Instruction propagators:
//!
//! ```text
//! ROT spin=2 axis=ν angle=ε   e^{−iε S_ν},  S_ν = 1 ⊗ σ_ν/2
//! ROT spin=1 axis=ν angle=ε   e^{−iε I_ν},  I_ν = σ_ν/2 ⊗ 1
//! COUPLE angle=κ              e^{−iκ 2I_zS_z},  κ = πJt
//! PHASE angle=φ               e^{iφ}·1
//! ```
//!
//! With α = π/2 − 2θ, β = π/2 + θ and
//! γ = atan(cos 4θ / √(4cos²2θ − 1)) + π/2 (γ = 0 for s₁), the controlled
//! generator factors as
//!
//! ```text
//! 1 ⊕ s₂ = (1 ⊗ R_y(−γ)) · D · (1 ⊗ R_y(γ)),
//! D = e^{i(π−β)/2} · R_z¹(π − β) · R_z²(−α) · e^{−iα 2I_zS_z} = 1 ⊕ s₁,
//! ```
//!
//! because γ/2 = arccos(1/|δ|) is the angle that turns U₁ into U₂ on
//! 0 ≤ θ ≤ π/6. The z rotation on spin 1 supplies the relative phase
//! det(s) = −A⁻², which no product of target-spin rotations and couplings can
//! produce.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{ComplexMatrix, ZERO};

/// Slack on the [0, π/6] range so that 30° converted to radians is accepted.
const THETA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    #[error("θ = {0} outside [0, π/6]")]
    ThetaOutOfRange(f64),
    #[error("controlled-s{0} is not defined; expected 1 or 2")]
    UnknownGenerator(u8),
    #[error("dimension mismatch: program acts on 4 dimensions, target has {0}")]
    DimensionMismatch(usize),
    #[error("target must be a 2×2 unitary")]
    BadTarget,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    I,
    S,
}

impl Spin {
    pub fn number(self) -> u8 {
        match self {
            Spin::I => 1,
            Spin::S => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseInstruction {
    Rotation {
        spin: Spin,
        axis: Axis,
        angle: f64,
    },
    /// Free evolution under the scalar coupling; `angle` is πJt.
    Coupling {
        angle: f64,
    },
    Phase {
        angle: f64,
    },
}

impl PulseInstruction {
    pub fn propagator(&self) -> ComplexMatrix {
        match *self {
            PulseInstruction::Rotation { spin, axis, angle } => {
                let r = rotation(axis, angle);
                let id = ComplexMatrix::identity(2);
                match spin {
                    Spin::I => r.kron(&id),
                    Spin::S => id.kron(&r),
                }
            }
            PulseInstruction::Coupling { angle } => {
                let (m, p) = (
                    Complex64::from_polar(1.0, -angle / 2.0),
                    Complex64::from_polar(1.0, angle / 2.0),
                );
                ComplexMatrix::from_diag(&[m, p, p, m])
            }
            PulseInstruction::Phase { angle } => ComplexMatrix::identity(4).scale(Complex64::from_polar(1.0, angle)),
        }
    }

    fn inverse(&self) -> Self {
        match *self {
            PulseInstruction::Rotation { spin, axis, angle } => PulseInstruction::Rotation {
                spin,
                axis,
                angle: -angle,
            },
            PulseInstruction::Coupling { angle } => PulseInstruction::Coupling { angle: -angle },
            PulseInstruction::Phase { angle } => PulseInstruction::Phase { angle: -angle },
        }
    }
}

/// e^{−iε σ_ν/2}.
fn rotation(axis: Axis, angle: f64) -> ComplexMatrix {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    match axis {
        Axis::Y => ComplexMatrix::from_real_rows(&[[c, -s], [s, c]]),
        Axis::Z => ComplexMatrix::from_diag(&[
            Complex64::from_polar(1.0, -angle / 2.0),
            Complex64::from_polar(1.0, angle / 2.0),
        ]),
    }
}

impl fmt::Display for PulseInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseInstruction::Rotation { spin, axis, angle } => {
                let axis = match axis {
                    Axis::Y => "y",
                    Axis::Z => "z",
                };
                write!(f, "ROT spin={} axis={axis} angle={angle:?}", spin.number())
            }
            PulseInstruction::Coupling { angle } => write!(f, "COUPLE angle={angle:?}"),
            PulseInstruction::Phase { angle } => write!(f, "PHASE angle={angle:?}"),
        }
    }
}

impl FromStr for PulseInstruction {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let mut words = line.split_whitespace();
        let op = words.next().ok_or("empty instruction")?;
        let mut spin = None;
        let mut axis = None;
        let mut angle = None;
        for w in words {
            let (key, value) = w
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {w:?}"))?;
            match key {
                "spin" => {
                    spin = Some(match value {
                        "1" => Spin::I,
                        "2" => Spin::S,
                        _ => return Err(format!("bad spin {value:?}")),
                    })
                }
                "axis" => {
                    axis = Some(match value {
                        "y" => Axis::Y,
                        "z" => Axis::Z,
                        _ => return Err(format!("bad axis {value:?}")),
                    })
                }
                "angle" => {
                    let v: f64 = value.parse().map_err(|_| format!("bad angle {value:?}"))?;
                    if !v.is_finite() {
                        return Err(format!("angle {value:?} is not finite"));
                    }
                    angle = Some(v)
                }
                _ => return Err(format!("unknown field {key:?}")),
            }
        }
        let angle = angle.ok_or("missing angle")?;
        match op {
            "ROT" => Ok(PulseInstruction::Rotation {
                spin: spin.ok_or("missing spin")?,
                axis: axis.ok_or("missing axis")?,
                angle,
            }),
            "COUPLE" | "PHASE" if spin.is_some() || axis.is_some() => Err(format!("{op} takes only an angle")),
            "COUPLE" => Ok(PulseInstruction::Coupling { angle }),
            "PHASE" => Ok(PulseInstruction::Phase { angle }),
            _ => Err(format!("unknown instruction {op:?}")),
        }
    }
}

/// What a program is meant to implement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProgramTarget {
    /// 1 ⊕ sⱼ at angle θ, or its inverse.
    ControlledS { which: u8, theta: f64, inverse: bool },
    /// 1 ⊕ U for an arbitrary 2×2 unitary.
    ControlledUnitary,
    /// Parsed from text; no recorded target.
    Unspecified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    instructions: Vec<PulseInstruction>,
    target: ProgramTarget,
}

impl PulseProgram {
    pub fn new(instructions: Vec<PulseInstruction>, target: ProgramTarget) -> Self {
        assert!(!instructions.is_empty(), "pulse programs are non-empty");
        Self { instructions, target }
    }

    pub fn instructions(&self) -> &[PulseInstruction] {
        &self.instructions
    }

    pub fn target(&self) -> &ProgramTarget {
        &self.target
    }

    /// Runs `other` after `self`.
    pub fn then(&self, other: &PulseProgram) -> PulseProgram {
        let mut instructions = self.instructions.clone();
        instructions.extend_from_slice(&other.instructions);
        PulseProgram {
            instructions,
            target: ProgramTarget::Unspecified,
        }
    }
}

/// One instruction per line, in application order.
impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in &self.instructions {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}

/// Parses the printer's format. Blank lines and `#` comments are skipped.
pub fn parse_program(text: &str) -> Result<PulseProgram, PulseError> {
    let mut instructions = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        instructions.push(line.parse().map_err(|msg| PulseError::Parse { line: k + 1, msg })?);
    }
    if instructions.is_empty() {
        return Err(PulseError::Parse {
            line: 0,
            msg: "program has no instructions".into(),
        });
    }
    Ok(PulseProgram::new(instructions, ProgramTarget::Unspecified))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// α = π/2 − 2θ, β = π/2 + θ, γ = atan(cos 4θ / √(4cos²2θ − 1)) + π/2,
/// with γ = 0 for s₁.
///
/// The radicand is read as 4cos²(2θ) − 1, which is non-negative exactly on
/// [0, π/6]. At θ = π/6 it vanishes and γ takes its limit 0.
pub fn pulse_angles(theta: f64, which: u8) -> Result<PulseAngles, PulseError> {
    check_theta(theta)?;
    let alpha = FRAC_PI_2 - 2.0 * theta;
    let beta = FRAC_PI_2 + theta;
    let gamma = match which {
        1 => 0.0,
        2 => {
            let c2 = (2.0 * theta).cos();
            let root = (4.0 * c2 * c2 - 1.0).max(0.0).sqrt();
            // cos 4θ/0 = −∞ at the endpoint, and atan(−∞) = −π/2.
            ((4.0 * theta).cos() / root).atan() + FRAC_PI_2
        }
        w => return Err(PulseError::UnknownGenerator(w)),
    };
    Ok(PulseAngles { alpha, beta, gamma })
}

fn check_theta(theta: f64) -> Result<(), PulseError> {
    if !(-THETA_SLACK..=FRAC_PI_6 + THETA_SLACK).contains(&theta) {
        return Err(PulseError::ThetaOutOfRange(theta));
    }
    Ok(())
}

fn rot(spin: Spin, axis: Axis, angle: f64) -> PulseInstruction {
    PulseInstruction::Rotation { spin, axis, angle }
}

/// Brings coupling angles into [0, 2π) (free evolution runs forward in
/// time), folding the sign e^{−iπ·2·2I_zS_z} = −1 into a phase.
fn normalize_couplings(instructions: Vec<PulseInstruction>) -> Vec<PulseInstruction> {
    let mut phase = 0.0;
    let mut out: Vec<PulseInstruction> = instructions
        .into_iter()
        .map(|ins| match ins {
            PulseInstruction::Coupling { angle } => {
                let turns = (angle / TAU).floor();
                if turns != 0.0 {
                    phase += PI * turns;
                }
                PulseInstruction::Coupling {
                    angle: angle - turns * TAU,
                }
            }
            other => other,
        })
        .collect();
    let wrapped = phase.rem_euclid(TAU);
    if wrapped != 0.0 {
        match out
            .iter_mut()
            .rev()
            .find(|i| matches!(i, PulseInstruction::Phase { .. }))
        {
            Some(PulseInstruction::Phase { angle }) => *angle += wrapped,
            _ => out.push(PulseInstruction::Phase { angle: wrapped }),
        }
    }
    out
}

/// Program for 1 ⊕ sⱼ (or its inverse) at 0 ≤ θ ≤ π/6 built from the
/// angles of [`pulse_angles`].
pub fn compile_controlled_s(which: u8, theta: f64, inverse: bool) -> Result<PulseProgram, PulseError> {
    let PulseAngles { alpha, beta, gamma } = pulse_angles(theta, which)?;
    let mut forward = Vec::new();
    if which == 2 {
        forward.push(rot(Spin::S, Axis::Y, gamma));
    }
    forward.push(PulseInstruction::Coupling { angle: alpha });
    forward.push(rot(Spin::S, Axis::Z, -alpha));
    forward.push(rot(Spin::I, Axis::Z, PI - beta));
    if which == 2 {
        forward.push(rot(Spin::S, Axis::Y, -gamma));
    }
    forward.push(PulseInstruction::Phase {
        angle: (PI - beta) / 2.0,
    });

    let instructions = if inverse {
        forward.iter().rev().map(PulseInstruction::inverse).collect()
    } else {
        forward
    };
    Ok(PulseProgram::new(
        normalize_couplings(instructions),
        ProgramTarget::ControlledS { which, theta, inverse },
    ))
}

/// ZYZ factorisation W = e^{iφ}·R_z(a)·R_y(b)·R_z(c); returns (φ, a, b, c).
pub fn zyz_decompose(w: &ComplexMatrix) -> Result<(f64, f64, f64, f64), PulseError> {
    if w.dim() != 2 || !w.is_unitary(1e-10) {
        return Err(PulseError::BadTarget);
    }
    let det = w[(0, 0)] * w[(1, 1)] - w[(0, 1)] * w[(1, 0)];
    let phi = det.arg() / 2.0;
    let su = w.scale(Complex64::from_polar(1.0, -phi));
    let (c00, c10, c11) = (su[(0, 0)], su[(1, 0)], su[(1, 1)]);
    let b = 2.0 * c10.norm().atan2(c00.norm());
    // su = [[e^{−i(a+c)/2} cos, −e^{−i(a−c)/2} sin], [e^{i(a−c)/2} sin, e^{i(a+c)/2} cos]]
    let sum = if c11.norm() > 1e-12 { 2.0 * c11.arg() } else { 0.0 };
    let diff = if c10.norm() > 1e-12 { 2.0 * c10.arg() } else { 0.0 };
    Ok((phi, (sum + diff) / 2.0, b, (sum - diff) / 2.0))
}

/// Program for 1 ⊕ W for any 2×2 unitary W, from its ZYZ factors: each
/// factor is made controlled with a coupling evolution, R_y factors by
/// conjugating a controlled R_z with R_x(−π/2) = R_z(−π/2)·R_y(−π/2)·R_z(π/2).
pub fn compile_controlled_unitary(w: &ComplexMatrix) -> Result<PulseProgram, PulseError> {
    let (phi, a, b, c) = zyz_decompose(w)?;
    let controlled_rz = |t: f64| {
        [
            PulseInstruction::Coupling { angle: -t / 2.0 },
            rot(Spin::S, Axis::Z, t / 2.0),
        ]
    };

    let mut seq = Vec::new();
    // Application order is the reverse of the matrix product Rz(a)Ry(b)Rz(c).
    seq.extend(controlled_rz(c));
    // V† then controlled R_z(b) then V, with V = R_x(−π/2).
    seq.extend([
        rot(Spin::S, Axis::Z, FRAC_PI_2),
        rot(Spin::S, Axis::Y, FRAC_PI_2),
        rot(Spin::S, Axis::Z, -FRAC_PI_2),
    ]);
    seq.extend(controlled_rz(b));
    seq.extend([
        rot(Spin::S, Axis::Z, FRAC_PI_2),
        rot(Spin::S, Axis::Y, -FRAC_PI_2),
        rot(Spin::S, Axis::Z, -FRAC_PI_2),
    ]);
    seq.extend(controlled_rz(a));
    // diag(1, e^{iφ}) on the control = e^{iφ/2}·R_z¹(φ).
    seq.push(rot(Spin::I, Axis::Z, phi));
    seq.push(PulseInstruction::Phase { angle: phi / 2.0 });
    Ok(PulseProgram::new(
        normalize_couplings(seq),
        ProgramTarget::ControlledUnitary,
    ))
}

/// Product of the instruction propagators, later instructions on the left.
pub fn simulate_program(p: &PulseProgram) -> ComplexMatrix {
    p.instructions
        .iter()
        .fold(ComplexMatrix::identity(4), |acc, ins| &ins.propagator() * &acc)
}

/// |tr(target† U)| / dim, insensitive to a global phase.
pub fn verify_program(p: &PulseProgram, target: &ComplexMatrix) -> Result<f64, PulseError> {
    if target.dim() != 4 {
        return Err(PulseError::DimensionMismatch(target.dim()));
    }
    let u = simulate_program(p);
    let overlap: Complex64 = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .map(|(r, c)| target[(r, c)].conj() * u[(r, c)])
        .fold(ZERO, |acc, z| acc + z);
    Ok(overlap.norm() / 4.0)
}
