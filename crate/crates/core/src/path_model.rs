//! Path-model representation of the Temperley-Lieb algebra on a line graph.
//!
//! Basis vectors are bitstrings read as walks on the graph `1 - 2 - ... - k`,
//! starting at node 1, where a `1` steps right and a `0` steps left. With
//! λₖ = sin(kθ) and d = 2cos θ, generator Eᵢ acts on bit positions (i, i+1)
//! through the rank-one projector |v(a)⟩⟨v(a)| on the local pair basis
//! (`01`, `10`), where a = z(i) is the node reached after the first i−1 bits
//! and
//!
//! ```text
//! |v(a)⟩ = ( √(λ_{a−1}/λ_a), √(λ_{a+1}/λ_a) )ᵀ
//! ```
//!
//! Local pairs `00` and `11` are annihilated. On the three-node graph with
//! three bits the space is spanned by `110` and `101`, and with
//! A = i·e^{iθ/2} the resulting braid representation coincides with the
//! two-projector representation of [`crate::tl_rep`] at θ' = π/2 + θ/2.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::braid::BraidGenerator;
use crate::matrix::{ComplexMatrix, I};
use crate::tl_rep::{build_u, ReprParams, Representation};

/// Basis positions of `[110, 101]` in the representation basis of
/// [`crate::tl_rep`]: the `101` state carries U₁'s non-zero eigenvector.
pub const TWO_PROJECTOR_BASIS_PERMUTATION: [usize; 2] = [1, 0];

/// Longest bitstring [`admissible_states`] will enumerate.
pub const MAX_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathModelError {
    #[error("line graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("walk {walk} leaves the graph after {step} steps")]
    InadmissiblePrefix { walk: String, step: usize },
    #[error("position {position} out of range for a walk of {len} bits")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("λ_{k} = sin({k}·θ) = {value} must be positive")]
    Parameter { k: usize, value: f64 },
    #[error("bitstring length {0} not supported (max {MAX_BITS})")]
    TooManyBits(usize),
    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),
    #[error("no admissible matching angle for θ = {0}")]
    Domain(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LineGraph {
    nodes: usize,
}

impl LineGraph {
    pub fn new(nodes: usize) -> Result<Self, PathModelError> {
        if nodes < 2 {
            return Err(PathModelError::TooFewNodes(nodes));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// A bitstring read as a walk; `true` is a step right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathState(Vec<bool>);

impl PathState {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn with_pair(&self, i: usize, pair: (bool, bool)) -> Self {
        let mut bits = self.0.clone();
        bits[i - 1] = pair.0;
        bits[i] = pair.1;
        Self(bits)
    }
}

impl fmt::Display for PathState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for PathState {
    type Err = PathModelError;

    fn from_str(s: &str) -> Result<Self, PathModelError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(PathModelError::InvalidBitstring(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PathState)
    }
}

/// z(i): the node reached after the first `i − 1` steps of `p`, starting
/// from node 1. `i` runs from 1 to `p.len() + 1`.
pub fn walk_endpoint(p: &PathState, i: usize, graph: &LineGraph) -> Result<usize, PathModelError> {
    if i == 0 || i > p.len() + 1 {
        return Err(PathModelError::PositionOutOfRange {
            position: i,
            len: p.len(),
        });
    }
    let mut node = 1usize;
    for (step, &right) in p.bits()[..i - 1].iter().enumerate() {
        node = match (right, node) {
            (true, n) if n < graph.nodes => n + 1,
            (false, n) if n > 1 => n - 1,
            _ => {
                return Err(PathModelError::InadmissiblePrefix {
                    walk: p.to_string(),
                    step: step + 1,
                })
            }
        };
    }
    Ok(node)
}

/// The admissible walks of a fixed length on a line graph, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBasis {
    graph: LineGraph,
    bits: usize,
    states: Vec<PathState>,
}

impl PathBasis {
    pub fn graph(&self) -> &LineGraph {
        &self.graph
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn states(&self) -> &[PathState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn position(&self, s: &PathState) -> Option<usize> {
        self.states.iter().position(|t| t == s)
    }
}

/// All walks of `bits` steps that stay on the graph, in descending
/// lexicographic order (so `[110, 101]` for three nodes and three bits).
pub fn admissible_states(graph: &LineGraph, bits: usize) -> Result<PathBasis, PathModelError> {
    if bits > MAX_BITS {
        return Err(PathModelError::TooManyBits(bits));
    }
    let mut states: Vec<PathState> = (0u32..1 << bits)
        .map(|code| PathState((0..bits).map(|k| code & (1 << (bits - 1 - k)) != 0).collect()))
        .filter(|p| walk_endpoint(p, bits + 1, graph).is_ok())
        .collect();
    states.sort_by(|a, b| b.cmp(a));
    Ok(PathBasis {
        graph: *graph,
        bits,
        states,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    theta: f64,
    nodes: usize,
}

impl PathParams {
    /// Requires λₖ = sin(kθ) > 0 for every node label k of `graph`.
    pub fn new(theta: f64, graph: &LineGraph) -> Result<Self, PathModelError> {
        let p = Self {
            theta,
            nodes: graph.nodes,
        };
        for k in 1..=graph.nodes {
            let value = p.lambda(k);
            if value.is_nan() || value <= 0.0 {
                return Err(PathModelError::Parameter { k, value });
            }
        }
        Ok(p)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// λₖ = sin(kθ).
    pub fn lambda(&self, k: usize) -> f64 {
        (k as f64 * self.theta).sin()
    }

    /// d = 2cos θ.
    pub fn d(&self) -> f64 {
        2.0 * self.theta.cos()
    }

    /// A = i·e^{iθ/2}, so that −A² − A⁻² = d.
    pub fn a(&self) -> Complex64 {
        I * Complex64::from_polar(1.0, self.theta / 2.0)
    }
}

/// Eᵢ on `basis` (1-based `i`, acting on bit positions i and i+1).
///
/// Partner states that leave the graph are dropped, which truncates the
/// projector at the far end of the graph unless λ_{k+1} = 0 there.
pub fn build_e(i: usize, params: &PathParams, basis: &PathBasis) -> Result<ComplexMatrix, PathModelError> {
    if i == 0 || i >= basis.bits {
        return Err(PathModelError::PositionOutOfRange {
            position: i,
            len: basis.bits,
        });
    }
    let lambda_pos = |k: usize| {
        let value = params.lambda(k);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(PathModelError::Parameter { k, value })
        }
    };
    let mut e = ComplexMatrix::zeros(basis.dim());
    for (col, s) in basis.states.iter().enumerate() {
        let pair = (s.bits()[i - 1], s.bits()[i]);
        if pair.0 == pair.1 {
            continue;
        }
        let a = walk_endpoint(s, i, &basis.graph)?;
        let la = lambda_pos(a)?;
        // Component of v(a) on the local pair 01 (back to a−1) or 10 (on to a+1).
        let component = |pair: (bool, bool)| {
            let neighbour = if pair == (false, true) { a - 1 } else { a + 1 };
            (params.lambda(neighbour).max(0.0) / la).sqrt()
        };
        let own = component(pair);
        for partner_pair in [(false, true), (true, false)] {
            let partner = s.with_pair(i, partner_pair);
            if let Some(row) = basis.position(&partner) {
                e[(row, col)] = Complex64::new(component(partner_pair) * own, 0.0);
            }
        }
    }
    Ok(e)
}

/// Braid generator image A·1 + A⁻¹·Eᵢ (or its inverse A⁻¹·1 + A·Eᵢ).
pub fn rho_generator(
    g: BraidGenerator,
    params: &PathParams,
    basis: &PathBasis,
) -> Result<ComplexMatrix, PathModelError> {
    let e = build_e(g.index(), params, basis)?;
    let a = if g.is_inverse() { params.a().inv() } else { params.a() };
    Ok(&ComplexMatrix::identity(basis.dim()).scale(a) + &e.scale(a.inv()))
}

/// The two-projector angle with the same A: θ' = π/2 + θ/2.
pub fn matched_two_projector_theta(theta: f64) -> f64 {
    FRAC_PI_2 + theta / 2.0
}

/// Maximum entrywise deviation between the path model on the three-node
/// graph at `theta` and the two-projector representation at
/// [`matched_two_projector_theta`], over E₁/U₁, E₂/U₂ and the images of σᵢ^±1. The path
/// model's `[110, 101]` basis is reordered by [`TWO_PROJECTOR_BASIS_PERMUTATION`]
/// before comparing.
pub fn two_projector_correspondence_check(theta: f64) -> Result<f64, PathModelError> {
    let graph = LineGraph::new(3)?;
    let basis = admissible_states(&graph, 3)?;
    let params = PathParams::new(theta, &graph)?;
    let tp_params = ReprParams::new(matched_two_projector_theta(theta)).map_err(|_| PathModelError::Domain(theta))?;
    if (tp_params.a() - params.a()).norm() > 1e-12 || (tp_params.delta() - params.d()).abs() > 1e-12 {
        return Err(PathModelError::Domain(theta));
    }

    let (u1, u2) = build_u(&tp_params);
    let two_proj_rep = Representation::new(tp_params);
    let perm = TWO_PROJECTOR_BASIS_PERMUTATION;

    let mut worst: f64 = 0.0;
    for (i, u) in [(1, &u1), (2, &u2)] {
        let e = build_e(i, &params, &basis)?.permuted(&perm);
        worst = worst.max(e.max_abs_diff(u));
        for inverse in [false, true] {
            let g = BraidGenerator::new(i, inverse);
            let path = rho_generator(g, &params, &basis)?.permuted(&perm);
            let two_proj = two_proj_rep.generator(g).expect("σ₁, σ₂ are supported");
            worst = worst.max(path.max_abs_diff(two_proj));
        }
    }
    Ok(worst)
}
