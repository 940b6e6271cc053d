//! Bracket polynomial by explicit state sum over Temperley-Lieb diagrams.
//!
//! Every crossing of the braid is smoothed in one of two ways, giving either
//! the identity diagram or the cup-cap eᵢ on strands (i, i+1):
//!
//! ```text
//! ⟨σᵢ⟩   = A·⟨1⟩   + A⁻¹·⟨eᵢ⟩
//! ⟨σᵢ⁻¹⟩ = A⁻¹·⟨1⟩ + A·⟨eᵢ⟩
//! ```
//!
//! The smoothed diagrams are stacked, the result is closed off, and each
//! state contributes A^(#A − #B)·δ^(circles − 1) with δ = −A² − A⁻², so the
//! unknot has bracket 1. This module is independent of the matrix
//! representation and serves as its oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::braid::BraidWord;

/// Largest strand count accepted by [`bracket_state_sum`].
pub const MAX_STRANDS: usize = 8;
/// Largest crossing count accepted by [`bracket_state_sum`] (2^20 states).
pub const MAX_CROSSINGS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateSumError {
    #[error("state sum limited to {max} strands, braid has {got}")]
    TooManyStrands { got: usize, max: usize },
    #[error("state sum limited to {max} crossings, braid has {got}")]
    TooManyCrossings { got: usize, max: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("cannot compose diagrams on {0} and {1} strands")]
    StrandMismatch(usize, usize),
}

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            rank: vec![0; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// A Temperley-Lieb diagram on `n` strands: a planar perfect matching of the
/// `2n` boundary points plus the number of closed loops it carries.
///
/// Points `0..n` are on the top edge left to right, points `n..2n` on the
/// bottom edge left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TlDiagram {
    strands: usize,
    matching: Vec<usize>,
    loops: u32,
}

impl TlDiagram {
    pub fn identity(strands: usize) -> Self {
        let n = strands;
        let matching = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self {
            strands,
            matching,
            loops: 0,
        }
    }

    /// eᵢ: a cap joining top points i, i+1 over a cup joining the bottom ones
    /// (1-based `i`, as for braid generators).
    pub fn cup_cap(strands: usize, i: usize) -> Self {
        assert!(i >= 1 && i < strands, "cup-cap index out of range");
        let mut d = Self::identity(strands);
        let (l, r) = (i - 1, i);
        let n = strands;
        d.matching[l] = r;
        d.matching[r] = l;
        d.matching[n + l] = n + r;
        d.matching[n + r] = n + l;
        d
    }

    /// Validates that `matching` is a planar perfect matching.
    pub fn from_matching(strands: usize, matching: Vec<usize>, loops: u32) -> Result<Self, StateSumError> {
        let d = Self {
            strands,
            matching,
            loops,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn loops(&self) -> u32 {
        self.loops
    }

    /// Position of a boundary point on the circle bounding the diagram,
    /// walking the top edge left to right and then the bottom edge back.
    fn circular_position(&self, p: usize) -> usize {
        let n = self.strands;
        if p < n {
            p
        } else {
            3 * n - 1 - p
        }
    }

    pub fn is_planar(&self) -> bool {
        let chords: Vec<(usize, usize)> = (0..2 * self.strands)
            .filter(|&p| p < self.matching[p])
            .map(|p| {
                let (a, b) = (self.circular_position(p), self.circular_position(self.matching[p]));
                (a.min(b), a.max(b))
            })
            .collect();
        chords.iter().enumerate().all(|(k, &(a, b))| {
            chords[k + 1..]
                .iter()
                .all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
        })
    }

    fn validate(&self) -> Result<(), StateSumError> {
        let m = 2 * self.strands;
        if self.matching.len() != m {
            return Err(StateSumError::InvalidDiagram(format!(
                "expected {m} boundary points, got {}",
                self.matching.len()
            )));
        }
        for (p, &q) in self.matching.iter().enumerate() {
            if q >= m || q == p || self.matching[q] != p {
                return Err(StateSumError::InvalidDiagram(format!(
                    "point {p} is not properly paired"
                )));
            }
        }
        if !self.is_planar() {
            return Err(StateSumError::InvalidDiagram("matching is not planar".into()));
        }
        Ok(())
    }

    /// Number of circles in the closure of the diagram (top point i joined
    /// to bottom point i), including the loops already carried.
    pub fn closure_loops(&self) -> u32 {
        let n = self.strands;
        let mut uf = UnionFind::new(2 * n);
        for (p, &q) in self.matching.iter().enumerate() {
            uf.union(p, q);
        }
        for i in 0..n {
            uf.union(i, n + i);
        }
        let circles = (0..2 * n).filter(|&p| uf.find(p) == p).count() as u32;
        self.loops + circles
    }
}

/// Stacks `lower` under `upper`, joining the bottom of `upper` to the top of
/// `lower`. Components that touch neither outer edge become loops.
pub fn compose_tl(upper: &TlDiagram, lower: &TlDiagram) -> Result<TlDiagram, StateSumError> {
    let n = upper.strands;
    if lower.strands != n {
        return Err(StateSumError::StrandMismatch(n, lower.strands));
    }
    // Nodes: 0..n upper top, n..2n the shared middle row, 2n..3n lower bottom.
    let mut uf = UnionFind::new(3 * n);
    for (p, &q) in upper.matching.iter().enumerate() {
        uf.union(p, q);
    }
    for (p, &q) in lower.matching.iter().enumerate() {
        uf.union(p + n, q + n);
    }

    let outer = |node: usize| node < n || node >= 2 * n;
    let to_point = |node: usize| if node < n { node } else { node - n };
    let mut partner_by_root = vec![usize::MAX; 3 * n];
    let mut matching = vec![usize::MAX; 2 * n];
    for node in (0..3 * n).filter(|&v| outer(v)) {
        let root = uf.find(node);
        match partner_by_root[root] {
            usize::MAX => partner_by_root[root] = node,
            other => {
                matching[to_point(node)] = to_point(other);
                matching[to_point(other)] = to_point(node);
            }
        }
    }
    let mut touches_outer = vec![false; 3 * n];
    for node in (0..3 * n).filter(|&v| outer(v)) {
        let root = uf.find(node);
        touches_outer[root] = true;
    }
    let new_loops = (n..2 * n).filter(|&v| uf.find(v) == v && !touches_outer[v]).count() as u32;

    Ok(TlDiagram {
        strands: n,
        matching,
        loops: upper.loops + lower.loops + new_loops,
    })
}

/// ⟨b̄⟩ at `a` by enumerating all 2^c smoothings, normalised so that the
/// unknot has bracket 1.
pub fn bracket_state_sum(b: &BraidWord, a: Complex64) -> Result<Complex64, StateSumError> {
    let n = b.strands();
    let c = b.len();
    if n > MAX_STRANDS {
        return Err(StateSumError::TooManyStrands {
            got: n,
            max: MAX_STRANDS,
        });
    }
    if c > MAX_CROSSINGS {
        return Err(StateSumError::TooManyCrossings {
            got: c,
            max: MAX_CROSSINGS,
        });
    }

    let a_inv = a.inv();
    let delta = -a * a - a_inv * a_inv;
    let identity = TlDiagram::identity(n);
    let cups: Vec<TlDiagram> = (1..n).map(|i| TlDiagram::cup_cap(n, i)).collect();

    let mut total = Complex64::new(0.0, 0.0);
    for state in 0u32..(1 << c) {
        let mut diagram = identity.clone();
        let mut a_count: i32 = 0;
        for (k, g) in b.letters().iter().enumerate() {
            let a_smoothing = state & (1 << k) == 0;
            if a_smoothing {
                a_count += 1;
            }
            // The A-smoothing of a positive crossing keeps the strands
            // vertical; for a negative crossing it is the cup-cap.
            let vertical = a_smoothing != g.is_inverse();
            if !vertical {
                diagram = compose_tl(&diagram, &cups[g.index() - 1])?;
            }
        }
        let b_count = c as i32 - a_count;
        let circles = diagram.closure_loops() as i32;
        total += a.powi(a_count - b_count) * delta.powi(circles - 1);
    }
    Ok(total)
}
