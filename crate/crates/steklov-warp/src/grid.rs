//! 1D meshes of [0, L].
//!
//! Two policies: uniform for two-boundary profiles, and a right-graded mesh
//! for revolution profiles - uniform over the bulk with element sizes
//! decreasing geometrically toward the degenerate endpoint t = L (ratio
//! 0.9, floored at 1e-8 L) so that the vanishing coefficient
//! h^2 ~ (L-t)^2 is resolved. Profile breakpoints are always inserted as
//! nodes exactly.

use crate::error::{Error, Result};
use crate::profile::{ProfileKind, WarpProfile};

pub const GRADING_RATIO: f64 = 0.9;
pub const MIN_ELEMENT_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Uniform,
    GradedRight,
}

#[derive(Debug, Clone)]
pub struct Grid {
    nodes: Vec<f64>,
    grading: Grading,
}

impl Grid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn uniform(length: f64, n: usize) -> Grid {
        assert!(length > 0.0 && n >= 1);
        let nodes = (0..=n).map(|i| length * i as f64 / n as f64).collect();
        Grid { nodes, grading: Grading::Uniform }
    }

    pub fn from_nodes(nodes: Vec<f64>, grading: Grading) -> Result<Grid> {
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::Domain("grid needs nodes from 0 to L".into()));
        }
        for pair in nodes.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Domain(format!(
                    "grid nodes must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Grid { nodes, grading })
    }

    /// New grid with the given points inserted as nodes (deduplicated
    /// against existing nodes at relative tolerance 1e-12).
    pub fn refine_with(&self, extra: &[f64]) -> Grid {
        let l = self.length();
        let tol = 1e-12 * l;
        let mut nodes = self.nodes.clone();
        for &p in extra {
            if p <= 0.0 || p >= l {
                continue;
            }
            if nodes.iter().all(|&x| (x - p).abs() > tol) {
                nodes.push(p);
            }
        }
        nodes.sort_by(|a, b| a.total_cmp(b));
        Grid { nodes, grading: self.grading }
    }

    /// Grid with every element split in two (error-estimate companions).
    pub fn halved(&self) -> Grid {
        let mut nodes = Vec::with_capacity(self.nodes.len() * 2 - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(*self.nodes.last().unwrap());
        Grid { nodes, grading: self.grading }
    }
}

/// Mesh [0, L] for the given profile: uniform for two-boundary profiles,
/// right-graded for revolution profiles; breakpoints become nodes exactly.
pub fn make_grid(profile: &WarpProfile, n: usize) -> Result<Grid> {
    if n < 8 {
        return Err(Error::Domain(format!("mesh needs at least 8 elements, got {n}")));
    }
    let l = profile.length();
    let base = match profile.kind() {
        ProfileKind::ConditionH => Grid::uniform(l, n),
        ProfileKind::Revolution => graded_right(l, n),
    };
    Ok(base.refine_with(profile.breakpoints()))
}

/// Uniform elements over the bulk, then a geometric tail toward t = L:
/// sizes e_u * ratio^k for k = 1..n_tail, stopping at the 1e-8 L floor.
/// The tail never eats into the element budget by more than it must (about
/// 100 elements span eight decades at ratio 0.9), so n controls the bulk
/// resolution as usual.
fn graded_right(length: f64, n: usize) -> Grid {
    let ratio = GRADING_RATIO;
    let floor = MIN_ELEMENT_FRACTION * length;
    // Sum of ratio^1 + ... + ratio^m.
    let geom_sum = |m: usize| ratio * (1.0 - ratio.powi(m as i32)) / (1.0 - ratio);
    // For a given tail length the uniform size follows exactly; the tail
    // depth needed to reach the floor follows from the uniform size. The
    // integer fixed point settles in a few rounds.
    let mut n_tail = 1usize;
    for _ in 0..32 {
        let e_u = length / ((n - n_tail) as f64 + geom_sum(n_tail));
        let depth = ((floor / e_u).ln() / ratio.ln()).ceil();
        let wanted = if depth.is_finite() && depth > 1.0 {
            (depth as usize).min(n - 1)
        } else {
            1
        };
        if wanted == n_tail {
            break;
        }
        n_tail = wanted;
    }
    let e_u = length / ((n - n_tail) as f64 + geom_sum(n_tail));
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(0.0);
    for i in 1..=(n - n_tail) {
        nodes.push(e_u * i as f64);
    }
    let mut t = e_u * (n - n_tail) as f64;
    for k in 1..n_tail {
        t += e_u * ratio.powi(k as i32);
        nodes.push(t);
    }
    nodes.push(length);
    Grid { nodes, grading: Grading::GradedRight }
}
