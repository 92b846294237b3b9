//! Host generators, each returning the graph together with what is known
//! about it: a planted packing and distance bound for far instances, or the
//! list of patterns it is certified free of.

mod compose;
mod easy;
mod lower_bound;

pub use compose::{compose_attach, compose_attach_by_degree};
pub use easy::{disjoint_copies_instance, yes_instance, YesStyle};
pub use lower_bound::{lb_construction, lb_layout, lb_size_for_m, two_hub_instance, LBLayout, LBParams};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{find_appearances, Graph, GraphError, Packing};

/// Above this many vertices, `InstanceBundle::validate` skips the
/// exhaustive freeness checks.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 3000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("obstacle has {0} vertices, at least 2 are needed")]
    ObstacleTooSmall(usize),
    #[error("n = {n} is too small, the construction needs at least {needed} vertices")]
    NTooSmall { n: usize, needed: usize },
    #[error("invalid obstacle: {0}")]
    InvalidObstacle(String),
    #[error("fraction must lie in (0, 1]")]
    BadFraction,
    #[error("attach vertex {vertex} out of range for a pattern on {k} vertices")]
    BadAttachVertex { vertex: usize, k: usize },
    #[error("could not certify the host free of family member {0}")]
    CannotCertify(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A nonnegative rational kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌊self · x⌋`.
    pub fn floor_mul(self, x: u64) -> u64 {
        (self.num as u128 * x as u128 / self.den as u128) as u64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `a/b`, an integer, or a plain decimal such as `0.3` (read
/// exactly as 3/10).
impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("not a fraction: {s:?}");
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            return Ok(Fraction::new(a, b));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let f: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(f)).ok_or_else(bad)?;
        Ok(Fraction::new(num, den))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct GroundTruth {
    pub planted_packing: Option<Packing>,
    /// The host is at least this far from freeness, per vertex.
    pub distance_lower_bound: Option<Fraction>,
    /// Patterns the host is certified not to contain.
    pub free_of: Vec<Graph>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceBundle {
    pub graph: Graph,
    pub ground_truth: GroundTruth,
    pub provenance: Provenance,
}

impl InstanceBundle {
    /// Re-checks the ground truth against the graph: the planted packing is
    /// edge-disjoint and valid, it is large enough for the claimed distance,
    /// and (up to `EXHAUSTIVE_CHECK_LIMIT` vertices) the host really avoids
    /// every pattern in `free_of`.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.graph.vertex_count() as u128;
        if let Some(p) = &self.ground_truth.planted_packing {
            if !p.is_valid(&self.graph) {
                return Err("planted packing is not a valid edge-disjoint packing".into());
            }
            if let Some(d) = self.ground_truth.distance_lower_bound {
                if (p.len() as u128) * (d.den as u128) < (d.num as u128) * n {
                    return Err(format!("packing of {} cannot support distance {d}", p.len()));
                }
            }
        } else if self.ground_truth.distance_lower_bound.is_some() {
            return Err("distance bound without a packing".into());
        }
        if self.graph.vertex_count() <= EXHAUSTIVE_CHECK_LIMIT {
            for (i, f) in self.ground_truth.free_of.iter().enumerate() {
                if !find_appearances(f, &self.graph, 1).map_err(|e| e.to_string())?.is_empty() {
                    return Err(format!("host contains certified-absent pattern #{i}"));
                }
            }
        }
        Ok(())
    }

    /// Whether deleting every planted edge leaves a host without the planted
    /// pattern. Exhaustive, so meant for small instances.
    pub fn residual_is_free(&self) -> Result<bool, GraphError> {
        match &self.ground_truth.planted_packing {
            None => Ok(true),
            Some(p) => Ok(find_appearances(&p.pattern, &p.residual(&self.graph), 1)?.is_empty()),
        }
    }
}
