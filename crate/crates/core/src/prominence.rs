//! Global L1 prestige and L1 centrality.
//!
//! Both measures rank vertices by how little extra multiplicity a vertex
//! needs before it joins the graph median. *Prestige* weights incoming
//! proximity (the median minimizes the multiplicity-weighted sum of
//! distances from all vertices to it); *centrality* is the dual with the
//! distance orientation reversed.
//!
//! The measure has a closed form: with geodesic distances `d`, symmetry
//! constant `S`, multiplicities `eta` summing to `eta_total`,
//!
//! ```text
//! Pres(k) = 1 - S * max_{j != k} { sum_i eta_i * (d(i,k) - d(i,j))
//!                                  / (eta_total * d(k,j)) }^+
//! ```
//!
//! where `{x}^+ = max(0, x)`. Values lie in [0, 1]; a vertex attains 1
//! exactly when it is a median vertex. [`l1_prominence_matrix_form`]
//! evaluates the same quantity along an algebraically rearranged route and
//! is used as a cross-check; [`oracle_prestige`] evaluates the defining
//! minimum-multiplicity program directly by bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodesics::{DistanceMatrix, SymmetryConstant};
use crate::graph::VertexId;

/// Default absolute tolerance for tie detection among weighted distance
/// sums (reciprocal-count weights produce many near-ties).
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

/// Which prominence orientation a value measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Incoming proximity: importance in receiving choices.
    Prestige,
    /// Outgoing proximity: importance in giving choices.
    Centrality,
}

impl Kind {
    /// Distance "from `a` to `b`" in this orientation: prestige reads the
    /// matrix directly, centrality reads the transpose.
    #[inline]
    pub(crate) fn dist(self, d: &DistanceMatrix, a: usize, b: usize) -> f64 {
        match self {
            Kind::Prestige => d.get(a, b),
            Kind::Centrality => d.get(b, a),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Kind::Prestige => "prestige",
            Kind::Centrality => "centrality",
        }
    }
}

/// Per-vertex prominence values in [0, 1] for one measure.
#[derive(Debug, Clone)]
pub struct ProminenceVector {
    pub kind: Kind,
    /// Locality level the values were computed at; 1 for the global measure.
    pub alpha: f64,
    pub values: Vec<f64>,
    /// How many values were clamped into [0, 1] (rounding guard; clamps
    /// only ever trim sub-1e-9 overshoot).
    pub clamp_events: usize,
}

/// The set of vertices minimizing the weighted distance sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianSet {
    pub kind: Kind,
    /// Members sorted by index; never empty.
    pub members: Vec<VertexId>,
}

impl MedianSet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

fn check_dims(d: &DistanceMatrix, eta: &[f64]) -> Result<()> {
    if eta.len() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            got: eta.len(),
        });
    }
    Ok(())
}

/// Entry `i` is `sum_j (eta_j / eta_total) * d(j, i)` for prestige, and the
/// transposed sum for centrality.
pub fn weighted_distance_sums(d: &DistanceMatrix, eta: &[f64], kind: Kind) -> Result<Vec<f64>> {
    check_dims(d, eta)?;
    let n = d.n();
    let eta_total: f64 = eta.iter().sum();
    let props: Vec<f64> = eta.iter().map(|e| e / eta_total).collect();
    let sums = (0..n)
        .map(|i| (0..n).map(|j| props[j] * kind.dist(d, j, i)).sum())
        .collect();
    Ok(sums)
}

/// Argmin set of [`weighted_distance_sums`] with absolute tie tolerance
/// `tie_tol * max(1, |min|)`.
pub fn median_set_with(
    d: &DistanceMatrix,
    eta: &[f64],
    kind: Kind,
    tie_tol: f64,
) -> Result<MedianSet> {
    let sums = weighted_distance_sums(d, eta, kind)?;
    let min = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    let cutoff = min + tie_tol * min.abs().max(1.0);
    let members = sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| VertexId(i))
        .collect();
    Ok(MedianSet { kind, members })
}

/// Prestige median: vertices minimizing the weighted sum of distances from
/// all vertices to them.
pub fn prestige_median(d: &DistanceMatrix, eta: &[f64]) -> Result<MedianSet> {
    median_set_with(d, eta, Kind::Prestige, DEFAULT_TIE_TOLERANCE)
}

/// Centrality median: vertices minimizing the weighted sum of distances
/// from them to all vertices.
pub fn centrality_median(d: &DistanceMatrix, eta: &[f64]) -> Result<MedianSet> {
    median_set_with(d, eta, Kind::Centrality, DEFAULT_TIE_TOLERANCE)
}

// ---------------------------------------------------------------------------
// Shared evaluation kernel.
//
// Multiplicities are normalized by their maximum before any arithmetic. The
// measure is scale invariant, and working with eta_i / eta_max keeps that
// invariance exact in floating point whenever the multiplicity ratios are
// exactly representable (the normalization divides out a common factor that
// would otherwise perturb every product differently).
// ---------------------------------------------------------------------------

pub(crate) fn normalize_multiplicities(eta: &[f64]) -> Vec<f64> {
    let max = eta.iter().cloned().fold(0.0f64, f64::max);
    debug_assert!(max > 0.0, "total multiplicity must be positive");
    eta.iter().map(|e| e / max).collect()
}

/// One prominence value: the measure of `anchor` evaluated over `members`
/// (which must contain `anchor`). For `members = V` this is the global
/// measure; for a neighborhood it is the local one. Returns the raw,
/// unclamped value.
pub(crate) fn prominence_value(
    d: &DistanceMatrix,
    q: &[f64],
    s: f64,
    kind: Kind,
    anchor: usize,
    members: &[usize],
) -> f64 {
    let q_total: f64 = members.iter().map(|&i| q[i]).sum();
    if q_total == 0.0 {
        // All members weightless: every numerator vanishes, so the
        // limiting bracket is zero.
        return 1.0;
    }
    let mut bracket = 0.0f64;
    for &j in members {
        if j == anchor {
            continue;
        }
        let mut num = 0.0;
        for &i in members {
            num += q[i] * (kind.dist(d, i, anchor) - kind.dist(d, i, j));
        }
        let t = num / (q_total * kind.dist(d, anchor, j));
        if t > bracket {
            bracket = t;
        }
    }
    1.0 - s * bracket
}

/// Clamp into [0, 1], counting how often clamping fired. Rounding noise is
/// the only legitimate cause, so anything beyond 1e-9 is a bug.
pub(crate) fn clamp_unit(value: f64, events: &mut usize) -> f64 {
    if (0.0..=1.0).contains(&value) {
        return value;
    }
    debug_assert!(
        value > -1e-9 && value < 1.0 + 1e-9,
        "prominence value {value} outside [0,1] by more than 1e-9"
    );
    *events += 1;
    value.clamp(0.0, 1.0)
}

fn l1_prominence_impl(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
    kind: Kind,
) -> Result<ProminenceVector> {
    check_dims(d, eta)?;
    let n = d.n();
    if n == 1 {
        // A single vertex is trivially the median.
        return Ok(ProminenceVector {
            kind,
            alpha: 1.0,
            values: vec![1.0],
            clamp_events: 0,
        });
    }
    let q = normalize_multiplicities(eta);
    let members: Vec<usize> = (0..n).collect();
    let raw: Vec<f64> = members
        .par_iter()
        .map(|&k| prominence_value(d, &q, s.value(), kind, k, &members))
        .collect();
    let mut clamp_events = 0;
    let values = raw
        .into_iter()
        .map(|v| clamp_unit(v, &mut clamp_events))
        .collect();
    Ok(ProminenceVector {
        kind,
        alpha: 1.0,
        values,
        clamp_events,
    })
}

/// Global L1 prestige of every vertex (closed form).
pub fn l1_prestige(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
) -> Result<ProminenceVector> {
    l1_prominence_impl(d, eta, s, Kind::Prestige)
}

/// Global L1 centrality: identical to [`l1_prestige`] applied to the
/// transposed distance matrix (the symmetry constant is unchanged under
/// transposition).
pub fn l1_centrality(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
) -> Result<ProminenceVector> {
    l1_prominence_impl(d, eta, s, Kind::Centrality)
}

/// Matrix-form route: `1 - (S/eta_total) * rowmax{ (D'eta 1' - 1 eta'D) / D }^+`
/// with element-wise division, diagonals skipped, `{.}^+` element-wise.
/// Algebraically identical to the closed form; numerically an independent
/// path used for cross-checking.
pub fn l1_prominence_matrix_form(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
    kind: Kind,
) -> Result<ProminenceVector> {
    check_dims(d, eta)?;
    let n = d.n();
    if n == 1 {
        return Ok(ProminenceVector {
            kind,
            alpha: 1.0,
            values: vec![1.0],
            clamp_events: 0,
        });
    }
    let eta_total: f64 = eta.iter().sum();
    // a[k] = sum_i eta_i * d(i, k) in this orientation (the D' eta vector).
    let a: Vec<f64> = (0..n)
        .map(|k| (0..n).map(|i| eta[i] * kind.dist(d, i, k)).sum())
        .collect();
    let mut clamp_events = 0;
    let values = (0..n)
        .map(|k| {
            let mut rowmax = f64::NEG_INFINITY;
            for j in 0..n {
                if j == k {
                    continue;
                }
                let m = (a[k] - a[j]) / kind.dist(d, k, j);
                if m > rowmax {
                    rowmax = m;
                }
            }
            let bracket = rowmax.max(0.0);
            clamp_unit(1.0 - s.value() / eta_total * bracket, &mut clamp_events)
        })
        .collect();
    Ok(ProminenceVector {
        kind,
        alpha: 1.0,
        values,
        clamp_events,
    })
}

/// Matrix-form L1 prestige (see [`l1_prominence_matrix_form`]).
pub fn l1_prestige_matrix_form(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
) -> Result<ProminenceVector> {
    l1_prominence_matrix_form(d, eta, s, Kind::Prestige)
}

/// Matrix-form L1 centrality (see [`l1_prominence_matrix_form`]).
pub fn l1_centrality_matrix_form(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
) -> Result<ProminenceVector> {
    l1_prominence_matrix_form(d, eta, s, Kind::Centrality)
}

/// Definitional evaluation of the prestige of one vertex: bisect for the
/// smallest `w >= 0` such that adding `w` to vertex `k`'s multiplicity
/// proportion makes it a prestige median vertex, then return `1 - S*w`.
///
/// Membership is tested directly against the median program (never through
/// the closed form), so this serves as an independent oracle for
/// [`l1_prestige`].
pub fn oracle_prestige(
    d: &DistanceMatrix,
    eta: &[f64],
    s: SymmetryConstant,
    k: VertexId,
) -> Result<f64> {
    check_dims(d, eta)?;
    let n = d.n();
    let k = k.index();
    let sums = weighted_distance_sums(d, eta, Kind::Prestige)?;
    // Boosting vertex k by w adds w * d(k, i) to candidate i's objective
    // and nothing to k's own (d(k, k) = 0).
    let member = |w: f64| -> bool {
        let fk = sums[k];
        (0..n).all(|i| i == k || fk <= sums[i] + w * d.get(k, i))
    };

    if member(0.0) {
        return Ok(1.0);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0 / s.value() + 1.0;
    if !member(hi) {
        return Err(Error::NoConvergence);
    }
    for _ in 0..80 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(1.0 - s.value() * hi)
}
