//! Requirement↔capability scoring.
//!
//! The score blends three signals: embedding similarity of the prose
//! descriptions (weight 0.5), canonical-token Jaccard similarity of the
//! names (0.3), and the fraction of parameters that are type-compatible
//! (0.2). A separate, stricter predicate decides *exactness* — full
//! signature agreement — because a high blended score alone never proves
//! the signatures line up.

use crate::doc::{ControlCapability, ControlRequirement, ParamSpec, SemanticType};
use crate::gen::embed::text_similarity;
use crate::nfsim::units::convertible;

use super::synonyms::SynonymTable;
use super::tokens::{name_similarity, normalize_name};

pub const WEIGHT_DESCRIPTION: f64 = 0.5;
pub const WEIGHT_NAME: f64 = 0.3;
pub const WEIGHT_PARAMS: f64 = 0.2;

/// Whether a value of spec `a` can be adapted into spec `b` (or vice
/// versa — the relation is symmetric): equal types, numeric casts, or
/// text↔numeric when both sides carry a unit tag (a number in a string is
/// only interpretable as a quantity when tagged). Units must be equal or
/// convertible within their dimension.
pub fn params_compatible(a: &ParamSpec, b: &ParamSpec) -> bool {
    use SemanticType::*;
    let types_ok = match (a.semantic_type, b.semantic_type) {
        (x, y) if x == y => true,
        (Integer, Real) | (Real, Integer) => true,
        (Text, Integer) | (Text, Real) | (Integer, Text) | (Real, Text) => {
            a.unit.is_some() && b.unit.is_some()
        }
        _ => false,
    };
    let units_ok = match (a.unit, b.unit) {
        (None, None) => true,
        (Some(ua), Some(ub)) => ua == ub || convertible(ua, ub),
        _ => false,
    };
    types_ok && units_ok
}

/// Greedy best-effort assignment of requirement params to capability
/// params; returns the fraction of the larger parameter list that found a
/// compatible partner. Two empty lists are perfectly compatible.
pub fn param_fraction(req: &[ParamSpec], cap: &[ParamSpec], table: &SynonymTable) -> f64 {
    let denom = req.len().max(cap.len());
    if denom == 0 {
        return 1.0;
    }
    let mut used = vec![false; cap.len()];
    let mut matched = 0usize;
    for rp in req {
        let mut best: Option<(usize, f64)> = None;
        for (j, cp) in cap.iter().enumerate() {
            if used[j] || !params_compatible(rp, cp) {
                continue;
            }
            let sim = name_similarity(rp.name.as_str(), cp.name.as_str(), table);
            if best.is_none_or(|(_, s)| sim > s) {
                best = Some((j, sim));
            }
        }
        if let Some((j, _)) = best {
            used[j] = true;
            matched += 1;
        }
    }
    matched as f64 / denom as f64
}

/// The three component scores and their weighted blend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBreakdown {
    pub description: f64,
    pub name: f64,
    pub params: f64,
    pub total: f64,
}

/// Score one requirement against one capability.
pub fn score_pair(
    req: &ControlRequirement,
    cap: &ControlCapability,
    table: &SynonymTable,
) -> ScoreBreakdown {
    let description = text_similarity(&req.description, &cap.description);
    let name = name_similarity(req.name.as_str(), cap.name.as_str(), table);
    let params = param_fraction(&req.params, &cap.params, table);
    ScoreBreakdown {
        description,
        name,
        params,
        total: WEIGHT_DESCRIPTION * description + WEIGHT_NAME * name + WEIGHT_PARAMS * params,
    }
}

fn canonical_set(name: &str, table: &SynonymTable) -> std::collections::BTreeSet<String> {
    normalize_name(name, table).into_iter().collect()
}

fn fields_exact(req: &[ParamSpec], cap: &[ParamSpec], table: &SynonymTable) -> bool {
    if req.len() != cap.len() {
        return false;
    }
    let mut used = vec![false; cap.len()];
    'outer: for rp in req {
        for (j, cp) in cap.iter().enumerate() {
            if used[j] {
                continue;
            }
            if rp.semantic_type == cp.semantic_type
                && rp.unit == cp.unit
                && canonical_set(rp.name.as_str(), table) == canonical_set(cp.name.as_str(), table)
            {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Full signature compatibility: canonically equal names, and a perfect
/// param/return correspondence with equal types and units.
pub fn is_exact(req: &ControlRequirement, cap: &ControlCapability, table: &SynonymTable) -> bool {
    canonical_set(req.name.as_str(), table) == canonical_set(cap.name.as_str(), table)
        && fields_exact(&req.params, &cap.params, table)
        && fields_exact(&req.returns, &cap.returns, table)
}

/// One ranked candidate.
#[derive(Debug, Clone)]
pub struct ScoredCandidate<'a> {
    pub capability: &'a ControlCapability,
    pub breakdown: ScoreBreakdown,
    pub exact: bool,
}

/// Score a requirement against every capability, best first (ties broken
/// by capability name for determinism).
pub fn rank_candidates<'a>(
    req: &ControlRequirement,
    caps: &'a [ControlCapability],
    table: &SynonymTable,
) -> Vec<ScoredCandidate<'a>> {
    let mut out: Vec<ScoredCandidate<'a>> = caps
        .iter()
        .map(|cap| ScoredCandidate {
            capability: cap,
            breakdown: score_pair(req, cap, table),
            exact: is_exact(req, cap, table),
        })
        .collect();
    out.sort_by(|a, b| {
        b.breakdown
            .total
            .partial_cmp(&a.breakdown.total)
            .expect("scores are finite")
            .then_with(|| a.capability.name.as_str().cmp(b.capability.name.as_str()))
    });
    out
}
