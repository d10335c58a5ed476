//! The matching agent: scores a control-function requirement against a
//! capability document, confirms the pick through a text backend, and
//! assembles the resulting function-requirement document.

pub mod cfr;
pub mod classify;
pub mod score;
pub mod synonyms;
pub mod tokens;

pub use cfr::{
    build_cfr, derive_client_spec, negotiate_encoding, render_match_report, run_matching_session,
    ClientFunction, ClientSpec, MatchingSessionOutput,
};
pub use classify::{
    classify, classify_with_table, Classified, MatchDecision, MatchError, MatchOutcome,
    MatchingThresholds, MAX_CLASSIFY_ATTEMPTS, RETRIEVE_K,
};
pub use score::{
    is_exact, param_fraction, params_compatible, rank_candidates, score_pair, ScoreBreakdown,
    ScoredCandidate, WEIGHT_DESCRIPTION, WEIGHT_NAME, WEIGHT_PARAMS,
};
pub use synonyms::SynonymTable;
pub use tokens::{name_similarity, normalize_name, split_words};
