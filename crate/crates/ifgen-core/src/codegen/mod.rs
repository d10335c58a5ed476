//! The code-generation agent: retrieves relevant vendor API documentation,
//! asks a text backend to synthesize an interface binding, statically
//! checks the result, and exercises it against generated test vectors.

pub mod agent;
pub mod api_doc;
pub mod augment;
pub mod check;
pub mod infer;
pub mod repair;
pub mod spec;
pub mod validate;
pub mod vectors;

pub use agent::{
    build_doc_index, generate_entry_binding, retrieve_candidates, CodegenError, EntryGeneration,
    CHUNK_TARGET_TOKENS, RETRIEVAL_K,
};
pub use api_doc::{InternalFunction, VendorApiDoc};
pub use augment::{
    hint_is_known, synthesize_augmentation, AugmentError, SynthesizedAugmentation,
    HINT_GUARD_ON_TIMESTAMP, HINT_TIMESTAMP_RETURNS,
};
pub use check::static_check;
pub use infer::{infer_entry_binding, InferError};
pub use repair::{
    attempts_histogram, failed_requirements, provision_entry, run_codegen_session,
    CodegenSessionOutput, EntryProvision, ProvisionedBinding, SessionError,
    MAX_REPAIR_ATTEMPTS,
};
pub use spec::{AdaptStep, Augmentation, BindingEntry, BindingSpec, GuardFailPolicy};
pub use validate::{
    run_vector, validate_entry, EntryValidation, TestReport, VectorOutcome, VectorResult,
};
pub use vectors::{
    generate_vectors, vectors_from_notes, TestVector, VectorExpectation,
    MIN_VECTORS_PER_FUNCTION,
};
