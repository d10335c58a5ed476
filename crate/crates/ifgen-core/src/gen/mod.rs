//! Text-generation backends and the retrieval/prompt plumbing shared by
//! both agents: pluggable backends behind [`TextBackend`], bag-of-trigram
//! embeddings, document chunking, top-k retrieval, token cost accounting,
//! and the machine-readable task envelope embedded in prompts.

pub mod backend;
pub mod chunk;
pub mod cost;
pub mod embed;
pub mod mock;
pub mod remote;
pub mod retrieval;
pub mod task;

pub use backend::{
    estimate_tokens, BackendRegistry, BackendSettings, GenError, GenerationRequest,
    GenerationResponse, RemoteSettings, TextBackend, TokenUsage,
};
pub use chunk::{chunk_document, Chunk};
pub use cost::{accumulate_cost, cost_of, ModelPrice, PriceTable};
pub use embed::{cosine, embed, text_similarity, EMBED_DIM};
pub use mock::MockBackend;
pub use remote::RemoteBackend;
pub use retrieval::{Retrieved, RetrievalIndex};
pub use task::{
    embed_task, extract_task, BindingGenTask, MatchConfirmTask, ScoredInternal, ScoredName,
    TaskEnvelope, TASK_BEGIN, TASK_END,
};
