//! Document chunking for retrieval.
//!
//! Prose API documentation arrives as blank-line-separated blocks (one per
//! function, by convention). Chunking packs consecutive blocks greedily up
//! to a token budget, never splitting a block unless a single block alone
//! is grossly oversized. Separators stay attached, so concatenating all
//! chunks reproduces the input byte-for-byte.

use super::backend::estimate_tokens;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    /// Position in the chunk sequence, 0-based.
    pub index: usize,
    pub text: String,
}

/// Split into blocks at blank-line boundaries. Each block keeps its trailing
/// newlines so the split is lossless.
fn split_blocks(text: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let bytes = text.as_bytes();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        // A block boundary is a newline followed by one or more blank lines;
        // consume the whole run of newlines/blank lines into the left block.
        if bytes[i] == b'\n' {
            let mut j = i + 1;
            let mut saw_blank = false;
            loop {
                let line_start = j;
                while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'\n' {
                    saw_blank = true;
                    j += 1;
                } else {
                    j = line_start;
                    break;
                }
            }
            if saw_blank && j < bytes.len() {
                blocks.push(&text[start..j]);
                start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    if start < bytes.len() {
        blocks.push(&text[start..]);
    }
    blocks
}

/// Hard-split an oversized block at char boundaries into pieces of at most
/// `target_tokens` tokens.
fn hard_split(block: &str, target_tokens: u64, out: &mut Vec<String>) {
    let max_bytes = (target_tokens as usize).saturating_mul(4).max(4);
    let mut rest = block;
    while !rest.is_empty() {
        if rest.len() <= max_bytes {
            out.push(rest.to_string());
            break;
        }
        let mut cut = max_bytes;
        while !rest.is_char_boundary(cut) {
            cut -= 1;
        }
        out.push(rest[..cut].to_string());
        rest = &rest[cut..];
    }
}

/// Chunk a document to roughly `target_tokens`-sized pieces.
pub fn chunk_document(text: &str, target_tokens: u64) -> Vec<Chunk> {
    let target_tokens = target_tokens.max(1);
    let mut pieces: Vec<String> = Vec::new();
    let mut current = String::new();
    for block in split_blocks(text) {
        let block_tokens = estimate_tokens(block);
        if block_tokens > 2 * target_tokens {
            if !current.is_empty() {
                pieces.push(std::mem::take(&mut current));
            }
            hard_split(block, target_tokens, &mut pieces);
            continue;
        }
        let candidate_tokens = estimate_tokens(&current) + block_tokens;
        if !current.is_empty() && candidate_tokens > target_tokens {
            pieces.push(std::mem::take(&mut current));
        }
        current.push_str(block);
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
        .into_iter()
        .enumerate()
        .map(|(index, text)| Chunk { index, text })
        .collect()
}
