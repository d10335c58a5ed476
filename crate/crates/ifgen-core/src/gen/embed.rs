//! A deterministic local text embedder.
//!
//! Character trigrams are hashed (FNV-1a) into a fixed 256-dimensional
//! count vector which is then L2-normalised. This is no substitute for a
//! learned embedding model, but it has the properties the rest of the
//! system needs from one: paraphrases of short technical descriptions land
//! close together, unrelated descriptions land far apart, and the same text
//! always produces the same vector on every platform.

pub const EMBED_DIM: usize = 256;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Lowercase, map every non-alphanumeric run to a single space, and trim.
fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last_space = true;
    for c in text.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
            last_space = false;
        } else if !last_space {
            out.push(' ');
            last_space = true;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

/// Embed a text into a unit-length vector (or the zero vector for texts
/// with no alphanumeric content, which nothing is similar to — including
/// another empty text).
pub fn embed(text: &str) -> Vec<f64> {
    let mut v = vec![0.0f64; EMBED_DIM];
    let norm = normalize(text);
    if norm.is_empty() {
        return v;
    }
    // Pad so that word boundaries contribute trigrams too.
    let padded = format!(" {norm} ");
    let bytes = padded.as_bytes();
    for w in bytes.windows(3) {
        let idx = (fnv1a(w) % EMBED_DIM as u64) as usize;
        v[idx] += 1.0;
    }
    let l2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if l2 > 0.0 {
        for x in &mut v {
            *x /= l2;
        }
    }
    v
}

/// Cosine similarity. Zero vectors are similar to nothing.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Convenience: cosine similarity of two texts' embeddings.
pub fn text_similarity(a: &str, b: &str) -> f64 {
    cosine(&embed(a), &embed(b))
}
