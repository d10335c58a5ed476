//! The vendor-internal API documentation a codegen agent works from.
//!
//! Unlike the capability document, this never leaves the NF. It carries
//! both a structured form (for static checking and the deterministic
//! backend) and rendered prose (what a model actually reads, and what the
//! retrieval index is built over).

use serde::{Deserialize, Serialize};

use crate::doc::{Identifier, ParamSpec};

/// One function of the vendor's internal API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InternalFunction {
    pub name: Identifier,
    pub description: String,
    pub params: Vec<ParamSpec>,
    pub returns: Vec<ParamSpec>,
}

/// The internal API documentation of one NF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VendorApiDoc {
    pub nf_id: String,
    pub vendor: String,
    pub functions: Vec<InternalFunction>,
}

fn render_fields(fields: &[ParamSpec]) -> String {
    if fields.is_empty() {
        return "none".to_string();
    }
    fields
        .iter()
        .map(|p| {
            let mut s = format!("{} ({}", p.name, p.semantic_type);
            if let Some(u) = p.unit {
                s.push_str(", ");
                s.push_str(u.as_str());
            }
            s.push(')');
            if !p.description.is_empty() {
                s.push_str(" — ");
                s.push_str(&p.description);
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ")
}

impl InternalFunction {
    /// Render this function as one prose block, blank-line separable from
    /// its neighbours.
    pub fn doc_block(&self) -> String {
        format!(
            "### {}\n{}\nParameters: {}\nReturns: {}\n",
            self.name,
            self.description,
            render_fields(&self.params),
            render_fields(&self.returns),
        )
    }
}

impl VendorApiDoc {
    pub fn function(&self, name: &str) -> Option<&InternalFunction> {
        self.functions.iter().find(|f| f.name.as_str() == name)
    }

    /// The full prose form: one block per function, blank-line separated.
    /// This is the text that gets chunked and indexed for retrieval.
    pub fn prose(&self) -> String {
        self.functions
            .iter()
            .map(|f| f.doc_block())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Functions whose doc block appears inside the given chunk text.
    /// Retrieval returns chunk texts; this maps them back to structured
    /// specs (a chunk may pack several small blocks).
    pub fn functions_in_chunk<'a>(&'a self, chunk_text: &str) -> Vec<&'a InternalFunction> {
        self.functions
            .iter()
            .filter(|f| chunk_text.contains(&format!("### {}\n", f.name)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{SemanticType, Unit};
    use crate::gen::chunk::chunk_document;

    fn sample_doc() -> VendorApiDoc {
        VendorApiDoc {
            nf_id: "ap-x".to_string(),
            vendor: "x".to_string(),
            functions: vec![
                InternalFunction {
                    name: Identifier::new("cfgTxPwr").unwrap(),
                    description: "Configures transmit power for a radio.".to_string(),
                    params: vec![
                        ParamSpec::new("rid", SemanticType::Text),
                        ParamSpec::new("pwr", SemanticType::Real).with_unit(Unit::Mw),
                    ],
                    returns: vec![ParamSpec::new("status", SemanticType::Boolean)],
                },
                InternalFunction {
                    name: Identifier::new("rebootNow").unwrap(),
                    description: "Restarts the device.".to_string(),
                    params: vec![],
                    returns: vec![ParamSpec::new("status", SemanticType::Boolean)],
                },
            ],
        }
    }

    #[test]
    fn prose_blocks_are_blank_line_separated() {
        let doc = sample_doc();
        let prose = doc.prose();
        assert!(prose.contains("### cfgTxPwr\n"));
        assert!(prose.contains("\n\n### rebootNow\n"));
        assert!(prose.contains("pwr (real, mW)"));
    }

    #[test]
    fn chunking_then_lookup_recovers_functions() {
        let doc = sample_doc();
        let prose = doc.prose();
        // Tiny target: one block per chunk.
        let chunks = chunk_document(&prose, 16);
        assert!(chunks.len() >= 2);
        let first = doc.functions_in_chunk(&chunks[0].text);
        assert_eq!(first.len(), 1);
        assert_eq!(first[0].name.as_str(), "cfgTxPwr");
    }

    #[test]
    fn big_chunk_contains_both_functions() {
        let doc = sample_doc();
        let found = doc.functions_in_chunk(&doc.prose());
        assert_eq!(found.len(), 2);
    }
}
