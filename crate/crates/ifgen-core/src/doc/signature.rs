//! Human-readable one-line signatures for requirements and their match
//! results, used in logs, reports, and the matching prompt.

use super::types::{ControlRequirement, ParamSpec};

fn render_fields(fields: &[ParamSpec]) -> String {
    fields
        .iter()
        .map(|p| {
            let mut s = format!("{} {}", p.name, p.semantic_type.signature_name());
            if let Some(unit) = p.unit {
                s.push(' ');
                s.push_str(unit.as_str());
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Render the one-line signature form:
///
/// `func <name> (<params>)(<returns>): <description>: <matched-or-none>`
pub fn render_signature(req: &ControlRequirement, matched: Option<&str>) -> String {
    format!(
        "func {} ({})({}): {}: {}",
        req.name,
        render_fields(&req.params),
        render_fields(&req.returns),
        req.description,
        matched.unwrap_or("none")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::types::{Identifier, SemanticType, Unit};

    #[test]
    fn renders_the_pinned_example_form() {
        let req = ControlRequirement {
            name: Identifier::new("setpower").unwrap(),
            description: "Set the transmission power of the radio".to_string(),
            params: vec![
                ParamSpec::new("radioID", SemanticType::Text),
                ParamSpec::new("pow", SemanticType::Text).with_unit(Unit::Dbm),
            ],
            returns: vec![ParamSpec::new("response", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        assert_eq!(
            render_signature(&req, Some("set_tx_power")),
            "func setpower (radioID string, pow string dBm)(response boolean): \
             Set the transmission power of the radio: set_tx_power"
        );
        assert_eq!(
            render_signature(&req, None),
            "func setpower (radioID string, pow string dBm)(response boolean): \
             Set the transmission power of the radio: none"
        );
    }

    #[test]
    fn empty_params_render_as_empty_parens() {
        let req = ControlRequirement {
            name: Identifier::new("reboot").unwrap(),
            description: "Reboot the device".to_string(),
            params: vec![],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        assert_eq!(
            render_signature(&req, None),
            "func reboot ()(ok boolean): Reboot the device: none"
        );
    }
}
