//! Cost accounting over token usage.
//!
//! Prices are exact decimals (USD per million tokens) and all arithmetic
//! stays in decimal — the dollar amounts in benchmark summaries must add up
//! exactly, not to within float error.

use std::collections::BTreeMap;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::backend::TokenUsage;

/// Price of one model, in USD per million tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelPrice {
    pub input_per_mtok: Decimal,
    pub output_per_mtok: Decimal,
}

/// Model-name-keyed price table. Lookup falls back to the `default` entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriceTable {
    pub prices: BTreeMap<String, ModelPrice>,
}

impl PriceTable {
    pub fn parse(json: &str) -> Result<PriceTable, serde_json::Error> {
        serde_json::from_str(json)
    }

    /// Built-in table used when no price config is supplied.
    pub fn builtin() -> PriceTable {
        let mut prices = BTreeMap::new();
        prices.insert(
            "mock".to_string(),
            ModelPrice {
                input_per_mtok: Decimal::from_str("3.00").unwrap(),
                output_per_mtok: Decimal::from_str("15.00").unwrap(),
            },
        );
        prices.insert(
            "default".to_string(),
            ModelPrice {
                input_per_mtok: Decimal::from_str("2.50").unwrap(),
                output_per_mtok: Decimal::from_str("10.00").unwrap(),
            },
        );
        PriceTable { prices }
    }

    pub fn price_for(&self, model: &str) -> Option<&ModelPrice> {
        self.prices.get(model).or_else(|| self.prices.get("default"))
    }
}

const MILLION: Decimal = Decimal::from_parts(1_000_000, 0, 0, false, 0);

/// Exact cost of one usage at the given price.
pub fn cost_of(usage: &TokenUsage, price: &ModelPrice) -> Decimal {
    let input = Decimal::from(usage.input_tokens) * price.input_per_mtok / MILLION;
    let output = Decimal::from(usage.output_tokens) * price.output_per_mtok / MILLION;
    input + output
}

/// Exact total cost of a sequence of usages at the given price.
pub fn accumulate_cost(usages: &[TokenUsage], price: &ModelPrice) -> Decimal {
    usages
        .iter()
        .fold(Decimal::ZERO, |acc, u| acc + cost_of(u, price))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn price(i: &str, o: &str) -> ModelPrice {
        ModelPrice {
            input_per_mtok: Decimal::from_str(i).unwrap(),
            output_per_mtok: Decimal::from_str(o).unwrap(),
        }
    }

    #[test]
    fn single_usage_cost_is_exact() {
        // 1000 input tokens at $3/MTok is exactly $0.003.
        let c = cost_of(
            &TokenUsage {
                input_tokens: 1000,
                output_tokens: 0,
            },
            &price("3.00", "15.00"),
        );
        assert_eq!(c, Decimal::from_str("0.003").unwrap());
    }

    #[test]
    fn division_by_a_million_is_exact_not_float() {
        // 1 token at $1/MTok: a value a binary float cannot represent.
        let c = cost_of(
            &TokenUsage {
                input_tokens: 1,
                output_tokens: 0,
            },
            &price("1.00", "0"),
        );
        assert_eq!(c, Decimal::from_str("0.000001").unwrap());
    }

    #[test]
    fn table_lookup_falls_back_to_default() {
        let table = PriceTable::builtin();
        assert!(table.price_for("mock").is_some());
        let fallback = table.price_for("some-new-model").unwrap();
        assert_eq!(fallback, table.prices.get("default").unwrap());
    }

    #[test]
    fn price_table_parses_from_json_strings() {
        let table = PriceTable::parse(
            r#"{"prices": {"default": {"input_per_mtok": "2.50", "output_per_mtok": "10.00"}}}"#,
        )
        .unwrap();
        assert_eq!(
            table.price_for("anything").unwrap().input_per_mtok,
            Decimal::from_str("2.50").unwrap()
        );
    }
}
