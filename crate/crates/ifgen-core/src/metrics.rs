//! Per-run measurement records shared by the agents and the benchmark
//! harness: one record per unit of work (a requirement matched, a profile
//! provisioned), carrying attempts, wall time, token usage, and cost.

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::gen::TokenUsage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchTask {
    Matching,
    Codegen,
    E2e,
}

impl std::fmt::Display for BenchTask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BenchTask::Matching => "matching",
            BenchTask::Codegen => "codegen",
            BenchTask::E2e => "e2e",
        })
    }
}

/// One row of benchmark output.
///
/// `wall_ms` under the mock backend is the sum of the backend's synthetic
/// latencies, not elapsed time — that is what makes two runs of the same
/// seed produce byte-identical records. The remote backend reports
/// measured latency instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub task: BenchTask,
    /// What was worked on: a requirement name or a vendor profile id.
    pub subject: String,
    /// Which text backend produced this row.
    pub backend: String,
    pub attempts: u32,
    pub wall_ms: u64,
    pub usage: TokenUsage,
    /// Exact-decimal cost in account currency.
    pub cost: Decimal,
    pub success: bool,
}

/// Exact totals over a batch of records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsSummary {
    pub records: usize,
    pub successes: usize,
    pub attempts: u64,
    pub wall_ms: u64,
    pub usage: TokenUsage,
    pub cost: Decimal,
}

impl MetricsSummary {
    /// Sum every numeric column exactly (integer and decimal arithmetic —
    /// totals always equal the column sums).
    pub fn of(records: &[MetricsRecord]) -> Self {
        let mut s = MetricsSummary::default();
        for r in records {
            s.records += 1;
            s.successes += usize::from(r.success);
            s.attempts += u64::from(r.attempts);
            s.wall_ms += r.wall_ms;
            s.usage.add(r.usage);
            s.cost += r.cost;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal::prelude::FromPrimitive;

    fn record(attempts: u32, wall_ms: u64, cost_cents: i64, success: bool) -> MetricsRecord {
        MetricsRecord {
            task: BenchTask::Matching,
            subject: "r".to_string(),
            backend: "mock".to_string(),
            attempts,
            wall_ms,
            usage: TokenUsage {
                input_tokens: 100,
                output_tokens: 10,
            },
            cost: Decimal::from_i64(cost_cents).unwrap() / Decimal::from(100),
            success,
        }
    }

    #[test]
    fn summary_totals_equal_column_sums() {
        let records = vec![
            record(1, 10, 3, true),
            record(2, 25, 7, true),
            record(5, 40, 11, false),
        ];
        let s = MetricsSummary::of(&records);
        assert_eq!(s.records, 3);
        assert_eq!(s.successes, 2);
        assert_eq!(s.attempts, 8);
        assert_eq!(s.wall_ms, 75);
        assert_eq!(s.usage.input_tokens, 300);
        assert_eq!(s.usage.output_tokens, 30);
        assert_eq!(s.cost.to_string(), "0.21");
    }

    #[test]
    fn record_round_trips_through_json() {
        let r = record(1, 10, 4, true);
        let json = serde_json::to_string(&r).unwrap();
        let back: MetricsRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
