//! Batch report output: one CSV row per session plus a JSON aggregate.

use serde::Serialize;
use ues_core::evaluation::{aggregate_report, ScoreReport, ScoreRow};

#[derive(Serialize)]
struct CsvRow<'a> {
    session_id: &'a str,
    interface: &'a str,
    mean_trace_length: f64,
    accuracy: Option<f64>,
    rank_discrepancy: u64,
    duration_s: f64,
}

pub fn to_csv(rows: &[ScoreRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            session_id: &r.session_id,
            interface: r.interface.as_str(),
            mean_trace_length: r.mean_trace_length,
            accuracy: r.accuracy,
            rank_discrepancy: r.rank_discrepancy,
            duration_s: r.duration_s,
        })
        .expect("in-memory csv write");
    }
    // header is only emitted with the first record
    if rows.is_empty() {
        w.write_record(["session_id", "interface", "mean_trace_length", "accuracy", "rank_discrepancy", "duration_s"])
            .expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn report(rows: &[ScoreRow]) -> ScoreReport {
    aggregate_report(rows)
}
