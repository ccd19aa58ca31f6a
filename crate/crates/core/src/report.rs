//! JSON envelopes and CSV tables for reports.
//!
//! Every JSON report is `{"schema": 1, "config": …, "meta": …, "result": …}`;
//! `meta` carries the only non-deterministic content and can be left out.
//! CSV output always has a header row, `.` decimals and LF line endings.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::boundary::{BoundarySample, SampleKind};
use crate::spectra::{DirectionEstimates, DistanceReport, ExponentEstimate};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_unix: u64,
}

impl Meta {
    pub fn now() -> Self {
        Meta {
            tool: "teich",
            version: env!("CARGO_PKG_VERSION"),
            generated_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema: u32,
    config: &'a C,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
    result: &'a R,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<C: Serialize, R: Serialize>(
    config: &C,
    result: &R,
    meta: Option<Meta>,
) -> Result<String, Error> {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        config,
        meta,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A CSV table with a header row and LF line endings.
pub fn csv_table(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Convergence trace: `cutoff,value,witness`.
pub fn trace_csv(estimate: &ExponentEstimate) -> Result<String, Error> {
    csv_table(
        &["cutoff", "value", "witness"],
        estimate.trace.iter().map(|p| {
            vec![
                p.cutoff.to_string(),
                p.value.to_string(),
                p.witness.to_string(),
            ]
        }),
    )
}

/// Every trace of a distance report:
/// `direction,estimator,cutoff,value,witness`.
pub fn distance_traces_csv(report: &DistanceReport) -> Result<String, Error> {
    fn rows<'a>(
        direction: &'a str,
        est: &'a DirectionEstimates,
    ) -> impl Iterator<Item = Vec<String>> + 'a {
        [("delta", &est.delta), ("rho", &est.rho)]
            .into_iter()
            .filter_map(|(name, e)| e.as_ref().map(|e| (name, e)))
            .flat_map(move |(name, e)| {
                e.trace.iter().map(move |p| {
                    vec![
                        direction.to_string(),
                        name.to_string(),
                        p.cutoff.to_string(),
                        p.value.to_string(),
                        p.witness.to_string(),
                    ]
                })
            })
    }
    csv_table(
        &["direction", "estimator", "cutoff", "value", "witness"],
        rows("forward", &report.forward).chain(rows("backward", &report.backward)),
    )
}

/// Boundary samples: `word,x,y,kind`.
pub fn samples_csv(samples: &[BoundarySample]) -> Result<String, Error> {
    csv_table(
        &["word", "x", "y", "kind"],
        samples.iter().map(|s| {
            let kind = match s.kind {
                SampleKind::AttractingHyp => "attracting_hyp",
                SampleKind::ParabolicFix => "parabolic_fix",
            };
            vec![
                s.word.to_string(),
                s.x.to_string(),
                s.y.to_string(),
                kind.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::ExtendedReal;
    use crate::Word;

    #[test]
    fn envelope_shape() {
        let s = to_json(&serde_json::json!({"max_len": 3}), &[1.5], None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["config"]["max_len"], 3);
        assert!(v.get("meta").is_none());
        assert!(s.ends_with('\n'));
        let s = to_json(&(), &(), Some(Meta::now())).unwrap();
        assert!(s.contains("\"meta\""));
    }

    #[test]
    fn distance_traces_table() {
        use crate::marked_group::{punctured_torus, TorusRoot};
        use crate::spectra::{distance, Method, SearchOptions};
        let x = punctured_torus(3.0, 3.0, TorusRoot::Plus).unwrap();
        let y = punctured_torus(4.0, 3.0, TorusRoot::Plus).unwrap();
        let report = distance(&x, &y, Method::Both, &SearchOptions::new(3).with_depth(4)).unwrap();
        let csv = distance_traces_csv(&report).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "direction,estimator,cutoff,value,witness");
        assert_eq!(lines.len(), 1 + 4 * 3);
        assert!(lines[1].starts_with("forward,delta,1,"));
        assert!(lines[12].starts_with("backward,rho,3,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn samples_table() {
        let samples = [BoundarySample {
            word: Word::new([1, -2]).unwrap(),
            x: ExtendedReal::Finite(-0.25),
            y: ExtendedReal::Infinity,
            kind: SampleKind::AttractingHyp,
        }];
        assert_eq!(
            samples_csv(&samples).unwrap(),
            "word,x,y,kind\n1 -2,-0.25,inf,attracting_hyp\n"
        );
    }
}
