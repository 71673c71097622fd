//! The JSON report document and the SVG/CSV renderings of level intervals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decide::DecisionReport;
use crate::levelsets::{envelope, intervals_csv, level_intervals_of, IntervalUnion, LevelError, LevelSet};
use crate::numeric::ExactRational;
use crate::sigma::SigmaSet;

pub const SCHEMA_VERSION: &str = "1";

/// Pixel height of one SVG row.
pub const ROW_HEIGHT: u32 = 40;
pub const SVG_WIDTH: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub measure: ExactRational,
    pub intervals: IntervalUnion,
}

/// Everything a command prints. Apart from `timing_ms` the document is a
/// pure function of the command and its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub input: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decision: Option<DecisionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub levels: Vec<LevelRecord>,
    pub timing_ms: u64,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            input: BTreeMap::new(),
            decision: None,
            result: None,
            levels: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn with_input(mut self, key: &str, value: impl ToString) -> Self {
        self.input.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Level approximations `1..=levels`, built in a single walk.
pub fn level_records(sigma: &SigmaSet, levels: u32, max_values: usize) -> Result<Vec<LevelRecord>, LevelError> {
    let mut level = LevelSet::level_zero(sigma)?.with_max_values(max_values);
    let mut out = Vec::with_capacity(levels as usize);
    for _ in 0..levels {
        level = level.advance()?;
        let intervals = level_intervals_of(&level)?;
        out.push(LevelRecord {
            level: level.level(),
            measure: intervals.measure(),
            intervals,
        });
    }
    Ok(out)
}

pub fn records_csv(records: &[LevelRecord]) -> String {
    let rows: Vec<(u32, IntervalUnion)> = records.iter().map(|r| (r.level, r.intervals.clone())).collect();
    intervals_csv(&rows)
}

/// One row per level, each drawn over `[min E, max E]` scaled to the full
/// width.
pub fn render_svg(sigma: &SigmaSet, records: &[LevelRecord]) -> Result<String, LevelError> {
    let hull = envelope(sigma)?;
    let span = &hull.e_max - &hull.e_min;
    let width = ExactRational::from(u64::from(SVG_WIDTH));
    let x = |v: &ExactRational| (&(&(v - &hull.e_min) / &span) * &width).to_f64();
    let height = ROW_HEIGHT * records.len() as u32;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{height}" viewBox="0 0 {SVG_WIDTH} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SVG_WIDTH}" height="{height}" fill="white"/>"#);
    for (row, record) in records.iter().enumerate() {
        let y = ROW_HEIGHT * row as u32 + 5;
        let _ = writeln!(svg, r#"<g data-level="{}" fill="black">"#, record.level);
        for (lo, hi) in record.intervals.intervals() {
            let (a, b) = (x(lo), x(hi));
            let _ = writeln!(
                svg,
                r#"<rect x="{a:.3}" y="{y}" width="{:.3}" height="{}"/>"#,
                (b - a).max(0.0),
                ROW_HEIGHT - 10
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(text: &str, q: &str) -> SigmaSet {
        SigmaSet::parse(text).unwrap().with_ratio(q.parse().unwrap()).unwrap()
    }

    #[test]
    fn records_match_direct_intervals() {
        let s = sigma("0,1,8,9", "1/4");
        let records = level_records(&s, 3, usize::MAX).unwrap();
        for r in &records {
            assert_eq!(r.intervals, crate::levelsets::level_intervals(&s, r.level).unwrap());
            assert_eq!(r.measure, ExactRational::from(2));
        }
    }

    #[test]
    fn svg_layout() {
        let s = sigma("0,1", "1/3");
        let records = level_records(&s, 4, usize::MAX).unwrap();
        let svg = render_svg(&s, &records).unwrap();
        assert!(svg.contains(r#"width="1000" height="160""#));
        assert_eq!(svg.matches("<g ").count(), 4);
        // 2 + 4 + 8 + 16 interval rectangles plus the background
        assert_eq!(svg.matches("<rect").count(), 31);
        assert_eq!(svg, render_svg(&s, &records).unwrap());
    }

    #[test]
    fn document_roundtrip() {
        let s = sigma("0,1,2", "1/3");
        let mut doc = ReportDocument::new("render").with_input("sigma", "0,1,2");
        doc.levels = level_records(&s, 2, usize::MAX).unwrap();
        doc.timing_ms = 7;
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(doc.to_json().contains(r#""schema_version": "1""#));
    }

    #[test]
    fn guard_trips() {
        let s = sigma("0,1,2,3", "1/4");
        assert!(matches!(level_records(&s, 6, 100), Err(LevelError::TooLarge { .. })));
    }
}
