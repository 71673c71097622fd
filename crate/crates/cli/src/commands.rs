//! Each command is a pure function of its parameters; the parameters echo
//! into the report so `verify` can rerun them.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{json, Value};

use selfsim::decide::{gns_classify, kakeya_check, theorem7_decide, DecideOptions, DecisionReport, Verdict};
use selfsim::frontends::{
    build_sigma, counterexample_search, ifs_project, ifs_sweep, nitecki_classify, reduce_multigeometric,
    Multigeometric, PlanarIFS, SweepEntry,
};
use selfsim::levelsets::DEFAULT_MAX_VALUES;
use selfsim::numeric::{ExactRational, ExactReal};
use selfsim::report::{level_records, ReportDocument};
use selfsim::sigma::SigmaSet;

use crate::error::CliError;

pub type Input = BTreeMap<String, String>;

fn get<'a>(input: &'a Input, key: &str) -> Result<&'a str, CliError> {
    input
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("missing input field {key:?}")))
}

fn get_parsed<T: FromStr>(input: &Input, key: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    get(input, key)?
        .parse()
        .map_err(|e| CliError::Usage(format!("field {key:?}: {e}")))
}

fn get_optional<T: FromStr>(input: &Input, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    input.get(key).map(|_| get_parsed(input, key)).transpose()
}

fn options(n_max: u32, k_max: Option<u32>) -> DecideOptions {
    DecideOptions::new(n_max, k_max)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn parse_sigma(text: &str) -> Result<SigmaSet, CliError> {
    Ok(SigmaSet::parse(text)?)
}

pub fn parse_ratio(text: &str) -> Result<ExactRational, CliError> {
    Ok(text.parse()?)
}

/// Exit code for a verdict.
pub fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::PositiveMeasure => 0,
        Verdict::MeasureZero => 1,
        Verdict::Unknown => 2,
    }
}

#[derive(Debug, Clone)]
pub struct DecideParams {
    pub sigma: SigmaSet,
    pub n_max: u32,
    pub k_max: Option<u32>,
    pub levels: Option<u32>,
}

impl DecideParams {
    pub fn input(&self) -> Input {
        let mut m = Input::new();
        m.insert("sigma".into(), self.sigma.to_string());
        m.insert("nmax".into(), self.n_max.to_string());
        if let Some(k) = self.k_max {
            m.insert("kmax".into(), k.to_string());
        }
        if let Some(l) = self.levels {
            m.insert("levels".into(), l.to_string());
        }
        m
    }

    pub fn from_input(input: &Input) -> Result<Self, CliError> {
        Ok(DecideParams {
            sigma: parse_sigma(get(input, "sigma")?)?,
            n_max: get_parsed(input, "nmax")?,
            k_max: get_optional(input, "kmax")?,
            levels: get_optional(input, "levels")?,
        })
    }

    pub fn run(&self) -> Result<ReportDocument, CliError> {
        let mut doc = ReportDocument::new("decide");
        doc.input = self.input();
        doc.decision = Some(theorem7_decide(&self.sigma, &options(self.n_max, self.k_max))?);
        if let Some(levels) = self.levels {
            doc.levels = level_records(&self.sigma, levels, DEFAULT_MAX_VALUES)?;
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone)]
pub struct RenderParams {
    pub sigma: SigmaSet,
    pub levels: u32,
    pub max_points: usize,
}

impl RenderParams {
    pub fn new(sigma: SigmaSet, q: Option<ExactRational>, levels: u32, max_points: usize) -> Result<Self, CliError> {
        let sigma = match q {
            Some(q) => sigma.with_ratio(q)?,
            None => sigma,
        };
        Ok(RenderParams { sigma, levels, max_points })
    }

    pub fn input(&self) -> Input {
        let mut m = Input::new();
        m.insert("sigma".into(), self.sigma.to_string());
        m.insert("q".into(), self.sigma.ratio().to_string());
        m.insert("levels".into(), self.levels.to_string());
        m.insert("max_points".into(), self.max_points.to_string());
        m
    }

    pub fn from_input(input: &Input) -> Result<Self, CliError> {
        Self::new(
            parse_sigma(get(input, "sigma")?)?,
            Some(parse_ratio(get(input, "q")?)?),
            get_parsed(input, "levels")?,
            get_parsed(input, "max_points")?,
        )
    }

    pub fn run(&self) -> Result<ReportDocument, CliError> {
        let mut doc = ReportDocument::new("render");
        doc.input = self.input();
        doc.levels = level_records(&self.sigma, self.levels, self.max_points)?;
        Ok(doc)
    }
}

#[derive(Debug, Clone)]
pub struct MultigeoParams {
    pub mg: Multigeometric,
    pub n_max: u32,
    pub k_max: Option<u32>,
    pub levels: u32,
}

impl MultigeoParams {
    pub fn input(&self) -> Input {
        let mut m = Input::new();
        let k: Vec<String> = self.mg.k.iter().map(ToString::to_string).collect();
        m.insert("k".into(), k.join(","));
        m.insert("base".into(), self.mg.base.to_string());
        m.insert("nmax".into(), self.n_max.to_string());
        if let Some(k) = self.k_max {
            m.insert("kmax".into(), k.to_string());
        }
        m.insert("levels".into(), self.levels.to_string());
        m
    }

    pub fn from_input(input: &Input) -> Result<Self, CliError> {
        Ok(MultigeoParams {
            mg: Multigeometric::parse(get(input, "k")?, get_parsed(input, "base")?)?,
            n_max: get_parsed(input, "nmax")?,
            k_max: get_optional(input, "kmax")?,
            levels: get_parsed(input, "levels")?,
        })
    }

    pub fn run(&self) -> Result<ReportDocument, CliError> {
        let mg = &self.mg;
        let built = build_sigma(mg)?;
        let reduced = reduce_multigeometric(mg);
        let q = mg.ratio();
        let kakeya = kakeya_check(&mg.terms(), &q)?;
        let classification = gns_classify(&mg.terms(), &q, &options(self.n_max, self.k_max))?;
        let reduced_kind = gns_classify(&reduced.terms(), &q, &options(self.n_max, self.k_max))?.kind;
        let nitecki = nitecki_classify(mg)?;
        let records = level_records(&built.sigma, self.levels, DEFAULT_MAX_VALUES)?;

        let mut doc = ReportDocument::new("multigeo");
        doc.input = self.input();
        doc.result = Some(json!({
            "sigma": to_value(&built.sigma.digits()),
            "critical": built.critical,
            "distinct_sums": built.distinct_sums,
            "total": mg.total().to_string(),
            "reduced": { "k": reduced.k, "base": reduced.base, "classification": to_value(&reduced_kind) },
            "kakeya": to_value(&kakeya),
            "classification": to_value(&classification),
            "nitecki": to_value(&nitecki),
            "intervals": records.last().map(|r| to_value(&r.intervals)).unwrap_or(Value::Null),
        }));
        doc.levels = records;
        Ok(doc)
    }
}

#[derive(Debug, Clone)]
pub enum IfsMode {
    Sweep(u64),
    Single(ExactReal),
}

#[derive(Debug, Clone)]
pub struct IfsParams {
    pub ifs: PlanarIFS,
    pub mode: IfsMode,
    pub n_max: u32,
    pub k_max: Option<u32>,
}

impl IfsParams {
    pub fn input(&self) -> Input {
        let mut m = Input::new();
        let points: Vec<String> = self.ifs.points.iter().map(|(a, b)| format!("{a},{b}")).collect();
        m.insert("points".into(), points.join(":"));
        match &self.mode {
            IfsMode::Sweep(h) => m.insert("sweep".into(), h.to_string()),
            IfsMode::Single(u) => m.insert("u".into(), u.to_string()),
        };
        m.insert("nmax".into(), self.n_max.to_string());
        if let Some(k) = self.k_max {
            m.insert("kmax".into(), k.to_string());
        }
        m
    }

    pub fn from_input(input: &Input) -> Result<Self, CliError> {
        let mode = match (get_optional::<u64>(input, "sweep")?, input.get("u")) {
            (Some(h), None) => IfsMode::Sweep(h),
            (None, Some(u)) => IfsMode::Single(u.parse()?),
            _ => return Err(CliError::Usage("exactly one of sweep and u is required".into())),
        };
        Ok(IfsParams {
            ifs: PlanarIFS::parse(get(input, "points")?)?,
            mode,
            n_max: get_parsed(input, "nmax")?,
            k_max: get_optional(input, "kmax")?,
        })
    }

    pub fn run(&self) -> Result<ReportDocument, CliError> {
        let opts = options(self.n_max, self.k_max);
        let mut doc = ReportDocument::new("ifs");
        doc.input = self.input();
        match &self.mode {
            IfsMode::Sweep(h) => {
                if !self.ifs.is_rational() {
                    return Err(CliError::Usage("sweeps need rational points".into()));
                }
                let entries = ifs_sweep(&self.ifs, *h, &opts)?;
                let positive: Vec<String> = entries
                    .iter()
                    .filter(|e| e.report.verdict == Verdict::PositiveMeasure)
                    .map(|e| e.u.to_string())
                    .collect();
                doc.result = Some(json!({ "positive": positive, "entries": to_value(&entries) }));
            }
            IfsMode::Single(u) => {
                let projection = ifs_project(&self.ifs, u)?;
                doc.result = Some(json!({
                    "u": u.to_string(),
                    "digits": to_value(&projection.sigma.digits()),
                    "degenerate": projection.degenerate,
                }));
                doc.decision = Some(projection.decide(&opts)?);
            }
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone)]
pub struct SearchParams {
    pub size: usize,
    pub bound: u64,
    pub n_max: u32,
    pub k_max: Option<u32>,
}

impl SearchParams {
    pub fn input(&self) -> Input {
        let mut m = Input::new();
        m.insert("size".into(), self.size.to_string());
        m.insert("bound".into(), self.bound.to_string());
        m.insert("nmax".into(), self.n_max.to_string());
        if let Some(k) = self.k_max {
            m.insert("kmax".into(), k.to_string());
        }
        m
    }

    pub fn from_input(input: &Input) -> Result<Self, CliError> {
        Ok(SearchParams {
            size: get_parsed(input, "size")?,
            bound: get_parsed(input, "bound")?,
            n_max: get_parsed(input, "nmax")?,
            k_max: get_optional(input, "kmax")?,
        })
    }

    pub fn run(&self) -> Result<ReportDocument, CliError> {
        let found = counterexample_search(self.size, self.bound, &options(self.n_max, self.k_max))?;
        let candidates: Vec<Vec<String>> = found
            .iter()
            .map(|set| set.iter().map(ToString::to_string).collect())
            .collect();
        let mut doc = ReportDocument::new("search");
        doc.input = self.input();
        doc.result = Some(json!({ "candidates": candidates }));
        Ok(doc)
    }
}

/// Reruns the command recorded in the document and validates every decision
/// certificate it contains.
pub fn verify_document(doc: &ReportDocument) -> Result<(), String> {
    if doc.schema_version != selfsim::report::SCHEMA_VERSION {
        return Err(format!("unsupported schema version {:?}", doc.schema_version));
    }
    let mut reports: Vec<DecisionReport> = doc.decision.iter().cloned().collect();
    if let Some(result) = &doc.result {
        if let Some(entries) = result.get("entries") {
            let entries: Vec<SweepEntry> =
                serde_json::from_value(entries.clone()).map_err(|e| format!("sweep entries: {e}"))?;
            reports.extend(entries.into_iter().map(|e| e.report));
        }
        if let Some(report) = result.get("classification").and_then(|c| c.get("report")) {
            if !report.is_null() {
                reports.push(serde_json::from_value(report.clone()).map_err(|e| format!("classification: {e}"))?);
            }
        }
    }
    for report in &reports {
        report
            .validate()
            .map_err(|e| {
                let digits: Vec<String> = report.digits.iter().map(ToString::to_string).collect();
                format!("certificate for {{{}}} rejected: {e}", digits.join(","))
            })?;
    }

    let rerun = match doc.command.as_str() {
        "decide" => DecideParams::from_input(&doc.input).and_then(|p| p.run()),
        "render" => RenderParams::from_input(&doc.input).and_then(|p| p.run()),
        "multigeo" => MultigeoParams::from_input(&doc.input).and_then(|p| p.run()),
        "ifs" => IfsParams::from_input(&doc.input).and_then(|p| p.run()),
        "search" => SearchParams::from_input(&doc.input).and_then(|p| p.run()),
        other => return Err(format!("unknown command {other:?}")),
    }
    .map_err(|e| format!("rerun failed: {e}"))?;

    let strip = |d: &ReportDocument| {
        let mut v = to_value(d);
        v.as_object_mut().expect("object").remove("timing_ms");
        v
    };
    if strip(doc) != strip(&rerun) {
        return Err("recomputed document differs from the stored one".into());
    }
    Ok(())
}
