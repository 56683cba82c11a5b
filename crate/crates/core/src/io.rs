//! JSON documents and text renderings used by the command-line tool.
//!
//! Exact values are written as `"p/q"` strings (integers without the slash)
//! and float values as their shortest round-trip decimal string, so reading
//! a document back reproduces every value bit for bit. On input, numbers may
//! be strings or JSON numbers in either mode.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposer::{Decomposition, VerificationReport, WeightedComponent};
use crate::error::{Error, ParseScalarError};
use crate::extremes::{ComponentKind, ExtremeComponent};
use crate::geometry::PlanePoint;
use crate::invariants::{InvariantReport, ProbeEvaluation};
use crate::lottery::EmpiricalSummary;
use crate::measures::FiniteDistribution;
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{location}: {source}")]
    Number {
        location: String,
        source: ParseScalarError,
    },
    #[error("{location}: {message}")]
    Schema { location: String, message: String },
    #[error(transparent)]
    Model(#[from] Error),
}

/// A number as it appears in a document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Text(String),
    Number(serde_json::Number),
}

impl NumberText {
    fn parse<S: Scalar>(&self, location: impl FnOnce() -> String) -> Result<S, IoError> {
        let text = match self {
            NumberText::Text(s) => s.clone(),
            NumberText::Number(n) => n.to_string(),
        };
        S::parse_text(&text).map_err(|source| IoError::Number {
            location: location(),
            source,
        })
    }
}

impl From<String> for NumberText {
    fn from(s: String) -> Self {
        NumberText::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputAtom {
    pub x: NumberText,
    pub y: NumberText,
    pub mass: NumberText,
}

/// Input file: a distribution given as atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub mode: Mode,
    pub atoms: Vec<InputAtom>,
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_distribution<S: Scalar>(p: &FiniteDistribution<S>) -> Self {
        Self {
            mode: S::MODE,
            atoms: p
                .atoms()
                .iter()
                .map(|a| InputAtom {
                    x: a.point.x.to_text().into(),
                    y: a.point.y.to_text().into(),
                    mass: a.mass.to_text().into(),
                })
                .collect(),
        }
    }

    /// Parses every atom in the requested mode (which may differ from the
    /// declared one) and validates the result.
    pub fn to_distribution<S: Scalar>(&self) -> Result<FiniteDistribution<S>, IoError> {
        let mut raw = Vec::with_capacity(self.atoms.len());
        for (i, atom) in self.atoms.iter().enumerate() {
            let x = atom.x.parse::<S>(|| format!("atoms[{i}].x"))?;
            let y = atom.y.parse::<S>(|| format!("atoms[{i}].y"))?;
            let mass = atom.mass.parse::<S>(|| format!("atoms[{i}].mass"))?;
            raw.push((PlanePoint::new(x, y), mass));
        }
        Ok(FiniteDistribution::build(raw)?)
    }
}

fn point_text<S: Scalar>(p: &PlanePoint<S>) -> [String; 2] {
    [p.x.to_text(), p.y.to_text()]
}

fn parse_point<S: Scalar>(p: &[String; 2], location: &str) -> Result<PlanePoint<S>, IoError> {
    let number = |s: &String, axis: &str| {
        S::parse_text(s).map_err(|source| IoError::Number {
            location: format!("{location}.{axis}"),
            source,
        })
    };
    Ok(PlanePoint::new(number(&p[0], "x")?, number(&p[1], "y")?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    #[serde(rename = "type")]
    pub kind: String,
    pub points: Vec<[String; 2]>,
    pub masses: Vec<String>,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub direction: [String; 2],
    pub interior: String,
    pub boundary: String,
    pub total: String,
}

impl ProbeRecord {
    pub fn new<S: Scalar>(e: &ProbeEvaluation<S>) -> Self {
        Self {
            direction: point_text(&e.direction),
            interior: e.interior.to_text(),
            boundary: e.boundary.to_text(),
            total: e.total.to_text(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub consistent: bool,
    pub probes: Vec<ProbeRecord>,
}

impl Diagnostics {
    pub fn new<S: Scalar>(report: &InvariantReport<S>) -> Self {
        Self {
            consistent: report.consistent,
            probes: report.probes.iter().map(ProbeRecord::new).collect(),
        }
    }
}

/// Output file of `decompose`; can be read back into a [`Decomposition`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub mode: Mode,
    pub phi: String,
    pub offset: [String; 2],
    pub components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl OutputDocument {
    pub fn new<S: Scalar>(d: &Decomposition<S>, report: Option<&InvariantReport<S>>) -> Self {
        Self {
            mode: S::MODE,
            phi: d.phi.to_text(),
            offset: point_text(&d.offset),
            components: d
                .components
                .iter()
                .map(|wc| ComponentRecord {
                    kind: wc.component.kind().as_str().to_owned(),
                    points: wc.component.points().iter().map(point_text).collect(),
                    masses: wc.component.masses().iter().map(Scalar::to_text).collect(),
                    weight: wc.weight.to_text(),
                })
                .collect(),
            diagnostics: report.map(Diagnostics::new),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Reads the decomposition back. Components are validated; weights are
    /// taken as written so that a tampered file can still be verified.
    pub fn to_decomposition<S: Scalar>(&self) -> Result<Decomposition<S>, IoError> {
        let scalar = |s: &str, location: String| {
            S::parse_text(s).map_err(|source| IoError::Number { location, source })
        };
        let mut components = Vec::with_capacity(self.components.len());
        for (i, rec) in self.components.iter().enumerate() {
            let location = format!("components[{i}]");
            let kind = ComponentKind::parse(&rec.kind).ok_or_else(|| IoError::Schema {
                location: format!("{location}.type"),
                message: format!("unknown component type '{}'", rec.kind),
            })?;
            let points = rec
                .points
                .iter()
                .enumerate()
                .map(|(j, p)| parse_point::<S>(p, &format!("{location}.points[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let masses = rec
                .masses
                .iter()
                .enumerate()
                .map(|(j, m)| scalar(m, format!("{location}.masses[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let component = ExtremeComponent::from_parts(kind, points, masses)?;
            let weight = scalar(&rec.weight, format!("{location}.weight"))?;
            components.push(WeightedComponent { component, weight });
        }
        Ok(Decomposition {
            phi: scalar(&self.phi, "phi".into())?,
            components,
            offset: parse_point(&self.offset, "offset")?,
        })
    }
}

/// JSON rendering of a `phi` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiDocument {
    pub mode: Mode,
    pub phi: String,
    pub consistent: bool,
    pub probes: Vec<ProbeRecord>,
}

impl PhiDocument {
    pub fn new<S: Scalar>(report: &InvariantReport<S>) -> Self {
        Self {
            mode: S::MODE,
            phi: report.phi.to_text(),
            consistent: report.consistent,
            probes: report.probes.iter().map(ProbeRecord::new).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationDocument {
    pub mode: Mode,
    pub weight_sum: String,
    pub max_atom_discrepancy: String,
    pub per_component_mean_ok: bool,
    pub exact_match: bool,
    pub within_tolerance: bool,
    pub passed: bool,
}

impl VerificationDocument {
    pub fn new<S: Scalar>(r: &VerificationReport<S>) -> Self {
        Self {
            mode: S::MODE,
            weight_sum: r.weight_sum.to_text(),
            max_atom_discrepancy: r.max_atom_discrepancy.to_text(),
            per_component_mean_ok: r.per_component_mean_ok,
            exact_match: r.exact_match,
            within_tolerance: r.within_tolerance,
            passed: r.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRecord {
    pub point: [String; 2],
    pub expected: f64,
    pub count: u64,
    pub frequency: f64,
    pub band: f64,
    pub within_band: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDocument {
    pub draws: u64,
    pub seed: u64,
    pub empirical_mean: [f64; 2],
    pub expected_mean: [f64; 2],
    pub mean_band: [f64; 2],
    pub frequencies: Vec<FrequencyRecord>,
}

impl SampleDocument {
    pub fn new<S: Scalar>(s: &EmpiricalSummary<S>) -> Self {
        let (ex, ey) = s.expected_mean();
        let (bx, by) = s.mean_band();
        Self {
            draws: s.draws,
            seed: s.seed,
            empirical_mean: [s.empirical_mean.0, s.empirical_mean.1],
            expected_mean: [ex, ey],
            mean_band: [bx, by],
            frequencies: s
                .frequencies
                .iter()
                .map(|f| FrequencyRecord {
                    point: point_text(&f.point),
                    expected: f.expected,
                    count: f.count,
                    frequency: f.frequency,
                    band: f.band(s.draws),
                    within_band: f.within_band(s.draws),
                })
                .collect(),
        }
    }
}

fn fmt_point(p: &[String; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}

pub fn render_phi_table<S: Scalar>(report: &InvariantReport<S>) -> String {
    let doc = PhiDocument::new(report);
    let mut out = String::new();
    let _ = writeln!(out, "phi = {}", doc.phi);
    let _ = writeln!(out, "consistent = {}", doc.consistent);
    let _ = writeln!(
        out,
        "{:<24} {:>20} {:>20} {:>20}",
        "direction", "interior", "boundary", "total"
    );
    for p in &doc.probes {
        let _ = writeln!(
            out,
            "{:<24} {:>20} {:>20} {:>20}",
            fmt_point(&p.direction),
            p.interior,
            p.boundary,
            p.total
        );
    }
    out
}

pub fn render_probe<S: Scalar>(
    direction: &PlanePoint<S>,
    split: &(S, S, S),
    factored: &S,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "direction = {direction}");
    let _ = writeln!(out, "interior  = {}", split.0.to_text());
    let _ = writeln!(out, "boundary  = {}", split.1.to_text());
    let _ = writeln!(out, "  (product form {})", factored.to_text());
    let _ = writeln!(out, "total     = {}", split.2.to_text());
    out
}

pub fn render_decomposition_table<S: Scalar>(d: &Decomposition<S>) -> String {
    let doc = OutputDocument::new(d, None);
    let mut out = String::new();
    let _ = writeln!(out, "phi = {}", doc.phi);
    let _ = writeln!(out, "offset = {}", fmt_point(&doc.offset));
    let _ = writeln!(out, "{:<12} {:>16}  support", "type", "weight");
    for c in &doc.components {
        let support: Vec<String> = c
            .points
            .iter()
            .zip(&c.masses)
            .map(|(p, m)| format!("{} @ {}", fmt_point(p), m))
            .collect();
        let _ = writeln!(
            out,
            "{:<12} {:>16}  {}",
            c.kind,
            c.weight,
            support.join(", ")
        );
    }
    let _ = writeln!(
        out,
        "components = {}, weight sum = {}",
        doc.components.len(),
        d.weight_sum().to_text()
    );
    out
}

pub fn render_verification<S: Scalar>(r: &VerificationReport<S>) -> String {
    let doc = VerificationDocument::new(r);
    format!(
        "weight sum = {}\nmax atom discrepancy = {}\ncomponent means zero = {}\nexact match = {}\nwithin tolerance = {}\nresult = {}\n",
        doc.weight_sum,
        doc.max_atom_discrepancy,
        doc.per_component_mean_ok,
        doc.exact_match,
        doc.within_tolerance,
        if doc.passed { "PASS" } else { "FAIL" }
    )
}

pub fn render_summary<S: Scalar>(s: &EmpiricalSummary<S>) -> String {
    let doc = SampleDocument::new(s);
    let mut out = String::new();
    let _ = writeln!(out, "draws = {}, seed = {}", doc.draws, doc.seed);
    let _ = writeln!(
        out,
        "mean = ({:.6}, {:.6})  expected ({:.6}, {:.6})  band ±({:.6}, {:.6})",
        doc.empirical_mean[0],
        doc.empirical_mean[1],
        doc.expected_mean[0],
        doc.expected_mean[1],
        doc.mean_band[0],
        doc.mean_band[1]
    );
    let _ = writeln!(
        out,
        "{:<24} {:>10} {:>10} {:>10} {:>10}",
        "point", "count", "freq", "expected", "3sigma"
    );
    for f in &doc.frequencies {
        let _ = writeln!(
            out,
            "{:<24} {:>10} {:>10.6} {:>10.6} {:>10.6}{}",
            fmt_point(&f.point),
            f.count,
            f.frequency,
            f.expected,
            f.band,
            if f.within_band { "" } else { "  outside band" }
        );
    }
    out
}
