//! Parameter sweeps over the photon-added thermal family and their CSV/JSON
//! rendering.
//!
//! A sweep runs one continuous grid (the thermal ratio `x` or the mean
//! photon number `n̄`) for each number of added photons `M` in a list, or an
//! integer grid over `M` for each `n̄` in a list. Points are evaluated in
//! parallel and emitted in grid order.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::measures::{measure_all, Measure};
use crate::specfun::SeriesControl;
use crate::states::{nbar_from_ratio, thermal_ratio, StateSpec};

/// CSV header of [`OutputRecord`] rows.
pub const CSV_HEADER: &str = "param,M,delta_hs,delta_re,delta_f,err_hs,err_re,err_f";

/// CSV header of [`MutualRecord`] rows.
pub const MUTUAL_CSV_HEADER: &str = "pair,param,M,measure_a,measure_b";

/// Every emitted error column stays below `ERR_FACTOR * tol`.
pub const ERR_FACTOR: f64 = 64.0;

/// Default upper end of the thermal-ratio range.
pub const DEFAULT_X_MAX: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    X,
    Nbar,
    M,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Self::X),
            "nbar" => Ok(Self::Nbar),
            "m" => Ok(Self::M),
            other => domain(format!(
                "unknown sweep parameter '{other}' (expected x, nbar or m)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => domain(format!(
                "unknown output format '{other}' (expected csv or json)"
            )),
        }
    }
}

/// Inclusive, evenly spaced real grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealGrid {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl RealGrid {
    pub fn values(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + span * (i as f64) / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub param: SweepParam,
    /// Grid of `x` or `n̄`; ignored for `M` sweeps.
    pub grid: RealGrid,
    /// Added-photon numbers: one block each for real sweeps, the grid itself
    /// for `M` sweeps.
    pub m_list: Vec<u32>,
    /// Mean photon numbers, one block each, for `M` sweeps.
    pub nbar_list: Vec<f64>,
    pub measures: Vec<Measure>,
    pub ctl: SeriesControl,
    pub x_max: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            param: SweepParam::X,
            grid: RealGrid {
                from: 0.0,
                to: 0.95,
                steps: 100,
            },
            m_list: vec![1, 3, 5, 10],
            nbar_list: vec![0.1, 1.0, 2.0, 5.0],
            measures: Measure::ALL.to_vec(),
            ctl: SeriesControl::default(),
            x_max: DEFAULT_X_MAX,
        }
    }
}

/// One evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Value written to the `param` column: `x` for `x` sweeps, `n̄` otherwise.
    pub param: f64,
    pub m: u32,
    pub nbar: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > 0.0 && self.x_max < 1.0) {
            return domain(format!("x_max must lie in (0, 1), got {}", self.x_max));
        }
        if self.measures.is_empty() {
            return domain("no measures selected");
        }
        match self.param {
            SweepParam::X | SweepParam::Nbar => {
                let g = self.grid;
                if g.steps < 2 {
                    return domain(format!("grid needs at least 2 steps, got {}", g.steps));
                }
                if !(g.from.is_finite() && g.to.is_finite()) || g.from < 0.0 || g.from > g.to {
                    return domain(format!(
                        "grid must satisfy 0 <= from <= to, got [{}, {}]",
                        g.from, g.to
                    ));
                }
                let x_to = match self.param {
                    SweepParam::X => g.to,
                    _ => thermal_ratio(g.to)?,
                };
                if x_to > self.x_max {
                    return domain(format!(
                        "grid end corresponds to x = {x_to}, above x_max = {}",
                        self.x_max
                    ));
                }
                if self.m_list.is_empty() {
                    return domain("empty M list");
                }
            }
            SweepParam::M => {
                if self.m_list.is_empty() {
                    return domain("empty M grid");
                }
                if self.nbar_list.is_empty() {
                    return domain("empty nbar list");
                }
                for &nbar in &self.nbar_list {
                    let x = thermal_ratio(nbar)?;
                    if x > self.x_max {
                        return domain(format!(
                            "nbar = {nbar} gives x = {x}, above x_max = {}",
                            self.x_max
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Points in emission order: block by block, ascending within a block.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        self.validate()?;
        let mut out = Vec::new();
        match self.param {
            SweepParam::X | SweepParam::Nbar => {
                let values = self.grid.values();
                for &m in &self.m_list {
                    for &v in &values {
                        let nbar = match self.param {
                            SweepParam::X => nbar_from_ratio(v)?,
                            _ => v,
                        };
                        out.push(SweepPoint { param: v, m, nbar });
                    }
                }
            }
            SweepParam::M => {
                let mut ms = self.m_list.clone();
                ms.sort_unstable();
                ms.dedup();
                for &nbar in &self.nbar_list {
                    for &m in &ms {
                        out.push(SweepPoint {
                            param: nbar,
                            m,
                            nbar,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One sweep row; unselected measures are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputRecord {
    pub param: f64,
    #[serde(rename = "M")]
    pub m: u32,
    pub delta_hs: Option<f64>,
    pub delta_re: Option<f64>,
    pub delta_f: Option<f64>,
    pub err_hs: Option<f64>,
    pub err_re: Option<f64>,
    pub err_f: Option<f64>,
}

impl OutputRecord {
    pub fn value(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Hs => self.delta_hs,
            Measure::Re => self.delta_re,
            Measure::Fid => self.delta_f,
        }
    }

    pub fn err(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Hs => self.err_hs,
            Measure::Re => self.err_re,
            Measure::Fid => self.err_f,
        }
    }
}

/// Evaluates one point.
pub fn evaluate_point(
    point: SweepPoint,
    measures: &[Measure],
    ctl: SeriesControl,
) -> Result<OutputRecord> {
    let spec = StateSpec::Pats {
        m: point.m,
        nbar: point.nbar,
    };
    let triple = measure_all(&spec, ctl)?;
    let pick = |m: Measure| -> Result<Option<(f64, f64)>> {
        if measures.contains(&m) {
            let e = triple.require(m)?;
            Ok(Some((e.value, e.err)))
        } else {
            Ok(None)
        }
    };
    let hs = pick(Measure::Hs)?;
    let re = pick(Measure::Re)?;
    let f = pick(Measure::Fid)?;
    Ok(OutputRecord {
        param: point.param,
        m: point.m,
        delta_hs: hs.map(|v| v.0),
        delta_re: re.map(|v| v.0),
        delta_f: f.map(|v| v.0),
        err_hs: hs.map(|v| v.1),
        err_re: re.map(|v| v.1),
        err_f: f.map(|v| v.1),
    })
}

/// Runs the sweep; records come back in grid order regardless of how the
/// points were scheduled.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<OutputRecord>> {
    let points = cfg.points()?;
    points
        .par_iter()
        .map(|p| evaluate_point(*p, &cfg.measures, cfg.ctl))
        .collect()
}

/// A pair of measures plotted against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    HsRe,
    FHs,
    FRe,
}

impl Pair {
    pub fn measures(self) -> (Measure, Measure) {
        match self {
            Pair::HsRe => (Measure::Hs, Measure::Re),
            Pair::FHs => (Measure::Fid, Measure::Hs),
            Pair::FRe => (Measure::Fid, Measure::Re),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::HsRe => "hs:re",
            Pair::FHs => "f:hs",
            Pair::FRe => "f:re",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 2 {
            return domain(format!("pair '{s}' must look like a:b"));
        }
        let a: Measure = parts[0].parse()?;
        let b: Measure = parts[1].parse()?;
        match (a, b) {
            (Measure::Hs, Measure::Re) => Ok(Pair::HsRe),
            (Measure::Fid, Measure::Hs) => Ok(Pair::FHs),
            (Measure::Fid, Measure::Re) => Ok(Pair::FRe),
            _ => domain(format!("pair '{s}' is not one of hs:re, f:hs, f:re")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualRecord {
    pub pair: &'static str,
    pub param: f64,
    #[serde(rename = "M")]
    pub m: u32,
    pub measure_a: f64,
    pub measure_b: f64,
}

/// Parametric curves `(measure_a, measure_b)` along the sweep grid, one
/// block per pair and per sweep block.
pub fn run_mutual(cfg: &SweepConfig, pairs: &[Pair]) -> Result<Vec<MutualRecord>> {
    if pairs.is_empty() {
        return domain("no measure pairs requested");
    }
    let mut cfg = cfg.clone();
    cfg.measures = Measure::ALL.to_vec();
    let rows = run_sweep(&cfg)?;
    let mut out = Vec::with_capacity(rows.len() * pairs.len());
    for &pair in pairs {
        let (a, b) = pair.measures();
        for r in &rows {
            out.push(MutualRecord {
                pair: pair.label(),
                param: r.param,
                m: r.m,
                measure_a: r.value(a).unwrap_or(f64::NAN),
                measure_b: r.value(b).unwrap_or(f64::NAN),
            });
        }
    }
    Ok(out)
}

/// Twelve significant digits.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.11e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_value).unwrap_or_default()
}

/// CSV line for a record, without the newline. `param` is written in
/// shortest round-trip form so a row can be recomputed from its own text.
pub fn csv_row(r: &OutputRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.param,
        r.m,
        fmt_opt(r.delta_hs),
        fmt_opt(r.delta_re),
        fmt_opt(r.delta_f),
        fmt_opt(r.err_hs),
        fmt_opt(r.err_re),
        fmt_opt(r.err_f),
    )
}

pub fn write_csv<W: Write>(mut w: W, rows: &[OutputRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", csv_row(r))?;
    }
    Ok(())
}

pub fn write_mutual_csv<W: Write>(mut w: W, rows: &[MutualRecord]) -> io::Result<()> {
    writeln!(w, "{MUTUAL_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.pair,
            r.param,
            r.m,
            fmt_value(r.measure_a),
            fmt_value(r.measure_b)
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, rows: &[T]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, rows).map_err(io::Error::other)?;
    writeln!(w)
}

/// Parses sweep CSV produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<OutputRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return domain(format!("unexpected CSV header: {other:?}")),
    }
    let parse_opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| Error::Domain(format!("bad number '{s}': {e}")))
        }
    };
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return domain(format!("expected 8 fields, got {}: {line}", f.len()));
            }
            Ok(OutputRecord {
                param: f[0]
                    .parse()
                    .map_err(|e| Error::Domain(format!("bad param '{}': {e}", f[0])))?,
                m: f[1]
                    .parse()
                    .map_err(|e| Error::Domain(format!("bad M '{}': {e}", f[1])))?,
                delta_hs: parse_opt(f[2])?,
                delta_re: parse_opt(f[3])?,
                delta_f: parse_opt(f[4])?,
                err_hs: parse_opt(f[5])?,
                err_re: parse_opt(f[6])?,
                err_f: parse_opt(f[7])?,
            })
        })
        .collect()
}

/// Rebuilds the evaluation point a sweep row came from.
pub fn point_from_record(param: SweepParam, r: &OutputRecord) -> Result<SweepPoint> {
    let nbar = match param {
        SweepParam::X => nbar_from_ratio(r.param)?,
        SweepParam::Nbar | SweepParam::M => r.param,
    };
    Ok(SweepPoint {
        param: r.param,
        m: r.m,
        nbar,
    })
}
