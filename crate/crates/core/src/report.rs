//! File formats: the JSON sample envelope, covering dumps, and CSV/JSON reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covering::{AdmissibilityReport, Construction, Covering, CoveringPiece};
use crate::error::{Error, Result};
use crate::grid::{Domain, GridSpec, SampledFunction, SampledSymbol, SymbolDomain};
use crate::spaces::NormBreakdown;
use crate::verify::{BoundReport, VerifyConfig};

pub const BOUND_CSV_HEADER: &str = "check,alpha,trial,seed,lhs,rhs,ratio,grid_N";
pub const NORM_CSV_HEADER: &str = "piece_id_x,piece_id_xi,weight,band_sup,contribution";
pub const ENCODING: &str = "base64-f64le-complex-interleaved";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown report format {other:?}"))),
        }
    }
}

/// Layout of the payload: a function domain or a symbol domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Layout {
    Function(Domain),
    Symbol(SymbolDomain),
}

/// Grid metadata plus little-endian `f64` pairs `(re, im)` in base64.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub grid: GridSpec,
    pub domain: Layout,
    pub encoding: String,
    pub payload: String,
}

fn encode(values: &[Complex64]) -> String {
    let mut bytes = Vec::with_capacity(16 * values.len());
    for v in values {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    STANDARD.encode(bytes)
}

fn decode(payload: &str) -> Result<Vec<Complex64>> {
    let bytes = STANDARD
        .decode(payload.trim())
        .map_err(|e| Error::Format(format!("payload is not base64: {e}")))?;
    if bytes.len() % 16 != 0 {
        return Err(Error::Format(format!(
            "payload length {} is not a multiple of 16 bytes",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect())
}

impl Envelope {
    pub fn from_function(f: &SampledFunction) -> Self {
        Self {
            grid: f.grid().clone(),
            domain: Layout::Function(f.domain()),
            encoding: ENCODING.to_string(),
            payload: encode(f.values()),
        }
    }

    pub fn from_symbol(sigma: &SampledSymbol) -> Self {
        Self {
            grid: sigma.grid().clone(),
            domain: Layout::Symbol(sigma.domain()),
            encoding: ENCODING.to_string(),
            payload: encode(sigma.values()),
        }
    }

    fn checked(&self) -> Result<(GridSpec, Vec<Complex64>)> {
        if self.encoding != ENCODING {
            return Err(Error::Format(format!("unsupported encoding {:?}", self.encoding)));
        }
        let g = &self.grid;
        let grid = GridSpec::new(g.dim(), g.points_per_axis(), g.period())?;
        Ok((grid, decode(&self.payload)?))
    }

    pub fn into_function(self) -> Result<SampledFunction> {
        let Layout::Function(domain) = self.domain else {
            return Err(Error::Format("envelope holds a symbol, expected a function".into()));
        };
        let (grid, values) = self.checked()?;
        SampledFunction::new(grid, domain, values)
    }

    pub fn into_symbol(self) -> Result<SampledSymbol> {
        let Layout::Symbol(domain) = self.domain else {
            return Err(Error::Format("envelope holds a function, expected a symbol".into()));
        };
        let (grid, values) = self.checked()?;
        SampledSymbol::new(grid, domain, values)
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self.domain, Layout::Symbol(_))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path, &self.to_json()?)
    }
}

#[derive(Serialize)]
struct PieceDump<'a> {
    #[serde(flatten)]
    piece: &'a CoveringPiece,
    window: Envelope,
}

#[derive(Serialize)]
struct CoveringDump<'a> {
    alpha: f64,
    grid: &'a GridSpec,
    construction: &'a Construction,
    pieces: Vec<PieceDump<'a>>,
}

/// Covering geometry with every window as a frequency-domain envelope.
pub fn covering_json(cov: &Covering) -> Result<String> {
    let pieces = cov
        .pieces()
        .iter()
        .map(|piece| {
            let values = piece.window().iter().map(|&w| Complex64::new(w, 0.0)).collect();
            let window = SampledFunction::new(cov.grid().clone(), Domain::Frequency, values)?;
            Ok(PieceDump {
                piece,
                window: Envelope::from_function(&window),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dump = CoveringDump {
        alpha: cov.alpha(),
        grid: cov.grid(),
        construction: cov.construction(),
        pieces,
    };
    Ok(serde_json::to_string(&dump)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub alpha: Option<f64>,
    pub dim: usize,
    pub rows: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub refined_max_ratio: Option<f64>,
    pub refined_median_ratio: Option<f64>,
    pub refinement_change: Option<f64>,
    pub refinement_tolerance: Option<f64>,
    pub ceiling: Option<f64>,
    pub skipped: usize,
    pub pass: bool,
}

impl From<&BoundReport> for CheckSummary {
    fn from(r: &BoundReport) -> Self {
        Self {
            check: r.check.clone(),
            alpha: r.alpha,
            dim: r.dim,
            rows: r.rows.len() + r.refined_rows.len(),
            max_ratio: r.max_ratio,
            median_ratio: r.median_ratio,
            refined_max_ratio: r.refined_max_ratio,
            refined_median_ratio: r.refined_median_ratio,
            refinement_change: r.refinement_change,
            refinement_tolerance: r.refinement_tolerance,
            ceiling: r.ceiling,
            skipped: r.skipped,
            pass: r.pass,
        }
    }
}

/// Aggregates and pass flags of a verification run, with the settings that replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suite: String,
    pub alphas: Vec<f64>,
    pub config: VerifyConfig,
    pub checks: Vec<CheckSummary>,
    pub pass: bool,
}

impl VerifySummary {
    pub fn new(suite: &str, alphas: &[f64], config: &VerifyConfig, reports: &[BoundReport]) -> Self {
        Self {
            suite: suite.to_string(),
            alphas: alphas.to_vec(),
            config: config.clone(),
            checks: reports.iter().map(CheckSummary::from).collect(),
            pass: reports.iter().all(|r| r.pass),
        }
    }
}

pub enum Report<'a> {
    Bound(&'a [BoundReport]),
    Summary(&'a VerifySummary),
    Admissibility(&'a AdmissibilityReport),
    Norm(&'a NormBreakdown),
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn bound_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from(BOUND_CSV_HEADER);
    out.push('\n');
    for r in reports {
        for row in r.rows.iter().chain(&r.refined_rows) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.check,
                opt(r.alpha),
                row.trial,
                row.seed,
                num(row.lhs),
                num(row.rhs),
                num(row.ratio),
                row.grid_n
            );
        }
    }
    out
}

pub fn norm_csv(b: &NormBreakdown) -> String {
    let mut out = String::from(NORM_CSV_HEADER);
    out.push('\n');
    for c in &b.contributions {
        let xi = c.piece_xi.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.piece_x,
            xi,
            num(c.weight),
            num(c.band_norm),
            num(c.contribution)
        );
    }
    let _ = writeln!(out, "total,,,,{}", num(b.total));
    out
}

fn admissibility_fields(r: &AdmissibilityReport) -> Vec<(&'static str, String)> {
    vec![
        ("alpha", num(r.alpha)),
        ("dim", r.dim.to_string()),
        ("points_per_axis", r.points_per_axis.to_string()),
        ("period", num(r.period)),
        ("piece_count", r.piece_count.to_string()),
        ("resolved_count", r.resolved_count.to_string()),
        ("n0", r.n0.to_string()),
        ("pointwise_multiplicity", r.pointwise_multiplicity.to_string()),
        ("n0_enlarged_r1", r.n0_enlarged_r1.to_string()),
        ("n0_enlarged_r2", r.n0_enlarged_r2.to_string()),
        ("k_bound", num(r.k_bound)),
        ("measure_ratio_lo", num(r.measure_ratio_lo)),
        ("measure_ratio_hi", num(r.measure_ratio_hi)),
        ("inner_measure_ratio_lo", num(r.inner_measure_ratio_lo)),
        ("inner_measure_ratio_hi", num(r.inner_measure_ratio_hi)),
        ("outer_measure_ratio_lo", num(r.outer_measure_ratio_lo)),
        ("outer_measure_ratio_hi", num(r.outer_measure_ratio_hi)),
        ("kappa", num(r.kappa)),
        ("neighbor_kappa", num(r.neighbor_kappa)),
        ("unit_ball_volume", num(r.unit_ball_volume)),
        ("partition_residual", num(r.partition_residual)),
        ("radius_scale", opt(r.radius_scale)),
    ]
}

pub fn admissibility_csv(r: &AdmissibilityReport) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in admissibility_fields(r) {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

/// Aligned two-column table for terminals.
pub fn admissibility_table(r: &AdmissibilityReport) -> String {
    let fields = admissibility_fields(r);
    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in fields {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

pub fn render(report: &Report<'_>, format: Format) -> Result<String> {
    let text = match (report, format) {
        (Report::Bound(r), Format::Csv) => bound_csv(r),
        (Report::Bound(r), Format::Json) => serde_json::to_string_pretty(r)?,
        (Report::Summary(s), Format::Csv) => {
            let reports: Vec<_> = s.checks.iter().map(summary_line).collect();
            format!("{SUMMARY_CSV_HEADER}\n{}", reports.concat())
        }
        (Report::Summary(s), Format::Json) => serde_json::to_string_pretty(s)?,
        (Report::Admissibility(r), Format::Csv) => admissibility_csv(r),
        (Report::Admissibility(r), Format::Json) => serde_json::to_string_pretty(r)?,
        (Report::Norm(b), Format::Csv) => norm_csv(b),
        (Report::Norm(b), Format::Json) => serde_json::to_string_pretty(b)?,
    };
    Ok(if text.ends_with('\n') { text } else { text + "\n" })
}

const SUMMARY_CSV_HEADER: &str = "check,alpha,rows,max_ratio,median_ratio,refined_max_ratio,refinement_change,ceiling,pass";

fn summary_line(c: &CheckSummary) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}\n",
        c.check,
        opt(c.alpha),
        c.rows,
        num(c.max_ratio),
        num(c.median_ratio),
        opt(c.refined_max_ratio),
        opt(c.refinement_change),
        opt(c.ceiling),
        c.pass
    )
}

fn write_file(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_report(report: &Report<'_>, format: Format, path: impl AsRef<Path>) -> Result<()> {
    write_file(path, &render(report, format)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::BoundRow;

    fn grid() -> GridSpec {
        GridSpec::new(1, 16, 8.0).unwrap()
    }

    #[test]
    fn envelope_round_trip_is_exact() {
        let g = grid();
        let f = SampledFunction::from_space_fn(&g, |x| Complex64::new(x[0].sin() / 3.0, -x[0] * 1e-300));
        let back = Envelope::from_json(&Envelope::from_function(&f).to_json().unwrap())
            .unwrap()
            .into_function()
            .unwrap();
        assert_eq!(back, f);
        let s = SampledSymbol::from_fn(&g, |x, xi| Complex64::new(x[0] * xi[0], 0.1));
        let env = Envelope::from_symbol(&s);
        assert!(env.is_symbol());
        assert_eq!(env.into_symbol().unwrap(), s);
    }

    #[test]
    fn envelope_rejects_kind_mismatch_and_bad_grid() {
        let g = grid();
        let f = SampledFunction::from_space_fn(&g, |_| Complex64::new(1.0, 0.0));
        assert!(Envelope::from_function(&f).into_symbol().is_err());
        let mut env = Envelope::from_function(&f);
        env.payload.truncate(env.payload.len() - 4);
        assert!(env.into_function().is_err());
        let text = Envelope::from_function(&f).to_json().unwrap().replace("\"points_per_axis\":16", "\"points_per_axis\":15");
        assert!(Envelope::from_json(&text).unwrap().into_function().is_err());
    }

    #[test]
    fn bound_csv_layout() {
        let r = BoundReport::assemble(
            "demo",
            Some(0.5),
            1,
            vec![vec![BoundRow::new(0, 7, 1.0, 4.0, 64)], vec![BoundRow::new(0, 7, 1.0, 4.0, 128)]],
            0,
            None,
            Some(0.2),
        );
        let csv = bound_csv(&[r]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], BOUND_CSV_HEADER);
        assert_eq!(
            lines[1],
            "demo,5.0000000000000000e-1,0,7,1.0000000000000000e0,4.0000000000000000e0,2.5000000000000000e-1,64"
        );
        assert!(lines[2].ends_with(",128"));
    }

    #[test]
    fn norm_csv_has_total_footer() {
        let b = NormBreakdown {
            total: 3.0,
            q: crate::grid::Exponent::One,
            contributions: vec![crate::spaces::Contribution {
                piece_x: 2,
                piece_xi: Some(5),
                weight: 1.0,
                band_norm: 3.0,
                contribution: 3.0,
            }],
        };
        let csv = norm_csv(&b);
        assert!(csv.starts_with(NORM_CSV_HEADER));
        assert_eq!(csv.lines().last().unwrap(), "total,,,,3.0000000000000000e0");
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
