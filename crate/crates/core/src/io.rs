//! Run configuration, JSON/CSV emission and the on-disk table cache.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::coxeter::{AffineSystem, ElementRepr, FiniteType, Involution, InvolutionId, SystemId};
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::rep::DualRootSystem;
use crate::satake::{Check, VerificationRecord, Workspace};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const PRODUCER: &str = concat!("affkl ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Kl,
    Sigma,
    Z,
    ZSigma,
    Weights,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(TableKind::Kl),
            "sigma" => Ok(TableKind::Sigma),
            "z" => Ok(TableKind::Z),
            "zsigma" => Ok(TableKind::ZSigma),
            "weights" => Ok(TableKind::Weights),
            _ => Err(Error::Config(format!("unknown table {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: FiniteType,
    pub involution: InvolutionId,
    pub max_len: u32,
    pub max_height: Option<u32>,
    pub checks: Vec<Check>,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn new(system: FiniteType, max_len: u32) -> Self {
        Self {
            system,
            involution: InvolutionId::Star,
            max_len,
            max_height: None,
            checks: Check::ALL.to_vec(),
            cache: None,
            format: Format::Json,
            out: None,
            jobs: None,
        }
    }

    /// Checks the bounds and the involution; returns the system.
    pub fn validate(&self) -> Result<Arc<AffineSystem>> {
        if self.max_len == 0 {
            return Err(Error::Config("--max-len must be positive".into()));
        }
        if self.max_height == Some(0) {
            return Err(Error::Config("--max-height must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        let sys = Arc::new(AffineSystem::new(self.system)?);
        let delta = Involution::from_id(&sys, self.involution)?;
        for c in &self.checks {
            if !c.applies_to(delta.id()) {
                return Err(Error::Config(format!(
                    "check {c} needs the involution *, not {}",
                    delta.id()
                )));
            }
        }
        Ok(sys)
    }

    /// The checks that make sense for the configured involution.
    pub fn default_checks(involution: InvolutionId) -> Vec<Check> {
        let star = matches!(involution, InvolutionId::Star | InvolutionId::Diamond(0));
        Check::ALL
            .into_iter()
            .filter(|c| star || c.applies_to(involution))
            .collect()
    }
}

/// Builds the workspace for a validated config, warm-starting from the cache when possible.
pub fn open_workspace(cfg: &RunConfig) -> Result<Workspace> {
    let sys = cfg.validate()?;
    let ws = Workspace::new(sys, cfg.involution, cfg.max_len)?;
    if let Some(path) = &cfg.cache {
        match cache_load(path, &ws) {
            Ok(CacheLoad::Loaded { kl, sigma }) => info!("cache: loaded {kl} KL rows and {sigma} sigma rows"),
            Ok(CacheLoad::Missing) => info!("cache: {} does not exist yet", path.display()),
            Ok(CacheLoad::Mismatch(found)) => {
                warn!("cache: {} was written for {found}; starting cold", path.display())
            }
            Err(e) => warn!("cache: rejected {} ({e}); starting cold", path.display()),
        }
    }
    Ok(ws)
}

/// Runs `verify`; writes the cache if one is configured.
pub fn run_verify(cfg: &RunConfig) -> Result<Vec<VerificationRecord>> {
    let ws = open_workspace(cfg)?;
    let records = ws.verify_all(&cfg.checks, cfg.max_height)?;
    if let Some(path) = &cfg.cache {
        cache_save(path, &ws)?;
    }
    Ok(records)
}

/// Runs `table`; `lambda` restricts the per-coweight tables to one coweight.
pub fn run_table(cfg: &RunConfig, kind: TableKind, lambda: Option<&[i64]>) -> Result<Table> {
    let ws = open_workspace(cfg)?;
    ws.fill()?;
    let lambdas = match lambda {
        Some(l) => {
            ws.d_index(l)?;
            vec![l.to_vec()]
        }
        None => ws.dominant_range(cfg.max_height),
    };
    let table = build_table(&ws, kind, &lambdas)?;
    if let Some(path) = &cfg.cache {
        cache_save(path, &ws)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRow {
    pub y: ElementRepr,
    pub w: ElementRepr,
    pub y_word: String,
    pub w_word: String,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub lambda: Vec<i64>,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub lambda: Vec<i64>,
    pub weight: Vec<i64>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table {
    Poly(Vec<PolyRow>),
    Lambda(Vec<LambdaRow>),
    Weights(Vec<WeightRow>),
}

pub fn build_table(ws: &Workspace, kind: TableKind, lambdas: &[Vec<i64>]) -> Result<Table> {
    let sys = ws.system();
    let ball = ws.ball();
    let poly_rows = |rows: Vec<(u32, Vec<(u32, LaurentPoly)>)>| -> Table {
        let mut out: Vec<(u32, String, u32, String, PolyRow)> = Vec::new();
        for (w, row) in rows {
            for (y, p) in row {
                let (yw, ww) = (ball.word(y), ball.word(w));
                out.push((
                    ball.length(w),
                    ww.clone(),
                    ball.length(y),
                    yw.clone(),
                    PolyRow {
                        y: sys.to_repr(ball.element(y)),
                        w: sys.to_repr(ball.element(w)),
                        y_word: yw,
                        w_word: ww,
                        poly: p,
                    },
                ));
            }
        }
        out.sort_by(|a, b| (a.0, &a.1, a.2, &a.3).cmp(&(b.0, &b.1, b.2, &b.3)));
        Table::Poly(out.into_iter().map(|r| r.4).collect())
    };
    Ok(match kind {
        TableKind::Kl => {
            let rows = (0..ball.len() as u32)
                .filter(|&w| ball.length(w) <= ws.max_len())
                .map(|w| (w, ws.kl().row(w).iter().map(|(&y, p)| (y, p.clone())).collect()))
                .collect();
            poly_rows(rows)
        }
        TableKind::Sigma => {
            let rows = ws
                .module()
                .members()
                .iter()
                .map(|&w| {
                    let row = ws.module().sigma_row(w)?;
                    Ok((w, row.iter().map(|(&y, p)| (y, p.clone())).collect()))
                })
                .collect::<Result<_>>()?;
            poly_rows(rows)
        }
        TableKind::Z | TableKind::ZSigma => Table::Lambda(
            lambdas
                .iter()
                .map(|l| {
                    let r = if kind == TableKind::Z {
                        ws.tilde_z(l)?
                    } else {
                        ws.tilde_z_sigma(l)?
                    };
                    Ok(LambdaRow {
                        lambda: l.clone(),
                        poly: r.as_poly().expect("checked polynomial"),
                    })
                })
                .collect::<Result<_>>()?,
        ),
        TableKind::Weights => {
            let dual = DualRootSystem::new(sys.clone());
            let mut rows = Vec::new();
            for l in lambdas {
                for (nu, &m) in &dual.freudenthal(l)?.mults {
                    rows.push(WeightRow {
                        lambda: l.clone(),
                        weight: nu.clone(),
                        multiplicity: m,
                    });
                }
            }
            Table::Weights(rows)
        }
    })
}

fn coords(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_records(records: &[VerificationRecord], format: Format, out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record([
                "system",
                "involution",
                "check",
                "identity",
                "lambda",
                "mu",
                "subset",
                "y",
                "w",
                "lhs",
                "rhs",
                "pass",
            ])?;
            for r in records {
                w.write_record([
                    r.system.to_string(),
                    r.involution.clone(),
                    r.check.to_string(),
                    r.identity.clone(),
                    coords(&r.lambda),
                    r.mu.as_deref().map(coords).unwrap_or_default(),
                    r.subset
                        .as_ref()
                        .map(|s| s.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" "))
                        .unwrap_or_default(),
                    r.y.clone().unwrap_or_default(),
                    r.w.clone().unwrap_or_default(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.pass.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_table(table: &Table, format: Format, out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    match format {
        Format::Json => {
            match table {
                Table::Poly(rows) => serde_json::to_writer_pretty(&mut out, rows)?,
                Table::Lambda(rows) => serde_json::to_writer_pretty(&mut out, rows)?,
                Table::Weights(rows) => serde_json::to_writer_pretty(&mut out, rows)?,
            }
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            match table {
                Table::Poly(rows) => {
                    w.write_record(["y", "w", "polynomial"])?;
                    for r in rows {
                        w.write_record([&r.y_word, &r.w_word, &r.poly.to_string()])?;
                    }
                }
                Table::Lambda(rows) => {
                    w.write_record(["lambda", "polynomial"])?;
                    for r in rows {
                        w.write_record([coords(&r.lambda), r.poly.to_string()])?;
                    }
                }
                Table::Weights(rows) => {
                    w.write_record(["lambda", "weight", "multiplicity"])?;
                    for r in rows {
                        w.write_record([coords(&r.lambda), coords(&r.weight), r.multiplicity.to_string()])?;
                    }
                }
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Identity of the tables a cache file holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    #[serde(flatten)]
    pub system: SystemId,
    pub involution: String,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with involution {}", self.system, self.involution)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub fingerprint: Fingerprint,
    pub producer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "lowercase")]
enum CacheLine {
    Kl {
        w: ElementRepr,
        row: Vec<(ElementRepr, LaurentPoly)>,
    },
    Sigma {
        w: ElementRepr,
        row: Vec<(ElementRepr, LaurentPoly)>,
    },
    End {
        rows: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheLoad {
    Missing,
    Mismatch(Fingerprint),
    Loaded { kl: usize, sigma: usize },
}

fn fingerprint(ws: &Workspace) -> Fingerprint {
    Fingerprint {
        system: ws.system().id(),
        involution: ws.involution().to_string(),
    }
}

/// Writes every computed KL and canonical-basis row as JSON lines.
pub fn cache_save(path: &Path, ws: &Workspace) -> Result<()> {
    let sys = ws.system();
    let ball = ws.ball();
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        let header = CacheHeader {
            format_version: CACHE_FORMAT_VERSION,
            fingerprint: fingerprint(ws),
            producer: PRODUCER.to_string(),
        };
        serde_json::to_writer(&mut out, &header)?;
        writeln!(out)?;
        let repr_row = |row: &std::collections::BTreeMap<u32, LaurentPoly>| {
            row.iter()
                .map(|(&y, p)| (sys.to_repr(ball.element(y)), p.clone()))
                .collect::<Vec<_>>()
        };
        let mut n = 0;
        for (w, row) in ws.kl().cached_rows() {
            let line = CacheLine::Kl {
                w: sys.to_repr(ball.element(w)),
                row: repr_row(&row),
            };
            serde_json::to_writer(&mut out, &line)?;
            writeln!(out)?;
            n += 1;
        }
        for (w, row) in ws.module().cached_rows() {
            let line = CacheLine::Sigma {
                w: sys.to_repr(ball.element(w)),
                row: repr_row(&row),
            };
            serde_json::to_writer(&mut out, &line)?;
            writeln!(out)?;
            n += 1;
        }
        serde_json::to_writer(&mut out, &CacheLine::End { rows: n })?;
        writeln!(out)?;
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Loads a cache into `ws`. A foreign fingerprint is reported, not merged; a
/// malformed or truncated file is rejected as a whole.
pub fn cache_load(path: &Path, ws: &Workspace) -> Result<CacheLoad> {
    if !path.exists() {
        return Ok(CacheLoad::Missing);
    }
    let corrupt = |line: usize, what: String| Error::Cache(format!("line {line}: {what}"));
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let header: CacheHeader = match lines.next() {
        Some((_, line)) => serde_json::from_str(&line?).map_err(|e| corrupt(1, e.to_string()))?,
        None => return Err(Error::Cache("empty file".into())),
    };
    if header.format_version != CACHE_FORMAT_VERSION {
        return Err(Error::Cache(format!(
            "unsupported format version {}",
            header.format_version
        )));
    }
    if header.fingerprint != fingerprint(ws) {
        return Ok(CacheLoad::Mismatch(header.fingerprint));
    }
    let sys = ws.system();
    let ball = ws.ball();
    let mut kl_rows = Vec::new();
    let mut sigma_rows = Vec::new();
    let mut ended = false;
    for (i, line) in lines {
        let line = line?;
        if ended {
            return Err(corrupt(i + 1, "data after the end marker".into()));
        }
        let parsed: CacheLine = serde_json::from_str(&line).map_err(|e| corrupt(i + 1, e.to_string()))?;
        match parsed {
            CacheLine::End { rows } => {
                if rows != kl_rows.len() + sigma_rows.len() {
                    return Err(corrupt(i + 1, format!("end marker counts {rows} rows")));
                }
                ended = true;
            }
            CacheLine::Kl { w, row } => kl_rows.push((w, row)),
            CacheLine::Sigma { w, row } => sigma_rows.push((w, row)),
        }
    }
    if !ended {
        return Err(Error::Cache("missing end marker (truncated file)".into()));
    }
    // resolve everything before touching the tables
    type Resolved = Vec<(u32, std::collections::BTreeMap<u32, LaurentPoly>)>;
    let resolve = |rows: Vec<(ElementRepr, Vec<(ElementRepr, LaurentPoly)>)>| -> Result<Resolved> {
        let mut out = Vec::new();
        for (w, row) in rows {
            let w = sys.from_repr(&w).map_err(|e| Error::Cache(e.to_string()))?;
            let Some(wi) = ball.index_of(&w) else { continue };
            if ball.length(wi) > ws.max_len() {
                continue;
            }
            let mut map = std::collections::BTreeMap::new();
            for (y, p) in row {
                let y = sys.from_repr(&y).map_err(|e| Error::Cache(e.to_string()))?;
                let yi = ball
                    .index_of(&y)
                    .ok_or_else(|| Error::Cache(format!("row entry {} outside the range", sys.word_string(&y))))?;
                map.insert(yi, p);
            }
            out.push((wi, map));
        }
        Ok(out)
    };
    let kl = resolve(kl_rows)?;
    let sigma = resolve(sigma_rows)?;
    for &(w, _) in &sigma {
        if !ws.module().contains(w) {
            return Err(Error::Cache(format!(
                "sigma row for {} outside the twisted set",
                ball.word(w)
            )));
        }
    }
    let counts = (kl.len(), sigma.len());
    for (w, row) in kl {
        ws.kl().insert_row(w, row);
    }
    for (w, row) in sigma {
        ws.module().insert_row(w, row);
    }
    Ok(CacheLoad::Loaded {
        kl: counts.0,
        sigma: counts.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(name: &str, l: u32) -> RunConfig {
        RunConfig::new(name.parse().unwrap(), l)
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a2.jsonl");
        let c = cfg("A2", 7);
        let ws = open_workspace(&c).unwrap();
        ws.fill().unwrap();
        cache_save(&path, &ws).unwrap();

        let fresh = open_workspace(&c).unwrap();
        assert_eq!(
            cache_load(&path, &fresh).unwrap(),
            CacheLoad::Loaded {
                kl: ws.kl().cached_rows().len(),
                sigma: ws.module().cached_rows().len()
            }
        );
        assert_eq!(fresh.kl().cached_rows(), ws.kl().cached_rows());
        assert_eq!(fresh.module().cached_rows(), ws.module().cached_rows());

        let other = open_workspace(&cfg("C2", 5)).unwrap();
        assert!(matches!(cache_load(&path, &other).unwrap(), CacheLoad::Mismatch(_)));

        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        let cold = open_workspace(&c).unwrap();
        assert!(cache_load(&path, &cold).is_err());
        assert!(cold.kl().cached_rows().is_empty());
    }

    #[test]
    fn tables_render() {
        let c = cfg("A1", 3);
        let t = run_table(&c, TableKind::Kl, None).unwrap();
        let mut buf = Vec::new();
        write_table(&t, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));

        let c = cfg("A2", 8);
        let t = run_table(&c, TableKind::ZSigma, Some(&[1, 1])).unwrap();
        let mut buf = Vec::new();
        write_table(&t, Format::Csv, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .contains("1 - 2*q + 2*q^2 - 2*q^3 + q^4"));

        let t = run_table(&c, TableKind::Weights, Some(&[1, 1])).unwrap();
        let Table::Weights(rows) = t else { panic!() };
        assert!(rows.iter().any(|r| r.weight == [0, 0] && r.multiplicity == 2));
    }

    #[test]
    fn bad_configs() {
        let mut c = cfg("A2", 6);
        c.involution = InvolutionId::Diamond(1);
        c.checks = vec![Check::Main];
        assert!(c.validate().unwrap_err().is_usage());
        c.checks = RunConfig::default_checks(c.involution);
        assert!(c.validate().is_ok());
        let mut c = cfg("C2", 6);
        c.involution = InvolutionId::Diamond(1);
        assert!(matches!(c.validate(), Err(Error::NotHyperspecial(1))));
    }
}
