//! On-disk artifact schemas. Every float is written as a decimal string
//! with twelve significant digits, every exact integer entry as a decimal
//! string, and every file carries `version`.

use std::fs;
use std::path::Path;

use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use windtree::action::{InvariantSubspace, Representation};
use windtree::group::{classify, fixed_directions, ElementTag, GroupWord, PlanarMatrix};
use windtree::kernel::KernelWord;
use windtree::lattice::IntMatrix;
use windtree::sim::WindTreeTable;
use windtree::surface::SurfaceFile;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub const REP_FILE: &str = "rep.json";
pub const KERNEL_FILE: &str = "kernel.json";
pub const CHAIN_FILE: &str = "chain.json";
pub const GAPS_FILE: &str = "gaps.json";
pub const KERNEL_DIFFUSION_FILE: &str = "kernel_diffusion.json";
pub const SCAN_FILE: &str = "scan.json";
pub const RANK_FILE: &str = "rank.json";
pub const REPORT_FILE: &str = "report.json";

pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn parse_num(s: &str) -> CliResult<f64> {
    s.trim().parse().map_err(|_| CliError::Validation(format!("`{s}` is not a number")))
}

pub fn parse_int(s: &str) -> CliResult<i128> {
    s.trim().parse().map_err(|_| CliError::Validation(format!("`{s}` is not an integer")))
}

pub fn parse_ratio(s: &str) -> CliResult<Ratio<i64>> {
    s.trim().parse().map_err(|_| CliError::Validation(format!("`{s}` is not a rational number")))
}

pub type Matrix2 = [[String; 2]; 2];

pub fn matrix2(m: &[[i64; 2]; 2]) -> Matrix2 {
    m.map(|row| row.map(|x| x.to_string()))
}

pub fn parse_matrix2(m: &Matrix2) -> CliResult<PlanarMatrix> {
    let e = |i: usize, j: usize| -> CliResult<i64> {
        i64::try_from(parse_int(&m[i][j])?).map_err(|_| CliError::Validation("planar entry out of range".into()))
    };
    Ok(PlanarMatrix::from_ints(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)?)
}

pub fn int_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn parse_int_rows(rows: &[Vec<String>]) -> CliResult<IntMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|x| parse_int(x)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<Vec<_>>>()?;
    if parsed.iter().any(|r| r.len() != parsed.first().map_or(0, Vec::len)) {
        return Err(CliError::Validation("ragged matrix".into()));
    }
    Ok(IntMatrix::from_rows(&parsed))
}

pub fn int_vec(v: &[i128]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn parse_int_vec(v: &[String]) -> CliResult<Vec<i128>> {
    v.iter().map(|x| parse_int(x)).collect()
}

fn check_version(version: u32, what: &str) -> CliResult<()> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Validation(format!("{what}: schema version {version}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

/// Reads and validates an artifact; a missing file names the stage that
/// produces it.
pub fn read_artifact<T: DeserializeOwned + Versioned>(path: &Path, stage: &'static str) -> CliResult<T> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::MissingArtifact { stage, path: path.display().to_string() })
        }
        Err(source) => return Err(CliError::Io { path: path.display().to_string(), source }),
    };
    let value: T = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    check_version(value.version(), &path.display().to_string())?;
    Ok(value)
}

pub fn read_input<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

pub trait Versioned {
    fn version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {
        $(impl Versioned for $t {
            fn version(&self) -> u32 {
                self.version
            }
        })*
    };
}

versioned!(
    SeedsFile,
    RepArtifact,
    KernelArtifact,
    ChainArtifact,
    GapsArtifact,
    DiffuseArtifact,
    KernelDiffusionArtifact,
    ScanArtifact,
    RankArtifact,
    ReportArtifact
);

/// Table parameters as written in artifacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub a: String,
    pub b: String,
}

impl TableEntry {
    pub fn of(table: &WindTreeTable) -> Self {
        Self { a: table.a.to_string(), b: table.b.to_string() }
    }

    pub fn table(&self) -> CliResult<WindTreeTable> {
        Ok(WindTreeTable::new(parse_ratio(&self.a)?, parse_ratio(&self.b)?)?)
    }
}

/// Cohomology classes supplied for `rep compute --surface`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsFile {
    pub version: u32,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    /// Power of the primitive parabolic that stabilises the surface.
    pub power: u64,
    pub derivative: Matrix2,
    pub homology: Vec<Vec<String>>,
    pub cohomology: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceEntry {
    pub rank: usize,
    /// Basis vectors in dual coordinates.
    pub basis: Vec<Vec<String>>,
    pub saturated: bool,
    /// Restricted image of each generator on the basis.
    pub images: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepArtifact {
    pub version: u32,
    pub table: Option<TableEntry>,
    pub search_bound: i64,
    pub surface: SurfaceFile,
    pub homology_rank: usize,
    pub generators: Vec<GeneratorEntry>,
    /// Derivatives of further non-elliptic stabilising elements.
    pub extra: Vec<Matrix2>,
    pub classes: Vec<Vec<String>>,
    pub subspaces: Vec<SubspaceEntry>,
}

impl RepArtifact {
    pub fn planar(&self) -> CliResult<Vec<PlanarMatrix>> {
        self.generators.iter().map(|g| parse_matrix2(&g.derivative)).collect()
    }

    pub fn representations(&self) -> CliResult<Vec<Representation>> {
        self.subspaces
            .iter()
            .map(|s| {
                let cols = s.basis.iter().map(|c| parse_int_vec(c)).collect::<CliResult<Vec<_>>>()?;
                let sub = InvariantSubspace::spanned_by(self.homology_rank, &cols);
                if sub.rank() != s.rank {
                    return Err(CliError::Validation(format!(
                        "subspace basis has rank {}, file says {}",
                        sub.rank(),
                        s.rank
                    )));
                }
                let images = s.images.iter().map(|m| parse_int_rows(m)).collect::<CliResult<Vec<_>>>()?;
                Ok(Representation::new(images, sub)?)
            })
            .collect()
    }

    /// Representation whose kernel is `subspace` (1-based) or, for 0, the
    /// intersection of all kernels.
    pub fn representation(&self, subspace: usize) -> CliResult<Representation> {
        let reps = self.representations()?;
        if subspace == 0 {
            Ok(Representation::direct_sum(&reps.iter().collect::<Vec<_>>())?)
        } else {
            reps.into_iter().nth(subspace - 1).ok_or_else(|| CliError::Validation(format!("no subspace {subspace}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    pub word: GroupWord,
    pub display: String,
    pub matrix: Matrix2,
    pub class: String,
    pub expanding_direction: Option<String>,
    pub contracting_direction: Option<String>,
}

impl KernelEntry {
    pub fn of(w: &KernelWord) -> Self {
        let m = w.planar();
        let tag = classify(&m).tag;
        let (expanding, contracting) = match (tag, fixed_directions(&m)) {
            (ElementTag::Hyperbolic, Ok((e, c))) => (Some(num(e)), Some(num(c))),
            _ => (None, None),
        };
        Self {
            word: w.word.clone(),
            display: w.word.to_string(),
            matrix: matrix2(&w.matrix),
            class: format!("{tag:?}").to_lowercase(),
            expanding_direction: expanding,
            contracting_direction: contracting,
        }
    }

    pub fn kernel_word(&self, planar: &[PlanarMatrix]) -> CliResult<KernelWord> {
        let kw = KernelWord::from_word(self.word.clone(), planar)
            .ok_or_else(|| CliError::Validation("word matrix out of range".into()))?;
        if matrix2(&kw.matrix) != self.matrix {
            return Err(CliError::Validation(format!("stored matrix of {} does not match its word", self.display)));
        }
        Ok(kw)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelArtifact {
    pub version: u32,
    /// 0 for the intersection of all kernels.
    pub subspace: usize,
    pub max_word_length: usize,
    pub words: Vec<KernelEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    pub stage: usize,
    pub words: Vec<KernelEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorEntry {
    pub h: String,
    pub k: String,
    pub commutator: KernelEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainArtifact {
    pub version: u32,
    pub sample_word_length: usize,
    pub conjugator_depth: usize,
    pub stage_limit: usize,
    pub stages: Vec<StageEntry>,
    pub commutator: Option<CommutatorEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapEntry {
    pub budget: usize,
    pub directions: usize,
    pub max_gap: String,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapsArtifact {
    pub version: u32,
    pub budgets: Vec<GapEntry>,
    pub non_increasing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSummary {
    pub theta: String,
    pub start: [String; 2],
    pub slope: String,
    pub final_displacement: String,
    pub reflections: u64,
    pub retries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffuseArtifact {
    pub version: u32,
    pub table: TableEntry,
    pub horizon: String,
    pub run: RunSummary,
    pub csv: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelRunEntry {
    pub word: KernelEntry,
    pub run: RunSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDiffusionArtifact {
    pub version: u32,
    pub table: TableEntry,
    pub horizon: String,
    pub runs: Vec<KernelRunEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanArtifact {
    pub version: u32,
    pub table: TableEntry,
    pub seed: u64,
    pub horizon: String,
    pub runs: Vec<RunSummary>,
    pub median: String,
    pub percentile_5: String,
    pub controls: ScanControls,
}

/// Reference runs: the free corridor (slope 1, no reflections) and a run
/// trapped between two obstacles (bounded displacement).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanControls {
    pub corridor: RunSummary,
    pub bounded_start: [String; 2],
    pub bounded_extent: String,
    pub bounded_reflections: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankArtifact {
    pub version: u32,
    pub table: TableEntry,
    pub matrix: [[String; 2]; 2],
    pub determinant: String,
    pub rank_two: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub word: String,
    pub matrix: Matrix2,
    pub expanding_direction: String,
    pub slope: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportArtifact {
    pub version: u32,
    pub table: TableEntry,
    pub generators: Vec<Matrix2>,
    pub kernel_words_searched: usize,
    pub kernel: Vec<ReportRow>,
    pub kernel_max_slope: String,
    pub generic_slopes: Vec<String>,
    pub generic_median: String,
    pub generic_percentile_5: String,
    pub kernel_below_generic: bool,
    pub rank_matrix: [[String; 2]; 2],
    pub rank_two: bool,
}
