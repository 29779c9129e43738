//! JSON file formats: problems, solutions, symbols, factorizations.
//!
//! Complex entries are `[re, im]` pairs, matrices are row-major nested
//! arrays. Zero-dimensional matrices serialize as empty arrays; their
//! column counts are recovered from the companion matrices during
//! validation. Files are written in a canonical pretty-printed form, so
//! parsing and re-writing a canonical file is byte-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use leech::solver::{Branch, LeechSolution, SolveOptions};
use leech::{CMatrix, LeechData, Realization, SymbolR};

pub const SCHEMA_VERSION: &str = "1";

pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub schema_version: String,
    #[serde(rename = "A")]
    pub a: MatrixData,
    #[serde(rename = "B1")]
    pub b1: MatrixData,
    #[serde(rename = "B2")]
    pub b2: MatrixData,
    #[serde(rename = "C")]
    pub c: MatrixData,
    #[serde(rename = "D1")]
    pub d1: MatrixData,
    #[serde(rename = "D2")]
    pub d2: MatrixData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsData>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct OptionsData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_nonminimal: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationData {
    #[serde(rename = "A")]
    pub a: MatrixData,
    #[serde(rename = "B")]
    pub b: MatrixData,
    #[serde(rename = "C")]
    pub c: MatrixData,
    #[serde(rename = "D")]
    pub d: MatrixData,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub schema_version: String,
    /// `solved`, `not_solvable`, or `unsupported`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<RealizationData>,
    #[serde(rename = "Psi", default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<RealizationData>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<RealizationData>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixData>,
    pub diagnostics: DiagnosticsData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DiagnosticsData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leech_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solvability_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riccati_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_isometry_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controllable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obs_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctrl_rank: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolFile {
    pub schema_version: String,
    #[serde(rename = "A")]
    pub a: MatrixData,
    #[serde(rename = "C")]
    pub c: MatrixData,
    #[serde(rename = "Gamma")]
    pub gamma: MatrixData,
    #[serde(rename = "R0")]
    pub r0: MatrixData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorFile {
    pub schema_version: String,
    #[serde(rename = "Q")]
    pub q: MatrixData,
    #[serde(rename = "Phi")]
    pub phi: RealizationData,
    #[serde(rename = "PhiInv")]
    pub phi_inv: RealizationData,
    pub riccati_residual: f64,
    pub innovation_min_eig: f64,
    pub closed_loop_spectral_radius: f64,
}

/// Converts a nested `[re, im]` array to a matrix, rejecting ragged rows.
pub fn matrix_from_data(data: &MatrixData, name: &str) -> Result<CMatrix, String> {
    let rows = data.len();
    let cols = data.first().map_or(0, |row| row.len());
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(format!(
                "matrix {name}: row {i} has {} entries, expected {cols} (ragged array)",
                row.len()
            ));
        }
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, row) in data.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

pub fn matrix_to_data(m: &CMatrix) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn realization_to_data(r: &Realization) -> RealizationData {
    RealizationData {
        a: matrix_to_data(r.a()),
        b: matrix_to_data(r.b()),
        c: matrix_to_data(r.c()),
        d: matrix_to_data(r.d()),
    }
}

pub fn realization_from_data(data: &RealizationData, name: &str) -> Result<Realization, String> {
    let a = matrix_from_data(&data.a, &format!("{name}.A"))?;
    let mut b = matrix_from_data(&data.b, &format!("{name}.B"))?;
    let mut c = matrix_from_data(&data.c, &format!("{name}.C"))?;
    let d = matrix_from_data(&data.d, &format!("{name}.D"))?;
    // Zero-dimensional blocks lose a dimension in JSON; restore it from D.
    if b.nrows() == 0 {
        b = CMatrix::zeros(0, d.ncols());
    }
    if c.ncols() == 0 && a.nrows() == 0 {
        c = CMatrix::zeros(d.nrows(), 0);
    }
    Realization::new(a, b, c, d).map_err(|e| format!("realization {name}: {e}"))
}

fn check_version(version: &str) -> Result<(), String> {
    if version != SCHEMA_VERSION {
        return Err(format!(
            "unsupported schema_version {version:?}, expected {SCHEMA_VERSION:?}"
        ));
    }
    Ok(())
}

/// Validates a problem file and assembles the solver inputs. Returns the
/// data, the solve options (file options applied over the defaults), and
/// the `allow_nonminimal` flag.
pub fn problem_to_data(file: &ProblemFile) -> Result<(LeechData, SolveOptions, bool), String> {
    check_version(&file.schema_version)?;
    let a = matrix_from_data(&file.a, "A")?;
    let mut b1 = matrix_from_data(&file.b1, "B1")?;
    let mut b2 = matrix_from_data(&file.b2, "B2")?;
    let mut c = matrix_from_data(&file.c, "C")?;
    let d1 = matrix_from_data(&file.d1, "D1")?;
    let d2 = matrix_from_data(&file.d2, "D2")?;
    let n = a.nrows();
    if n == 0 {
        // Empty arrays carry no column count; take it from D1/D2.
        if b1.nrows() == 0 {
            b1 = CMatrix::zeros(0, d1.ncols());
        }
        if b2.nrows() == 0 {
            b2 = CMatrix::zeros(0, d2.ncols());
        }
        if c.ncols() == 0 {
            c = CMatrix::zeros(d1.nrows(), 0);
        }
    }
    let data = LeechData::new(a, b1, b2, c, d1, d2).map_err(|e| e.to_string())?;
    let mut opts = SolveOptions::default();
    let mut allow_nonminimal = true;
    if let Some(options) = &file.options {
        if let Some(tol) = options.tol {
            opts.tol = tol;
        }
        if let Some(grid) = options.grid {
            opts.grid = grid;
        }
        if let Some(max_iter) = options.max_iter {
            opts.max_iter = max_iter;
        }
        if let Some(flag) = options.allow_nonminimal {
            allow_nonminimal = flag;
        }
    }
    Ok((data, opts, allow_nonminimal))
}

pub fn data_to_problem(data: &LeechData) -> ProblemFile {
    ProblemFile {
        schema_version: SCHEMA_VERSION.to_string(),
        a: matrix_to_data(data.a()),
        b1: matrix_to_data(data.b1()),
        b2: matrix_to_data(data.b2()),
        c: matrix_to_data(data.c()),
        d1: matrix_to_data(data.d1()),
        d2: matrix_to_data(data.d2()),
        options: None,
    }
}

pub fn symbol_from_file(file: &SymbolFile) -> Result<SymbolR, String> {
    check_version(&file.schema_version)?;
    let a = matrix_from_data(&file.a, "A")?;
    let mut c = matrix_from_data(&file.c, "C")?;
    let mut gamma = matrix_from_data(&file.gamma, "Gamma")?;
    let r0 = matrix_from_data(&file.r0, "R0")?;
    if a.nrows() == 0 {
        if c.ncols() == 0 {
            c = CMatrix::zeros(r0.nrows(), 0);
        }
        if gamma.nrows() == 0 {
            gamma = CMatrix::zeros(0, r0.ncols());
        }
    }
    SymbolR::new(a, c, gamma, r0).map_err(|e| e.to_string())
}

pub fn solution_to_file(solution: &LeechSolution) -> SolutionFile {
    let branch = match solution.branch {
        Branch::StrictlyPositive => "strictly_positive",
        Branch::RIdenticallyZero => "r_identically_zero",
    };
    let d = &solution.diagnostics;
    SolutionFile {
        schema_version: SCHEMA_VERSION.to_string(),
        status: "solved".to_string(),
        branch: Some(branch.to_string()),
        x: Some(realization_to_data(&solution.x)),
        psi: Some(realization_to_data(&solution.psi)),
        f: Some(realization_to_data(&solution.f)),
        u: Some(matrix_to_data(&solution.u)),
        diagnostics: DiagnosticsData {
            leech_residual: Some(d.leech_residual),
            psi_residual: Some(d.psi_residual),
            contraction_margin: Some(d.contraction_margin),
            solvability_margin: Some(d.solvability_margin),
            riccati_residual: Some(d.riccati_residual),
            partial_isometry_residual: Some(d.partial_isometry_residual),
            observable: Some(d.minimality.observable),
            controllable: Some(d.minimality.controllable),
            obs_rank: Some(d.minimality.obs_rank),
            ctrl_rank: Some(d.minimality.ctrl_rank),
        },
        error: None,
    }
}

/// Canonical serialized form: pretty-printed JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
