//! Instance files and single-instance evaluation.
//!
//! ```json
//! {"dim": 2,
//!  "state": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]],
//!  "observables": [[[[0,0],[1,0]], [[1,0],[0,0]]]],
//!  "functions": ["sld", "wyd:0.3"],
//!  "pairs": [["sld", "wy"]]}
//! ```
//!
//! Matrix entries are `[re, im]` pairs, rows outermost.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covariance::{cov_matrix, qov_matrix};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_conj1, check_conj2, check_firey, check_main, check_robertson, classify_equality, t_grid,
    EqualityClassification, InequalityReport, Status,
};
use crate::linalg::{det_real_symmetric, ComplexMatrix, HermitianMatrix, SymmetricMatrix, SYMMETRY_TOL};
use crate::monotone::MonotoneFunction;
use crate::state::{DensityMatrix, Observable, TRACE_TOL};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dim: usize,
    pub state: RawMatrix,
    pub observables: Vec<RawMatrix>,
    #[serde(default)]
    pub functions: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub state: DensityMatrix,
    pub observables: Vec<Observable>,
    pub functions: Vec<MonotoneFunction>,
    pub pairs: Vec<(MonotoneFunction, MonotoneFunction)>,
}

fn matrix(field: &str, dim: usize, raw: &RawMatrix) -> Result<ComplexMatrix> {
    if raw.len() != dim {
        return Err(Error::Instance(format!("{field}: expected {dim} rows, found {}", raw.len())));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Instance(format!(
                "{field}[{i}]: expected {dim} entries, found {}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Instance(format!("{field}[{i}][{j}]: non-finite entry")));
            }
            data.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::from_vec(dim, data)
}

fn hermitian(field: &str, m: ComplexMatrix) -> Result<HermitianMatrix> {
    let scale = m.frobenius_norm().max(1.0);
    HermitianMatrix::try_from_complex(m, SYMMETRY_TOL * scale).map_err(|e| match e {
        Error::NotSymmetric { row, col, diff } => Error::Instance(format!(
            "{field}[{row}][{col}]: not Hermitian, differs from the conjugate of [{col}][{row}] by {diff:e}"
        )),
        other => other,
    })
}

fn function(field: &str, spec: &str) -> Result<MonotoneFunction> {
    MonotoneFunction::parse(spec).map_err(|e| Error::Instance(format!("{field}: `{spec}`: {e}")))
}

impl InstanceFile {
    pub fn validate(&self) -> Result<Instance> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Instance("dim: must be at least 1".into()));
        }
        let state = hermitian("state", matrix("state", n, &self.state)?)?;
        let tr = state.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Instance(format!("state: trace is {tr}, expected 1")));
        }
        let state = DensityMatrix::new(state).map_err(|e| Error::Instance(format!("state: {e}")))?;
        if self.observables.is_empty() {
            return Err(Error::Instance("observables: at least one observable is required".into()));
        }
        let observables = self
            .observables
            .iter()
            .enumerate()
            .map(|(k, raw)| {
                let field = format!("observables[{k}]");
                Ok(Observable::new(hermitian(&field, matrix(&field, n, raw)?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let functions = self
            .functions
            .iter()
            .enumerate()
            .map(|(k, s)| function(&format!("functions[{k}]"), s))
            .collect::<Result<Vec<_>>>()?;
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(k, (f, g))| Ok((function(&format!("pairs[{k}][0]"), f)?, function(&format!("pairs[{k}][1]"), g)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            state,
            observables,
            functions,
            pairs,
        })
    }
}

fn raw(m: &ComplexMatrix) -> RawMatrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            dim: self.state.dim(),
            state: raw(self.state.matrix().as_complex()),
            observables: self.observables.iter().map(|a| raw(a.matrix().as_complex())).collect(),
            functions: self.functions.iter().map(|f| f.name().to_string()).collect(),
            pairs: self
                .pairs
                .iter()
                .map(|(f, g)| (f.name().to_string(), g.name().to_string()))
                .collect(),
        }
    }
}

pub fn parse_instance(json: &str) -> Result<Instance> {
    let file: InstanceFile =
        serde_json::from_str(json).map_err(|e| Error::Instance(format!("malformed instance JSON: {e}")))?;
    file.validate()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(&instance.to_file()).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionResults {
    pub function: String,
    pub det_qov: Option<f64>,
    pub reports: Vec<InequalityReport>,
    pub equality: Option<EqualityClassification>,
}

/// Every determinant and margin for one instance.
#[derive(Clone, Debug, Serialize)]
pub struct ComputeReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_obs: usize,
    pub cov: SymmetricMatrix,
    pub det_cov: f64,
    pub robertson: InequalityReport,
    pub functions: Vec<FunctionResults>,
    pub pairs: Vec<InequalityReport>,
}

impl ComputeReport {
    pub fn all_reports(&self) -> impl Iterator<Item = &InequalityReport> {
        std::iter::once(&self.robertson)
            .chain(self.functions.iter().flat_map(|f| f.reports.iter()))
            .chain(self.pairs.iter())
    }

    pub fn passed(&self) -> bool {
        self.all_reports().all(|r| r.status != Status::Fail)
    }
}

/// Runs main, conj1, the t-weighted form on `t` and the equality
/// classification for each regular function, and conj2 plus the
/// t-weighted pair form for each pair. Nonregular functions get an empty
/// entry.
pub fn compute(instance: &Instance, t: &[f64], tol: f64) -> Result<ComputeReport> {
    let (d, obs) = (&instance.state, &instance.observables[..]);
    let cov = cov_matrix(d, obs)?;
    let det_cov = det_real_symmetric(&cov)?;
    let functions = instance
        .functions
        .iter()
        .map(|f| {
            if !f.is_regular() {
                return Ok(FunctionResults {
                    function: f.name().to_string(),
                    det_qov: None,
                    reports: vec![],
                    equality: None,
                });
            }
            let mut reports = vec![check_main(d, f, obs, tol)?, check_conj1(d, f, obs, tol)?];
            for &ti in t {
                reports.push(check_firey(d, f, None, obs, ti, tol)?);
            }
            Ok(FunctionResults {
                function: f.name().to_string(),
                det_qov: Some(det_real_symmetric(&qov_matrix(d, f, obs)?)?),
                reports,
                equality: Some(classify_equality(d, f, None, obs, tol)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (f, g) in &instance.pairs {
        pairs.push(check_conj2(d, f, g, obs, tol)?);
        for &ti in t {
            pairs.push(check_firey(d, f, Some(g), obs, ti, tol)?);
        }
    }
    Ok(ComputeReport {
        n: d.dim(),
        num_obs: obs.len(),
        cov,
        det_cov,
        robertson: check_robertson(d, obs, tol)?,
        functions,
        pairs,
    })
}

pub fn compute_default(instance: &Instance, tol: f64) -> Result<ComputeReport> {
    compute(instance, &t_grid(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::DEFAULT_TOL;

    const WITNESS: &str = r#"{"dim": 2,
        "state": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]],
        "observables": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
                        [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]],
        "functions": ["sld", "kubo-mori"],
        "pairs": [["sld", "wy"]]}"#;

    #[test]
    fn loads_witness() {
        let inst = parse_instance(WITNESS).unwrap();
        let r = compute(&inst, &[0.5], DEFAULT_TOL).unwrap();
        assert!(r.passed());
        assert!((r.det_cov - 1.0).abs() < 1e-15);
        let sld = &r.functions[0];
        assert!((sld.det_qov.unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!(sld.reports[1].margin.abs() <= 1e-12);
        assert!(r.functions[1].reports.is_empty());
        assert_eq!(r.pairs.len(), 2);
    }

    #[test]
    fn round_trips() {
        let inst = parse_instance(WITNESS).unwrap();
        let again = parse_instance(&serde_json::to_string(&inst.to_file()).unwrap()).unwrap();
        assert_eq!(inst.to_file(), again.to_file());
    }

    fn err(json: &str) -> String {
        parse_instance(json).unwrap_err().to_string()
    }

    #[test]
    fn rejections_name_the_field() {
        let trace = WITNESS.replace("0.25, 0]]]", "0.15, 0]]]");
        let msg = err(&trace);
        assert!(msg.contains("state") && msg.contains("trace") && msg.contains("0.9"), "{msg}");

        let nonherm = WITNESS.replace("[[0, 1], [0, 0]]]", "[[0, 2], [0, 0]]]");
        let msg = err(&nonherm);
        assert!(msg.contains("observables[1][0][1]") && msg.contains("Hermitian"), "{msg}");

        assert!(err(r#"{"dim": 2}"#).contains("malformed"));
        let shape = WITNESS.replace(r#""dim": 2"#, r#""dim": 3"#);
        assert!(err(&shape).contains("state: expected 3 rows"));
        let bad_fn = WITNESS.replace(r#""kubo-mori""#, r#""bogus""#);
        assert!(err(&bad_fn).contains("functions[1]"));
    }
}
