//! Randomized verification campaigns.
//!
//! Each instance is identified by `(seed, n, N, kind, index)` and generated
//! from a seed derived from that tuple alone, so results do not depend on
//! evaluation order or on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::{cov_matrix, qov_matrix, robertson_matrix};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_metric_contraction, classify_equality, conj1_from, det_scale, dominance_hypothesis,
    firey_split, main_from, minkowski_split, robertson_from, t_grid, InequalityReport, Status,
    CONJ2_LABELS, DEFAULT_TOL,
};
use crate::linalg::SymmetricMatrix;
use crate::monotone::MonotoneFunction;
use crate::state::{derive_seed, random_density, random_observable, random_partition, DensityMatrix, Observable, StateKind};

pub const REPORT_FORMAT: &str = "qfi-report/1";
/// The equality check is skipped on states whose smallest eigenvalue is
/// below this multiple of tol: as D approaches a pure state det Cov −
/// det Qov shrinks with it and drops under any fixed tolerance.
pub const EQUALITY_RESOLUTION: f64 = 1e3;
/// Likewise a linearly independent family whose det Cov is itself below
/// tol·scale cannot be told apart from a dependent one; such instances are
/// skipped too.
/// Violations beyond this many are counted but not listed.
pub const MAX_LISTED_VIOLATIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Main,
    Conj1,
    Conj2,
    Firey,
    Robertson,
    Equality,
    Contraction,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Main,
        Check::Conj1,
        Check::Conj2,
        Check::Firey,
        Check::Robertson,
        Check::Equality,
        Check::Contraction,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Main => "main",
            Check::Conj1 => "conj1",
            Check::Conj2 => "conj2",
            Check::Firey => "firey",
            Check::Robertson => "robertson",
            Check::Equality => "equality",
            Check::Contraction => "contraction",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown check `{}`", s.trim())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub dims: Vec<usize>,
    pub num_obs: Vec<usize>,
    pub instances_per_cell: usize,
    pub functions: Vec<String>,
    pub function_pairs: Vec<(String, String)>,
    pub kinds: Vec<StateKind>,
    pub t_grid: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Restricts the run to one instance; the report is otherwise unchanged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub only: Option<InstanceId>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            num_obs: vec![1, 2, 3],
            instances_per_cell: 1000,
            functions: ["sld", "wy", "wyd:0.3", "kubo-mori"].map(String::from).to_vec(),
            function_pairs: [("sld", "wy"), ("sld", "wyd:0.3"), ("wy", "wyd:0.3")]
                .map(|(f, g)| (f.to_string(), g.to_string()))
                .to_vec(),
            kinds: StateKind::ALL.to_vec(),
            t_grid: t_grid(),
            tol: DEFAULT_TOL,
            seed: 0,
            checks: Check::ALL.to_vec(),
            only: None,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let nonempty = |len: usize, what: &str| {
            if len == 0 {
                Err(Error::Config(format!("{what} must not be empty")))
            } else {
                Ok(())
            }
        };
        nonempty(self.dims.len(), "dims")?;
        nonempty(self.num_obs.len(), "num_obs")?;
        nonempty(self.functions.len(), "functions")?;
        nonempty(self.kinds.len(), "kinds")?;
        nonempty(self.checks.len(), "checks")?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::Config(format!("t-grid value {t} outside [0, 1]")));
        }
        if let Some(n) = self.dims.iter().find(|&&n| !(2..=16).contains(&n)) {
            return Err(Error::Config(format!("dimension {n} outside 2..=16")));
        }
        if self.num_obs.contains(&0) {
            return Err(Error::Config("observable counts must be at least 1".into()));
        }
        self.parsed_functions()?;
        self.parsed_pairs()?;
        Ok(())
    }

    fn parsed_functions(&self) -> Result<Vec<MonotoneFunction>> {
        self.functions
            .iter()
            .map(|s| MonotoneFunction::parse(s).map_err(|e| Error::Config(format!("function `{s}`: {e}"))))
            .collect()
    }

    fn parsed_pairs(&self) -> Result<Vec<(MonotoneFunction, MonotoneFunction)>> {
        self.function_pairs
            .iter()
            .map(|(f, g)| {
                let p = |s: &str| MonotoneFunction::parse(s).map_err(|e| Error::Config(format!("function `{s}`: {e}")));
                Ok((p(f)?, p(g)?))
            })
            .collect()
    }
}

/// The reproducing tuple of a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstanceId {
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "N")]
    pub num_obs: usize,
    pub kind: StateKind,
    pub index: usize,
}

impl InstanceId {
    pub fn derived_seed(&self) -> u64 {
        derive_seed(&[self.seed, self.n as u64, self.num_obs as u64, self.kind.tag(), self.index as u64])
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} n={} N={} kind={} index={}",
            self.seed,
            self.n,
            self.num_obs,
            self.kind.as_str(),
            self.index
        )
    }
}

pub struct GeneratedInstance {
    pub id: InstanceId,
    pub state: DensityMatrix,
    pub observables: Vec<Observable>,
    /// Probe for the contraction check.
    pub probe: Observable,
    pub partition: Vec<Vec<usize>>,
}

pub fn generate_instance(id: InstanceId) -> Result<GeneratedInstance> {
    let s = id.derived_seed();
    let state = random_density(id.n, derive_seed(&[s, 0]), id.kind)?;
    let observables = (0..id.num_obs)
        .map(|k| random_observable(id.n, derive_seed(&[s, 1, k as u64])))
        .collect::<Result<Vec<_>>>()?;
    let probe = random_observable(id.n, derive_seed(&[s, 2]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[s, 3]));
    let partition = random_partition(id.n, &mut rng);
    Ok(GeneratedInstance {
        id,
        state,
        observables,
        probe,
        partition,
    })
}

/// Identifies one row of the report. Function and t entries are indices
/// into the config lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct RowKey {
    check: Check,
    n: usize,
    num_obs: usize,
    f: Option<usize>,
    g: Option<usize>,
    t: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub check: Check,
    pub n: usize,
    #[serde(rename = "N")]
    pub num_obs: usize,
    pub f: Option<String>,
    pub g: Option<String>,
    pub t: Option<f64>,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub clamps: usize,
    /// Smallest margin/scale observed; absent when nothing was evaluated.
    pub worst_margin: Option<f64>,
    pub worst_instance: Option<InstanceId>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckTotals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub clamps: usize,
    pub worst_margin: Option<f64>,
    pub worst_instance: Option<InstanceId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub instance: InstanceId,
    pub f: Option<String>,
    pub g: Option<String>,
    pub t: Option<f64>,
    pub margin: Option<f64>,
    pub scale: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub format: String,
    pub config: CampaignConfig,
    pub instances: usize,
    pub evaluations: usize,
    pub totals: BTreeMap<Check, CheckTotals>,
    pub rows: Vec<Row>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub runtime_seconds: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// 0 when every check held, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

struct Outcome {
    key: RowKey,
    status: Status,
    margin: Option<f64>,
    scale: Option<f64>,
    clamps: usize,
    note: Option<String>,
}

impl Outcome {
    fn from_report(key: RowKey, r: &InequalityReport) -> Self {
        let margin = (r.status != Status::HypothesisNotMet).then(|| r.margin / r.scale);
        Self {
            key,
            status: r.status,
            margin: margin.filter(|m| m.is_finite()),
            scale: Some(r.scale),
            clamps: r.clamps,
            note: r.note.clone(),
        }
    }

    fn from_result(key: RowKey, r: Result<InequalityReport>) -> Self {
        match r {
            Ok(r) => Self::from_report(key, &r),
            Err(e) => Self::error(key, e),
        }
    }

    fn error(key: RowKey, e: Error) -> Self {
        Self {
            key,
            status: Status::Fail,
            margin: None,
            scale: None,
            clamps: 0,
            note: Some(format!("error: {e}")),
        }
    }

    fn skipped(key: RowKey, why: String) -> Self {
        Self {
            key,
            status: Status::HypothesisNotMet,
            margin: None,
            scale: None,
            clamps: 0,
            note: Some(why),
        }
    }
}

struct Plan {
    functions: Vec<MonotoneFunction>,
    pairs: Vec<(MonotoneFunction, MonotoneFunction)>,
    /// Dominance hypothesis per pair, evaluated once.
    pair_hypothesis: Vec<std::result::Result<(), String>>,
    tol: f64,
    t_grid: Vec<f64>,
    checks: Vec<Check>,
}

impl Plan {
    /// All row keys of one (n, N) cell, in report order.
    fn keys(&self, n: usize, num_obs: usize) -> Vec<RowKey> {
        let base = |check| RowKey {
            check,
            n,
            num_obs,
            f: None,
            g: None,
            t: None,
        };
        let mut keys = Vec::new();
        for &check in &self.checks {
            match check {
                Check::Main | Check::Conj1 | Check::Equality | Check::Contraction => {
                    keys.extend((0..self.functions.len()).map(|f| RowKey { f: Some(f), ..base(check) }))
                }
                Check::Conj2 => keys.extend((0..self.pairs.len()).map(|p| RowKey {
                    f: Some(p),
                    g: Some(p),
                    ..base(check)
                })),
                Check::Firey => {
                    for f in 0..self.functions.len() {
                        for t in 0..self.t_grid.len() {
                            keys.push(RowKey {
                                f: Some(f),
                                t: Some(t),
                                ..base(check)
                            });
                        }
                    }
                    for p in 0..self.pairs.len() {
                        for t in 0..self.t_grid.len() {
                            keys.push(RowKey {
                                f: Some(p),
                                g: Some(p),
                                t: Some(t),
                                ..base(check)
                            });
                        }
                    }
                }
                Check::Robertson => keys.push(base(check)),
            }
        }
        keys
    }

    fn evaluate(&self, id: InstanceId) -> Vec<Outcome> {
        let keys = self.keys(id.n, id.num_obs);
        let inst = match generate_instance(id) {
            Ok(i) => i,
            Err(e) => return keys.into_iter().map(|k| Outcome::error(k, e.clone())).collect(),
        };
        let (d, obs) = (&inst.state, &inst.observables[..]);
        let scale = det_scale(obs);
        let cov = cov_matrix(d, obs);
        let qovs: Vec<Option<Result<SymmetricMatrix>>> = self
            .functions
            .iter()
            .map(|f| f.is_regular().then(|| qov_matrix(d, f, obs)))
            .collect();
        let pair_qovs: Vec<Option<Result<(SymmetricMatrix, SymmetricMatrix)>>> = self
            .pairs
            .iter()
            .zip(&self.pair_hypothesis)
            .map(|((f, g), h)| h.is_ok().then(|| Ok((qov_matrix(d, f, obs)?, qov_matrix(d, g, obs)?))))
            .collect();

        let not_regular = |f: &MonotoneFunction| format!("{} is not regular", f.name());
        keys.into_iter()
            .map(|key| {
                let with_qov = |fi: usize, run: &dyn Fn(&SymmetricMatrix, &SymmetricMatrix) -> Result<InequalityReport>| {
                    match (&cov, &qovs[fi]) {
                        (_, None) => Outcome::skipped(key, not_regular(&self.functions[fi])),
                        (Ok(c), Some(Ok(q))) => Outcome::from_result(key, run(c, q)),
                        (Err(e), _) | (_, Some(Err(e))) => Outcome::error(key, e.clone()),
                    }
                };
                let with_pair = |pi: usize, run: &dyn Fn(&SymmetricMatrix, &SymmetricMatrix) -> Result<InequalityReport>| {
                    match (&self.pair_hypothesis[pi], &pair_qovs[pi]) {
                        (Err(why), _) => Outcome::skipped(key, why.clone()),
                        (Ok(()), Some(Ok((qf, qg)))) => Outcome::from_result(key, run(qf, qg)),
                        (Ok(()), Some(Err(e))) => Outcome::error(key, e.clone()),
                        (Ok(()), None) => unreachable!("pair matrices are computed whenever the hypothesis holds"),
                    }
                };
                let tol = self.tol;
                match key.check {
                    Check::Main => with_qov(key.f.unwrap(), &|c, q| main_from(c, q, scale, tol)),
                    Check::Conj1 => with_qov(key.f.unwrap(), &|c, q| conj1_from(c, q, scale, tol)),
                    Check::Conj2 => with_pair(key.f.unwrap(), &|qf, qg| {
                        minkowski_split("conj2", &CONJ2_LABELS, qf, qg, scale, tol)
                    }),
                    Check::Firey => {
                        let t = self.t_grid[key.t.unwrap()];
                        match key.g {
                            None => with_qov(key.f.unwrap(), &|c, q| firey_split("conj3", c, q, t, scale, tol)),
                            Some(p) => with_pair(p, &|qf, qg| firey_split("conj4", qf, qg, t, scale, tol)),
                        }
                    }
                    Check::Robertson => match &cov {
                        Ok(c) => Outcome::from_result(
                            key,
                            robertson_matrix(d, obs).and_then(|b| robertson_from(c, b.det(), scale, tol)),
                        ),
                        Err(e) => Outcome::error(key, e.clone()),
                    },
                    Check::Equality => {
                        let f = &self.functions[key.f.unwrap()];
                        if !f.is_regular() {
                            return Outcome::skipped(key, not_regular(f));
                        }
                        let lmin = d.eigenvalues()[0];
                        if lmin < EQUALITY_RESOLUTION * tol {
                            return Outcome::skipped(
                                key,
                                format!("smallest eigenvalue {lmin:e} too small to resolve equality at tol {tol:e}"),
                            );
                        }
                        match classify_equality(d, f, None, obs, tol) {
                            Ok(e) if !e.a_iff_c() && e.det_cov <= tol * e.scale => Outcome::skipped(
                                key,
                                format!(
                                    "det Cov {:e} below tol·scale: equality not resolvable for an independent family",
                                    e.det_cov
                                ),
                            ),
                            Ok(e) => Outcome {
                                key,
                                status: if e.a_iff_c() { Status::Pass } else { Status::Fail },
                                margin: None,
                                scale: Some(e.scale),
                                clamps: 0,
                                note: (!e.a_iff_c()).then(|| {
                                    format!(
                                        "equality conditions disagree: a={} c={} (det Cov {:e}, det Qov {:e})",
                                        e.a, e.c, e.det_cov, e.det_qov_f
                                    )
                                }),
                            },
                            Err(e) => Outcome::error(key, e),
                        }
                    }
                    Check::Contraction => {
                        let f = &self.functions[key.f.unwrap()];
                        Outcome::from_result(
                            key,
                            check_metric_contraction(d, inst.probe.matrix(), f, &inst.partition, tol),
                        )
                    }
                }
            })
            .collect()
    }
}

fn instance_ids(config: &CampaignConfig) -> Vec<InstanceId> {
    if let Some(only) = config.only {
        return vec![InstanceId {
            seed: config.seed,
            ..only
        }];
    }
    let mut ids = Vec::new();
    for &n in &config.dims {
        for &num_obs in &config.num_obs {
            for &kind in &config.kinds {
                for index in 0..config.instances_per_cell {
                    ids.push(InstanceId {
                        seed: config.seed,
                        n,
                        num_obs,
                        kind,
                        index,
                    });
                }
            }
        }
    }
    ids
}

/// Runs the campaign on `workers` threads (None: rayon's default).
pub fn run_campaign(config: &CampaignConfig, workers: Option<usize>) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let functions = config.parsed_functions()?;
    let pairs = config.parsed_pairs()?;
    let pair_hypothesis = pairs.iter().map(|(f, g)| dominance_hypothesis(f, g)).collect();
    let plan = Plan {
        functions,
        pairs,
        pair_hypothesis,
        tol: config.tol,
        t_grid: config.t_grid.clone(),
        checks: config.checks.clone(),
    };
    let ids = instance_ids(config);

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<(InstanceId, Vec<Outcome>)> =
        pool.install(|| ids.par_iter().map(|&id| (id, plan.evaluate(id))).collect());

    let mut rows: BTreeMap<RowKey, Row> = BTreeMap::new();
    for &n in &config.dims {
        for &num_obs in &config.num_obs {
            for key in plan.keys(n, num_obs) {
                rows.insert(key, empty_row(&plan, config, key));
            }
        }
    }
    let mut totals: BTreeMap<Check, CheckTotals> =
        config.checks.iter().map(|&c| (c, CheckTotals::default())).collect();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut evaluations = 0;
    for (id, outs) in &outcomes {
        for o in outs {
            evaluations += 1;
            let row = rows.get_mut(&o.key).expect("every outcome key is planned");
            let total = totals.get_mut(&o.key.check).expect("every check has totals");
            row.clamps += o.clamps;
            total.clamps += o.clamps;
            match o.status {
                Status::Pass => {
                    row.pass += 1;
                    total.pass += 1;
                }
                Status::Fail => {
                    row.fail += 1;
                    total.fail += 1;
                    violation_count += 1;
                    if violations.len() < MAX_LISTED_VIOLATIONS {
                        violations.push(Violation {
                            check: o.key.check,
                            instance: *id,
                            f: row.f.clone(),
                            g: row.g.clone(),
                            t: row.t,
                            margin: o.margin,
                            scale: o.scale,
                            note: o.note.clone().unwrap_or_else(|| "margin below −tol·scale".into()),
                        });
                    }
                }
                Status::HypothesisNotMet => {
                    row.skipped += 1;
                    total.skipped += 1;
                }
            }
            if let Some(m) = o.margin {
                if row.worst_margin.is_none_or(|w| m < w) {
                    row.worst_margin = Some(m);
                    row.worst_instance = Some(*id);
                }
                if total.worst_margin.is_none_or(|w| m < w) {
                    total.worst_margin = Some(m);
                    total.worst_instance = Some(*id);
                }
            }
        }
    }

    Ok(CampaignReport {
        format: REPORT_FORMAT.to_string(),
        config: config.clone(),
        instances: outcomes.len(),
        evaluations,
        totals,
        rows: rows.into_values().collect(),
        violations,
        violation_count,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

fn empty_row(plan: &Plan, config: &CampaignConfig, key: RowKey) -> Row {
    let (f, g) = match (key.f, key.g) {
        (Some(p), Some(_)) => (
            Some(config.function_pairs[p].0.clone()),
            Some(config.function_pairs[p].1.clone()),
        ),
        (Some(f), None) => (Some(config.functions[f].clone()), None),
        _ => (None, None),
    };
    Row {
        check: key.check,
        n: key.n,
        num_obs: key.num_obs,
        f,
        g,
        t: key.t.map(|t| plan.t_grid[t]),
        pass: 0,
        fail: 0,
        skipped: 0,
        clamps: 0,
        worst_margin: None,
        worst_instance: None,
    }
}
