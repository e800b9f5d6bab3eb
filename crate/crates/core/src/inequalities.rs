//! Verifiers for the determinant uncertainty inequalities.
//!
//! Every check produces an [`InequalityReport`]. Hypotheses (regularity,
//! dominance of f over g) are evaluated separately from the conclusion so
//! that an unmet hypothesis is reported as such and never as a pass.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::covariance::{cov_matrix, instance_scale, metric_inner, qov_matrix, robertson_matrix};
use crate::error::{Error, Result};
use crate::linalg::{det_real_symmetric, min_eigenvalue_symmetric, HermitianMatrix, SymmetricMatrix};
use crate::monotone::{dominates, standard_grid, Dominance, MonotoneFunction};
use crate::state::{
    eigenframe, linear_dependence, offdiagonal_dependence, pinching, Dependence, DensityMatrix,
    Observable,
};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative singular-value threshold for the dependence tests.
pub const RANK_TOL: f64 = 1e-8;
/// Inputs to the remainder sums may dip this far below zero from roundoff.
pub const REMAINDER_NEGATIVE_TOL: f64 = 1e-12;

pub fn t_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs − rhs
    pub margin: f64,
    pub scale: f64,
    pub tol: f64,
    pub status: Status,
    pub pass: bool,
    pub components: BTreeMap<String, f64>,
    /// sub-determinants clamped from [−tol·scale, 0) to 0
    pub clamps: usize,
    pub note: Option<String>,
    pub digest: BTreeMap<String, String>,
}

impl InequalityReport {
    fn new(name: &str, lhs: f64, rhs: f64, scale: f64, tol: f64) -> Self {
        let margin = lhs - rhs;
        let pass = margin >= -tol * scale;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            scale,
            tol,
            status: if pass { Status::Pass } else { Status::Fail },
            pass,
            components: BTreeMap::new(),
            clamps: 0,
            note: None,
            digest: BTreeMap::new(),
        }
    }

    fn hypothesis_not_met(name: &str, scale: f64, tol: f64, why: String) -> Self {
        let mut r = Self::new(name, f64::NAN, f64::NAN, scale, tol);
        r.margin = f64::NAN;
        r.status = Status::HypothesisNotMet;
        r.pass = false;
        r.note = Some(why);
        r
    }

    fn component(mut self, key: &str, v: f64) -> Self {
        self.components.insert(key.to_string(), v);
        self
    }

    pub fn with_digest(mut self, key: &str, v: impl ToString) -> Self {
        self.digest.insert(key.to_string(), v.to_string());
        self
    }

    /// Marks the report failed because a positivity claim broke.
    fn violated(mut self, why: String) -> Self {
        self.status = Status::Fail;
        self.pass = false;
        self.note = Some(why);
        self
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn nonneg(x: f64, what: &'static str) -> Result<f64> {
    if x.is_nan() || x < -REMAINDER_NEGATIVE_TOL {
        return Err(Error::OutOfRange { what, value: x });
    }
    Ok(x.max(0.0))
}

/// Σ_{k=1}^{N−1} C(N,k) · q^{k/N} · c^{(N−k)/N}
pub fn remainder(det_q: f64, det_diff: f64, n: usize) -> Result<f64> {
    let q = nonneg(det_q, "remainder determinant")?;
    let c = nonneg(det_diff, "remainder determinant")?;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "remainder order N",
            value: 0.0,
        });
    }
    let nf = n as f64;
    Ok((1..n)
        .map(|k| binomial(n, k) * q.powf(k as f64 / nf) * c.powf((n - k) as f64 / nf))
        .sum())
}

/// Σ_{k=1}^{N−1} C(N,k) · ((1−t)·q^{1/N})^k · (t·c^{1/N})^{N−k}
pub fn remainder_t(det_q: f64, det_diff: f64, n: usize, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: "t (must lie in [0, 1])",
            value: t,
        });
    }
    let q = nonneg(det_q, "remainder determinant")?;
    let c = nonneg(det_diff, "remainder determinant")?;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "remainder order N",
            value: 0.0,
        });
    }
    let nf = n as f64;
    let (a, b) = ((1.0 - t) * q.powf(1.0 / nf), t * c.powf(1.0 / nf));
    Ok((1..n)
        .map(|k| binomial(n, k) * a.powi(k as i32) * b.powi((n - k) as i32))
        .sum())
}

/// Determinant scale for N×N covariance-type matrices: the instance scale
/// raised to N, since those determinants are homogeneous of degree 2N in
/// the observables.
pub fn det_scale(obs: &[Observable]) -> f64 {
    instance_scale(obs).powi(obs.len() as i32)
}

struct Clamp {
    tol_abs: f64,
    count: usize,
}

impl Clamp {
    fn new(tol: f64, scale: f64) -> Self {
        Self {
            tol_abs: tol * scale,
            count: 0,
        }
    }

    /// Some(value ≥ 0), or None when the value is too negative to be roundoff.
    fn apply(&mut self, x: f64) -> Option<f64> {
        if x >= 0.0 {
            Some(x)
        } else if x >= -self.tol_abs {
            self.count += 1;
            Some(0.0)
        } else {
            None
        }
    }
}

/// Names used for the pieces of a `det(big) ≥ det(small) + det(big − small) + R` check.
pub struct PairLabels {
    pub big: &'static str,
    pub small: &'static str,
    pub diff: &'static str,
}

pub const CONJ1_LABELS: PairLabels = PairLabels {
    big: "det_cov",
    small: "det_qov_f",
    diff: "det_cov_minus_qov_f",
};

pub const CONJ2_LABELS: PairLabels = PairLabels {
    big: "det_qov_f",
    small: "det_qov_g",
    diff: "det_qov_f_minus_qov_g",
};

/// det(big) ≥ det(small) + det(big − small) + R(small, big − small, N).
pub fn minkowski_split(
    name: &str,
    labels: &PairLabels,
    big: &SymmetricMatrix,
    small: &SymmetricMatrix,
    scale: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let n = big.dim();
    let det_big = det_real_symmetric(big)?;
    let det_small_raw = det_real_symmetric(small)?;
    let det_diff_raw = det_real_symmetric(&big.sub(small))?;
    let mut clamp = Clamp::new(tol, scale);
    let (det_small, det_diff) = match (clamp.apply(det_small_raw), clamp.apply(det_diff_raw)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let r = InequalityReport::new(name, det_big, f64::NAN, scale, tol)
                .component(labels.big, det_big)
                .component(labels.small, det_small_raw)
                .component(labels.diff, det_diff_raw);
            return Ok(r.violated("negative sub-determinant beyond tolerance".into()));
        }
    };
    let rem = remainder(det_small, det_diff, n)?;
    let rhs = det_small + det_diff + rem;
    let mut r = InequalityReport::new(name, det_big, rhs, scale, tol)
        .component(labels.big, det_big)
        .component(labels.small, det_small)
        .component(labels.diff, det_diff)
        .component("remainder", rem);
    r.clamps = clamp.count;
    Ok(r)
}

/// det(t·big + (1−2t)·small) ≥ (1−t)^N det(small) + t^N det(big − small) + R_t.
pub fn firey_split(
    name: &str,
    big: &SymmetricMatrix,
    small: &SymmetricMatrix,
    t: f64,
    scale: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: "t (must lie in [0, 1])",
            value: t,
        });
    }
    let n = big.dim();
    let mixed = big.combine(t, small, 1.0 - 2.0 * t);
    let lhs = det_real_symmetric(&mixed)?;
    let det_small_raw = det_real_symmetric(small)?;
    let det_diff_raw = det_real_symmetric(&big.sub(small))?;
    let mut clamp = Clamp::new(tol, scale);
    let (det_small, det_diff) = match (clamp.apply(det_small_raw), clamp.apply(det_diff_raw)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let r = InequalityReport::new(name, lhs, f64::NAN, scale, tol);
            return Ok(r.violated("negative sub-determinant beyond tolerance".into()));
        }
    };
    let nn = n as i32;
    let small_term = (1.0 - t).powi(nn) * det_small;
    let diff_term = t.powi(nn) * det_diff;
    let rem = remainder_t(det_small, det_diff, n, t)?;
    let mut r = InequalityReport::new(name, lhs, small_term + diff_term + rem, scale, tol)
        .component("lhs_det", lhs)
        .component("weighted_det_small", small_term)
        .component("weighted_det_diff", diff_term)
        .component("remainder_t", rem)
        .with_digest("t", t);
    r.clamps = clamp.count;
    Ok(r)
}

fn describe(obs: &[Observable], f: Option<&MonotoneFunction>, g: Option<&MonotoneFunction>) -> BTreeMap<String, String> {
    let mut d = BTreeMap::new();
    d.insert("n".into(), obs.first().map_or(0, |a| a.dim()).to_string());
    d.insert("N".into(), obs.len().to_string());
    if let Some(f) = f {
        d.insert("f".into(), f.name().to_string());
    }
    if let Some(g) = g {
        d.insert("g".into(), g.name().to_string());
    }
    d
}

/// det Cov_D ≥ det Qov_{D,f}
pub fn check_main(d: &DensityMatrix, f: &MonotoneFunction, obs: &[Observable], tol: f64) -> Result<InequalityReport> {
    let c = cov_matrix(d, obs)?;
    let q = qov_matrix(d, f, obs)?;
    let mut r = main_from(&c, &q, det_scale(obs), tol)?;
    r.digest = describe(obs, Some(f), None);
    Ok(r)
}

pub fn main_from(cov: &SymmetricMatrix, qov: &SymmetricMatrix, scale: f64, tol: f64) -> Result<InequalityReport> {
    let lhs = det_real_symmetric(cov)?;
    let rhs = det_real_symmetric(qov)?;
    Ok(InequalityReport::new("main", lhs, rhs, scale, tol)
        .component("det_cov", lhs)
        .component("det_qov_f", rhs))
}

/// det Cov ≥ det Qov_f + det(Cov − Qov_f) + R(D, f, N)
pub fn check_conj1(d: &DensityMatrix, f: &MonotoneFunction, obs: &[Observable], tol: f64) -> Result<InequalityReport> {
    let c = cov_matrix(d, obs)?;
    let q = qov_matrix(d, f, obs)?;
    let mut r = conj1_from(&c, &q, det_scale(obs), tol)?;
    r.digest = describe(obs, Some(f), None);
    Ok(r)
}

pub fn conj1_from(cov: &SymmetricMatrix, qov: &SymmetricMatrix, scale: f64, tol: f64) -> Result<InequalityReport> {
    let r = minkowski_split("conj1", &CONJ1_LABELS, cov, qov, scale, tol)?;
    if r.status == Status::Fail && r.rhs.is_nan() {
        return Ok(r);
    }
    // rhs ≥ det Qov: this check subsumes the main inequality
    let main_rhs = r.components["det_qov_f"];
    if r.rhs < main_rhs - tol * scale {
        return Ok(r.violated("conj1 rhs fell below det Qov_f".into()));
    }
    Ok(r)
}

/// Evaluates the strict dominance hypothesis f(0)/f(t) > g(0)/g(t) on the
/// standard grid. Err carries the reason it is not met.
pub fn dominance_hypothesis(f: &MonotoneFunction, g: &MonotoneFunction) -> std::result::Result<(), String> {
    if !f.is_regular() || !g.is_regular() {
        return Err(format!("{} and {} must both be regular", f.name(), g.name()));
    }
    match dominates(f, g, &standard_grid()) {
        Ok(rep) if rep.ordering == Dominance::Strict => Ok(()),
        Ok(rep) => Err(format!(
            "{} does not strictly dominate {} (min margin {:e})",
            f.name(),
            g.name(),
            rep.min_margin
        )),
        Err(e) => Err(e.to_string()),
    }
}

/// det Qov_f ≥ det Qov_g + det(Qov_f − Qov_g) + R(D, f, g, N), provided f
/// strictly dominates g.
pub fn check_conj2(
    d: &DensityMatrix,
    f: &MonotoneFunction,
    g: &MonotoneFunction,
    obs: &[Observable],
    tol: f64,
) -> Result<InequalityReport> {
    let scale = det_scale(obs);
    if let Err(why) = dominance_hypothesis(f, g) {
        let mut r = InequalityReport::hypothesis_not_met("conj2", scale, tol, why);
        r.digest = describe(obs, Some(f), Some(g));
        return Ok(r);
    }
    let qf = qov_matrix(d, f, obs)?;
    let qg = qov_matrix(d, g, obs)?;
    let mut r = minkowski_split("conj2", &CONJ2_LABELS, &qf, &qg, scale, tol)?;
    r.digest = describe(obs, Some(f), Some(g));
    Ok(r)
}

/// The t-weighted forms. With `g = None` this compares (Cov, Qov_f); with
/// `g = Some(g)` it compares (Qov_f, Qov_g) under the dominance hypothesis.
pub fn check_firey(
    d: &DensityMatrix,
    f: &MonotoneFunction,
    g: Option<&MonotoneFunction>,
    obs: &[Observable],
    t: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let scale = det_scale(obs);
    let mut r = match g {
        None => {
            let c = cov_matrix(d, obs)?;
            let q = qov_matrix(d, f, obs)?;
            firey_split("conj3", &c, &q, t, scale, tol)?
        }
        Some(g) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::OutOfRange {
                    what: "t (must lie in [0, 1])",
                    value: t,
                });
            }
            if let Err(why) = dominance_hypothesis(f, g) {
                InequalityReport::hypothesis_not_met("conj4", scale, tol, why)
            } else {
                let qf = qov_matrix(d, f, obs)?;
                let qg = qov_matrix(d, g, obs)?;
                firey_split("conj4", &qf, &qg, t, scale, tol)?
            }
        }
    };
    let digest_t = t;
    r.digest = describe(obs, Some(f), g);
    r.digest.insert("t".into(), digest_t.to_string());
    Ok(r)
}

/// det Cov_D ≥ det[−(i/2)·Tr(D[A_h, A_j])]
pub fn check_robertson(d: &DensityMatrix, obs: &[Observable], tol: f64) -> Result<InequalityReport> {
    let c = cov_matrix(d, obs)?;
    let lhs = det_real_symmetric(&c)?;
    let rhs = robertson_matrix(d, obs)?.det();
    let mut r = InequalityReport::new("robertson", lhs, rhs, det_scale(obs), tol)
        .component("det_cov", lhs)
        .component("det_commutator_bound", rhs);
    r.digest = describe(obs, None, None);
    Ok(r)
}

pub fn robertson_from(cov: &SymmetricMatrix, bound_det: f64, scale: f64, tol: f64) -> Result<InequalityReport> {
    let lhs = det_real_symmetric(cov)?;
    Ok(InequalityReport::new("robertson", lhs, bound_det, scale, tol)
        .component("det_cov", lhs)
        .component("det_commutator_bound", bound_det))
}

/// Which of the three equivalent conditions hold for an instance:
/// a. det Cov = det Qov_f, b. det Qov_f = det Qov_g, c. the centered
/// observables are linearly dependent.
#[derive(Clone, Debug, Serialize)]
pub struct EqualityClassification {
    pub det_cov: f64,
    pub det_qov_f: f64,
    pub det_qov_g: Option<f64>,
    pub det_cov_minus_qov_f: f64,
    pub linear: Dependence,
    pub offdiagonal: Dependence,
    pub a: bool,
    pub b: Option<bool>,
    pub c: bool,
    pub scale: f64,
    pub tol: f64,
}

impl EqualityClassification {
    pub fn a_iff_c(&self) -> bool {
        self.a == self.c
    }

    /// b ⇔ c. Offdiagonally dependent but linearly independent families
    /// make both Qov determinants vanish, so b holds while c does not.
    pub fn b_iff_c(&self) -> Option<bool> {
        self.b.map(|b| b == self.c)
    }

    /// a, b and c all agree.
    pub fn consistent(&self) -> bool {
        self.a_iff_c() && self.b_iff_c().unwrap_or(true)
    }
}

pub fn classify_equality(
    d: &DensityMatrix,
    f: &MonotoneFunction,
    g: Option<&MonotoneFunction>,
    obs: &[Observable],
    tol: f64,
) -> Result<EqualityClassification> {
    if let Some(g) = g {
        dominance_hypothesis(f, g).map_err(|reason| Error::InvalidFunction {
            name: format!("({}, {})", f.name(), g.name()),
            reason,
        })?;
    }
    let scale = det_scale(obs);
    let c = cov_matrix(d, obs)?;
    let qf = qov_matrix(d, f, obs)?;
    let det_cov = det_real_symmetric(&c)?;
    let det_qov_f = det_real_symmetric(&qf)?;
    let det_cov_minus_qov_f = det_real_symmetric(&c.sub(&qf))?;
    let det_qov_g = match g {
        Some(g) => Some(det_real_symmetric(&qov_matrix(d, g, obs)?)?),
        None => None,
    };
    let linear = linear_dependence(d, obs, RANK_TOL)?;
    let offdiagonal = offdiagonal_dependence(&eigenframe(d, obs)?, RANK_TOL);
    let eq = |x: f64, y: f64| (x - y).abs() <= tol * scale;
    Ok(EqualityClassification {
        det_cov,
        det_qov_f,
        det_qov_g,
        det_cov_minus_qov_f,
        linear,
        offdiagonal,
        a: eq(det_cov, det_qov_f),
        b: det_qov_g.map(|dg| eq(det_qov_f, dg)),
        c: linear.dependent,
        scale,
        tol,
    })
}

/// det((1−t)K + tL)^{1/N} ≥ (1−t)·det(K)^{1/N} + t·det(L)^{1/N} for PSD K, L.
/// At t = 1/2, doubling both sides gives the Minkowski inequality.
pub fn minkowski_firey_selftest(k: &SymmetricMatrix, l: &SymmetricMatrix, t: f64) -> Result<InequalityReport> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: "t (must lie in [0, 1])",
            value: t,
        });
    }
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: l.dim(),
        });
    }
    let scale = k.max_abs().max(l.max_abs()).max(1.0);
    for m in [k, l] {
        let min = min_eigenvalue_symmetric(m)?;
        if min < -1e-12 * scale {
            return Err(Error::NotPositive(min));
        }
    }
    let n = k.dim() as f64;
    let root = |x: f64| x.max(0.0).powf(1.0 / n);
    let lhs = root(det_real_symmetric(&k.combine(1.0 - t, l, t))?);
    let rhs = (1.0 - t) * root(det_real_symmetric(k)?) + t * root(det_real_symmetric(l)?);
    Ok(InequalityReport::new("minkowski-firey", lhs, rhs, scale, 1e-12).with_digest("t", t))
}

/// K_D(X, X) ≥ K_{T(D)}(T(X), T(X)) for the pinching channel T.
pub fn check_metric_contraction(
    d: &DensityMatrix,
    x: &HermitianMatrix,
    f: &MonotoneFunction,
    partition: &[Vec<usize>],
    tol: f64,
) -> Result<InequalityReport> {
    let td = HermitianMatrix::symmetrized(&pinching(d.matrix().as_complex(), partition)?);
    let td = DensityMatrix::new(td)?;
    let tx = HermitianMatrix::symmetrized(&pinching(x.as_complex(), partition)?);
    let before = metric_inner(d, f, x, x)?;
    let after = metric_inner(&td, f, &tx, &tx)?;
    let scale = before.abs().max(1.0);
    let mut r = InequalityReport::new("contraction", before, after, scale, tol)
        .component("metric_before", before)
        .component("metric_after", after);
    r.digest.insert("f".into(), f.name().to_string());
    r.digest.insert("n".into(), d.dim().to_string());
    r.digest.insert("blocks".into(), partition.len().to_string());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_density, random_eigenbasis_diagonal, random_observable, StateKind};

    fn qubit() -> DensityMatrix {
        DensityMatrix::diagonal(&[0.75, 0.25]).unwrap()
    }
    fn f(s: &str) -> MonotoneFunction {
        MonotoneFunction::parse(s).unwrap()
    }
    fn xy() -> Vec<Observable> {
        vec![Observable::pauli_x(), Observable::pauli_y()]
    }

    #[test]
    fn remainder_examples() {
        assert!((remainder(1.0 / 16.0, 9.0 / 16.0, 2).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(remainder(0.3, 0.7, 1).unwrap(), 0.0);
        assert_eq!(remainder(0.0, 0.7, 3).unwrap(), 0.0);
        assert_eq!(remainder(0.7, 0.0, 3).unwrap(), 0.0);
        assert_eq!(remainder(-1e-13, 0.7, 3).unwrap(), 0.0);
        assert!(remainder(-1e-6, 0.7, 3).is_err());
    }

    #[test]
    fn remainder_t_examples() {
        assert_eq!(remainder_t(0.2, 0.5, 3, 0.0).unwrap(), 0.0);
        assert_eq!(remainder_t(0.2, 0.5, 3, 1.0).unwrap(), 0.0);
        assert!((remainder_t(1.0 / 16.0, 9.0 / 16.0, 2, 0.5).unwrap() - 3.0 / 32.0).abs() < 1e-16);
        for (q, c, n) in [(0.2, 0.5, 2), (0.01, 0.3, 3), (1.7, 0.4, 4)] {
            let half = remainder_t(q, c, n, 0.5).unwrap();
            let full = remainder(q, c, n).unwrap();
            assert!((half - full / 2f64.powi(n as i32)).abs() < 1e-12);
        }
        assert!(remainder_t(0.1, 0.1, 2, 1.5).is_err());
    }

    #[test]
    fn main_examples() {
        let d = qubit();
        let r = check_main(&d, &f("sld"), &[Observable::pauli_x()], DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 0.25).abs() < 1e-15);
        let r = check_main(&d, &f("sld"), &xy(), DEFAULT_TOL).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0 / 16.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(3);
        let obs: Vec<_> = (0..2).map(|k| random_observable(3, k).unwrap()).collect();
        let r = check_main(&mixed, &f("wy"), &obs, DEFAULT_TOL).unwrap();
        assert!(r.pass && r.rhs.abs() < 1e-15);
    }

    #[test]
    fn conj1_tight_witness() {
        let r = check_conj1(&qubit(), &f("sld"), &xy(), DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert!(r.margin.abs() <= 1e-12, "{r:?}");
        assert!((r.components["det_qov_f"] - 1.0 / 16.0).abs() < 1e-15);
        assert!((r.components["det_cov_minus_qov_f"] - 9.0 / 16.0).abs() < 1e-15);
        assert!((r.components["remainder"] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn conj1_scalar_case_is_exact() {
        for seed in 0..10 {
            let d = random_density(3, seed, StateKind::Generic).unwrap();
            let a = random_observable(3, 100 + seed).unwrap();
            let r = check_conj1(&d, &f("wyd:0.3"), &[a], DEFAULT_TOL).unwrap();
            assert!(r.margin.abs() < 1e-14);
        }
    }

    #[test]
    fn conj1_offdiagonally_dependent() {
        let d = random_density(3, 1, StateKind::Generic).unwrap();
        let a = random_observable(3, 2).unwrap();
        let b = a.scale(0.7).add(&random_eigenbasis_diagonal(&d, 3));
        let r = check_conj1(&d, &f("sld"), &[a, b], DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert_eq!(r.components["remainder"], 0.0);
        assert!((r.rhs - r.components["det_cov_minus_qov_f"]).abs() < 1e-15);
    }

    #[test]
    fn conj2_examples() {
        let d = qubit();
        let r = check_conj2(&d, &f("sld"), &f("wy"), &[Observable::pauli_x()], DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert!(r.margin.abs() < 1e-15);
        assert!((r.components["det_qov_g"] - (2.0 - 3f64.sqrt()) / 2.0).abs() < 1e-15);
        let r = check_conj2(&d, &f("sld"), &f("wy"), &xy(), DEFAULT_TOL).unwrap();
        assert!(r.margin.abs() < 1e-15);
        let r = check_conj2(&d, &f("wy"), &f("sld"), &xy(), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);
        assert!(!r.pass);
        let r = check_conj2(&d, &f("sld"), &f("kubo-mori"), &xy(), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);

        let d3 = random_density(3, 7, StateKind::Generic).unwrap();
        let obs: Vec<_> = (0..2).map(|k| random_observable(3, 20 + k).unwrap()).collect();
        let r = check_conj2(&d3, &f("sld"), &f("wy"), &obs, DEFAULT_TOL).unwrap();
        assert!(r.pass && r.margin > 0.0, "{r:?}");
    }

    #[test]
    fn firey_examples() {
        let d = qubit();
        let sld = f("sld");
        let r0 = check_firey(&d, &sld, None, &xy(), 0.0, DEFAULT_TOL).unwrap();
        assert!(r0.margin.abs() < 1e-15 && (r0.lhs - 1.0 / 16.0).abs() < 1e-15);
        let r1 = check_firey(&d, &sld, None, &xy(), 1.0, DEFAULT_TOL).unwrap();
        assert!(r1.margin.abs() < 1e-15 && (r1.lhs - 9.0 / 16.0).abs() < 1e-15);
        let h = check_firey(&d, &sld, None, &xy(), 0.5, DEFAULT_TOL).unwrap();
        assert!((h.lhs - 0.25).abs() < 1e-15);
        assert!((h.components["weighted_det_small"] - 1.0 / 64.0).abs() < 1e-15);
        assert!((h.components["weighted_det_diff"] - 9.0 / 64.0).abs() < 1e-15);
        assert!((h.components["remainder_t"] - 6.0 / 64.0).abs() < 1e-15);
        assert!(h.margin.abs() <= 1e-12);
        assert!(check_firey(&d, &sld, None, &xy(), 1.2, DEFAULT_TOL).is_err());
        let r = check_firey(&d, &f("wy"), Some(&sld), &xy(), 0.3, DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);
    }

    #[test]
    fn firey_half_reproduces_conj1() {
        let d = random_density(4, 3, StateKind::Generic).unwrap();
        let obs: Vec<_> = (0..3).map(|k| random_observable(4, 40 + k).unwrap()).collect();
        let c1 = check_conj1(&d, &f("wy"), &obs, DEFAULT_TOL).unwrap();
        let h = check_firey(&d, &f("wy"), None, &obs, 0.5, DEFAULT_TOL).unwrap();
        let s = 0.125;
        assert!((h.lhs - s * c1.lhs).abs() < 1e-11);
        assert!((h.components["weighted_det_small"] - s * c1.components["det_qov_f"]).abs() < 1e-11);
        assert!((h.components["weighted_det_diff"] - s * c1.components["det_cov_minus_qov_f"]).abs() < 1e-11);
        assert!((h.components["remainder_t"] - s * c1.components["remainder"]).abs() < 1e-11);
    }

    #[test]
    fn robertson_examples() {
        let r = check_robertson(&qubit(), &xy(), DEFAULT_TOL).unwrap();
        assert!(r.pass && (r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 0.25).abs() < 1e-15);
        let r = check_robertson(&DensityMatrix::maximally_mixed(2), &xy(), DEFAULT_TOL).unwrap();
        assert!(r.pass && r.rhs == 0.0);
        let d = random_density(3, 5, StateKind::Generic).unwrap();
        let obs: Vec<_> = (0..3).map(|k| random_observable(3, 60 + k).unwrap()).collect();
        let r = check_robertson(&d, &obs, DEFAULT_TOL).unwrap();
        assert!(r.pass && r.rhs.abs() <= 1e-12 * r.scale);
    }

    #[test]
    fn equality_examples() {
        let d = qubit();
        let sx = Observable::pauli_x();
        let e = classify_equality(&d, &f("sld"), Some(&f("wy")), &[sx.clone(), sx.shifted(1.0)], 1e-10).unwrap();
        assert!(e.a && e.b == Some(true) && e.c && e.consistent());
        assert!(e.det_cov.abs() < 1e-10 && e.det_qov_f.abs() < 1e-10);

        let e = classify_equality(&d, &f("sld"), None, &xy(), 1e-10).unwrap();
        assert!(!e.a && !e.c && e.consistent());

        let e = classify_equality(&d, &f("sld"), Some(&f("wy")), &[Observable::pauli_z()], 1e-10).unwrap();
        assert!(!e.a && !e.c && e.offdiagonal.dependent && e.det_cov > 0.0);
        assert!(e.det_qov_f.abs() < 1e-15);
        // both Qov determinants vanish, so b holds without linear dependence
        assert_eq!(e.b, Some(true));
        assert_eq!(e.b_iff_c(), Some(false));
    }

    #[test]
    fn minkowski_firey_examples() {
        let k = SymmetricMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let r = minkowski_firey_selftest(&k, &k, 0.4).unwrap();
        assert!(r.margin.abs() <= 1e-12);
        let r = minkowski_firey_selftest(&SymmetricMatrix::identity(2), &SymmetricMatrix::from_diag(&[1.0, 4.0]), 0.5).unwrap();
        assert!((r.margin - (2.5f64.sqrt() - 1.5)).abs() < 1e-15);
        assert!((r.margin - 0.0811).abs() < 1e-4);
        let l = SymmetricMatrix::from_diag(&[0.5, 3.0]);
        for t in [0.0, 1.0] {
            assert!(minkowski_firey_selftest(&k, &l, t).unwrap().margin.abs() <= 1e-12);
        }
        let bad = SymmetricMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(minkowski_firey_selftest(&bad, &k, 0.5), Err(Error::NotPositive(_))));
    }

    #[test]
    fn contraction_examples() {
        let d = random_density(3, 8, StateKind::Generic).unwrap();
        let x = random_observable(3, 9).unwrap().matrix().clone();
        let whole = vec![vec![0, 1, 2]];
        let r = check_metric_contraction(&d, &x, &f("kubo-mori"), &whole, DEFAULT_TOL).unwrap();
        assert!(r.margin.abs() < 1e-12);

        let dd = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let mut off = x.as_complex().clone();
        for i in 0..3 {
            off[(i, i)] = num_complex::Complex64::new(0.0, 0.0);
        }
        let off = HermitianMatrix::symmetrized(&off);
        let singles = vec![vec![0], vec![1], vec![2]];
        let r = check_metric_contraction(&dd, &off, &f("sld"), &singles, DEFAULT_TOL).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert!(r.pass && r.margin > 0.0);
    }
}
