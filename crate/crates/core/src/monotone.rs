//! Normalized symmetric operator monotone functions.
//!
//! A [`MonotoneFunction`] is an operator monotone f: (0, ∞) → (0, ∞) with
//! f(1) = 1 and f(x) = x·f(1/x). Functions with f(0) > 0 are *regular*;
//! those with f(0) = 0 are *nonregular*. Each regular f has a nonregular
//! companion f̃(x) = ½((x+1) − (x−1)²·f(0)/f(x)), built by [`MonotoneFunction::tilde`].

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{apply_scalar_function, min_eigenvalue, ComplexMatrix, HermitianMatrix};

/// |f(0)| above this counts as regular.
pub const REGULARITY_FLOOR: f64 = 1e-12;
pub const DOMINANCE_FLOOR: f64 = 1e-12;
/// Half-width of the window around x = 1 where series expansions replace
/// the closed forms with removable singularities.
pub const SERIES_WINDOW: f64 = 1e-6;

pub const STANDARD_GRID_LEN: usize = 41;

/// 41 log-spaced points from 1e-4 to 1e4.
pub fn standard_grid() -> Vec<f64> {
    (0..STANDARD_GRID_LEN)
        .map(|k| 10f64.powf(-4.0 + 8.0 * k as f64 / (STANDARD_GRID_LEN - 1) as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularity {
    Regular,
    Nonregular,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    /// (1+x)/2
    Sld,
    /// 2x/(1+x)
    Harmonic,
    /// (x−1)/log x
    KuboMori,
    /// 2(x−1)²/((1+x)(log x)²)
    LogSquared,
    /// 2(x−1)√x/((1+x) log x)
    LogGeometric,
    /// 2x^{α+1/2}/(1+x^{2α}), 0 ≤ α ≤ 1/2
    Alpha(f64),
    /// β(1−β)(x−1)²/((x^β−1)(x^{1−β}−1))
    Wyd(f64),
    /// ¼(√x+1)²
    Wy,
    Tilde(Box<MonotoneFunction>),
    Custom(Evaluator),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Sld => write!(f, "Sld"),
            Family::Harmonic => write!(f, "Harmonic"),
            Family::KuboMori => write!(f, "KuboMori"),
            Family::LogSquared => write!(f, "LogSquared"),
            Family::LogGeometric => write!(f, "LogGeometric"),
            Family::Alpha(a) => write!(f, "Alpha({a})"),
            Family::Wyd(b) => write!(f, "Wyd({b})"),
            Family::Wy => write!(f, "Wy"),
            Family::Tilde(g) => write!(f, "Tilde({})", g.name),
            Family::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonotoneFunction {
    name: String,
    family: Family,
    value_at_zero: f64,
    /// Set for WYD parameters outside 0 < |β| < 1.
    unvalidated_range: bool,
}

/// (x−1)/log x with the removable singularity at 1.
fn kubo_mori(x: f64) -> f64 {
    let d = x - 1.0;
    if d.abs() < SERIES_WINDOW {
        let u = d.ln_1p();
        1.0 + u / 2.0 + u * u / 6.0
    } else {
        d / x.ln()
    }
}

fn wyd(beta: f64, x: f64) -> f64 {
    if x > 1e100 {
        return x * wyd(beta, 1.0 / x);
    }
    let d = x - 1.0;
    // x − 1 is exact only for x in [1/2, 2]; further out it discards the
    // low digits of small x, so take the logarithm of x itself
    let u = if d.abs() < 0.5 { d.ln_1p() } else { x.ln() };
    if d.abs() < SERIES_WINDOW {
        return 1.0 + u / 2.0 + (2.0 + beta - beta * beta) * u * u / 12.0;
    }
    beta * (1.0 - beta) * d * d / ((beta * u).exp_m1() * ((1.0 - beta) * u).exp_m1())
}

impl MonotoneFunction {
    /// Builds a catalogue member. `params` carries α for `alpha` and β for
    /// `wyd`; the other names take none.
    pub fn make(name: &str, params: &[f64]) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if params.len() != k {
                return Err(Error::InvalidFunction {
                    name: name.to_string(),
                    reason: format!("expected {k} parameter(s), got {}", params.len()),
                });
            }
            Ok(())
        };
        match name {
            "sld" => {
                want(0)?;
                Ok(Self::plain("sld", Family::Sld, 0.5))
            }
            "harmonic" => {
                want(0)?;
                Ok(Self::plain("harmonic", Family::Harmonic, 0.0))
            }
            "kubo-mori" => {
                want(0)?;
                Ok(Self::plain("kubo-mori", Family::KuboMori, 0.0))
            }
            "log-squared" => {
                want(0)?;
                Ok(Self::plain("log-squared", Family::LogSquared, 0.0))
            }
            "log-geometric" => {
                want(0)?;
                Ok(Self::plain("log-geometric", Family::LogGeometric, 0.0))
            }
            "wy" => {
                want(0)?;
                Ok(Self::plain("wy", Family::Wy, 0.25))
            }
            "alpha" => {
                want(1)?;
                let a = params[0];
                if !(0.0..=0.5).contains(&a) {
                    return Err(Error::ParameterOutOfRange {
                        name: "alpha",
                        value: a,
                        range: "[0, 1/2]",
                    });
                }
                Ok(Self::plain(&format!("alpha:{a}"), Family::Alpha(a), 0.0))
            }
            "wyd" => {
                want(1)?;
                let b = params[0];
                if !(b != 0.0 && b.abs() < 1.0) {
                    return Err(Error::ParameterOutOfRange {
                        name: "beta",
                        value: b,
                        range: "0 < |beta| < 1",
                    });
                }
                Ok(Self::wyd_unchecked(b, false))
            }
            "wyd-ext" => {
                want(1)?;
                let b = params[0];
                if !((-1.0..=2.0).contains(&b) && b != 0.0 && b != 1.0) {
                    return Err(Error::ParameterOutOfRange {
                        name: "beta",
                        value: b,
                        range: "[-1, 2] \\ {0, 1}",
                    });
                }
                let inside = b.abs() < 1.0;
                Ok(Self::wyd_unchecked(b, !inside))
            }
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    /// Parses `name` or `name:param`, e.g. `wyd:0.3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec.split_once(':') {
            None => Self::make(spec, &[]),
            Some((name, p)) => {
                let v: f64 = p.trim().parse().map_err(|_| Error::InvalidFunction {
                    name: spec.to_string(),
                    reason: format!("cannot parse parameter `{p}`"),
                })?;
                Self::make(name.trim(), &[v])
            }
        }
    }

    /// A user-supplied function. It is checked on the standard grid
    /// (normalization, symmetry, positivity, monotonicity) but operator
    /// monotonicity is not certified.
    pub fn custom<F>(name: &str, value_at_zero: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let out = Self::plain(name, Family::Custom(Arc::new(f)), value_at_zero);
        out.grid_check().into_result(name)?;
        Ok(out)
    }

    fn plain(name: &str, family: Family, value_at_zero: f64) -> Self {
        Self {
            name: name.to_string(),
            family,
            value_at_zero,
            unvalidated_range: false,
        }
    }

    fn wyd_unchecked(beta: f64, unvalidated: bool) -> Self {
        // (x^β − 1)(x^{1−β} − 1) → 1 as x → 0 when 0 < β < 1; for β outside
        // [0, 1] one factor diverges and f(0) = 0.
        let f0 = if beta > 0.0 && beta < 1.0 {
            beta * (1.0 - beta)
        } else {
            0.0
        };
        let prefix = if unvalidated { "wyd-ext" } else { "wyd" };
        Self {
            name: format!("{prefix}:{beta}"),
            family: Family::Wyd(beta),
            value_at_zero: f0,
            unvalidated_range: unvalidated,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn unvalidated_range(&self) -> bool {
        self.unvalidated_range
    }

    pub fn regularity(&self) -> Regularity {
        if self.value_at_zero.abs() > REGULARITY_FLOOR {
            Regularity::Regular
        } else {
            Regularity::Nonregular
        }
    }

    pub fn is_regular(&self) -> bool {
        self.regularity() == Regularity::Regular
    }

    pub(crate) fn require_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::NonRegular(self.name.clone()))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::NegativeArgument(x));
        }
        if x == 0.0 {
            return Ok(self.value_at_zero);
        }
        Ok(self.eval_positive(x))
    }

    fn eval_positive(&self, x: f64) -> f64 {
        match &self.family {
            Family::Sld => (1.0 + x) / 2.0,
            Family::Harmonic => 2.0 * x / (1.0 + x),
            Family::KuboMori => kubo_mori(x),
            Family::LogSquared => {
                let k = kubo_mori(x);
                2.0 * k * k / (1.0 + x)
            }
            Family::LogGeometric => 2.0 * x.sqrt() * kubo_mori(x) / (1.0 + x),
            Family::Alpha(a) => 2.0 * x.powf(a + 0.5) / (1.0 + x.powf(2.0 * a)),
            Family::Wyd(b) => wyd(*b, x),
            Family::Wy => {
                let s = x.sqrt() + 1.0;
                s * s / 4.0
            }
            Family::Tilde(f) => {
                // the x > 1 branch goes through the symmetry so that the
                // subtraction below always works on O(1) quantities
                let raw = |t: f64| {
                    let d = t - 1.0;
                    0.5 * ((t + 1.0) - d * d * f.value_at_zero / f.eval_positive(t))
                };
                if x > 1.0 {
                    x * raw(1.0 / x)
                } else {
                    raw(x)
                }
            }
            Family::Custom(g) => g(x),
        }
    }

    /// m_f(x, y) = x·f(y/x), extended by symmetry to x = 0.
    pub fn mean(&self, x: f64, y: f64) -> Result<f64> {
        if x.is_nan() || y.is_nan() || x < 0.0 || y < 0.0 {
            return Err(Error::NegativeArgument(if x.is_nan() || x < 0.0 { x } else { y }));
        }
        if x == 0.0 {
            return Ok(y * self.value_at_zero);
        }
        Ok(x * self.eval(y / x)?)
    }

    /// f̃(x) = ½((x+1) − (x−1)²·f(0)/f(x)). Requires a regular f.
    pub fn tilde(&self) -> Result<MonotoneFunction> {
        self.require_regular()?;
        Ok(MonotoneFunction {
            name: format!("tilde({})", self.name),
            family: Family::Tilde(Box::new(self.clone())),
            value_at_zero: 0.0,
            unvalidated_range: self.unvalidated_range,
        })
    }

    /// Evaluates the defining invariants on the standard grid.
    pub fn grid_check(&self) -> GridCheck {
        let grid = standard_grid();
        let mut check = GridCheck {
            normalization_error: (self.eval_positive(1.0) - 1.0).abs(),
            ..GridCheck::default()
        };
        let mut prev = f64::NEG_INFINITY;
        for &x in &grid {
            let fx = self.eval_positive(x);
            let mirror = x * self.eval_positive(1.0 / x);
            let rel = (fx - mirror).abs() / fx.abs().max(f64::MIN_POSITIVE);
            check.max_symmetry_error = check.max_symmetry_error.max(rel);
            if !(fx > 0.0) || !fx.is_finite() {
                check.nonpositive_points += 1;
            }
            if fx < prev {
                check.decreasing_points += 1;
            }
            prev = fx;
        }
        check
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GridCheck {
    pub normalization_error: f64,
    /// max relative |f(x) − x f(1/x)|
    pub max_symmetry_error: f64,
    pub nonpositive_points: usize,
    pub decreasing_points: usize,
}

impl GridCheck {
    pub fn passes(&self) -> bool {
        self.normalization_error <= 1e-12
            && self.max_symmetry_error <= 1e-10
            && self.nonpositive_points == 0
            && self.decreasing_points == 0
    }

    fn into_result(self, name: &str) -> Result<()> {
        if self.passes() {
            Ok(())
        } else {
            Err(Error::InvalidFunction {
                name: name.to_string(),
                reason: format!("{self:?}"),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Strict,
    Weak,
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    /// (t, f(0)/f(t) − g(0)/g(t))
    pub margins: Vec<(f64, f64)>,
    pub min_margin: f64,
    pub ordering: Dominance,
    /// Smallest margin sits within 10× the floor: worth a closer look.
    pub near_boundary: bool,
}

/// Compares f(0)/f(t) against g(0)/g(t) on `grid`.
pub fn dominates(f: &MonotoneFunction, g: &MonotoneFunction, grid: &[f64]) -> Result<DominanceReport> {
    dominates_with_floor(f, g, grid, DOMINANCE_FLOOR)
}

pub fn dominates_with_floor(
    f: &MonotoneFunction,
    g: &MonotoneFunction,
    grid: &[f64],
    floor: f64,
) -> Result<DominanceReport> {
    f.require_regular()?;
    g.require_regular()?;
    let margins = grid
        .iter()
        .map(|&t| {
            Ok((
                t,
                f.value_at_zero / f.eval(t)? - g.value_at_zero / g.eval(t)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_margin = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let ordering = if min_margin > floor {
        Dominance::Strict
    } else if min_margin >= -floor {
        Dominance::Weak
    } else {
        Dominance::Neither
    };
    let near_boundary = min_margin.abs() <= 10.0 * floor && ordering != Dominance::Weak;
    Ok(DominanceReport {
        margins,
        min_margin,
        ordering,
        near_boundary,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub function: String,
    pub dim: usize,
    pub trials: usize,
    pub failures: usize,
    /// smallest eigenvalue of f(B) − f(A) seen
    pub worst_min_eigenvalue: f64,
}

/// λ_min(f(B) − f(A)); nonnegative when f is operator monotone and A ≼ B.
pub fn monotone_gap(f: &MonotoneFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    let phi = |x: f64| f.eval(x).unwrap_or(f64::NAN);
    let fa = apply_scalar_function(a, phi)?;
    let fb = apply_scalar_function(b, phi)?;
    min_eigenvalue(&fb.sub(&fa))
}

pub const MONOTONE_VIOLATION: f64 = -1e-9;

/// Samples random pairs 0 ≺ A ≼ B and checks λ_min(f(B) − f(A)) ≥ −1e-9.
pub fn check_operator_monotone(
    f: &MonotoneFunction,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport> {
    if !(1..=3).contains(&dim) {
        return Err(Error::OutOfRange {
            what: "operator monotonicity dimension",
            value: dim as f64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MonotonicityReport {
        function: f.name.clone(),
        dim,
        trials,
        failures: 0,
        worst_min_eigenvalue: f64::INFINITY,
    };
    for _ in 0..trials {
        let magnitude = 10f64.powf(rng.random_range(-2.0..2.0));
        let g = gram(dim, &mut rng);
        let a = g
            .add(&HermitianMatrix::identity(dim).scale(rng.random_range(0.01..0.5)))
            .scale(magnitude);
        let step = gram(dim, &mut rng).scale(magnitude * rng.random_range(0.0..2.0));
        let b = a.add(&step);
        let gap = monotone_gap(f, &a, &b)?;
        report.worst_min_eigenvalue = report.worst_min_eigenvalue.min(gap);
        if gap < MONOTONE_VIOLATION {
            report.failures += 1;
        }
    }
    Ok(report)
}

/// G·G†/dim for a complex Gaussian G.
fn gram(dim: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = num_complex::Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    HermitianMatrix::symmetrized(&(&m * &m.adjoint())).scale(1.0 / dim as f64)
}

/// One row of the catalogue listing.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub formula: &'static str,
    pub parameters: &'static str,
    pub value_at_zero: &'static str,
    pub regularity: &'static str,
    pub tilde: Option<&'static str>,
    /// a representative spec string accepted by [`MonotoneFunction::parse`]
    pub example: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "sld",
            formula: "(1+x)/2",
            parameters: "none",
            value_at_zero: "1/2",
            regularity: "regular",
            tilde: Some("2x/(1+x)"),
            example: "sld",
        },
        CatalogEntry {
            name: "harmonic",
            formula: "2x/(1+x)",
            parameters: "none",
            value_at_zero: "0",
            regularity: "nonregular",
            tilde: None,
            example: "harmonic",
        },
        CatalogEntry {
            name: "kubo-mori",
            formula: "(x-1)/log x",
            parameters: "none",
            value_at_zero: "0",
            regularity: "nonregular",
            tilde: None,
            example: "kubo-mori",
        },
        CatalogEntry {
            name: "log-squared",
            formula: "2(x-1)^2/((1+x)(log x)^2)",
            parameters: "none",
            value_at_zero: "0",
            regularity: "nonregular",
            tilde: None,
            example: "log-squared",
        },
        CatalogEntry {
            name: "log-geometric",
            formula: "2(x-1)sqrt(x)/((1+x) log x)",
            parameters: "none",
            value_at_zero: "0",
            regularity: "nonregular",
            tilde: None,
            example: "log-geometric",
        },
        CatalogEntry {
            name: "alpha",
            formula: "2x^(a+1/2)/(1+x^(2a))",
            parameters: "0 <= a <= 1/2",
            value_at_zero: "0",
            regularity: "nonregular",
            tilde: None,
            example: "alpha:0.25",
        },
        CatalogEntry {
            name: "wyd",
            formula: "b(1-b)(x-1)^2/((x^b-1)(x^(1-b)-1))",
            parameters: "0 < |b| < 1 (wyd-ext: -1 <= b <= 2, b not 0 or 1, unvalidated)",
            value_at_zero: "b(1-b) for 0 < b < 1; 0 for b < 0",
            regularity: "regular for 0 < b < 1, nonregular for b < 0",
            tilde: Some("(x^b + x^(1-b))/2 for 0 < b < 1"),
            example: "wyd:0.3",
        },
        CatalogEntry {
            name: "wy",
            formula: "(sqrt(x)+1)^2/4  (wyd at b = 1/2)",
            parameters: "none",
            value_at_zero: "1/4",
            regularity: "regular",
            tilde: Some("sqrt(x)"),
            example: "wy",
        },
    ]
}

/// Every catalogue member at its representative parameter, plus a few
/// extra parameter values.
pub fn catalog_members() -> Vec<MonotoneFunction> {
    [
        "sld",
        "harmonic",
        "kubo-mori",
        "log-squared",
        "log-geometric",
        "alpha:0",
        "alpha:0.25",
        "alpha:0.5",
        "wyd:0.3",
        "wyd:0.1",
        "wyd:-0.5",
        "wy",
    ]
    .iter()
    .map(|s| MonotoneFunction::parse(s).expect("catalogue spec"))
    .collect()
}

pub fn regular_catalog_members() -> Vec<MonotoneFunction> {
    catalog_members().into_iter().filter(|f| f.is_regular()).collect()
}
