//! Hand-derived reference values, recomputed through the public API.

use serde::Serialize;

use crate::covariance::{alpha_closed_form, cov, qov};
use crate::error::Result;
use crate::inequalities::{
    check_conj1, check_conj2, check_firey, check_main, check_robertson, minkowski_firey_selftest, remainder,
    remainder_t, DEFAULT_TOL,
};
use crate::linalg::{hermitian_eigen, HermitianMatrix, SymmetricMatrix};
use crate::monotone::MonotoneFunction;
use crate::state::{DensityMatrix, Observable};

#[derive(Clone, Debug, Serialize)]
pub struct SelftestCase {
    pub name: &'static str,
    pub expected: f64,
    pub actual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn case(name: &'static str, expected: f64, actual: f64, tol: f64) -> SelftestCase {
    SelftestCase {
        name,
        expected,
        actual,
        tol,
        pass: (expected - actual).abs() <= tol,
    }
}

pub fn selftest() -> Result<Vec<SelftestCase>> {
    let f = |s: &str| MonotoneFunction::parse(s);
    let (sld, wy, wyd) = (f("sld")?, f("wy")?, f("wyd:0.3")?);
    let d = DensityMatrix::diagonal(&[0.75, 0.25])?;
    let (sx, sy) = (Observable::pauli_x(), Observable::pauli_y());
    let xy = [sx.clone(), sy.clone()];
    let tight = check_conj1(&d, &sld, &xy, DEFAULT_TOL)?;
    let firey = check_firey(&d, &sld, None, &xy, 0.5, DEFAULT_TOL)?;
    let conj2 = check_conj2(&d, &sld, &wy, std::slice::from_ref(&sx), DEFAULT_TOL)?;
    let mink = minkowski_firey_selftest(&SymmetricMatrix::identity(2), &SymmetricMatrix::from_diag(&[1.0, 4.0]), 0.5)?;
    let eig = hermitian_eigen(sx.matrix())?;
    let diag = HermitianMatrix::from_real_diag(&[0.2, 0.5, 0.3]);

    Ok(vec![
        case("eigenvalues of σx, lower", -1.0, eig.eigenvalues[0], 1e-14),
        case("eigenvalues of diag(0.2,0.5,0.3), middle", 0.3, hermitian_eigen(&diag)?.eigenvalues[1], 1e-15),
        case("sld f(0)", 0.5, sld.value_at_zero(), 0.0),
        case("wy f(0)", 0.25, wy.value_at_zero(), 0.0),
        case("wyd:0.3 f(0) = β(1−β)", 0.21, wyd.value_at_zero(), 1e-15),
        case("tilde(sld)(3) = 2x/(1+x)", 1.5, sld.tilde()?.eval(3.0)?, 1e-12),
        case("tilde(wy)(4) = √x", 2.0, wy.tilde()?.eval(4.0)?, 1e-12),
        case("m_sld(0.75, 0.25)", 0.5, sld.mean(0.75, 0.25)?, 1e-15),
        case("α_sld(0.75, 0.25)", 0.125, alpha_closed_form(&sld, 0.75, 0.25)?, 1e-15),
        case("Cov(σx, σx)", 1.0, cov(&d, &sx, &sx)?, 1e-15),
        case("Qov_sld(σx, σx)", 0.25, qov(&d, &sld, &sx, &sx)?, 1e-15),
        case("Qov_wy(σx, σx) = (2−√3)/2", (2.0 - 3f64.sqrt()) / 2.0, qov(&d, &wy, &sx, &sx)?, 1e-15),
        case("Qov_sld(σx, σy)", 0.0, qov(&d, &sld, &sx, &sy)?, 1e-15),
        case("main: det Qov_sld(σx, σy)", 1.0 / 16.0, check_main(&d, &sld, &xy, DEFAULT_TOL)?.rhs, 1e-15),
        case("remainder(1/16, 9/16, 2)", 0.375, remainder(1.0 / 16.0, 9.0 / 16.0, 2)?, 1e-15),
        case("remainder_t(1/16, 9/16, 2, 1/2)", 3.0 / 32.0, remainder_t(1.0 / 16.0, 9.0 / 16.0, 2, 0.5)?, 1e-15),
        case("conj1 witness: det Cov", 1.0, tight.lhs, 1e-12),
        case("conj1 witness: det(Cov − Qov)", 9.0 / 16.0, tight.components["det_cov_minus_qov_f"], 1e-12),
        case("conj1 witness: margin", 0.0, tight.margin, 1e-12),
        case("firey t=1/2 witness: lhs", 0.25, firey.lhs, 1e-12),
        case("firey t=1/2 witness: remainder", 6.0 / 64.0, firey.components["remainder_t"], 1e-12),
        case("firey t=1/2 witness: margin", 0.0, firey.margin, 1e-12),
        case("conj2 (sld, wy), N = 1: margin", 0.0, conj2.margin, 1e-12),
        case("robertson (σx, σy): bound", 0.25, check_robertson(&d, &xy, DEFAULT_TOL)?.rhs, 1e-15),
        case("minkowski-firey I, diag(1,4), t=1/2", 2.5f64.sqrt() - 1.5, mink.margin, 1e-12),
    ])
}
