//! Command dispatch behind the `bjortho` binary.

use std::time::Instant;

use crate::approx::{eps_bj, eps_ortho, eps_strong_bj};
use crate::bj::{bj_ortho, exact_ortho, gamma_min, strong_bj_ortho, GammaResult};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::report::ReportJson;
use crate::tol::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Relation {
    Exact,
    Bj,
    Strong,
    Eps,
    EpsBj,
    EpsStrong,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Exact => "exact",
            Relation::Bj => "bj",
            Relation::Strong => "strong",
            Relation::Eps => "eps",
            Relation::EpsBj => "eps-bj",
            Relation::EpsStrong => "eps-strong",
        }
    }

    pub fn needs_eps(self) -> bool {
        matches!(self, Relation::Eps | Relation::EpsBj | Relation::EpsStrong)
    }
}

pub fn run_check(rel: Relation, x: &ComplexMatrix, y: &ComplexMatrix, eps: Option<f64>, config: Config) -> Result<ReportJson> {
    config.tol.validate()?;
    let start = Instant::now();
    let ms = |s: Instant| s.elapsed().as_secs_f64() * 1e3;
    let tol = &config.tol;
    if rel.needs_eps() {
        let eps = eps.ok_or_else(|| Error::InvalidConfig(format!("relation {} requires --eps", rel.name())))?;
        let v = match rel {
            Relation::Eps => eps_ortho(x, y, eps, tol)?,
            Relation::EpsBj => eps_bj(x, y, eps, tol)?,
            _ => eps_strong_bj(x, y, eps, tol)?,
        };
        return Ok(ReportJson::from_eps(rel.name(), &v, config, ms(start)));
    }
    let v = match rel {
        Relation::Exact => exact_ortho(x, y, tol)?,
        Relation::Bj => bj_ortho(x, y, tol)?,
        _ => strong_bj_ortho(x, y, tol)?,
    };
    Ok(ReportJson::from_verdict(rel.name(), &v, x, y, config, ms(start)))
}

pub fn run_gamma(t: &ComplexMatrix, s: &ComplexMatrix, config: Config) -> Result<GammaResult> {
    config.tol.validate()?;
    gamma_min(t, s, &config.tol)
}

/// Exit codes for failures: 64 usage or parse, 65 invalid data, 66 unreadable input, 70 internal.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidConfig(_) | Error::EpsOutOfRange(_) => 64,
        Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::NotHermitian { .. }
        | Error::NonFinite
        | Error::Empty
        | Error::ZeroDirection
        | Error::DegenerateOperator
        | Error::Unsupported(_) => 65,
        Error::Io(_) => 66,
        _ => 70,
    }
}
