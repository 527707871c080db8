//! JSON report schema shared by the CLI commands.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::approx::{EpsVerdict, Minimizer};
use crate::bj::{Status, Verdict};
use crate::linalg::{inner, norm, op_norm, ComplexMatrix, C64};
use crate::tol::Config;

pub(crate) fn ser_complex<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub fn complex_array(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn complex_rows(a: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..a.rows()).map(|i| complex_array(a.row(i))).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Residuals {
    /// `|‖Tξ‖ - ‖T‖| / ‖T‖`.
    pub norm_attain: f64,
    /// `|⟨Tξ, Sξ⟩| / (‖T‖‖S‖)` for BJ witnesses, `‖S*Tξ‖ / (‖T‖‖S‖)` for strong ones.
    pub orthogonality: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub vector: Vec<[f64; 2]>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub relation: String,
    pub status: Status,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<Vec<[f64; 2]>>>,
    /// Argument (scalar or element) at which an ε-relation was evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimizer: Option<serde_json::Value>,
    pub config: Config,
    pub timing_ms: f64,
}

pub fn witness_residuals(t: &ComplexMatrix, s: &ComplexMatrix, xi: &[C64], strong: bool) -> Residuals {
    let nt = op_norm(t);
    let ns = op_norm(s);
    let tx = t.matvec(xi);
    let norm_attain = if nt == 0.0 { 0.0 } else { (norm(&tx) - nt).abs() / nt };
    let scale = nt * ns;
    let orth = if strong {
        norm(&s.adjoint().matvec(&tx))
    } else {
        inner(&s.matvec(xi), &tx).norm()
    };
    Residuals {
        norm_attain,
        orthogonality: if scale == 0.0 { 0.0 } else { orth / scale },
    }
}

impl ReportJson {
    pub fn from_verdict(
        relation: &str,
        v: &Verdict,
        t: &ComplexMatrix,
        s: &ComplexMatrix,
        config: Config,
        timing_ms: f64,
    ) -> Self {
        let strong = relation == "strong";
        Self {
            relation: relation.to_string(),
            status: v.status,
            margin: v.margin,
            epsilon: None,
            witness: v.witness_vector.as_ref().map(|xi| WitnessJson {
                vector: complex_array(xi),
                residuals: witness_residuals(t, s, xi, strong),
            }),
            state: v.witness_state.as_ref().map(|p| complex_rows(p.matrix())),
            minimizer: None,
            config,
            timing_ms,
        }
    }

    pub fn from_eps(relation: &str, v: &EpsVerdict, config: Config, timing_ms: f64) -> Self {
        let minimizer = v.minimizer_arg.as_ref().map(|m| match m {
            Minimizer::Scalar(z) => serde_json::json!([z.re, z.im]),
            Minimizer::Element(a) => serde_json::json!(complex_rows(a)),
        });
        Self {
            relation: relation.to_string(),
            status: v.status,
            margin: v.slack,
            epsilon: Some(v.epsilon),
            witness: None,
            state: None,
            minimizer,
            config,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn human(&self) -> String {
        let mut out = format!("relation: {}\nstatus:   {}\nmargin:   {:e}\n", self.relation, self.status.as_str(), self.margin);
        if let Some(e) = self.epsilon {
            out += &format!("epsilon:  {e}\n");
        }
        if let Some(w) = &self.witness {
            let v: Vec<String> = w.vector.iter().map(|[re, im]| format!("{re:.6}{im:+.6}i")).collect();
            out += &format!(
                "witness:  [{}]\n  normAttain residual {:e}, orthogonality residual {:e}\n",
                v.join(", "),
                w.residuals.norm_attain,
                w.residuals.orthogonality
            );
        }
        out += &format!("time:     {:.3} ms\n", self.timing_ms);
        out
    }
}

/// Process exit code for a verdict.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::True => 0,
        Status::False => 1,
        Status::Uncertain => 2,
    }
}
