//! Seeded property suite over generated instances.
//!
//! Trials are independent and fan out through [`crate::par::map_indexed`]; records
//! are merged in trial order, so the JSON output depends only on the inputs.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::approx::{eps_bj, eps_ortho, eps_strong_bj, inner_transfer_check, necessary_state_check, sufficient_state_check, EpsVerdict};
use crate::bj::{bj_ortho, exact_ortho, gamma_min, gamma_min_from, strong_bj_ortho, unitary_bj_iff_noninvertible, DensityMatrix, Status, Verdict};
use crate::error::{Error, Result};
use crate::gns::{gns_construct, selfadjoint_noninvertible_rep, verify_strong_bj_rep};
use crate::linalg::{min_modulus, norm, op_norm, ComplexMatrix, C64};
use crate::oracle::{self, compare, default_bj_radius, generate, Agreement, Ensemble, Instance, InstanceGenSpec};
use crate::par::{map_indexed, Execution};
use crate::rng::{derive_seed, gaussian_matrix, haar_unitary, seeded, SeededRng};
use crate::tol::ToleranceConfig;

const ORACLE_GRID: usize = 64;
const ORACLE_SAMPLES: usize = 1000;
const MAX_FAILURE_RECORDS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Property {
    ImplicationChain,
    EpsImplicationChain,
    EpsMonotonicity,
    EpsZeroDegeneration,
    Homogeneity,
    UnitaryInvariance,
    PositivityCollapse,
    SelfOrthogonal,
    SpectralIdentity,
    WitnessSoundness,
    OracleAgreementBj,
    OracleAgreementStrong,
    StateContracts,
    InnerTransfer,
    UnitaryCharacterization,
    GnsState,
    GnsStrongRep,
    GnsSelfAdjointRep,
    PythagoreanSlack,
    GammaUniqueness,
}

impl Property {
    pub fn name(self) -> String {
        serde_json::to_value(self).unwrap().as_str().unwrap().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Uncertain,
    Vacuous,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub uncertain: usize,
    pub vacuous: usize,
}

impl Counts {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Uncertain => self.uncertain += 1,
            Outcome::Vacuous => self.vacuous += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.uncertain + self.vacuous
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub property: Property,
    pub trial: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyCounts {
    pub property: Property,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps_grid: Vec<f64>,
    pub totals: Counts,
    pub properties: Vec<PropertyCounts>,
    pub failures: Vec<FailureRecord>,
    pub timing_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.totals.fail == 0
    }

    pub fn counts(&self, p: Property) -> Counts {
        self.properties
            .iter()
            .find(|c| c.property == p)
            .map(|c| c.counts)
            .unwrap_or_default()
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "suite dim={} trials={} seed={} eps-grid={:?}\n{:<26}{:>7}{:>7}{:>11}{:>9}\n",
            self.dim, self.trials, self.seed, self.eps_grid, "property", "pass", "fail", "uncertain", "vacuous"
        );
        for p in &self.properties {
            let c = p.counts;
            out += &format!(
                "{:<26}{:>7}{:>7}{:>11}{:>9}\n",
                p.property.name(),
                c.pass,
                c.fail,
                c.uncertain,
                c.vacuous
            );
        }
        let t = self.totals;
        out += &format!("{:<26}{:>7}{:>7}{:>11}{:>9}\n", "total", t.pass, t.fail, t.uncertain, t.vacuous);
        for f in &self.failures {
            out += &format!("FAIL {} trial {}: {}\n", f.property.name(), f.trial, f.detail);
        }
        out += &format!("time: {:.1} ms\n", self.timing_ms);
        out
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps_grid: Vec<f64>,
    pub tol: ToleranceConfig,
    pub exec: Execution,
}

impl SuiteConfig {
    pub fn new(dim: usize, trials: usize, seed: u64) -> Self {
        Self {
            dim,
            trials,
            seed,
            eps_grid: vec![0.0, 0.1, 0.3],
            tol: ToleranceConfig::default(),
            exec: Execution::default(),
        }
    }
}

struct Record {
    property: Property,
    outcome: Outcome,
    detail: Option<String>,
}

#[derive(Default)]
struct Recorder {
    records: Vec<Record>,
}

impl Recorder {
    fn push(&mut self, property: Property, outcome: Outcome, detail: impl FnOnce() -> String) {
        let detail = (outcome == Outcome::Fail).then(detail);
        self.records.push(Record {
            property,
            outcome,
            detail,
        });
    }

    fn check(&mut self, property: Property, ok: bool, detail: impl FnOnce() -> String) {
        self.push(property, if ok { Outcome::Pass } else { Outcome::Fail }, detail);
    }

    fn error(&mut self, property: Property, e: Error) {
        self.push(property, Outcome::Fail, || format!("error: {e}"));
    }
}

/// `premise ⇒ conclusion`, vacuous unless the premise is decided true.
fn implies(premise: Status, conclusion: Status) -> Outcome {
    match (premise, conclusion) {
        (Status::True, Status::True) => Outcome::Pass,
        (Status::True, Status::False) => Outcome::Fail,
        (Status::True, Status::Uncertain) => Outcome::Uncertain,
        _ => Outcome::Vacuous,
    }
}

fn same(a: Status, b: Status) -> Outcome {
    if !a.is_decided() || !b.is_decided() {
        Outcome::Uncertain
    } else if a == b {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn random_scalar(rng: &mut SeededRng) -> C64 {
    let r = 10f64.powf(rng.random_range(-1.0..1.0));
    C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

struct Trial<'a> {
    cfg: &'a SuiteConfig,
    index: usize,
    ensemble: Ensemble,
    inst: Instance,
    rng: SeededRng,
    rec: Recorder,
}

impl Trial<'_> {
    fn tol(&self) -> &ToleranceConfig {
        &self.cfg.tol
    }

    fn run(mut self) -> Vec<Record> {
        let tol = *self.tol();
        let (x, y) = (self.inst.x.clone(), self.inst.y.clone());
        let verdicts = (exact_ortho(&x, &y, &tol), bj_ortho(&x, &y, &tol), strong_bj_ortho(&x, &y, &tol));
        let (ex, bj, st) = match verdicts {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (a, b, c) => {
                let e = a.err().or(b.err()).or(c.err()).unwrap();
                self.rec.error(Property::ImplicationChain, e);
                return self.rec.records;
            }
        };
        self.implication_chain(&ex, &bj, &st);
        self.eps_properties(&x, &y, &ex, &bj, &st);
        self.invariances(&x, &y, &bj, &st);
        if self.ensemble == Ensemble::PsdProduct {
            let o = same(st.status, bj.status);
            self.rec.push(Property::PositivityCollapse, o, || {
                format!("strong {} vs bj {}", st.status.as_str(), bj.status.as_str())
            });
        }
        self.witness_soundness(&x, &y, &st);
        self.self_orthogonal(&x);
        self.oracle_agreement(&x, &y, &bj, &st);
        self.unitary_characterization(&y);
        self.gns(&x, &y, &st);
        self.gamma(&x, &y);
        self.rec.records
    }

    fn implication_chain(&mut self, ex: &Verdict, bj: &Verdict, st: &Verdict) {
        let o = implies(ex.status, st.status);
        self.rec.push(Property::ImplicationChain, o, || "exact but not strong".into());
        let o = implies(st.status, bj.status);
        self.rec.push(Property::ImplicationChain, o, || "strong but not bj".into());
    }

    fn eps_properties(&mut self, x: &ComplexMatrix, y: &ComplexMatrix, ex: &Verdict, bj: &Verdict, st: &Verdict) {
        let tol = *self.tol();
        let mut grid = self.cfg.eps_grid.clone();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut rows: Vec<(f64, [Status; 3])> = Vec::with_capacity(grid.len());
        for &eps in &grid {
            let r: Result<[EpsVerdict; 3]> = (|| Ok([eps_ortho(x, y, eps, &tol)?, eps_bj(x, y, eps, &tol)?, eps_strong_bj(x, y, eps, &tol)?]))();
            let [eo, eb, es] = match r {
                Ok(v) => v,
                Err(e) => {
                    self.rec.error(Property::EpsImplicationChain, e);
                    continue;
                }
            };
            let o = implies(eo.status, es.status);
            self.rec.push(Property::EpsImplicationChain, o, || format!("eps {eps}: approx-orthogonal but not eps-strong"));
            let o = implies(es.status, eb.status);
            self.rec.push(Property::EpsImplicationChain, o, || format!("eps {eps}: eps-strong but not eps-bj"));
            if eps == 0.0 {
                for (name, a, b) in [("eps", eo.status, ex.status), ("eps-bj", eb.status, bj.status), ("eps-strong", es.status, st.status)] {
                    self.rec.push(Property::EpsZeroDegeneration, same(a, b), || {
                        format!("{name} at 0 is {} but base relation is {}", a.as_str(), b.as_str())
                    });
                }
            } else if eps < 0.5 {
                self.state_contracts(x, y, eps, es.status);
            }
            if eps > 0.0 && self.index.is_multiple_of(4) {
                match inner_transfer_check(x, y, eps, &tol) {
                    Ok(r) => {
                        let o = match (r.hypothesis, r.holds) {
                            (Status::True, true) if r.conclusion == Status::True => Outcome::Pass,
                            (Status::True, true) => Outcome::Uncertain,
                            (Status::True, false) => Outcome::Fail,
                            _ => Outcome::Vacuous,
                        };
                        self.rec.push(Property::InnerTransfer, o, || format!("eps {eps}: inner-product hypothesis holds, conclusion false"));
                    }
                    Err(e) => self.rec.error(Property::InnerTransfer, e),
                }
            }
            rows.push((eps, [eo.status, eb.status, es.status]));
        }
        for w in rows.windows(2) {
            let (e0, s0) = w[0];
            let (e1, s1) = w[1];
            for k in 0..3 {
                let o = implies(s0[k], s1[k]);
                self.rec.push(Property::EpsMonotonicity, o, || format!("relation {k} true at {e0} but not at {e1}"));
            }
        }
    }

    fn state_contracts(&mut self, x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, es: Status) {
        let tol = *self.tol();
        match sufficient_state_check(x, y, eps, &tol) {
            Ok(Some(_)) => self.rec.check(Property::StateContracts, es != Status::False, || {
                format!("eps {eps}: sufficient state found but eps-strong false")
            }),
            Ok(None) => self.rec.push(Property::StateContracts, Outcome::Vacuous, String::new),
            Err(e) => self.rec.error(Property::StateContracts, e),
        }
        if es == Status::True {
            match necessary_state_check(x, y, eps, &tol) {
                Ok(r) => self.rec.check(Property::StateContracts, r.holds, || {
                    format!("eps {eps}: necessary bounds phi {} trace {}", r.phi_value, r.trace_norm)
                }),
                Err(e) => self.rec.error(Property::StateContracts, e),
            }
        }
    }

    fn invariances(&mut self, x: &ComplexMatrix, y: &ComplexMatrix, bj: &Verdict, st: &Verdict) {
        let tol = *self.tol();
        let (a, b) = (random_scalar(&mut self.rng), random_scalar(&mut self.rng));
        let (xs, ys) = (x.scale(a), y.scale(b));
        let u = haar_unitary(&mut self.rng, x.rows());
        let v = haar_unitary(&mut self.rng, x.cols());
        let (xu, yu) = (&(&u * x) * &v, &(&u * y) * &v);
        for (prop, xx, yy) in [(Property::Homogeneity, &xs, &ys), (Property::UnitaryInvariance, &xu, &yu)] {
            match (bj_ortho(xx, yy, &tol), strong_bj_ortho(xx, yy, &tol)) {
                (Ok(b2), Ok(s2)) => {
                    self.rec.push(prop, same(bj.status, b2.status), || {
                        format!("bj {} became {}", bj.status.as_str(), b2.status.as_str())
                    });
                    self.rec.push(prop, same(st.status, s2.status), || {
                        format!("strong {} became {}", st.status.as_str(), s2.status.as_str())
                    });
                }
                (Err(e), _) | (_, Err(e)) => self.rec.error(prop, e),
            }
        }
    }

    fn witness_soundness(&mut self, t: &ComplexMatrix, s: &ComplexMatrix, st: &Verdict) {
        if st.status != Status::True || t.is_zero() || s.is_zero() {
            self.rec.push(Property::WitnessSoundness, Outcome::Vacuous, String::new);
            return;
        }
        let Some(xi) = st.witness_vector.as_ref() else {
            self.rec.push(Property::WitnessSoundness, Outcome::Fail, || "missing witness".into());
            return;
        };
        let nt = op_norm(t);
        let ns = op_norm(s);
        let tx = t.matvec(xi);
        let attain = (norm(&tx) - nt).abs();
        let orth = norm(&s.adjoint().matvec(&tx));
        let mut worst = f64::INFINITY;
        for _ in 0..10 {
            let a = crate::rng::matrix_in_ball(&mut self.rng, s.cols(), t.cols(), 4.0 * nt / ns);
            worst = worst.min(op_norm(&(t + &(s * &a))));
        }
        let ok = attain <= 1e-7 * nt && orth <= 1e-7 * nt * ns && worst >= nt * (1.0 - 1e-6);
        self.rec.check(Property::WitnessSoundness, ok, || {
            format!("attain {attain:e}, orth {orth:e}, sampled min {worst} vs {nt}")
        });
    }

    fn self_orthogonal(&mut self, x: &ComplexMatrix) {
        let tol = *self.tol();
        let nx = op_norm(x);
        if nx == 0.0 {
            return;
        }
        let xx = &x.adjoint() * x;
        let y = x.scale_real(nx * nx).add_scaled(C64::new(-1.0, 0.0), &(x * &xx));
        // partial isometries give y = 0 up to rounding, which carries no direction
        if op_norm(&y) <= 1e-10 * nx.powi(3) {
            self.rec.push(Property::SelfOrthogonal, Outcome::Vacuous, String::new);
            return;
        }
        match strong_bj_ortho(x, &y, &tol) {
            Ok(v) => {
                let o = match v.status {
                    Status::True => Outcome::Pass,
                    Status::False => Outcome::Fail,
                    Status::Uncertain => Outcome::Uncertain,
                };
                self.rec.push(Property::SelfOrthogonal, o, || format!("verdict {} margin {:e}", v.status.as_str(), v.margin));
                if let Some(xi) = v.witness_vector.filter(|_| v.status == Status::True) {
                    let a = xx.matvec(&xi);
                    let b = xx.matvec(&a);
                    let r: Vec<C64> = a.iter().zip(&b).map(|(p, q)| p * (nx * nx) - q).collect();
                    let res = norm(&r);
                    let bound = 1e-6 * nx.powi(4);
                    self.rec.check(Property::SpectralIdentity, res <= bound, || format!("residual {res:e} > {bound:e}"));
                }
            }
            Err(e) => self.rec.error(Property::SelfOrthogonal, e),
        }
    }

    fn oracle_agreement(&mut self, x: &ComplexMatrix, y: &ComplexMatrix, bj: &Verdict, st: &Verdict) {
        let agreement = |a: Agreement| match a {
            Agreement::Agree => Outcome::Pass,
            Agreement::Disagree => Outcome::Fail,
            Agreement::Borderline => Outcome::Uncertain,
        };
        match oracle::oracle_bj(x, y, default_bj_radius(x, y), ORACLE_GRID) {
            Ok(o) => self.rec.push(Property::OracleAgreementBj, agreement(compare(bj, o.delta)), || {
                format!("bj {} but oracle delta {:e}", bj.status.as_str(), o.delta)
            }),
            Err(e) => self.rec.error(Property::OracleAgreementBj, e),
        }
        let seed = derive_seed(&[self.cfg.seed, self.index as u64, 0x0c]);
        match oracle::oracle_strong_bj(x, y, ORACLE_SAMPLES, seed) {
            Ok(o) => self.rec.push(Property::OracleAgreementStrong, agreement(compare(st, o.delta)), || {
                format!("strong {} but oracle delta {:e}", st.status.as_str(), o.delta)
            }),
            Err(e) => self.rec.error(Property::OracleAgreementStrong, e),
        }
    }

    fn unitary_characterization(&mut self, y: &ComplexMatrix) {
        let ny = op_norm(y);
        if ny == 0.0 {
            return;
        }
        let tol = *self.tol();
        let seed = derive_seed(&[self.cfg.seed, self.index as u64, 0x0d]);
        match unitary_bj_iff_noninvertible(&y.scale_real(1.0 / ny), 3, seed, &tol) {
            Ok(r) => self.rec.check(Property::UnitaryCharacterization, r.consistent, || {
                format!("min modulus {:e}: {} true / {} false", r.min_modulus, r.true_count, r.false_count)
            }),
            Err(e) => self.rec.error(Property::UnitaryCharacterization, e),
        }
    }

    fn gns(&mut self, x: &ComplexMatrix, y: &ComplexMatrix, st: &Verdict) {
        let tol = *self.tol();
        let n = x.cols();
        let rank = self.rng.random_range(1..=n);
        let w = gaussian_matrix(&mut self.rng, n, rank);
        let ww = &w * &w.adjoint();
        let p = ww.scale_real(1.0 / ww.trace().re).hermitian_part();
        match DensityMatrix::new(p, &tol).and_then(|p| Ok((gns_construct(&p, &tol)?, p))) {
            Ok((rep, p)) => {
                let mut worst: f64 = 0.0;
                for _ in 0..5 {
                    let c = gaussian_matrix(&mut self.rng, n, n);
                    worst = worst.max((p.apply(&c) - rep.state(&c)).norm() / op_norm(&c));
                }
                self.rec.check(Property::GnsState, worst <= 1e-10, || format!("state error {worst:e}"));
            }
            Err(e) => self.rec.error(Property::GnsState, e),
        }
        let seed = derive_seed(&[self.cfg.seed, self.index as u64, 0x0e]);
        if st.status == Status::True && x.is_square() {
            match verify_strong_bj_rep(x, y, 10, seed, &tol) {
                Ok(r) => self.rec.check(Property::GnsStrongRep, r.holds, || format!("worst slack {:e}", r.worst_slack)),
                Err(e) => self.rec.error(Property::GnsStrongRep, e),
            }
        } else {
            self.rec.push(Property::GnsStrongRep, Outcome::Vacuous, String::new);
        }
        let u = haar_unitary(&mut self.rng, n);
        let mut d: Vec<f64> = (0..n).map(|_| self.rng.random_range(-2.0..2.0)).collect();
        d[0] = 0.0;
        let a = (&(&u * &ComplexMatrix::diag_real(&d)) * &u.adjoint()).hermitian_part();
        match selfadjoint_noninvertible_rep(&a, 10, seed, &tol) {
            Ok(r) => self.rec.check(Property::GnsSelfAdjointRep, r.holds, || format!("worst slack {:e}", r.worst_slack)),
            Err(e) => self.rec.error(Property::GnsSelfAdjointRep, e),
        }
    }

    fn gamma(&mut self, t: &ComplexMatrix, s: &ComplexMatrix) {
        if s.is_zero() {
            return;
        }
        let tol = *self.tol();
        let g = match gamma_min(t, s, &tol) {
            Ok(g) => g,
            Err(e) => return self.rec.error(Property::PythagoreanSlack, e),
        };
        // floor for T lying in the span of S, where the slack is pure rounding
        let floor = g.min_value.max(1e-6 * op_norm(t));
        let bound = -1e-9 * floor * floor;
        self.rec.check(Property::PythagoreanSlack, g.pythagorean_slack >= bound, || {
            format!("slack {:e} below {bound:e}", g.pythagorean_slack)
        });
        // uniqueness is only numerically observable when m(S) is not tiny
        if min_modulus(s) < 0.1 * op_norm(s) {
            self.rec.push(Property::GammaUniqueness, Outcome::Vacuous, String::new);
            return;
        }
        let scale = 1.0 + g.gamma.norm();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let start = g.gamma + random_scalar(&mut self.rng) * 0.5 * scale;
            match gamma_min_from(t, s, start, &tol) {
                Ok(g2) => worst = worst.max((g2 - g.gamma).norm()),
                Err(e) => return self.rec.error(Property::GammaUniqueness, e),
            }
        }
        self.rec.check(Property::GammaUniqueness, worst <= 1e-6 * g.gamma.norm().max(1.0), || {
            format!("restart spread {worst:e} at gamma {}", g.gamma)
        });
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.tol.validate()?;
    if cfg.dim == 0 || cfg.dim > oracle::MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {} (supported: 1..={})", cfg.dim, oracle::MAX_DIM)));
    }
    for &e in &cfg.eps_grid {
        crate::approx::check_eps(e)?;
    }
    let start = Instant::now();
    let generators: Vec<_> = Ensemble::ALL
        .iter()
        .map(|&ensemble| {
            generate(InstanceGenSpec {
                dim: cfg.dim,
                seed: cfg.seed,
                ensemble,
            })
        })
        .collect::<Result<_>>()?;
    let per_trial = map_indexed(cfg.trials, cfg.exec, |k| {
        let which = k % Ensemble::ALL.len();
        Trial {
            cfg,
            index: k,
            ensemble: Ensemble::ALL[which],
            inst: generators[which].instance(k / Ensemble::ALL.len()),
            rng: seeded(derive_seed(&[cfg.seed, k as u64, 0x5117e])),
            rec: Recorder::default(),
        }
        .run()
    });

    let mut counts: std::collections::BTreeMap<Property, Counts> = Default::default();
    let mut totals = Counts::default();
    let mut failures = Vec::new();
    for (trial, records) in per_trial.into_iter().enumerate() {
        for r in records {
            counts.entry(r.property).or_default().add(r.outcome);
            totals.add(r.outcome);
            if let Some(detail) = r.detail {
                if failures.len() < MAX_FAILURE_RECORDS {
                    failures.push(FailureRecord {
                        property: r.property,
                        trial,
                        detail,
                    });
                }
            }
        }
    }
    Ok(SuiteReport {
        dim: cfg.dim,
        trials: cfg.trials,
        seed: cfg.seed,
        eps_grid: cfg.eps_grid.clone(),
        totals,
        properties: counts
            .into_iter()
            .map(|(property, counts)| PropertyCounts { property, counts })
            .collect(),
        failures,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
