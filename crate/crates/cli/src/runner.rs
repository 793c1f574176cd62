use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bott_core::equivariant::verify_appendix_theorem;
use bott_core::frobenius::{check_gr_iso, hypersurface_conormal_check, parse_samples, AffineModel};
use bott_core::kring::RingDescriptor;
use bott_core::poly::GroebnerBudget;
use bott_core::pushforward::{verify_arr, verify_arr_relative};
use bott_core::split::SplitClass;
use bott_core::tau::{tau_basis, tau_sum_isomorphism_check};
use bott_core::{Error, Status, VerificationReport, Q};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{CaseSpec, SuiteConfig, CONFIG_VERSION};
use crate::properties::run_property;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub summary: Summary,
    pub cases: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn from_cases(cases: Vec<VerificationReport>) -> Self {
        let mut summary = Summary {
            total: cases.len(),
            ..Summary::default()
        };
        for c in &cases {
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Error => summary.errors += 1,
            }
        }
        Self {
            version: CONFIG_VERSION,
            summary,
            cases,
        }
    }

    /// The report with every timing field removed, as stored in golden files.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.cases {
            c.timing_ms = None;
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// 0 when every case passed, 1 when any case failed, 3 when the only
/// problems are errors (violated preconditions, exhausted budgets).
pub fn exit_code(report: &SuiteReport) -> i32 {
    if report.summary.failed > 0 {
        1
    } else if report.summary.errors > 0 {
        3
    } else {
        0
    }
}

pub fn case_id(spec: &CaseSpec) -> String {
    if let Some(id) = spec.explicit_id() {
        return id.to_string();
    }
    match spec {
        CaseSpec::Arr {
            n, prime, bundle, ..
        } => format!("arr-n{n}-p{prime}[{bundle}]"),
        CaseSpec::ArrRelative {
            m,
            n,
            prime,
            bundle,
            ..
        } => {
            format!("arr-relative-m{m}-n{n}-p{prime}[{bundle}]")
        }
        CaseSpec::Tau {
            rank, prime, split, ..
        } => match split {
            Some(s) => format!("tau-r{rank}-p{prime}-split{s}"),
            None => format!("tau-r{rank}-p{prime}"),
        },
        CaseSpec::Frobenius {
            vars,
            prime,
            hypersurface,
            ..
        } => match hypersurface {
            Some(f) => format!("frobenius-p{prime}[{f}]"),
            None => format!("frobenius-r{}-p{prime}", vars.unwrap_or(0)),
        },
        CaseSpec::Equivariant {
            l, omega, ambient, ..
        } => format!("equivariant-l{l}-{ambient}[{omega}]"),
        CaseSpec::Properties { property, seed, .. } => format!("properties-{property}-seed{seed}"),
    }
}

pub fn ambient_ring(name: &str) -> bott_core::Result<RingDescriptor> {
    match name {
        "pt" | "point" => Ok(RingDescriptor::point()),
        "p1" => Ok(RingDescriptor::projective(1)),
        "p2" => Ok(RingDescriptor::projective(2)),
        "p3" => Ok(RingDescriptor::projective(3)),
        other => Err(Error::InvalidArgument(format!(
            "unknown ambient '{other}' (pt, p1, p2, p3)"
        ))),
    }
}

/// Coefficients of `(1 + q + ... + q^{p-1})^r`.
fn q_series(r: u32, p: u32) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..r {
        let mut next = vec![0u64; acc.len() + p as usize - 1];
        for (i, a) in acc.iter().enumerate() {
            for slot in &mut next[i..i + p as usize] {
                *slot += a;
            }
        }
        acc = next;
    }
    acc
}

fn tau_report(
    id: &str,
    rank: u32,
    p: u32,
    split: Option<u32>,
) -> bott_core::Result<VerificationReport> {
    let basis = tau_basis(rank, p)?;
    let lhs = json!({"count": basis.len(), "graded_dims": basis.graded_dims()});
    let rhs = json!({"count": (p as u64).pow(rank), "graded_dims": q_series(rank, p)});
    let mut report = VerificationReport::compare(id, lhs, rhs);
    if let Some(s) = split {
        if s > rank {
            return Err(Error::InvalidArgument(format!(
                "split {s} exceeds rank {rank}"
            )));
        }
        let sum = tau_sum_isomorphism_check(s, rank - s, p)?;
        report = report.require(
            sum.passed(),
            sum.message
                .unwrap_or_else(|| "direct-sum check failed".into()),
        );
    }
    Ok(report)
}

fn evaluate(spec: &CaseSpec, id: &str) -> bott_core::Result<VerificationReport> {
    let report = match spec {
        CaseSpec::Arr {
            n, prime, bundle, ..
        } => {
            let e = SplitClass::parse(bundle, &RingDescriptor::projective(*n))?;
            verify_arr::<Q>(*n, *prime, &e)?.to_verification()
        }
        CaseSpec::ArrRelative {
            m,
            n,
            prime,
            bundle,
            ..
        } => {
            let e = SplitClass::parse(bundle, &RingDescriptor::product(*m, *n))?;
            verify_arr_relative::<Q>(*m, *n, *prime, &e)?.to_verification()
        }
        CaseSpec::Tau {
            rank, prime, split, ..
        } => tau_report(id, *rank, *prime, *split)?,
        CaseSpec::Frobenius {
            vars,
            prime,
            hypersurface,
            samples,
            ..
        } => match hypersurface {
            Some(f) => {
                let model = AffineModel::hypersurface(f, *prime)?;
                if let Some(r) = vars {
                    if *r != model.dimension() {
                        return Err(Error::InvalidArgument(format!(
                            "--vars {r} but '{f}' defines a model of dimension {}",
                            model.dimension()
                        )));
                    }
                }
                let points = parse_samples(samples.as_deref().unwrap_or(""))?;
                if points.is_empty() {
                    return Err(Error::InvalidArgument(
                        "hypersurface check needs samples".into(),
                    ));
                }
                hypersurface_conormal_check(&model, &points, GroebnerBudget::from_env())?
            }
            None => {
                let r =
                    vars.ok_or_else(|| Error::InvalidArgument("frobenius case needs vars".into()))?;
                check_gr_iso(r, *prime)?
            }
        },
        CaseSpec::Equivariant {
            l, omega, ambient, ..
        } => {
            let omega = SplitClass::parse(omega, &ambient_ring(ambient)?)?;
            verify_appendix_theorem::<Q>(&omega, *l)?
        }
        CaseSpec::Properties {
            property,
            seed,
            count,
            n,
            prime,
            ..
        } => run_property(
            id,
            property,
            *seed,
            *count,
            n.unwrap_or(2),
            prime.unwrap_or(2),
        )?,
    };
    Ok(report)
}

/// Runs one case. Library errors and panics become `ERROR` reports; the case
/// id is always the one derived from the case parameters.
pub fn run_case(spec: &CaseSpec, timing: bool) -> VerificationReport {
    let id = case_id(spec);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| evaluate(spec, &id)));
    let mut report = match outcome {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => VerificationReport::error(&id, e.to_string()),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            VerificationReport::error(&id, format!("internal error: {msg}"))
        }
    };
    report.case_id = id;
    if timing {
        report.timing_ms = Some((start.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3);
    }
    report
}

/// Runs every case on a pool of `jobs` workers; the report keeps config order.
pub fn run_suite(config: &SuiteConfig, jobs: usize, timing: bool) -> Result<SuiteReport, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let cases = pool.install(|| {
        config
            .cases
            .par_iter()
            .map(|c| run_case(c, timing))
            .collect()
    });
    Ok(SuiteReport::from_cases(cases))
}
