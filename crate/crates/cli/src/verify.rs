//! The per-rank verification pipeline behind `sullivan verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use sullivan_core::models::{
    chern_classes_tangent_cpn, corrected_morphism_f, minimal_flag_model, projectivization_model,
    projectivized_tangent_model, signed_morphism_f, verify_chern_normalization,
};
use sullivan_core::reduction::minimize;
use sullivan_core::ring::{
    euler_characteristic, flag_presentation, poincare_product_oracle,
    presentation_map_from_morphism, ptangent_presentation, verify_presentation_map,
    verify_ring_presentation,
};
use sullivan_core::{
    BettiTable, BuiltinModel, CdgaMorphism, CheckReport, Element, FreeCdga, RingPresentation,
};

/// Checks and Betti tables for one rank. Timings are kept apart so the rest
/// of the report is reproducible byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: u32,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    pub betti_tables: BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl VerificationReport {
    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Turns any error raised while running a check into a failed check.
fn guarded(name: &str, run: impl FnOnce() -> Result<CheckReport, String>) -> CheckReport {
    match run() {
        Ok(report) => CheckReport {
            name: name.to_string(),
            ..report
        },
        Err(message) => CheckReport::fail(name, Vec::new(), message),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn identity_map(p: &RingPresentation, c: &FreeCdga) -> Result<BTreeMap<String, Element>, String> {
    p.algebra()
        .generators()
        .iter()
        .map(|g| {
            Ok((
                g.name().to_string(),
                c.algebra().var(g.name()).map_err(err)?,
            ))
        })
        .collect()
}

fn morphism_report(f: &CdgaMorphism, up_to: u32) -> Result<CheckReport, String> {
    let commutes = f.check();
    if !commutes.passed {
        return Ok(CheckReport::fail(
            "",
            commutes.witnesses,
            "f does not commute with the differentials",
        ));
    }
    if !f.is_isomorphism().map_err(err)? {
        return Ok(CheckReport::fail("", Vec::new(), "f is not an isomorphism"));
    }
    let induced = f.induced_cohomology_map(up_to).map_err(err)?;
    let bad: Vec<String> = induced
        .degrees
        .iter()
        .filter(|m| !m.is_invertible())
        .map(|m| format!("degree {}", m.degree))
        .collect();
    Ok(CheckReport::from_witnesses(
        "",
        bad,
        format!("isomorphism; cohomology isomorphic up to degree {up_to}"),
    ))
}

/// Runs every check for rank `n` with Betti numbers computed to `max_degree`.
pub fn verify_rank(n: u32, max_degree: u32, with_timings: bool) -> VerificationReport {
    let mut checks = Vec::new();
    let mut timings = BTreeMap::new();
    let mut tables = BTreeMap::new();
    let mut timed = |name: &str, run: &mut dyn FnMut() -> Result<CheckReport, String>| {
        let start = Instant::now();
        let report = guarded(name, run);
        timings.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        checks.push(report);
    };

    timed("d_squared", &mut || {
        let mut witnesses = Vec::new();
        for model in BuiltinModel::ALL {
            let report = model.build(n).map_err(err)?.check_d_squared(u32::MAX);
            witnesses.extend(report.witnesses.iter().map(|w| format!("{model}: {w}")));
        }
        Ok(CheckReport::from_witnesses(
            "",
            witnesses,
            "cpn, ptangent, flag-min, flag-big",
        ))
    });

    timed("ptangent_pure", &mut || {
        let pure = projectivized_tangent_model(n)
            .map_err(err)?
            .is_pure(&[])
            .map_err(err)?;
        Ok(if pure {
            CheckReport::pass("")
        } else {
            CheckReport::fail("", Vec::new(), "model is not pure")
        })
    });

    timed("chern_normalization", &mut || {
        verify_chern_normalization(n).map_err(err)
    });

    timed("flag_reduction", &mut || {
        let big = BuiltinModel::FlagBig.build(n).map_err(err)?;
        let cascade = minimize(&big, None).map_err(err)?;
        let degrees = cascade.reduced().generator_degrees();
        let expected = vec![2, 2, 2 * n - 1, 2 * n + 1];
        let mut witnesses = Vec::new();
        if degrees != expected {
            witnesses.push(format!("surviving degrees {degrees:?}"));
        }
        witnesses.extend(cascade.certify(max_degree).witnesses);
        Ok(CheckReport::from_witnesses(
            "",
            witnesses,
            format!(
                "{} eliminations, surviving degrees {degrees:?}",
                cascade.steps.len()
            ),
        ))
    });

    timed("main_morphism", &mut || {
        morphism_report(&signed_morphism_f(n).map_err(err)?, max_degree)
    });

    timed("corrected_morphism", &mut || {
        morphism_report(&corrected_morphism_f(n).map_err(err)?, max_degree)
    });

    timed("ring_presentations", &mut || {
        let pt_model = projectivized_tangent_model(n).map_err(err)?;
        let flag_model = minimal_flag_model(n).map_err(err)?;
        let pt = ptangent_presentation(n).map_err(err)?;
        let flag = flag_presentation(n).map_err(err)?;
        let mut witnesses = Vec::new();
        let mut label = |prefix: &str, report: CheckReport| {
            witnesses.extend(
                report
                    .witnesses
                    .into_iter()
                    .map(|w| format!("{prefix}: {w}")),
            );
        };
        label(
            "ptangent",
            verify_ring_presentation(&pt_model, &pt, &identity_map(&pt, &pt_model)?, max_degree)
                .map_err(err)?,
        );
        label(
            "flag",
            verify_ring_presentation(
                &flag_model,
                &flag,
                &identity_map(&flag, &flag_model)?,
                max_degree,
            )
            .map_err(err)?,
        );
        // Only the degree-2 images matter here, and both versions of f agree on them.
        let f = signed_morphism_f(n).map_err(err)?;
        let map = presentation_map_from_morphism(&f, &flag, &pt).map_err(err)?;
        label(
            "ring map",
            verify_presentation_map(&flag, &pt, &map, max_degree).map_err(err)?,
        );
        Ok(CheckReport::from_witnesses("", witnesses, ""))
    });

    let mut flag_betti: Option<BettiTable> = None;
    timed("betti_agreement", &mut || {
        let oracle = poincare_product_oracle(n).map_err(err)?;
        let mut padded = oracle.dims().to_vec();
        padded.resize(max_degree as usize + 1, 0);
        let oracle = BettiTable::new(padded);
        let chern =
            projectivization_model(&chern_classes_tangent_cpn(n).map_err(err)?).map_err(err)?;
        let models = [
            ("projectivization", chern),
            ("ptangent", projectivized_tangent_model(n).map_err(err)?),
            ("flag-min", minimal_flag_model(n).map_err(err)?),
            ("flag-big", BuiltinModel::FlagBig.build(n).map_err(err)?),
        ];
        let computed: Vec<(&str, BettiTable)> = {
            use rayon::prelude::*;
            models
                .par_iter()
                .map(|(name, c)| (*name, c.betti(max_degree)))
                .collect()
        };
        let mut witnesses = Vec::new();
        for (name, table) in computed {
            if table != oracle {
                witnesses.push(name.to_string());
            }
            if name == "flag-min" {
                flag_betti = Some(table.clone());
            }
            tables.insert(name.to_string(), table.dims().to_vec());
        }
        tables.insert("oracle".to_string(), oracle.dims().to_vec());
        Ok(CheckReport::from_witnesses(
            "",
            witnesses,
            format!("oracle {oracle}"),
        ))
    });

    timed("euler_characteristic", &mut || {
        let expected = i64::from(n) * i64::from(n + 1);
        let quotient = flag_presentation(n)
            .map_err(err)?
            .quotient_dimensions(max_degree);
        let mut witnesses = Vec::new();
        let from_quotient = euler_characteristic(&quotient).map_err(err)?;
        if from_quotient != expected {
            witnesses.push(format!("quotient gives {from_quotient}"));
        }
        let table = match flag_betti.take() {
            Some(t) => t,
            None => minimal_flag_model(n).map_err(err)?.betti(max_degree),
        };
        let from_model = euler_characteristic(&table).map_err(err)?;
        if from_model != expected {
            witnesses.push(format!("model gives {from_model}"));
        }
        Ok(CheckReport::from_witnesses(
            "",
            witnesses,
            format!("expected {expected}"),
        ))
    });

    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        n,
        passed,
        checks,
        betti_tables: tables,
        timings_ms: with_timings.then_some(timings),
    }
}
