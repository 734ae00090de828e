//! Contractible-pair elimination.
//!
//! If `du = c·t + r` with `c ≠ 0` and `r` free of `u` and `t`, the ideal
//! generated by `u` and `du` is acyclic, and the quotient is again free on the
//! remaining generators with `t` replaced by `−r/c`. Iterating this strips a
//! Sullivan algebra down to a minimal one without changing its cohomology.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Generator, GradedAlgebra};
use crate::cdga::{CdgaError, CdgaMorphism, FreeCdga};
use crate::linalg::{solve_in_span, Rational};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("({u}, {t}) is not a contractible pair: {reason}")]
    IneligiblePair {
        u: String,
        t: String,
        reason: String,
    },
    #[error("stopped after {steps} steps with contractible pair ({u}, {t}) remaining")]
    MaxStepsExhausted { steps: usize, u: String, t: String },
    #[error("no degreewise isomorphism: {0}")]
    NoMatching(String),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A generator `u` whose differential has the linear term `coefficient · t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractiblePair {
    pub u: Generator,
    pub t: Generator,
    pub coefficient: Rational,
}

/// One cancellation: `killed_odd` and `killed_even` are removed and
/// `killed_even` is replaced everywhere by `substitution`, an element of the
/// reduced algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub killed_odd: Generator,
    pub killed_even: Generator,
    pub coefficient: Rational,
    pub substitution: Element,
}

/// Result of a single elimination.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub model: FreeCdga,
    pub step: EliminationStep,
    /// The quotient map from the original model onto `model`.
    pub projection: CdgaMorphism,
}

/// Splits `du` as `c·t + r`, requiring `c ≠ 0` and `r` free of `u` and `t`.
fn split_linear(du: &Element, u: u32, t: u32) -> Result<(Rational, Element), String> {
    let c = du.linear_coefficient(t);
    if c.is_zero() {
        return Err("no linear term in the differential".into());
    }
    let remainder = du.filter_terms(|m| m.as_generator() != Some(t));
    if remainder.involves(t) {
        return Err("the generator also occurs in the remainder".into());
    }
    if remainder.involves(u) {
        return Err("the remainder involves the killed generator itself".into());
    }
    Ok((c, remainder))
}

/// Picks the next pair to cancel: the odd `u` of smallest `(degree, name)`
/// admitting an eligible `t`, and among those `t` the one of largest
/// generator index. With blocks named `a`, `b`, ..., `z` this always spends
/// the `z`-generators and keeps `a₂`, `b₂`.
pub fn find_contractible_pair(c: &FreeCdga) -> Option<ContractiblePair> {
    let alg = c.algebra();
    (0..alg.len() as u32)
        .filter(|&u| alg.is_odd(u))
        .find_map(|u| {
            let du = c.d_of(u);
            let t = du
                .terms()
                .filter_map(|(m, _)| m.as_generator())
                .filter(|&t| t != u && split_linear(du, u, t).is_ok())
                .max()?;
            Some(ContractiblePair {
                u: alg.generator(u).clone(),
                t: alg.generator(t).clone(),
                coefficient: du.linear_coefficient(t),
            })
        })
}

/// Cancels the pair `(u, t)`.
pub fn eliminate(c: &FreeCdga, u: &str, t: &str) -> Result<Elimination, ReductionError> {
    let alg = c.algebra();
    let (ui, ti) = (alg.index_of(u)?, alg.index_of(t)?);
    let ineligible = |reason: String| ReductionError::IneligiblePair {
        u: u.to_string(),
        t: t.to_string(),
        reason,
    };
    if ui == ti {
        return Err(ineligible("u and t coincide".into()));
    }
    let (coefficient, remainder) = split_linear(c.d_of(ui), ui, ti).map_err(ineligible)?;

    let survivors: Vec<Generator> = alg
        .generators()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i as u32 != ui && *i as u32 != ti)
        .map(|(_, g)| g.clone())
        .collect();
    let reduced = GradedAlgebra::new(survivors)?;

    let mut images: Vec<Element> = alg
        .generators()
        .iter()
        .map(|g| match reduced.var(g.name()) {
            Ok(e) => e,
            Err(_) => Element::zero(),
        })
        .collect();
    let substitution = alg
        .evaluate(&remainder, &images, &reduced)?
        .scale(&-coefficient.recip());
    images[ti as usize] = substitution.clone();

    let mut differential = BTreeMap::new();
    for (i, g) in alg.generators().iter().enumerate() {
        if i as u32 == ui || i as u32 == ti {
            continue;
        }
        differential.insert(
            g.name().to_string(),
            alg.evaluate(c.d_of(i as u32), &images, &reduced)?,
        );
    }
    let model = FreeCdga::new(reduced, differential)?;

    let named: BTreeMap<String, Element> = alg
        .generators()
        .iter()
        .zip(images)
        .map(|(g, e)| (g.name().to_string(), e))
        .collect();
    let projection = CdgaMorphism::new(c.clone(), model.clone(), named)?;
    let report = projection.check();
    if !report.passed {
        return Err(CdgaError::NotChainMap(report.witnesses).into());
    }
    Ok(Elimination {
        model,
        step: EliminationStep {
            killed_odd: alg.generator(ui).clone(),
            killed_even: alg.generator(ti).clone(),
            coefficient,
            substitution,
        },
        projection,
    })
}

/// A completed sequence of eliminations.
#[derive(Debug, Clone)]
pub struct Cascade {
    /// The starting model followed by the model after each step.
    pub models: Vec<FreeCdga>,
    pub steps: Vec<EliminationStep>,
    /// Composite quotient map from the first model to the last.
    pub projection: CdgaMorphism,
}

impl Cascade {
    pub fn original(&self) -> &FreeCdga {
        &self.models[0]
    }

    pub fn reduced(&self) -> &FreeCdga {
        self.models
            .last()
            .expect("cascade starts with the input model")
    }

    /// Certifies that the reduction preserved Betti numbers up to `up_to`.
    pub fn certify(&self, up_to: u32) -> CheckReport {
        certify_reduction(self.original(), self.reduced(), up_to)
    }
}

/// Repeats [`find_contractible_pair`] and [`eliminate`] until no pair is
/// left. `max_steps` defaults to the number of odd generators.
pub fn minimize(c: &FreeCdga, max_steps: Option<usize>) -> Result<Cascade, ReductionError> {
    let limit = max_steps.unwrap_or_else(|| {
        c.algebra()
            .generators()
            .iter()
            .filter(|g| g.is_odd())
            .count()
    });
    let mut models = vec![c.clone()];
    let mut steps = Vec::new();
    let mut projection = CdgaMorphism::identity(c);
    loop {
        let current = models.last().expect("nonempty");
        let Some(pair) = find_contractible_pair(current) else {
            break;
        };
        if steps.len() == limit {
            return Err(ReductionError::MaxStepsExhausted {
                steps: limit,
                u: pair.u.name().to_string(),
                t: pair.t.name().to_string(),
            });
        }
        let next = eliminate(current, pair.u.name(), pair.t.name())?;
        projection = projection.then(&next.projection)?;
        steps.push(next.step);
        models.push(next.model);
    }
    let report = projection.check();
    if !report.passed {
        return Err(CdgaError::NotChainMap(report.witnesses).into());
    }
    Ok(Cascade {
        models,
        steps,
        projection,
    })
}

/// Passes iff both models have the same Betti numbers up to `up_to`.
pub fn certify_reduction(original: &FreeCdga, reduced: &FreeCdga, up_to: u32) -> CheckReport {
    let (before, after) = rayon::join(|| original.betti(up_to), || reduced.betti(up_to));
    let witnesses: Vec<String> = (0..=up_to)
        .filter(|&d| before.get(d) != after.get(d))
        .map(|d| format!("degree {d}"))
        .collect();
    CheckReport::from_witnesses(
        "certify_reduction",
        witnesses,
        format!("{before} vs {after}"),
    )
}

/// Builds an isomorphism `source → target` sending each generator to a
/// nonzero multiple of the target generator in the same position among those
/// of its degree. The multiple is solved so that the map commutes with `d`.
pub fn match_by_degree(
    source: &FreeCdga,
    target: &FreeCdga,
) -> Result<CdgaMorphism, ReductionError> {
    let (sa, ta) = (source.algebra(), target.algebra());
    let mut by_degree: BTreeMap<u32, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    for (i, g) in sa.generators().iter().enumerate() {
        by_degree.entry(g.degree()).or_default().0.push(i as u32);
    }
    for (i, g) in ta.generators().iter().enumerate() {
        by_degree.entry(g.degree()).or_default().1.push(i as u32);
    }
    let mut pairing = vec![0u32; sa.len()];
    for (d, (src, tgt)) in &by_degree {
        if src.len() != tgt.len() {
            return Err(ReductionError::NoMatching(format!(
                "{} source vs {} target generators in degree {d}",
                src.len(),
                tgt.len()
            )));
        }
        for (&s, &t) in src.iter().zip(tgt) {
            pairing[s as usize] = t;
        }
    }

    // Canonical order is by degree, so every generator occurring in d(g) has
    // already been assigned when g is reached.
    let mut images = vec![Element::zero(); sa.len()];
    for s in 0..sa.len() as u32 {
        let t = pairing[s as usize];
        let pushed = sa.evaluate(source.d_of(s), &images, ta)?;
        let dt = target.d_of(t);
        let name = sa.generator(s).name();
        let lambda = if dt.is_zero() {
            if !pushed.is_zero() {
                return Err(ReductionError::NoMatching(format!(
                    "d({name}) does not map to zero"
                )));
            }
            Rational::from_integer(1.into())
        } else {
            let monomials: Vec<_> = dt
                .terms()
                .chain(pushed.terms())
                .map(|(m, _)| m.clone())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let coords = |e: &Element| {
                monomials
                    .iter()
                    .map(|m| e.coefficient(m))
                    .collect::<Vec<_>>()
            };
            let solution = solve_in_span(&[coords(dt)], &coords(&pushed))
                .expect("equal lengths")
                .ok_or_else(|| {
                    ReductionError::NoMatching(format!(
                        "image of d({name}) is not a multiple of d({})",
                        ta.generator(t).name()
                    ))
                })?;
            solution[0].clone()
        };
        if lambda.is_zero() {
            return Err(ReductionError::NoMatching(format!(
                "{name} would map to zero"
            )));
        }
        images[s as usize] = Element::term(ta.generator_monomial(t), lambda);
    }
    let named = sa
        .generators()
        .iter()
        .zip(images)
        .map(|(g, e)| (g.name().to_string(), e))
        .collect();
    Ok(CdgaMorphism::new(source.clone(), target.clone(), named)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::build_model;
    use crate::linalg::int;
    use crate::models::{homogeneous_space_model, minimal_flag_model, model_cpn, BlockPartition};

    fn flag_big(n: u32) -> FreeCdga {
        homogeneous_space_model(&BlockPartition::flag(n).unwrap()).unwrap()
    }

    #[test]
    fn first_pair_spends_z2() {
        let pair = find_contractible_pair(&flag_big(2)).unwrap();
        assert_eq!(pair.u.name(), "v1");
        assert_eq!(pair.t.name(), "z2");
        assert_eq!(pair.coefficient, int(1));
    }

    #[test]
    fn minimal_models_have_no_pairs() {
        for n in 2..=4 {
            assert!(find_contractible_pair(&minimal_flag_model(n).unwrap()).is_none());
            assert!(find_contractible_pair(&model_cpn(n).unwrap()).is_none());
        }
    }

    #[test]
    fn first_step_for_n2() {
        let step = eliminate(&flag_big(2), "v1", "z2").unwrap();
        let a = step.model.algebra();
        let sum = &a.var("a2").unwrap() + &a.var("b2").unwrap();
        let dv3 = &a.lit(1, &[("a2", 1), ("b2", 1)]) - &a.mul(&sum, &sum).unwrap();
        assert_eq!(step.model.d_of_name("v3").unwrap(), &dv3);
        let dv5 = -a.mul(&a.lit(1, &[("a2", 1), ("b2", 1)]), &sum).unwrap();
        assert_eq!(step.model.d_of_name("v5").unwrap(), &dv5);
        assert_eq!(step.step.substitution, -sum);
        assert!(step.projection.check().passed);
        // Step 1 already lands on the minimal model verbatim.
        assert_eq!(step.model, minimal_flag_model(2).unwrap());
        assert!(find_contractible_pair(&step.model).is_none());
    }

    #[test]
    fn rejects_ineligible_pairs() {
        let ok = build_model(&[("u1", 1), ("t2", 2), ("w2", 2)], |a| {
            vec![("u1", &a.var("t2").unwrap() + &a.var("w2").unwrap())]
        })
        .unwrap();
        assert!(eliminate(&ok, "u1", "w2").is_ok());
        assert!(matches!(
            eliminate(&ok, "u1", "u1"),
            Err(ReductionError::IneligiblePair { .. })
        ));
        // t2 only occurs non-linearly.
        let quadratic = build_model(&[("u3", 3), ("t2", 2), ("w2", 2)], |a| {
            vec![(
                "u3",
                &a.lit(1, &[("t2", 2)]) + &a.lit(1, &[("t2", 1), ("w2", 1)]),
            )]
        })
        .unwrap();
        assert!(matches!(
            eliminate(&quadratic, "u3", "t2"),
            Err(ReductionError::IneligiblePair { .. })
        ));
        assert!(find_contractible_pair(&quadratic).is_none());
    }

    #[test]
    fn cascade_degrees_and_step_counts() {
        for n in 2..=5 {
            let c = minimize(&flag_big(n), None).unwrap();
            let mut degrees = c.reduced().generator_degrees();
            degrees.sort_unstable();
            assert_eq!(degrees, vec![2, 2, 2 * n - 1, 2 * n + 1], "n={n}");
            assert_eq!(c.steps.len(), (n - 1) as usize);
            assert!(c
                .steps
                .iter()
                .all(|s| s.killed_even.name().starts_with('z')));
            assert!(c.reduced().is_minimal());
            assert!(c.projection.check().passed);
        }
    }

    #[test]
    fn cascade_output_equals_minimal_model() {
        for n in 2..=5 {
            let c = minimize(&flag_big(n), None).unwrap();
            let target = minimal_flag_model(n).unwrap();
            let f = match_by_degree(c.reduced(), &target).unwrap();
            assert!(f.check().passed);
            assert!(f.is_isomorphism().unwrap());
            assert_eq!(c.reduced(), &target, "n={n}");
        }
    }

    #[test]
    fn each_step_preserves_betti() {
        for n in 2..=4 {
            let c = minimize(&flag_big(n), None).unwrap();
            for w in c.models.windows(2) {
                assert!(certify_reduction(&w[0], &w[1], 4 * n - 2).passed);
            }
        }
    }

    #[test]
    fn minimal_input_takes_zero_steps() {
        let m = minimal_flag_model(4).unwrap();
        let c = minimize(&m, None).unwrap();
        assert!(c.steps.is_empty());
        assert_eq!(c.projection, CdgaMorphism::identity(&m));
    }

    #[test]
    fn point_reduces_to_nothing() {
        let c = homogeneous_space_model(&BlockPartition::new(vec![4]).unwrap()).unwrap();
        let cascade = minimize(&c, None).unwrap();
        assert!(cascade.reduced().algebra().is_empty());
        assert_eq!(cascade.reduced().betti(6).dims(), &[1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn step_limit_is_enforced() {
        let err = minimize(&flag_big(4), Some(1)).unwrap_err();
        assert!(matches!(
            err,
            ReductionError::MaxStepsExhausted { steps: 1, .. }
        ));
    }

    #[test]
    fn certify_examples() {
        assert!(certify_reduction(&flag_big(3), &minimal_flag_model(3).unwrap(), 10).passed);
        let bad = certify_reduction(&model_cpn(2).unwrap(), &minimal_flag_model(2).unwrap(), 6);
        assert!(!bad.passed);
        assert!(bad.witnesses.contains(&"degree 2".to_string()));
        let m = model_cpn(3).unwrap();
        assert!(certify_reduction(&m, &m, 9).passed);
    }
}
