//! Constructors for the Sullivan models of ℂPⁿ, the projectivised tangent
//! bundle P(τ) → ℂPⁿ, and the homogeneous spaces U(m)/U(k₁)×⋯×U(k_r), plus
//! the morphisms relating them.
//!
//! Naming follows the flat convention used throughout: `y2`, `y5`, `x2`,
//! `x3`, `a2`, `b2`, `z4`, `v7`, ...

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Generator, GradedAlgebra};
use crate::cdga::{CdgaError, CdgaMorphism, FreeCdga};
use crate::linalg::Rational;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("rank n = {n} is below the minimum {min}")]
    RankTooSmall { n: u32, min: u32 },
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),
    #[error("Chern cocycle c{index} is not closed")]
    NotClosed { index: usize },
    #[error("Chern cocycle c{index} must be homogeneous of degree {expected}")]
    ChernDegree { index: usize, expected: u32 },
    #[error("generator `{0}` already exists in the base")]
    NameCollision(String),
    #[error("unknown built-in model `{0}` (expected cpn, ptangent, flag-min or flag-big)")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn require_rank(n: u32, min: u32) -> Result<(), ModelError> {
    if n < min {
        Err(ModelError::RankTooSmall { n, min })
    } else {
        Ok(())
    }
}

fn sign(n: u32) -> Rational {
    // (−1)^{n+1}
    if n % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// `(Λ(y₂, y_{2n+1}), d)` with `d y_{2n+1} = y₂^{n+1}`.
pub fn model_cpn(n: u32) -> Result<FreeCdga, ModelError> {
    require_rank(n, 1)?;
    let top = format!("y{}", 2 * n + 1);
    let algebra = GradedAlgebra::from_pairs([("y2", 2), (top.as_str(), 2 * n + 1)])?;
    let dy = algebra.pow(&algebra.var("y2")?, n + 1)?;
    Ok(FreeCdga::new(algebra, BTreeMap::from([(top, dy)]))?)
}

/// Closed cocycles `c₁, …, c_n` on a base model, `c_i` in degree `2i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    base: FreeCdga,
    cocycles: Vec<Element>,
}

impl ChernData {
    pub fn new(base: FreeCdga, cocycles: Vec<Element>) -> Result<Self, ModelError> {
        for (k, c) in cocycles.iter().enumerate() {
            let index = k + 1;
            if !c.has_degree(2 * index as u32) {
                return Err(ModelError::ChernDegree {
                    index,
                    expected: 2 * index as u32,
                });
            }
            if !base.apply_d(c)?.is_zero() {
                return Err(ModelError::NotClosed { index });
            }
        }
        Ok(ChernData { base, cocycles })
    }

    pub fn base(&self) -> &FreeCdga {
        &self.base
    }

    pub fn cocycles(&self) -> &[Element] {
        &self.cocycles
    }

    /// Fibre rank n.
    pub fn rank(&self) -> u32 {
        self.cocycles.len() as u32
    }
}

/// Chern cocycles of the tangent bundle of ℂPⁿ: `c_i = C(n+1, i)·y₂^i`.
pub fn chern_classes_tangent_cpn(n: u32) -> Result<ChernData, ModelError> {
    let base = model_cpn(n)?;
    let y = base.algebra().var("y2")?;
    let cocycles = (1..=n)
        .map(|i| Ok(base.algebra().pow(&y, i)?.scale(&binomial(n + 1, i))))
        .collect::<Result<Vec<_>, ModelError>>()?;
    ChernData::new(base, cocycles)
}

/// Relative model of the projectivisation: the base extended by `x₂`
/// (closed) and `x_{2n−1}` with `D x_{2n−1} = x₂ⁿ + Σ c_i x₂^{n−i}`.
pub fn projectivization_model(chern: &ChernData) -> Result<FreeCdga, ModelError> {
    let n = chern.rank();
    require_rank(n, 2)?;
    let base = chern.base();
    let odd = format!("x{}", 2 * n - 1);
    for name in ["x2", odd.as_str()] {
        if base.algebra().contains(name) {
            return Err(ModelError::NameCollision(name.to_string()));
        }
    }
    let mut gens: Vec<Generator> = base.algebra().generators().to_vec();
    gens.push(Generator::new("x2", 2)?);
    gens.push(Generator::new(odd.clone(), 2 * n - 1)?);
    let algebra = GradedAlgebra::new(gens)?;

    // Re-express base data in the enlarged algebra via the inclusion.
    let inclusion: Vec<Element> = base
        .algebra()
        .generators()
        .iter()
        .map(|g| algebra.var(g.name()))
        .collect::<Result<_, _>>()?;
    let lift = |e: &Element| base.algebra().evaluate(e, &inclusion, &algebra);

    let mut differential = BTreeMap::new();
    for (i, g) in base.algebra().generators().iter().enumerate() {
        differential.insert(g.name().to_string(), lift(base.d_of(i as u32))?);
    }
    let x = algebra.var("x2")?;
    let mut dx = algebra.pow(&x, n)?;
    for (k, c) in chern.cocycles().iter().enumerate() {
        let i = k as u32 + 1;
        dx = &dx + &algebra.mul(&lift(c)?, &algebra.pow(&x, n - i)?)?;
    }
    differential.insert(odd, dx);
    Ok(FreeCdga::new(algebra, differential)?)
}

/// The normalised model of P(τ): `(Λ(y₂, y_{2n+1}, x₂, x_{2n−1}), D)` with
/// `D y_{2n+1} = y₂^{n+1}` and `D x_{2n−1} = Σ_{i=0}^{n} x₂^{n−i} y₂^i`.
pub fn projectivized_tangent_model(n: u32) -> Result<FreeCdga, ModelError> {
    require_rank(n, 2)?;
    let (xo, yo) = (format!("x{}", 2 * n - 1), format!("y{}", 2 * n + 1));
    let algebra = GradedAlgebra::from_pairs([
        ("y2", 2),
        (yo.as_str(), 2 * n + 1),
        ("x2", 2),
        (xo.as_str(), 2 * n - 1),
    ])?;
    let dy = algebra.pow(&algebra.var("y2")?, n + 1)?;
    let dx = algebra.complete_homogeneous("x2", "y2", n)?;
    Ok(FreeCdga::new(
        algebra,
        BTreeMap::from([(yo, dy), (xo, dx)]),
    )?)
}

/// Certifies that `x₂ ↦ x₂ − y₂` carries the Chern-class form of
/// `D x_{2n−1}` to the normalised form, both as a polynomial identity and as
/// an isomorphism of models.
pub fn verify_chern_normalization(n: u32) -> Result<CheckReport, ModelError> {
    require_rank(n, 2)?;
    let name = "chern_normalization";
    let chern = chern_classes_tangent_cpn(n)?;
    let source = projectivization_model(&chern)?;
    let target = projectivized_tangent_model(n)?;
    let odd = format!("x{}", 2 * n - 1);

    let a = target.algebra();
    let shift = &a.var("x2")? - &a.var("y2")?;
    let chern_form = source.d_of_name(&odd)?;
    // Both models live on the same generator names, so the polynomial can be
    // read in the target algebra directly.
    let same_names: Vec<Element> = source
        .algebra()
        .generators()
        .iter()
        .map(|g| a.var(g.name()))
        .collect::<Result<_, _>>()?;
    let chern_in_target = source.algebra().evaluate(chern_form, &same_names, a)?;
    let shifted = a.substitute(
        &chern_in_target,
        &BTreeMap::from([("x2".to_string(), shift.clone())]),
    )?;
    if shifted != *target.d_of_name(&odd)? {
        return Ok(CheckReport::fail(
            name,
            vec![odd],
            "shifted Chern form differs from Σ x2^(n-i) y2^i",
        ));
    }

    let mut images = BTreeMap::new();
    for g in source.algebra().generators() {
        images.insert(g.name().to_string(), a.var(g.name())?);
    }
    images.insert("x2".to_string(), shift);
    let phi = CdgaMorphism::new(source, target, images)?;
    let commutes = phi.check();
    if !commutes.passed {
        return Ok(CheckReport::fail(
            name,
            commutes.witnesses,
            "change of variables does not commute with D",
        ));
    }
    if !phi.is_isomorphism()? {
        return Ok(CheckReport::fail(
            name,
            vec![],
            "change of variables is not an isomorphism",
        ));
    }
    Ok(CheckReport::pass(name).with_details(format!("n={n}")))
}

/// Block sizes `(k₁, …, k_r)` of a unitary block subgroup of U(m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    blocks: Vec<u32>,
}

impl BlockPartition {
    pub fn new(blocks: Vec<u32>) -> Result<Self, ModelError> {
        if blocks.is_empty() {
            return Err(ModelError::InvalidPartition("no blocks".into()));
        }
        if blocks.contains(&0) {
            return Err(ModelError::InvalidPartition(
                "blocks must be positive".into(),
            ));
        }
        Ok(BlockPartition { blocks })
    }

    /// The partition (1, 1, n−1) of n+1.
    pub fn flag(n: u32) -> Result<Self, ModelError> {
        require_rank(n, 2)?;
        BlockPartition::new(vec![1, 1, n - 1])
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn total(&self) -> u32 {
        self.blocks.iter().sum()
    }

    /// Generator prefix of block `j`: the last block is `z`, the others take
    /// `a`, `b`, `c`, ... in order.
    fn prefix(&self, j: usize) -> String {
        const LETTERS: &[u8] = b"abcdefghijklmnopqrstu";
        if j + 1 == self.blocks.len() {
            "z".to_string()
        } else if j < LETTERS.len() {
            (LETTERS[j] as char).to_string()
        } else {
            format!("w{j}_")
        }
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Model `(ΛW ⊗ Λ(sV), d)` of U(m)/U(k₁)×⋯×U(k_r): W is spanned by the Chern
/// generators of each block, and `d(v_{2k−1})` is the degree-2k part of the
/// Whitney product `Π_j (1 + c(block j))`.
pub fn homogeneous_space_model(partition: &BlockPartition) -> Result<FreeCdga, ModelError> {
    let m = partition.total();
    if m < 2 {
        return Err(ModelError::InvalidPartition(format!(
            "{partition} has total {m}, need at least 2"
        )));
    }
    let mut pairs: Vec<(String, u32)> = Vec::new();
    for (j, &k) in partition.blocks().iter().enumerate() {
        let prefix = partition.prefix(j);
        for i in 1..=k {
            pairs.push((format!("{prefix}{}", 2 * i), 2 * i));
        }
    }
    for k in 1..=m {
        pairs.push((format!("v{}", 2 * k - 1), 2 * k - 1));
    }
    let algebra = GradedAlgebra::from_pairs(pairs.iter().map(|(n, d)| (n.as_str(), *d)))?;

    let mut total = Element::one();
    for (j, &k) in partition.blocks().iter().enumerate() {
        let prefix = partition.prefix(j);
        let mut block = Element::one();
        for i in 1..=k {
            block = &block + &algebra.var(&format!("{prefix}{}", 2 * i))?;
        }
        total = algebra.mul(&total, &block)?;
    }
    let differential = (1..=m)
        .map(|k| {
            let part = total.filter_terms(|mono| mono.degree() == 2 * k);
            (format!("v{}", 2 * k - 1), part)
        })
        .collect();
    Ok(FreeCdga::new(algebra, differential)?)
}

/// The minimal model `(Λ(a₂, b₂, v_{2n−1}, v_{2n+1}), d)` of
/// U(n+1)/U(1)×U(1)×U(n−1):
/// `d v_{2n−1} = (−1)^{n+1} Σ_{i=0}^{n} a^{n−i} b^i`,
/// `d v_{2n+1} = (−1)^{n+1} Σ_{i=1}^{n} a^{n−i+1} b^i`.
pub fn minimal_flag_model(n: u32) -> Result<FreeCdga, ModelError> {
    require_rank(n, 2)?;
    let (lo, hi) = (format!("v{}", 2 * n - 1), format!("v{}", 2 * n + 1));
    let algebra = GradedAlgebra::from_pairs([
        ("a2", 2),
        ("b2", 2),
        (lo.as_str(), 2 * n - 1),
        (hi.as_str(), 2 * n + 1),
    ])?;
    let s = sign(n);
    let h = algebra.complete_homogeneous("a2", "b2", n)?;
    let a = algebra.var("a2")?;
    let b = algebra.var("b2")?;
    // Σ_{i=1}^{n} a^{n−i+1} b^i = a·b·Σ_{j=0}^{n−1} a^{n−1−j} b^j
    let ab = algebra.mul(&a, &b)?;
    let top = algebra.mul(&ab, &algebra.complete_homogeneous("a2", "b2", n - 1)?)?;
    Ok(FreeCdga::new(
        algebra,
        BTreeMap::from([(lo, h.scale(&s)), (hi, top.scale(&s))]),
    )?)
}

/// The morphism `minimal_flag_model(n) → projectivized_tangent_model(n)` with
/// the literal images `a₂ ↦ s·x₂`, `b₂ ↦ s·y₂`, `v_{2n−1} ↦ s·x_{2n−1}`,
/// `v_{2n+1} ↦ s·(y₂x_{2n−1} − y_{2n+1})`, where `s = (−1)^{n+1}`.
///
/// For even n this assignment does not commute with the differentials on
/// `v_{2n+1}`; see [`corrected_morphism_f`].
pub fn signed_morphism_f(n: u32) -> Result<CdgaMorphism, ModelError> {
    flag_to_ptangent(n, sign(n))
}

/// Same as [`signed_morphism_f`] except `v_{2n+1} ↦ y₂x_{2n−1} − y_{2n+1}`
/// for every n. Agrees with it for odd n and is a chain map for all n ≥ 2.
pub fn corrected_morphism_f(n: u32) -> Result<CdgaMorphism, ModelError> {
    flag_to_ptangent(n, Rational::one())
}

fn flag_to_ptangent(n: u32, top_factor: Rational) -> Result<CdgaMorphism, ModelError> {
    let source = minimal_flag_model(n)?;
    let target = projectivized_tangent_model(n)?;
    let t = target.algebra();
    let s = sign(n);
    let xo = t.var(&format!("x{}", 2 * n - 1))?;
    let yo = t.var(&format!("y{}", 2 * n + 1))?;
    let y = t.var("y2")?;
    let top = &t.mul(&y, &xo)? - &yo;
    let images = BTreeMap::from([
        ("a2".to_string(), t.var("x2")?.scale(&s)),
        ("b2".to_string(), y.scale(&s)),
        (format!("v{}", 2 * n - 1), xo.scale(&s)),
        (format!("v{}", 2 * n + 1), top.scale(&top_factor)),
    ]);
    Ok(CdgaMorphism::new(source, target, images)?)
}

/// Built-in models addressable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinModel {
    Cpn,
    PTangent,
    FlagMin,
    FlagBig,
}

impl BuiltinModel {
    pub const ALL: [BuiltinModel; 4] = [
        BuiltinModel::Cpn,
        BuiltinModel::PTangent,
        BuiltinModel::FlagMin,
        BuiltinModel::FlagBig,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinModel::Cpn => "cpn",
            BuiltinModel::PTangent => "ptangent",
            BuiltinModel::FlagMin => "flag-min",
            BuiltinModel::FlagBig => "flag-big",
        }
    }

    pub fn min_rank(self) -> u32 {
        match self {
            BuiltinModel::Cpn => 1,
            _ => 2,
        }
    }

    pub fn build(self, n: u32) -> Result<FreeCdga, ModelError> {
        match self {
            BuiltinModel::Cpn => model_cpn(n),
            BuiltinModel::PTangent => projectivized_tangent_model(n),
            BuiltinModel::FlagMin => minimal_flag_model(n),
            BuiltinModel::FlagBig => homogeneous_space_model(&BlockPartition::flag(n)?),
        }
    }
}

impl FromStr for BuiltinModel {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ModelError::UnknownBuiltin(s.to_string()))
    }
}

impl fmt::Display for BuiltinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn cpn_differential() {
        let c = model_cpn(2).unwrap();
        assert_eq!(
            c.d_of_name("y5").unwrap(),
            &c.algebra().lit(1, &[("y2", 3)])
        );
        assert_eq!(
            model_cpn(3).unwrap().betti(8).dims(),
            &[1, 0, 1, 0, 1, 0, 1, 0, 0]
        );
        assert!(matches!(model_cpn(0), Err(ModelError::RankTooSmall { .. })));
    }

    #[test]
    fn tangent_chern_classes() {
        let c2 = chern_classes_tangent_cpn(2).unwrap();
        let a = c2.base().algebra();
        assert_eq!(
            c2.cocycles(),
            &[a.lit(3, &[("y2", 1)]), a.lit(3, &[("y2", 2)])]
        );
        let c3 = chern_classes_tangent_cpn(3).unwrap();
        let a = c3.base().algebra();
        assert_eq!(
            c3.cocycles(),
            &[
                a.lit(4, &[("y2", 1)]),
                a.lit(6, &[("y2", 2)]),
                a.lit(4, &[("y2", 3)])
            ]
        );
    }

    #[test]
    fn chern_data_rejects_bad_cocycles() {
        let base = model_cpn(2).unwrap();
        let a = base.algebra().clone();
        assert!(matches!(
            ChernData::new(base.clone(), vec![a.var("y5").unwrap()]),
            Err(ModelError::ChernDegree { index: 1, .. })
        ));
        let base = crate::cdga::build_model(&[("w2", 2), ("u3", 3)], |a| {
            vec![("w2", a.var("u3").unwrap())]
        })
        .unwrap();
        let w = base.algebra().var("w2").unwrap();
        assert!(matches!(
            ChernData::new(base, vec![w]),
            Err(ModelError::NotClosed { index: 1 })
        ));
    }

    #[test]
    fn projectivization_of_tangent_bundle() {
        let c = projectivization_model(&chern_classes_tangent_cpn(2).unwrap()).unwrap();
        let a = c.algebra();
        let expected = &(&a.lit(1, &[("x2", 2)]) + &a.lit(3, &[("x2", 1), ("y2", 1)]))
            + &a.lit(3, &[("y2", 2)]);
        assert_eq!(c.d_of_name("x3").unwrap(), &expected);
        assert_eq!(c.betti(6).dims(), &[1, 0, 2, 0, 2, 0, 1]);
    }

    #[test]
    fn projectivization_of_trivial_bundle() {
        let base = model_cpn(3).unwrap();
        let zero = vec![Element::zero(); 3];
        let c = projectivization_model(&ChernData::new(base, zero).unwrap()).unwrap();
        assert_eq!(
            c.d_of_name("x5").unwrap(),
            &c.algebra().lit(1, &[("x2", 3)])
        );
        // ℂP² × ℂP³
        assert_eq!(c.betti(12).total(), 12);
    }

    #[test]
    fn ptangent_differentials() {
        let c = projectivized_tangent_model(3).unwrap();
        let a = c.algebra();
        let expected = &(&(&a.lit(1, &[("x2", 3)]) + &a.lit(1, &[("x2", 2), ("y2", 1)]))
            + &a.lit(1, &[("x2", 1), ("y2", 2)]))
            + &a.lit(1, &[("y2", 3)]);
        assert_eq!(c.d_of_name("x5").unwrap(), &expected);
        assert!(c.is_pure(&[]).unwrap());
        assert!(matches!(
            projectivized_tangent_model(1),
            Err(ModelError::RankTooSmall { n: 1, min: 2 })
        ));
    }

    #[test]
    fn chern_normalization_small_ranks() {
        for n in 2..=4 {
            assert!(verify_chern_normalization(n).unwrap().passed, "n={n}");
        }
    }

    #[test]
    fn whitney_expansion_for_three_singletons() {
        let c = homogeneous_space_model(&BlockPartition::new(vec![1, 1, 1]).unwrap()).unwrap();
        let a = c.algebra();
        let sum = &(&a.var("a2").unwrap() + &a.var("b2").unwrap()) + &a.var("z2").unwrap();
        assert_eq!(c.d_of_name("v1").unwrap(), &sum);
        let ab = a.lit(1, &[("a2", 1), ("b2", 1)]);
        let v3 = &ab
            + &a.mul(
                &(&a.var("a2").unwrap() + &a.var("b2").unwrap()),
                &a.var("z2").unwrap(),
            )
            .unwrap();
        assert_eq!(c.d_of_name("v3").unwrap(), &v3);
        assert_eq!(
            c.d_of_name("v5").unwrap(),
            &a.lit(1, &[("a2", 1), ("b2", 1), ("z2", 1)])
        );
    }

    #[test]
    fn whitney_top_term_for_n3() {
        let c = homogeneous_space_model(&BlockPartition::flag(3).unwrap()).unwrap();
        let a = c.algebra();
        assert_eq!(
            c.d_of_name("v7").unwrap(),
            &a.lit(1, &[("a2", 1), ("b2", 1), ("z4", 1)])
        );
    }

    #[test]
    fn single_block_is_a_point() {
        let c = homogeneous_space_model(&BlockPartition::new(vec![3]).unwrap()).unwrap();
        for k in 1..=3 {
            let z = c.algebra().var(&format!("z{}", 2 * k)).unwrap();
            assert_eq!(c.d_of_name(&format!("v{}", 2 * k - 1)).unwrap(), &z);
        }
        assert_eq!(c.betti(8).dims(), &[1, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn invalid_partitions() {
        assert!(BlockPartition::new(vec![]).is_err());
        assert!(BlockPartition::new(vec![2, 0]).is_err());
        assert!(homogeneous_space_model(&BlockPartition::new(vec![1]).unwrap()).is_err());
    }

    #[test]
    fn minimal_flag_differentials() {
        let c = minimal_flag_model(2).unwrap();
        let a = c.algebra();
        let dv3 = -(&(&a.lit(1, &[("a2", 2)]) + &a.lit(1, &[("a2", 1), ("b2", 1)]))
            + &a.lit(1, &[("b2", 2)]));
        let dv5 = -(&a.lit(1, &[("a2", 2), ("b2", 1)]) + &a.lit(1, &[("a2", 1), ("b2", 2)]));
        assert_eq!(c.d_of_name("v3").unwrap(), &dv3);
        assert_eq!(c.d_of_name("v5").unwrap(), &dv5);

        let c = minimal_flag_model(3).unwrap();
        let a = c.algebra();
        assert_eq!(
            c.d_of_name("v5").unwrap(),
            &a.complete_homogeneous("a2", "b2", 3).unwrap()
        );
        let dv7 = &(&a.lit(1, &[("a2", 3), ("b2", 1)]) + &a.lit(1, &[("a2", 2), ("b2", 2)]))
            + &a.lit(1, &[("a2", 1), ("b2", 3)]);
        assert_eq!(c.d_of_name("v7").unwrap(), &dv7);
    }

    #[test]
    fn signed_f_images() {
        let f = signed_morphism_f(3).unwrap();
        let t = f.target().algebra();
        assert_eq!(f.image_of("a2").unwrap(), &t.var("x2").unwrap());
        let expected = &t.lit(1, &[("y2", 1), ("x5", 1)]) - &t.var("y7").unwrap();
        assert_eq!(f.image_of("v7").unwrap(), &expected);

        let f = signed_morphism_f(2).unwrap();
        let t = f.target().algebra();
        let expected = -(&t.lit(1, &[("y2", 1), ("x3", 1)]) - &t.var("y5").unwrap());
        assert_eq!(f.image_of("v5").unwrap(), &expected);
    }

    #[test]
    fn signed_f_commutes_only_for_odd_rank() {
        for n in 2..=5 {
            let report = signed_morphism_f(n).unwrap().check();
            if n % 2 == 1 {
                assert!(report.passed, "n={n}");
            } else {
                // f(dv) = +Σ x^{n−i+1} y^i but d f(v) = −Σ x^{n−i+1} y^i.
                assert_eq!(report.witnesses, vec![format!("v{}", 2 * n + 1)], "n={n}");
            }
        }
    }

    #[test]
    fn corrected_f_is_an_isomorphism() {
        for n in 2..=5 {
            let f = corrected_morphism_f(n).unwrap();
            assert!(f.check().passed, "n={n}");
            assert!(f.is_isomorphism().unwrap(), "n={n}");
        }
    }

    #[test]
    fn flipped_y_sign_breaks_commutation() {
        for n in 2..=4 {
            let f = corrected_morphism_f(n).unwrap();
            let t = f.target().algebra().clone();
            let xo = t.var(&format!("x{}", 2 * n - 1)).unwrap();
            let yo = t.var(&format!("y{}", 2 * n + 1)).unwrap();
            let mut images = BTreeMap::new();
            for g in f.source().algebra().generators() {
                images.insert(g.name().to_string(), f.image_of(g.name()).unwrap().clone());
            }
            let flipped = &t.mul(&t.var("y2").unwrap(), &xo).unwrap() + &yo;
            images.insert(format!("v{}", 2 * n + 1), flipped);
            let g = CdgaMorphism::new(f.source().clone(), f.target().clone(), images).unwrap();
            assert_eq!(g.check().witnesses, vec![format!("v{}", 2 * n + 1)]);
        }
    }

    #[test]
    fn builtin_names_round_trip() {
        for m in BuiltinModel::ALL {
            assert_eq!(m.name().parse::<BuiltinModel>().unwrap(), m);
        }
        assert!("flag".parse::<BuiltinModel>().is_err());
        assert!(BuiltinModel::Cpn.build(1).is_ok());
        assert!(BuiltinModel::FlagBig.build(1).is_err());
    }
}
