//! Quotients `Λ(even generators)/I` by homogeneous ideals, and the
//! dimension-count oracles used to cross-check cohomology.
//!
//! Degree slices of the ideal are spanned by `m·g` for relations `g` and
//! monomials `m`, so every dimension is a rank computation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, GradedAlgebra, Homogeneity, Monomial};
use crate::cdga::{BettiTable, CdgaError, CdgaMorphism, FreeCdga};
use crate::linalg::{int, rank, Echelon, SparseMatrix, SparseVec};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("generator `{0}` has odd degree")]
    OddGenerator(String),
    #[error("relation {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("image of `{0}` is not closed")]
    NotClosed(String),
    #[error("image of `{generator}` must have degree {expected}")]
    ImageDegree { generator: String, expected: u32 },
    #[error("presentation generator `{0}` has no image")]
    MissingImage(String),
    #[error("dimension {dim} in degree {degree} at the end of the table; vanishing above the bound is not established")]
    NonVanishingTail { degree: u32, dim: usize },
    #[error("rank n = {0} is below the minimum 2")]
    RankTooSmall(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

/// `Λ(generators)/(relations)` with all generators of even degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    algebra: GradedAlgebra,
    relations: Vec<Element>,
}

impl RingPresentation {
    pub fn new(algebra: GradedAlgebra, relations: Vec<Element>) -> Result<Self, RingError> {
        if let Some(g) = algebra.generators().iter().find(|g| g.is_odd()) {
            return Err(RingError::OddGenerator(g.name().to_string()));
        }
        for (i, r) in relations.iter().enumerate() {
            algebra.check_element(r)?;
            if r.homogeneity() == Homogeneity::Mixed {
                return Err(RingError::NotHomogeneous(i));
            }
        }
        Ok(RingPresentation { algebra, relations })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    /// Echelon basis of the ideal's degree-`d` slice, in coordinates of
    /// `basis_of_degree(d)`.
    fn ideal_slice(&self, d: u32, basis: &[Monomial]) -> Echelon {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Echelon::new();
        for r in &self.relations {
            let Homogeneity::Degree(k) = r.homogeneity() else {
                continue;
            };
            if k > d {
                continue;
            }
            for m in self.algebra.basis_of_degree(d - k) {
                let product = self.algebra.mul_unchecked(&Element::term(m, int(1)), r);
                span.insert(coordinates(&product, &index));
            }
        }
        span
    }

    /// Dimensions of the quotient in degrees `0..=up_to`.
    pub fn quotient_dimensions(&self, up_to: u32) -> BettiTable {
        use rayon::prelude::*;
        let dims = (0..=up_to)
            .into_par_iter()
            .map(|d| {
                let basis = self.algebra.basis_of_degree(d);
                basis.len() - self.ideal_slice(d, &basis).rank()
            })
            .collect();
        BettiTable::new(dims)
    }

    /// Ideal membership, degree by degree.
    pub fn ideal_contains(&self, e: &Element) -> Result<bool, RingError> {
        self.algebra.check_element(e)?;
        let mut degrees: Vec<u32> = e.terms().map(|(m, _)| m.degree()).collect();
        degrees.dedup();
        for d in degrees {
            let part = e.filter_terms(|m| m.degree() == d);
            let basis = self.algebra.basis_of_degree(d);
            let index = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            if !self
                .ideal_slice(d, &basis)
                .contains(&coordinates(&part, &index))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn coordinates(e: &Element, index: &BTreeMap<&Monomial, usize>) -> SparseVec {
    let mut v: SparseVec = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

fn two_variable_algebra(x: &str, y: &str) -> GradedAlgebra {
    GradedAlgebra::from_pairs([(x, 2), (y, 2)]).expect("valid generator names")
}

/// `Λ(x₂, y₂)/(Σ_{i=0}^{n} x₂^{n−i} y₂^i, y₂^{n+1})`, the cohomology of the
/// projectivised tangent bundle.
pub fn ptangent_presentation(n: u32) -> Result<RingPresentation, RingError> {
    if n < 2 {
        return Err(RingError::RankTooSmall(n));
    }
    let a = two_variable_algebra("x2", "y2");
    let h = a.complete_homogeneous("x2", "y2", n)?;
    let top = a.pow(&a.var("y2")?, n + 1)?;
    RingPresentation::new(a, vec![h, top])
}

/// The same ring before the change of variables:
/// `Λ(x₂, y₂)/(x₂ⁿ + Σ C(n+1,i) y₂^i x₂^{n−i}, y₂^{n+1})`.
pub fn chern_form_presentation(n: u32) -> Result<RingPresentation, RingError> {
    if n < 2 {
        return Err(RingError::RankTooSmall(n));
    }
    let a = two_variable_algebra("x2", "y2");
    let (x, y) = (a.var("x2")?, a.var("y2")?);
    let mut form = Element::zero();
    for i in 0..=n {
        let c = crate::linalg::Rational::from_integer(num_integer::binomial(
            num_bigint::BigInt::from(n + 1),
            num_bigint::BigInt::from(i),
        ));
        form = &form + &a.mul(&a.pow(&y, i)?, &a.pow(&x, n - i)?)?.scale(&c);
    }
    let top = a.pow(&y, n + 1)?;
    RingPresentation::new(a, vec![form, top])
}

/// `Λ(a₂, b₂)/I` with `I` generated by `(−1)^{n+1} Σ_{i=0}^{n} a^{n−i} b^i`
/// and `(−1)^{n+1} Σ_{i=1}^{n} a^{n−i+1} b^i`: the cohomology of
/// U(n+1)/U(1)×U(1)×U(n−1).
pub fn flag_presentation(n: u32) -> Result<RingPresentation, RingError> {
    if n < 2 {
        return Err(RingError::RankTooSmall(n));
    }
    let a = two_variable_algebra("a2", "b2");
    let s = if n % 2 == 1 { int(1) } else { int(-1) };
    let h = a.complete_homogeneous("a2", "b2", n)?.scale(&s);
    let ab = a.mul(&a.var("a2")?, &a.var("b2")?)?;
    let top = a
        .mul(&ab, &a.complete_homogeneous("a2", "b2", n - 1)?)?
        .scale(&s);
    RingPresentation::new(a, vec![h, top])
}

/// `Λ(y₂)/(y₂^{n+1})`, the cohomology of ℂPⁿ.
pub fn cpn_presentation(n: u32) -> Result<RingPresentation, RingError> {
    let a = GradedAlgebra::from_pairs([("y2", 2)])?;
    let top = a.pow(&a.var("y2")?, n + 1)?;
    RingPresentation::new(a, vec![top])
}

/// Coefficients of `(Σ_{j<n} t^{2j})(Σ_{k≤n} t^{2k})`, the Poincaré
/// polynomial of a ℂP^{n−1}-bundle over ℂPⁿ, in degrees `0..=4n−2`.
pub fn poincare_product_oracle(n: u32) -> Result<BettiTable, RingError> {
    if n < 2 {
        return Err(RingError::RankTooSmall(n));
    }
    let top = 4 * n - 2;
    let mut dims = vec![0usize; top as usize + 1];
    for j in 0..n {
        for k in 0..=n {
            dims[(2 * j + 2 * k) as usize] += 1;
        }
    }
    Ok(BettiTable::new(dims))
}

/// Alternating sum of the dimensions. The last two computed degrees must
/// vanish, otherwise cohomology above the bound cannot be ruled out.
pub fn euler_characteristic(table: &BettiTable) -> Result<i64, RingError> {
    let bound = table.bound();
    for d in bound.saturating_sub(1)..=bound {
        let dim = table.get(d).unwrap_or(0);
        if dim != 0 {
            return Err(RingError::NonVanishingTail { degree: d, dim });
        }
    }
    Ok(table
        .dims()
        .iter()
        .enumerate()
        .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum())
}

/// Checks that `p` presents the cohomology of `c` through `gen_map`: every
/// relation maps to a coboundary, and quotient dimensions equal Betti numbers
/// up to `up_to`.
pub fn verify_ring_presentation(
    c: &FreeCdga,
    p: &RingPresentation,
    gen_map: &BTreeMap<String, Element>,
    up_to: u32,
) -> Result<CheckReport, RingError> {
    let ca = c.algebra();
    let mut images = Vec::with_capacity(p.algebra.len());
    for g in p.algebra.generators() {
        let image = gen_map
            .get(g.name())
            .ok_or_else(|| RingError::MissingImage(g.name().to_string()))?;
        ca.check_element(image)?;
        if !image.has_degree(g.degree()) {
            return Err(RingError::ImageDegree {
                generator: g.name().to_string(),
                expected: g.degree(),
            });
        }
        if !c.apply_d(image)?.is_zero() {
            return Err(RingError::NotClosed(g.name().to_string()));
        }
        images.push(image.clone());
    }

    let mut witnesses = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let pushed = p.algebra.evaluate(r, &images, ca)?;
        if !is_coboundary(c, &pushed) {
            witnesses.push(format!("relation {}", i + 1));
        }
    }
    let (quotient, betti) = rayon::join(|| p.quotient_dimensions(up_to), || c.betti(up_to));
    for d in 0..=up_to {
        if quotient.get(d) != betti.get(d) {
            witnesses.push(format!("degree {d}"));
        }
    }
    Ok(CheckReport::from_witnesses(
        "ring_presentation",
        witnesses,
        format!("quotient {quotient} vs betti {betti}"),
    ))
}

/// Whether a (possibly mixed-degree) element lies in `d(ΛV)`.
pub fn is_coboundary(c: &FreeCdga, e: &Element) -> bool {
    let mut degrees: Vec<u32> = e.terms().map(|(m, _)| m.degree()).collect();
    degrees.dedup();
    degrees.into_iter().all(|d| {
        if d == 0 {
            return false;
        }
        let part = e.filter_terms(|m| m.degree() == d);
        let m: SparseMatrix = c.differential_matrix(d - 1);
        let basis = c.algebra().basis_of_degree(d);
        let index = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Echelon::new();
        for row in m.sparse_rows() {
            span.insert(row);
        }
        span.contains(&coordinates(&part, &index))
    })
}

/// Checks that `map` (images of `source` generators in `target`'s algebra)
/// induces a ring isomorphism between the two quotients: relations land in
/// the target ideal, the map is bijective on generators, and the quotients
/// have equal dimensions up to `up_to`.
pub fn verify_presentation_map(
    source: &RingPresentation,
    target: &RingPresentation,
    map: &BTreeMap<String, Element>,
    up_to: u32,
) -> Result<CheckReport, RingError> {
    let mut images = Vec::new();
    for g in source.algebra.generators() {
        let image = map
            .get(g.name())
            .ok_or_else(|| RingError::MissingImage(g.name().to_string()))?;
        target.algebra.check_element(image)?;
        if !image.has_degree(g.degree()) {
            return Err(RingError::ImageDegree {
                generator: g.name().to_string(),
                expected: g.degree(),
            });
        }
        images.push(image.clone());
    }
    let mut witnesses = Vec::new();
    for (i, r) in source.relations.iter().enumerate() {
        let pushed = source.algebra.evaluate(r, &images, &target.algebra)?;
        if !target.ideal_contains(&pushed)? {
            witnesses.push(format!("relation {}", i + 1));
        }
    }
    // Linear part on generators, degree by degree.
    let mut degrees: Vec<u32> = source
        .algebra
        .generators()
        .iter()
        .map(|g| g.degree())
        .collect();
    degrees.dedup();
    for d in degrees {
        let src: Vec<usize> = (0..source.algebra.len())
            .filter(|&i| source.algebra.generator(i as u32).degree() == d)
            .collect();
        let tgt: Vec<u32> = (0..target.algebra.len() as u32)
            .filter(|&i| target.algebra.generator(i).degree() == d)
            .collect();
        let mut m = SparseMatrix::zeros(src.len(), tgt.len());
        for (r, &s) in src.iter().enumerate() {
            for (col, &t) in tgt.iter().enumerate() {
                m.set(r, col, images[s].linear_coefficient(t))
                    .expect("in bounds");
            }
        }
        if src.len() != tgt.len() || rank(&m) != src.len() {
            witnesses.push(format!("generators of degree {d}"));
        }
    }
    let (a, b) = (
        source.quotient_dimensions(up_to),
        target.quotient_dimensions(up_to),
    );
    for d in 0..=up_to {
        if a.get(d) != b.get(d) {
            witnesses.push(format!("degree {d}"));
        }
    }
    Ok(CheckReport::from_witnesses(
        "presentation_map",
        witnesses,
        format!("{a} vs {b}"),
    ))
}

/// Variable map between presentations read off a morphism of models: each
/// generator of `source` goes to the image of the same-named model generator.
/// The images must only involve generators that `target` also has.
pub fn presentation_map_from_morphism(
    f: &CdgaMorphism,
    source: &RingPresentation,
    target: &RingPresentation,
) -> Result<BTreeMap<String, Element>, RingError> {
    let names: BTreeMap<String, Element> = target
        .algebra
        .generators()
        .iter()
        .map(|g| Ok((g.name().to_string(), target.algebra.var(g.name())?)))
        .collect::<Result<_, AlgebraError>>()?;
    let mut map = BTreeMap::new();
    for g in source.algebra.generators() {
        let image = f.image_of(g.name())?;
        let renamed = rename_into(f.target().algebra(), image, &target.algebra, &names)?;
        map.insert(g.name().to_string(), renamed);
    }
    Ok(map)
}

fn rename_into(
    from: &GradedAlgebra,
    e: &Element,
    to: &GradedAlgebra,
    names: &BTreeMap<String, Element>,
) -> Result<Element, RingError> {
    for idx in e.support() {
        let name = from.generator(idx).name();
        if !names.contains_key(name) {
            return Err(AlgebraError::UnknownGenerator(name.to_string()).into());
        }
    }
    // Generators absent from `to` do not occur in `e`, so zero is a safe image.
    let images: Vec<Element> = from
        .generators()
        .iter()
        .map(|g| names.get(g.name()).cloned().unwrap_or_else(Element::zero))
        .collect();
    Ok(from.evaluate(e, &images, to)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        corrected_morphism_f, minimal_flag_model, projectivized_tangent_model, signed_morphism_f,
    };

    fn identity_map(p: &RingPresentation, c: &FreeCdga) -> BTreeMap<String, Element> {
        p.algebra()
            .generators()
            .iter()
            .map(|g| (g.name().to_string(), c.algebra().var(g.name()).unwrap()))
            .collect()
    }

    #[test]
    fn flag_quotient_n2() {
        let p = flag_presentation(2).unwrap();
        assert_eq!(
            p.quotient_dimensions(8).dims(),
            &[1, 0, 2, 0, 2, 0, 1, 0, 0]
        );
    }

    #[test]
    fn ptangent_quotient_n2() {
        let a = two_variable_algebra("x2", "y2");
        let rel = a.complete_homogeneous("x2", "y2", 2).unwrap();
        let p = RingPresentation::new(a.clone(), vec![rel, a.lit(1, &[("y2", 3)])]).unwrap();
        assert_eq!(
            p.quotient_dimensions(8).dims(),
            &[1, 0, 2, 0, 2, 0, 1, 0, 0]
        );
        assert_eq!(p, ptangent_presentation(2).unwrap());
    }

    #[test]
    fn cpn_quotient() {
        for n in 1..=6 {
            let dims = cpn_presentation(n).unwrap().quotient_dimensions(2 * n + 2);
            for d in 0..=2 * n + 2 {
                let expected = usize::from(d % 2 == 0 && d <= 2 * n);
                assert_eq!(dims.get(d), Some(expected));
            }
            assert_eq!(euler_characteristic(&dims).unwrap(), n as i64 + 1);
        }
    }

    #[test]
    fn oracle_values() {
        assert_eq!(
            poincare_product_oracle(2).unwrap().dims(),
            &[1, 0, 2, 0, 2, 0, 1]
        );
        let t3 = poincare_product_oracle(3).unwrap();
        assert_eq!(t3.dims(), &[1, 0, 2, 0, 3, 0, 3, 0, 2, 0, 1]);
        assert_eq!(t3.total(), 12);
        for n in 2..=8 {
            let t = poincare_product_oracle(n).unwrap();
            assert_eq!(t.get(4 * n - 2), Some(1));
            assert_eq!(t.total() as u32, n * (n + 1));
        }
    }

    #[test]
    fn euler_of_flag_quotients() {
        assert_eq!(
            euler_characteristic(&flag_presentation(2).unwrap().quotient_dimensions(8)).unwrap(),
            6
        );
        assert_eq!(
            euler_characteristic(&flag_presentation(3).unwrap().quotient_dimensions(12)).unwrap(),
            12
        );
    }

    #[test]
    fn euler_requires_vanishing_tail() {
        let err = euler_characteristic(&flag_presentation(2).unwrap().quotient_dimensions(6))
            .unwrap_err();
        assert!(matches!(
            err,
            RingError::NonVanishingTail { degree: 6, dim: 1 }
        ));
    }

    #[test]
    fn ptangent_presentation_is_verified() {
        let c = projectivized_tangent_model(2).unwrap();
        let p = ptangent_presentation(2).unwrap();
        let report = verify_ring_presentation(&c, &p, &identity_map(&p, &c), 8).unwrap();
        assert!(report.passed, "{report}");
        // Relations are exactly Dx3 and Dy5.
        assert_eq!(&p.relations()[0], c.d_of_name("x3").unwrap());
    }

    #[test]
    fn flag_presentation_is_verified() {
        let c = minimal_flag_model(3).unwrap();
        let p = flag_presentation(3).unwrap();
        assert!(
            verify_ring_presentation(&c, &p, &identity_map(&p, &c), 12)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn wrong_relation_is_caught() {
        let c = projectivized_tangent_model(2).unwrap();
        let a = two_variable_algebra("x2", "y2");
        let rel = a.complete_homogeneous("x2", "y2", 2).unwrap();
        let p = RingPresentation::new(a.clone(), vec![rel, a.lit(1, &[("y2", 2)])]).unwrap();
        let report = verify_ring_presentation(&c, &p, &identity_map(&p, &c), 8).unwrap();
        assert!(!report.passed);
        assert!(report.witnesses.contains(&"degree 4".to_string()));
        assert_eq!(p.quotient_dimensions(4).get(4), Some(1));
    }

    #[test]
    fn bad_images_are_errors() {
        let c = projectivized_tangent_model(2).unwrap();
        let a = GradedAlgebra::from_pairs([("w8", 8)]).unwrap();
        let p = RingPresentation::new(a, vec![]).unwrap();
        let map = BTreeMap::from([(
            "w8".to_string(),
            c.algebra().lit(1, &[("x3", 1), ("y5", 1)]),
        )]);
        assert!(matches!(
            verify_ring_presentation(&c, &p, &map, 8),
            Err(RingError::NotClosed(_))
        ));
        let map = BTreeMap::from([("w8".to_string(), c.algebra().var("y5").unwrap())]);
        assert!(matches!(
            verify_ring_presentation(&c, &p, &map, 8),
            Err(RingError::ImageDegree { .. })
        ));
        assert!(matches!(
            verify_ring_presentation(&c, &p, &BTreeMap::new(), 8),
            Err(RingError::MissingImage(_))
        ));
    }

    #[test]
    fn change_of_variables_maps_ideals() {
        for n in 2..=5 {
            let chern = chern_form_presentation(n).unwrap();
            let normal = ptangent_presentation(n).unwrap();
            let a = chern.algebra();
            let shift = BTreeMap::from([(
                "x2".to_string(),
                &a.var("x2").unwrap() - &a.var("y2").unwrap(),
            )]);
            for (r, expected) in chern.relations().iter().zip(normal.relations()) {
                assert_eq!(&a.substitute(r, &shift).unwrap(), expected);
            }
        }
    }

    #[test]
    fn morphism_induces_ring_isomorphism() {
        for n in 2..=5 {
            let flag = flag_presentation(n).unwrap();
            let pt = ptangent_presentation(n).unwrap();
            for f in [
                signed_morphism_f(n).unwrap(),
                corrected_morphism_f(n).unwrap(),
            ] {
                let map = presentation_map_from_morphism(&f, &flag, &pt).unwrap();
                let report = verify_presentation_map(&flag, &pt, &map, 4 * n + 2).unwrap();
                assert!(report.passed, "n={n}: {report}");
            }
        }
    }

    #[test]
    fn singular_map_is_rejected() {
        let flag = flag_presentation(2).unwrap();
        let pt = ptangent_presentation(2).unwrap();
        let x = pt.algebra().var("x2").unwrap();
        let map = BTreeMap::from([("a2".to_string(), x.clone()), ("b2".to_string(), x)]);
        let report = verify_presentation_map(&flag, &pt, &map, 8).unwrap();
        assert!(!report.passed);
        assert!(report
            .witnesses
            .contains(&"generators of degree 2".to_string()));
    }

    #[test]
    fn flag_quotient_is_symmetric() {
        for n in 2..=5 {
            let top = 4 * n - 2;
            let dims = flag_presentation(n).unwrap().quotient_dimensions(4 * n + 2);
            for d in 0..=top {
                assert_eq!(dims.get(d), dims.get(top - d));
            }
            for d in top + 1..=4 * n + 2 {
                assert_eq!(dims.get(d), Some(0));
            }
        }
    }

    #[test]
    fn odd_generators_rejected() {
        let a = GradedAlgebra::from_pairs([("v3", 3)]).unwrap();
        assert!(matches!(
            RingPresentation::new(a, vec![]),
            Err(RingError::OddGenerator(_))
        ));
    }
}
