//! Free commutative differential graded algebras, their cohomology, and
//! morphisms between them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{describe_homogeneity, AlgebraError, Element, GradedAlgebra, Monomial};
use crate::linalg::{kernel_basis, rank, Echelon, Rational, SparseMatrix, SparseVec};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("d({generator}) has degree {found}, expected {expected}")]
    DifferentialDegree {
        generator: String,
        expected: u32,
        found: String,
    },
    #[error("d∘d is nonzero on {}", .0.join(", "))]
    DSquaredNonzero(Vec<String>),
    #[error("morphism does not commute with differentials on {}", .0.join(", "))]
    NotChainMap(Vec<String>),
    #[error("image of `{generator}` has degree {found}, expected {expected}")]
    ImageDegree {
        generator: String,
        expected: u32,
        found: String,
    },
}

/// `(ΛV, d)`: a free graded-commutative algebra with a differential given on
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCdga {
    algebra: GradedAlgebra,
    differential: Vec<Element>,
}

impl FreeCdga {
    /// Builds a model and certifies `d∘d = 0`. Generators missing from
    /// `differential` are closed.
    pub fn new(
        algebra: GradedAlgebra,
        differential: BTreeMap<String, Element>,
    ) -> Result<Self, CdgaError> {
        let c = FreeCdga::new_unchecked(algebra, differential)?;
        let report = c.check_d_squared(u32::MAX);
        if !report.passed {
            return Err(CdgaError::DSquaredNonzero(report.witnesses));
        }
        Ok(c)
    }

    /// Builds a model validating degrees but not `d∘d = 0`.
    pub fn new_unchecked(
        algebra: GradedAlgebra,
        differential: BTreeMap<String, Element>,
    ) -> Result<Self, CdgaError> {
        let mut images = vec![Element::zero(); algebra.len()];
        for (name, image) in differential {
            let i = algebra.index_of(&name)?;
            algebra.check_element(&image)?;
            let expected = algebra.generator(i).degree() + 1;
            if !image.has_degree(expected) {
                return Err(CdgaError::DifferentialDegree {
                    generator: name,
                    expected,
                    found: describe_homogeneity(image.homogeneity()),
                });
            }
            images[i as usize] = image;
        }
        Ok(FreeCdga {
            algebra,
            differential: images,
        })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    /// Differential of generator `index`.
    pub fn d_of(&self, index: u32) -> &Element {
        &self.differential[index as usize]
    }

    pub fn d_of_name(&self, name: &str) -> Result<&Element, CdgaError> {
        Ok(self.d_of(self.algebra.index_of(name)?))
    }

    /// Degree multiset of generators, sorted.
    pub fn generator_degrees(&self) -> Vec<u32> {
        self.algebra
            .generators()
            .iter()
            .map(|g| g.degree())
            .collect()
    }

    /// Leibniz extension of the differential.
    pub fn apply_d(&self, e: &Element) -> Result<Element, CdgaError> {
        self.algebra.check_element(e)?;
        Ok(self.apply_d_unchecked(e))
    }

    fn apply_d_unchecked(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            let dm = self.d_monomial(m);
            out = &out + &dm.scale(c);
        }
        out
    }

    /// d(f₁⋯f_k) = Σ (−1)^{|f₁⋯f_{i−1}|} f₁⋯f_{i−1} · d(f_i) · f_{i+1}⋯f_k,
    /// with f_i = g_i^{e_i} and d(g^e) = e·g^{e−1}·dg for even g.
    fn d_monomial(&self, m: &Monomial) -> Element {
        let alg = &self.algebra;
        let factors = m.factors();
        let mut out = Element::zero();
        let mut prefix = Element::one();
        let mut prefix_degree = 0u32;
        for (i, &(g, exp)) in factors.iter().enumerate() {
            let dg = &self.differential[g as usize];
            if !dg.is_zero() {
                let mut piece = dg.scale(&Rational::from_integer(exp.into()));
                if exp > 1 {
                    let lower = alg.pow(&alg_var(alg, g), exp - 1).expect("own generator");
                    piece = alg.mul_unchecked(&lower, &piece);
                }
                let mut term = alg.mul_unchecked(&prefix, &piece);
                for &(h, e2) in &factors[i + 1..] {
                    let p = alg.pow(&alg_var(alg, h), e2).expect("own generator");
                    term = alg.mul_unchecked(&term, &p);
                }
                if prefix_degree % 2 == 1 {
                    term = -term;
                }
                out = &out + &term;
            }
            let gp = alg.pow(&alg_var(alg, g), exp).expect("own generator");
            prefix = alg.mul_unchecked(&prefix, &gp);
            prefix_degree += alg.generator(g).degree() * exp;
        }
        out
    }

    /// Applies d twice to every generator of degree at most `up_to`.
    pub fn check_d_squared(&self, up_to: u32) -> CheckReport {
        let witnesses = self
            .algebra
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree() <= up_to)
            .filter(|(i, _)| !self.apply_d_unchecked(&self.differential[*i]).is_zero())
            .map(|(_, g)| g.name().to_string())
            .collect();
        CheckReport::from_witnesses("d_squared", witnesses, "")
    }

    /// Matrix of `d` from degree `d` to degree `d+1`: one row per source basis
    /// monomial, one column per target basis monomial.
    pub fn differential_matrix(&self, d: u32) -> SparseMatrix {
        let source = self.algebra.basis_of_degree(d);
        let target = self.algebra.basis_of_degree(d + 1);
        self.differential_matrix_between(&source, &target)
    }

    fn differential_matrix_between(
        &self,
        source: &[Monomial],
        target: &[Monomial],
    ) -> SparseMatrix {
        let index: HashMap<&Monomial, usize> =
            target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = SparseMatrix::zeros(source.len(), target.len());
        for (r, m) in source.iter().enumerate() {
            for (tm, c) in self.d_monomial(m).terms() {
                mat.add_to(r, index[tm], c.clone());
            }
        }
        mat
    }

    /// Betti numbers `b_d = dim ker d_d − rank d_{d−1}` for `d ≤ up_to`.
    pub fn betti(&self, up_to: u32) -> BettiTable {
        let bases: Vec<Vec<Monomial>> = (0..=up_to + 1)
            .into_par_iter()
            .map(|d| self.algebra.basis_of_degree(d))
            .collect();
        let ranks: Vec<usize> = (0..=up_to as usize)
            .into_par_iter()
            .map(|d| rank(&self.differential_matrix_between(&bases[d], &bases[d + 1])))
            .collect();
        let dims = (0..=up_to as usize)
            .map(|d| {
                let incoming = if d == 0 { 0 } else { ranks[d - 1] };
                bases[d].len() - ranks[d] - incoming
            })
            .collect();
        BettiTable::new(dims)
    }

    /// Purity: even generators outside `base` are closed, and every odd
    /// generator's differential lies in the subalgebra generated by the even
    /// generators and `base`.
    pub fn is_pure(&self, base: &[&str]) -> Result<bool, CdgaError> {
        let mut in_base = vec![false; self.algebra.len()];
        for name in base {
            in_base[self.algebra.index_of(name)? as usize] = true;
        }
        let allowed = |g: u32| in_base[g as usize] || !self.algebra.is_odd(g);
        for (i, g) in self.algebra.generators().iter().enumerate() {
            let dg = &self.differential[i];
            if g.is_odd() {
                if !dg.support().into_iter().all(allowed) {
                    return Ok(false);
                }
            } else if !in_base[i] && !dg.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True if no differential has a linear term, i.e. `dV ⊆ Λ^{≥2}V`.
    pub fn is_minimal(&self) -> bool {
        self.differential.iter().all(|d| !d.has_linear_part())
    }

    /// Cohomology data in degree `d`: canonical basis, coboundary rows, and
    /// cocycle representatives spanning a complement of the coboundaries.
    pub(crate) fn cohomology_slice(&self, d: u32) -> CohomologySlice {
        let basis = self.algebra.basis_of_degree(d);
        let outgoing =
            self.differential_matrix_between(&basis, &self.algebra.basis_of_degree(d + 1));
        let boundaries: Vec<SparseVec> = if d == 0 {
            Vec::new()
        } else {
            self.differential_matrix_between(&self.algebra.basis_of_degree(d - 1), &basis)
                .sparse_rows()
        };
        let mut span = Echelon::new();
        for b in &boundaries {
            span.insert(b.clone());
        }
        let mut representatives = Vec::new();
        for z in kernel_basis(&outgoing.transpose()) {
            let z = crate::linalg::to_sparse(&z);
            if span.insert(z.clone()) {
                representatives.push(z);
            }
        }
        CohomologySlice {
            basis,
            boundaries,
            representatives,
        }
    }
}

fn alg_var(alg: &GradedAlgebra, g: u32) -> Element {
    Element::term(alg.generator_monomial(g), Rational::one())
}

pub(crate) struct CohomologySlice {
    pub(crate) basis: Vec<Monomial>,
    pub(crate) boundaries: Vec<SparseVec>,
    pub(crate) representatives: Vec<SparseVec>,
}

impl CohomologySlice {
    fn coordinates(&self, e: &Element) -> SparseVec {
        let index: HashMap<&Monomial, usize> =
            self.basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v: SparseVec = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    fn element(&self, v: &SparseVec) -> Element {
        let mut e = Element::zero();
        for (i, c) in v {
            e.add_term(self.basis[*i].clone(), c.clone());
        }
        e
    }
}

/// Cohomology dimensions in degrees `0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    dims: Vec<usize>,
}

impl BettiTable {
    pub fn new(dims: Vec<usize>) -> Self {
        BettiTable { dims }
    }

    /// Highest degree computed.
    pub fn bound(&self) -> u32 {
        self.dims.len().saturating_sub(1) as u32
    }

    /// Dimension in degree `d`, or `None` above the computed bound.
    pub fn get(&self, d: u32) -> Option<usize> {
        self.dims.get(d as usize).copied()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The table restricted to degrees `≤ bound`.
    pub fn truncate(&self, bound: u32) -> BettiTable {
        BettiTable::new(self.dims.iter().take(bound as usize + 1).copied().collect())
    }

    /// Map from decimal degree to dimension, the structured output form.
    pub fn to_map(&self) -> BTreeMap<String, usize> {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &b)| (d.to_string(), b))
            .collect()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Generator-wise morphism between free CDGAs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdgaMorphism {
    source: FreeCdga,
    target: FreeCdga,
    images: Vec<Element>,
}

impl CdgaMorphism {
    /// Builds a morphism from named images; missing generators map to zero.
    /// Degrees are not validated here; [`CdgaMorphism::check`] reports them.
    pub fn new(
        source: FreeCdga,
        target: FreeCdga,
        images: BTreeMap<String, Element>,
    ) -> Result<Self, CdgaError> {
        let mut imgs = vec![Element::zero(); source.algebra.len()];
        for (name, image) in images {
            let i = source.algebra.index_of(&name)?;
            target.algebra.check_element(&image)?;
            imgs[i as usize] = image;
        }
        Ok(CdgaMorphism {
            source,
            target,
            images: imgs,
        })
    }

    pub fn identity(c: &FreeCdga) -> Self {
        let images = (0..c.algebra.len() as u32)
            .map(|i| alg_var(&c.algebra, i))
            .collect();
        CdgaMorphism {
            source: c.clone(),
            target: c.clone(),
            images,
        }
    }

    pub fn source(&self) -> &FreeCdga {
        &self.source
    }

    pub fn target(&self) -> &FreeCdga {
        &self.target
    }

    pub fn image_of(&self, name: &str) -> Result<&Element, CdgaError> {
        Ok(&self.images[self.source.algebra.index_of(name)? as usize])
    }

    /// Extends the generator images to an algebra morphism.
    pub fn apply(&self, e: &Element) -> Result<Element, CdgaError> {
        Ok(self
            .source
            .algebra
            .evaluate(e, &self.images, &self.target.algebra)?)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CdgaMorphism) -> Result<CdgaMorphism, CdgaError> {
        let images = self
            .images
            .iter()
            .map(|e| other.apply(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CdgaMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }

    /// Degree preservation and `d ∘ f = f ∘ d` on every generator, exactly.
    pub fn check(&self) -> CheckReport {
        let mut witnesses = Vec::new();
        let mut notes = Vec::new();
        for (i, g) in self.source.algebra.generators().iter().enumerate() {
            let image = &self.images[i];
            if !image.has_degree(g.degree()) {
                witnesses.push(g.name().to_string());
                notes.push(format!(
                    "{} has image of degree {}",
                    g.name(),
                    describe_homogeneity(image.homogeneity())
                ));
                continue;
            }
            let lhs = self.target.apply_d_unchecked(image);
            let rhs = self
                .source
                .algebra
                .evaluate(
                    &self.source.differential[i],
                    &self.images,
                    &self.target.algebra,
                )
                .expect("differential uses source generators");
            if lhs != rhs {
                witnesses.push(g.name().to_string());
            }
        }
        CheckReport::from_witnesses("commutes_with_d", witnesses, notes.join("; "))
    }

    /// Whether the linear part of the morphism (images modulo decomposables)
    /// is a degreewise bijection of generator spaces. For a chain map of
    /// Sullivan algebras this is equivalent to being an isomorphism.
    pub fn is_isomorphism(&self) -> Result<bool, CdgaError> {
        let report = self.check();
        if !report.passed {
            return Err(CdgaError::NotChainMap(report.witnesses));
        }
        let mut src_degrees = self.source.generator_degrees();
        let mut tgt_degrees = self.target.generator_degrees();
        src_degrees.sort_unstable();
        tgt_degrees.sort_unstable();
        if src_degrees != tgt_degrees {
            return Ok(false);
        }
        let mut by_degree: BTreeMap<u32, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for (i, g) in self.source.algebra.generators().iter().enumerate() {
            by_degree.entry(g.degree()).or_default().0.push(i as u32);
        }
        for (i, g) in self.target.algebra.generators().iter().enumerate() {
            by_degree.entry(g.degree()).or_default().1.push(i as u32);
        }
        for (src, tgt) in by_degree.values() {
            let mut m = SparseMatrix::zeros(src.len(), tgt.len());
            for (r, &s) in src.iter().enumerate() {
                for (c, &t) in tgt.iter().enumerate() {
                    let coeff = self.images[s as usize].linear_coefficient(t);
                    m.set(r, c, coeff).expect("in bounds");
                }
            }
            if src.len() != tgt.len() || rank(&m) != src.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrices of the induced map on cohomology in degrees `0..=up_to`,
    /// with respect to cocycle representatives chosen in each algebra.
    pub fn induced_cohomology_map(&self, up_to: u32) -> Result<InducedCohomologyMap, CdgaError> {
        let report = self.check();
        if !report.passed {
            return Err(CdgaError::NotChainMap(report.witnesses));
        }
        let degrees = (0..=up_to)
            .into_par_iter()
            .map(|d| self.induced_in_degree(d))
            .collect::<Vec<_>>();
        let quasi_isomorphism = degrees.iter().all(DegreeMap::is_invertible);
        Ok(InducedCohomologyMap {
            degrees,
            quasi_isomorphism,
        })
    }

    fn induced_in_degree(&self, d: u32) -> DegreeMap {
        let src = self.source.cohomology_slice(d);
        let tgt = self.target.cohomology_slice(d);
        let mut span = Echelon::tracking();
        for v in tgt.boundaries.iter().chain(&tgt.representatives) {
            span.insert(v.clone());
        }
        let nb = tgt.boundaries.len();
        let mut matrix =
            vec![vec![Rational::zero(); src.representatives.len()]; tgt.representatives.len()];
        for (col, rep) in src.representatives.iter().enumerate() {
            let image = self
                .apply(&src.element(rep))
                .expect("representatives live in the source algebra");
            let coords = tgt.coordinates(&image);
            let combo = span
                .express(&coords)
                .expect("image of a cocycle is a cocycle, hence in boundaries ⊕ representatives");
            for (k, c) in combo {
                if k >= nb {
                    matrix[k - nb][col] = c;
                }
            }
        }
        DegreeMap {
            degree: d,
            source_dim: src.representatives.len(),
            target_dim: tgt.representatives.len(),
            matrix,
        }
    }
}

/// Induced map on cohomology in a single degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMap {
    pub degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    /// `target_dim × source_dim` matrix; column j is the image of the j-th
    /// source class.
    pub matrix: Vec<Vec<Rational>>,
}

impl DegreeMap {
    pub fn is_invertible(&self) -> bool {
        if self.source_dim != self.target_dim {
            return false;
        }
        if self.source_dim == 0 {
            return true;
        }
        let m = SparseMatrix::from_dense(self.source_dim, &self.matrix).expect("square");
        rank(&m) == self.source_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedCohomologyMap {
    pub degrees: Vec<DegreeMap>,
    pub quasi_isomorphism: bool,
}

/// Builds a model from `(name, degree)` pairs and a differential written as a
/// closure over the algebra. Handy for tests and constructors.
pub fn build_model(
    generators: &[(&str, u32)],
    differential: impl FnOnce(&GradedAlgebra) -> Vec<(&'static str, Element)>,
) -> Result<FreeCdga, CdgaError> {
    let algebra = GradedAlgebra::from_pairs(generators.iter().copied())?;
    let d = differential(&algebra)
        .into_iter()
        .map(|(n, e)| (n.to_string(), e))
        .collect();
    FreeCdga::new(algebra, d)
}
