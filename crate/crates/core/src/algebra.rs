//! Free graded-commutative algebras `ΛV = S(V^even) ⊗ E(V^odd)` over ℚ.
//!
//! A [`GradedAlgebra`] owns a finite generator list kept in canonical
//! `(degree, name)` order. [`Monomial`]s and [`Element`]s refer to generators
//! by their position in that list, so they are only meaningful together with
//! the algebra that produced them; every algebra operation validates indices
//! and reports a [`AlgebraError::ForeignGenerator`] otherwise.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("generator name `{0}` is not an identifier")]
    InvalidName(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} does not belong to this algebra")]
    ForeignGenerator(u32),
    #[error("image of `{generator}` has degree {found}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: String,
    },
}

/// A named generator of positive degree. Parity is the degree mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
    degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Result<Self, AlgebraError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(AlgebraError::InvalidName(name));
        }
        if degree == 0 {
            return Err(AlgebraError::ZeroDegree(name));
        }
        Ok(Generator { name, degree })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    fn canonical_key(&self) -> (u32, &str) {
        (self.degree, &self.name)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A product of generators in canonical order, `(generator index, exponent)`
/// pairs sorted by index. Odd generators never carry an exponent above one.
///
/// Monomials order first by total degree, then lexicographically with larger
/// exponents of earlier generators first, so `a2^2 < a2*b2 < b2^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Word length: the number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent of generator `index`, zero if absent.
    pub fn exponent(&self, index: u32) -> u32 {
        self.factors
            .binary_search_by_key(&index, |&(g, _)| g)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// The generator index if this monomial is a single generator to the
    /// first power.
    pub fn as_generator(&self) -> Option<u32> {
        match self.factors.as_slice() {
            [(g, 1)] => Some(*g),
            _ => None,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.factors.iter().zip(&other.factors) {
                match a.0.cmp(&b.0) {
                    Ordering::Equal => match b.1.cmp(&a.1) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    ord => return ord,
                }
            }
            other.factors.len().cmp(&self.factors.len()).reverse()
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree information of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Mixed,
}

/// A rational linear combination of monomials with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Element::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) if degrees.all(|e| e == d) => Homogeneity::Degree(d),
            Some(_) => Homogeneity::Mixed,
        }
    }

    /// True when the element is zero or homogeneous of degree `d`.
    pub fn has_degree(&self, d: u32) -> bool {
        matches!(self.homogeneity(), Homogeneity::Zero)
            || self.homogeneity() == Homogeneity::Degree(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Generator indices occurring anywhere in the element.
    pub fn support(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|&(g, _)| g))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn involves(&self, index: u32) -> bool {
        self.terms.keys().any(|m| m.exponent(index) > 0)
    }

    /// Coefficient of the bare generator `index` (its linear term).
    pub fn linear_coefficient(&self, index: u32) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.as_generator() == Some(index))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// True if some term is a single generator (a non-decomposable term).
    pub fn has_linear_part(&self) -> bool {
        self.terms.keys().any(|m| m.as_generator().is_some())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

/// A free graded-commutative algebra on a finite set of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    generators: Vec<Generator>,
    index: HashMap<String, u32>,
}

impl GradedAlgebra {
    pub fn new(generators: impl IntoIterator<Item = Generator>) -> Result<Self, AlgebraError> {
        let mut generators: Vec<Generator> = generators.into_iter().collect();
        generators.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i as u32).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(GradedAlgebra { generators, index })
    }

    /// Builds an algebra from `(name, degree)` pairs.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, u32)>,
    ) -> Result<Self, AlgebraError> {
        let gens = pairs
            .into_iter()
            .map(|(n, d)| Generator::new(n, d))
            .collect::<Result<Vec<_>, _>>()?;
        GradedAlgebra::new(gens)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, index: u32) -> &Generator {
        &self.generators[index as usize]
    }

    pub fn index_of(&self, name: &str) -> Result<u32, AlgebraError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn is_odd(&self, index: u32) -> bool {
        self.generators[index as usize].is_odd()
    }

    /// The element consisting of a single generator.
    pub fn var(&self, name: &str) -> Result<Element, AlgebraError> {
        let i = self.index_of(name)?;
        Ok(Element::term(self.generator_monomial(i), Rational::one()))
    }

    pub fn generator_monomial(&self, index: u32) -> Monomial {
        Monomial {
            degree: self.generators[index as usize].degree,
            factors: vec![(index, 1)],
        }
    }

    /// Builds the canonical monomial `Π name^exp`. Returns `None` if an odd
    /// generator appears more than once (the product is zero); the sign of
    /// reordering is returned alongside.
    pub fn monomial(
        &self,
        factors: &[(&str, u32)],
    ) -> Result<Option<(i32, Monomial)>, AlgebraError> {
        let mut acc = Some((1, Monomial::one()));
        for &(name, exp) in factors {
            let i = self.index_of(name)?;
            for _ in 0..exp {
                acc = match acc {
                    Some((s, m)) => self
                        .mono_mul(&m, &self.generator_monomial(i))?
                        .map(|(t, p)| (s * t, p)),
                    None => None,
                };
            }
        }
        Ok(acc)
    }

    fn check_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        match m
            .factors
            .iter()
            .find(|&&(g, _)| g as usize >= self.generators.len())
        {
            Some(&(g, _)) => Err(AlgebraError::ForeignGenerator(g)),
            None => Ok(()),
        }
    }

    pub fn check_element(&self, e: &Element) -> Result<(), AlgebraError> {
        e.terms.keys().try_for_each(|m| self.check_monomial(m))
    }

    /// Multiplies two monomials. `None` means the product vanishes because an
    /// odd generator repeats; otherwise the Koszul sign and canonical product.
    pub fn mono_mul(
        &self,
        left: &Monomial,
        right: &Monomial,
    ) -> Result<Option<(i32, Monomial)>, AlgebraError> {
        self.check_monomial(left)?;
        self.check_monomial(right)?;
        Ok(self.mono_mul_unchecked(left, right))
    }

    pub(crate) fn mono_mul_unchecked(
        &self,
        left: &Monomial,
        right: &Monomial,
    ) -> Option<(i32, Monomial)> {
        let mut factors = Vec::with_capacity(left.factors.len() + right.factors.len());
        let mut swaps = 0u32;
        // Odd factors of `left` not yet passed by the merge.
        let mut odd_left_remaining = left
            .factors
            .iter()
            .filter(|&&(g, _)| self.is_odd(g))
            .count() as u32;
        let (mut i, mut j) = (0, 0);
        while i < left.factors.len() || j < right.factors.len() {
            let ord = match (left.factors.get(i), right.factors.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    let f = left.factors[i];
                    if self.is_odd(f.0) {
                        odd_left_remaining -= 1;
                    }
                    factors.push(f);
                    i += 1;
                }
                Ordering::Greater => {
                    let f = right.factors[j];
                    if self.is_odd(f.0) {
                        // Moves left past every odd left factor still ahead.
                        swaps += odd_left_remaining;
                    }
                    factors.push(f);
                    j += 1;
                }
                Ordering::Equal => {
                    let (g, a) = left.factors[i];
                    let b = right.factors[j].1;
                    if self.is_odd(g) {
                        return None;
                    }
                    factors.push((g, a + b));
                    i += 1;
                    j += 1;
                }
            }
        }
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        Some((
            sign,
            Monomial {
                degree: left.degree + right.degree,
                factors,
            },
        ))
    }

    pub fn mul(&self, left: &Element, right: &Element) -> Result<Element, AlgebraError> {
        self.check_element(left)?;
        self.check_element(right)?;
        Ok(self.mul_unchecked(left, right))
    }

    pub(crate) fn mul_unchecked(&self, left: &Element, right: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in &left.terms {
            for (m2, c2) in &right.terms {
                if let Some((sign, m)) = self.mono_mul_unchecked(m1, m2) {
                    let c = c1 * c2;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, e: &Element, exp: u32) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        let mut acc = Element::one();
        for _ in 0..exp {
            acc = self.mul_unchecked(&acc, e);
        }
        Ok(acc)
    }

    /// Extends `images` (one element of `target` per generator of `self`)
    /// multiplicatively and linearly to `e`.
    pub fn evaluate(
        &self,
        e: &Element,
        images: &[Element],
        target: &GradedAlgebra,
    ) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        assert_eq!(images.len(), self.len(), "one image per generator");
        let mut out = Element::zero();
        let mut powers: HashMap<(u32, u32), Element> = HashMap::new();
        for (m, c) in &e.terms {
            let mut acc = Element::constant(c.clone());
            for &(g, exp) in &m.factors {
                let p = powers
                    .entry((g, exp))
                    .or_insert_with(|| {
                        let mut p = Element::one();
                        for _ in 0..exp {
                            p = target.mul_unchecked(&p, &images[g as usize]);
                        }
                        p
                    })
                    .clone();
                acc = target.mul_unchecked(&acc, &p);
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Algebra-morphism extension of a partial assignment; unassigned
    /// generators map to themselves. Each image must be homogeneous of its
    /// generator's degree (or zero).
    pub fn substitute(
        &self,
        e: &Element,
        assignment: &BTreeMap<String, Element>,
    ) -> Result<Element, AlgebraError> {
        let mut images: Vec<Element> = (0..self.len() as u32)
            .map(|i| Element::term(self.generator_monomial(i), Rational::one()))
            .collect();
        for (name, image) in assignment {
            let i = self.index_of(name)?;
            self.check_element(image)?;
            let g = &self.generators[i as usize];
            if !image.has_degree(g.degree) {
                return Err(AlgebraError::DegreeMismatch {
                    generator: name.clone(),
                    expected: g.degree,
                    found: describe_homogeneity(image.homogeneity()),
                });
            }
            images[i as usize] = image.clone();
        }
        self.evaluate(e, &images, self)
    }

    /// All canonical monomials of total degree `d`, in monomial order.
    pub fn basis_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate(0, d, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        start: usize,
        remaining: u32,
        current: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial {
                degree: current
                    .iter()
                    .map(|&(g, e)| self.generators[g as usize].degree * e)
                    .sum(),
                factors: current.clone(),
            });
            return;
        }
        for i in start..self.generators.len() {
            let g = &self.generators[i];
            if g.degree > remaining {
                // Canonical order is by degree, so no later generator fits either.
                break;
            }
            let max_exp = if g.is_odd() { 1 } else { remaining / g.degree };
            for exp in 1..=max_exp {
                current.push((i as u32, exp));
                self.enumerate(i + 1, remaining - exp * g.degree, current, out);
                current.pop();
            }
        }
    }

    /// Σ_{i=0}^{k} x^{k-i} y^i for two even generators.
    pub fn complete_homogeneous(&self, x: &str, y: &str, k: u32) -> Result<Element, AlgebraError> {
        let (xe, ye) = (self.var(x)?, self.var(y)?);
        let mut out = Element::zero();
        for i in 0..=k {
            let t = self.mul_unchecked(&self.pow(&xe, k - i)?, &self.pow(&ye, i)?);
            out = &out + &t;
        }
        Ok(out)
    }

    /// Shorthand for an integer multiple of a monomial given by name/exponent
    /// pairs. Panics on unknown names; intended for tests and constructors.
    pub fn lit(&self, coeff: i64, factors: &[(&str, u32)]) -> Element {
        match self.monomial(factors).expect("known generators") {
            Some((sign, m)) => Element::term(m, int(coeff * sign as i64)),
            None => Element::zero(),
        }
    }
}

pub(crate) fn describe_homogeneity(h: Homogeneity) -> String {
    match h {
        Homogeneity::Zero => "zero".to_string(),
        Homogeneity::Degree(d) => d.to_string(),
        Homogeneity::Mixed => "mixed".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(pairs: &[(&str, u32)]) -> GradedAlgebra {
        GradedAlgebra::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let a = alg(&[("v3", 3), ("v5", 5)]);
        let v3 = a.generator_monomial(a.index_of("v3").unwrap());
        assert_eq!(a.mono_mul(&v3, &v3).unwrap(), None);
    }

    #[test]
    fn koszul_sign_for_odd_pair() {
        let a = alg(&[("v3", 3), ("v5", 5)]);
        let v3 = a.generator_monomial(a.index_of("v3").unwrap());
        let v5 = a.generator_monomial(a.index_of("v5").unwrap());
        let (s, m) = a.mono_mul(&v3, &v5).unwrap().unwrap();
        assert_eq!(s, 1);
        let (t, n) = a.mono_mul(&v5, &v3).unwrap().unwrap();
        assert_eq!(t, -1);
        assert_eq!(m, n);
    }

    #[test]
    fn even_generators_commute() {
        let a = alg(&[("a2", 2), ("b2", 2)]);
        let x = a.generator_monomial(0);
        let y = a.generator_monomial(1);
        assert_eq!(a.mono_mul(&x, &y).unwrap(), a.mono_mul(&y, &x).unwrap());
        assert_eq!(a.mono_mul(&x, &y).unwrap().unwrap().0, 1);
    }

    #[test]
    fn foreign_generator_is_rejected() {
        let small = alg(&[("a2", 2)]);
        let big = alg(&[("a2", 2), ("b2", 2)]);
        let b = big.var("b2").unwrap();
        assert_eq!(
            small.mul(&b, &b).unwrap_err(),
            AlgebraError::ForeignGenerator(1)
        );
    }

    #[test]
    fn square_of_sum() {
        let a = alg(&[("a2", 2), ("b2", 2)]);
        let s = &a.var("a2").unwrap() + &a.var("b2").unwrap();
        let expected = &(&a.lit(1, &[("a2", 2)]) + &a.lit(2, &[("a2", 1), ("b2", 1)]))
            + &a.lit(1, &[("b2", 2)]);
        assert_eq!(a.mul(&s, &s).unwrap(), expected);
    }

    #[test]
    fn telescoping_identity() {
        let a = alg(&[("x2", 2), ("y2", 2)]);
        let diff = &a.var("x2").unwrap() - &a.var("y2").unwrap();
        let h = a.complete_homogeneous("x2", "y2", 2).unwrap();
        let expected = &a.lit(1, &[("x2", 3)]) - &a.lit(1, &[("y2", 3)]);
        assert_eq!(a.mul(&diff, &h).unwrap(), expected);
    }

    #[test]
    fn odd_times_even_commutes() {
        let a = alg(&[("v1", 1), ("a2", 2), ("b2", 2), ("z2", 2)]);
        let s = &(&a.var("a2").unwrap() + &a.var("b2").unwrap()) + &a.var("z2").unwrap();
        let v = a.var("v1").unwrap();
        assert_eq!(a.mul(&v, &s).unwrap(), a.mul(&s, &v).unwrap());
    }

    #[test]
    fn substitute_z2_reproduces_cascade_line() {
        let a = alg(&[("a2", 2), ("b2", 2), ("z2", 2)]);
        let ab = a.lit(1, &[("a2", 1), ("b2", 1)]);
        let sum = &a.var("a2").unwrap() + &a.var("b2").unwrap();
        let e = &ab + &a.mul(&sum, &a.var("z2").unwrap()).unwrap();
        let sigma = BTreeMap::from([("z2".to_string(), -&sum)]);
        let expected = &ab - &a.mul(&sum, &sum).unwrap();
        assert_eq!(a.substitute(&e, &sigma).unwrap(), expected);
    }

    #[test]
    fn substitute_shift_of_chern_form() {
        let a = alg(&[("x2", 2), ("y2", 2)]);
        let e = &(&a.lit(1, &[("x2", 2)]) + &a.lit(3, &[("x2", 1), ("y2", 1)]))
            + &a.lit(3, &[("y2", 2)]);
        let sigma = BTreeMap::from([(
            "x2".to_string(),
            &a.var("x2").unwrap() - &a.var("y2").unwrap(),
        )]);
        assert_eq!(
            a.substitute(&e, &sigma).unwrap(),
            a.complete_homogeneous("x2", "y2", 2).unwrap()
        );
        assert_eq!(a.substitute(&e, &BTreeMap::new()).unwrap(), e);
    }

    #[test]
    fn substitute_rejects_wrong_degree() {
        let a = alg(&[("x2", 2), ("y2", 2)]);
        let sigma = BTreeMap::from([("x2".to_string(), a.lit(1, &[("y2", 2)]))]);
        assert!(matches!(
            a.substitute(&a.var("x2").unwrap(), &sigma),
            Err(AlgebraError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn basis_examples() {
        let a = alg(&[("y2", 2), ("y5", 5)]);
        assert_eq!(a.basis_of_degree(0), vec![Monomial::one()]);
        let b7 = a.basis_of_degree(7);
        assert_eq!(b7.len(), 1);
        assert_eq!(b7[0].factors().len(), 2);
        let f = alg(&[("a2", 2), ("b2", 2)]);
        let b4 = f.basis_of_degree(4);
        let expected: Vec<Monomial> = [
            &[("a2", 2)][..],
            &[("a2", 1), ("b2", 1)][..],
            &[("b2", 2)][..],
        ]
        .iter()
        .map(|fs| f.monomial(fs).unwrap().unwrap().1)
        .collect();
        assert_eq!(b4, expected);
    }

    #[test]
    fn two_even_generators_have_k_plus_one_monomials() {
        let a = alg(&[("a2", 2), ("b2", 2)]);
        for k in 0..12 {
            assert_eq!(a.basis_of_degree(2 * k).len(), k as usize + 1);
            assert!(a.basis_of_degree(2 * k + 1).is_empty());
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            Generator::new("x", 0),
            Err(AlgebraError::ZeroDegree(_))
        ));
        assert!(matches!(
            Generator::new("2x", 2),
            Err(AlgebraError::InvalidName(_))
        ));
        assert!(matches!(
            GradedAlgebra::from_pairs([("x", 2), ("x", 3)]),
            Err(AlgebraError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn homogeneity_query() {
        let a = alg(&[("x2", 2), ("y3", 3)]);
        assert_eq!(Element::zero().homogeneity(), Homogeneity::Zero);
        assert_eq!(a.var("x2").unwrap().homogeneity(), Homogeneity::Degree(2));
        let mixed = &a.var("x2").unwrap() + &a.var("y3").unwrap();
        assert_eq!(mixed.homogeneity(), Homogeneity::Mixed);
    }
}
