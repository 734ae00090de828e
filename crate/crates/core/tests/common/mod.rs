//! Random elements shared by the property and acceptance tests.
#![allow(dead_code)]

use proptest::prelude::*;
use sullivan_core::linalg::rational;
use sullivan_core::{Element, GradedAlgebra, Monomial};

/// Mixed-parity generators, enough to exercise Koszul signs.
pub fn mixed_algebra() -> GradedAlgebra {
    GradedAlgebra::from_pairs([
        ("a2", 2),
        ("b2", 2),
        ("c4", 4),
        ("u1", 1),
        ("v3", 3),
        ("w5", 5),
    ])
    .unwrap()
}

pub fn coefficient() -> impl Strategy<Value = sullivan_core::Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rational(p, q))
}

/// Random element of the degree-`d` slice.
pub fn of_degree(alg: &GradedAlgebra, d: u32) -> impl Strategy<Value = Element> {
    let basis: Vec<Monomial> = alg.basis_of_degree(d);
    proptest::collection::vec(coefficient(), basis.len()).prop_map(move |cs| {
        let mut e = Element::zero();
        for (m, c) in basis.iter().zip(cs) {
            e.add_term(m.clone(), c);
        }
        e
    })
}

/// Homogeneous element of a random degree in `0..=max_degree`.
pub fn homogeneous(alg: GradedAlgebra, max_degree: u32) -> impl Strategy<Value = (u32, Element)> {
    (0..=max_degree).prop_flat_map(move |d| of_degree(&alg, d).prop_map(move |e| (d, e)))
}

/// Sum of up to five random monomials of mixed degrees.
pub fn element(alg: GradedAlgebra) -> impl Strategy<Value = Element> {
    let monomials: Vec<Monomial> = (0..=8).flat_map(|d| alg.basis_of_degree(d)).collect();
    let count = monomials.len();
    proptest::collection::vec((0..count, coefficient()), 0..=5).prop_map(move |terms| {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(monomials[i].clone(), c);
        }
        e
    })
}

pub fn koszul(p: u32, q: u32) -> sullivan_core::Rational {
    rational(if (p * q).is_multiple_of(2) { 1 } else { -1 }, 1)
}
