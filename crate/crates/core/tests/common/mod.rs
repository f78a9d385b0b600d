//! Shared proptest strategies.

#![allow(dead_code)]

use proptest::prelude::*;

use stlsplit_core::separation::{FragmentSpec, ProgressTerm, SafetyTerm, TargetTerm};
use stlsplit_core::split::oracle::axis_atoms;
use stlsplit_core::stl::{Formula, Interval, Predicate, Trace};

pub fn interval(max_hi: usize) -> impl Strategy<Value = Interval> {
    (0..=max_hi).prop_flat_map(|b| (0..=b, Just(b))).prop_map(|(a, b)| Interval::new(a, b).unwrap())
}

pub fn predicate() -> impl Strategy<Value = Predicate> {
    (-2i32..=2, -2i32..=2, -8i32..=8)
        .prop_map(|(a, b, c)| Predicate::new(vec![f64::from(a), f64::from(b)], f64::from(c) * 0.5))
}

/// Boolean formulas over the axis atoms `x1 >= 0`, `x2 >= 0`.
pub fn gamma() -> impl Strategy<Value = Formula> {
    let atom = prop::sample::select(axis_atoms(2)).prop_map(Formula::pred);
    atom.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2).prop_map(Formula::and),
            prop::collection::vec(inner, 2).prop_map(Formula::or),
        ]
    })
}

/// Arbitrary formulas over `leaf` with all intervals inside `[0, 3]`.
pub fn formula_over(leaf: BoxedStrategy<Formula>) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![1 => Just(Formula::True), 6 => leaf];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::or),
            (interval(3), inner.clone()).prop_map(|(i, f)| Formula::always(i, f)),
            (interval(3), inner.clone()).prop_map(|(i, f)| Formula::eventually(i, f)),
            (inner.clone(), interval(3), inner).prop_map(|(l, i, r)| Formula::until(l, i, r)),
        ]
    })
}

pub fn formula() -> impl Strategy<Value = Formula> {
    formula_over(predicate().prop_map(Formula::pred).boxed())
}

pub fn trace(dim: usize, horizon: usize) -> impl Strategy<Value = Trace> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, dim), horizon + 1)
        .prop_map(|s| Trace::new(s).unwrap())
}

/// Safety/progress/target fragments over the axis atoms with length at most 8.
pub fn fragment() -> impl Strategy<Value = FragmentSpec> {
    let safety = (interval(8), gamma()).prop_map(|(i, g)| SafetyTerm::new(i, g));
    let progress = (1usize..=3)
        .prop_flat_map(|c| (interval(8 - c), Just(c), gamma()))
        .prop_map(|(i, c, g)| ProgressTerm::new(i, c, g));
    let target = (0usize..=2)
        .prop_flat_map(|c| (interval(8 - c), Just(c), gamma()))
        .prop_map(|(i, c, g)| TargetTerm::new(i, c, g));
    (
        prop::collection::vec(safety, 1..=2),
        prop::collection::vec(progress, 1..=2),
        target,
    )
        .prop_map(|(s, p, t)| FragmentSpec::new(s, p, t).unwrap())
}

/// Interior timing points for a formula of length `len`, with the ends added.
pub fn kappas(len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((1..len.max(1)).collect::<Vec<_>>(), 0..=2.min(len.saturating_sub(1)))
        .prop_map(move |inner| {
            let mut k = vec![0];
            k.extend(inner);
            k.push(len);
            k
        })
}
