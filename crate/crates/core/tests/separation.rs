mod common;

use proptest::prelude::*;

use stlsplit_core::separation::{syntactic_separation, verify_separated, FragmentSpec};
use stlsplit_core::split::oracle::{axis_atoms, realize_axis};
use stlsplit_core::split::{check_nonoverlap, complete_split, enumerate_oracle, modular_check, TauPlan};
use stlsplit_core::stl::{evaluate, Formula};

fn with_kappas() -> impl Strategy<Value = (FragmentSpec, Vec<usize>)> {
    common::fragment().prop_flat_map(|f| {
        let len = f.length();
        (Just(f), common::kappas(len))
    })
}

fn sat(phi: &Formula, horizon: usize) -> stlsplit_core::split::SatSet {
    enumerate_oracle(phi, &axis_atoms(2), horizon).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn separation_is_equivalent((frag, kappas) in with_kappas()) {
        let sep = syntactic_separation(&frag, &kappas).unwrap();
        prop_assert!(verify_separated(&sep));
        let len = frag.length();
        prop_assert_eq!(sat(&frag.formula(), len), sat(&sep.formula(), len));
    }

    #[test]
    fn complete_split_is_sound_and_separated((frag, kappas) in with_kappas(), tau in 0usize..=3) {
        let sep = syntactic_separation(&frag, &kappas).unwrap();
        for plan in [TauPlan::Default, TauPlan::Uniform(tau)] {
            let Ok(split) = complete_split(&sep, &plan) else { continue };
            prop_assert!(check_nonoverlap(&split));
            let len = frag.length();
            prop_assert!(sat(&split.formula(), len).is_subset_of(&sat(&frag.formula(), len)));
        }
    }

    #[test]
    fn modular_check_matches_whole_trace(
        (frag, kappas) in with_kappas(),
        traces in prop::collection::vec(any::<usize>(), 64),
    ) {
        let sep = syntactic_separation(&frag, &kappas).unwrap();
        let Ok(split) = complete_split(&sep, &TauPlan::Default) else { return Ok(()) };
        let len = split.horizon();
        let phi = split.formula();
        for t in traces {
            let x = realize_axis(t % (1 << (2 * (len + 1))), 2, len);
            prop_assert_eq!(modular_check(&x, &split).unwrap().overall, evaluate(&x, 0, &phi).unwrap());
        }
    }

    #[test]
    fn fragments_round_trip_through_formulas(frag in common::fragment()) {
        prop_assert_eq!(FragmentSpec::from_formula(&frag.formula()).unwrap().formula(), frag.formula());
    }
}
