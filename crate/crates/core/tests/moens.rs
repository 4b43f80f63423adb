use fibcat::constructions::artin_gluing;
use fibcat::corpus::{sample_functor, sample_gluing};
use fibcat::fincat::{is_lex_functor, preserves_pullbacks};
use fibcat::moens::{
    bcc_via_transport, is_generalized_moens, is_moens, moens_consequences, satisfies_bcc,
    satisfies_dual_bcc, zawadowski_equiv_gen_moens,
};
use fibcat::theorem::{psi, roundtrip_phi_psi, roundtrip_psi_phi, TheoremMode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn three_bcc_forms_agree(seed in any::<u64>(), n in 2usize..6) {
        let p = sample_gluing(seed, n).unwrap();
        let a = satisfies_bcc(&p).unwrap();
        let b = satisfies_dual_bcc(&p).unwrap();
        let c = bcc_via_transport(&p).unwrap();
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(b.holds, c.holds);
        for v in [&a, &b, &c] {
            prop_assert!(v.recheck(&p).unwrap());
        }
    }

    #[test]
    fn gluing_bcc_tracks_pullback_preservation(seed in any::<u64>(), n in 2usize..6) {
        let f = sample_functor(seed, n).unwrap();
        let g = artin_gluing(&f).unwrap();
        prop_assert_eq!(satisfies_bcc(&g.fibration).unwrap().holds, preserves_pullbacks(&f).unwrap());
    }

    #[test]
    fn gluings_of_terminal_preserving_maps_are_generalized_moens(seed in any::<u64>(), n in 2usize..6) {
        let p = sample_gluing(seed, n).unwrap();
        prop_assert!(is_generalized_moens(&p).unwrap().holds);
        prop_assert!(zawadowski_equiv_gen_moens(&p).unwrap());
    }

    #[test]
    fn moens_instances_have_all_consequences(seed in any::<u64>(), n in 2usize..6) {
        let p = sample_gluing(seed, n).unwrap();
        if is_moens(&p).unwrap().holds {
            prop_assert!(moens_consequences(&p).unwrap().all_hold());
        } else {
            prop_assert!(moens_consequences(&p).is_err());
        }
    }

    #[test]
    fn round_trips_recheck(seed in any::<u64>(), n in 2usize..5) {
        let f = sample_functor(seed, n).unwrap();
        let mode = if is_lex_functor(&f).unwrap() { TheoremMode::Moens } else { TheoremMode::Generalized };
        let r = roundtrip_phi_psi(&f, mode).unwrap();
        prop_assert!(r.verdict && r.recheck());
        let g = psi(&f, mode).unwrap();
        let r = roundtrip_psi_phi(&g.fibration, mode).unwrap();
        prop_assert!(r.verdict && r.recheck());
    }
}
