use std::sync::Arc;

use fibcat::constructions::{arrow_category, artin_gluing, free_cocartesian, grothendieck};
use fibcat::corpus::{random_grothendieck, random_lattice, random_monotone, random_poset, rng};
use fibcat::fincat::{is_lex_category, terminal_object, Functor};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn random_posets_are_categories(seed in any::<u64>(), n in 1usize..7, density in 0.0f64..1.0) {
        let c = random_poset(n, density, &mut rng(seed));
        prop_assert!(c.check_laws().is_ok());
        prop_assert!(c.is_thin());
        prop_assert!(c.opposite().opposite().same_as(&c));
    }

    #[test]
    fn random_lattices_are_lex(seed in any::<u64>(), n in 1usize..8) {
        let c = random_lattice(n, &mut rng(seed));
        prop_assert!(c.check_laws().is_ok());
        prop_assert!(c.num_objects() <= n);
        prop_assert!(is_lex_category(&c));
        prop_assert!(terminal_object(&c).is_some());
    }

    #[test]
    fn arrow_categories_are_categories(seed in any::<u64>(), n in 1usize..6) {
        let c = Arc::new(random_poset(n, 0.5, &mut rng(seed)));
        let ar = arrow_category(&c).unwrap();
        prop_assert!(ar.cod.source().check_laws().is_ok());
        prop_assert!(ar.cod.check().is_ok());
        prop_assert_eq!(ar.cod.source().num_objects(), c.num_morphisms());
    }

    #[test]
    fn gluings_and_free_fibrations_are_categories(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let l = Arc::new(random_lattice(n, &mut r));
        let m = Arc::new(random_lattice(n, &mut r));
        let f = random_monotone(&l, &m, true, &mut r).unwrap();
        prop_assert!(f.check().is_ok());
        let g = artin_gluing(&f).unwrap();
        prop_assert!(g.fibration.total().check_laws().is_ok());
        prop_assert!(g.fibration.proj().check().is_ok());
        let fc = free_cocartesian(g.fibration.proj()).unwrap();
        prop_assert!(fc.fibration.total().check_laws().is_ok());
        prop_assert!(fc.fibration.is_cocartesian_fibration());
    }

    #[test]
    fn grothendieck_totals_are_categories(seed in any::<u64>(), len in 1usize..5) {
        let d = random_grothendieck(len, &mut rng(seed)).unwrap();
        let g = grothendieck(&d).unwrap();
        prop_assert!(g.fibration.total().check_laws().is_ok());
        prop_assert!(g.fibration.is_cocartesian_fibration());
        let sizes: usize = d.fibers.iter().map(|f| f.num_objects()).sum();
        prop_assert_eq!(g.fibration.total().num_objects(), sizes);
    }

    #[test]
    fn functor_composition_is_associative(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let a = Arc::new(random_lattice(n, &mut r));
        let b = Arc::new(random_lattice(n, &mut r));
        let c = Arc::new(random_lattice(n, &mut r));
        let f = random_monotone(&a, &b, true, &mut r).unwrap();
        let g = random_monotone(&b, &c, true, &mut r).unwrap();
        let h = random_monotone(&c, &a, true, &mut r).unwrap();
        let left = f.then(&g).unwrap().then(&h).unwrap();
        let right = f.then(&g.then(&h).unwrap()).unwrap();
        prop_assert!(left.same_as(&right));
        prop_assert!(Functor::identity(a.clone()).then(&f).unwrap().same_as(&f));
    }
}
