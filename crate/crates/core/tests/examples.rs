//! Every runnable example, executed as a test.

mod finite_fields {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/finite_fields.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod symbols_and_forms {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/symbols_and_forms.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod residues {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/residues.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod artin_schreier {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/artin_schreier.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod quadratic_forms {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quadratic_forms.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod invariants {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/invariants.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod divided_powers {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/divided_powers.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod etale_discriminant {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/etale_discriminant.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod cli_tour {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_tour.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}
