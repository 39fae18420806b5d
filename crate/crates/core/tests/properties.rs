use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use modpcoh::cli::dispatch_to;
use modpcoh::cohomology::{as_normal_form, form_is_zero, reciprocity_check, CohClass};
use modpcoh::factor::partial_fractions;
use modpcoh::form::{exterior_d, expand, kato_rewrite_random, RewriteLevel, SymbolSum};
use modpcoh::gf::Gf;
use modpcoh::parse;
use modpcoh::quadform::{point_count, revoy_move, Move, QuadForm};
use modpcoh::sample;
use modpcoh::suite::splitting_search;
use modpcoh::tower::Tower;
use modpcoh::upoly::Field;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_sum(k: &Tower, seed: u64, arity: usize) -> SymbolSum {
    let mut r = rng(seed);
    let mut s = SymbolSum::zero(k, arity);
    for _ in 0..2 {
        let args = (0..arity).map(|_| sample::nonzero_rational(k, &mut r, 1)).collect();
        s.push(sample::rational(k, &mut r, 1), args).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_field_axioms(which in 0usize..3, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (p, m) = [(2, 3), (3, 2), (5, 1)][which];
        let gf = Gf::new(p, m).unwrap();
        let (a, b, c) = (a % gf.q(), b % gf.q(), c % gf.q());
        prop_assert_eq!(gf.mul(a, gf.add(b, c)), gf.add(gf.mul(a, b), gf.mul(a, c)));
        prop_assert_eq!(gf.mul(gf.mul(a, b), c), gf.mul(a, gf.mul(b, c)));
        prop_assert_eq!(gf.add(a, gf.neg(a)), 0);
        prop_assert_eq!(gf.frobenius(gf.add(a, b)), gf.add(gf.frobenius(a), gf.frobenius(b)));
        prop_assert_eq!(gf.pth_root(gf.frobenius(a)), a);
        if a != 0 {
            prop_assert_eq!(gf.mul(a, gf.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn tower_field_laws(seed in any::<u64>()) {
        let k = Tower::gf_vars(3, 1, &["x", "t"]).unwrap();
        let mut r = rng(seed);
        let a = sample::rational(&k, &mut r, 2);
        let b = sample::nonzero_rational(&k, &mut r, 2);
        let c = sample::rational(&k, &mut r, 1);
        prop_assert_eq!(k.div(&k.mul(&a, &b), &b).unwrap(), a.clone());
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.pth_root(&k.frobenius(&a)), Some(a.clone()));
        prop_assert_eq!(parse::element(&k, &k.format(&a)).unwrap(), a);
    }

    #[test]
    fn partial_fractions_recombine(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let k = Tower::gf_vars(p, 1, &["t"]).unwrap();
        let mut r = rng(seed);
        let a = k.div(&sample::poly(&k, &mut r, 5), &sample::nonzero_poly(&k, &mut r, 4)).unwrap();
        let pf = partial_fractions(&k, &a).unwrap();
        prop_assert_eq!(pf.recombine(&k), a);
    }

    #[test]
    fn expand_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let (a, b) = (random_sum(&k, s1, 1), random_sum(&k, s2, 1));
        prop_assert_eq!(expand(&a.concat(&b)), expand(&a).add(&expand(&b)));
        prop_assert!(expand(&a.sub(&a)).is_zero());
    }

    #[test]
    fn d_squared_is_zero(seed in any::<u64>()) {
        let k = Tower::gf_vars(3, 1, &["x", "y", "z"]).unwrap();
        let w = expand(&random_sum(&k, seed, 1));
        prop_assert!(exterior_d(&exterior_d(&w)).is_zero());
    }

    #[test]
    fn symbol_rewrites_keep_the_form(seed in any::<u64>(), steps in 1usize..6) {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let s = random_sum(&k, seed, 2);
        let r = kato_rewrite_random(&s, seed ^ 1, steps, RewriteLevel::Forms);
        prop_assert_eq!(expand(&r), expand(&s));
        prop_assert_eq!(parse::symbol_sum(&k, &s.to_string()).unwrap(), s);
    }

    #[test]
    fn cohomology_rewrites_keep_the_class(seed in any::<u64>()) {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let s = random_sum(&k, seed, 1);
        let r = kato_rewrite_random(&s, seed ^ 2, 3, RewriteLevel::Cohomology);
        prop_assert!(!form_is_zero(&expand(&s.sub(&r))).is_nonzero());
    }

    #[test]
    fn normal_form_is_a_representative(seed in any::<u64>()) {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let mut r = rng(seed);
        let a = sample::rational(&k, &mut r, 3);
        let u = sample::rational(&k, &mut r, 2);
        let nf = as_normal_form(&k, &a).unwrap();
        prop_assert!(splitting_search(&k, &k.sub(&a, &nf.rep)));
        let shifted = as_normal_form(&k, &k.add(&a, &k.wp(&u))).unwrap();
        prop_assert_eq!(shifted.verdict.is_zero(), nf.verdict.is_zero());
    }

    #[test]
    fn moves_preserve_point_counts(seed in any::<u64>()) {
        let k = Tower::gf_vars(2, 2, &[]).unwrap();
        let mut r = rng(seed);
        let blocks = (0..2).map(|_| (sample::constant(&k, &mut r), sample::constant(&k, &mut r))).collect();
        let q = QuadForm::new(&k, blocks, None).unwrap();
        let beta = sample::nonzero_poly(&k, &mut r, 0);
        for mv in [Move::A(0), Move::B(1, beta.clone()), Move::C(0, beta.clone()), Move::D(1, beta)] {
            prop_assert_eq!(point_count(&revoy_move(&q, &mv).unwrap()), point_count(&q));
        }
        prop_assert_eq!(QuadForm::parse(&k, &q.to_string()).unwrap(), q);
    }

    #[test]
    fn residues_sum_to_zero(seed in any::<u64>()) {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let mut r = rng(seed);
        let a = k.lift(sample::nonzero_poly(&k.base(), &mut r, 2));
        let b = [0, 1].iter().fold(k.one(), |acc, &c| {
            let f = k.add(&k.t(), &k.from_gf(c));
            k.mul(&acc, &k.powi(&f, (seed >> (c * 3)) as i64 % 3 - 1).unwrap())
        });
        let c = CohClass::additive(SymbolSum::single(&k, a, vec![b]).unwrap());
        prop_assert!(reciprocity_check(&c).unwrap());
    }
}

#[test]
fn record_output_is_deterministic() {
    let argv = ["modpcoh", "--records", "--seed", "9", "suite", "normal-form", "--trials", "20"];
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = dispatch_to(argv, &mut out, &mut err);
        (code, out)
    };
    let (c1, o1) = run();
    let (c2, o2) = run();
    assert_eq!((c1, &o1), (c2, &o2));
    assert!(String::from_utf8(o1).unwrap().ends_with("suite=normal-form pass=20 fail=0 unknown=0 seed=9\n"));
}

#[test]
fn usage_errors_exit_three() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(dispatch_to(["modpcoh", "iszero", "--field", "GF(6)", "--class", "[1]"], &mut out, &mut err), 3);
    assert!(String::from_utf8(err).unwrap().contains("<field>"));
}
