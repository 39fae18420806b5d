//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use modpcoh::suite::{
    b_lambda_invariance, classify, cyclic, divided_powers, etale, filtration, identities, normal_form, reciprocity,
    revoy_invariance, SuiteReport,
};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    /// Largest tolerated fraction of Unknown trials.
    max_unknown: f64,
    run: fn() -> SuiteReport,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "orbit partition equals (dim, Arf) over GF(2), GF(4); 10/6 split",
            limit: secs(120),
            max_unknown: 0.0,
            run: || classify(4).expect("classification"),
        },
        Criterion {
            id: 2,
            title: "cancellation failure and Pfister sum identity over GF(2), GF(4), GF(8)",
            limit: secs(60),
            max_unknown: 0.0,
            run: || identities().expect("identities"),
        },
        Criterion {
            id: 3,
            title: "disc and clifford invariant under moves A-D, 1000 trials",
            limit: secs(300),
            max_unknown: 0.01,
            run: || revoy_invariance(1000, SEED),
        },
        Criterion {
            id: 4,
            title: "b_lambda invariant under moves on trivial-disc forms over GF(2)(x)(t)",
            limit: secs(300),
            max_unknown: 0.0,
            run: || b_lambda_invariance(100, SEED),
        },
        Criterion {
            id: 5,
            title: "filtration corpus; is_zero_global agrees with bounded membership",
            limit: secs(300),
            max_unknown: 1.0,
            run: || filtration(200, SEED),
        },
        Criterion {
            id: 6,
            title: "residues of tame classes sum to zero, n in {1,2}",
            limit: secs(120),
            max_unknown: 0.0,
            run: || reciprocity(200, SEED),
        },
        Criterion {
            id: 7,
            title: "[t]w vanishes after t = z^2 - z, 50 trials",
            limit: secs(300),
            max_unknown: 0.10,
            run: || cyclic(50, SEED),
        },
        Criterion {
            id: 8,
            title: "Artin-Schreier normal form agrees with splitting search, 500 trials",
            limit: secs(60),
            max_unknown: 0.0,
            run: || normal_form(500, SEED),
        },
        Criterion {
            id: 9,
            title: "divided powers: convolution and rewrite independence, 100 trials each",
            limit: secs(60),
            max_unknown: 0.0,
            run: || divided_powers(100, SEED),
        },
        Criterion {
            id: 10,
            title: "etale discriminant: splitting field, class test and parity oracle agree",
            limit: secs(120),
            max_unknown: 0.0,
            run: || etale(6).expect("etale"),
        },
    ]
}

fn main() {
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in criteria() {
        if filter.is_some_and(|f| f != c.id) {
            continue;
        }
        let start = Instant::now();
        let rep = (c.run)();
        let took = start.elapsed();
        let ok = rep.fail == 0 && rep.unknown_rate() <= c.max_unknown && took <= c.limit && rep.total() > 0;
        println!(
            "criterion {:>2} {} pass={} fail={} unknown={} time={:.2}s  {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            rep.pass,
            rep.fail,
            rep.unknown,
            took.as_secs_f64(),
            c.title
        );
        if !ok {
            failed += 1;
            for l in rep.lines.iter().take(10) {
                println!("    {l}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
