//! Regenerates the certificates in `fixtures/` from their build scripts.
//!
//! cargo run -p origami-forge --example write_fixtures

use std::path::Path;

use origami_forge::constructions::{MinimalKind, PairKind};
use origami_forge::targeting::{certify, replay, Step};

fn fixtures() -> Vec<(&'static str, Vec<Step>)> {
    use Step::*;
    vec![
        ("hyp_minimal_g3_d5", vec![Minimal { kind: MinimalKind::Hyp, genus: 3, degree: 5 }]),
        ("odd_minimal_g4_d7", vec![Minimal { kind: MinimalKind::Odd, genus: 4, degree: 7 }]),
        ("even_minimal_g4_d7", vec![Minimal { kind: MinimalKind::Even, genus: 4, degree: 7 }]),
        ("hyp_pair_g4_d4", vec![EqualPair { kind: PairKind::Hyp, genus: 4, degree: 4 }]),
        ("cyclic_pair_g5_d5", vec![EqualPair { kind: PairKind::NonHyp, genus: 5, degree: 5 }]),
        ("even_pair_g5_d6", vec![EqualPair { kind: PairKind::NonHypEven, genus: 5, degree: 6 }]),
        ("odd_orders_5_3", vec![Minimal { kind: MinimalKind::Odd, genus: 4, degree: 8 }, AddOddPair { k: 3, kp: 2 }]),
        ("odd_pair_base_3_2_d6", vec![OddPairBase { m: 3, n: 2, degree: 6 }]),
        ("stratum_1_2_3_d4", vec![OddPairBase { m: 2, n: 1, degree: 4 }, AddEvenZero { k: 1 }]),
        (
            "stratum_2_4_6_odd_d7",
            vec![Minimal { kind: MinimalKind::Even, genus: 4, degree: 7 }, AddEvenZero { k: 2 }, AddEvenZero { k: 1 }],
        ),
    ]
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("fixtures directory");
    for (name, script) in fixtures() {
        let surface = replay(&script).unwrap_or_else(|e| panic!("{}: {}", name, e));
        let cert = certify(surface, script).unwrap_or_else(|e| panic!("{}: {}", name, e));
        let path = dir.join(format!("{}.json", name));
        std::fs::write(&path, format!("{}\n", cert.to_json())).expect("write fixture");
        println!("{} {} {} degree {}", name, cert.stratum, cert.component, cert.degree);
    }
}
