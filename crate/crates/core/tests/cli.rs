use std::process::Command;

use picmod::cli::{run_with_env, to_canonical_json};
use serde_json::{json, Value};

fn call(args: &[&str], env: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("picmod").chain(args.iter().copied());
    let code = run_with_env(argv, env, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn text(args: &[&str]) -> String {
    let (code, out, err) = call(args, None);
    assert_eq!(code, 0, "{args:?}: {err}");
    out.trim_end().to_string()
}

fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&text(&full)).unwrap()
}

fn index(family: &str, rank: u64, rep: &str) -> u64 {
    text(&[
        "index",
        "--family",
        family,
        "--rank",
        &rank.to_string(),
        "--rep",
        rep,
    ])
    .parse()
    .unwrap()
}

fn dim(family: &str, rank: u64, rep: &str) -> u64 {
    text(&[
        "dim",
        "--family",
        family,
        "--rank",
        &rank.to_string(),
        "--rep",
        rep,
    ])
    .parse()
    .unwrap()
}

#[test]
fn documented_invocations() {
    let report = json_of(&[
        "classify", "--group", "PSp", "--param", "6", "--degree", "0", "--genus", "2",
    ]);
    assert_eq!(report["coarse"]["det_unit_exponent"], json!(4));
    assert_eq!(index("A", 6, "sym(2,std)*ext(5,std)"), 329);
    assert_eq!(
        text(&[
            "descent",
            "--weil",
            "r=2",
            "genus=2",
            "--power-of-form",
            "3",
            "--at",
            "2"
        ]),
        "descends_at_r: false\ndescends_at_2r: true"
    );
    assert_eq!(
        text(&["components", "--group", "PSO", "--param", "8"]),
        "[1, -1, ε, -ε]"
    );
    assert_eq!(
        json_of(&["components", "--group", "PSO", "--param", "8"])["components"],
        json!(["1", "-1", "ε", "-ε"])
    );
}

#[test]
fn root_system_data_through_the_adjoint() {
    // |Δ⁺| = (dim g − rank)/2 and h∨ = d_Ad/2
    for (family, rank, positive) in [("A", 2, 3), ("D", 4, 12), ("G2", 2, 6)] {
        assert_eq!(
            (dim(family, rank, "adj") - rank) / 2,
            positive,
            "{family}{rank}"
        );
    }
    assert_eq!(dim("A", 2, "adj"), 8);
    assert_eq!(dim("D", 4, "adj"), 28);
    for r in 2..=8 {
        assert_eq!(index("A", r - 1, "adj") / 2, r);
    }
    for l in 2..=6 {
        assert_eq!(index("C", l, "adj") / 2, l + 1);
        assert_eq!(index("D", l, "adj") / 2, 2 * l - 2);
        assert_eq!(dim("C", l, "std"), 2 * l);
    }
    assert_eq!(dim("A", 3, "ext(2,std)"), 6);
    assert_eq!(dim("G2", 2, "std"), 7);
    assert_eq!(dim("C", 2, "std"), 4);
}

#[test]
fn index_table() {
    for r in 2..=8 {
        assert_eq!(index("A", r - 1, "adj"), 2 * r);
    }
    for l in 2..=6 {
        assert_eq!(index("C", l, "ext(2,std)"), 2 * l - 2);
    }
    for r in 3..=7u64 {
        let rep = format!("sym(2,std)*ext({},std)", r - 2);
        assert_eq!(index("A", r - 1, &rep), r * r * r - 2 * r);
    }
    assert_eq!(index("A", 5, "sym(3,std)"), 36);
    for l in 3..=6 {
        assert_eq!(index("D", l, "std"), 2);
    }
}

#[test]
fn center_characters() {
    for r in 2..=6u64 {
        let ch = &json_of(&[
            "dim",
            "--family",
            "A",
            "--rank",
            &(r - 1).to_string(),
            "--rep",
            "adj",
        ])["center_character"];
        assert_eq!(ch["residues"], json!([0]));
    }
    let ch = &json_of(&[
        "dim",
        "--family",
        "A",
        "--rank",
        "5",
        "--rep",
        "sym(1,std)*ext(2,std)",
    ])["center_character"];
    assert_eq!(ch, &json!({"moduli": [6], "residues": [3]}));
    let ch = &json_of(&["dim", "--family", "C", "--rank", "3", "--rep", "ext(2,std)"])
        ["center_character"];
    assert_eq!(ch["residues"], json!([0]));
    let ch =
        &json_of(&["dim", "--family", "A", "--rank", "1", "--rep", "std+triv"])["center_character"];
    assert_eq!(ch, &Value::Null);
}

#[test]
fn restriction_of_weil_pairing() {
    let rep = json_of(&["oracle", "restrict", "--r", "4", "--s", "2"]);
    assert_eq!(rep["equal"], json!(true));
    assert_eq!(rep["expected"]["matrix"], json!([["0", "0"], ["0", "0"]]));
    let rep = json_of(&["oracle", "restrict", "--r", "6", "--s", "3"]);
    assert_eq!(rep["equal"], json!(true));
    assert_eq!(
        rep["restriction"]["matrix"],
        json!([["0", "2/3"], ["1/3", "0"]])
    );
    let rep = json_of(&["oracle", "restrict", "--r", "5", "--s", "5", "--genus", "2"]);
    assert_eq!(rep["restriction"], rep["expected"]);
}

#[test]
fn descent_queries() {
    for g in 1..=3 {
        for l in 0..4 {
            let rep = json_of(&[
                "descent",
                "--weil",
                "r=2",
                &format!("genus={g}"),
                "--power-of-form",
                &l.to_string(),
                "--at",
                "2",
            ]);
            assert_eq!(rep["descends_at_r"], json!(l % 2 == 0));
            assert_eq!(rep["descends_at_2r"], json!(true));
        }
    }
    let rep = json_of(&[
        "descent",
        "--weil",
        "r=5",
        "genus=1",
        "--power-of-form",
        "-1",
        "--at",
        "5",
    ]);
    assert_eq!(rep["descends_at_r"], json!(true));
    let rep = json_of(&[
        "descent",
        "--weil",
        "r=4",
        "--power-of-form",
        "0",
        "--at",
        "4",
    ]);
    assert_eq!(rep["descends_at_r"], json!(true));

    let rep = json_of(&["descent", "--weil", "r=2", "--at", "2", "--check"]);
    assert_eq!(
        (&rep["descends_at_r"], &rep["bruteforce_at_r"]),
        (&json!(false), &json!(false))
    );
    let rep = json_of(&[
        "descent",
        "--weil",
        "r=2",
        "genus=2",
        "--power-of-form",
        "2",
        "--check",
    ]);
    assert_eq!(
        (&rep["descends_at_r"], &rep["bruteforce_at_r"]),
        (&json!(true), &json!(true))
    );
    let rep = json_of(&["descent", "--weil", "r=3", "--check"]);
    assert_eq!(
        (&rep["descends_at_r"], &rep["bruteforce_at_r"]),
        (&json!(true), &json!(true))
    );
    assert!(json_of(&["descent", "--weil", "r=3"])
        .get("bruteforce_at_r")
        .is_none());
}

#[test]
fn descent_of_group_forms() {
    for r in 2..=7u64 {
        let rep = json_of(&[
            "descent",
            "--group",
            "PGL",
            "--param",
            &r.to_string(),
            "--genus",
            "1",
            "--check",
        ]);
        assert_eq!(rep["r"], json!(r));
        assert_eq!(rep["descends_at_r"], json!(r % 2 == 1), "PGL({r})");
        assert_eq!(rep["bruteforce_at_r"], rep["descends_at_r"]);
    }
    for l in 2..=4u64 {
        let n = (2 * l).to_string();
        let rep = json_of(&["descent", "--group", "PSp", "--param", &n, "--genus", "2"]);
        assert_eq!(rep["descends_at_r"], json!(l % 2 == 0), "PSp({n})");
    }
    let (code, _, err) = call(
        &["descent", "--group", "Spin", "--param", "7", "--genus", "2"],
        None,
    );
    assert_eq!(code, 1);
    assert!(err.starts_with("error: NoFormKnown"), "{err}");
}

#[test]
fn hecke_characters() {
    let h = json_of(&["oracle", "hecke", "--r", "2", "--s", "2", "--h", "1"]);
    assert_eq!(
        (&h["det_character"], &h["canonical_descends"]),
        (&json!(-1), &json!(false))
    );
    let h = json_of(&["oracle", "hecke", "--r", "4", "--s", "2", "--h", "1"]);
    assert_eq!(
        (&h["det_character"], &h["canonical_descends"]),
        (&json!(1), &json!(true))
    );
    for r in 1..=6 {
        for h in 0..4 {
            let v = json_of(&[
                "oracle",
                "hecke",
                "--r",
                &r.to_string(),
                "--s",
                "1",
                "--h",
                &h.to_string(),
            ]);
            assert_eq!(v["det_character"], json!(1));
        }
    }
    let h = json_of(&["oracle", "hecke", "--r", "6", "--s", "3", "--h", "5"]);
    assert_eq!(h["canonical_descends"], json!(true));
}

#[test]
fn fundamental_groups_and_components() {
    let torsion = |group: &str, param: &str| {
        json_of(&[
            "classify", "--group", group, "--param", param, "--genus", "1",
        ])["stack"]["torsion_invariants"]
            .clone()
    };
    assert_eq!(torsion("PSO", "8"), json!([2, 2, 2, 2]));
    assert_eq!(torsion("PSO", "6"), json!([4, 4]));
    assert_eq!(torsion("SLmod", "6,3"), json!([3, 3]));
    assert_eq!(
        text(&["components", "--group", "PSO", "--param", "6"]),
        "[1, -1, ε, -ε]"
    );
    assert_eq!(
        text(&["components", "--group", "SLmod", "--param", "6,3"]),
        "[0, 2, 4]"
    );
    assert_eq!(text(&["components", "--group", "G2"]), "[1]");
}

#[test]
fn picard_groups() {
    let classify = |group: &str, param: &str, degree: &str, genus: &str| {
        let mut args = vec!["classify", "--group", group, "--genus", genus];
        if !param.is_empty() {
            args.extend(["--param", param]);
        }
        if !degree.is_empty() {
            args.extend(["--degree", degree]);
        }
        json_of(&args)
    };

    let r = classify("PGL", "5", "2", "3");
    assert_eq!(r["stack"]["torsion_invariants"], json!(vec![5; 6]));
    assert_eq!(r["stack"]["det_generator_exponent"], json!(5));
    let r = classify("PSp", "8", "1", "2");
    assert_eq!(r["stack"]["torsion_invariants"], json!(vec![2; 4]));
    assert_eq!(r["stack"]["det_generator_exponent"], json!(1));
    let r = classify("SLmod", "6,2", "0", "2");
    assert_eq!(r["stack"]["torsion_invariants"], json!(vec![2; 4]));
    assert_eq!(r["stack"]["det_generator_exponent"], json!(2));

    // ε_G through the adjoint stack exponents
    assert_eq!(
        classify("PSp", "6", "0", "2")["stack"]["det_generator_exponent"],
        json!(2)
    );
    assert_eq!(
        classify("PSO", "8", "1", "2")["stack"]["det_generator_exponent"],
        json!(1)
    );
    assert_eq!(
        classify("PGL", "7", "0", "2")["coarse"]["det_unit_exponent"],
        json!(7)
    );

    let r = classify("PGL", "3", "1", "2");
    assert_eq!(r["coarse"]["theta_unit_exponent"], json!(1));
    assert_eq!(r["coarse"]["det_unit_exponent"], json!(3));
    assert_eq!(
        classify("PSp", "6", "0", "2")["coarse"]["det_unit_exponent"],
        json!(4)
    );
    assert_eq!(
        classify("Spin", "11", "", "2")["coarse"]["det_unit_exponent"],
        json!(1)
    );
    let r = classify("PSO", "8", "-eps", "2");
    assert_eq!(r["coarse"]["theta_unit_exponent"], json!(1));
    assert_eq!(r["coarse"]["det_unit_exponent"], json!(2));
    assert_eq!(
        classify("Spin", "4", "", "2")["coarse"]["structure"],
        json!("rank2_free")
    );
    assert_eq!(
        classify("SLmod", "6,2", "3", "2")["coarse"]["theta_unit_exponent"],
        json!(2)
    );

    let r = classify("PGL", "2", "1", "2");
    assert!(r["caveats"]
        .as_array()
        .unwrap()
        .contains(&json!("genus2_pgl2")));
    let r = classify("PGL", "3", "0", "2");
    assert_eq!(r["stack"]["torsion_invariants"], json!(vec![3; 4]));
    assert_eq!(r["stack"]["det_generator_exponent"], json!(3));
    assert_eq!(r["coarse"]["det_unit_exponent"], json!(3));
    let r = classify("G2", "", "", "4");
    assert_eq!(r["stack"]["torsion_invariants"], json!([]));
    assert_eq!(r["stack"]["det_generator_exponent"], json!(1));
    assert_eq!(r["coarse"]["det_unit_exponent"], json!(1));

    let r = classify("HalfSpin", "16", "", "2");
    assert_eq!(r["coarse"]["structure"], json!("unknown"));
    assert_eq!(r["coarse"]["det_unit_exponent"], json!("unknown"));
    assert_eq!(
        classify("SLmod", "8,4", "2", "2")["coarse"]["structure"],
        json!("unknown")
    );
}

#[test]
fn oracle_runs() {
    let rep = json_of(&["oracle", "dichotomy"]);
    assert!(rep["cases"].as_u64().unwrap() >= 200);
    assert_eq!(rep["failures"], json!([]));

    let gcd =
        |group: &str, param: &str| json_of(&["oracle", "gcd", "--group", group, "--param", param]);
    let r = gcd("PGL", "7");
    assert_eq!((&r["gcd"], &r["e_g"]), (&json!(7), &json!(7)));
    let r = gcd("PSp", "6");
    assert_eq!(
        (&r["gcd"], &r["e_g"], &r["agrees"]),
        (&json!(4), &json!(4), &json!(true))
    );
    let r = gcd("SLmod", "6,3");
    let indices: Vec<u64> = r["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["index"].as_u64().unwrap())
        .collect();
    assert_eq!(indices, [12, 39, 69, 36]);
    assert_eq!(r["e_g"], json!(3));
    let all = json_of(&["oracle", "gcd"]);
    assert!(all
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["agrees"] == json!(true) || r["determined"] == json!(false)));

    let rho = |r: &str, s: &str| json_of(&["oracle", "rho-p", "--r", r, "--s", s]);
    let rep = rho("4", "2");
    assert_eq!(
        (&rep["indices"], &rep["weighted_sum"]),
        (&json!([8, 6]), &json!(20))
    );
    assert_eq!(
        (&rep["gcd"], &rep["gcd_divides_bound"]),
        (&json!(2), &json!(true))
    );
    let rep = rho("3", "3");
    assert_eq!(
        (&rep["indices"], &rep["weighted_sum"]),
        (&json!([6, 21, 15]), &json!(93))
    );
    let rep = rho("2", "1");
    assert_eq!(
        (&rep["indices"], &rep["weighted_sum"]),
        (&json!([1]), &json!(1))
    );

    assert_eq!(
        text(&["oracle", "parity", "--basis", "1,2,4", "--chi", "4"]),
        "parity: 1\nisotropic: false"
    );
    for l in 0..16 {
        let out = text(&[
            "oracle",
            "parity",
            "--basis",
            "1,4,2",
            "--chi",
            "4",
            "--linear",
            &l.to_string(),
        ]);
        assert_eq!(out, "parity: 0\nisotropic: true");
    }
    assert_eq!(
        text(&["oracle", "parity", "--basis", "0,0,0", "--chi", "1"]),
        "parity: 0\nisotropic: true"
    );
    let (code, _, err) = call(
        &[
            "oracle",
            "parity",
            "--basis",
            "1,2,4",
            "--chi",
            "4",
            "--q",
            "1000000000000000",
        ],
        None,
    );
    assert_eq!(code, 1, "{err}");
    assert!(err.starts_with("error: NotQuadraticRefinement"));

    assert_eq!(text(&["oracle", "f4"]), "6");
    let f4 = json_of(&["oracle", "f4"]);
    assert_eq!(f4["ratio"], json!(3));
    assert_eq!(f4["not_divisible_by_2"], json!(true));
}

#[test]
fn json_round_trips() {
    let invocations: &[&[&str]] = &[
        &[
            "classify", "--group", "PSp", "--param", "6", "--degree", "1",
        ],
        &["classify", "--group", "HalfSpin", "--param", "16"],
        &[
            "classify", "--group", "PGL", "--param", "2", "--degree", "1",
        ],
        &["index", "--family", "G2", "--rank", "2", "--rep", "std"],
        &[
            "dim",
            "--family",
            "B",
            "--rank",
            "3",
            "--rep",
            "ext(2,std)+triv",
        ],
        &[
            "descent",
            "--weil",
            "r=4",
            "genus=2",
            "--power-of-form",
            "2",
            "--check",
        ],
        &["components", "--group", "PSO", "--param", "8"],
        &["oracle", "gcd", "--group", "PSO", "--param", "8"],
        &["oracle", "rho-p", "--r", "6", "--s", "6"],
        &[
            "oracle", "restrict", "--r", "12", "--s", "4", "--genus", "3",
        ],
    ];
    for args in invocations {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = text(&full);
        let value: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(to_canonical_json(&value), out, "{args:?}");
        assert!(!out.contains('.'), "no floats: {out}");
    }
}

#[test]
fn usage_and_domain_errors() {
    let cases: &[(&[&str], i32, &str)] = &[
        (
            &["classify", "--group", "PGL", "--param", "4", "--bogus"],
            2,
            "--bogus",
        ),
        (&["classify", "--param", "4"], 2, "--group"),
        (
            &["index", "--family", "E", "--rank", "6", "--rep", "adj"],
            2,
            "--family",
        ),
        (
            &["index", "--family", "A", "--rank", "x", "--rep", "adj"],
            2,
            "--rank",
        ),
        (
            &["index", "--family", "A", "--rank", "3", "--rep", "sym(2,"],
            2,
            "--rep",
        ),
        (
            &[
                "index", "--family", "A", "--rank", "3", "--rep", "adj", "--format", "xml",
            ],
            2,
            "--format",
        ),
        (
            &["classify", "--group", "SLmod", "--param", "6,x"],
            2,
            "--param",
        ),
        (&["descent", "--weil", "r2"], 2, "--weil"),
        (
            &["descent", "--weil", "r=2", "--group", "PGL"],
            2,
            "--group",
        ),
        (
            &["oracle", "parity", "--basis", "1,2", "--chi", "1"],
            2,
            "--basis",
        ),
        (
            &[
                "classify", "--group", "PGL", "--param", "4", "--degree", "x",
            ],
            1,
            "error: InvalidDegree",
        ),
        (
            &[
                "classify", "--group", "SLmod", "--param", "6,3", "--degree", "1",
            ],
            1,
            "error: InvalidDegree",
        ),
        (
            &["classify", "--group", "Foo", "--param", "4"],
            1,
            "error: InvalidSpec",
        ),
        (
            &["classify", "--group", "PGL", "--param", "4", "--genus", "0"],
            1,
            "error: InvalidSpec",
        ),
        (
            &["index", "--family", "G2", "--rank", "3", "--rep", "adj"],
            1,
            "error: UnsupportedRank",
        ),
        (
            &[
                "index",
                "--family",
                "A",
                "--rank",
                "2",
                "--rep",
                "sym(9,adj)",
                "--max-dim",
                "1000",
            ],
            1,
            "error: DimensionCapExceeded",
        ),
        (
            &["descent", "--weil", "r=2", "--at", "3"],
            1,
            "error: PreconditionViolated",
        ),
        (
            &["oracle", "hecke", "--r", "6", "--s", "4", "--h", "1"],
            1,
            "error: NotADivisor",
        ),
        (
            &["oracle", "rho-p", "--r", "12", "--s", "2"],
            1,
            "error: InvalidInput",
        ),
    ];
    for (args, expected, needle) in cases {
        let (code, out, err) = call(args, None);
        assert_eq!(code, *expected, "{args:?}: {err}");
        assert!(out.is_empty());
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn max_dim_flag_overrides_environment() {
    let args = ["dim", "--family", "A", "--rank", "9", "--rep", "adj"];
    assert_eq!(call(&args, Some("10")).0, 1);
    assert_eq!(call(&args, None).0, 0);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--max-dim", "1000"]);
    assert_eq!(call(&with_flag, Some("10")).0, 0);
    let (code, _, err) = call(&args, Some("lots"));
    assert_eq!(code, 2);
    assert!(err.contains("PICMOD_MAX_DIM"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_picmod");
    let out = Command::new(bin)
        .args([
            "index",
            "--family",
            "A",
            "--rank",
            "6",
            "--rep",
            "sym(2,std)*ext(5,std)",
        ])
        .env_remove("PICMOD_MAX_DIM")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "329");

    let out = Command::new(bin)
        .args(["dim", "--family", "A", "--rank", "9", "--rep", "adj"])
        .env("PICMOD_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DimensionCapExceeded"));

    let out = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
