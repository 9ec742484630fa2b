use std::collections::BTreeSet;
use std::path::PathBuf;

use serde_json::Value;

use semireal::cli::{run, schema_id, SCHEMA_NAMES};
use semireal::{q, Q};

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn validator(name: &str) -> jsonschema::Validator {
    let path = schema_dir().join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

const JSON_RUNS: &[(&str, &str)] = &[
    ("eval", "eval --real thirds --fuel 6 --format json"),
    ("reduce", "reduce --alpha halves --beta halves --c 2 --fuel 80"),
    ("reduce", "reduce --alpha halves --beta quarter --fuel 80"),
    ("race", "race --alpha halves --beta quarter --fuel 40"),
    ("race", "race --alpha quarter --beta halves --fuel 40"),
    ("cover-transform", "cover-transform --alpha quarter --beta halves --cover around_half --fuel 200 --format json"),
    ("union-bound", "union-bound --intervals dense --weights dense --c 2"),
    ("game", "game --strategy from-cover --real slow_third --cover around_third --epsilon 1/8 --fuel 40"),
    ("game", "game --strategy sum --real quarter --cover around_quarter --real-b near_half --cover-b around_half --epsilon 1 --fuel 40"),
    ("paint", "paint --real omega_default --epsilon 1/4 --fuel 25 --format json"),
    ("wset", "wset --real halves --indices 4,5,6 --epsilon 1/8"),
    ("machine-stats", "machine stats --machine selftimed"),
    ("machine-omega", "machine omega --fuel 5"),
    ("machine-kp", "machine kp --n 99 --fuel 3"),
    ("machine-bp", "machine bp --m 2"),
    ("machine-bpprime", "machine bpprime --m 2"),
    ("machine-t", "machine t --m 2"),
    ("solovay-fn", "solovay-fn --rows rows --format json"),
    ("solovay-ratio", "solovay-ratio --real thirds --terms 8"),
    ("regroup", "regroup --double sample"),
    ("mtilde", "mtilde --double sample --c 2"),
    ("mesh", "mesh --a halves --b omega_default --sum 255/256"),
    ("covermeasure", "covermeasure --real near_half --cover around_half --n 1 --terms 12"),
    ("gap-experiment", "gap-experiment"),
];

fn invoke(line: &str) -> (i32, String, String) {
    let mut args = vec!["semireal"];
    args.extend(line.split_whitespace());
    run(&args)
}

#[test]
fn every_json_output_validates() {
    let mut seen = BTreeSet::new();
    for (name, line) in JSON_RUNS {
        let (code, out, err) = invoke(line);
        assert_eq!(code, 0, "{line}: {err}");
        let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{line}: {e}"));
        assert_eq!(v["schema"], schema_id(name), "{line}");
        let val = validator(name);
        let errors: Vec<String> = val.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{line}: {errors:?}");
        seen.insert(*name);
    }
    let all: BTreeSet<&str> = SCHEMA_NAMES.iter().copied().collect();
    assert_eq!(seen, all, "every schema is exercised");
}

#[test]
fn schema_files_match_names() {
    let files: BTreeSet<String> = std::fs::read_dir(schema_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().trim_end_matches(".schema.json").to_string())
        .collect();
    let names: BTreeSet<String> = SCHEMA_NAMES.iter().map(|s| s.to_string()).collect();
    assert_eq!(files, names);
}

#[test]
fn rationals_round_trip_through_json() {
    for x in [q(0, 1), q(-7, 3), q(255, 256), Q::pow2(-70), q(1, 1)] {
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with('"') && s.contains('/'));
        assert_eq!(serde_json::from_str::<Q>(&s).unwrap(), x);
    }
    let (_, out, _) = invoke("eval --real thirds --fuel 4 --format json");
    let v: Value = serde_json::from_str(&out).unwrap();
    let prefix: Vec<Q> = serde_json::from_value(v["prefix"].clone()).unwrap();
    // 0, 1/3, 1/3 + 1/9, 1/3 + 1/9 + 1/27
    assert_eq!(prefix, vec![q(0, 1), q(1, 3), q(4, 9), q(13, 27)]);
}

#[test]
fn exit_codes() {
    assert_eq!(invoke("no-such-command").0, 2);
    assert_eq!(invoke("machine").0, 2);
    assert_eq!(invoke("union-bound --intervals dense --weights dense --c x").0, 2);
    assert_eq!(invoke("regroup --double sample --format csv").0, 2);
    // Density fails at c = 4: (0, 1/8) carries 3/16 < 2 * 1/8.
    let (code, _, err) = invoke("union-bound --intervals dense --weights dense --c 4");
    assert_eq!(code, 1);
    assert!(err.contains("density"), "{err}");
    let (code, out, _) = invoke("--help");
    assert_eq!(code, 0);
    for cmd in ["eval", "reduce", "race", "cover-transform", "union-bound", "game", "paint", "wset", "machine", "solovay-fn", "solovay-ratio", "regroup", "mtilde", "mesh", "covermeasure", "gap-experiment"] {
        assert!(out.contains(cmd), "help lists {cmd}");
    }
}

#[test]
fn fuel_default_from_environment() {
    let bin = env!("CARGO_BIN_EXE_semireal");
    let out = std::process::Command::new(bin)
        .args(["eval", "--real", "halves"])
        .env("SEMIREAL_FUEL_DEFAULT", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 0/1\n1 1/2\n2 3/4\n");
}

#[test]
fn omega_at_full_fuel_is_kraft_sum() {
    let (code, out, _) = invoke("machine omega --machine default --fuel 1000");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["omega"], v["kraft_sum"]);
    assert_eq!(v["omega"], "255/256");
}

#[test]
fn paint_emits_a_loadable_cover() {
    let (code, out, _) = invoke("paint --real halves --epsilon 1/4 --fuel 30");
    assert_eq!(code, 0);
    let cover = semireal::covers::Cover::parse(&out).unwrap();
    assert_eq!(cover.length_budget(), &q(255, 1024));
}
