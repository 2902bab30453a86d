mod common;

use serde_json::{json, Value};
use ultrafit::fan::q4_census;
use ultrafit::io::{parse_distance_matrix, run_fit, witness_report, FitOptions, Format, Method};

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

fn schema_keys(name: &str) -> Vec<String> {
    let s = common::load_schema(name);
    let mut k: Vec<String> = s["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    k.sort();
    let mut p: Vec<String> = s["properties"]
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    p.sort();
    assert_eq!(k, p, "{name}: every property is required");
    k
}

#[test]
fn run_reports_conform() {
    let d = parse_distance_matrix(common::FOUR_TAXA, Format::Phylip).unwrap();
    for method in Method::ALL {
        for (list_cones, exact_rational) in [(false, false), (true, true)] {
            let options = FitOptions {
                method,
                list_cones,
                exact_rational,
            };
            let report = serde_json::to_value(run_fit(&d, &options).unwrap()).unwrap();
            common::check("run_report", &report);
            assert_eq!(keys(&report), schema_keys("run_report"));
        }
    }
}

#[test]
fn census_and_witness_reports_conform() {
    let census = serde_json::to_value(q4_census(2000, 1)).unwrap();
    common::check("census_report", &census);
    assert_eq!(keys(&census), schema_keys("census_report"));
    let witness = serde_json::to_value(witness_report(5, 0.0, 1.0).unwrap()).unwrap();
    common::check("witness_report", &witness);
    assert_eq!(keys(&witness), schema_keys("witness_report"));
}

#[test]
fn validator_rejects_extras_and_omissions() {
    let d = parse_distance_matrix(common::FOUR_TAXA, Format::Phylip).unwrap();
    let report =
        serde_json::to_value(run_fit(&d, &FitOptions::new(Method::Upgma)).unwrap()).unwrap();
    let schema = common::load_schema("run_report");

    let mut extra = report.clone();
    extra["stats"]["bogus"] = json!(1);
    assert!(common::validate(&schema, &schema, &extra, "$").is_err());

    let mut missing = report.clone();
    missing.as_object_mut().unwrap().remove("newick");
    assert!(common::validate(&schema, &schema, &missing, "$").is_err());

    let mut wrong = report;
    wrong["method"] = json!("nj");
    assert!(common::validate(&schema, &schema, &wrong, "$").is_err());
}
