use serde_json::Value;

use sl2cert::verify::{verify_all, CheckRegistry, Config, Status};

fn without_runtimes(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("runtime_ms");
    }
    v
}

#[test]
fn default_run_passes_and_is_reproducible() {
    let a = verify_all(&Config::default()).unwrap();
    assert!(a.pass, "{}", a.summary_table());
    assert!(a.checks.len() >= 20);
    let b = verify_all(&Config::default()).unwrap();
    let ja = without_runtimes(serde_json::from_str(&a.to_json()).unwrap());
    let jb = without_runtimes(serde_json::from_str(&b.to_json()).unwrap());
    assert_eq!(
        serde_json::to_string(&ja).unwrap(),
        serde_json::to_string(&jb).unwrap()
    );
}

#[test]
fn report_json_shape() {
    let r = verify_all(&Config {
        only: Some("syzygy.S".into()),
        ..Config::default()
    })
    .unwrap();
    let v: Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["prime"], 101);
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    for key in ["id", "ref", "pass", "witness"] {
        assert!(checks[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn seed_is_recorded_in_the_report() {
    let run = |seed| {
        verify_all(&Config {
            seed,
            only: Some("oracle.transvectant".into()),
            ..Config::default()
        })
        .unwrap()
    };
    let (a, b) = (run(1), run(2));
    assert!(a.pass && b.pass);
    assert_eq!(a.seed, 1);
    assert_eq!(a.checks[0].witness["seed"], 1);
}

#[test]
fn every_claim_appears_in_the_readme() {
    let readme =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap();
    for check in CheckRegistry::default().checks() {
        let row = format!("| `{}` | {} |", check.id(), check.claim());
        assert!(readme.contains(&row), "README lacks: {row}");
    }
}

#[test]
fn small_prime_reports_errors_instead_of_aborting() {
    let r = verify_all(&Config {
        prime: 13,
        ..Config::default()
    })
    .unwrap();
    assert!(!r.pass);
    let cert = r.record("group.I.certificate").unwrap();
    assert_eq!(cert.status, Status::Error);
    assert!(cert.witness["error"].as_str().unwrap().contains("sqrt(5)"));
    assert!(r.record("group.T.certificate").unwrap().pass);
}

#[test]
fn composite_modulus_is_rejected() {
    assert!(verify_all(&Config {
        prime: 91,
        ..Config::default()
    })
    .is_err());
}
