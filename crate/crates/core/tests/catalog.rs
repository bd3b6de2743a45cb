use jnalg::catalog::{
    emit_report, fixture, gate_reports, load_fixture, load_spec, run, tmr_dual, tmr_of_jacobi, Command, Format,
    Model, SpecDocument,
};
use jnalg::{Error, Report, Residual, Sampling};
use std::collections::BTreeMap;
use std::io::Write;

const NAMES: [&str; 8] =
    ["abelian2", "tangent(1)", "tangent(2)", "tangent(3)", "tmr_of_jacobi", "tmr_dual", "contact_r3", "e2_line"];

const MINIMAL: &str = r#"{
  "coords": ["x", "y"],
  "rank": 2,
  "anchor": [["1", "0"], ["0", "1"]],
  "P": {"1,2": "1 + x^2"}
}"#;

fn doc(text: &str) -> SpecDocument {
    SpecDocument::from_json(text).unwrap()
}

#[test]
fn minimal_spec_loads() {
    let m = Model::from_doc(&doc(MINIMAL)).unwrap();
    assert_eq!(m.jacobi.rank(), 2);
    assert!(m.jacobi.phi0().is_structurally_zero());
    assert!(m.n.is_none() && m.modular.is_none());
    assert!(run(Command::CheckJacobi, &m, &Sampling::default()).unwrap().iter().all(|r| r.pass));
}

#[test]
fn spec_file_round_trip() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let original = fixture("contact_r3").unwrap();
    f.write_all(original.to_json().as_bytes()).unwrap();
    assert_eq!(load_spec(f.path()).unwrap(), original);
}

#[test]
fn misspelled_key_is_named() {
    let err = SpecDocument::from_json(&MINIMAL.replace("\"anchor\"", "\"ancor\"")).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert!(err.to_string().contains("ancor"), "{err}");
}

#[test]
fn expression_typo_names_field_and_offset() {
    let err = Model::from_doc(&doc(&MINIMAL.replace("1 + x^2", "1 + * x"))).unwrap_err();
    let text = err.to_string();
    assert!(matches!(err, Error::Field { .. }));
    assert!(text.contains("P[1,2]") && text.contains('4'), "{text}");
}

#[test]
fn bad_index_keys_are_refused() {
    for bad in ["\"1,3\"", "\"1\"", "\"1,1\"", "\"a,b\""] {
        let r = Model::from_doc(&doc(&MINIMAL.replace("\"1,2\"", bad)));
        assert!(matches!(r, Err(Error::Config(_))), "{bad}");
    }
}

#[test]
fn opposite_entries_must_agree() {
    let ok = MINIMAL.replace("\"1,2\": \"1 + x^2\"", "\"1,2\": \"x\", \"2,1\": \"-x\"");
    assert!(Model::from_doc(&doc(&ok)).is_ok());
    let bad = MINIMAL.replace("\"1,2\": \"1 + x^2\"", "\"1,2\": \"x\", \"2,1\": \"x\"");
    assert!(Model::from_doc(&doc(&bad)).is_err());
}

#[test]
fn partial_modular_data_is_refused() {
    let text = MINIMAL.replace("\"rank\"", "\"eta\": \"1\", \"mu\": \"1\", \"rank\"");
    let err = Model::from_doc(&doc(&text)).unwrap_err();
    assert!(err.to_string().contains("nu"));
}

#[test]
fn commands_name_their_missing_data() {
    let m = Model::from_doc(&doc(MINIMAL)).unwrap();
    let err = run(Command::Modular, &m, &Sampling::default()).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert!(err.to_string().contains("modular"));
}

#[test]
fn invalid_sampling_is_refused() {
    let m = Model::from_doc(&doc(MINIMAL)).unwrap();
    let s = Sampling { points: 0, ..Sampling::default() };
    assert!(run(Command::Validate, &m, &s).is_err());
    let s = Sampling { bounds: (1.0, -1.0), ..Sampling::default() };
    assert!(run(Command::Validate, &m, &s).is_err());
}

#[test]
fn command_names_round_trip() {
    for c in Command::ALL {
        assert_eq!(c.name().parse::<Command>().unwrap(), c);
    }
    assert!("verify".parse::<Command>().is_err());
}

#[test]
fn unknown_fixture_lists_the_catalog() {
    let err = fixture("tangent(9)").unwrap_err().to_string();
    assert!(err.contains("abelian2"));
    assert!(fixture("hyperbolic").is_err());
}

#[test]
fn pair_builders_check_lengths() {
    let c = vec!["x".to_string()];
    assert!(tmr_of_jacobi(&c, &BTreeMap::new(), &[]).is_err());
    assert!(tmr_dual(&c, &BTreeMap::new(), &["1".into(), "0".into()]).is_err());
}

#[test]
fn every_fixture_passes_its_gates() {
    let s = Sampling::default();
    for name in NAMES {
        let m = load_fixture(name, &s).unwrap();
        assert!(gate_reports(&m, &s).unwrap().iter().all(|r| r.pass), "{name}");
    }
}

#[test]
fn every_fixture_passes_every_command() {
    let s = Sampling::default();
    for name in NAMES {
        let m = load_fixture(name, &s).unwrap();
        for r in run(Command::All, &m, &s).unwrap() {
            assert!(r.pass, "{name}: {} {} [{}]", r.check, r.residual, r.anchor);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let s = Sampling::default();
    let m = load_fixture("tmr_of_jacobi", &s).unwrap();
    let a = emit_report(&run(Command::All, &m, &s).unwrap(), Format::Json);
    let b = emit_report(&run(Command::All, &m, &s).unwrap(), Format::Json);
    assert_eq!(a, b);
}

#[test]
fn empty_report_is_valid_json() {
    let v: serde_json::Value = serde_json::from_str(&emit_report(&[], Format::Json)).unwrap();
    assert_eq!(v, serde_json::json!([]));
    assert_eq!(emit_report(&[], Format::Text), "0 checks\n");
}

#[test]
fn single_report_fields() {
    let s = Sampling::default();
    let r = Report::new("c", "a = b", Residual { value: 1e-12, witness: vec![0.5] }, &s);
    let v: serde_json::Value = serde_json::from_str(&emit_report(&[r], Format::Json)).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{"check": "c", "anchor": "a = b", "residual": 1e-12, "pass": true, "witness": [0.5], "seed": 42}])
    );
    let bad = Report::exact("c", "a", false, &s);
    let v: serde_json::Value = serde_json::from_str(&emit_report(std::slice::from_ref(&bad), Format::Json)).unwrap();
    assert!(v[0]["residual"].is_null() && v[0]["pass"] == false);
    assert!(emit_report(&[bad], Format::Text).starts_with("FAIL"));
}
