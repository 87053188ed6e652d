//! Serialized forms consumed by the CLI and the demo.

use lpbm_core::bodies::Body;
use lpbm_core::counterexamples::{verify_counterexample, Conclusion};
use lpbm_core::intrinsic::intrinsic_volume;
use lpbm_core::sphere::{GridMethod, SphericalGrid, TestFunction};

#[test]
fn body_documents_round_trip() {
    let bodies = vec![
        Body::Ball { radius: 2.0 },
        Body::Box {
            a: vec![1.0, 0.0, 0.5],
        },
        Body::embedded_cube(4, vec![0, 3]).unwrap(),
        Body::log_perturbed_ball(
            TestFunction::harmonic_quartic(3)
                .unwrap()
                .with_amplitude(0.1),
            0.5,
        )
        .unwrap(),
    ];
    for b in bodies {
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains(&format!("\"type\":\"{}\"", b.kind())));
        let back: Body = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}

#[test]
fn hand_written_body_documents() {
    let b: Body = serde_json::from_str(r#"{"type": "box", "a": [1, 1, 1, 1]}"#).unwrap();
    assert_eq!(intrinsic_volume(&b, 4, 2, None).unwrap().value, 24.0);
    let c: Body =
        serde_json::from_str(r#"{"type": "embedded-cube", "dimension": 5, "axes": [0, 1, 4]}"#)
            .unwrap();
    assert_eq!(intrinsic_volume(&c, 5, 3, None).unwrap().value, 8.0);
    assert!(serde_json::from_str::<Body>(r#"{"type": "simplex"}"#).is_err());
}

#[test]
fn grid_document_preserves_fingerprint() {
    for (n, res, method) in [
        (3, 5, GridMethod::ProductAngular),
        (5, 50, GridMethod::MonteCarlo),
        (3, 3, GridMethod::IcosphereN3),
    ] {
        let g = SphericalGrid::build(n, res, method, 4).unwrap();
        let back = SphericalGrid::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back.fingerprint(), g.fingerprint());
        assert_eq!(back.len(), g.len());
    }
}

#[test]
fn verdict_serializes_with_kebab_case_conclusion() {
    let v = verify_counterexample(4, 2, 0.5).unwrap();
    assert_eq!(v.verdict.conclusion, Conclusion::InequalityFails);
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["verdict"]["conclusion"], "inequality-fails");
    assert_eq!(json["threshold"]["branch"], "low");
}
