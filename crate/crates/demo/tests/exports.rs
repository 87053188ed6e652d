use lpbm_demo::{concavity_json, thresholds_json, wulff_section_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn threshold_rows() {
    let v = parse(thresholds_json(3, 4).unwrap());
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["branch"], "middle");
    assert!((rows[1]["pbar"].as_f64().unwrap() - 0.77371).abs() < 5e-6);
    assert!(thresholds_json(3, 61).is_err());
}

#[test]
fn concavity_curve_is_concave() {
    let v = parse(concavity_json(3, 2, 0.01, 9).unwrap());
    assert_eq!(v["verdict"], "strictly-concave");
    assert_eq!(v["s"].as_array().unwrap().len(), 9);
    assert!(v["h"]
        .as_array()
        .unwrap()
        .iter()
        .all(|h| h.as_f64().unwrap() < 0.0));
    assert!(concavity_json(7, 2, 0.01, 9).is_err());
}

#[test]
fn cube_section_stays_in_box_and_shows_failure() {
    // K_0 = cube on axes {1, 2}, K_1 = cube on axes {0, 1}, p = 0.3 < p̄ = 0.63.
    let a0 = [0.0, 1.0, 1.0];
    let a1 = [1.0, 1.0, 0.0];
    let v = parse(wulff_section_json(&a0, &a1, 0.3, 0.5, 2, [0, 2], 64).unwrap());
    let half = 2f64.powf(-1.0 / 0.3);
    let bh = v["box_half"].as_array().unwrap();
    assert!((bh[0].as_f64().unwrap() - half).abs() < 1e-12);
    for pt in v["outline"].as_array().unwrap() {
        let (x, y) = (pt[0].as_f64().unwrap(), pt[1].as_f64().unwrap());
        assert!(x.abs() <= half + 1e-8 && y.abs() <= half + 1e-8, "{x} {y}");
    }
    assert!(v["vk_box"].as_f64().unwrap() < v["vk_mean"].as_f64().unwrap());
    assert!((v["vk_mean"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn section_rejects_bad_axes() {
    assert!(wulff_section_json(&[1.0; 3], &[1.0; 3], 0.5, 0.5, 2, [1, 1], 16).is_err());
    assert!(wulff_section_json(&[1.0; 3], &[1.0; 4], 0.5, 0.5, 2, [0, 1], 16).is_err());
}
