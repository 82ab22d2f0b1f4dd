use minibqml::storage::{load_model, save_model};
use minibqml::synth::brfss_like;
use minibqml::{Engine, Error};

fn trained(engine: &mut Engine) {
    engine.catalog.register_table(brfss_like(1500, 9), false).unwrap();
    for (name, ty) in [("lr", "logistic_reg"), ("bt", "boosted_tree_classifier"), ("nn", "dnn_classifier")] {
        engine
            .execute_sql(&format!(
                "CREATE MODEL {name} OPTIONS(model_type='{ty}', input_label_cols=['Diabetes_binary'], \
                 max_iterations=10, hidden_units=[8, 4]) AS SELECT * FROM diabetes_data"
            ))
            .unwrap();
    }
}

#[test]
fn round_trip_predictions_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut engine = Engine::new();
    trained(&mut engine);
    let rows = brfss_like(100, 77);
    for name in ["lr", "bt", "nn"] {
        let path = dir.path().join(format!("{name}.json"));
        engine.save_model(name, &path).unwrap();
        let original = engine.model(name).unwrap().clone();
        let back = load_model(&path).unwrap();
        assert_eq!(back, original);
        let a = original.predict_proba(&rows).unwrap();
        let b = back.predict_proba(&rows).unwrap();
        assert_eq!(a.len(), 100);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()), "{name}");
    }
}

#[test]
fn model_dir_lookup_after_restart() {
    let dir = tempfile::tempdir().unwrap();
    let mut first = Engine::new().with_model_dir(dir.path());
    trained(&mut first);
    let mut second = Engine::new().with_model_dir(dir.path());
    second.catalog.register_table(brfss_like(50, 1), false).unwrap();
    let out = second.execute_sql("SELECT * FROM ML.PREDICT(MODEL bt, (SELECT * FROM diabetes_data))");
    assert!(out.is_ok(), "{out:?}");
}

#[test]
fn unknown_schema_version_and_bad_paths() {
    let dir = tempfile::tempdir().unwrap();
    let mut engine = Engine::new();
    trained(&mut engine);
    let path = dir.path().join("lr.json");
    engine.save_model("lr", &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap().replacen("\"schema_version\": 1", "\"schema_version\": 999", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(load_model(&path), Err(Error::Format(_))));
    std::fs::write(&path, "{ not json").unwrap();
    assert!(matches!(load_model(&path), Err(Error::Format(_))));

    let model = engine.model("lr").unwrap().clone();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    assert!(matches!(save_model(&model, blocker.join("m.json")), Err(Error::Io(_))));
    assert!(matches!(load_model(dir.path().join("absent.json")), Err(Error::Io(_))));
}
