use std::path::Path;

use edgeavail::document::{parse_model, serialize_model};
use edgeavail::models::{build_cu, build_du, build_meh, build_ru, build, shipped_documents, ElementKind, IntensityTable};

fn models_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/models"))
}

#[test]
fn shipped_files_are_current() {
    for (name, text) in shipped_documents(&IntensityTable::default()) {
        let on_disk = std::fs::read_to_string(models_dir().join(name)).unwrap();
        assert_eq!(on_disk, text, "{name} is stale; rerun the export_models example");
    }
}

#[test]
fn shipped_files_parse_to_built_models() {
    let t = IntensityTable::default();
    let expected = [
        ("ru.san", build_ru(&t)),
        ("du.san", build_du(&t)),
        ("cu.san", build_cu(&t)),
        ("meh.san", build_meh(&t)),
        ("cluster.san", build(ElementKind::ClusterMANO, &t)),
    ];
    for (name, model) in expected {
        let parsed = parse_model(&std::fs::read_to_string(models_dir().join(name)).unwrap()).unwrap();
        assert_eq!(parsed, model, "{name}");
        assert_eq!(serialize_model(&parsed), serialize_model(&model));
    }
}
