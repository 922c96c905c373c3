use std::fs;
use std::path::{Path, PathBuf};

use dfx_ahp::catalog::{gap_report, load_catalog, CatalogError, KnowledgeBase, MANIFEST_FILE};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn copy_data() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(data_dir()).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
        }
    }
    dir
}

#[test]
fn directory_load_matches_bundled() {
    let kb = load_catalog(&data_dir()).unwrap();
    assert_eq!(kb, KnowledgeBase::bundled());
    assert_eq!(kb, load_catalog(&data_dir()).unwrap());
}

#[test]
fn cardinalities() {
    let kb = load_catalog(&data_dir()).unwrap();
    assert_eq!(kb.dfx.len(), 50);
    let product = kb.product_criteria();
    assert_eq!(product.len(), 15);
    assert_eq!(
        product
            .iter()
            .filter(|a| a.group == dfx_ahp::catalog::AttributeGroup::Iso25010Product)
            .count(),
        7
    );
    assert_eq!(kb.data_criteria().len(), 4);
    assert_eq!(gap_report(&kb).gap_count, 7);
}

#[test]
fn short_catalog_file() {
    let dir = copy_data();
    let path = dir.path().join("dfx_catalog.csv");
    let text = fs::read_to_string(&path).unwrap();
    let kept: Vec<&str> = text.lines().take(50).collect();
    fs::write(&path, kept.join("\n") + "\n").unwrap();
    match load_catalog(dir.path()) {
        Err(CatalogError::CardinalityMismatch { expected: 50, found: 49, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn aliases_come_from_the_manifest() {
    let dir = copy_data();
    fs::remove_file(dir.path().join(MANIFEST_FILE)).unwrap();
    match load_catalog(dir.path()) {
        Err(CatalogError::UnresolvedDfxName { name, .. }) => assert_eq!(name, "Design for Energy Recovery"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn edited_file_with_manifest_fails_checksum() {
    let dir = copy_data();
    let path = dir.path().join("quality_attributes.csv");
    let text = fs::read_to_string(&path).unwrap().replace("within intended environment", "edited");
    fs::write(&path, text).unwrap();
    assert!(matches!(
        load_catalog(dir.path()),
        Err(CatalogError::ChecksumMismatch { ref file, .. }) if file == "quality_attributes.csv"
    ));
}

#[test]
fn missing_directory() {
    assert!(matches!(
        load_catalog(Path::new("/definitely/not/here")),
        Err(CatalogError::Io { .. })
    ));
}
