//! The README's check index and the registry must agree exactly: no
//! orphan identifiers in either direction.

use relcass::report::LEMMA_INDEX;
use std::collections::BTreeSet;

fn readme() -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    std::fs::read_to_string(path).expect("README.md at the workspace root")
}

#[test]
fn every_registered_check_is_documented() {
    let text = readme();
    for (id, _) in LEMMA_INDEX {
        assert!(
            text.contains(&format!("`{id}`")),
            "check id '{id}' missing from the README index"
        );
    }
}

#[test]
fn documented_index_has_no_stale_entries() {
    let text = readme();
    let section = text
        .split("## Check index")
        .nth(1)
        .expect("README has a check index section")
        .split("\n## ")
        .next()
        .unwrap();
    let documented: BTreeSet<&str> = section
        .lines()
        .filter_map(|line| line.strip_prefix("- `"))
        .filter_map(|rest| rest.split('`').next())
        .collect();
    let registered: BTreeSet<&str> = LEMMA_INDEX.iter().map(|(id, _)| *id).collect();
    assert_eq!(documented, registered);
}
