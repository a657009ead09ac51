//! Bundled fixture programs and their manifest.

use serde::Deserialize;

pub const EXAMPLE1: &str = include_str!("../fixtures/example1.mc");
pub const EXAMPLE2: &str = include_str!("../fixtures/example2.mc");
pub const EXAMPLE3: &str = include_str!("../fixtures/example3.mc");
pub const EXAMPLE4: &str = include_str!("../fixtures/example4.mc");
pub const EXAMPLE5: &str = include_str!("../fixtures/example5.mc");
pub const EXAMPLE6: &str = include_str!("../fixtures/example6.mc");
pub const UNIT: &str = include_str!("../fixtures/unit.mc");
pub const SUM_LOOP: &str = include_str!("../fixtures/sum_loop.mc");
pub const SUM_FORMULA: &str = include_str!("../fixtures/sum_formula.mc");
pub const RECURSION: &str = include_str!("../fixtures/recursion.mc");
pub const BRANCHING: &str = include_str!("../fixtures/branching.mc");

const MANIFEST: &str = include_str!("../fixtures/manifest.json");

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub origin: String,
    pub reconstructed: bool,
    pub notes: String,
    /// Another fixture with identical input/output behaviour.
    #[serde(default)]
    pub equivalent_to: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
    pub entry: ManifestEntry,
}

#[derive(Deserialize)]
struct Manifest {
    fixtures: Vec<ManifestEntry>,
}

const SOURCES: &[(&str, &str)] = &[
    ("example1.mc", EXAMPLE1),
    ("example2.mc", EXAMPLE2),
    ("example3.mc", EXAMPLE3),
    ("example4.mc", EXAMPLE4),
    ("example5.mc", EXAMPLE5),
    ("example6.mc", EXAMPLE6),
    ("unit.mc", UNIT),
    ("sum_loop.mc", SUM_LOOP),
    ("sum_formula.mc", SUM_FORMULA),
    ("recursion.mc", RECURSION),
    ("branching.mc", BRANCHING),
];

/// All bundled fixtures in manifest order.
pub fn bundled() -> Vec<Fixture> {
    let manifest: Manifest = serde_json::from_str(MANIFEST).expect("bundled manifest is valid JSON");
    manifest
        .fixtures
        .into_iter()
        .map(|entry| {
            let (name, source) = SOURCES
                .iter()
                .find(|(n, _)| *n == entry.file)
                .copied()
                .unwrap_or_else(|| panic!("manifest names unknown fixture {}", entry.file));
            Fixture { name, source, entry }
        })
        .collect()
}

/// Pairs of fixtures the manifest declares behaviourally equivalent.
pub fn equivalent_pairs() -> Vec<(Fixture, Fixture)> {
    let all = bundled();
    let mut pairs = Vec::new();
    for (i, f) in all.iter().enumerate() {
        if let Some(other) = &f.entry.equivalent_to {
            if let Some(g) = all[i + 1..].iter().find(|g| &g.entry.file == other) {
                pairs.push((f.clone(), g.clone()));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_covers_every_source() {
        let b = bundled();
        assert_eq!(b.len(), SOURCES.len());
        assert_eq!(equivalent_pairs().len(), 1);
    }
}
