//! The export bundle: `catalog.json`, `names.json` and `stats.json`.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use authn_catalog::naming::{classification_name, readable_name, NamingError};
use authn_catalog::query::{group_count, technique_groups, Target};
use authn_catalog::schemes::facets;
use authn_catalog::{save, CatalogDocument, FacetAssignment, Scheme};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryNames {
    pub classification_name: String,
    pub readable_name: String,
    /// Readable name with the `multi` of multi-factor techniques omitted.
    pub short_readable_name: String,
    pub slug: String,
}

impl EntryNames {
    pub fn compute(id: &str, assignment: &FacetAssignment, scheme: &Scheme) -> Result<Self, NamingError> {
        let name = classification_name(assignment, scheme)?;
        Ok(Self {
            readable_name: readable_name(assignment, scheme, false)?,
            short_readable_name: readable_name(assignment, scheme, true)?,
            slug: name.slug(id),
            classification_name: name.to_string(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NamesIndex {
    pub authenticators: BTreeMap<String, EntryNames>,
    pub techniques: BTreeMap<String, EntryNames>,
}

pub fn names_index(doc: &CatalogDocument) -> Result<NamesIndex, NamingError> {
    let mut index = NamesIndex::default();
    for a in &doc.authenticators {
        index.authenticators.insert(
            a.id.clone(),
            EntryNames::compute(&a.id, &a.assignment, &doc.schemes.authenticator)?,
        );
    }
    for t in &doc.techniques {
        index.techniques.insert(
            t.id.clone(),
            EntryNames::compute(&t.id, &t.assignment, &doc.schemes.technique)?,
        );
    }
    Ok(index)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetStats {
    pub total: usize,
    /// Counts per facet name, value path prefix at full depth.
    pub facets: BTreeMap<String, BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogStats {
    pub techniques: TargetStats,
    pub authenticators: TargetStats,
    /// Techniques grouped by employment and, for single employments, the
    /// authentication factor of the employed authenticator.
    pub technique_groups: BTreeMap<String, usize>,
}

fn target_stats(doc: &CatalogDocument, target: Target) -> TargetStats {
    let scheme = target.scheme(doc);
    let facets = scheme
        .facets
        .iter()
        .map(|f| {
            let depth = f.paths().iter().map(|p| p.len()).max().unwrap_or(1);
            let counts = group_count(doc, target, &f.name, depth).expect("facet of own scheme");
            (f.name.clone(), counts)
        })
        .collect();
    TargetStats {
        total: target.entries(doc).len(),
        facets,
    }
}

pub fn catalog_stats(doc: &CatalogDocument) -> CatalogStats {
    CatalogStats {
        techniques: target_stats(doc, Target::Techniques),
        authenticators: target_stats(doc, Target::Authenticators),
        technique_groups: technique_groups(doc),
    }
}

/// Group counts of both fundamental technique facets, as printed by `catalog stats`.
pub fn fundamental_counts(doc: &CatalogDocument) -> Vec<(String, BTreeMap<String, usize>)> {
    let stats = catalog_stats(doc);
    let pick = |t: &TargetStats, f: &str| t.facets.get(f).cloned().unwrap_or_default();
    vec![
        (facets::EMPLOYMENT.to_owned(), pick(&stats.techniques, facets::EMPLOYMENT)),
        (facets::FACTOR.to_owned(), pick(&stats.techniques, facets::FACTOR)),
        (
            facets::AUTHENTICATION_FACTOR.to_owned(),
            pick(&stats.authenticators, facets::AUTHENTICATION_FACTOR),
        ),
    ]
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

/// Writes the three bundle files into `dir`, creating it if needed.
pub fn write_bundle(doc: &CatalogDocument, dir: &Path) -> io::Result<()> {
    let names = names_index(doc).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("catalog.json"), save(doc))?;
    fs::write(dir.join("names.json"), to_pretty_json(&names))?;
    fs::write(dir.join("stats.json"), to_pretty_json(&catalog_stats(doc)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use authn_catalog::seed::seed_document;
    use std::collections::HashSet;

    #[test]
    fn names_cover_every_entry_with_unique_slugs() {
        let doc = seed_document();
        let names = names_index(&doc).unwrap();
        assert_eq!(names.authenticators.len(), 34);
        assert_eq!(names.techniques.len(), 33);
        let slugs: HashSet<&str> = names
            .authenticators
            .values()
            .chain(names.techniques.values())
            .map(|n| n.slug.as_str())
            .collect();
        assert_eq!(slugs.len(), 67);
        let cat = &names.techniques["context-aware-touch-authentication"];
        assert_eq!(cat.classification_name, "multi.sequential.ordered|multi-factor");
        assert_eq!(cat.short_readable_name, "sequential ordered multi-factor");
    }

    #[test]
    fn stats_totals() {
        let stats = catalog_stats(&seed_document());
        assert_eq!(stats.techniques.total, 33);
        assert_eq!(stats.authenticators.total, 34);
        assert_eq!(stats.techniques.facets[facets::EMPLOYMENT]["single"], 27);
        assert_eq!(stats.technique_groups.values().sum::<usize>(), 33);
    }
}
