//! DfX knowledge base: technique catalog, quality attributes, the
//! customer-satisfaction strategy map and the published global weights.
//!
//! Datasets are CSV files with fixed headers plus a `datasets.json` manifest
//! (version, checksums, name aliases, notes). The same files are compiled
//! into the crate, so [`KnowledgeBase::bundled`] needs no data directory.

mod published;
mod gaps;
mod query;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use published::{
    validate_published_weights, PublishedRow, PublishedWeightTable, ValidationReport, WeightCheck,
    CONSISTENCY_LIMIT_PCT, CRITERIA_TOTAL_TOLERANCE, ROW_SUM_TOLERANCE,
};
pub use gaps::{gap_report, GapReport, PhaseGaps};
pub use query::DfxFilter;

pub const DFX_COUNT: usize = 50;
pub const ISO_PRODUCT_COUNT: usize = 7;
pub const OTHER_PRODUCT_COUNT: usize = 8;
pub const DATA_CRITERION_COUNT: usize = 4;
pub const STRATEGY_COUNT: usize = 20;

pub const CATALOG_FILE: &str = "dfx_catalog.csv";
pub const ATTRIBUTES_FILE: &str = "quality_attributes.csv";
pub const STRATEGIES_FILE: &str = "strategy_map.csv";
pub const WEIGHTS_FILE: &str = "figure10_weights.csv";
pub const MANIFEST_FILE: &str = "datasets.json";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}{}: {message}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
    SchemaViolation {
        file: String,
        line: Option<u64>,
        message: String,
    },
    #[error("{what}: expected {expected} entries, found {found}")]
    CardinalityMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("'{name}' (referenced from {referenced_from}) does not match any DfX in the catalog")]
    UnresolvedDfxName { name: String, referenced_from: String },
    #[error("'{name}' (referenced from {referenced_from}) is not a known quality attribute")]
    UnresolvedCriterion { name: String, referenced_from: String },
    #[error("{file}: checksum mismatch (manifest {expected}, file {actual})")]
    ChecksumMismatch {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("unknown filter field '{field}'")]
    UnknownFilterField { field: String },
    #[error("invalid value '{value}' for filter field '{field}'")]
    InvalidFilterValue { field: String, value: String },
}

impl CatalogError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Io { .. } => "Io",
            Self::SchemaViolation { .. } => "SchemaViolation",
            Self::CardinalityMismatch { .. } => "CardinalityMismatch",
            Self::UnresolvedDfxName { .. } => "UnresolvedDfxName",
            Self::UnresolvedCriterion { .. } => "UnresolvedCriterion",
            Self::ChecksumMismatch { .. } => "ChecksumMismatch",
            Self::UnknownFilterField { .. } => "UnknownFilterField",
            Self::InvalidFilterValue { .. } => "InvalidFilterValue",
        }
    }
}

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

macro_rules! csv_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            /// Case- and punctuation-insensitive: "System and Ecosystem",
            /// "SystemAndEcosystem" and "system_and_ecosystem" are equal.
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let key = squash(s);
                $(
                    if key == squash($text) || key == squash(stringify!($variant)) {
                        return Ok($name::$variant);
                    }
                )+
                Err(s.to_string())
            }
        }
    };
}

csv_enum!(
    /// Where a technique applies.
    Scope {
        Product => "Product",
        System => "System",
        Ecosystem => "Ecosystem",
        SystemAndEcosystem => "System and Ecosystem",
        All => "ALL",
    }
);

csv_enum!(
    /// Whether a technique targets a virtue of the product or its lifecycle.
    Character {
        Virtue => "Virtue",
        Lifecycle => "Lifecycle",
        Both => "Both",
    }
);

csv_enum!(
    /// Whether stakeholders outside the developing organization are involved.
    Focus {
        Internal => "Internal",
        External => "External",
        Both => "Both",
    }
);

csv_enum!(
    AttributeGroup {
        Iso25010Product => "ISO25010Product",
        OtherSourceProduct => "OtherSourceProduct",
        DataCriterion => "DataCriterion",
    }
);

csv_enum!(
    Phase {
        Production => "Production",
        Evaluation => "Evaluation",
        Experience => "Experience",
    }
);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfxEntry {
    pub name: String,
    pub goals: Vec<String>,
    pub scope: Scope,
    pub character: Character,
    pub focus: Focus,
    pub references: Vec<String>,
}

impl DfxEntry {
    /// Name without a trailing parenthetical, e.g. "Logistics" for "Logistics (DFL)".
    pub fn short_name(&self) -> &str {
        match self.name.rfind(" (") {
            Some(i) if self.name.ends_with(')') => &self.name[..i],
            _ => &self.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityAttribute {
    pub name: String,
    pub group: AttributeGroup,
    pub notes: Vec<String>,
}

impl QualityAttribute {
    pub fn is_product_criterion(&self) -> bool {
        self.group != AttributeGroup::DataCriterion
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseFlags {
    pub production: bool,
    pub evaluation: bool,
    pub experience: bool,
}

impl PhaseFlags {
    pub fn phases(self) -> Vec<Phase> {
        let mut out = Vec::new();
        if self.production {
            out.push(Phase::Production);
        }
        if self.evaluation {
            out.push(Phase::Evaluation);
        }
        if self.experience {
            out.push(Phase::Experience);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyMapping {
    pub strategy: String,
    /// Canonical catalog names.
    pub relevant_dfx: Vec<String>,
    /// Names as listed in the source table.
    pub listed_as: Vec<String>,
    pub phases: PhaseFlags,
    /// True iff no DfX is available for the strategy.
    pub gap: bool,
    /// Phase marks were ambiguous in the source and follow the literal reading.
    pub phase_best_effort: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
    #[serde(default)]
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    #[serde(default)]
    pub provenance: String,
    pub files: Vec<ManifestFile>,
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
    #[serde(default)]
    pub best_effort_phase: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// Raw dataset texts, before parsing.
#[derive(Debug, Clone)]
pub struct DatasetSources {
    pub catalog: String,
    pub attributes: String,
    pub strategies: String,
    pub weights: String,
    pub manifest: Option<String>,
}

impl DatasetSources {
    pub fn bundled() -> Self {
        Self {
            catalog: include_str!("../../data/dfx_catalog.csv").to_string(),
            attributes: include_str!("../../data/quality_attributes.csv").to_string(),
            strategies: include_str!("../../data/strategy_map.csv").to_string(),
            weights: include_str!("../../data/figure10_weights.csv").to_string(),
            manifest: Some(include_str!("../../data/datasets.json").to_string()),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CatalogError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| CatalogError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        };
        let manifest_path = dir.join(MANIFEST_FILE);
        Ok(Self {
            catalog: read(CATALOG_FILE)?,
            attributes: read(ATTRIBUTES_FILE)?,
            strategies: read(STRATEGIES_FILE)?,
            weights: read(WEIGHTS_FILE)?,
            manifest: if manifest_path.exists() {
                Some(read(MANIFEST_FILE)?)
            } else {
                None
            },
        })
    }
}

/// The cross-linked, immutable knowledge base.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnowledgeBase {
    pub version: String,
    pub dfx: Vec<DfxEntry>,
    pub attributes: Vec<QualityAttribute>,
    pub strategies: Vec<StrategyMapping>,
    pub published_weights: PublishedWeightTable,
    pub manifest: Manifest,
}

pub fn load_catalog(dir: &Path) -> Result<KnowledgeBase, CatalogError> {
    KnowledgeBase::from_sources(&DatasetSources::from_dir(dir)?)
}

type Records = Vec<(u64, csv::StringRecord)>;

fn read_csv(file: &str, text: &str, header: &[&str]) -> Result<Records, CatalogError> {
    let schema = |line: Option<u64>, message: String| CatalogError::SchemaViolation {
        file: file.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| schema(Some(1), e.to_string()))?
        .clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(schema(
            Some(1),
            format!("header must be '{}', found '{}'", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| schema(e.position().map(|p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_field<T: FromStr>(file: &str, line: u64, field: &str, value: &str) -> Result<T, CatalogError> {
    value.parse().map_err(|_| CatalogError::SchemaViolation {
        file: file.to_string(),
        line: Some(line),
        message: format!("invalid {field} '{value}'"),
    })
}

fn parse_flag(file: &str, line: u64, field: &str, value: &str) -> Result<bool, CatalogError> {
    match value.trim() {
        "" => Ok(false),
        "X" | "x" => Ok(true),
        other => Err(CatalogError::SchemaViolation {
            file: file.to_string(),
            line: Some(line),
            message: format!("{field} flag must be 'X' or empty, found '{other}'"),
        }),
    }
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Resolves DfX names as they appear in other tables ("Design for Robustness",
/// "Df Mass Cust.") to canonical catalog names.
struct Resolver {
    exact: BTreeMap<String, String>,
    short: BTreeMap<String, String>,
    aliases: BTreeMap<String, String>,
}

fn strip_prefix(name: &str) -> &str {
    let trimmed = name.trim();
    for prefix in ["Design for ", "design for ", "Df ", "DfX "] {
        if let Some(rest) = trimmed.strip_prefix(prefix) {
            return rest;
        }
    }
    trimmed
}

impl Resolver {
    fn new(dfx: &[DfxEntry], aliases: &BTreeMap<String, String>) -> Self {
        Self {
            exact: dfx.iter().map(|d| (squash(&d.name), d.name.clone())).collect(),
            short: dfx.iter().map(|d| (squash(d.short_name()), d.name.clone())).collect(),
            aliases: aliases
                .iter()
                .map(|(k, v)| (squash(strip_prefix(k)), v.clone()))
                .collect(),
        }
    }

    fn resolve(&self, name: &str) -> Option<&str> {
        let key = squash(strip_prefix(name));
        self.exact
            .get(&key)
            .or_else(|| self.short.get(&key))
            .or_else(|| self.aliases.get(&key))
            .map(String::as_str)
    }
}

impl KnowledgeBase {
    pub fn bundled() -> Self {
        Self::from_sources(&DatasetSources::bundled()).expect("bundled datasets are valid")
    }

    /// Parses and cross-links all datasets. Checks run in order: schema,
    /// cardinality, referential integrity, then manifest checksums.
    pub fn from_sources(src: &DatasetSources) -> Result<Self, CatalogError> {
        let manifest: Manifest = match &src.manifest {
            Some(text) => serde_json::from_str(text).map_err(|e| CatalogError::SchemaViolation {
                file: MANIFEST_FILE.to_string(),
                line: Some(e.line() as u64),
                message: e.to_string(),
            })?,
            None => Manifest::default(),
        };

        let dfx = parse_catalog(&src.catalog)?;
        let attributes = parse_attributes(&src.attributes)?;
        let resolver = Resolver::new(&dfx, &manifest.aliases);
        let best_effort: HashSet<&str> = manifest.best_effort_phase.iter().map(String::as_str).collect();
        let strategies = parse_strategies(&src.strategies, &resolver, &best_effort)?;
        let published_weights = published::parse(&src.weights)?;

        for row in &published_weights.rows {
            if resolver.resolve(&row.name).is_none() {
                return Err(CatalogError::UnresolvedDfxName {
                    name: row.name.clone(),
                    referenced_from: WEIGHTS_FILE.to_string(),
                });
            }
        }
        for c in &published_weights.criteria {
            if !attributes.iter().any(|a| &a.name == c) {
                return Err(CatalogError::UnresolvedCriterion {
                    name: c.clone(),
                    referenced_from: WEIGHTS_FILE.to_string(),
                });
            }
        }

        if src.manifest.is_some() {
            let texts = [
                (CATALOG_FILE, &src.catalog),
                (ATTRIBUTES_FILE, &src.attributes),
                (STRATEGIES_FILE, &src.strategies),
                (WEIGHTS_FILE, &src.weights),
            ];
            for (file, text) in texts {
                if let Some(entry) = manifest.files.iter().find(|f| f.file == file) {
                    let actual = sha256_hex(text);
                    if !entry.sha256.eq_ignore_ascii_case(&actual) {
                        return Err(CatalogError::ChecksumMismatch {
                            file: file.to_string(),
                            expected: entry.sha256.clone(),
                            actual,
                        });
                    }
                }
            }
        }

        Ok(Self {
            version: manifest.version.clone(),
            dfx,
            attributes,
            strategies,
            published_weights,
            manifest,
        })
    }

    /// Canonical entry for a name as written anywhere in the datasets.
    pub fn resolve_dfx(&self, name: &str) -> Option<&DfxEntry> {
        let resolver = Resolver::new(&self.dfx, &self.manifest.aliases);
        let canonical = resolver.resolve(name)?;
        self.dfx.iter().find(|d| d.name == canonical)
    }

    pub fn dfx(&self, name: &str) -> Option<&DfxEntry> {
        self.dfx.iter().find(|d| d.name == name)
    }

    pub fn product_criteria(&self) -> Vec<&QualityAttribute> {
        self.attributes.iter().filter(|a| a.is_product_criterion()).collect()
    }

    pub fn data_criteria(&self) -> Vec<&QualityAttribute> {
        self.attributes.iter().filter(|a| !a.is_product_criterion()).collect()
    }

    pub fn query(&self, filter: &DfxFilter) -> Vec<&DfxEntry> {
        self.dfx.iter().filter(|d| filter.matches(d)).collect()
    }
}

fn parse_catalog(text: &str) -> Result<Vec<DfxEntry>, CatalogError> {
    let f = CATALOG_FILE;
    let rows = read_csv(f, text, &["name", "goals", "scope", "character", "focus", "references"])?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        let name = r[0].trim().to_string();
        if name.is_empty() {
            return Err(CatalogError::SchemaViolation {
                file: f.into(),
                line: Some(line),
                message: "empty name".into(),
            });
        }
        if !seen.insert(squash(&name)) {
            return Err(CatalogError::SchemaViolation {
                file: f.into(),
                line: Some(line),
                message: format!("duplicate DfX '{name}'"),
            });
        }
        out.push(DfxEntry {
            goals: split_list(&r[1]),
            scope: parse_field(f, line, "scope", &r[2])?,
            character: parse_field(f, line, "character", &r[3])?,
            focus: parse_field(f, line, "focus", &r[4])?,
            references: split_list(&r[5]),
            name,
        });
    }
    if out.len() != DFX_COUNT {
        return Err(CatalogError::CardinalityMismatch {
            what: "DfX catalog".into(),
            expected: DFX_COUNT,
            found: out.len(),
        });
    }
    Ok(out)
}

fn parse_attributes(text: &str) -> Result<Vec<QualityAttribute>, CatalogError> {
    let f = ATTRIBUTES_FILE;
    let rows = read_csv(f, text, &["name", "group", "notes"])?;
    let mut out = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        out.push(QualityAttribute {
            name: r[0].trim().to_string(),
            group: parse_field(f, line, "group", &r[1])?,
            notes: split_list(&r[2]),
        });
    }
    let count = |g| out.iter().filter(|a| a.group == g).count();
    for (group, expected) in [
        (AttributeGroup::Iso25010Product, ISO_PRODUCT_COUNT),
        (AttributeGroup::OtherSourceProduct, OTHER_PRODUCT_COUNT),
        (AttributeGroup::DataCriterion, DATA_CRITERION_COUNT),
    ] {
        let found = count(group);
        if found != expected {
            return Err(CatalogError::CardinalityMismatch {
                what: format!("{group} quality attributes"),
                expected,
                found,
            });
        }
    }
    Ok(out)
}

fn parse_strategies(
    text: &str,
    resolver: &Resolver,
    best_effort: &HashSet<&str>,
) -> Result<Vec<StrategyMapping>, CatalogError> {
    let f = STRATEGIES_FILE;
    let rows = read_csv(f, text, &["strategy", "dfx_list", "production", "evaluation", "experience"])?;
    let mut out = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        let strategy = r[0].trim().to_string();
        let listed_as = split_list(&r[1]);
        let mut relevant = Vec::with_capacity(listed_as.len());
        for name in &listed_as {
            let canonical = resolver.resolve(name).ok_or_else(|| CatalogError::UnresolvedDfxName {
                name: name.clone(),
                referenced_from: format!("{f} line {line}"),
            })?;
            if !relevant.iter().any(|x: &String| x == canonical) {
                relevant.push(canonical.to_string());
            }
        }
        let phases = PhaseFlags {
            production: parse_flag(f, line, "production", &r[2])?,
            evaluation: parse_flag(f, line, "evaluation", &r[3])?,
            experience: parse_flag(f, line, "experience", &r[4])?,
        };
        if phases.phases().is_empty() {
            return Err(CatalogError::SchemaViolation {
                file: f.into(),
                line: Some(line),
                message: format!("strategy '{strategy}' has no phase flag"),
            });
        }
        out.push(StrategyMapping {
            gap: relevant.is_empty(),
            phase_best_effort: best_effort.contains(strategy.as_str()),
            strategy,
            relevant_dfx: relevant,
            listed_as,
            phases,
        });
    }
    if out.len() != STRATEGY_COUNT {
        return Err(CatalogError::CardinalityMismatch {
            what: "customer-satisfaction strategies".into(),
            expected: STRATEGY_COUNT,
            found: out.len(),
        });
    }
    Ok(out)
}
