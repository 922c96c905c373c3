use serde::{Deserialize, Serialize};

use super::{squash, CatalogError, Character, DfxEntry, Focus, Scope};

/// Conjunction of attribute predicates over the catalog. `None` matches anything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfxFilter {
    /// Exact name, or any spelling the resolver accepts ("Design for Cost").
    pub name: Option<String>,
    pub scope: Option<Scope>,
    pub character: Option<Character>,
    pub focus: Option<Focus>,
    /// Case-insensitive substring of any goal.
    pub goal: Option<String>,
}

impl DfxFilter {
    pub const FIELDS: &'static [&'static str] = &["name", "scope", "character", "focus", "goal"];

    /// Builds a filter from `field=value` pairs, as given on a command line or
    /// in a query string.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self, CatalogError> {
        let mut f = Self::default();
        for (k, v) in pairs {
            let (field, value) = (k.as_ref().trim(), v.as_ref().trim());
            let invalid = || CatalogError::InvalidFilterValue {
                field: field.to_string(),
                value: value.to_string(),
            };
            match field {
                "name" => f.name = Some(value.to_string()),
                "scope" => f.scope = Some(value.parse().map_err(|_| invalid())?),
                "character" => f.character = Some(value.parse().map_err(|_| invalid())?),
                "focus" => f.focus = Some(value.parse().map_err(|_| invalid())?),
                "goal" => f.goal = Some(value.to_string()),
                other => {
                    return Err(CatalogError::UnknownFilterField {
                        field: other.to_string(),
                    })
                }
            }
        }
        Ok(f)
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub(super) fn matches(&self, d: &DfxEntry) -> bool {
        let name_ok = self.name.as_ref().is_none_or(|n| {
            let key = squash(super::strip_prefix(n));
            key == squash(&d.name) || key == squash(d.short_name())
        });
        let goal_ok = self.goal.as_ref().is_none_or(|g| {
            let needle = g.to_lowercase();
            d.goals.iter().any(|x| x.to_lowercase().contains(&needle))
        });
        name_ok
            && goal_ok
            && self.scope.is_none_or(|s| s == d.scope)
            && self.character.is_none_or(|c| c == d.character)
            && self.focus.is_none_or(|f| f == d.focus)
    }
}
