use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Poset, PosetError};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("element label {0:?} appears twice")]
    DuplicateLabel(String),
    #[error("cover refers to unknown element {0:?}")]
    UnknownLabel(String),
    #[error("rank given for unknown element {0:?}")]
    UnknownRankLabel(String),
    #[error(transparent)]
    Structure(#[from] PosetError),
}

/// Wire format: element labels, `[lower, upper]` cover pairs and an optional
/// rank table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPoset {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<BTreeMap<String, u32>>,
}

impl JsonPoset {
    pub fn from_poset(poset: &Poset) -> Self {
        let labels = poset.labels();
        let covers = poset
            .covers()
            .into_iter()
            .map(|(a, b)| [labels[a].clone(), labels[b].clone()])
            .collect();
        let ranks = Some(labels.iter().cloned().zip(poset.ranks().iter().copied()).collect());
        Self { elements: labels.to_vec(), covers, ranks }
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Resolves labels and validates structure (and ranks, when present).
    pub fn to_poset(&self) -> Result<Poset, JsonError> {
        let mut index = HashMap::with_capacity(self.elements.len());
        for (i, label) in self.elements.iter().enumerate() {
            if index.insert(label.as_str(), i).is_some() {
                return Err(JsonError::DuplicateLabel(label.clone()));
            }
        }
        let lookup = |label: &String| index.get(label.as_str()).copied().ok_or_else(|| JsonError::UnknownLabel(label.clone()));
        let covers = self
            .covers
            .iter()
            .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, JsonError>>()?;
        let labels = self.elements.clone();
        match &self.ranks {
            None => Ok(Poset::from_covers(labels, &covers)?),
            Some(table) => {
                if let Some(extra) = table.keys().find(|k| !index.contains_key(k.as_str())) {
                    return Err(JsonError::UnknownRankLabel(extra.clone()));
                }
                let poset = Poset::from_covers(labels.clone(), &covers)?;
                // Unlisted elements take their computed rank.
                let offset = table.get(&labels[poset.bottom()]).copied().unwrap_or(0);
                let declared: Vec<u32> = labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| table.get(l).copied().unwrap_or(poset.rank(i) + offset))
                    .collect();
                Ok(Poset::from_covers_with_ranks(labels, &covers, &declared)?)
            }
        }
    }
}

impl JsonError {
    /// Whether the error concerns the text rather than the order it encodes.
    pub fn is_malformed(&self) -> bool {
        !matches!(self, JsonError::Structure(_))
    }
}
