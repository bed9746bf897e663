use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DistributionSpec, Family, GRAM_CHARLIER_DOMAIN};
use crate::{Error, Real, Result};

/// Wire form of a [`DistributionSpec`]:
/// `{"family": "weibull2", "params": {"shape": 2.0, "scale": 8.0}}` or
/// `{"family": "tabulated", "grid": [[x, p], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<[f64; 2]>>,
}

impl<T: Real> DistributionSpec<T> {
    pub fn to_document(&self) -> SpecDocument {
        let family = self.family();
        let mut params: BTreeMap<String, f64> = family
            .param_names()
            .iter()
            .zip(self.params())
            .map(|(n, v)| (n.to_string(), v.as_f64()))
            .collect();
        let mut grid = None;
        match self {
            DistributionSpec::GramCharlier3 { domain, .. } => {
                if domain.as_f64() != GRAM_CHARLIER_DOMAIN {
                    params.insert("domain".into(), domain.as_f64());
                }
            }
            DistributionSpec::Tabulated(t) => {
                grid = Some(t.nodes().map(|(x, p)| [x.as_f64(), p.as_f64()]).collect());
            }
            _ => {}
        }
        SpecDocument {
            family: family.name().to_string(),
            params,
            grid,
        }
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let family: Family = doc.family.parse()?;
        let cast = |v: f64| {
            T::from_f64(v).ok_or_else(|| Error::Format(format!("value {v} not representable")))
        };
        if family == Family::Tabulated {
            if !doc.params.is_empty() {
                return Err(Error::Format("tabulated specs take a grid, not params".into()));
            }
            let grid = doc
                .grid
                .as_ref()
                .ok_or_else(|| Error::Format("tabulated spec needs a `grid`".into()))?;
            let grid = grid
                .iter()
                .map(|[x, p]| Ok((cast(*x)?, cast(*p)?)))
                .collect::<Result<Vec<_>>>()?;
            return Self::tabulated(&grid);
        }
        if doc.grid.is_some() {
            return Err(Error::Format(format!("{family} does not take a grid")));
        }
        let names = family.param_names();
        let extra = |k: &String| {
            !names.contains(&k.as_str()) && !(family == Family::GramCharlier3 && k == "domain")
        };
        if let Some(k) = doc.params.keys().find(|k| extra(k)) {
            return Err(Error::Format(format!(
                "unknown parameter `{k}` for {family}; expected {names:?}"
            )));
        }
        let values = names
            .iter()
            .map(|n| {
                doc.params
                    .get(*n)
                    .ok_or_else(|| Error::Format(format!("{family} is missing parameter `{n}`")))
                    .and_then(|v| cast(*v))
            })
            .collect::<Result<Vec<T>>>()?;
        match doc.params.get("domain") {
            Some(&d) if family == Family::GramCharlier3 => {
                Self::gram_charlier3_with_domain(values[0], cast(d)?)
            }
            _ => Self::from_params(family, &values),
        }
    }
}

impl<T: Real> Serialize for DistributionSpec<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for DistributionSpec<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SpecDocument::deserialize(deserializer)?;
        Self::from_document(&doc).map_err(serde::de::Error::custom)
    }
}
