//! Explicit finite interpretations and their JSON form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::syntax::{Signature, TOP_NAME};
use crate::{Error, Result};

/// A finite interpretation. Elements are `0..labels.len()`; labels are the
/// stable names used in JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interp {
    pub labels: Vec<String>,
    pub concepts: BTreeMap<String, BTreeSet<usize>>,
    pub roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub individuals: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    domain: Vec<String>,
    concepts: BTreeMap<String, Vec<String>>,
    roles: BTreeMap<String, Vec<[String; 2]>>,
    individuals: BTreeMap<String, String>,
}

impl Interp {
    /// `n` elements labelled `e0, e1, ...` over the given signature, all extensions empty.
    pub fn new(n: usize, sig: &Signature) -> Self {
        let mut i = Interp { labels: (0..n).map(|k| format!("e{k}")).collect(), ..Default::default() };
        i.extend_signature(sig);
        i
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Interp { labels, ..Default::default() }
    }

    /// Make every name of `sig` present (with an empty extension if new).
    pub fn extend_signature(&mut self, sig: &Signature) {
        for c in &sig.concepts {
            if c != TOP_NAME {
                self.concepts.entry(c.clone()).or_default();
            }
        }
        for r in &sig.roles {
            self.roles.entry(r.clone()).or_default();
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn add_element(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn insert_concept(&mut self, name: &str, d: usize) {
        self.concepts.entry(name.to_string()).or_default().insert(d);
    }

    pub fn insert_edge(&mut self, role: &str, d: usize, e: usize) {
        self.roles.entry(role.to_string()).or_default().insert((d, e));
    }

    pub fn in_concept(&self, name: &str, d: usize) -> bool {
        self.concepts.get(name).is_some_and(|s| s.contains(&d))
    }

    pub fn has_edge(&self, role: &str, d: usize, e: usize) -> bool {
        self.roles.get(role).is_some_and(|s| s.contains(&(d, e)))
    }

    /// `r^I(d)`.
    pub fn successors<'a>(&'a self, role: &str, d: usize) -> impl Iterator<Item = usize> + 'a {
        self.roles.get(role).into_iter().flat_map(move |s| s.range((d, 0)..=(d, usize::MAX)).map(|p| p.1))
    }

    /// All role successors of `d`.
    pub fn ars(&self, d: usize) -> Result<BTreeSet<usize>> {
        if d >= self.size() {
            return Err(Error::Invalid(format!("unknown element {d}")));
        }
        Ok(self.roles.keys().flat_map(|r| self.successors(r, d)).collect())
    }

    pub fn signature(&self) -> Signature {
        Signature {
            concepts: self.concepts.keys().cloned().collect(),
            roles: self.roles.keys().cloned().collect(),
            individuals: self.individuals.keys().cloned().collect(),
        }
    }

    /// Structural sanity: non-empty domain, unique labels, extensions in range.
    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        if n == 0 {
            return Err(Error::Invalid("interpretation domain is empty".into()));
        }
        if self.labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::Invalid("duplicate element label".into()));
        }
        let bad = self.concepts.values().flatten().any(|d| *d >= n)
            || self.roles.values().flatten().any(|(d, e)| *d >= n || *e >= n)
            || self.individuals.values().any(|d| *d >= n);
        if bad {
            return Err(Error::Invalid("extension refers to an element outside the domain".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let l = |d: &usize| self.labels[*d].clone();
        let m = ModelJson {
            domain: self.labels.clone(),
            concepts: self.concepts.iter().map(|(k, v)| (k.clone(), v.iter().map(l).collect())).collect(),
            roles: self.roles.iter().map(|(k, v)| (k.clone(), v.iter().map(|(d, e)| [l(d), l(e)]).collect())).collect(),
            individuals: self.individuals.iter().map(|(k, v)| (k.clone(), l(v))).collect(),
        };
        serde_json::to_string_pretty(&m).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: ModelJson = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model JSON: {e}")))?;
        let index: BTreeMap<&str, usize> = m.domain.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let id = |l: &str| index.get(l).copied().ok_or_else(|| Error::Invalid(format!("unknown element label '{l}'")));
        let mut i = Interp::with_labels(m.domain.clone());
        for (c, elems) in &m.concepts {
            let set = elems.iter().map(|l| id(l)).collect::<Result<_>>()?;
            i.concepts.insert(c.clone(), set);
        }
        for (r, pairs) in &m.roles {
            let set = pairs.iter().map(|[a, b]| Ok((id(a)?, id(b)?))).collect::<Result<_>>()?;
            i.roles.insert(r.clone(), set);
        }
        for (a, l) in &m.individuals {
            i.individuals.insert(a.clone(), id(l)?);
        }
        i.validate()?;
        Ok(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut i = Interp::new(2, &Signature::default());
        i.insert_concept("A", 1);
        i.insert_edge("r", 0, 1);
        i.individuals.insert("a".into(), 0);
        let text = i.to_json();
        assert!(text.contains("\"domain\""));
        assert_eq!(Interp::from_json(&text).unwrap(), i);
    }

    #[test]
    fn ars_unions_roles() {
        let mut i = Interp::new(2, &Signature::default());
        assert!(i.ars(0).unwrap().is_empty());
        i.insert_edge("r", 0, 1);
        i.insert_edge("s", 0, 1);
        assert_eq!(i.ars(0).unwrap(), BTreeSet::from([1]));
        assert!(i.ars(5).is_err());
    }

    #[test]
    fn rejects_unknown_labels() {
        let text = r#"{"domain":["x"],"concepts":{"A":["y"]},"roles":{},"individuals":{}}"#;
        assert!(Interp::from_json(text).is_err());
    }
}
