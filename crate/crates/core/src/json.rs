//! JSON formats for models, choice functions, structures and bimodal models.
//!
//! Subsets are arrays of names; on output they follow declaration order.
//! Loaders reject unknown and repeated names.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::{ChoiceError, ChoiceFunction};
use crate::cjmodel::{CJModel, ModelError, ObMap};
use crate::modal::{BiModalModel, ModalError};
use crate::prefstruct::{CopyRef, PrefError, PrefStructure};
use crate::set::{Family, Set};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` listed twice in one set")]
    Repeated(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error(transparent)]
    Modal(#[from] ModalError),
}

fn to_set(names: &[String], items: &[String]) -> Result<Set, JsonError> {
    let mut s = Set::EMPTY;
    for it in items {
        let i = names
            .iter()
            .position(|n| n == it)
            .ok_or_else(|| JsonError::UnknownName(it.clone()))?;
        if s.contains(i) {
            return Err(JsonError::Repeated(it.clone()));
        }
        s = s.with(i);
    }
    Ok(s)
}

fn to_names(names: &[String], s: Set) -> Vec<String> {
    s.iter().map(|i| names[i].clone()).collect()
}

fn index_of(names: &[String], name: &str) -> Result<usize, JsonError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| JsonError::UnknownName(name.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObEntryJson {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub family: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CjModelJson {
    pub atoms: Vec<String>,
    pub worlds: Vec<String>,
    pub valuation: BTreeMap<String, Vec<String>>,
    pub av: BTreeMap<String, Vec<String>>,
    pub pv: BTreeMap<String, Vec<String>>,
    pub ob: Vec<ObEntryJson>,
    /// Families hold cores `A ∩ X` rather than all members.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized: bool,
}

impl CjModelJson {
    pub fn from_model(m: &CJModel) -> CjModelJson {
        let w = m.worlds();
        let per_world = |sets: &[Set]| {
            w.iter()
                .zip(sets)
                .map(|(name, &s)| (name.clone(), to_names(w, s)))
                .collect()
        };
        let ob = m.ob();
        CjModelJson {
            atoms: m.atoms().to_vec(),
            worlds: w.to_vec(),
            valuation: m
                .atoms()
                .iter()
                .zip(m.valuation())
                .map(|(a, &s)| (a.clone(), to_names(w, s)))
                .collect(),
            av: per_world(m.av()),
            pv: per_world(m.pv()),
            ob: m
                .universe()
                .subsets()
                .filter(|&x| !ob.family(x).is_empty())
                .map(|x| ObEntryJson {
                    x: to_names(w, x),
                    family: ob.family(x).iter().map(|a| to_names(w, a)).collect(),
                })
                .collect(),
            normalized: ob.is_normalized(),
        }
    }

    pub fn to_model(&self) -> Result<CJModel, JsonError> {
        let w = &self.worlds;
        let n = w.len();
        if n > crate::set::MAX_FAMILY_ELEMENTS {
            return Err(ModelError::TooManyWorlds(n).into());
        }
        let set = |items: &[String]| -> Result<Set, JsonError> {
            to_set(w, items).map_err(|e| match e {
                JsonError::UnknownName(x) => ModelError::UnknownWorld(x).into(),
                JsonError::Repeated(x) => ModelError::DuplicateMember { world: x }.into(),
                other => other,
            })
        };
        let mut valuation = Vec::new();
        for a in &self.atoms {
            valuation.push(match self.valuation.get(a) {
                Some(ws) => set(ws)?,
                None => Set::EMPTY,
            });
        }
        if let Some(a) = self.valuation.keys().find(|a| !self.atoms.contains(a)) {
            return Err(ModelError::UnknownAtom(a.clone()).into());
        }
        let per_world = |m: &BTreeMap<String, Vec<String>>| -> Result<Vec<Set>, JsonError> {
            if let Some(k) = m.keys().find(|k| !w.contains(k)) {
                return Err(ModelError::UnknownWorld(k.clone()).into());
            }
            w.iter()
                .map(|name| m.get(name).map_or(Ok(Set::EMPTY), |v| set(v)))
                .collect()
        };
        let (av, pv) = (per_world(&self.av)?, per_world(&self.pv)?);
        let mut families = vec![Family::EMPTY; 1 << n];
        let mut seen = vec![false; 1 << n];
        for e in &self.ob {
            let x = set(&e.x)?;
            if std::mem::replace(&mut seen[x.index()], true) {
                return Err(ModelError::DuplicateContext(e.x.clone()).into());
            }
            for a in &e.family {
                families[x.index()].insert(set(a)?);
            }
        }
        let ob = ObMap::from_families(n, families, self.normalized);
        Ok(CJModel::new(
            w.clone(),
            self.atoms.clone(),
            valuation,
            av,
            pv,
            ob,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceEntryJson {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "fX")]
    pub fx: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceJson {
    pub universe: Vec<String>,
    pub entries: Vec<ChoiceEntryJson>,
}

impl ChoiceJson {
    pub fn from_choice(cf: &ChoiceFunction) -> ChoiceJson {
        let u = cf.universe();
        ChoiceJson {
            universe: u.to_vec(),
            entries: cf
                .entries()
                .map(|(x, v)| ChoiceEntryJson {
                    x: to_names(u, x),
                    fx: to_names(u, v),
                })
                .collect(),
        }
    }

    pub fn to_choice(&self) -> Result<ChoiceFunction, JsonError> {
        let u = &self.universe;
        if u.len() > crate::set::MAX_FAMILY_ELEMENTS {
            return Err(ChoiceError::TooLarge(u.len()).into());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((to_set(u, &e.x)?, to_set(u, &e.fx)?)))
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(ChoiceFunction::new(u.clone(), entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CopyRefJson {
    pub point: String,
    pub index: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefJson {
    pub points: Vec<String>,
    pub copies: Vec<CopyRefJson>,
    #[serde(default)]
    pub omega: Vec<String>,
    /// `[lower, upper]` pairs.
    #[serde(default)]
    pub edges: Vec<(CopyRefJson, CopyRefJson)>,
}

impl PrefJson {
    pub fn from_structure(s: &PrefStructure) -> PrefJson {
        let p = s.points();
        let c = |r: CopyRef| CopyRefJson {
            point: p[r.point].clone(),
            index: r.index,
        };
        PrefJson {
            points: p.to_vec(),
            copies: s.copies().iter().map(|&r| c(r)).collect(),
            omega: to_names(p, s.omega()),
            edges: s.edges().map(|(a, b)| (c(a), c(b))).collect(),
        }
    }

    pub fn to_structure(&self) -> Result<PrefStructure, JsonError> {
        let p = &self.points;
        let c = |r: &CopyRefJson| -> Result<CopyRef, JsonError> {
            Ok(CopyRef {
                point: index_of(p, &r.point)?,
                index: r.index,
            })
        };
        let copies = self.copies.iter().map(c).collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| Ok((c(a)?, c(b)?)))
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(PrefStructure::new(
            p.clone(),
            copies,
            to_set(p, &self.omega)?,
            edges,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalJson {
    pub worlds: Vec<String>,
    pub entry: String,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(rename = "R")]
    pub r: Vec<(String, String)>,
    #[serde(rename = "Rmin", default)]
    pub rmin: Vec<(String, String)>,
}

impl ModalJson {
    pub fn from_model(m: &BiModalModel) -> ModalJson {
        let w = m.worlds();
        let pairs = |rel: &[Set]| {
            rel.iter()
                .enumerate()
                .flat_map(|(a, s)| s.iter().map(move |b| (w[a].clone(), w[b].clone())))
                .collect()
        };
        ModalJson {
            worlds: w.to_vec(),
            entry: w[m.entry()].clone(),
            valuation: m
                .atoms()
                .iter()
                .zip(m.valuation())
                .map(|(a, &s)| (a.clone(), to_names(w, s)))
                .collect(),
            r: pairs(m.r()),
            rmin: pairs(m.rmin()),
        }
    }

    pub fn to_model(&self) -> Result<BiModalModel, JsonError> {
        for ws in self.valuation.values() {
            to_set(&self.worlds, ws)?;
        }
        Ok(BiModalModel::from_names(
            self.worlds.clone(),
            &self.entry,
            self.valuation
                .iter()
                .map(|(a, ws)| (a.clone(), ws.clone()))
                .collect(),
            &self.r,
            &self.rmin,
        )?)
    }
}

pub fn read_cj(text: &str) -> Result<CJModel, JsonError> {
    serde_json::from_str::<CjModelJson>(text)?.to_model()
}

pub fn write_cj(m: &CJModel) -> String {
    serde_json::to_string_pretty(&CjModelJson::from_model(m)).expect("serializable")
}

pub fn read_choice(text: &str) -> Result<ChoiceFunction, JsonError> {
    serde_json::from_str::<ChoiceJson>(text)?.to_choice()
}

pub fn write_choice(cf: &ChoiceFunction) -> String {
    serde_json::to_string_pretty(&ChoiceJson::from_choice(cf)).expect("serializable")
}

pub fn read_pref(text: &str) -> Result<PrefStructure, JsonError> {
    serde_json::from_str::<PrefJson>(text)?.to_structure()
}

pub fn write_pref(s: &PrefStructure) -> String {
    serde_json::to_string_pretty(&PrefJson::from_structure(s)).expect("serializable")
}

pub fn read_modal(text: &str) -> Result<BiModalModel, JsonError> {
    serde_json::from_str::<ModalJson>(text)?.to_model()
}

pub fn write_modal(m: &BiModalModel) -> String {
    serde_json::to_string_pretty(&ModalJson::from_model(m)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cjmodel::build_example_1_1;
    use crate::modal::all_models;

    #[test]
    fn cj_round_trip() {
        let m = build_example_1_1();
        let text = write_cj(&m);
        assert_eq!(read_cj(&text).unwrap(), m);
    }

    #[test]
    fn cj_rejects_bad_names() {
        let text = r#"{"atoms":["p"],"worlds":["a","b"],"valuation":{"p":["a","a"]},
                       "av":{},"pv":{},"ob":[]}"#;
        assert!(matches!(
            read_cj(text),
            Err(JsonError::Model(ModelError::DuplicateMember { .. }))
        ));
        let text = r#"{"atoms":["p"],"worlds":["a"],"valuation":{},"av":{"z":[]},"pv":{},"ob":[]}"#;
        assert!(matches!(
            read_cj(text),
            Err(JsonError::Model(ModelError::UnknownWorld(_)))
        ));
        let text = r#"{"atoms":["p"],"worlds":["a"],"valuation":{},"av":{},"pv":{},
                       "ob":[{"X":["a"],"family":[]},{"X":["a"],"family":[]}]}"#;
        assert!(matches!(
            read_cj(text),
            Err(JsonError::Model(ModelError::DuplicateContext(_)))
        ));
        assert!(matches!(read_cj("{"), Err(JsonError::Syntax(_))));
    }

    #[test]
    fn choice_round_trip() {
        let cf = ChoiceFunction::minimal(3, |a, b| a < b);
        assert_eq!(read_choice(&write_choice(&cf)).unwrap(), cf);
        let partial = r#"{"universe":["a","b"],"entries":[{"X":["a","b"],"fX":["b"]}]}"#;
        let cf = read_choice(partial).unwrap();
        assert_eq!(cf.domain().len(), 1);
        assert_eq!(cf.get(Set(0b11)), Some(Set(0b10)));
    }

    #[test]
    fn pref_round_trip() {
        let text = r#"{"points":["a","b","c"],
            "copies":[{"point":"a","index":0},{"point":"b","index":0},{"point":"b","index":1}],
            "omega":["c"],
            "edges":[[{"point":"a","index":0},{"point":"b","index":1}]]}"#;
        let s = read_pref(text).unwrap();
        assert_eq!(s.mu(Set(0b111)), Set(0b011));
        assert_eq!(read_pref(&write_pref(&s)).unwrap(), s);
    }

    #[test]
    fn modal_round_trip() {
        for m in all_models(2) {
            assert_eq!(read_modal(&write_modal(&m)).unwrap(), m);
        }
        let bad = r#"{"worlds":["u","a"],"entry":"u","R":[["u","a"],["a","u"]]}"#;
        assert!(matches!(
            read_modal(bad),
            Err(JsonError::Modal(ModalError::NotTransitive(..)))
        ));
    }
}
