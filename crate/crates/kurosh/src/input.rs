//! The JSON input document: named groups, free products, amalgams and
//! subgroup definitions, resolved into a [`Session`] of live objects.
//!
//! Entries may reference previously declared names (groups resolve in
//! declaration order; free products and amalgams resolve after all groups).
//! Subgroups name an ambient — either a free product or an amalgam; in the
//! latter case the generator words are read over the amalgam's quotient
//! product and the optional `twists` choose the lift of each basis element.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::amalgam::{AmalgamSpec, LiftedSubgroup};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::graph::SubgroupGraph;
use crate::group::FiniteGroup;
use crate::word::{FreeProduct, Word};

/// One named group, built by exactly one of the constructor fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub name: String,
    #[serde(default)]
    pub cyclic: Option<usize>,
    #[serde(default)]
    pub dihedral: Option<usize>,
    /// Two or more group names, folded into a direct product left to right.
    #[serde(default)]
    pub direct_product: Option<Vec<String>>,
    /// Explicit multiplication table (with optional `generators`).
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub generators: Option<Vec<usize>>,
    #[serde(default)]
    pub quotient: Option<QuotientEntry>,
}

/// A quotient constructor: an earlier group modulo a normal subgroup given by
/// its element list.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientEntry {
    pub group: String,
    pub normal: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeProductEntry {
    pub name: String,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmalgamEntry {
    pub name: String,
    pub left: String,
    pub right: String,
    /// The edge (amalgamated) group.
    pub edge: String,
    /// Image of each edge-group element in the left group.
    pub left_image: Vec<usize>,
    pub right_image: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupEntry {
    /// Name of a free product or of an amalgam.
    pub ambient: String,
    /// Generator words in the textual grammar.
    pub generators: Vec<String>,
    /// Lift twists (amalgam ambients only), one edge-group element index per
    /// free-basis element; defaults to all zero.
    #[serde(default)]
    pub twists: Option<Vec<usize>>,
}

/// The raw document.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default)]
    pub groups: Vec<GroupEntry>,
    #[serde(default)]
    pub free_products: Vec<FreeProductEntry>,
    #[serde(default)]
    pub amalgams: Vec<AmalgamEntry>,
    #[serde(default)]
    pub subgroups: BTreeMap<String, SubgroupEntry>,
}

/// A resolved document: every name bound to a live object.
#[derive(Debug, Clone)]
pub struct Session {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub products: BTreeMap<String, FreeProduct>,
    pub amalgams: BTreeMap<String, AmalgamSpec>,
    pub subgroups: BTreeMap<String, SubgroupEntry>,
}

fn build_group(entry: &GroupEntry, known: &BTreeMap<String, FiniteGroup>) -> Result<FiniteGroup> {
    let mut constructors = 0;
    for present in [
        entry.cyclic.is_some(),
        entry.dihedral.is_some(),
        entry.direct_product.is_some(),
        entry.table.is_some(),
        entry.quotient.is_some(),
    ] {
        constructors += usize::from(present);
    }
    if constructors != 1 {
        return Err(Error::InvalidGroup(format!(
            "group {:?} must use exactly one of cyclic/dihedral/direct_product/table/quotient",
            entry.name
        )));
    }
    let lookup = |name: &str| -> Result<&FiniteGroup> {
        known.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    };
    if let Some(n) = entry.cyclic {
        return FiniteGroup::cyclic(n);
    }
    if let Some(n) = entry.dihedral {
        return FiniteGroup::dihedral(n);
    }
    if let Some(parts) = &entry.direct_product {
        if parts.len() < 2 {
            return Err(Error::InvalidGroup("direct_product needs at least two factors".into()));
        }
        let mut acc = lookup(&parts[0])?.clone();
        for part in &parts[1..] {
            acc = FiniteGroup::direct_product(&acc, lookup(part)?);
        }
        return Ok(acc);
    }
    if let Some(table) = &entry.table {
        return FiniteGroup::from_table(
            entry.name.clone(),
            table.clone(),
            entry.generators.clone().unwrap_or_default(),
        );
    }
    let q = entry.quotient.as_ref().expect("one constructor present");
    Ok(lookup(&q.group)?.quotient(&q.normal)?.group)
}

impl Session {
    pub fn from_doc(doc: &InputDoc) -> Result<Session> {
        let mut groups: BTreeMap<String, FiniteGroup> = BTreeMap::new();
        for entry in &doc.groups {
            if groups.contains_key(&entry.name) {
                return Err(Error::InvalidGroup(format!("duplicate group name {:?}", entry.name)));
            }
            let g = build_group(entry, &groups)?;
            groups.insert(entry.name.clone(), g);
        }
        let mut products: BTreeMap<String, FreeProduct> = BTreeMap::new();
        for entry in &doc.free_products {
            let factors: Result<Vec<FiniteGroup>> = entry
                .factors
                .iter()
                .map(|n| groups.get(n).cloned().ok_or_else(|| Error::UnknownName(n.clone())))
                .collect();
            products.insert(entry.name.clone(), FreeProduct::new(factors?)?);
        }
        let mut amalgams: BTreeMap<String, AmalgamSpec> = BTreeMap::new();
        for entry in &doc.amalgams {
            let get = |n: &String| groups.get(n).cloned().ok_or_else(|| Error::UnknownName(n.clone()));
            let spec = AmalgamSpec::new(
                get(&entry.left)?,
                get(&entry.right)?,
                get(&entry.edge)?,
                entry.left_image.clone(),
                entry.right_image.clone(),
            )?;
            amalgams.insert(entry.name.clone(), spec);
        }
        Ok(Session { groups, products, amalgams, subgroups: doc.subgroups.clone() })
    }

    pub fn from_path(path: &Path) -> Result<Session> {
        let text = std::fs::read_to_string(path)?;
        let doc: InputDoc = serde_json::from_str(&text)?;
        Session::from_doc(&doc)
    }

    pub fn subgroup(&self, name: &str) -> Result<&SubgroupEntry> {
        self.subgroups.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// The word universe a subgroup's generators live in: the named free
    /// product, or the quotient product of the named amalgam.
    pub fn ambient_product(&self, ambient: &str) -> Result<&FreeProduct> {
        if let Some(p) = self.products.get(ambient) {
            return Ok(p);
        }
        if let Some(a) = self.amalgams.get(ambient) {
            return Ok(a.quotient_product());
        }
        Err(Error::UnknownName(ambient.to_string()))
    }

    pub fn parse_generators(&self, entry: &SubgroupEntry) -> Result<Vec<Word>> {
        let product = self.ambient_product(&entry.ambient)?;
        entry.generators.iter().map(|s| product.parse_word(s)).collect()
    }

    /// Fold a named subgroup's generators over its ambient product.
    pub fn subgroup_automaton(&self, name: &str) -> Result<(Automaton, &SubgroupEntry)> {
        let entry = self.subgroup(name)?;
        let product = self.ambient_product(&entry.ambient)?;
        let words = self.parse_generators(entry)?;
        Ok((Automaton::fold(product, &words), entry))
    }

    /// Resolve a named subgroup of the given amalgam into a lifted subgroup,
    /// applying its declared twists (zero by default).
    pub fn lifted_subgroup(&self, amalgam: &str, name: &str) -> Result<LiftedSubgroup> {
        let am = self.amalgams.get(amalgam).ok_or_else(|| Error::UnknownName(amalgam.to_string()))?;
        let entry = self.subgroup(name)?;
        if entry.ambient != amalgam {
            return Err(Error::AmalgamMismatch(format!(
                "subgroup {name:?} has ambient {:?}, expected amalgam {amalgam:?}",
                entry.ambient
            )));
        }
        let words = self.parse_generators(entry)?;
        let aut = Automaton::fold(am.quotient_product(), &words);
        let twists = match &entry.twists {
            Some(t) => t.clone(),
            None => vec![0; SubgroupGraph::new(&aut)?.rank()],
        };
        LiftedSubgroup::new(am, &aut, twists)
    }
}
