use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FunctionTable, Label, Mode, QuotientError, SchemeParams};

/// One secret equivalence class of function tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    label: Label,
    /// Index of the canonical representative within `members`.
    canonical: usize,
    /// Sorted lexicographically.
    members: Vec<FunctionTable>,
}

impl Class {
    /// Sorts `members` and designates the canonical representative: the shift
    /// if the class holds one, otherwise the lexicographically smallest table.
    pub fn new(label: Label, mut members: Vec<FunctionTable>) -> Self {
        members.sort();
        let canonical = members
            .iter()
            .position(|t| t.as_shift().is_some())
            .unwrap_or(0);
        Class {
            label,
            canonical,
            members,
        }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn members(&self) -> &[FunctionTable] {
        &self.members
    }

    pub fn canonical(&self) -> &FunctionTable {
        &self.members[self.canonical]
    }
}

/// The secret partition together with the residue carried by each shift class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SecretKeyJson", into = "SecretKeyJson")]
pub struct SecretKey {
    params: SchemeParams,
    classes: Vec<Class>,
    shift_labels: Vec<Label>,
    class_by_label: HashMap<Label, usize>,
    class_by_table: HashMap<FunctionTable, usize>,
}

impl PartialEq for SecretKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.classes == other.classes
    }
}

impl Eq for SecretKey {}

impl SecretKey {
    /// Assemble a key from classes, checking every partition invariant.
    pub fn from_parts(
        params: SchemeParams,
        mut classes: Vec<Class>,
    ) -> Result<Self, QuotientError> {
        let bad = |msg: String| Err(QuotientError::InvalidKey(msg));
        let n = params.n;
        classes.sort_by_key(Class::label);

        let mut class_by_label = HashMap::with_capacity(classes.len());
        let mut class_by_table = HashMap::new();
        let mut shift_labels = vec![None; n];
        for (idx, class) in classes.iter().enumerate() {
            if class_by_label.insert(class.label, idx).is_some() {
                return bad(format!("duplicate label {}", class.label));
            }
            if class.members.is_empty() || class.canonical >= class.members.len() {
                return bad(format!(
                    "class {} has no valid canonical member",
                    class.label
                ));
            }
            if class.members.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!(
                    "class {} members are not strictly ascending",
                    class.label
                ));
            }
            if class.members.len() != params.class_size {
                return bad(format!(
                    "class {} has {} members, expected {}",
                    class.label,
                    class.members.len(),
                    params.class_size
                ));
            }
            let mut shifts = 0;
            for table in &class.members {
                if table.n() != n || table.values().iter().any(|&v| v as usize >= n) {
                    return bad(format!("table {table} is not a function on {n} points"));
                }
                if class_by_table.insert(table.clone(), idx).is_some() {
                    return bad(format!("table {table} appears in two classes"));
                }
                shifts += usize::from(table.as_shift().is_some());
            }
            match (shifts, class.canonical().as_shift()) {
                (0, None) if class.canonical == 0 => {}
                (1, Some(k)) => shift_labels[k] = Some(class.label),
                _ => {
                    return bad(format!(
                        "class {} has an invalid representative",
                        class.label
                    ))
                }
            }
        }
        let shift_labels: Vec<Label> = shift_labels
            .into_iter()
            .enumerate()
            .map(|(k, l)| {
                l.ok_or_else(|| QuotientError::InvalidKey(format!("shift f_{k} is in no class")))
            })
            .collect::<Result<_, _>>()?;
        let expected_classes = match params.mode {
            Mode::Full => params
                .universe_size()
                .map(|t| (t / params.class_size as u128) as usize),
            Mode::Sampled => Some(n + params.universe_extra),
        };
        if expected_classes != Some(classes.len()) {
            return bad(format!(
                "{} classes do not match the parameters",
                classes.len()
            ));
        }
        Ok(SecretKey {
            params,
            classes,
            shift_labels,
            class_by_label,
            class_by_table,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    /// Classes in ascending label order.
    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    /// `shift_labels()[k]` is the label of the class hiding `f_k`.
    pub fn shift_labels(&self) -> &[Label] {
        &self.shift_labels
    }

    pub fn class_of_label(&self, label: Label) -> Option<&Class> {
        self.class_by_label.get(&label).map(|&i| &self.classes[i])
    }

    pub fn class_of_table(&self, table: &FunctionTable) -> Option<&Class> {
        self.class_by_table.get(table).map(|&i| &self.classes[i])
    }

    pub fn residue_of(&self, label: Label) -> Result<usize, QuotientError> {
        let class = self
            .class_of_label(label)
            .ok_or(QuotientError::UnknownLabel(label))?;
        class
            .canonical()
            .as_shift()
            .ok_or(QuotientError::NotAShiftClass(label))
    }
}

#[derive(Serialize, Deserialize)]
struct SecretKeyJson {
    params: SchemeParams,
    classes: Vec<Class>,
    shift_labels: Vec<Label>,
}

impl From<SecretKey> for SecretKeyJson {
    fn from(sk: SecretKey) -> Self {
        SecretKeyJson {
            params: sk.params,
            classes: sk.classes,
            shift_labels: sk.shift_labels,
        }
    }
}

impl TryFrom<SecretKeyJson> for SecretKey {
    type Error = QuotientError;

    fn try_from(json: SecretKeyJson) -> Result<Self, Self::Error> {
        json.params.validate()?;
        let sk = SecretKey::from_parts(json.params, json.classes)?;
        if sk.shift_labels != json.shift_labels {
            return Err(QuotientError::InvalidKey(
                "shift labels disagree with the classes".into(),
            ));
        }
        Ok(sk)
    }
}

const UNDEFINED: u32 = u32::MAX;

/// Public evaluation key: the label universe and the class composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PublicKeyJson", into = "PublicKeyJson")]
pub struct PublicEvalKey {
    /// Ascending.
    labels: Vec<Label>,
    index: HashMap<Label, u32>,
    /// Row-major `labels.len()²` matrix of label indices, `UNDEFINED` where absent.
    star: Vec<u32>,
}

impl PublicEvalKey {
    /// Fill in the composition table from the secret key's canonical representatives.
    pub fn derive(sk: &SecretKey) -> Self {
        let classes = sk.classes();
        let m = classes.len();
        let labels: Vec<Label> = classes.iter().map(Class::label).collect();
        let mut star = vec![UNDEFINED; m * m];
        star.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            let left = classes[i].canonical();
            for (j, slot) in row.iter_mut().enumerate() {
                let composite = left.compose(classes[j].canonical());
                if let Some(&k) = sk.class_by_table.get(&composite) {
                    *slot = k as u32;
                }
            }
        });
        PublicEvalKey::from_table(labels, star)
    }

    fn from_table(labels: Vec<Label>, star: Vec<u32>) -> Self {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        PublicEvalKey {
            labels,
            index,
            star,
        }
    }

    pub fn label_universe(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index.contains_key(&label)
    }

    /// `a ⋆ b`.
    pub fn compose(&self, a: Label, b: Label) -> Result<Label, QuotientError> {
        let i = *self.index.get(&a).ok_or(QuotientError::UnknownLabel(a))? as usize;
        let j = *self.index.get(&b).ok_or(QuotientError::UnknownLabel(b))? as usize;
        match self.star[i * self.labels.len() + j] {
            UNDEFINED => Err(QuotientError::UndefinedComposition(a, b)),
            k => Ok(self.labels[k as usize]),
        }
    }

    pub fn defined_pairs(&self) -> usize {
        self.star.iter().filter(|&&k| k != UNDEFINED).count()
    }

    /// All defined `(a, b, a ⋆ b)` triples in row-major label order.
    pub fn entries(&self) -> impl Iterator<Item = (Label, Label, Label)> + '_ {
        let m = self.labels.len();
        self.star
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != UNDEFINED)
            .map(move |(pos, &k)| {
                (
                    self.labels[pos / m],
                    self.labels[pos % m],
                    self.labels[k as usize],
                )
            })
    }
}

#[derive(Serialize, Deserialize)]
struct PublicKeyJson {
    label_universe: Vec<Label>,
    star_table: Vec<[Label; 3]>,
}

impl From<PublicEvalKey> for PublicKeyJson {
    fn from(pk: PublicEvalKey) -> Self {
        PublicKeyJson {
            star_table: pk.entries().map(|(a, b, c)| [a, b, c]).collect(),
            label_universe: pk.labels,
        }
    }
}

impl TryFrom<PublicKeyJson> for PublicEvalKey {
    type Error = QuotientError;

    fn try_from(json: PublicKeyJson) -> Result<Self, Self::Error> {
        let labels = json.label_universe;
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QuotientError::InvalidKey(
                "label universe must be strictly ascending".into(),
            ));
        }
        let m = labels.len();
        let key = PublicEvalKey::from_table(labels, Vec::new());
        let mut star = vec![UNDEFINED; m * m];
        let mut seen = HashSet::with_capacity(json.star_table.len());
        for [a, b, c] in json.star_table {
            let lookup = |l: Label| {
                key.index
                    .get(&l)
                    .copied()
                    .ok_or(QuotientError::UnknownLabel(l))
            };
            let (i, j, k) = (lookup(a)?, lookup(b)?, lookup(c)?);
            if !seen.insert((i, j)) {
                return Err(QuotientError::InvalidKey(format!(
                    "pair ({a}, {b}) listed twice"
                )));
            }
            star[i as usize * m + j as usize] = k;
        }
        Ok(PublicEvalKey { star, ..key })
    }
}
