//! Additively homomorphic encryption of residues mod `n` by quotienting the
//! function space `A^n`.
//!
//! The plaintext `k` is carried by the shift `f_k(i) = (i + k) mod n`. Key
//! generation partitions function tables into secret equivalence classes,
//! each shift hidden among `c - 1` dummy tables, and gives every class an
//! opaque [`Label`]. A ciphertext is the label of a class. The evaluator adds
//! ciphertexts by looking up the public composition table, which was filled
//! in at key generation by composing the classes' canonical representatives
//! and recording the class of the result.
//!
//! Two universe modes exist. [`Mode::Full`] materializes all `n^n` tables
//! (feasible for `n <= 7`); [`Mode::Sampled`] materializes only the `n`
//! shift-bearing classes plus `universe_extra` dummy-only classes.

mod keys;
mod table;

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functor_core::DEFAULT_ENUMERATION_LIMIT;

pub use keys::{Class, PublicEvalKey, SecretKey};
pub use table::FunctionTable;

/// Most entries a public composition table may hold (one per ordered pair of
/// classes).
pub const MAX_PUBLIC_TABLE_ENTRIES: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("plaintext {m} out of range for modulus {n}")]
    Range { m: usize, n: usize },
    #[error("label {0} is not part of this key")]
    UnknownLabel(Label),
    #[error("label {0} names a class without a shift")]
    NotAShiftClass(Label),
    #[error("composition of {0} and {1} is not in the public table")]
    UndefinedComposition(Label, Label),
    #[error("cannot sum an empty list of ciphertexts")]
    EmptySum,
    #[error("malformed key: {0}")]
    InvalidKey(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = QuotientError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Mode::Full),
            "sampled" => Ok(Mode::Sampled),
            other => Err(QuotientError::Params(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Modulus; also the size of the carrier set.
    pub n: usize,
    /// Tables per class.
    pub class_size: usize,
    pub mode: Mode,
    /// Dummy-only classes to add in sampled mode.
    pub universe_extra: usize,
    pub seed: u64,
}

impl SchemeParams {
    pub fn full(n: usize, class_size: usize) -> Self {
        SchemeParams {
            n,
            class_size,
            mode: Mode::Full,
            universe_extra: 0,
            seed: 0,
        }
    }

    pub fn sampled(n: usize, class_size: usize, universe_extra: usize) -> Self {
        SchemeParams {
            n,
            class_size,
            mode: Mode::Sampled,
            universe_extra,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `n^n`, or `None` if it does not fit in a `u128`.
    pub fn universe_size(&self) -> Option<u128> {
        u32::try_from(self.n)
            .ok()
            .and_then(|e| (self.n as u128).checked_pow(e))
    }

    pub fn validate(&self) -> Result<(), QuotientError> {
        self.validate_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn validate_with_limit(&self, enumeration_limit: usize) -> Result<(), QuotientError> {
        let (n, c) = (self.n, self.class_size);
        if n < 2 {
            return Err(QuotientError::Params(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        if c < 1 {
            return Err(QuotientError::Params(
                "class size must be at least 1".into(),
            ));
        }
        let total = self.universe_size();
        match self.mode {
            Mode::Full => {
                let total = total
                    .filter(|&t| t <= enumeration_limit as u128)
                    .ok_or_else(|| {
                        QuotientError::Params(format!(
                            "full mode needs {n}^{n} tables, more than the enumeration limit {enumeration_limit}"
                        ))
                    })?;
                if total % c as u128 != 0 {
                    return Err(QuotientError::Params(format!(
                        "class size {c} does not divide {total}"
                    )));
                }
                if total / (c as u128) < n as u128 {
                    return Err(QuotientError::Params(format!(
                        "class size {c} leaves fewer than {n} classes, so shifts cannot be separated"
                    )));
                }
            }
            Mode::Sampled => {
                let needed = (c as u128)
                    .checked_mul(n as u128 + self.universe_extra as u128)
                    .ok_or_else(|| QuotientError::Params("sampled universe too large".into()))?;
                if total.is_some_and(|t| needed > t) {
                    return Err(QuotientError::Params(format!(
                        "{needed} distinct tables requested but only {n}^{n} exist"
                    )));
                }
            }
        }
        let classes = match self.mode {
            Mode::Full => total.unwrap_or(u128::MAX) / c as u128,
            Mode::Sampled => n as u128 + self.universe_extra as u128,
        };
        if classes.saturating_mul(classes) > MAX_PUBLIC_TABLE_ENTRIES {
            return Err(QuotientError::Params(format!(
                "{classes} classes need a {classes}x{classes} public table, more than {MAX_PUBLIC_TABLE_ENTRIES} entries"
            )));
        }
        Ok(())
    }

    fn class_count(&self) -> usize {
        match self.mode {
            Mode::Full => (self.universe_size().unwrap() / self.class_size as u128) as usize,
            Mode::Sampled => self.n + self.universe_extra,
        }
    }
}

/// Opaque public identifier of a class. Serialized as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map(Label).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ciphertext {
    pub label: Label,
}

/// Generate a key pair from `params`, drawing all randomness from `rng`.
pub fn keygen<R: Rng + ?Sized>(
    params: &SchemeParams,
    rng: &mut R,
) -> Result<(SecretKey, PublicEvalKey), QuotientError> {
    params.validate()?;
    let n = params.n;
    let c = params.class_size;
    let dummies_needed = match params.mode {
        Mode::Full => (params.universe_size().unwrap() as usize) - n,
        Mode::Sampled => n * (c - 1) + params.universe_extra * c,
    };
    let mut dummies = sample_dummies(n, dummies_needed, rng).into_iter();

    let mut member_sets: Vec<Vec<FunctionTable>> = Vec::with_capacity(params.class_count());
    for k in 0..n {
        let mut members = vec![FunctionTable::shift(n, k)];
        members.extend(dummies.by_ref().take(c - 1));
        member_sets.push(members);
    }
    while !dummies.as_slice().is_empty() {
        member_sets.push(dummies.by_ref().take(c).collect());
    }
    debug_assert_eq!(member_sets.len(), params.class_count());

    let labels = draw_labels(member_sets.len(), rng);
    let classes = member_sets
        .into_iter()
        .zip(labels)
        .map(|(members, label)| Class::new(label, members))
        .collect();
    let sk = SecretKey::from_parts(params.clone(), classes)?;
    let pk = PublicEvalKey::derive(&sk);
    Ok((sk, pk))
}

/// [`keygen`] with the generator seeded from `params.seed`.
pub fn keygen_seeded(params: &SchemeParams) -> Result<(SecretKey, PublicEvalKey), QuotientError> {
    keygen(params, &mut crate::seeded_rng(params.seed))
}

/// `count` distinct uniformly random non-shift tables, in random order.
fn sample_dummies<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<FunctionTable> {
    let shift_codes: HashSet<u64> = (0..n).map(|k| FunctionTable::shift(n, k).code()).collect();
    let small_universe = u32::try_from(n)
        .ok()
        .and_then(|e| (n as u64).checked_pow(e))
        .filter(|&t| t <= DEFAULT_ENUMERATION_LIMIT as u64);
    if let Some(total) = small_universe {
        let mut pool: Vec<u64> = (0..total)
            .filter(|code| !shift_codes.contains(code))
            .collect();
        let (chosen, _) = pool.partial_shuffle(rng, count);
        return chosen
            .iter()
            .map(|&code| FunctionTable::from_code(n, code))
            .collect();
    }
    // Large universes: rejection sampling. Feasibility was checked against n^n,
    // and at this size the requested count is a vanishing fraction of it.
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let values: Vec<u32> = (0..n).map(|_| rng.random_range(0..n as u32)).collect();
        let table = FunctionTable::new(values).expect("values drawn in range");
        if table.as_shift().is_none() && seen.insert(table.clone()) {
            out.push(table);
        }
    }
    out
}

fn draw_labels<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Label> {
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let label = Label(rng.random());
        if seen.insert(label) {
            out.push(label);
        }
    }
    out
}

/// Ciphertext of `m`: the label of the class hiding the shift `f_m`.
pub fn encrypt(sk: &SecretKey, m: usize) -> Result<Ciphertext, QuotientError> {
    let n = sk.params().n;
    sk.shift_labels()
        .get(m)
        .map(|&label| Ciphertext { label })
        .ok_or(QuotientError::Range { m, n })
}

/// Homomorphic addition: one lookup in the public composition table.
pub fn eval_add(
    pk: &PublicEvalKey,
    c1: &Ciphertext,
    c2: &Ciphertext,
) -> Result<Ciphertext, QuotientError> {
    pk.compose(c1.label, c2.label)
        .map(|label| Ciphertext { label })
}

/// Left fold of [`eval_add`] over a nonempty list.
pub fn eval_sum(pk: &PublicEvalKey, cs: &[Ciphertext]) -> Result<Ciphertext, QuotientError> {
    let (first, rest) = cs.split_first().ok_or(QuotientError::EmptySum)?;
    rest.iter().try_fold(*first, |acc, c| eval_add(pk, &acc, c))
}

pub fn decrypt(sk: &SecretKey, c: &Ciphertext) -> Result<usize, QuotientError> {
    sk.residue_of(c.label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full4(seed: u64) -> (SecretKey, PublicEvalKey) {
        keygen_seeded(&SchemeParams::full(4, 4).with_seed(seed)).unwrap()
    }

    #[test]
    fn full_n4_has_256_tables_in_64_classes() {
        let (sk, pk) = full4(7);
        assert_eq!(sk.classes().len(), 64);
        assert_eq!(
            sk.classes()
                .iter()
                .map(|c| c.members().len())
                .sum::<usize>(),
            256
        );
        assert!(sk.classes().iter().all(|c| c.members().len() == 4));
        assert_eq!(pk.label_universe().len(), 64);
        assert_eq!(pk.defined_pairs(), 64 * 64);
    }

    #[test]
    fn shifts_land_in_distinct_classes() {
        let (sk, _) = full4(7);
        let labels: HashSet<Label> = (0..4)
            .map(|k| {
                sk.class_of_table(&FunctionTable::shift(4, k))
                    .unwrap()
                    .label()
            })
            .collect();
        assert_eq!(labels.len(), 4);
        for (k, &label) in sk.shift_labels().iter().enumerate() {
            let class = sk.class_of_label(label).unwrap();
            assert_eq!(class.canonical(), &FunctionTable::shift(4, k));
        }
    }

    #[test]
    fn one_plus_three_is_zero_mod_four() {
        let (sk, pk) = full4(1);
        let sum = eval_add(&pk, &encrypt(&sk, 1).unwrap(), &encrypt(&sk, 3).unwrap()).unwrap();
        assert_eq!(sum, encrypt(&sk, 0).unwrap());
        assert_eq!(decrypt(&sk, &sum).unwrap(), 0);
    }

    #[test]
    fn keygen_is_deterministic_per_seed() {
        let (a, pa) = full4(3);
        let (b, pb) = full4(3);
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        let (c, _) = full4(4);
        assert_ne!(a.shift_labels(), c.shift_labels());
    }

    #[test]
    fn encrypt_rejects_out_of_range() {
        let (sk, _) = full4(0);
        assert_eq!(encrypt(&sk, 4), Err(QuotientError::Range { m: 4, n: 4 }));
    }

    #[test]
    fn encryption_is_injective_for_n7() {
        let (sk, _) = keygen_seeded(&SchemeParams::sampled(7, 3, 2).with_seed(11)).unwrap();
        let labels: HashSet<Label> = (0..7).map(|m| encrypt(&sk, m).unwrap().label).collect();
        assert_eq!(labels.len(), 7);
    }

    #[test]
    fn identity_is_neutral() {
        let (sk, pk) = full4(9);
        let zero = encrypt(&sk, 0).unwrap();
        for k in 0..4 {
            let ck = encrypt(&sk, k).unwrap();
            assert_eq!(eval_add(&pk, &zero, &ck).unwrap(), ck);
        }
    }

    #[test]
    fn exhaustive_pairs_at_n5() {
        let (sk, pk) = keygen_seeded(&SchemeParams::sampled(5, 5, 3).with_seed(2)).unwrap();
        for k in 0..5 {
            for l in 0..5 {
                let c =
                    eval_add(&pk, &encrypt(&sk, k).unwrap(), &encrypt(&sk, l).unwrap()).unwrap();
                assert_eq!(decrypt(&sk, &c).unwrap(), (k + l) % 5);
            }
        }
    }

    #[test]
    fn dummy_only_class_is_not_decryptable() {
        let (sk, _) = full4(5);
        let dummy = sk
            .classes()
            .iter()
            .find(|c| c.canonical().as_shift().is_none())
            .unwrap()
            .label();
        assert_eq!(
            decrypt(&sk, &Ciphertext { label: dummy }),
            Err(QuotientError::NotAShiftClass(dummy))
        );
    }

    #[test]
    fn unknown_label_is_reported() {
        let (sk, pk) = full4(5);
        let stranger = (0u64..)
            .map(Label)
            .find(|l| !pk.label_universe().contains(l))
            .unwrap();
        let c = Ciphertext { label: stranger };
        assert_eq!(decrypt(&sk, &c), Err(QuotientError::UnknownLabel(stranger)));
        assert_eq!(
            eval_add(&pk, &c, &encrypt(&sk, 0).unwrap()),
            Err(QuotientError::UnknownLabel(stranger))
        );
    }

    #[test]
    fn sampled_dummy_operands_may_be_undefined() {
        let (sk, pk) = keygen_seeded(&SchemeParams::sampled(6, 4, 4).with_seed(8)).unwrap();
        let shift_labels: HashSet<Label> = sk.shift_labels().iter().copied().collect();
        let dummies: Vec<Label> = pk
            .label_universe()
            .iter()
            .copied()
            .filter(|l| !shift_labels.contains(l))
            .collect();
        assert_eq!(dummies.len(), 4);
        // A dummy composite lands in a materialized class only by coincidence.
        let undefined = dummies
            .iter()
            .flat_map(|&a| pk.label_universe().iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| pk.compose(a, b).is_err())
            .count();
        assert!(undefined > 0);
        let (a, b) = dummies
            .iter()
            .flat_map(|&a| dummies.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| pk.compose(a, b).is_err())
            .unwrap();
        assert_eq!(
            eval_add(&pk, &Ciphertext { label: a }, &Ciphertext { label: b }),
            Err(QuotientError::UndefinedComposition(a, b))
        );
    }

    #[test]
    fn eval_sum_folds() {
        let (sk, pk) = full4(12);
        let ones = vec![encrypt(&sk, 1).unwrap(); 4];
        assert_eq!(decrypt(&sk, &eval_sum(&pk, &ones).unwrap()).unwrap(), 0);
        let c2 = encrypt(&sk, 2).unwrap();
        assert_eq!(eval_sum(&pk, &[c2]).unwrap(), c2);
        assert_eq!(eval_sum(&pk, &[]), Err(QuotientError::EmptySum));
    }

    #[test]
    fn param_validation() {
        assert!(SchemeParams::full(12, 4).validate().is_err());
        assert!(SchemeParams::full(4, 3).validate().is_err());
        assert!(SchemeParams::full(4, 256).validate().is_err());
        assert!(SchemeParams::full(1, 1).validate().is_err());
        assert!(SchemeParams::full(4, 0).validate().is_err());
        assert!(SchemeParams::sampled(2, 2, 0).validate().is_ok());
        assert!(SchemeParams::sampled(2, 2, 1).validate().is_err());
        assert!(SchemeParams::sampled(30, 8, 100).validate().is_ok());
        // public table size
        assert!(SchemeParams::full(6, 36).validate().is_ok());
        assert!(SchemeParams::full(6, 6).validate().is_err());
        assert!(SchemeParams::sampled(30, 1, 5000).validate().is_err());
    }

    #[test]
    fn large_sampled_universe_uses_rejection_sampling() {
        let (sk, pk) = keygen_seeded(&SchemeParams::sampled(12, 3, 2).with_seed(4)).unwrap();
        assert_eq!(sk.classes().len(), 14);
        let c = eval_add(&pk, &encrypt(&sk, 7).unwrap(), &encrypt(&sk, 9).unwrap()).unwrap();
        assert_eq!(decrypt(&sk, &c).unwrap(), 4);
    }
}
