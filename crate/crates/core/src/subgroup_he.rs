//! Bit encryption in a composite-order bilinear group of order `N = pq`,
//! simulated in the exponent.
//!
//! An element `g^x` of the source group is stored as `x mod N`, and the
//! pairing `e(g^a, g^b) = g_T^{ab}` becomes multiplication mod `N`. A `1`
//! encrypts into the order-`p` subgroup (`x = q·r`), a `0` into the order-`q`
//! subgroup (`x = p·r`). OR is the group operation, AND is the pairing, and
//! the key holder decrypts by raising to the power `q`, which kills exactly the
//! order-`q` part.
//!
//! Anyone who sees exponents can read the subgroup off `x mod q`, so this
//! simulation has no security at all. It exists to exercise the homomorphic
//! behaviour, including the OR failure case `r1 + r2 ≡ 0 (mod p)`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("invalid group parameters: {0}")]
    Params(String),
    #[error("randomness {r} outside [1, {bound})")]
    Randomness { r: u64, bound: u64 },
    #[error("formula expects {expected} ciphertexts, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid formula: {0}")]
    Formula(String),
    #[error("element exponent {x} is not below the group order {order}")]
    Element { x: u64, order: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GroupParams {
    p: u64,
    q: u64,
    n: u64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p: u64,
    q: u64,
}

impl From<GroupParams> for RawParams {
    fn from(g: GroupParams) -> Self {
        RawParams { p: g.p, q: g.q }
    }
}

impl TryFrom<RawParams> for GroupParams {
    type Error = SubgroupError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        setup(raw.p, raw.q)
    }
}

impl GroupParams {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Group order `N = pq`.
    pub fn order(&self) -> u64 {
        self.n
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(self.n)) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        ((u128::from(a) + u128::from(b)) % u128::from(self.n)) as u64
    }
}

/// Deterministic trial division; the primes used here stay below 2^32.
pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v.is_multiple_of(2) {
        return v == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Group parameters for distinct primes `p, q > 3`.
pub fn setup(p: u64, q: u64) -> Result<GroupParams, SubgroupError> {
    for v in [p, q] {
        if !is_prime(v) || v <= 3 {
            return Err(SubgroupError::Params(format!(
                "{v} is not a prime greater than 3"
            )));
        }
    }
    if p == q {
        return Err(SubgroupError::Params("p and q must differ".into()));
    }
    let n = p
        .checked_mul(q)
        .ok_or_else(|| SubgroupError::Params("p·q overflows 64 bits".into()))?;
    Ok(GroupParams { p, q, n })
}

/// Source-group element `g^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceElem(u64);

/// Target-group element `g_T^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TargetElem(u64);

impl SourceElem {
    pub fn exponent(&self) -> u64 {
        self.0
    }
}

impl TargetElem {
    pub fn exponent(&self) -> u64 {
        self.0
    }

    pub fn identity() -> Self {
        TargetElem(0)
    }
}

/// A ciphertext from either group, as stored on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitCiphertext {
    Source(SourceElem),
    Target(TargetElem),
}

impl BitCiphertext {
    pub fn exponent(&self) -> u64 {
        match self {
            BitCiphertext::Source(s) => s.0,
            BitCiphertext::Target(t) => t.0,
        }
    }

    /// Rebuild a ciphertext from its exponent, checking it against `params`.
    pub fn from_parts(params: &GroupParams, target: bool, x: u64) -> Result<Self, SubgroupError> {
        if x >= params.n {
            return Err(SubgroupError::Element { x, order: params.n });
        }
        Ok(if target {
            BitCiphertext::Target(TargetElem(x))
        } else {
            BitCiphertext::Source(SourceElem(x))
        })
    }
}

impl From<SourceElem> for BitCiphertext {
    fn from(s: SourceElem) -> Self {
        BitCiphertext::Source(s)
    }
}

impl From<TargetElem> for BitCiphertext {
    fn from(t: TargetElem) -> Self {
        BitCiphertext::Target(t)
    }
}

#[derive(Serialize, Deserialize)]
struct CiphertextJson {
    group: String,
    x: String,
}

impl Serialize for BitCiphertext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let group = match self {
            BitCiphertext::Source(_) => "source",
            BitCiphertext::Target(_) => "target",
        };
        CiphertextJson {
            group: group.into(),
            x: self.exponent().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitCiphertext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CiphertextJson::deserialize(d)?;
        let x: u64 = raw.x.parse().map_err(D::Error::custom)?;
        match raw.group.as_str() {
            "source" => Ok(BitCiphertext::Source(SourceElem(x))),
            "target" => Ok(BitCiphertext::Target(TargetElem(x))),
            other => Err(D::Error::custom(format!("unknown group '{other}'"))),
        }
    }
}

/// Encrypt `bit` with fresh randomness `r`.
pub fn encrypt_bit<R: Rng + ?Sized>(params: &GroupParams, bit: bool, rng: &mut R) -> SourceElem {
    let bound = if bit { params.p } else { params.q };
    let r = rng.random_range(1..bound);
    encrypt_bit_with(params, bit, r).expect("randomness drawn in range")
}

/// Encrypt with explicit randomness: `q·r` for a one (`r ∈ [1, p)`), `p·r` for a
/// zero (`r ∈ [1, q)`).
pub fn encrypt_bit_with(
    params: &GroupParams,
    bit: bool,
    r: u64,
) -> Result<SourceElem, SubgroupError> {
    let (generator, bound) = if bit {
        (params.q, params.p)
    } else {
        (params.p, params.q)
    };
    if r == 0 || r >= bound {
        return Err(SubgroupError::Randomness { r, bound });
    }
    Ok(SourceElem(params.mul(generator, r)))
}

/// OR: the group operation, `x1 + x2` in the exponent.
pub fn hom_or(params: &GroupParams, c1: SourceElem, c2: SourceElem) -> SourceElem {
    SourceElem(params.add(c1.0, c2.0))
}

/// AND: the pairing, `x1 · x2` in the exponent.
pub fn hom_and(params: &GroupParams, c1: SourceElem, c2: SourceElem) -> TargetElem {
    TargetElem(params.mul(c1.0, c2.0))
}

/// OR of two pairing outputs: the target-group operation.
pub fn hom_or_target(params: &GroupParams, t1: TargetElem, t2: TargetElem) -> TargetElem {
    TargetElem(params.add(t1.0, t2.0))
}

/// `false` iff the element is killed by raising to `q`, i.e. lies in the
/// order-`q` subgroup (the identity included).
pub fn decrypt_bit(params: &GroupParams, c: impl Into<BitCiphertext>) -> bool {
    params.mul(c.into().exponent(), params.q) != 0
}

/// Monotone 2-DNF: an OR of two-variable conjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnfFormula {
    vars: usize,
    conjuncts: Vec<(usize, usize)>,
}

impl DnfFormula {
    pub fn new(vars: usize, conjuncts: Vec<(usize, usize)>) -> Result<Self, SubgroupError> {
        if let Some(&(a, b)) = conjuncts.iter().find(|&&(a, b)| a >= vars || b >= vars) {
            return Err(SubgroupError::Formula(format!(
                "conjunct ({a}, {b}) mentions a variable outside 0..{vars}"
            )));
        }
        Ok(DnfFormula { vars, conjuncts })
    }

    /// Parse `x0&x1 | x2&x3` (the `x` prefix is optional).
    pub fn parse(vars: usize, text: &str) -> Result<Self, SubgroupError> {
        let var = |s: &str| -> Result<usize, SubgroupError> {
            let s = s.trim();
            s.strip_prefix('x')
                .unwrap_or(s)
                .parse()
                .map_err(|_| SubgroupError::Formula(format!("bad variable '{s}'")))
        };
        let mut conjuncts = Vec::new();
        for clause in text.split('|').filter(|c| !c.trim().is_empty()) {
            let lits: Vec<&str> = clause.split('&').collect();
            if lits.len() != 2 {
                return Err(SubgroupError::Formula(format!(
                    "'{}' must have exactly two literals",
                    clause.trim()
                )));
            }
            conjuncts.push((var(lits[0])?, var(lits[1])?));
        }
        DnfFormula::new(vars, conjuncts)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn conjuncts(&self) -> &[(usize, usize)] {
        &self.conjuncts
    }

    /// Plaintext truth value.
    pub fn evaluate(&self, inputs: &[bool]) -> Result<bool, SubgroupError> {
        if inputs.len() != self.vars {
            return Err(SubgroupError::Arity {
                expected: self.vars,
                got: inputs.len(),
            });
        }
        Ok(self.conjuncts.iter().any(|&(a, b)| inputs[a] && inputs[b]))
    }
}

/// Pair each conjunct's inputs and OR the results in the target group.
/// An empty formula evaluates to the identity, which decrypts to `false`.
pub fn eval_2dnf(
    params: &GroupParams,
    f: &DnfFormula,
    cs: &[SourceElem],
) -> Result<TargetElem, SubgroupError> {
    if cs.len() != f.vars {
        return Err(SubgroupError::Arity {
            expected: f.vars,
            got: cs.len(),
        });
    }
    Ok(f.conjuncts
        .iter()
        .fold(TargetElem::identity(), |acc, &(a, b)| {
            hom_or_target(params, acc, hom_and(params, cs[a], cs[b]))
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn small() -> GroupParams {
        setup(5, 7).unwrap()
    }

    #[test]
    fn setup_examples() {
        assert_eq!(setup(5, 7).unwrap().order(), 35);
        assert_eq!(setup(11, 13).unwrap().order(), 143);
        assert!(matches!(setup(6, 7), Err(SubgroupError::Params(_))));
        assert!(matches!(setup(7, 7), Err(SubgroupError::Params(_))));
        assert!(matches!(setup(3, 7), Err(SubgroupError::Params(_))));
    }

    #[test]
    fn encryption_with_fixed_randomness() {
        let g = small();
        assert_eq!(encrypt_bit_with(&g, true, 3).unwrap().exponent(), 21);
        assert_eq!(encrypt_bit_with(&g, false, 2).unwrap().exponent(), 10);
        assert!(encrypt_bit_with(&g, true, 5).is_err());
        assert!(encrypt_bit_with(&g, false, 0).is_err());
    }

    #[test]
    fn ones_live_in_the_order_p_subgroup() {
        let g = setup(11, 13).unwrap();
        let mut rng = seeded_rng(17);
        for _ in 0..10_000 {
            let x = encrypt_bit(&g, true, &mut rng).exponent();
            assert_eq!(x % 13, 0);
            assert_ne!(x % 11, 0);
        }
    }

    #[test]
    fn round_trip_exhaustive() {
        let g = small();
        for r in 1..5 {
            assert!(decrypt_bit(&g, encrypt_bit_with(&g, true, r).unwrap()));
        }
        for r in 1..7 {
            assert!(!decrypt_bit(&g, encrypt_bit_with(&g, false, r).unwrap()));
        }
    }

    #[test]
    fn decrypt_edge_cases() {
        let g = small();
        assert!(!decrypt_bit(
            &g,
            BitCiphertext::from_parts(&g, false, 0).unwrap()
        ));
        assert!(!decrypt_bit(&g, TargetElem::identity()));
        assert!(BitCiphertext::from_parts(&g, false, 35).is_err());
    }

    #[test]
    fn or_fails_exactly_when_randomness_cancels() {
        let g = small();
        let mut failures = 0;
        for r1 in 1..5 {
            for r2 in 1..5 {
                let c = hom_or(
                    &g,
                    encrypt_bit_with(&g, true, r1).unwrap(),
                    encrypt_bit_with(&g, true, r2).unwrap(),
                );
                let ok = decrypt_bit(&g, c);
                assert_eq!(ok, (r1 + r2) % 5 != 0);
                failures += usize::from(!ok);
            }
        }
        assert_eq!(failures, 4);
    }

    #[test]
    fn and_of_ones_is_one_and_of_mixed_is_identity() {
        let g = small();
        for r1 in 1..5 {
            for r2 in 1..7 {
                let one = encrypt_bit_with(&g, true, r1).unwrap();
                let zero = encrypt_bit_with(&g, false, r2).unwrap();
                assert_eq!(hom_and(&g, one, zero), TargetElem::identity());
                assert_eq!(hom_and(&g, zero, one), TargetElem::identity());
            }
        }
    }

    #[test]
    fn target_or_with_identity_is_noop() {
        let g = setup(11, 13).unwrap();
        let mut rng = seeded_rng(3);
        let t = hom_and(
            &g,
            encrypt_bit(&g, true, &mut rng),
            encrypt_bit(&g, true, &mut rng),
        );
        assert_eq!(hom_or_target(&g, t, TargetElem::identity()), t);
    }

    #[test]
    fn dnf_examples() {
        let g = setup(11, 13).unwrap();
        let mut rng = seeded_rng(99);
        let enc = |bits: &[bool], rng: &mut crate::SeededRng| -> Vec<SourceElem> {
            bits.iter().map(|&b| encrypt_bit(&g, b, rng)).collect()
        };
        let single = DnfFormula::new(2, vec![(0, 1)]).unwrap();
        for _ in 0..100 {
            let cs = enc(&[true, true], &mut rng);
            assert!(decrypt_bit(&g, eval_2dnf(&g, &single, &cs).unwrap()));
        }
        let two = DnfFormula::parse(4, "x0&x1 | x2&x3").unwrap();
        let cs = enc(&[false, true, true, false], &mut rng);
        assert_eq!(eval_2dnf(&g, &two, &cs).unwrap(), TargetElem::identity());
        assert!(matches!(
            eval_2dnf(&g, &two, &cs[..3]),
            Err(SubgroupError::Arity {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn formula_parsing_errors() {
        assert!(DnfFormula::parse(2, "x0&x1&x0").is_err());
        assert!(DnfFormula::parse(2, "x0&x2").is_err());
        assert!(DnfFormula::parse(2, "x0&y").is_err());
        assert_eq!(DnfFormula::parse(3, "").unwrap().conjuncts(), &[]);
    }

    #[test]
    fn json_shapes() {
        let g = small();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"p":5,"q":7}"#);
        assert!(serde_json::from_str::<GroupParams>(r#"{"p":6,"q":7}"#).is_err());
        let c: BitCiphertext = encrypt_bit_with(&g, true, 3).unwrap().into();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"group":"source","x":"21"}"#);
        assert_eq!(serde_json::from_str::<BitCiphertext>(&text).unwrap(), c);
    }
}
