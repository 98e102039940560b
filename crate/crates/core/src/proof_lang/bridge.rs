use super::{denote, type_of, ProofError, Term, Type};
use crate::quotient_he::{encrypt, eval_add, Ciphertext, PublicEvalKey, SecretKey};

/// `\x:Bn. succn (... (succn x))` with `k` successors.
pub fn shift_term(n: u32, k: u32) -> Term {
    let body = (0..k).fold(Term::var("x"), |acc, _| Term::app(Term::Succ(n), acc));
    Term::lam("x", Type::Base(n), body)
}

/// Encrypts the shift index of a `Bn -> Bn` term under `sk`.
///
/// Only shifts are encryptable: the scheme's plaintext space is the cyclic
/// group of shifts, so any other map is refused with `NotAShift`.
pub fn encrypt_denotation(sk: &SecretKey, t: &Term) -> Result<Ciphertext, ProofError> {
    let ty = type_of(t)?;
    let n = match &ty {
        Type::Arrow(d, c) => match (&**d, &**c) {
            (Type::Base(a), Type::Base(b)) if a == b => *a as usize,
            _ => return Err(ProofError::NotEncryptable { ty: ty.to_string() }),
        },
        _ => return Err(ProofError::NotEncryptable { ty: ty.to_string() }),
    };
    let modulus = sk.params().n;
    if n != modulus {
        return Err(ProofError::ModulusMismatch {
            term: n,
            key: modulus,
        });
    }
    let table = denote(t)?
        .as_function_table()
        .ok_or_else(|| ProofError::Semantics("a Bn -> Bn denotation is not a table".into()))?;
    let k = table.as_shift().ok_or_else(|| ProofError::NotAShift {
        table: table.to_string(),
    })?;
    Ok(encrypt(sk, k)?)
}

/// Encrypted composition of two shift denotations.
pub fn hom_compose_terms(
    pk: &PublicEvalKey,
    c1: &Ciphertext,
    c2: &Ciphertext,
) -> Result<Ciphertext, ProofError> {
    Ok(eval_add(pk, c1, c2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof_lang::parse;
    use crate::quotient_he::{decrypt, keygen_seeded, SchemeParams};

    fn keys(n: usize) -> (SecretKey, PublicEvalKey) {
        keygen_seeded(&SchemeParams::full(n, n).with_seed(11)).unwrap()
    }

    #[test]
    fn shift_terms_print_as_expected() {
        assert_eq!(shift_term(4, 0).to_string(), "\\x:B4. x");
        assert_eq!(shift_term(4, 2).to_string(), "\\x:B4. succ4 (succ4 x)");
    }

    #[test]
    fn identity_encrypts_as_zero() {
        let (sk, _) = keys(4);
        let c = encrypt_denotation(&sk, &parse("\\x:B4. x").unwrap()).unwrap();
        assert_eq!(c, encrypt(&sk, 0).unwrap());
    }

    #[test]
    fn triple_successor_encrypts_as_three() {
        let (sk, _) = keys(4);
        let t = parse("\\x:B4. succ4 (succ4 (succ4 x))").unwrap();
        assert_eq!(
            encrypt_denotation(&sk, &t).unwrap(),
            encrypt(&sk, 3).unwrap()
        );
        // the bare constant is the same map as a one-step shift
        assert_eq!(
            encrypt_denotation(&sk, &parse("succ4").unwrap()).unwrap(),
            encrypt(&sk, 1).unwrap()
        );
    }

    #[test]
    fn constant_map_is_not_a_shift() {
        let (sk, _) = keys(4);
        match encrypt_denotation(&sk, &parse("\\x:B4. e0_4").unwrap()) {
            Err(ProofError::NotAShift { table }) => assert_eq!(table, "(0,0,0,0)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_shapes_are_refused() {
        let (sk, _) = keys(4);
        assert!(matches!(
            encrypt_denotation(&sk, &parse("\\x:B3. x").unwrap()),
            Err(ProofError::ModulusMismatch { term: 3, key: 4 })
        ));
        assert!(matches!(
            encrypt_denotation(&sk, &parse("e0_4").unwrap()),
            Err(ProofError::NotEncryptable { .. })
        ));
        assert!(matches!(
            encrypt_denotation(&sk, &parse("\\x:B4. ()").unwrap()),
            Err(ProofError::NotEncryptable { .. })
        ));
    }

    #[test]
    fn one_plus_three_composes_to_zero() {
        let (sk, pk) = keys(4);
        let c1 = encrypt_denotation(&sk, &parse("succ4").unwrap()).unwrap();
        let c3 = encrypt_denotation(&sk, &shift_term(4, 3)).unwrap();
        assert_eq!(
            decrypt(&sk, &hom_compose_terms(&pk, &c1, &c3).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn identity_is_neutral() {
        let (sk, pk) = keys(4);
        let id = encrypt_denotation(&sk, &shift_term(4, 0)).unwrap();
        for k in 0..4 {
            let c = encrypt_denotation(&sk, &shift_term(4, k)).unwrap();
            assert_eq!(
                decrypt(&sk, &hom_compose_terms(&pk, &id, &c).unwrap()).unwrap(),
                k as usize
            );
        }
    }

    #[test]
    fn all_pairs_at_five() {
        let (sk, pk) = keys(5);
        for k in 0..5 {
            for l in 0..5 {
                // oracle: compose the tables directly and read off the shift
                let composed = denote(&shift_term(5, k))
                    .unwrap()
                    .as_function_table()
                    .unwrap()
                    .compose(
                        &denote(&shift_term(5, l))
                            .unwrap()
                            .as_function_table()
                            .unwrap(),
                    );
                let expected = composed.as_shift().unwrap();
                let c = hom_compose_terms(
                    &pk,
                    &encrypt_denotation(&sk, &shift_term(5, k)).unwrap(),
                    &encrypt_denotation(&sk, &shift_term(5, l)).unwrap(),
                )
                .unwrap();
                assert_eq!(decrypt(&sk, &c).unwrap(), expected);
            }
        }
    }
}
