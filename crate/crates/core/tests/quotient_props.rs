use std::collections::BTreeSet;

use functor_he::quotient_he::{
    decrypt, encrypt, eval_add, keygen_seeded, Label, Mode, PublicEvalKey, SchemeParams, SecretKey,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn full_params(n: usize) -> SchemeParams {
    // 6^6 tables in classes of 36 keeps the public table at 1296^2 entries.
    let c = if n == 6 { 36 } else { n };
    SchemeParams::full(n, c)
}

fn sampled_params(n: usize) -> SchemeParams {
    match n {
        2 => SchemeParams::sampled(2, 1, 2),
        3 => SchemeParams::sampled(3, 2, 8),
        _ => SchemeParams::sampled(n, 4, 16),
    }
}

fn all_params() -> Vec<SchemeParams> {
    let mut out: Vec<_> = (2..=6).map(full_params).collect();
    out.extend((2..=8).map(sampled_params));
    out
}

fn keys(params: &SchemeParams, seed: u64) -> (SecretKey, PublicEvalKey) {
    keygen_seeded(&params.clone().with_seed(seed)).unwrap()
}

#[test]
fn addition_is_exact_for_every_pair() {
    for params in all_params() {
        let (sk, pk) = keys(&params, 5);
        let n = params.n;
        for k in 0..n {
            for l in 0..n {
                let c =
                    eval_add(&pk, &encrypt(&sk, k).unwrap(), &encrypt(&sk, l).unwrap()).unwrap();
                assert_eq!(
                    decrypt(&sk, &c).unwrap(),
                    (k + l) % n,
                    "{:?} n={n} {k}+{l}",
                    params.mode
                );
            }
        }
    }
}

#[test]
fn shift_labels_form_a_cyclic_group() {
    for params in all_params() {
        let (sk, pk) = keys(&params, 8);
        let n = params.n;
        let labels: Vec<Label> = (0..n).map(|k| encrypt(&sk, k).unwrap().label).collect();
        let set: BTreeSet<Label> = labels.iter().copied().collect();
        assert_eq!(set.len(), n);
        let op = |a: Label, b: Label| pk.compose(a, b).unwrap();
        let zero = labels[0];
        for &a in &labels {
            assert_eq!(op(zero, a), a);
            assert_eq!(op(a, zero), a);
            assert!(labels.iter().any(|&b| op(a, b) == zero), "no inverse");
            for &b in &labels {
                assert!(set.contains(&op(a, b)), "not closed");
                assert_eq!(op(a, b), op(b, a));
                for &c in &labels {
                    assert_eq!(op(op(a, b), c), op(a, op(b, c)));
                }
            }
        }
        // and the residue map is an isomorphism onto Z_n
        for k in 0..n {
            for l in 0..n {
                assert_eq!(op(labels[k], labels[l]), labels[(k + l) % n]);
            }
        }
    }
}

#[test]
fn public_table_agrees_with_canonical_representatives() {
    for params in all_params() {
        let (sk, pk) = keys(&params, 13);
        for &a in sk.shift_labels() {
            for &b in sk.shift_labels() {
                let ca = sk.class_of_label(a).unwrap().canonical();
                let cb = sk.class_of_label(b).unwrap().canonical();
                let composite = ca.compose(cb);
                let expected = sk.class_of_table(&composite).unwrap().label();
                assert_eq!(pk.compose(a, b).unwrap(), expected);
            }
        }
    }
}

#[test]
fn full_public_table_is_complete_and_coherent() {
    let (sk, pk) = keys(&full_params(3), 21);
    let classes = sk.classes();
    assert_eq!(classes.len(), 9);
    assert_eq!(pk.defined_pairs(), 81);
    for a in classes {
        for b in classes {
            let composite = a.canonical().compose(b.canonical());
            let label = sk.class_of_table(&composite).unwrap().label();
            assert_eq!(pk.compose(a.label(), b.label()).unwrap(), label);
        }
    }
}

#[test]
fn full_universe_is_partitioned() {
    for n in 2..=5 {
        let params = full_params(n);
        let (sk, pk) = keys(&params, 2);
        let mut seen = BTreeSet::new();
        for class in sk.classes() {
            assert_eq!(class.members().len(), params.class_size);
            for m in class.members() {
                assert!(seen.insert(m.code()), "table in two classes");
            }
        }
        assert_eq!(seen.len() as u64, (n as u64).pow(n as u32));
        assert_eq!(pk.label_universe().len(), sk.classes().len());
        assert_eq!(params.mode, Mode::Full);
    }
}

/// Chi-square p-value for counts against a uniform expectation.
fn uniform_p_value(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

#[test]
fn labels_look_uniform_across_seeds() {
    let params = full_params(4);
    let mut label_sets = BTreeSet::new();
    let mut labels = Vec::new();
    for seed in 0..120 {
        let (sk, _) = keys(&params, seed);
        label_sets.insert(sk.shift_labels().to_vec());
        labels.extend(sk.classes().iter().map(|c| c.label().0));
    }
    assert!(
        label_sets.len() > 1,
        "shift labels do not depend on the seed"
    );

    let mut high = [0u64; 16];
    let mut low = [0u64; 16];
    for l in &labels {
        high[(l >> 60) as usize] += 1;
        low[(l & 0xf) as usize] += 1;
    }
    let (ph, pl) = (uniform_p_value(&high), uniform_p_value(&low));
    assert!(ph > 0.01, "high nibble p = {ph}");
    assert!(pl > 0.01, "low nibble p = {pl}");
}

#[test]
fn shift_positions_in_the_label_order_vary() {
    // The rank of f_0's label among all labels should not be fixed.
    let params = full_params(4);
    let ranks: BTreeSet<usize> = (0..50)
        .map(|seed| {
            let (sk, pk) = keys(&params, seed);
            let zero = encrypt(&sk, 0).unwrap().label;
            pk.label_universe().iter().position(|&l| l == zero).unwrap()
        })
        .collect();
    assert!(ranks.len() > 10);
}
