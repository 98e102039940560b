//! Subcommand implementations. Each `cmd_*` takes typed inputs and returns a
//! typed result; [`dispatch`] only adds file handling and formatting.

use std::path::{Path, PathBuf};

use functor_he::bnf_distinguish::{
    distinguish_game, reduce_si_to_distinguishing, subgraph_iso_bruteforce, Adversary,
    CanonicalForm, ClassSizeProfile, CoinFlip, GameConfig, GameResult, Graph, OracleRecognizer,
    SearchBudget,
};
use functor_he::proof_lang::{self, normalize_with, parse, type_of, Strategy, Term, Type};
use functor_he::quotient_he::{self, Ciphertext, PublicEvalKey, SchemeParams, SecretKey};
use functor_he::seeded_rng;
use functor_he::subgroup_he::{self, decrypt_bit, encrypt_bit, DnfFormula, GroupParams};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bench::{cmd_bench, BenchConfig};
use crate::{read_text, write_text, AdversaryArg, BoolOp, Cli, CliError, Command, StrategyArg};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

pub fn load_secret(path: &Path) -> Result<SecretKey, CliError> {
    from_json(&read_text(path)?, &path.display().to_string())
}

pub fn load_public(path: &Path) -> Result<PublicEvalKey, CliError> {
    from_json(&read_text(path)?, &path.display().to_string())
}

/// A ciphertext given inline as JSON or as a file path.
pub fn load_ciphertext(arg: &str) -> Result<Ciphertext, CliError> {
    if arg.trim_start().starts_with('{') {
        from_json(arg, "ciphertext")
    } else {
        from_json(&read_text(Path::new(arg))?, arg)
    }
}

/// `K4`, `C5`, `P3` (path on three vertices), `E2` (no edges), or a graph file.
pub fn load_graph(arg: &str) -> Result<Graph, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(Graph::parse_any(&read_text(path)?)?);
    }
    let named = arg
        .get(1..)
        .and_then(|digits| digits.parse::<usize>().ok())
        .and_then(|n| match &arg[..1] {
            "K" => Some(Graph::complete(n)),
            "C" if n >= 3 => Some(Graph::cycle(n)),
            "P" => Some(Graph::path(n)),
            "E" => Some(Graph::empty(n)),
            _ => None,
        });
    named.ok_or_else(|| {
        CliError::io(
            arg,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such graph file or graph name",
            ),
        )
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeygenSummary {
    pub classes: usize,
    pub labels: usize,
    pub shift_classes: usize,
    pub secret_path: PathBuf,
    pub public_path: PathBuf,
}

pub fn cmd_keygen(params: &SchemeParams, dir: &Path) -> Result<KeygenSummary, CliError> {
    let (sk, pk) = quotient_he::keygen_seeded(params)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let secret_path = dir.join("secret.json");
    let public_path = dir.join("public.json");
    write_text(&secret_path, &to_json(&sk))?;
    write_text(&public_path, &to_json(&pk))?;
    Ok(KeygenSummary {
        classes: sk.classes().len(),
        labels: pk.label_universe().len(),
        shift_classes: sk.shift_labels().len(),
        secret_path,
        public_path,
    })
}

/// Encrypt two bits with randomness from `seed`, combine, decrypt.
pub fn cmd_bool(g: &GroupParams, op: BoolOp, a: bool, b: bool, seed: u64) -> bool {
    let mut rng = seeded_rng(seed);
    let ca = encrypt_bit(g, a, &mut rng);
    let cb = encrypt_bit(g, b, &mut rng);
    match op {
        BoolOp::Or => decrypt_bit(g, subgroup_he::hom_or(g, ca, cb)),
        BoolOp::And => decrypt_bit(g, subgroup_he::hom_and(g, ca, cb)),
    }
}

pub fn parse_bits(text: &str) -> Result<Vec<bool>, CliError> {
    text.split(',')
        .map(|s| match s.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(CliError::Parse(format!("'{other}' is not a bit"))),
        })
        .collect()
}

pub fn cmd_dnf(
    g: &GroupParams,
    formula: &DnfFormula,
    inputs: &[bool],
    seed: u64,
) -> Result<bool, CliError> {
    let mut rng = seeded_rng(seed);
    let cs: Vec<_> = inputs
        .iter()
        .map(|&bit| encrypt_bit(g, bit, &mut rng))
        .collect();
    Ok(decrypt_bit(g, subgroup_he::eval_2dnf(g, formula, &cs)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub adversary: String,
    #[serde(flatten)]
    pub result: GameResult,
}

pub fn cmd_si_game(
    host: &Graph,
    p0: &Graph,
    p1: &Graph,
    adversary: AdversaryArg,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<GameReport, CliError> {
    let canonical = CanonicalForm::<OracleRecognizer>::default();
    let adv: &dyn Adversary = match adversary {
        AdversaryArg::Coin => &CoinFlip,
        AdversaryArg::Profile => &ClassSizeProfile,
        AdversaryArg::Canonical => &canonical,
    };
    let config = GameConfig {
        jobs,
        ..GameConfig::new(trials, seed)
    };
    let result = distinguish_game(host, p0, p1, adv, &config)?;
    Ok(GameReport {
        adversary: adv.name().to_owned(),
        result,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReduceVerdict {
    pub reduction: bool,
    pub brute_force: bool,
}

pub fn cmd_reduce_check(
    pattern: &Graph,
    host: &Graph,
    seed: u64,
) -> Result<ReduceVerdict, CliError> {
    let budget = SearchBudget::default();
    let recognizer = OracleRecognizer { budget };
    let reduction =
        reduce_si_to_distinguishing(pattern, host, &recognizer, &mut seeded_rng(seed), &budget)?;
    let brute_force = subgraph_iso_bruteforce(pattern, host, &budget)?.is_some();
    Ok(ReduceVerdict {
        reduction,
        brute_force,
    })
}

pub fn cmd_prove(text: &str, fuel: u64, strategy: Strategy) -> Result<(Term, Type), CliError> {
    let t = parse(text)?;
    let ty = type_of(&t)?;
    Ok((normalize_with(&t, fuel, strategy)?, ty))
}

pub fn cmd_denote_encrypt(sk: &SecretKey, text: &str) -> Result<Ciphertext, CliError> {
    Ok(proof_lang::encrypt_denotation(sk, &parse(text)?)?)
}

fn present(b: bool) -> &'static str {
    if b {
        "present"
    } else {
        "absent"
    }
}

pub(crate) fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Keygen(a) => {
            let params = SchemeParams {
                n: a.n,
                class_size: a.class_size,
                mode: a.mode.into(),
                universe_extra: a.extra,
                seed,
            };
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let s = cmd_keygen(&params, &dir)?;
            Ok(format!(
                "classes: {}\nlabels: {}\nshift classes: {}\nsecret key: {}\npublic key: {}\n",
                s.classes,
                s.labels,
                s.shift_classes,
                s.secret_path.display(),
                s.public_path.display()
            ))
        }
        Command::Encrypt(a) => {
            let sk = load_secret(&a.key)?;
            Ok(to_json(&quotient_he::encrypt(&sk, a.message)?))
        }
        Command::Add(a) => {
            let pk = load_public(&a.public)?;
            let cts = a
                .ciphertexts
                .iter()
                .map(|c| load_ciphertext(c))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(to_json(&quotient_he::eval_sum(&pk, &cts)?))
        }
        Command::Decrypt(a) => {
            let sk = load_secret(&a.key)?;
            let m = quotient_he::decrypt(&sk, &load_ciphertext(&a.ciphertext)?)?;
            Ok(format!("{m}\n"))
        }
        Command::Bool(a) => {
            let g = subgroup_he::setup(a.p, a.q)?;
            let bit = cmd_bool(&g, a.op, a.a == 1, a.b == 1, seed);
            Ok(format!("{}\n", u8::from(bit)))
        }
        Command::Dnf(a) => {
            let g = subgroup_he::setup(a.p, a.q)?;
            let inputs = parse_bits(&a.inputs)?;
            let formula = DnfFormula::parse(inputs.len(), &a.formula)?;
            let bit = cmd_dnf(&g, &formula, &inputs, seed)?;
            Ok(format!("{}\n", u8::from(bit)))
        }
        Command::SiGame(a) => {
            let report = cmd_si_game(
                &load_graph(&a.host)?,
                &load_graph(&a.p0)?,
                &load_graph(&a.p1)?,
                a.adversary,
                a.trials,
                seed,
                cli.jobs,
            )?;
            Ok(to_json(&report))
        }
        Command::ReduceCheck(a) => {
            let v = cmd_reduce_check(&load_graph(&a.pattern)?, &load_graph(&a.host)?, seed)?;
            if v.reduction != v.brute_force {
                return Err(CliError::Crypto(format!(
                    "reduction says {} but brute force says {}",
                    present(v.reduction),
                    present(v.brute_force)
                )));
            }
            Ok(format!(
                "{}\nbrute force: {}\n",
                present(v.reduction),
                present(v.brute_force)
            ))
        }
        Command::Prove(a) => {
            let strategy = match a.strategy {
                StrategyArg::Full => Strategy::Full,
                StrategyArg::Weak => Strategy::Weak,
            };
            let (nf, ty) = cmd_prove(&a.source.text()?, a.fuel, strategy)?;
            Ok(format!("{nf} : {ty}\n"))
        }
        Command::DenoteEncrypt(a) => {
            let sk = load_secret(&a.key)?;
            Ok(to_json(&cmd_denote_encrypt(&sk, &a.source.text()?)?))
        }
        Command::Bench(a) => {
            let report = cmd_bench(&BenchConfig {
                n_min: a.n_min,
                n_max: a.n_max,
                reps: a.reps,
                seed,
            })?;
            Ok(to_json(&report))
        }
    }
}
