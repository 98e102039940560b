use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quotient::{build_pattern_quotient, has_canonical_form, PatternQuotient, SlotPartition};
use super::search::SearchBudget;
use super::{DistinguishError, Graph};

/// Which of the two candidate patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Candidate {
    First,
    Second,
}

impl Candidate {
    fn from_bit(bit: bool) -> Self {
        if bit {
            Candidate::Second
        } else {
            Candidate::First
        }
    }
}

/// What the adversary sees in one round: the host, the quotient's partition
/// (without provenance) and both candidate patterns.
#[derive(Debug, Clone, Copy)]
pub struct Challenge<'a> {
    pub host: &'a Graph,
    pub partition: &'a SlotPartition,
    pub candidates: (&'a Graph, &'a Graph),
}

/// One round of the game with its secret choice.
#[derive(Debug, Clone)]
pub struct DistinguishInstance {
    host: Graph,
    quotient: PatternQuotient,
    candidates: (Graph, Graph),
    secret: Candidate,
}

impl DistinguishInstance {
    /// Pick a candidate uniformly and quotient the host by it.
    pub fn sample<R: Rng + ?Sized>(
        host: &Graph,
        p0: &Graph,
        p1: &Graph,
        rng: &mut R,
        budget: &SearchBudget,
    ) -> Result<Self, DistinguishError> {
        let secret = Candidate::from_bit(rng.random());
        let pattern = match secret {
            Candidate::First => p0,
            Candidate::Second => p1,
        };
        let quotient = build_pattern_quotient(pattern, host, rng, budget)?;
        Ok(DistinguishInstance {
            host: host.clone(),
            quotient,
            candidates: (p0.clone(), p1.clone()),
            secret,
        })
    }

    pub fn challenge(&self) -> Challenge<'_> {
        Challenge {
            host: &self.host,
            partition: &self.quotient.slot_partition,
            candidates: (&self.candidates.0, &self.candidates.1),
        }
    }

    pub fn secret(&self) -> Candidate {
        self.secret
    }

    pub fn quotient(&self) -> &PatternQuotient {
        &self.quotient
    }
}

pub trait Adversary: Sync {
    fn name(&self) -> &str;

    fn guess(
        &self,
        challenge: &Challenge<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Candidate, DistinguishError>;
}

/// Decides whether a partition is the "pattern present" canonical form for
/// `pattern` over `host`.
pub trait Recognizer: Sync {
    fn recognizes(
        &self,
        host: &Graph,
        partition: &SlotPartition,
        pattern: &Graph,
    ) -> Result<bool, DistinguishError>;
}

impl<F> Recognizer for F
where
    F: Fn(&Graph, &SlotPartition, &Graph) -> Result<bool, DistinguishError> + Sync,
{
    fn recognizes(
        &self,
        host: &Graph,
        partition: &SlotPartition,
        pattern: &Graph,
    ) -> Result<bool, DistinguishError> {
        self(host, partition, pattern)
    }
}

/// Exact recognizer backed by [`has_canonical_form`].
#[derive(Debug, Clone, Default)]
pub struct OracleRecognizer {
    pub budget: SearchBudget,
}

impl Recognizer for OracleRecognizer {
    fn recognizes(
        &self,
        host: &Graph,
        partition: &SlotPartition,
        pattern: &Graph,
    ) -> Result<bool, DistinguishError> {
        has_canonical_form(partition, pattern, host, &self.budget)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CoinFlip;

impl Adversary for CoinFlip {
    fn name(&self) -> &str {
        "coin-flip"
    }

    fn guess(
        &self,
        _: &Challenge<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Candidate, DistinguishError> {
        Ok(Candidate::from_bit(rng.random()))
    }
}

/// Compares the number of merged pairs with each candidate's edge count.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassSizeProfile;

impl Adversary for ClassSizeProfile {
    fn name(&self) -> &str {
        "class-size-profile"
    }

    fn guess(
        &self,
        ch: &Challenge<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Candidate, DistinguishError> {
        let merged = ch.partition.doubletons().len();
        let fits = (
            ch.candidates.0.edge_count() == merged,
            ch.candidates.1.edge_count() == merged,
        );
        Ok(decide(fits, rng))
    }
}

/// Tests each candidate with a [`Recognizer`]; guesses at random on ties.
#[derive(Debug, Clone, Default)]
pub struct CanonicalForm<R> {
    pub recognizer: R,
}

impl<R: Recognizer> Adversary for CanonicalForm<R> {
    fn name(&self) -> &str {
        "canonical-form"
    }

    fn guess(
        &self,
        ch: &Challenge<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Candidate, DistinguishError> {
        let fits = (
            self.recognizer
                .recognizes(ch.host, ch.partition, ch.candidates.0)?,
            self.recognizer
                .recognizes(ch.host, ch.partition, ch.candidates.1)?,
        );
        Ok(decide(fits, rng))
    }
}

fn decide(fits: (bool, bool), rng: &mut dyn RngCore) -> Candidate {
    match fits {
        (true, false) => Candidate::First,
        (false, true) => Candidate::Second,
        _ => Candidate::from_bit(rng.random()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub trials: u64,
    pub correct_guesses: u64,
    /// `correct_guesses / trials - 1/2`.
    pub advantage: f64,
}

impl GameResult {
    pub fn new(trials: u64, correct_guesses: u64) -> Self {
        GameResult {
            trials,
            correct_guesses,
            advantage: correct_guesses as f64 / trials as f64 - 0.5,
        }
    }
}

/// Generator for trial `index`: an independent ChaCha stream of the master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `1` runs on the calling thread.
    pub jobs: usize,
    pub budget: SearchBudget,
}

impl GameConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        GameConfig {
            trials,
            seed,
            jobs: 1,
            budget: SearchBudget::default(),
        }
    }
}

/// Run the distinguishing game. Trial `i` draws everything from
/// [`trial_rng`]`(seed, i)`, so the result does not depend on `jobs`.
pub fn distinguish_game(
    host: &Graph,
    p0: &Graph,
    p1: &Graph,
    adversary: &dyn Adversary,
    config: &GameConfig,
) -> Result<GameResult, DistinguishError> {
    if config.trials == 0 {
        return Err(DistinguishError::NoTrials);
    }
    let run = |index: u64| -> Result<bool, DistinguishError> {
        let mut rng = trial_rng(config.seed, index);
        let instance = DistinguishInstance::sample(host, p0, p1, &mut rng, &config.budget)?;
        let guess = adversary
            .guess(&instance.challenge(), &mut rng)
            .map_err(|source| DistinguishError::Adversary {
                trial: index,
                source: Box::new(source),
            })?;
        Ok(guess == instance.secret())
    };
    let outcomes: Vec<Result<bool, DistinguishError>> = if config.jobs <= 1 {
        (0..config.trials).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| DistinguishError::InvalidQuotient(format!("thread pool: {e}")))?;
        pool.install(|| (0..config.trials).into_par_iter().map(run).collect())
    };
    let mut correct = 0;
    for outcome in outcomes {
        correct += u64::from(outcome?);
    }
    Ok(GameResult::new(config.trials, correct))
}

/// Decide whether `pattern` embeds in `host` using only a recognizer for the
/// quotient's canonical form.
pub fn reduce_si_to_distinguishing<R: Rng + ?Sized>(
    pattern: &Graph,
    host: &Graph,
    recognizer: &dyn Recognizer,
    rng: &mut R,
    budget: &SearchBudget,
) -> Result<bool, DistinguishError> {
    let quotient = build_pattern_quotient(pattern, host, rng, budget)?;
    recognizer.recognizes(host, &quotient.slot_partition, pattern)
}
