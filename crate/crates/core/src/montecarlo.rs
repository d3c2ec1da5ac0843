//! Seeded simulation of the random-lynch game.
//!
//! Trial `i` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)`
//! switched to stream `i` (see [`trial_rng`]). Streams depend only on
//! `(seed, trial)`, so results do not change with the number of threads or
//! with how rayon splits the work. This derivation is part of the output
//! contract: changing it changes every published estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::last_valid_turn;
use crate::game::{BoundaryRule, GameState, Winner};

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random lynch: every living player is equally likely to be eliminated.
pub fn lynch_hits_mafia<R: Rng + ?Sized>(players: u64, mafia: u64, rng: &mut R) -> bool {
    rng.random_range(0..players) < mafia
}

/// States visited by one game, sampled at turn boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// From the initial state to the terminal one. Every step removes two
    /// players except possibly the last, which stops right after the lynch
    /// when that decides the game.
    pub states: Vec<GameState>,
    pub winner: Winner,
}

fn play<R: Rng + ?Sized>(
    start: GameState,
    boundary: BoundaryRule,
    rng: &mut R,
    mut visit: impl FnMut(GameState),
) -> Winner {
    let (mut players, mut mafia) = (start.players(), start.mafia());
    loop {
        let state = GameState::new(players, mafia).expect("mafia never exceeds players");
        if let Some(winner) = state.winner(boundary) {
            return winner;
        }
        if lynch_hits_mafia(players, mafia, rng) {
            mafia -= 1;
        }
        players -= 1;
        let after_lynch = GameState::new(players, mafia).expect("mafia never exceeds players");
        if let Some(winner) = after_lynch.winner(boundary) {
            visit(after_lynch);
            return winner;
        }
        // a citizen is alive here, otherwise the mafia would have won
        players -= 1;
        visit(GameState::new(players, mafia).expect("mafia never exceeds players"));
    }
}

/// Plays one game: lynch a uniformly random player by day, kill a citizen by
/// night, and stop as soon as either side has won.
pub fn simulate_game<R: Rng + ?Sized>(
    players: u64,
    mafia: u64,
    boundary: BoundaryRule,
    rng: &mut R,
) -> Result<Trajectory> {
    let start = GameState::new(players, mafia)?;
    let mut states = vec![start];
    let winner = play(start, boundary, rng, |s| states.push(s));
    Ok(Trajectory { states, winner })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub players: u64,
    pub mafia: u64,
    pub trials: u64,
    pub seed: u64,
    pub mafia_wins: u64,
    pub estimate: f64,
    pub std_error: f64,
}

impl SimulationReport {
    fn new(players: u64, mafia: u64, trials: u64, seed: u64, mafia_wins: u64) -> Self {
        let estimate = mafia_wins as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Self {
            players,
            mafia,
            trials,
            seed,
            mafia_wins,
            estimate,
            std_error,
        }
    }

    /// Whether `value` lies within `sigmas` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        (self.estimate - value).abs() <= sigmas * self.std_error
    }
}

/// Monte Carlo estimate of the mafia winning chance. Runs on the current
/// rayon pool; the report is identical for any pool size.
pub fn estimate_win_chance(
    players: u64,
    mafia: u64,
    boundary: BoundaryRule,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    let start = GameState::new(players, mafia)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mafia_wins = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            u64::from(play(start, boundary, &mut rng, |_| {}) == Winner::Mafia)
        })
        .sum();
    Ok(SimulationReport::new(players, mafia, trials, seed, mafia_wins))
}

/// Empirical distribution of the mafia count after a number of turns.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub initial_players: u64,
    pub initial_mafia: u64,
    pub turn: u64,
    pub trials: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn probs(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// Total variation distance to another distribution over the same support.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        let probs = self.probs();
        let len = probs.len().max(other.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..len)
            .map(|i| (at(&probs, i) - at(other, i)).abs())
            .sum::<f64>()
    }
}

/// Samples the mafia count after `turns` turns of the death process.
///
/// Like the evolution equations, turns are played regardless of a mafia
/// majority; only `m = 0` is absorbing. Inside the validity window a citizen
/// is always left for the night kill.
pub fn estimate_distribution(
    initial_players: u64,
    initial_mafia: u64,
    turns: u64,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    GameState::new(initial_players, initial_mafia)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let last_valid = last_valid_turn(initial_players, initial_mafia);
    if turns > last_valid {
        return Err(Error::OutsideValidityWindow {
            players: initial_players,
            mafia: initial_mafia,
            turns,
            last_valid,
        });
    }
    let size = initial_mafia as usize + 1;
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut mafia = initial_mafia;
            for t in 0..turns {
                if mafia > 0 && lynch_hits_mafia(initial_players - 2 * t, mafia, &mut rng) {
                    mafia -= 1;
                }
            }
            mafia as usize
        })
        .fold(
            || vec![0u64; size],
            |mut acc, m| {
                acc[m] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(EmpiricalDistribution {
        initial_players,
        initial_mafia,
        turn: turns,
        trials,
        seed,
        counts,
    })
}
