//! Mafia winning-chance `w(n, m)` under the random-lynch model.
//!
//! Each turn removes a uniformly random player by lynch and then one citizen
//! by night kill, so `(n, m)` moves to `(n - 2, m)` with probability
//! `(n - m) / n` and to `(n - 2, m - 1)` with probability `m / n`. The exact
//! value is available three ways: the turn recurrence (memoized in a
//! [`WinChanceTable`]), the single-mafia product `(n-1)!!/n!!`, and the
//! alternating closed sum over falling products. Float approximations cover
//! the large-`n` regime.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial, double_factorial, falling_product, Rational};
use crate::error::{Error, Result};
use crate::game::{BoundaryRule, GameState};

/// Exact `w(n, m)` for every state up to some player count.
///
/// Rows only link `n` to `n - 2`, so the two parity classes are built
/// independently and on demand. Every `w(n, m)` has a denominator dividing
/// `n!!`, and the table stores the integer numerators over that scale. Only
/// the non-terminal prefix of a row is stored; larger `m` are mafia wins.
#[derive(Debug, Clone)]
pub struct WinChanceTable {
    boundary: BoundaryRule,
    // rows[p][k] holds n = 2k + p
    rows: [Vec<Row>; 2],
}

#[derive(Debug, Clone)]
struct Row {
    scale: BigUint,
    numerators: Vec<BigUint>,
}

impl Row {
    fn numerator(&self, mafia: u64) -> &BigUint {
        self.numerators.get(mafia as usize).unwrap_or(&self.scale)
    }
}

impl WinChanceTable {
    pub fn new(boundary: BoundaryRule) -> Self {
        Self {
            boundary,
            rows: [Vec::new(), Vec::new()],
        }
    }

    /// Table with every state `n <= max_players` filled in.
    pub fn build(max_players: u64, boundary: BoundaryRule) -> Self {
        let mut table = Self::new(boundary);
        table.extend_to(max_players);
        if max_players > 0 {
            table.extend_to(max_players - 1);
        }
        table
    }

    pub fn boundary(&self) -> BoundaryRule {
        self.boundary
    }

    /// Builds the parity class of `players` up to and including it.
    pub fn extend_to(&mut self, players: u64) {
        let parity = (players % 2) as usize;
        let target = (players / 2) as usize;
        while self.rows[parity].len() <= target {
            let n = 2 * self.rows[parity].len() as u64 + parity as u64;
            let row = self.next_row(n, self.rows[parity].last());
            self.rows[parity].push(row);
        }
    }

    fn next_row(&self, n: u64, previous: Option<&Row>) -> Row {
        let scale = double_factorial(n as i64).expect("n is non-negative");
        let mut numerators = Vec::new();
        for m in 0..=n {
            if m == 0 {
                numerators.push(BigUint::zero());
                continue;
            }
            if self.boundary.mafia_has_won(n, m) {
                break;
            }
            // Open states need n >= 2, so the previous row exists.
            let prev = previous.expect("open state has a predecessor");
            let value = prev.numerator(m) * (n - m) + prev.numerator(m - 1) * m;
            numerators.push(value);
        }
        Row { scale, numerators }
    }

    fn row(&self, players: u64) -> Option<&Row> {
        self.rows[(players % 2) as usize].get((players / 2) as usize)
    }

    /// `w(n, m)` if row `n` is built. Values with `m > n` are treated as the
    /// mafia-victory boundary, as the recurrence does.
    pub fn get(&self, players: u64, mafia: u64) -> Option<Rational> {
        let row = self.row(players)?;
        Some(Rational::new(
            BigInt::from(row.numerator(mafia).clone()),
            BigInt::from(row.scale.clone()),
        ))
    }

    pub fn get_state(&self, state: GameState) -> Option<Rational> {
        self.get(state.players(), state.mafia())
    }

    /// Compares `w(n, m)` against `w(n', m')` without building rationals.
    fn cmp_entries(&self, a: (u64, u64), b: (u64, u64)) -> Ordering {
        let ra = self.row(a.0).expect("row built");
        let rb = self.row(b.0).expect("row built");
        (ra.numerator(a.1) * &rb.scale).cmp(&(rb.numerator(b.1) * &ra.scale))
    }

    /// `w(n, m)`, building whatever rows are missing.
    pub fn value(&mut self, players: u64, mafia: u64) -> Result<Rational> {
        GameState::new(players, mafia)?;
        self.extend_to(players);
        Ok(self.get(players, mafia).expect("row was just built"))
    }

    /// Highest player count for which both parity classes are complete.
    pub fn max_players(&self) -> Option<u64> {
        let built = |p: usize| {
            let len = self.rows[p].len() as u64;
            (len > 0).then(|| 2 * (len - 1) + p as u64)
        };
        match (built(0), built(1)) {
            (Some(even), Some(odd)) => Some(even.max(odd).min(even.min(odd) + 1)),
            (Some(_), None) => Some(0),
            _ => None,
        }
    }
}

thread_local! {
    static MEMO: RefCell<[WinChanceTable; 2]> = RefCell::new([
        WinChanceTable::new(BoundaryRule::MafiaWinsOnStrictMajority),
        WinChanceTable::new(BoundaryRule::MafiaWinsOnTie),
    ]);
}

/// Exact `w(n, m)` from the turn recurrence. Backed by a per-thread table, so
/// repeated queries are lookups.
pub fn win_chance_recurrence(players: u64, mafia: u64, boundary: BoundaryRule) -> Result<Rational> {
    GameState::new(players, mafia)?;
    let slot = match boundary {
        BoundaryRule::MafiaWinsOnStrictMajority => 0,
        BoundaryRule::MafiaWinsOnTie => 1,
    };
    MEMO.with(|memo| memo.borrow_mut()[slot].value(players, mafia))
}

/// `w(n, 1) = (n-1)!! / n!!`: the lone mafioso survives every lynch.
pub fn win_chance_single(players: u64) -> Result<Rational> {
    if players == 0 {
        return Err(Error::InvalidState { players: 0, mafia: 1 });
    }
    let num = double_factorial(players as i64 - 1)?;
    let den = double_factorial(players as i64)?;
    Ok(Rational::new(num.into(), den.into()))
}

/// Closed form `w(n, m) = 1 - p_0(T)` with `T = (n - n mod 2) / 2`, expanded as
/// `1 - sum_i C(m, i) (-1)^i prod_{j<T} (n - 2j - i) / (n - 2j)`.
///
/// Derived for the strict-majority boundary only.
pub fn win_chance_closed(players: u64, mafia: u64) -> Result<Rational> {
    GameState::new(players, mafia)?;
    let end = players / 2;
    let mut citizens_win = Rational::zero();
    for i in 0..=mafia {
        let term = Rational::from_integer(binomial(mafia, i).into()) * falling_product(players, end, i)?;
        if i % 2 == 0 {
            citizens_win += term;
        } else {
            citizens_win -= term;
        }
    }
    Ok(Rational::one() - citizens_win)
}

/// [`win_chance_closed`] with an explicit boundary rule; the tie rule has no
/// closed form here and is refused.
pub fn win_chance_closed_under(players: u64, mafia: u64, boundary: BoundaryRule) -> Result<Rational> {
    match boundary {
        BoundaryRule::MafiaWinsOnStrictMajority => win_chance_closed(players, mafia),
        BoundaryRule::MafiaWinsOnTie => Err(Error::UnsupportedBoundary),
    }
}

/// `ln((n-1)!! / n!!)`, accumulated term by term so it never overflows.
pub fn ln_single_mafia(players: u64) -> Result<f64> {
    if players == 0 {
        return Err(Error::InvalidState { players: 0, mafia: 1 });
    }
    let mut acc = 0.0;
    let mut k = players;
    while k >= 2 {
        acc += (-1.0 / k as f64).ln_1p();
        k -= 2;
    }
    Ok(acc)
}

/// Leading term `m (n-1)!! / n!!` of the closed form for large `n`.
pub fn win_chance_leading_term(players: u64, mafia: u64) -> Result<f64> {
    Ok(mafia as f64 * ln_single_mafia(players)?.exp())
}

fn parity_factor(players: u64) -> f64 {
    FRAC_PI_2.powf((players % 2) as f64 - 0.5)
}

/// `(pi/2)^((n mod 2) - 1/2) m / sqrt(n)`.
pub fn win_chance_asymptotic(players: u64, mafia: u64) -> Result<f64> {
    if players == 0 {
        return Err(Error::InvalidArgument(
            "asymptotic form needs at least one player".into(),
        ));
    }
    Ok(parity_factor(players) * mafia as f64 / (players as f64).sqrt())
}

/// Parity-aware single-mafia approximation `(pi/2)^((n mod 2) - 1/2) / sqrt(n)`.
pub fn approx_single_parity(players: u64) -> Result<f64> {
    win_chance_asymptotic(players, 1)
}

/// `w(2k+1, 1) / w(2k, 1) = ((2k)!! / (2k-1)!!)^2 / (2k+1)`, the Wallis
/// partial product. Increases towards `pi / 2`.
pub fn parity_ratio(k: u64) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("parity ratio needs k >= 1".into()));
    }
    let even = BigInt::from(double_factorial(2 * k as i64)?);
    let odd = BigInt::from(double_factorial(2 * k as i64 - 1)?);
    Ok(Rational::new(
        &even * &even,
        &odd * &odd * BigInt::from(2 * k + 1),
    ))
}

/// Mafia size whose exact winning chance is closest to one half, ties going
/// to the smaller mafia.
pub fn optimal_mafia_numeric(players: u64) -> Result<u64> {
    if players == 0 {
        return Err(Error::InvalidArgument("need at least one player".into()));
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut best: Option<(Rational, u64)> = None;
    for mafia in 0..=players {
        let gap = (win_chance_recurrence(players, mafia, BoundaryRule::default())? - &half).abs();
        if best.as_ref().is_none_or(|(b, _)| gap < *b) {
            best = Some((gap, mafia));
        }
    }
    Ok(best.expect("range is non-empty").1)
}

/// `(1/2) (pi/2)^(1/2 - (n mod 2)) sqrt(n)`: the mafia size at which the
/// asymptotic winning chance equals one half.
pub fn optimal_mafia_approx(players: u64) -> Result<f64> {
    if players == 0 {
        return Err(Error::InvalidArgument("need at least one player".into()));
    }
    Ok(0.5 * (players as f64).sqrt() / parity_factor(players))
}

/// The qualitative inequalities checked by [`verify_monotonicity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inequality {
    /// `w(n, m) > w(n, m-1)`
    MoreMafiaHelps,
    /// `w(n+2, m) < w(n, m)`
    TwoCitizensHurt,
    /// `w(n+2, m+1) > w(n, m)`: one more citizen and one more mafioso.
    CitizenAndMafiosoHelp,
    /// `w(2k+1, m) > w(2k, m)`
    OddPlayerHelps,
    /// `w(n-2, m) - w(n, m)`, `w(n, m) - w(n-2, m-1)` and
    /// `w(n-2, m) - w(n-2, m-1)` share a sign.
    EquivalentDifferences,
}

impl Inequality {
    pub const ALL: [Inequality; 5] = [
        Inequality::MoreMafiaHelps,
        Inequality::TwoCitizensHurt,
        Inequality::CitizenAndMafiosoHelp,
        Inequality::OddPlayerHelps,
        Inequality::EquivalentDifferences,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub max_players: u64,
    pub boundary: BoundaryRule,
    pub states_checked: usize,
    pub violations: Vec<(Inequality, GameState)>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, which: Inequality) -> impl Iterator<Item = &GameState> {
        self.violations
            .iter()
            .filter(move |(i, _)| *i == which)
            .map(|(_, s)| s)
    }
}

/// Checks every inequality family over the states `n <= max_players` with
/// `n - m >= m >= 1`.
pub fn verify_monotonicity(max_players: u64, boundary: BoundaryRule) -> Result<MonotonicityReport> {
    if max_players < 3 {
        return Err(Error::InvalidArgument(
            "monotonicity check needs max_players >= 3".into(),
        ));
    }
    let table = WinChanceTable::build(max_players + 2, boundary);
    let mut report = MonotonicityReport {
        max_players,
        boundary,
        states_checked: 0,
        violations: Vec::new(),
    };
    for n in 2..=max_players {
        for m in 1..=n / 2 {
            report.states_checked += 1;
            let state = GameState::new(n, m)?;
            let mut check = |ok: bool, which| {
                if !ok {
                    report.violations.push((which, state));
                }
            };
            check(
                table.cmp_entries((n, m), (n, m - 1)).is_gt(),
                Inequality::MoreMafiaHelps,
            );
            check(
                table.cmp_entries((n + 2, m), (n, m)).is_lt(),
                Inequality::TwoCitizensHurt,
            );
            check(
                table.cmp_entries((n + 2, m + 1), (n, m)).is_gt(),
                Inequality::CitizenAndMafiosoHelp,
            );
            if n % 2 == 0 {
                check(
                    table.cmp_entries((n + 1, m), (n, m)).is_gt(),
                    Inequality::OddPlayerHelps,
                );
            }
            let signs = [
                table.cmp_entries((n - 2, m), (n, m)),
                table.cmp_entries((n, m), (n - 2, m - 1)),
                table.cmp_entries((n - 2, m), (n - 2, m - 1)),
            ];
            check(
                signs.iter().all(|s| *s == signs[0]),
                Inequality::EquivalentDifferences,
            );
        }
    }
    Ok(report)
}
