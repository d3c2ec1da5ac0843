//! Distribution of the number of living mafia members over time.
//!
//! Starting from `N` players and `M` mafia, turn `t` lynches among
//! `N - 2t` living players, so
//! `p_m(t+1) = (N-2t-m)/(N-2t) p_m(t) + (m+1)/(N-2t) p_{m+1}(t)`.
//! The equations describe real games only while a citizen is guaranteed to
//! be alive, i.e. for `t <= (N - M) / 2`; outside that window the discrete
//! operations refuse to answer.
//!
//! The continuous-time version replaces the difference by a derivative and
//! has the binomial solution `C(M, m) (1 - s)^(M-m) s^m` with
//! `s = sqrt(1 - 2t/N)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, falling_product, to_f64, Rational};
use crate::error::{Error, Result};
use crate::game::GameState;

/// Exact `p_0(t) .. p_M(t)` after `t` whole turns.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    initial_players: u64,
    initial_mafia: u64,
    turn: u64,
    probs: Vec<Rational>,
}

impl Distribution {
    /// Point mass on `M` at turn zero.
    pub fn initial(initial_players: u64, initial_mafia: u64) -> Result<Self> {
        check_initial(initial_players, initial_mafia)?;
        let mut probs = vec![Rational::zero(); initial_mafia as usize + 1];
        probs[initial_mafia as usize] = Rational::one();
        Ok(Self {
            initial_players,
            initial_mafia,
            turn: 0,
            probs,
        })
    }

    pub fn initial_players(&self) -> u64 {
        self.initial_players
    }

    pub fn initial_mafia(&self) -> u64 {
        self.initial_mafia
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, mafia: u64) -> Option<&Rational> {
        self.probs.get(mafia as usize)
    }

    pub fn mass(&self) -> Rational {
        self.probs.iter().sum()
    }

    /// `sum_m m p_m`
    pub fn mean(&self) -> Rational {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| p * BigInt::from(m))
            .sum()
    }

    /// One more turn of random lynch and night kill.
    pub fn step(&self) -> Result<Self> {
        let turn = self.turn + 1;
        check_window(self.initial_players, self.initial_mafia, turn)?;
        let alive = self.initial_players - 2 * self.turn;
        let alive_big = BigInt::from(alive);
        let probs = (0..self.probs.len())
            .map(|m| {
                let stay = &self.probs[m] * BigInt::from(alive - m as u64);
                let fall = match self.probs.get(m + 1) {
                    Some(p) => p * BigInt::from(m + 1),
                    None => Rational::zero(),
                };
                (stay + fall) / &alive_big
            })
            .collect();
        Ok(Self {
            initial_players: self.initial_players,
            initial_mafia: self.initial_mafia,
            turn,
            probs,
        })
    }
}

fn check_initial(players: u64, mafia: u64) -> Result<()> {
    GameState::new(players, mafia)?;
    if players == 0 {
        return Err(Error::InvalidArgument(
            "evolution needs at least one player".into(),
        ));
    }
    Ok(())
}

/// Last turn for which the discrete equations describe a playable game.
pub fn last_valid_turn(initial_players: u64, initial_mafia: u64) -> u64 {
    initial_players.saturating_sub(initial_mafia) / 2
}

fn check_window(players: u64, mafia: u64, turn: u64) -> Result<()> {
    let last_valid = last_valid_turn(players, mafia);
    if turn > last_valid {
        return Err(Error::OutsideValidityWindow {
            players,
            mafia,
            turns: turn,
            last_valid,
        });
    }
    Ok(())
}

/// Exact distribution after `turns` turns, by repeated stepping.
pub fn evolve_discrete(initial_players: u64, initial_mafia: u64, turns: u64) -> Result<Distribution> {
    check_initial(initial_players, initial_mafia)?;
    check_window(initial_players, initial_mafia, turns)?;
    let mut dist = Distribution::initial(initial_players, initial_mafia)?;
    for _ in 0..turns {
        dist = dist.step()?;
    }
    Ok(dist)
}

/// Every distribution from turn 0 through `turns`.
pub fn evolve_discrete_path(
    initial_players: u64,
    initial_mafia: u64,
    turns: u64,
) -> Result<Vec<Distribution>> {
    check_initial(initial_players, initial_mafia)?;
    check_window(initial_players, initial_mafia, turns)?;
    let mut path = vec![Distribution::initial(initial_players, initial_mafia)?];
    for _ in 0..turns {
        let next = path.last().expect("non-empty").step()?;
        path.push(next);
    }
    Ok(path)
}

/// Closed form `p_m(t) = sum_{i=m}^{M} C(M,i) C(i,m) (-1)^(i-m) F(N, t, i)`
/// where `F` is [`falling_product`].
///
/// Defined for any `2t <= N`; it matches [`evolve_discrete`] inside the
/// validity window and is also what the endgame win chance evaluates.
pub fn pm_closed(initial_players: u64, initial_mafia: u64, mafia: u64, turns: u64) -> Result<Rational> {
    check_initial(initial_players, initial_mafia)?;
    if mafia > initial_mafia {
        return Err(Error::InvalidArgument(format!(
            "mafia count {mafia} exceeds the initial {initial_mafia}"
        )));
    }
    let mut acc = Rational::zero();
    for i in mafia..=initial_mafia {
        let weight = BigInt::from(binomial(initial_mafia, i) * binomial(i, mafia));
        let term = falling_product(initial_players, turns, i)? * weight;
        if (i - mafia).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `<m>(t) = M prod_{i<t} (N-2i-1)/(N-2i)`, valid while `N - 2t - M >= 0`.
pub fn mean_discrete(initial_players: u64, initial_mafia: u64, turns: u64) -> Result<Rational> {
    check_initial(initial_players, initial_mafia)?;
    check_window(initial_players, initial_mafia, turns)?;
    Ok(falling_product(initial_players, turns, 1)? * BigInt::from(initial_mafia))
}

/// Mafia winning chance read off the evolution: `1 - p_0(T)` with
/// `T = (n - n mod 2) / 2`.
pub fn win_chance_from_evolution(players: u64, mafia: u64) -> Result<Rational> {
    GameState::new(players, mafia)?;
    if players == 0 {
        return Ok(Rational::zero());
    }
    Ok(Rational::one() - pm_closed(players, mafia, 0, players / 2)?)
}

/// Continuous-time approximation `p~_0 .. p~_M` at real time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDistribution {
    pub initial_players: u64,
    pub initial_mafia: u64,
    pub time: f64,
    pub probs: Vec<f64>,
}

impl ContinuousDistribution {
    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(m, p)| m as f64 * p).sum()
    }
}

fn check_time(initial_players: u64, time: f64) -> Result<()> {
    let horizon = initial_players as f64 / 2.0;
    if !(0.0..=horizon).contains(&time) {
        return Err(Error::TimeOutOfRange { time, horizon });
    }
    Ok(())
}

/// Fraction of the initial mafia expected to survive to time `t`.
fn survival(initial_players: u64, time: f64) -> f64 {
    (1.0 - 2.0 * time / initial_players as f64).max(0.0).sqrt()
}

/// `p~_m(t) = C(M, m) (1 - s)^(M-m) s^m`, `s = sqrt(1 - 2t/N)`.
pub fn pm_continuous(initial_players: u64, initial_mafia: u64, mafia: u64, time: f64) -> Result<f64> {
    check_initial(initial_players, initial_mafia)?;
    check_time(initial_players, time)?;
    if mafia > initial_mafia {
        return Ok(0.0);
    }
    let s = survival(initial_players, time);
    let weight = to_f64(&Rational::from_integer(binomial(initial_mafia, mafia).into()));
    Ok(weight * (1.0 - s).powi((initial_mafia - mafia) as i32) * s.powi(mafia as i32))
}

pub fn continuous_distribution(
    initial_players: u64,
    initial_mafia: u64,
    time: f64,
) -> Result<ContinuousDistribution> {
    let probs = (0..=initial_mafia)
        .map(|m| pm_continuous(initial_players, initial_mafia, m, time))
        .collect::<Result<_>>()?;
    Ok(ContinuousDistribution {
        initial_players,
        initial_mafia,
        time,
        probs,
    })
}

/// Time at which `p~_m` peaks: `(N/2) (1 - (m/M)^2)`, for `1 <= m <= M`.
pub fn peak_time(initial_players: u64, initial_mafia: u64, mafia: u64) -> Result<f64> {
    check_initial(initial_players, initial_mafia)?;
    if mafia == 0 || mafia > initial_mafia {
        return Err(Error::NoInteriorPeak {
            mafia,
            initial: initial_mafia,
        });
    }
    let ratio = mafia as f64 / initial_mafia as f64;
    Ok(initial_players as f64 / 2.0 * (1.0 - ratio * ratio))
}

/// `<m~>(t) = M sqrt(1 - 2t/N)`.
pub fn mean_continuous(initial_players: u64, initial_mafia: u64, time: f64) -> Result<f64> {
    check_initial(initial_players, initial_mafia)?;
    check_time(initial_players, time)?;
    Ok(initial_mafia as f64 * survival(initial_players, time))
}

/// Distance from the singular time `N/2` that integration must keep, in steps.
pub const SINGULARITY_GUARD_STEPS: f64 = 10.0;

/// Integrates `dp~_m/dt = (-m p~_m + (m+1) p~_{m+1}) / (N - 2t)` from the
/// point mass on `M` with classic fixed-step RK4.
///
/// The interval is split into `ceil(t_end / step)` equal steps so the last
/// one lands on `t_end`; the actual step never exceeds `step`.
pub fn integrate_continuous(
    initial_players: u64,
    initial_mafia: u64,
    t_end: f64,
    step: f64,
) -> Result<ContinuousDistribution> {
    check_initial(initial_players, initial_mafia)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    let limit = initial_players as f64 / 2.0 - SINGULARITY_GUARD_STEPS * step;
    if !(t_end >= 0.0 && t_end <= limit) {
        return Err(Error::TimeOutOfRange {
            time: t_end,
            horizon: limit.max(0.0),
        });
    }

    let n = initial_players as f64;
    let rhs = |t: f64, p: &[f64], out: &mut [f64]| {
        let rate = 1.0 / (n - 2.0 * t);
        for m in 0..p.len() {
            let inflow = p.get(m + 1).map_or(0.0, |q| (m + 1) as f64 * q);
            out[m] = rate * (inflow - m as f64 * p[m]);
        }
    };

    let size = initial_mafia as usize + 1;
    let mut p = vec![0.0; size];
    p[initial_mafia as usize] = 1.0;
    let steps = (t_end / step).ceil() as u64;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };

    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![0.0; size], vec![0.0; size], vec![0.0; size], vec![0.0; size]);
    let mut tmp = vec![0.0; size];
    for i in 0..steps {
        let t = i as f64 * h;
        rhs(t, &p, &mut k1);
        for m in 0..size {
            tmp[m] = p[m] + 0.5 * h * k1[m];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for m in 0..size {
            tmp[m] = p[m] + 0.5 * h * k2[m];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for m in 0..size {
            tmp[m] = p[m] + h * k3[m];
        }
        rhs(t + h, &tmp, &mut k4);
        for m in 0..size {
            p[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }
    }
    Ok(ContinuousDistribution {
        initial_players,
        initial_mafia,
        time: t_end,
        probs: p,
    })
}

/// `1 - p~_0((n-1)/2) = 1 - (1 - 1/sqrt(n))^m`.
pub fn win_chance_continuous(players: u64, mafia: u64) -> Result<f64> {
    if players == 0 {
        return Err(Error::InvalidArgument("need at least one player".into()));
    }
    let s = 1.0 / (players as f64).sqrt();
    Ok(1.0 - (1.0 - s).powi(mafia as i32))
}

/// Small-`m / sqrt(n)` simplification of [`win_chance_continuous`].
pub fn win_chance_continuous_linear(players: u64, mafia: u64) -> Result<f64> {
    if players == 0 {
        return Err(Error::InvalidArgument("need at least one player".into()));
    }
    Ok(mafia as f64 / (players as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::winchance::{win_chance_closed, win_chance_recurrence};
    use crate::BoundaryRule;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn discrete_steps() {
        let d = evolve_discrete(4, 1, 0).unwrap();
        assert_eq!(d.probs(), &[rat(0, 1), rat(1, 1)]);
        // day one lynches the mafioso with probability 1/4
        let d = evolve_discrete(4, 1, 1).unwrap();
        assert_eq!(d.probs(), &[rat(1, 4), rat(3, 4)]);
        let d = evolve_discrete(32, 4, 2).unwrap();
        assert_eq!(d.mass(), rat(1, 1));
        assert_eq!(d.turn(), 2);
    }

    #[test]
    fn discrete_rejects_turns_past_window() {
        assert_eq!(last_valid_turn(4, 1), 1);
        assert_eq!(
            evolve_discrete(4, 1, 2),
            Err(Error::OutsideValidityWindow {
                players: 4,
                mafia: 1,
                turns: 2,
                last_valid: 1
            })
        );
        assert!(evolve_discrete(4, 1, 1).unwrap().step().is_err());
        assert!(evolve_discrete(4, 5, 0).is_err());
        assert!(evolve_discrete(0, 0, 0).is_err());
    }

    #[test]
    fn closed_form_probabilities() {
        assert_eq!(pm_closed(4, 1, 1, 1).unwrap(), rat(3, 4));
        assert_eq!(pm_closed(4, 1, 0, 1).unwrap(), rat(1, 4));
        for (n, m) in [(5, 2), (10, 3), (1, 1)] {
            assert_eq!(pm_closed(n, m, m, 0).unwrap(), rat(1, 1));
        }
        assert!(pm_closed(4, 1, 0, 3).is_err());
        assert!(pm_closed(4, 1, 2, 0).is_err());
    }

    #[test]
    fn path_matches_pointwise_evolution() {
        let path = evolve_discrete_path(20, 3, 8).unwrap();
        assert_eq!(path.len(), 9);
        for (t, dist) in path.iter().enumerate() {
            assert_eq!(dist, &evolve_discrete(20, 3, t as u64).unwrap());
        }
    }

    #[test]
    fn discrete_means() {
        assert_eq!(mean_discrete(4, 1, 1).unwrap(), rat(3, 4));
        assert_eq!(mean_discrete(17, 5, 0).unwrap(), rat(5, 1));
        assert_eq!(mean_discrete(32, 4, 1).unwrap(), rat(31, 8));
        assert!(mean_discrete(4, 1, 2).is_err());
        for t in 0..=14 {
            assert_eq!(
                mean_discrete(32, 4, t).unwrap(),
                evolve_discrete(32, 4, t).unwrap().mean()
            );
        }
    }

    #[test]
    fn continuous_probabilities() {
        assert_eq!(pm_continuous(32, 4, 4, 0.0).unwrap(), 1.0);
        assert_eq!(pm_continuous(32, 4, 2, 0.0).unwrap(), 0.0);
        assert_eq!(pm_continuous(32, 4, 0, 16.0).unwrap(), 1.0);
        assert!((pm_continuous(8, 2, 1, 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(pm_continuous(8, 2, 1, 4.5).is_err());
        assert!(pm_continuous(8, 2, 1, -0.1).is_err());
    }

    #[test]
    fn continuous_normalization_and_mean() {
        for (n, m) in [(32u64, 4u64), (9, 3), (50, 7)] {
            for k in 0..=20 {
                let t = n as f64 / 2.0 * k as f64 / 20.0;
                let dist = continuous_distribution(n, m, t).unwrap();
                assert!((dist.mass() - 1.0).abs() < 1e-12);
                assert!((dist.mean() - mean_continuous(n, m, t).unwrap()).abs() < 1e-12);
                assert!(dist.probs.iter().all(|p| (-1e-15..=1.0 + 1e-15).contains(p)));
            }
        }
    }

    #[test]
    fn peaks() {
        assert_eq!(peak_time(32, 4, 4).unwrap(), 0.0);
        assert_eq!(peak_time(32, 4, 2).unwrap(), 12.0);
        assert_eq!(peak_time(32, 4, 1).unwrap(), 15.0);
        assert_eq!(
            peak_time(32, 4, 0),
            Err(Error::NoInteriorPeak { mafia: 0, initial: 4 })
        );
        assert!(peak_time(32, 4, 5).is_err());
    }

    #[test]
    fn continuous_means() {
        assert_eq!(mean_continuous(32, 4, 0.0).unwrap(), 4.0);
        assert!((mean_continuous(32, 4, 12.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(mean_continuous(32, 4, 16.0).unwrap(), 0.0);
        assert!(mean_continuous(32, 4, 17.0).is_err());
    }

    #[test]
    fn integrator_tracks_closed_form() {
        let dist = integrate_continuous(32, 4, 15.0, 1e-3).unwrap();
        assert!((dist.mass() - 1.0).abs() < 1e-10);
        for (m, p) in dist.probs.iter().enumerate() {
            assert!((p - pm_continuous(32, 4, m as u64, 15.0).unwrap()).abs() < 1e-6);
        }
        let start = integrate_continuous(32, 4, 0.0, 1e-3).unwrap();
        assert_eq!(start.probs, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn integrator_error_shrinks_like_fourth_order() {
        let error = |h: f64| {
            let dist = integrate_continuous(32, 4, 14.0, h).unwrap();
            (0..=4)
                .map(|m| (dist.probs[m] - pm_continuous(32, 4, m as u64, 14.0).unwrap()).abs())
                .fold(0.0, f64::max)
        };
        let coarse = error(0.1);
        let fine = error(0.05);
        // halving the step cuts the error by about 2^4
        assert!(coarse / fine > 12.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn integrator_guards_the_singularity() {
        assert!(integrate_continuous(32, 4, 15.995, 1e-3).is_err());
        assert!(integrate_continuous(32, 4, 15.99, 1e-3).is_ok());
        assert!(integrate_continuous(32, 4, 1.0, 0.0).is_err());
        assert!(integrate_continuous(32, 4, 1.0, -1e-3).is_err());
        assert!(integrate_continuous(32, 4, -1.0, 1e-3).is_err());
    }

    #[test]
    fn continuous_win_chance() {
        assert_eq!(win_chance_continuous(9, 0).unwrap(), 0.0);
        assert!((win_chance_continuous(100, 1).unwrap() - 0.1).abs() < 1e-15);
        assert!((win_chance_continuous(4, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(win_chance_continuous_linear(100, 3).unwrap(), 0.3);
        // continuous estimate is 1 - p~_0((n-1)/2)
        for (n, m) in [(9u64, 2u64), (20, 3)] {
            let p0 = pm_continuous(n, m, 0, (n as f64 - 1.0) / 2.0).unwrap();
            assert!((win_chance_continuous(n, m).unwrap() - (1.0 - p0)).abs() < 1e-12);
        }
    }

    #[test]
    fn endgame_gives_win_chance() {
        assert_eq!(win_chance_from_evolution(4, 2).unwrap(), rat(3, 4));
        assert_eq!(win_chance_from_evolution(9, 1).unwrap(), rat(128, 315));
        assert_eq!(win_chance_from_evolution(11, 0).unwrap(), rat(0, 1));
        assert!(win_chance_from_evolution(3, 4).is_err());
        for n in 1..=16 {
            for m in 0..=n {
                let expected = win_chance_recurrence(n, m, BoundaryRule::default()).unwrap();
                assert_eq!(win_chance_from_evolution(n, m).unwrap(), expected);
                assert_eq!(win_chance_closed(n, m).unwrap(), expected);
            }
        }
    }
}
