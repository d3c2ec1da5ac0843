use mafia_odds::evolution::{
    continuous_distribution, evolve_discrete_path, last_valid_turn, mean_continuous, mean_discrete,
};
use mafia_odds::montecarlo::estimate_win_chance;
use mafia_odds::winchance::{
    approx_single_parity, optimal_mafia_approx, optimal_mafia_numeric, win_chance_asymptotic,
    win_chance_closed_under, win_chance_recurrence, win_chance_single, WinChanceTable,
};
use mafia_odds::{evolution, to_f64, BoundaryRule, Error, GameState};

use crate::output::{Cell, Table};

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed flags or inputs; exit 2.
    Usage(String),
    /// Valid request the model cannot answer; exit 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_argument_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

pub type CmdResult = Result<Table, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Recurrence,
    Closed,
    Asymptotic,
    Continuous,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::Closed => "closed",
            Method::Asymptotic => "asymptotic",
            Method::Continuous => "continuous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Boundary {
    #[default]
    Strict,
    Ties,
}

impl From<Boundary> for BoundaryRule {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Strict => BoundaryRule::MafiaWinsOnStrictMajority,
            Boundary::Ties => BoundaryRule::MafiaWinsOnTie,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Mode {
    Discrete,
    Continuous,
    #[default]
    Both,
}

fn state(players: u64, mafia: u64) -> Result<GameState, CliError> {
    Ok(GameState::new(players, mafia)?)
}

fn require_at_least(flag: &str, value: u64, min: u64) -> Result<(), CliError> {
    if value < min {
        return Err(CliError::Usage(format!(
            "{flag} must be at least {min}, got {value}"
        )));
    }
    Ok(())
}

pub const WINCHANCE_COLUMNS: &[&str] = &["n", "m", "method", "boundary", "w_num", "w_den", "w_float"];

pub fn winchance(players: u64, mafia: u64, method: Method, boundary: Boundary) -> CmdResult {
    state(players, mafia)?;
    let rule = BoundaryRule::from(boundary);
    let exact = match method {
        Method::Recurrence => Some(win_chance_recurrence(players, mafia, rule)?),
        Method::Closed => Some(win_chance_closed_under(players, mafia, rule)?),
        Method::Asymptotic | Method::Continuous => {
            if rule != BoundaryRule::MafiaWinsOnStrictMajority {
                return Err(Error::UnsupportedBoundary.into());
            }
            None
        }
    };
    let (num, den, float) = match &exact {
        Some(w) => (Cell::numerator(w), Cell::denominator(w), to_f64(w)),
        None => {
            let value = match method {
                Method::Asymptotic => win_chance_asymptotic(players, mafia)?,
                _ => evolution::win_chance_continuous(players, mafia)?,
            };
            (Cell::Empty, Cell::Empty, value)
        }
    };
    Ok(Table::single(
        WINCHANCE_COLUMNS,
        vec![
            Cell::Int(players),
            Cell::Int(mafia),
            Cell::Text(method.as_str()),
            Cell::Text(rule.as_str()),
            num,
            den,
            Cell::Float(float),
        ],
    ))
}

pub const TABLE_COLUMNS: &[&str] = &["n", "m", "w_num", "w_den", "w_float"];

pub fn table(max_n: u64, boundary: Boundary) -> CmdResult {
    require_at_least("--max-n", max_n, 1)?;
    let grid = WinChanceTable::build(max_n, boundary.into());
    let mut out = Table::new(TABLE_COLUMNS);
    for n in 1..=max_n {
        for m in 0..=n {
            let w = grid.get(n, m).expect("table covers max_n");
            out.push(vec![
                Cell::Int(n),
                Cell::Int(m),
                Cell::numerator(&w),
                Cell::denominator(&w),
                Cell::Float(to_f64(&w)),
            ]);
        }
    }
    Ok(out)
}

pub const SINGLE_MAFIA_COLUMNS: &[&str] = &[
    "n",
    "w_exact_num",
    "w_exact_den",
    "w_exact_float",
    "approx_parity_aware",
];

pub fn single_mafia(max_n: u64) -> CmdResult {
    require_at_least("--max-n", max_n, 1)?;
    let mut out = Table::new(SINGLE_MAFIA_COLUMNS);
    for n in 1..=max_n {
        let w = win_chance_single(n)?;
        out.push(vec![
            Cell::Int(n),
            Cell::numerator(&w),
            Cell::denominator(&w),
            Cell::Float(to_f64(&w)),
            Cell::Float(approx_single_parity(n)?),
        ]);
    }
    Ok(out)
}

pub const EVOLVE_COLUMNS: &[&str] = &["mode", "kind", "t", "m", "value", "num", "den"];

pub fn evolve(players: u64, mafia: u64, mode: Mode, t_max: Option<u64>, samples_per_unit: u64) -> CmdResult {
    state(players, mafia)?;
    require_at_least("--players", players, 1)?;
    require_at_least("--samples-per-unit", samples_per_unit, 1)?;
    let discrete = matches!(mode, Mode::Discrete | Mode::Both);
    let continuous = matches!(mode, Mode::Continuous | Mode::Both);
    let last_valid = last_valid_turn(players, mafia);
    let mut out = Table::new(EVOLVE_COLUMNS);

    if discrete {
        let turns = t_max.unwrap_or(last_valid);
        let path = evolve_discrete_path(players, mafia, turns)?;
        for dist in &path {
            let t = dist.turn();
            for (m, p) in dist.probs().iter().enumerate() {
                out.push(vec![
                    Cell::Text("discrete"),
                    Cell::Text("p"),
                    Cell::Int(t),
                    Cell::Int(m as u64),
                    Cell::Float(to_f64(p)),
                    Cell::numerator(p),
                    Cell::denominator(p),
                ]);
            }
            let mean = mean_discrete(players, mafia, t)?;
            out.push(vec![
                Cell::Text("discrete"),
                Cell::Text("mean"),
                Cell::Int(t),
                Cell::Empty,
                Cell::Float(to_f64(&mean)),
                Cell::numerator(&mean),
                Cell::denominator(&mean),
            ]);
        }
    }

    if continuous {
        let horizon = players / 2;
        let end = match (mode, t_max) {
            (_, Some(t)) => t,
            (Mode::Both, None) => last_valid,
            _ => horizon,
        };
        if end > horizon {
            return Err(Error::TimeOutOfRange {
                time: end as f64,
                horizon: players as f64 / 2.0,
            }
            .into());
        }
        for k in 0..=end * samples_per_unit {
            let t = k as f64 / samples_per_unit as f64;
            let dist = continuous_distribution(players, mafia, t)?;
            for (m, p) in dist.probs.iter().enumerate() {
                out.push(vec![
                    Cell::Text("continuous"),
                    Cell::Text("p"),
                    Cell::Float(t),
                    Cell::Int(m as u64),
                    Cell::Float(*p),
                    Cell::Empty,
                    Cell::Empty,
                ]);
            }
            out.push(vec![
                Cell::Text("continuous"),
                Cell::Text("mean"),
                Cell::Float(t),
                Cell::Empty,
                Cell::Float(mean_continuous(players, mafia, t)?),
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }
    Ok(out)
}

pub const OPTIMAL_COLUMNS: &[&str] = &["n", "m_opt_numeric", "m_opt_approx"];

pub fn optimal(max_n: u64) -> CmdResult {
    require_at_least("--max-n", max_n, 2)?;
    let mut out = Table::new(OPTIMAL_COLUMNS);
    for n in 2..=max_n {
        out.push(vec![
            Cell::Int(n),
            Cell::Int(optimal_mafia_numeric(n)?),
            Cell::Float(optimal_mafia_approx(n)?),
        ]);
    }
    Ok(out)
}

pub const SIMULATE_COLUMNS: &[&str] = &["n", "m", "trials", "seed", "mafia_wins", "estimate", "std_error"];

pub fn simulate(players: u64, mafia: u64, trials: u64, seed: u64, boundary: Boundary) -> CmdResult {
    state(players, mafia)?;
    require_at_least("--trials", trials, 1)?;
    let report = estimate_win_chance(players, mafia, boundary.into(), trials, seed)?;
    Ok(Table::single(
        SIMULATE_COLUMNS,
        vec![
            Cell::Int(report.players),
            Cell::Int(report.mafia),
            Cell::Int(report.trials),
            Cell::Int(report.seed),
            Cell::Int(report.mafia_wins),
            Cell::Float(report.estimate),
            Cell::Float(report.std_error),
        ],
    ))
}
