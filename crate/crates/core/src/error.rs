use thiserror::Error;

/// Errors raised by the solvers.
///
/// [`Error::is_argument_error`] separates malformed inputs from requests that
/// are well formed but fall outside what a model can answer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid game state: {mafia} mafia among {players} players")]
    InvalidState { players: u64, mafia: u64 },

    #[error("double factorial is not defined for {0}")]
    NegativeDoubleFactorial(i64),

    #[error("turn {turns} is past the end of a game with {players} players")]
    TurnsExceedPlayers { players: u64, turns: u64 },

    #[error(
        "turn {turns} is outside the validity window for {players} players and {mafia} mafia \
         (last valid turn is {last_valid})"
    )]
    OutsideValidityWindow {
        players: u64,
        mafia: u64,
        turns: u64,
        last_valid: u64,
    },

    #[error("time {time} is outside [0, {horizon}]")]
    TimeOutOfRange { time: f64, horizon: f64 },

    #[error("mafia count {mafia} has no interior maximum for initial mafia {initial}")]
    NoInteriorPeak { mafia: u64, initial: u64 },

    #[error("the closed form only covers the strict-majority boundary rule")]
    UnsupportedBoundary,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by malformed inputs rather than by the model's domain.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidState { .. } | Error::NegativeDoubleFactorial(_) | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
