use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Living players and living mafia members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    players: u64,
    mafia: u64,
}

impl GameState {
    pub fn new(players: u64, mafia: u64) -> Result<Self> {
        if mafia > players {
            return Err(Error::InvalidState { players, mafia });
        }
        Ok(Self { players, mafia })
    }

    pub fn players(&self) -> u64 {
        self.players
    }

    pub fn mafia(&self) -> u64 {
        self.mafia
    }

    pub fn citizens(&self) -> u64 {
        self.players - self.mafia
    }

    /// Which side, if any, has already won.
    pub fn winner(&self, boundary: BoundaryRule) -> Option<Winner> {
        if self.mafia == 0 {
            Some(Winner::Citizens)
        } else if boundary.mafia_has_won(self.players, self.mafia) {
            Some(Winner::Mafia)
        } else {
            None
        }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.players, self.mafia)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Mafia,
    Citizens,
}

/// Which side wins when mafia and citizens are equal in number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryRule {
    /// Mafia wins once it outnumbers the citizens (`m > n - m`).
    #[default]
    MafiaWinsOnStrictMajority,
    /// Mafia already wins on parity (`m >= n - m`).
    MafiaWinsOnTie,
}

impl BoundaryRule {
    /// Terminal mafia-victory test. `mafia` may exceed `players` here; such
    /// states only arise as recurrence boundaries and count as mafia wins.
    pub fn mafia_has_won(self, players: u64, mafia: u64) -> bool {
        if mafia == 0 {
            return false;
        }
        let citizens = players.saturating_sub(mafia);
        match self {
            BoundaryRule::MafiaWinsOnStrictMajority => mafia > citizens,
            BoundaryRule::MafiaWinsOnTie => mafia >= citizens,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryRule::MafiaWinsOnStrictMajority => "strict",
            BoundaryRule::MafiaWinsOnTie => "ties",
        }
    }
}

impl fmt::Display for BoundaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(BoundaryRule::MafiaWinsOnStrictMajority),
            "ties" => Ok(BoundaryRule::MafiaWinsOnTie),
            other => Err(Error::InvalidArgument(format!("unknown boundary rule {other:?}"))),
        }
    }
}
