//! Exact arithmetic shared by the solvers: double factorials, the falling
//! product that stands in for ratios of double factorials, and binomials.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact probability or expectation. Always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `k!! = k (k-2) (k-4) ...`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(k: i64) -> Result<BigUint> {
    if k < -1 {
        return Err(Error::NegativeDoubleFactorial(k));
    }
    let mut acc = BigUint::one();
    let mut factor = k;
    while factor > 1 {
        acc *= factor as u64;
        factor -= 2;
    }
    Ok(acc)
}

/// `prod_{j=0}^{t-1} (N - 2j - i) / (N - 2j)`.
///
/// This is the normative form of `(N-2t)!! (N-i)!! / (N!! (N-2t-i)!!)`. It is
/// zero as soon as one factor vanishes and carries a sign when factors cross
/// zero, so no negative double factorial is ever needed.
pub fn falling_product(players: u64, turns: u64, index: u64) -> Result<Rational> {
    if turns.saturating_mul(2) > players {
        return Err(Error::TurnsExceedPlayers { players, turns });
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..turns {
        let alive = players as i128 - 2 * j as i128;
        let factor = alive - index as i128;
        if factor == 0 {
            return Ok(Rational::zero());
        }
        num *= factor;
        den *= alive;
    }
    Ok(Rational::new(num, den))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        // acc holds C(n, j); multiplying first keeps the division exact
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Nearest `f64`, falling back to a log-space quotient when either side
/// overflows.
pub fn to_f64(value: &Rational) -> f64 {
    if let Some(x) = value.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let sign = if value.numer().sign() == num_bigint::Sign::Minus {
        -1.0
    } else {
        1.0
    };
    let ln = ln_big(value.numer().magnitude()) - ln_big(value.denom().magnitude());
    sign * ln.exp()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
