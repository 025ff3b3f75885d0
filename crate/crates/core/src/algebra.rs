//! Truth degrees and the combination functions of the four logic families.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::rational::Rational;

/// An exact truth degree in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Degree(Rational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("degree {0} is outside [0, 1]")]
pub struct DegreeOutOfRange(pub Rational);

impl Degree {
    pub fn new(value: Rational) -> Result<Self, DegreeOutOfRange> {
        if value.is_negative() || value > Rational::one() {
            Err(DegreeOutOfRange(value))
        } else {
            Ok(Degree(value))
        }
    }

    /// `numer / denom`; panics when the quotient is not a degree.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(Rational::new(numer, denom)).expect("degree out of range")
    }

    pub fn zero() -> Self {
        Degree(Rational::zero())
    }

    pub fn one() -> Self {
        Degree(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `{0, 1/q, ..., 1}`.
    pub fn grid(denominator: u32) -> Vec<Degree> {
        assert!(denominator >= 1, "grid denominator must be positive");
        let q = i64::from(denominator);
        (0..=q).map(|k| Degree::ratio(k, q)).collect()
    }

    // Callers guarantee the range; combination functions are closed on [0,1].
    fn unchecked(value: Rational) -> Self {
        debug_assert!(!value.is_negative() && value <= Rational::one());
        Degree(value)
    }

    fn complement(&self) -> Degree {
        Degree::unchecked(&Rational::one() - &self.0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Degree {
    type Err = ParseDegreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value: Rational = s.parse()?;
        Ok(Degree::new(value)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseDegreeError {
    #[error(transparent)]
    Number(#[from] crate::rational::ParseRationalError),
    #[error(transparent)]
    Range(#[from] DegreeOutOfRange),
}

/// How a family negates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Negation {
    /// `1 - a`
    Involutive,
    /// `1` if `a = 0`, else `0` (residuum of the t-norm at 0).
    Residual,
}

/// Product logic uses the residual negation of its implication.
pub const PRODUCT_NEGATION: Negation = Negation::Residual;

/// A fuzzy logic family: t-norm, s-norm, implication and negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Logic {
    Zadeh,
    Godel,
    Lukasiewicz,
    Product,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::Zadeh, Logic::Godel, Logic::Lukasiewicz, Logic::Product];

    pub fn name(self) -> &'static str {
        match self {
            Logic::Zadeh => "zadeh",
            Logic::Godel => "godel",
            Logic::Lukasiewicz => "lukasiewicz",
            Logic::Product => "product",
        }
    }

    pub fn negation_kind(self) -> Negation {
        match self {
            Logic::Zadeh | Logic::Lukasiewicz => Negation::Involutive,
            Logic::Godel => Negation::Residual,
            Logic::Product => PRODUCT_NEGATION,
        }
    }

    pub fn tnorm(self, a: &Degree, b: &Degree) -> Degree {
        match self {
            Logic::Zadeh | Logic::Godel => a.clone().min(b.clone()),
            Logic::Lukasiewicz => {
                let s = &(&a.0 + &b.0) - &Rational::one();
                if s.is_negative() {
                    Degree::zero()
                } else {
                    Degree::unchecked(s)
                }
            }
            Logic::Product => Degree::unchecked(&a.0 * &b.0),
        }
    }

    pub fn snorm(self, a: &Degree, b: &Degree) -> Degree {
        match self {
            Logic::Zadeh | Logic::Godel => a.clone().max(b.clone()),
            Logic::Lukasiewicz => {
                let s = &a.0 + &b.0;
                if s > Rational::one() {
                    Degree::one()
                } else {
                    Degree::unchecked(s)
                }
            }
            Logic::Product => Degree::unchecked(&(&a.0 + &b.0) - &(&a.0 * &b.0)),
        }
    }

    pub fn implication(self, a: &Degree, b: &Degree) -> Degree {
        match self {
            Logic::Zadeh => a.complement().max(b.clone()),
            Logic::Godel => {
                if a <= b {
                    Degree::one()
                } else {
                    b.clone()
                }
            }
            Logic::Lukasiewicz => {
                if a <= b {
                    Degree::one()
                } else {
                    Degree::unchecked(&Rational::one() - &(&a.0 - &b.0))
                }
            }
            Logic::Product => {
                if a <= b {
                    Degree::one()
                } else {
                    Degree::unchecked(&b.0 / &a.0)
                }
            }
        }
    }

    pub fn negation(self, a: &Degree) -> Degree {
        match self.negation_kind() {
            Negation::Involutive => a.complement(),
            Negation::Residual => {
                if a.is_zero() {
                    Degree::one()
                } else {
                    Degree::zero()
                }
            }
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic `{0}` (expected zadeh, godel, lukasiewicz or product)")]
pub struct UnknownLogic(pub alloc::string::String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zadeh" => Ok(Logic::Zadeh),
            "godel" | "goedel" | "gödel" => Ok(Logic::Godel),
            "lukasiewicz" | "łukasiewicz" => Ok(Logic::Lukasiewicz),
            "product" | "goguen" => Ok(Logic::Product),
            _ => Err(UnknownLogic(s.into())),
        }
    }
}
