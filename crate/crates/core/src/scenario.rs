//! Scenario vocabulary: antenna counts, CSIT models, message sets and DoF
//! tuples.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("antenna counts must be at least 1 (got M={m}, N1={n1}, N2={n2})")]
    ZeroAntennas { m: usize, n1: usize, n2: usize },
    #[error("invalid CSIT model {0:?}: expected two letters from {{P, D, N}}")]
    BadCsit(String),
    #[error("invalid message set {0:?}: expected pm, dm or cm")]
    BadMessageSet(String),
}

/// Transmit antennas `m` and receive antennas `n1`, `n2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AntennaConfig {
    pub m: usize,
    pub n1: usize,
    pub n2: usize,
}

impl AntennaConfig {
    pub fn new(m: usize, n1: usize, n2: usize) -> Result<Self, ScenarioError> {
        if m == 0 || n1 == 0 || n2 == 0 {
            return Err(ScenarioError::ZeroAntennas { m, n1, n2 });
        }
        Ok(Self { m, n1, n2 })
    }

    pub fn is_normalized(&self) -> bool {
        self.n1 >= self.n2
    }

    /// The receiver-swapped configuration.
    pub fn swapped(&self) -> Self {
        Self {
            m: self.m,
            n1: self.n2,
            n2: self.n1,
        }
    }

    /// Configuration with `n1 >= n2`, plus whether the receivers were swapped.
    pub fn normalized(&self) -> (Self, bool) {
        if self.is_normalized() {
            (*self, false)
        } else {
            (self.swapped(), true)
        }
    }

    pub fn n(&self, receiver: Receiver) -> usize {
        match receiver {
            Receiver::One => self.n1,
            Receiver::Two => self.n2,
        }
    }

    /// `min(M, N1)`.
    pub fn min_m_n1(&self) -> usize {
        self.m.min(self.n1)
    }

    /// `min(M, N2)`.
    pub fn min_m_n2(&self) -> usize {
        self.m.min(self.n2)
    }

    /// `min(M, N1 + N2)`.
    pub fn min_m_sum(&self) -> usize {
        self.m.min(self.n1 + self.n2)
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.n1, self.n2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    One,
    Two,
}

impl Receiver {
    pub fn other(self) -> Self {
        match self {
            Receiver::One => Receiver::Two,
            Receiver::Two => Receiver::One,
        }
    }
}

/// Quality of the channel knowledge the transmitter gets from one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CsitLetter {
    /// Perfect and instantaneous.
    P,
    /// Delayed by one slot.
    D,
    /// None.
    N,
}

impl CsitLetter {
    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'P' => Some(CsitLetter::P),
            'D' => Some(CsitLetter::D),
            'N' => Some(CsitLetter::N),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            CsitLetter::P => 'P',
            CsitLetter::D => 'D',
            CsitLetter::N => 'N',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsitType {
    /// `NN`, `DD`, `DP`, `PD`, `PP`: the tables give DoF regions.
    TypeI,
    /// `ND`, `DN`, `NP`, `PN`: the tables give linear-DoF regions.
    TypeII,
}

impl fmt::Display for CsitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CsitType::TypeI => "Type I",
            CsitType::TypeII => "Type II",
        })
    }
}

/// A hybrid CSIT model: the first letter is the CSI from receiver 1, the
/// second the CSI from receiver 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CsitModel {
    pub rx1: CsitLetter,
    pub rx2: CsitLetter,
}

impl CsitModel {
    pub const fn new(rx1: CsitLetter, rx2: CsitLetter) -> Self {
        Self { rx1, rx2 }
    }

    /// All nine models, in the order `PP PD PN DP DD DN NP ND NN`.
    pub fn all() -> [CsitModel; 9] {
        use CsitLetter::*;
        let letters = [P, D, N];
        let mut out = [CsitModel::new(P, P); 9];
        for (i, &a) in letters.iter().enumerate() {
            for (j, &b) in letters.iter().enumerate() {
                out[3 * i + j] = CsitModel::new(a, b);
            }
        }
        out
    }

    pub fn csit_type(&self) -> CsitType {
        if self.rx1 == self.rx2 {
            return CsitType::TypeI;
        }
        match (self.rx1, self.rx2) {
            (CsitLetter::D, CsitLetter::P) | (CsitLetter::P, CsitLetter::D) => CsitType::TypeI,
            _ => CsitType::TypeII,
        }
    }

    /// The model seen after exchanging the receiver labels.
    pub fn swapped(&self) -> Self {
        Self::new(self.rx2, self.rx1)
    }
}

impl fmt::Display for CsitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rx1.as_char(), self.rx2.as_char())
    }
}

impl FromStr for CsitModel {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => {
                match (CsitLetter::from_char(a), CsitLetter::from_char(b)) {
                    (Some(a), Some(b)) => Ok(CsitModel::new(a, b)),
                    _ => Err(ScenarioError::BadCsit(s.to_string())),
                }
            }
            _ => Err(ScenarioError::BadCsit(s.to_string())),
        }
    }
}

/// Which messages are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MessageSet {
    /// Private messages `W1`, `W2`.
    Private,
    /// Degraded set: `W1` for receiver 1 and `W0` for both.
    Degraded,
    /// `W1`, `W2` and the common `W0`.
    Common,
}

impl MessageSet {
    pub fn all() -> [MessageSet; 3] {
        [
            MessageSet::Private,
            MessageSet::Degraded,
            MessageSet::Common,
        ]
    }

    pub fn short(&self) -> &'static str {
        match self {
            MessageSet::Private => "pm",
            MessageSet::Degraded => "dm",
            MessageSet::Common => "cm",
        }
    }

    pub fn messages(&self) -> &'static [Message] {
        match self {
            MessageSet::Private => &[Message::W1, Message::W2],
            MessageSet::Degraded => &[Message::W1, Message::W0],
            MessageSet::Common => &[Message::W1, Message::W2, Message::W0],
        }
    }

    /// The coordinate forced to zero, if any.
    pub fn pinned(&self) -> Option<Coord> {
        match self {
            MessageSet::Private => Some(Coord::D0),
            MessageSet::Degraded => Some(Coord::D2),
            MessageSet::Common => None,
        }
    }
}

impl fmt::Display for MessageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MessageSet::Private => "BC-PM",
            MessageSet::Degraded => "BC-DM",
            MessageSet::Common => "BC-CM",
        })
    }
}

impl FromStr for MessageSet {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pm" | "bc-pm" | "private" => Ok(MessageSet::Private),
            "dm" | "bc-dm" | "degraded" => Ok(MessageSet::Degraded),
            "cm" | "bc-cm" | "common" => Ok(MessageSet::Common),
            _ => Err(ScenarioError::BadMessageSet(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Message {
    W1,
    W2,
    W0,
}

impl Message {
    pub fn coord(self) -> Coord {
        match self {
            Message::W1 => Coord::D1,
            Message::W2 => Coord::D2,
            Message::W0 => Coord::D0,
        }
    }
}

/// Index into a DoF tuple `(d1, d2, d0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    D1,
    D2,
    D0,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::D1, Coord::D2, Coord::D0];

    pub fn index(self) -> usize {
        match self {
            Coord::D1 => 0,
            Coord::D2 => 1,
            Coord::D0 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::D1 => "d1",
            Coord::D2 => "d2",
            Coord::D0 => "d0",
        }
    }
}

impl FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "d1" | "1" => Ok(Coord::D1),
            "d2" | "2" => Ok(Coord::D2),
            "d0" | "0" => Ok(Coord::D0),
            other => Err(format!(
                "unknown coordinate {other:?} (expected d1, d2 or d0)"
            )),
        }
    }
}

/// A DoF tuple. Ordering is lexicographic in `(d1, d2, d0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DofPoint {
    pub d1: Rational,
    pub d2: Rational,
    pub d0: Rational,
}

impl DofPoint {
    pub fn new(d1: Rational, d2: Rational, d0: Rational) -> Self {
        Self { d1, d2, d0 }
    }

    pub fn from_ints(d1: i64, d2: i64, d0: i64) -> Self {
        Self::new(int(d1), int(d2), int(d0))
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn from_array(c: [Rational; 3]) -> Self {
        let [d1, d2, d0] = c;
        Self { d1, d2, d0 }
    }

    pub fn to_array(&self) -> [Rational; 3] {
        [self.d1.clone(), self.d2.clone(), self.d0.clone()]
    }

    pub fn get(&self, c: Coord) -> &Rational {
        match c {
            Coord::D1 => &self.d1,
            Coord::D2 => &self.d2,
            Coord::D0 => &self.d0,
        }
    }

    pub fn set(&mut self, c: Coord, v: Rational) {
        match c {
            Coord::D1 => self.d1 = v,
            Coord::D2 => self.d2 = v,
            Coord::D0 => self.d0 = v,
        }
    }

    pub fn is_origin(&self) -> bool {
        self.d1.is_zero() && self.d2.is_zero() && self.d0.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        !(self.d1.is_negative() || self.d2.is_negative() || self.d0.is_negative())
    }

    pub fn zero_count(&self) -> usize {
        Coord::ALL
            .iter()
            .filter(|&&c| self.get(c).is_zero())
            .count()
    }

    /// Exchange `d1` and `d2`.
    pub fn swapped(&self) -> Self {
        Self::new(self.d2.clone(), self.d1.clone(), self.d0.clone())
    }

    pub fn scaled(&self, w: &Rational) -> Self {
        Self::new(&self.d1 * w, &self.d2 * w, &self.d0 * w)
    }

    pub fn add(&self, other: &DofPoint) -> Self {
        Self::new(
            &self.d1 + &other.d1,
            &self.d2 + &other.d2,
            &self.d0 + &other.d0,
        )
    }

    pub fn is_integral(&self) -> bool {
        Coord::ALL
            .iter()
            .all(|&c| rational::is_integer(self.get(c)))
    }
}

impl fmt::Display for DofPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            rational::format(&self.d1),
            rational::format(&self.d2),
            rational::format(&self.d0)
        )
    }
}
