//! Exact conductance values.
//!
//! A conductance is kept as the integer pair `(cut, min volume)` and compared
//! by cross-multiplication, so equal ratios compare equal no
//! matter how the fraction is written (`1/7 == 2/14`).

use std::cmp::Ordering;
use std::fmt;

/// Fractional digits used whenever a conductance is printed.
pub const DISPLAY_DIGITS: u32 = 8;
const DISPLAY_SCALE: u128 = 10u128.pow(DISPLAY_DIGITS);

/// `cut / min(Vol(S), Vol(V \ S))`, or `Undefined` when the smaller volume is
/// zero.
///
/// `Undefined` orders above every defined value, so a minimising search
/// never prefers it.
#[derive(Clone, Copy, Debug)]
pub enum Conductance {
    Defined { cut: u64, volume: u64 },
    Undefined,
}

impl Conductance {
    pub fn new(cut: u64, volume: u64) -> Self {
        if volume == 0 {
            Conductance::Undefined
        } else {
            Conductance::Defined { cut, volume }
        }
    }

    /// Conductance of a bipartition given its cut and both side volumes.
    #[inline]
    pub fn from_cut_and_volumes(cut: u64, vol_in: u64, vol_out: u64) -> Self {
        Self::new(cut, vol_in.min(vol_out))
    }

    #[inline]
    pub fn is_defined(&self) -> bool {
        matches!(self, Conductance::Defined { .. })
    }

    /// `(numerator, denominator)` as stored, not reduced.
    pub fn ratio(&self) -> Option<(u64, u64)> {
        match *self {
            Conductance::Defined { cut, volume } => Some((cut, volume)),
            Conductance::Undefined => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Conductance::Defined { cut, volume } => cut as f64 / volume as f64,
            Conductance::Undefined => f64::NAN,
        }
    }

    /// Decimal form rounded half-up to [`DISPLAY_DIGITS`] fractional digits.
    pub fn to_decimal(&self) -> String {
        match *self {
            Conductance::Defined { cut, volume } => {
                let (num, den) = (cut as u128, volume as u128);
                let q = (2 * num * DISPLAY_SCALE + den) / (2 * den);
                format!("{}.{:08}", q / DISPLAY_SCALE, q % DISPLAY_SCALE)
            }
            Conductance::Undefined => "undefined".to_owned(),
        }
    }
}

impl PartialEq for Conductance {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Conductance {}

impl PartialOrd for Conductance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Conductance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Conductance::Undefined, Conductance::Undefined) => Ordering::Equal,
            (Conductance::Undefined, _) => Ordering::Greater,
            (_, Conductance::Undefined) => Ordering::Less,
            (
                Conductance::Defined { cut: a, volume: b },
                Conductance::Defined { cut: c, volume: d },
            ) => (a as u128 * d as u128).cmp(&(c as u128 * b as u128)),
        }
    }
}

impl fmt::Display for Conductance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}
