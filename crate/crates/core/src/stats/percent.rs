use std::fmt;

use num_rational::Ratio;

/// An exact percentage `100 * part / whole`.
///
/// Kept as a rational so that two-decimal rounding happens once, at display
/// time, and rounds half up exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(Ratio<i128>);

impl Percent {
    /// `None` when `whole` is zero.
    pub fn of(part: u64, whole: u64) -> Option<Self> {
        (whole > 0).then(|| Self(Ratio::new(100 * part as i128, whole as i128)))
    }

    pub fn zero() -> Self {
        Self(Ratio::from_integer(0))
    }

    pub fn abs_diff(self, other: Self) -> Self {
        let d = self.0 - other.0;
        Self(if d < Ratio::from_integer(0) { -d } else { d })
    }

    pub fn value(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Value in hundredths of a percent, rounded half up (away from zero).
    pub fn hundredths(self) -> i128 {
        let scaled = self.0 * Ratio::from_integer(100);
        let (n, d) = (*scaled.numer(), *scaled.denom());
        let q = (2 * n.abs() + d) / (2 * d);
        if n < 0 {
            -q
        } else {
            q
        }
    }

    pub fn rounded(self) -> f64 {
        self.hundredths() as f64 / 100.0
    }

    pub fn fixed2(self) -> String {
        let h = self.hundredths();
        let sign = if h < 0 { "-" } else { "" };
        format!("{sign}{}.{:02}", h.abs() / 100, h.abs() % 100)
    }

    /// Two decimals with trailing zeros and a bare point removed (`75`, `12.7`).
    pub fn trimmed(self) -> String {
        let s = self.fixed2();
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fixed2())
    }
}
