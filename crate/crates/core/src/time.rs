//! UTC instants and calendar-month keys.
//!
//! Everything here is computed from the Unix-seconds value alone, so results
//! never depend on the host's locale or time zone.

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

const SECONDS_PER_DAY: i64 = 86_400;

/// A UTC instant with second precision, stored as seconds since the Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

/// Broken-down UTC calendar time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CivilDateTime {
    pub year: i32,
    pub month: u8,
    pub day: u8,
    pub hour: u8,
    pub minute: u8,
    pub second: u8,
}

impl Timestamp {
    pub const fn from_unix_seconds(seconds: i64) -> Self {
        Timestamp(seconds)
    }

    pub const fn unix_seconds(self) -> i64 {
        self.0
    }

    /// Builds an instant from UTC calendar fields. Returns `None` for
    /// out-of-range fields (including days past the end of the month).
    pub fn from_civil(civil: CivilDateTime) -> Option<Self> {
        let CivilDateTime {
            year,
            month,
            day,
            hour,
            minute,
            second,
        } = civil;
        if !(1..=12).contains(&month)
            || day == 0
            || day > days_in_month(year, month)
            || hour > 23
            || minute > 59
            || second > 59
        {
            return None;
        }
        let days = days_from_civil(year, month, day);
        let secs =
            days * SECONDS_PER_DAY + i64::from(hour) * 3600 + i64::from(minute) * 60 + i64::from(second);
        Some(Timestamp(secs))
    }

    pub fn to_civil(self) -> CivilDateTime {
        let days = self.0.div_euclid(SECONDS_PER_DAY);
        let rem = self.0.rem_euclid(SECONDS_PER_DAY);
        let (year, month, day) = civil_from_days(days);
        CivilDateTime {
            year,
            month,
            day,
            hour: (rem / 3600) as u8,
            minute: (rem % 3600 / 60) as u8,
            second: (rem % 60) as u8,
        }
    }

    pub fn month(self) -> MonthKey {
        month_of(self)
    }
}

/// RFC 3339 form with a `Z` suffix, e.g. `2020-12-31T23:59:59Z`.
impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.to_civil();
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            c.year, c.month, c.day, c.hour, c.minute, c.second
        )
    }
}

/// A calendar month in UTC. Orders chronologically; text form is `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthKey {
    year: i32,
    month: u8,
}

impl MonthKey {
    pub fn new(year: i32, month: u8) -> Option<Self> {
        (1..=12).contains(&month).then_some(MonthKey { year, month })
    }

    pub const fn year(self) -> i32 {
        self.year
    }

    pub const fn month(self) -> u8 {
        self.month
    }

    pub fn next(self) -> MonthKey {
        if self.month == 12 {
            MonthKey {
                year: self.year + 1,
                month: 1,
            }
        } else {
            MonthKey {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    /// Every month from `self` to `last`, both inclusive. Empty when `last < self`.
    pub fn range_inclusive(self, last: MonthKey) -> impl Iterator<Item = MonthKey> {
        let mut cur = Some(self).filter(|m| *m <= last);
        core::iter::from_fn(move || {
            let m = cur?;
            cur = Some(m.next()).filter(|n| *n <= last);
            Some(m)
        })
    }
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid month key (expected YYYY-MM)")]
pub struct ParseMonthError;

impl FromStr for MonthKey {
    type Err = ParseMonthError;

    /// Accepts exactly `YYYY-MM` with a four-digit year and a two-digit month.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        if b.len() != 7 || b[4] != b'-' {
            return Err(ParseMonthError);
        }
        let digits = |r: core::ops::Range<usize>| -> Option<u32> {
            b[r].iter().try_fold(0u32, |acc, c| {
                c.is_ascii_digit().then(|| acc * 10 + u32::from(c - b'0'))
            })
        };
        let year = digits(0..4).ok_or(ParseMonthError)?;
        let month = digits(5..7).ok_or(ParseMonthError)?;
        MonthKey::new(year as i32, month as u8).ok_or(ParseMonthError)
    }
}

/// Calendar month (UTC) containing `created_at`.
pub fn month_of(created_at: Timestamp) -> MonthKey {
    let (year, month, _) = civil_from_days(created_at.0.div_euclid(SECONDS_PER_DAY));
    MonthKey { year, month }
}

fn is_leap(year: i32) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        _ if is_leap(year) => 29,
        _ => 28,
    }
}

// Proleptic Gregorian conversions on 400-year eras (H. Hinnant's algorithms).
fn days_from_civil(year: i32, month: u8, day: u8) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let m = i64::from(month);
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

fn civil_from_days(days: i64) -> (i32, u8, u8) {
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u8;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u8;
    let year = yoe + era * 400 + i64::from(month <= 2);
    (year as i32, month, day)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use chrono::{Datelike, TimeZone, Utc};
    use proptest::prelude::*;

    fn ts(y: i32, mo: u8, d: u8, h: u8, mi: u8, s: u8) -> Timestamp {
        Timestamp::from_civil(CivilDateTime {
            year: y,
            month: mo,
            day: d,
            hour: h,
            minute: mi,
            second: s,
        })
        .unwrap()
    }

    #[test]
    fn month_boundaries() {
        assert_eq!(month_of(ts(2020, 12, 31, 23, 59, 59)).to_string(), "2020-12");
        assert_eq!(month_of(ts(2021, 1, 1, 0, 0, 0)).to_string(), "2021-01");
        assert_eq!(month_of(ts(2020, 3, 15, 12, 0, 0)).to_string(), "2020-03");
    }

    #[test]
    fn rejects_impossible_dates() {
        let bad = CivilDateTime {
            year: 2021,
            month: 2,
            day: 29,
            hour: 0,
            minute: 0,
            second: 0,
        };
        assert!(Timestamp::from_civil(bad).is_none());
        assert!(Timestamp::from_civil(CivilDateTime { year: 2020, ..bad }).is_some());
    }

    #[test]
    fn month_key_parsing() {
        assert_eq!(
            "2020-11".parse::<MonthKey>(),
            Ok(MonthKey::new(2020, 11).unwrap())
        );
        for bad in [
            "2020-13", "2020-00", "2020-1", "20-11", "2020/11", "2020-11x", "", "+020-11",
        ] {
            assert!(bad.parse::<MonthKey>().is_err(), "{bad}");
        }
    }

    #[test]
    fn month_range_spans_year_end() {
        let a = MonthKey::new(2020, 11).unwrap();
        let b = MonthKey::new(2021, 2).unwrap();
        let got: Vec<_> = a.range_inclusive(b).map(|m| m.to_string()).collect();
        assert_eq!(got, ["2020-11", "2020-12", "2021-01", "2021-02"]);
        assert_eq!(b.range_inclusive(a).count(), 0);
        assert_eq!(a.range_inclusive(a).count(), 1);
    }

    proptest! {
        // chrono serves as the independent calendar oracle.
        #[test]
        fn civil_matches_chrono(secs in -62_135_596_800i64..253_402_300_799i64) {
            let ours = Timestamp::from_unix_seconds(secs);
            let theirs = Utc.timestamp_opt(secs, 0).unwrap();
            let m = month_of(ours);
            prop_assert_eq!(m.year(), theirs.year());
            prop_assert_eq!(u32::from(m.month()), theirs.month());
            prop_assert_eq!(ours.to_string(), theirs.format("%Y-%m-%dT%H:%M:%SZ").to_string());
            prop_assert_eq!(Timestamp::from_civil(ours.to_civil()), Some(ours));
        }
    }
}
