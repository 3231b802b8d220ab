use std::fmt;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Timelike};

/// Minutes since the Unix epoch (UTC, no leap seconds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Minute(pub i64);

pub const MINUTES_PER_DAY: i64 = 1440;

impl Minute {
    pub fn day(self) -> i64 {
        self.0.div_euclid(MINUTES_PER_DAY)
    }

    pub fn minute_of_day(self) -> i64 {
        self.0.rem_euclid(MINUTES_PER_DAY)
    }

    pub fn from_datetime(dt: NaiveDateTime) -> Self {
        Minute(dt.and_utc().timestamp().div_euclid(60))
    }

    pub fn from_date(date: NaiveDate) -> Self {
        Self::from_datetime(date.and_hms_opt(0, 0, 0).expect("midnight exists"))
    }

    pub fn to_datetime(self) -> NaiveDateTime {
        DateTime::from_timestamp(self.0 * 60, 0)
            .expect("minute index in chrono range")
            .naive_utc()
    }

    pub fn offset(self, minutes: i64) -> Self {
        Minute(self.0 + minutes)
    }
}

/// How timestamps are written back out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeStyle {
    /// `YYYY-MM-DDTHH:MM`
    #[default]
    Iso,
    /// Integer minutes since the epoch.
    EpochMinutes,
}

impl TimeStyle {
    pub fn format(self, m: Minute) -> String {
        match self {
            TimeStyle::Iso => m.to_datetime().format("%Y-%m-%dT%H:%M").to_string(),
            TimeStyle::EpochMinutes => m.0.to_string(),
        }
    }

    pub fn display(self, m: Minute) -> impl fmt::Display {
        self.format(m)
    }
}

const ISO_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];

/// Parses an epoch-minute integer or an ISO-8601 date-time at minute resolution.
pub fn parse_timestamp(raw: &str) -> Result<(Minute, TimeStyle), String> {
    let s = raw.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Ok((Minute(v), TimeStyle::EpochMinutes));
    }
    let s = s.strip_suffix('Z').unwrap_or(s);
    for fmt in ISO_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            if dt.second() != 0 || dt.nanosecond() != 0 {
                return Err(format!("timestamp {raw:?} is not on a whole minute"));
            }
            return Ok((Minute::from_datetime(dt), TimeStyle::Iso));
        }
    }
    Err(format!("cannot parse timestamp {raw:?}"))
}
