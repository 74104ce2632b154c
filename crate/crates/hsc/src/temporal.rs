use std::fmt;

use chrono::{Datelike, NaiveDateTime, Timelike, Weekday};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeekDayClass {
    WorkingDay,
    NonWorkingDay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartOfDay {
    /// 05:00 to 12:00.
    Morning,
    /// 12:00 to 17:00.
    Afternoon,
    /// 17:00 to 20:00.
    Evening,
    /// 20:00 to 05:00.
    Night,
}

impl fmt::Display for WeekDayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for PartOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Day and time-of-day class of a timestamp. Boundaries belong to the
/// later part of the day.
pub fn temporal_class(t: NaiveDateTime) -> (WeekDayClass, PartOfDay) {
    let day = match t.weekday() {
        Weekday::Sat | Weekday::Sun => WeekDayClass::NonWorkingDay,
        _ => WeekDayClass::WorkingDay,
    };
    let part = match t.hour() {
        5..=11 => PartOfDay::Morning,
        12..=16 => PartOfDay::Afternoon,
        17..=19 => PartOfDay::Evening,
        _ => PartOfDay::Night,
    };
    (day, part)
}

/// Which temporal class groups observations for abstraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    #[default]
    Day,
    Time,
}

impl Classification {
    pub fn key(self, t: NaiveDateTime) -> String {
        let (day, part) = temporal_class(t);
        match self {
            Classification::Day => day.to_string(),
            Classification::Time => part.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn at(y: i32, m: u32, d: u32, h: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(y, m, d).unwrap().and_hms_opt(h, 0, 0).unwrap()
    }

    #[test]
    fn class_boundaries() {
        // 2019-01-05 is a Saturday.
        assert_eq!(temporal_class(at(2019, 1, 5, 7)), (WeekDayClass::NonWorkingDay, PartOfDay::Morning));
        assert_eq!(temporal_class(at(2019, 1, 7, 20)), (WeekDayClass::WorkingDay, PartOfDay::Night));
        assert_eq!(temporal_class(at(2019, 1, 6, 12)), (WeekDayClass::NonWorkingDay, PartOfDay::Afternoon));
        assert_eq!(temporal_class(at(2019, 1, 7, 5)).1, PartOfDay::Morning);
        assert_eq!(temporal_class(at(2019, 1, 7, 17)).1, PartOfDay::Evening);
        assert_eq!(temporal_class(at(2019, 1, 7, 4)).1, PartOfDay::Night);
        assert_eq!(Classification::Time.key(at(2019, 1, 7, 13)), "Afternoon");
        assert_eq!(Classification::Day.key(at(2019, 1, 7, 13)), "WorkingDay");
    }
}
