//! Calendar covariates: drop-first hour/weekday/month dummies, holiday
//! flags and lags, preceding-holiday counts, working day and day of month.

use std::collections::BTreeMap;
use std::io::BufRead;

use chrono::{Datelike, Duration, NaiveDate, Timelike, Weekday};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::HourlySeries;

/// Offsets (in days) of the holiday-lag flags.
pub const HOLIDAY_LAG_OFFSETS: [i64; 4] = [-2, -1, 1, 2];

const WEEKDAY_NAMES: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];
const MONTH_NAMES: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

/// National holidays, optionally named.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HolidayCalendar {
    dates: BTreeMap<NaiveDate, Option<String>>,
}

impl HolidayCalendar {
    pub fn new(dates: impl IntoIterator<Item = NaiveDate>) -> Self {
        Self {
            dates: dates.into_iter().map(|d| (d, None)).collect(),
        }
    }

    pub fn insert(&mut self, date: NaiveDate, name: Option<String>) {
        self.dates.insert(date, name);
    }

    /// Parses one ISO date per line, optionally followed by `,name`.
    /// Blank lines and `#` comments are skipped.
    pub fn read(r: impl BufRead) -> Result<Self> {
        let mut cal = Self::default();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (date, name) = match line.split_once(',') {
                Some((d, n)) if !n.trim().is_empty() => (d, Some(n.trim().to_string())),
                Some((d, _)) => (d, None),
                None => (line, None),
            };
            let date =
                NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d").map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("bad holiday date {date:?}: {e}"),
                })?;
            cal.insert(date, name);
        }
        Ok(cal)
    }

    pub fn contains(&self, d: NaiveDate) -> bool {
        self.dates.contains_key(&d)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.dates.keys().copied()
    }

    /// Distinct holiday names in sorted order; unnamed dates use their ISO date.
    fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .dates
            .iter()
            .map(|(d, n)| n.clone().unwrap_or_else(|| d.to_string()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    fn name_of(&self, d: NaiveDate) -> Option<String> {
        self.dates
            .get(&d)
            .map(|n| n.clone().unwrap_or_else(|| d.to_string()))
    }

    /// Number of consecutive holidays immediately before `d`.
    pub fn preceding_consecutive(&self, d: NaiveDate) -> u32 {
        let mut k = 0;
        let mut day = d;
        while let Some(prev) = day.pred_opt() {
            if !self.contains(prev) {
                break;
            }
            k += 1;
            day = prev;
        }
        k
    }

    /// Not a weekend day and not a holiday.
    pub fn is_working_day(&self, d: NaiveDate) -> bool {
        !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) && !self.contains(d)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CalendarOptions {
    /// One binary column per named holiday instead of a single merged flag.
    pub per_holiday: bool,
}

/// Calendar features, one row per hour of the source series.
#[derive(Debug, Clone, PartialEq)]
pub struct CalendarMatrix {
    columns: Vec<String>,
    data: Vec<u32>,
}

impl CalendarMatrix {
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.data.len() / self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let w = self.columns.len();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn column(&self, name: &str) -> Option<Vec<u32>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some((0..self.n_rows()).map(|i| self.row(i)[j]).collect())
    }
}

fn column_names(cal: &HolidayCalendar, opts: CalendarOptions) -> Vec<String> {
    let mut cols = Vec::with_capacity(48);
    cols.extend((1..24).map(|h| format!("hour_{h}")));
    cols.extend(WEEKDAY_NAMES[1..].iter().map(|d| format!("weekday_{d}")));
    cols.extend(MONTH_NAMES[1..].iter().map(|m| format!("month_{m}")));
    if opts.per_holiday {
        cols.extend(cal.names().into_iter().map(|n| format!("holiday_{n}")));
    } else {
        cols.push("holiday".into());
    }
    for off in HOLIDAY_LAG_OFFSETS {
        let tag = if off < 0 { 'm' } else { 'p' };
        cols.push(format!("holiday_lag_{tag}{}", off.abs()));
    }
    cols.push("preceding_holidays".into());
    cols.push("working_day".into());
    cols.push("day_of_month".into());
    cols
}

/// Encodes calendar covariates for every hour of `s`.
///
/// Dummy groups use the first level (hour 0, Monday, January) as the
/// reference, so a row with all zeros in a group denotes that level.
pub fn encode_calendar<T: Scalar>(
    s: &HourlySeries<T>,
    cal: &HolidayCalendar,
    opts: CalendarOptions,
) -> CalendarMatrix {
    let columns = column_names(cal, opts);
    let names = cal.names();
    let width = columns.len();
    let mut data = vec![0u32; width * s.len()];

    for (i, row) in data.chunks_exact_mut(width).enumerate() {
        let ts = s.timestamp(i);
        let day = ts.date_naive();
        let mut j = 0;

        let hour = ts.hour() as usize;
        if hour > 0 {
            row[j + hour - 1] = 1;
        }
        j += 23;

        let wd = day.weekday().num_days_from_monday() as usize;
        if wd > 0 {
            row[j + wd - 1] = 1;
        }
        j += 6;

        let month = day.month0() as usize;
        if month > 0 {
            row[j + month - 1] = 1;
        }
        j += 11;

        if opts.per_holiday {
            if let Some(name) = cal.name_of(day) {
                let k = names.binary_search(&name).expect("name listed");
                row[j + k] = 1;
            }
            j += names.len();
        } else {
            row[j] = cal.contains(day) as u32;
            j += 1;
        }

        for off in HOLIDAY_LAG_OFFSETS {
            row[j] = cal.contains(day + Duration::days(off)) as u32;
            j += 1;
        }

        row[j] = cal.preceding_consecutive(day);
        row[j + 1] = cal.is_working_day(day) as u32;
        row[j + 2] = day.day();
    }

    CalendarMatrix { columns, data }
}

/// Day of month (1..=31) for every hour of `s`.
pub fn day_of_month<T: Scalar>(s: &HourlySeries<T>) -> Vec<u32> {
    (0..s.len()).map(|i| s.timestamp(i).day()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::midnight;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn series_from(d: NaiveDate, hours: usize) -> HourlySeries<f64> {
        HourlySeries::from_values(midnight(d), vec![0.0; hours]).unwrap()
    }

    fn group_sum(m: &CalendarMatrix, i: usize, prefix: &str) -> u32 {
        m.columns()
            .iter()
            .zip(m.row(i))
            .filter(|(c, _)| c.starts_with(prefix))
            .map(|(_, v)| *v)
            .sum()
    }

    #[test]
    fn reference_levels_are_all_zero() {
        // 2018-01-01 is a Monday.
        let s = series_from(date(2018, 1, 1), 1);
        let m = encode_calendar(&s, &HolidayCalendar::default(), CalendarOptions::default());
        assert_eq!(group_sum(&m, 0, "hour_"), 0);
        assert_eq!(group_sum(&m, 0, "weekday_"), 0);
        assert_eq!(group_sum(&m, 0, "month_"), 0);
        assert_eq!(m.column("working_day").unwrap(), vec![1]);
    }

    #[test]
    fn column_layout() {
        let s = series_from(date(2018, 1, 1), 24);
        let m = encode_calendar(&s, &HolidayCalendar::default(), CalendarOptions::default());
        assert_eq!(m.columns().len(), 23 + 6 + 11 + 1 + 4 + 2 + 1);
        assert_eq!(m.n_rows(), 24);
        assert_eq!(m.columns()[0], "hour_1");
        assert_eq!(m.columns()[23], "weekday_tue");
        assert_eq!(m.columns()[29], "month_feb");
        // Hour 5 sets exactly hour_5.
        assert_eq!(m.column("hour_5").unwrap()[5], 1);
        assert_eq!(group_sum(&m, 5, "hour_"), 1);
    }

    #[test]
    fn holiday_lags_and_preceding_count() {
        // Holidays on Dec 24-26 2018 (Mon-Wed).
        let cal =
            HolidayCalendar::new([date(2018, 12, 24), date(2018, 12, 25), date(2018, 12, 26)]);
        let s = series_from(date(2018, 12, 22), 24 * 8);
        let m = encode_calendar(&s, &cal, CalendarOptions::default());
        let daily =
            |name: &str| -> Vec<u32> { m.column(name).unwrap().into_iter().step_by(24).collect() };
        // Days: 22 23 24 25 26 27 28 29
        assert_eq!(daily("holiday"), vec![0, 0, 1, 1, 1, 0, 0, 0]);
        assert_eq!(daily("holiday_lag_m1"), vec![0, 0, 0, 1, 1, 1, 0, 0]);
        assert_eq!(daily("holiday_lag_m2"), vec![0, 0, 0, 0, 1, 1, 1, 0]);
        assert_eq!(daily("holiday_lag_p1"), vec![0, 1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(daily("holiday_lag_p2"), vec![1, 1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(daily("preceding_holidays"), vec![0, 0, 0, 1, 2, 3, 0, 0]);
        // Sat, Sun, holiday x3, Thu, Fri, Sat
        assert_eq!(daily("working_day"), vec![0, 0, 0, 0, 0, 1, 1, 0]);
    }

    #[test]
    fn day_after_two_holidays() {
        let cal = HolidayCalendar::new([date(2019, 5, 1), date(2019, 5, 2)]);
        assert_eq!(cal.preceding_consecutive(date(2019, 5, 3)), 2);
        assert_eq!(cal.preceding_consecutive(date(2019, 5, 2)), 1);
        assert_eq!(cal.preceding_consecutive(date(2019, 5, 1)), 0);
    }

    #[test]
    fn saturday_is_not_working() {
        let cal = HolidayCalendar::default();
        assert!(!cal.is_working_day(date(2018, 1, 6)));
        assert!(cal.is_working_day(date(2018, 1, 5)));
    }

    #[test]
    fn day_of_month_values() {
        assert_eq!(day_of_month(&series_from(date(2018, 1, 1), 1)), vec![1]);
        assert_eq!(day_of_month(&series_from(date(2018, 1, 31), 1)), vec![31]);
        let leap = series_from(date(2020, 2, 28), 48);
        let dom = day_of_month(&leap);
        assert_eq!((dom[0], dom[24], dom[47]), (28, 29, 29));
    }

    #[test]
    fn per_holiday_columns() {
        let text =
            "# holidays\n2018-12-25,christmas\n2018-12-06,independence\n\n2018-12-24,christmas\n";
        let cal = HolidayCalendar::read(text.as_bytes()).unwrap();
        assert_eq!(cal.len(), 3);
        let s = series_from(date(2018, 12, 24), 48);
        let m = encode_calendar(&s, &cal, CalendarOptions { per_holiday: true });
        assert!(m.columns().iter().any(|c| c == "holiday_christmas"));
        assert!(m.columns().iter().any(|c| c == "holiday_independence"));
        assert!(!m.columns().iter().any(|c| c == "holiday"));
        assert_eq!(m.column("holiday_christmas").unwrap()[30], 1);
        assert_eq!(m.column("holiday_independence").unwrap()[30], 0);
        assert!(HolidayCalendar::read("2018-13-01\n".as_bytes()).is_err());
    }

    #[test]
    fn dummy_groups_sum_at_most_one_and_deterministic() {
        let s = series_from(date(2018, 1, 1), 24 * 400);
        let cal = HolidayCalendar::new([date(2018, 12, 6)]);
        let m = encode_calendar(&s, &cal, CalendarOptions::default());
        for i in 0..m.n_rows() {
            let ts = s.timestamp(i);
            for (prefix, at_ref) in [
                ("hour_", ts.hour() == 0),
                ("weekday_", ts.weekday() == Weekday::Mon),
                ("month_", ts.month() == 1),
            ] {
                let sum = group_sum(&m, i, prefix);
                assert!(sum <= 1);
                assert_eq!(sum == 0, at_ref);
            }
        }
        assert_eq!(m, encode_calendar(&s, &cal, CalendarOptions::default()));
    }
}
