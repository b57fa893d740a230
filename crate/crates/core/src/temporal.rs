//! Backward-looking resolution of date expressions against a publication date.

use chrono::{Datelike, Days, Months, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::model::Span;
use crate::text::{self, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Day,
    Week,
    Month,
    Year,
}

/// A resolved date. `date` is the Monday of the week, the first of the month,
/// or January 1 for the coarser granularities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedDate {
    pub date: NaiveDate,
    pub granularity: Granularity,
    pub raw: String,
}

const WEEKDAYS: [(&str, Weekday); 7] = [
    ("monday", Weekday::Mon),
    ("tuesday", Weekday::Tue),
    ("wednesday", Weekday::Wed),
    ("thursday", Weekday::Thu),
    ("friday", Weekday::Fri),
    ("saturday", Weekday::Sat),
    ("sunday", Weekday::Sun),
];

const MONTHS: [(&str, u32); 24] = [
    ("january", 1),
    ("jan", 1),
    ("february", 2),
    ("feb", 2),
    ("march", 3),
    ("mar", 3),
    ("april", 4),
    ("apr", 4),
    ("may", 5),
    ("june", 6),
    ("jun", 6),
    ("july", 7),
    ("jul", 7),
    ("august", 8),
    ("aug", 8),
    ("september", 9),
    ("sept", 9),
    ("sep", 9),
    ("october", 10),
    ("oct", 10),
    ("november", 11),
    ("nov", 11),
    ("december", 12),
    ("dec", 12),
];

const NUMBERS: [(&str, u32); 14] = [
    ("a", 1),
    ("an", 1),
    ("one", 1),
    ("two", 2),
    ("three", 3),
    ("four", 4),
    ("five", 5),
    ("six", 6),
    ("seven", 7),
    ("eight", 8),
    ("nine", 9),
    ("ten", 10),
    ("eleven", 11),
    ("twelve", 12),
];

fn weekday(w: &str) -> Option<Weekday> {
    WEEKDAYS.iter().find(|(n, _)| *n == w).map(|(_, d)| *d)
}

/// Month number; "may", "march" and the short forms must be capitalized to
/// avoid reading verbs and ordinary words as months.
fn month(tok: &Token<'_>) -> Option<u32> {
    let f = tok.text.to_lowercase();
    let (_, m) = MONTHS.iter().find(|(n, _)| *n == f)?;
    let capital = tok.text.chars().next().is_some_and(char::is_uppercase);
    let risky = f.len() <= 4 || f == "march";
    (!risky || capital).then_some(*m)
}

fn day_number(s: &str) -> Option<u32> {
    let digits = s
        .strip_suffix("st")
        .or_else(|| s.strip_suffix("nd"))
        .or_else(|| s.strip_suffix("rd"))
        .or_else(|| s.strip_suffix("th"))
        .unwrap_or(s);
    let d: u32 = digits.parse().ok()?;
    (1..=31).contains(&d).then_some(d)
}

fn year_number(s: &str) -> Option<i32> {
    if s.len() != 4 {
        return None;
    }
    let y: i32 = s.parse().ok()?;
    (1800..=2199).contains(&y).then_some(y)
}

fn count(s: &str) -> Option<u32> {
    if let Ok(n) = s.parse::<u32>() {
        return (n <= 1000).then_some(n);
    }
    NUMBERS.iter().find(|(w, _)| *w == s).map(|(_, n)| *n)
}

fn monday_of(d: NaiveDate) -> NaiveDate {
    d - Days::new(d.weekday().num_days_from_monday() as u64)
}

fn first_of_month(d: NaiveDate) -> NaiveDate {
    d.with_day(1).expect("day 1 exists")
}

fn jan1(y: i32) -> Option<NaiveDate> {
    NaiveDate::from_ymd_opt(y, 1, 1)
}

/// Most recent `w` on or before `d` (strictly before when `strict`).
fn weekday_back(d: NaiveDate, w: Weekday, strict: bool) -> NaiveDate {
    let mut back = (7 + d.weekday().num_days_from_monday() - w.num_days_from_monday()) % 7;
    if strict && back == 0 {
        back = 7;
    }
    d - Days::new(back as u64)
}

fn weekday_forward(d: NaiveDate, w: Weekday) -> NaiveDate {
    let mut ahead = (7 + w.num_days_from_monday() - d.weekday().num_days_from_monday()) % 7;
    if ahead == 0 {
        ahead = 7;
    }
    d + Days::new(ahead as u64)
}

/// First of the most recent month `m` on or before the publication month
/// (strictly before when `strict`).
fn month_back(pubd: NaiveDate, m: u32, strict: bool) -> Option<NaiveDate> {
    let mut y = pubd.year();
    if m > pubd.month() || (strict && m == pubd.month()) {
        y -= 1;
    }
    NaiveDate::from_ymd_opt(y, m, 1)
}

fn month_forward(pubd: NaiveDate, m: u32) -> Option<NaiveDate> {
    let y = if m > pubd.month() { pubd.year() } else { pubd.year() + 1 };
    NaiveDate::from_ymd_opt(y, m, 1)
}

/// Full date without a year: the most recent such day on or before publication.
fn day_back(pubd: NaiveDate, m: u32, d: u32) -> Option<NaiveDate> {
    let this = NaiveDate::from_ymd_opt(pubd.year(), m, d);
    match this {
        Some(x) if x <= pubd => Some(x),
        _ => NaiveDate::from_ymd_opt(pubd.year() - 1, m, d),
    }
}

fn ago(pubd: NaiveDate, n: u32, unit: &str) -> Option<(NaiveDate, Granularity)> {
    let unit = unit.strip_suffix('s').unwrap_or(unit);
    Some(match unit {
        "day" => (pubd.checked_sub_days(Days::new(n as u64))?, Granularity::Day),
        "week" => (
            monday_of(pubd.checked_sub_days(Days::new(7 * n as u64))?),
            Granularity::Week,
        ),
        "month" => (
            first_of_month(pubd.checked_sub_months(Months::new(n))?),
            Granularity::Month,
        ),
        "year" => (jan1(pubd.year() - n as i32)?, Granularity::Year),
        _ => return None,
    })
}

fn relative_unit(pubd: NaiveDate, unit: &str, offset: i32) -> Option<(NaiveDate, Granularity)> {
    Some(match unit {
        "week" => {
            let base = if offset < 0 {
                pubd.checked_sub_days(Days::new(7))?
            } else if offset > 0 {
                pubd.checked_add_days(Days::new(7))?
            } else {
                pubd
            };
            (monday_of(base), Granularity::Week)
        }
        "month" => {
            let first = first_of_month(pubd);
            let d = match offset {
                o if o < 0 => first.checked_sub_months(Months::new(1))?,
                o if o > 0 => first.checked_add_months(Months::new(1))?,
                _ => first,
            };
            (d, Granularity::Month)
        }
        "year" => (jan1(pubd.year() + offset.signum())?, Granularity::Year),
        _ => return None,
    })
}

/// Try to read a date expression starting at token `i`. Returns the number of
/// tokens consumed and the resolution.
fn match_at(toks: &[Token<'_>], folded: &[String], i: usize, pubd: NaiveDate) -> Option<(usize, NaiveDate, Granularity)> {
    use Granularity::*;
    let w = folded[i].as_str();
    let next = folded.get(i + 1).map(String::as_str);

    match w {
        "today" => return Some((1, pubd, Day)),
        "yesterday" => return Some((1, pubd.pred_opt()?, Day)),
        "tomorrow" => return Some((1, pubd.succ_opt()?, Day)),
        "last" | "past" | "previous" | "this" | "next" | "coming" => {
            let offset = match w {
                "this" => 0,
                "next" | "coming" => 1,
                _ => -1,
            };
            let n = next?;
            if let Some(wd) = weekday(n) {
                let d = match offset {
                    -1 => weekday_back(pubd, wd, true),
                    0 => weekday_back(pubd, wd, false),
                    _ => weekday_forward(pubd, wd),
                };
                return Some((2, d, Day));
            }
            if let Some(m) = month(&toks[i + 1]) {
                let d = match offset {
                    -1 => month_back(pubd, m, true)?,
                    0 => NaiveDate::from_ymd_opt(pubd.year(), m, 1)?,
                    _ => month_forward(pubd, m)?,
                };
                return Some((2, d, Month));
            }
            if let Some((d, g)) = relative_unit(pubd, n, offset) {
                return Some((2, d, g));
            }
            return None;
        }
        _ => {}
    }

    if let Some(wd) = weekday(w) {
        return Some((1, weekday_back(pubd, wd, false), Day));
    }

    // N units ago
    if let (Some(n), Some(unit), Some("ago")) = (
        count(w),
        next,
        folded.get(i + 2).map(String::as_str),
    ) {
        if let Some((d, g)) = ago(pubd, n, unit) {
            return Some((3, d, g));
        }
    }

    // ISO yyyy-mm-dd
    if w.len() == 10 && w.as_bytes()[4] == b'-' && w.as_bytes()[7] == b'-' {
        if let Ok(d) = NaiveDate::parse_from_str(w, "%Y-%m-%d") {
            return Some((1, d, Day));
        }
    }

    // Month [day][,] [year]
    if let Some(m) = month(&toks[i]) {
        if let Some(d) = next.and_then(day_number) {
            if let Some(y) = folded.get(i + 2).and_then(|s| year_number(s)) {
                return Some((3, NaiveDate::from_ymd_opt(y, m, d)?, Day));
            }
            return Some((2, day_back(pubd, m, d)?, Day));
        }
        if let Some(y) = next.and_then(year_number) {
            return Some((2, NaiveDate::from_ymd_opt(y, m, 1)?, Month));
        }
        return Some((1, month_back(pubd, m, false)?, Month));
    }

    // day Month [year]
    if let Some(d) = day_number(w) {
        if let Some(m) = toks.get(i + 1).and_then(month) {
            if let Some(y) = folded.get(i + 2).and_then(|s| year_number(s)) {
                return Some((3, NaiveDate::from_ymd_opt(y, m, d)?, Day));
            }
            return Some((2, day_back(pubd, m, d)?, Day));
        }
    }

    if let Some(y) = year_number(w) {
        return Some((1, jan1(y)?, Year));
    }
    None
}

/// Every date expression in `text` with its character span and resolution,
/// left to right, non-overlapping.
pub fn find_dates(text: &str, publication_date: NaiveDate) -> Vec<(Span, ResolvedDate)> {
    let toks = text::tokens(text);
    let folded: Vec<String> = toks.iter().map(|t| t.text.to_lowercase()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        match match_at(&toks, &folded, i, publication_date) {
            Some((n, date, granularity)) => {
                let b0 = toks[i].start;
                let b1 = toks[i + n - 1].end;
                let raw = &text[b0..b1];
                let s = text::char_offset(text, b0);
                out.push((
                    Span::new(raw, s, s + text::char_len(raw)),
                    ResolvedDate {
                        date,
                        granularity,
                        raw: raw.to_string(),
                    },
                ));
                i += n;
            }
            None => i += 1,
        }
    }
    out
}

/// Resolve the first date expression in `phrase`; other tokens are ignored.
pub fn resolve_date(phrase: &str, publication_date: NaiveDate) -> Option<ResolvedDate> {
    let (_, mut r) = find_dates(phrase, publication_date).into_iter().next()?;
    r.raw = phrase.to_string();
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn res(p: &str, pubd: NaiveDate) -> (NaiveDate, Granularity) {
        let r = resolve_date(p, pubd).unwrap_or_else(|| panic!("`{p}` unresolved"));
        (r.date, r.granularity)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(res("Wednesday", ymd(2022, 11, 30)), (ymd(2022, 11, 30), Granularity::Day));
        assert_eq!(res("in 2018", ymd(2022, 11, 30)), (ymd(2018, 1, 1), Granularity::Year));
        assert_eq!(res("last November", ymd(2023, 3, 15)), (ymd(2022, 11, 1), Granularity::Month));
    }

    #[test]
    fn relative_forms() {
        let p = ymd(2022, 11, 30); // a Wednesday
        assert_eq!(res("Tuesday", p), (ymd(2022, 11, 29), Granularity::Day));
        assert_eq!(res("Thursday", p), (ymd(2022, 11, 24), Granularity::Day));
        assert_eq!(res("last Wednesday", p), (ymd(2022, 11, 23), Granularity::Day));
        assert_eq!(res("Dehli last week", p), (ymd(2022, 11, 21), Granularity::Week));
        assert_eq!(res("yesterday", p), (ymd(2022, 11, 29), Granularity::Day));
        assert_eq!(res("three days ago", p), (ymd(2022, 11, 27), Granularity::Day));
        assert_eq!(res("2 months ago", p), (ymd(2022, 9, 1), Granularity::Month));
        assert_eq!(res("last month", p), (ymd(2022, 10, 1), Granularity::Month));
        assert_eq!(res("last year", p), (ymd(2021, 1, 1), Granularity::Year));
        assert_eq!(res("November", p), (ymd(2022, 11, 1), Granularity::Month));
        assert_eq!(res("last November", p), (ymd(2021, 11, 1), Granularity::Month));
        assert_eq!(res("December", p), (ymd(2021, 12, 1), Granularity::Month));
        assert_eq!(res("on Dec. 3", p), (ymd(2021, 12, 3), Granularity::Day));
        assert_eq!(res("Nov 3", p), (ymd(2022, 11, 3), Granularity::Day));
        assert_eq!(res("3 March 2019", p), (ymd(2019, 3, 3), Granularity::Day));
        assert_eq!(res("June 2020", p), (ymd(2020, 6, 1), Granularity::Month));
        assert_eq!(res("2020-02-29", p), (ymd(2020, 2, 29), Granularity::Day));
    }

    #[test]
    fn future_only_with_marker() {
        let p = ymd(2022, 11, 30);
        assert_eq!(res("next week", p), (ymd(2022, 12, 5), Granularity::Week));
        assert_eq!(res("next Wednesday", p), (ymd(2022, 12, 7), Granularity::Day));
        assert_eq!(res("tomorrow", p), (ymd(2022, 12, 1), Granularity::Day));
    }

    #[test]
    fn unresolvable() {
        let p = ymd(2022, 11, 30);
        assert!(resolve_date("Muslim shops", p).is_none());
        assert!(resolve_date("they may leave", p).is_none());
        assert!(resolve_date("a march through the city", p).is_none());
        assert!(resolve_date("", p).is_none());
    }

    #[test]
    fn spans_in_text() {
        let t = "Police said on Wednesday that a blast in 2018 killed two.";
        let found = find_dates(t, ymd(2022, 11, 30));
        let raws: Vec<_> = found.iter().map(|(s, _)| s.text.as_str()).collect();
        assert_eq!(raws, ["Wednesday", "2018"]);
        assert!(found.iter().all(|(s, _)| s.is_consistent_with(t)));
    }
}
