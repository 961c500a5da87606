//! Time series CSV input and tabular CSV output.
//!
//! Input rows are `(time, value)` pairs or a single value column. Times are
//! numbers or ISO dates (`YYYY-MM-DD`, optionally with `THH:MM:SS`); dates
//! become day offsets from the earliest row. Rows are sorted by time.

use std::io::Read;
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime};
use fastimd::{ModeStack, Series};

use crate::error::{FormatError, Result};
use crate::write::write_atomic;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Layout {
    /// `time,value`, or a single `value` column, header optional.
    #[default]
    Generic,
    /// Yahoo historical prices: `Date,Open,High,Low,Close,Adj Close,Volume`.
    YahooDaily,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReadOptions {
    pub layout: Layout,
    /// Column holding the values: a header name, or a 0-based index. Defaults
    /// to `Close` for Yahoo files and the second column otherwise.
    pub value_column: Option<String>,
    /// Replace the times by `0, 1, 2, ...` after sorting.
    pub uniform_index: bool,
}

pub fn read_series_csv(path: &Path, options: &ReadOptions) -> Result<Series> {
    let file = std::fs::File::open(path)?;
    parse_series_csv(file, options)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stamp {
    Number(f64),
    /// Seconds since the epoch.
    Date(i64),
}

struct Row {
    line: u64,
    stamp: Stamp,
    value: f64,
}

pub fn parse_series_csv<R: Read>(reader: R, options: &ReadOptions) -> Result<Series> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut records = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| FormatError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        records.push((line, record));
    }
    let Some((_, first)) = records.first() else {
        return Err(FormatError::EmptyFile);
    };

    let header: Option<Vec<String>> = match options.layout {
        Layout::YahooDaily => Some(first.iter().map(str::to_owned).collect()),
        Layout::Generic => {
            let probe = first.get(0).unwrap_or("");
            (parse_number(probe).is_none() && parse_date(probe).is_none())
                .then(|| first.iter().map(str::to_owned).collect())
        }
    };
    let body = &records[usize::from(header.is_some())..];
    if body.is_empty() {
        return Err(FormatError::EmptyFile);
    }

    let width = first.len();
    let (time_col, value_col) = match options.layout {
        Layout::YahooDaily => {
            let header = header.as_deref().unwrap_or_default();
            let date = find_column(header, "Date", records[0].0)?;
            let value = resolve_column(header, options.value_column.as_deref().unwrap_or("Close"), records[0].0)?;
            (Some(date), value)
        }
        Layout::Generic => {
            let names = header.as_deref().unwrap_or_default();
            match &options.value_column {
                Some(wanted) => {
                    let value = resolve_column(names, wanted, records[0].0)?;
                    let time = (width > 1).then_some(if value == 0 { 1 } else { 0 });
                    (time, value)
                }
                None if width == 1 => (None, 0),
                None => (Some(0), 1),
            }
        }
    };

    let mut rows = Vec::with_capacity(body.len());
    for (i, (line, record)) in body.iter().enumerate() {
        let line = *line;
        let cell = |col: usize| {
            record.get(col).ok_or_else(|| FormatError::Parse {
                line,
                reason: format!("missing column {}", col + 1),
            })
        };
        let value_text = cell(value_col)?;
        let value = parse_number(value_text).ok_or_else(|| FormatError::Parse {
            line,
            reason: format!("invalid value {value_text:?}"),
        })?;
        let stamp = match time_col {
            None => Stamp::Number(i as f64),
            Some(col) => {
                let text = cell(col)?;
                if let Some(t) = parse_number(text) {
                    Stamp::Number(t)
                } else if let Some(d) = parse_date(text) {
                    Stamp::Date(d)
                } else {
                    return Err(FormatError::Parse {
                        line,
                        reason: format!("invalid time {text:?}"),
                    });
                }
            }
        };
        rows.push(Row { line, stamp, value });
    }

    let dates = matches!(rows[0].stamp, Stamp::Date(_));
    if let Some(bad) = rows.iter().find(|r| matches!(r.stamp, Stamp::Date(_)) != dates) {
        return Err(FormatError::Parse {
            line: bad.line,
            reason: "mixes dates and numeric times".into(),
        });
    }
    let key = |r: &Row| match r.stamp {
        Stamp::Number(t) => t,
        Stamp::Date(s) => s as f64,
    };
    rows.sort_by(|a, b| key(a).total_cmp(&key(b)));
    if let Some(w) = rows.windows(2).find(|w| key(&w[0]) == key(&w[1])) {
        return Err(FormatError::DuplicateTimestamp { line: w[1].line });
    }

    let times: Vec<f64> = if options.uniform_index {
        (0..rows.len()).map(|i| i as f64).collect()
    } else {
        match rows[0].stamp {
            Stamp::Number(_) => rows.iter().map(key).collect(),
            Stamp::Date(origin) => rows
                .iter()
                .map(|r| match r.stamp {
                    Stamp::Date(s) => (s - origin) as f64 / 86_400.0,
                    Stamp::Number(t) => t,
                })
                .collect(),
        }
    };
    let values = rows.iter().map(|r| r.value).collect();
    Ok(Series::new(times, values)?)
}

fn find_column(header: &[String], name: &str, line: u64) -> Result<usize> {
    header
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or_else(|| FormatError::Parse {
            line,
            reason: format!("no column named {name:?}"),
        })
}

fn resolve_column(header: &[String], wanted: &str, line: u64) -> Result<usize> {
    if let Ok(i) = find_column(header, wanted, line) {
        return Ok(i);
    }
    wanted.parse::<usize>().map_err(|_| FormatError::Parse {
        line,
        reason: format!("no column named {wanted:?}"),
    })
}

fn parse_number(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_date(text: &str) -> Option<i64> {
    if let Ok(d) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
        return Some(d.and_hms_opt(0, 0, 0)?.and_utc().timestamp());
    }
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(text, f).ok())
        .map(|d| d.and_utc().timestamp())
}

/// Named numeric columns of equal length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.headers.push(name.into());
        self.columns.push(values);
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(&self.columns[i])
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// CSV text with a header row. Numbers use the shortest representation
    /// that parses back to the same `f64`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(&self.headers).map_err(csv_io)?;
        let mut row = Vec::with_capacity(self.columns.len());
        for r in 0..self.rows() {
            row.clear();
            row.extend(self.columns.iter().map(|c| c[r].to_string()));
            out.write_record(&row).map_err(csv_io)?;
        }
        out.into_inner().map_err(|e| FormatError::Io(e.into_error()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(write_atomic(path, &self.to_csv()?)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(std::fs::File::open(path)?)
    }

    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().from_reader(reader);
        let headers: Vec<String> = csv.headers().map_err(csv_io)?.iter().map(str::to_owned).collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for record in csv.records() {
            let record = record.map_err(|e| FormatError::Parse {
                line: e.position().map_or(0, |p| p.line()),
                reason: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            for (col, text) in columns.iter_mut().zip(record.iter()) {
                col.push(text.parse().map_err(|_| FormatError::Parse {
                    line,
                    reason: format!("invalid number {text:?}"),
                })?);
            }
        }
        Ok(Self { headers, columns })
    }
}

fn csv_io(e: csv::Error) -> FormatError {
    FormatError::Io(e.into())
}

/// `time, Original`, then `Trend n, Fluctuation n, Difference n` per mode.
pub fn modes_table(stack: &ModeStack) -> Table {
    let mut table = Table::new();
    table.push("time", stack.original.times().to_vec());
    table.push("Original", stack.original.values().to_vec());
    for mode in &stack.modes {
        let n = mode.index;
        table.push(format!("Trend {n}"), mode.trend.values().to_vec());
        table.push(format!("Fluctuation {n}"), mode.fluctuation.values().to_vec());
        table.push(format!("Difference {n}"), mode.difference.values().to_vec());
    }
    table
}

pub fn write_modes_csv(stack: &ModeStack, path: &Path) -> Result<()> {
    modes_table(stack).write(path)
}
