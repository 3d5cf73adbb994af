//! Timestamped contact events and their binning into trajectories.
//!
//! An edge `{i, j}` is present in bin `k` iff at least one contact between
//! `i` and `j` falls in `[start + k*res, start + (k+1)*res)`. Empty bins stay
//! in the trajectory as empty graphs.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{IndexSemantics, Snapshot, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub t: f64,
    pub a: usize,
    pub b: usize,
}

/// Cleaned, time-sorted contacts with a dense node index.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactEvents {
    events: Vec<Contact>,
    labels: Vec<String>,
    dropped_self_loops: usize,
}

impl ContactEvents {
    /// Builds from labelled triples. Self-contacts are dropped and counted;
    /// node indices follow the sorted label order (numeric when every label
    /// is an integer).
    pub fn from_triples<I, S>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, S, S)>,
        S: Into<String>,
    {
        let mut raw = Vec::new();
        let mut dropped = 0;
        for (t, a, b) in triples {
            if !t.is_finite() {
                return Err(Error::invalid("timestamp", format!("{t} is not finite")));
            }
            let (a, b) = (a.into(), b.into());
            if a == b {
                dropped += 1;
                continue;
            }
            raw.push((t, a, b));
        }
        let names: BTreeSet<&String> = raw.iter().flat_map(|(_, a, b)| [a, b]).collect();
        let mut labels: Vec<String> = names.into_iter().cloned().collect();
        if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
            labels.sort_by_key(|l| l.parse::<i64>().unwrap_or_default());
        }
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut events: Vec<Contact> = raw
            .iter()
            .map(|(t, a, b)| Contact {
                t: *t,
                a: index[a.as_str()],
                b: index[b.as_str()],
            })
            .collect();
        events.sort_by(|x, y| x.t.total_cmp(&y.t));
        Ok(ContactEvents {
            events,
            labels,
            dropped_self_loops: dropped,
        })
    }

    pub fn events(&self) -> &[Contact] {
        &self.events
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn t_min(&self) -> Option<f64> {
        self.events.first().map(|e| e.t)
    }

    pub fn t_max(&self) -> Option<f64> {
        self.events.last().map(|e| e.t)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactFormat {
    /// Whitespace separated `t i j` lines, no header.
    #[default]
    Tij,
    /// Delimited text, optionally with a header row.
    Csv,
}

impl FromStr for ContactFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tij" => Ok(ContactFormat::Tij),
            "csv" => Ok(ContactFormat::Csv),
            other => Err(Error::invalid(
                "format",
                format!("unknown contact format `{other}` (tij|csv)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Time,
    Source,
    Target,
    Skip,
}

/// Role of each input column, written as e.g. `t,i,j` or `i,j,_,t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnOrder(Vec<Role>);

impl Default for ColumnOrder {
    fn default() -> Self {
        ColumnOrder(vec![Role::Time, Role::Source, Role::Target])
    }
}

impl ColumnOrder {
    fn position(&self, role: Role) -> usize {
        self.0
            .iter()
            .position(|r| *r == role)
            .expect("validated on construction")
    }
}

impl FromStr for ColumnOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let roles = s
            .split(',')
            .map(|tok| match tok.trim() {
                "t" => Ok(Role::Time),
                "i" => Ok(Role::Source),
                "j" => Ok(Role::Target),
                "_" => Ok(Role::Skip),
                other => Err(Error::invalid(
                    "cols",
                    format!("unknown column role `{other}` (t|i|j|_)"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        for role in [Role::Time, Role::Source, Role::Target] {
            if roles.iter().filter(|r| **r == role).count() != 1 {
                return Err(Error::invalid(
                    "cols",
                    "each of t, i, j must appear exactly once",
                ));
            }
        }
        Ok(ColumnOrder(roles))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParseOptions {
    pub format: ContactFormat,
    /// Field delimiter; whitespace for `tij`, `,` for `csv` when unset.
    pub delimiter: Option<char>,
    /// Explicit column roles. Without them `tij` assumes `t,i,j` and `csv`
    /// looks the columns up by name in its header row.
    pub columns: Option<ColumnOrder>,
}

const TIME_NAMES: [&str; 3] = ["t", "time", "timestamp"];
const SOURCE_NAMES: [&str; 5] = ["i", "source", "src", "from", "node_a"];
const TARGET_NAMES: [&str; 5] = ["j", "target", "dst", "to", "node_b"];

fn split_fields(line: &str, delimiter: Option<char>) -> Vec<&str> {
    match delimiter {
        Some(d) => line.split(d).map(str::trim).collect(),
        None => line.split_whitespace().collect(),
    }
}

fn header_positions(fields: &[&str]) -> Option<[usize; 3]> {
    let find = |names: &[&str]| {
        fields
            .iter()
            .position(|f| names.iter().any(|n| f.eq_ignore_ascii_case(n)))
    };
    Some([
        find(&TIME_NAMES)?,
        find(&SOURCE_NAMES)?,
        find(&TARGET_NAMES)?,
    ])
}

/// Parses an event list. Blank lines and `#` comments are skipped.
pub fn parse_contacts<R: BufRead>(reader: R, opts: &ParseOptions) -> Result<ContactEvents> {
    let delimiter = match (opts.format, opts.delimiter) {
        (_, Some(d)) => Some(d),
        (ContactFormat::Tij, None) => None,
        (ContactFormat::Csv, None) => Some(','),
    };
    let mut cols = opts.columns.as_ref().map(|c| {
        [
            c.position(Role::Time),
            c.position(Role::Source),
            c.position(Role::Target),
        ]
    });
    let mut triples = Vec::new();
    let mut first = true;
    for (k, line) in reader.lines().enumerate() {
        let lineno = k + 1;
        let line = line.map_err(|e| Error::io(format!("reading line {lineno}"), e))?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields = split_fields(body, delimiter);
        if std::mem::take(&mut first) && opts.format == ContactFormat::Csv {
            let looks_like_header = fields.iter().all(|f| f.parse::<f64>().is_err());
            if looks_like_header {
                if cols.is_none() {
                    cols = Some(header_positions(&fields).ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: format!(
                            "cannot locate time/source/target columns in header {fields:?}; \
                             pass --cols with the role of each column, e.g. --cols t,i,j"
                        ),
                    })?);
                }
                continue;
            }
        }
        let [ct, ca, cb] = cols.unwrap_or([0, 1, 2]);
        let need = ct.max(ca).max(cb) + 1;
        if fields.len() < need {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected at least {need} fields, found {}", fields.len()),
            });
        }
        let t: f64 = fields[ct].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad timestamp `{}`", fields[ct]),
        })?;
        triples.push((t, fields[ca].to_string(), fields[cb].to_string()));
    }
    if triples.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no contact events in input".into(),
        });
    }
    ContactEvents::from_triples(triples)
}

/// Snapshot width and optional window `[start, end)` in the events' time
/// unit (seconds for the usual contact datasets).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningSpec {
    pub resolution: f64,
    /// Defaults to the first event.
    #[serde(default)]
    pub start: Option<f64>,
    /// Exclusive end. Defaults to just past the last event, so the last
    /// event's bin is the final snapshot.
    #[serde(default)]
    pub end: Option<f64>,
}

impl BinningSpec {
    pub fn new(resolution: f64) -> Self {
        BinningSpec {
            resolution,
            start: None,
            end: None,
        }
    }
}

/// Presence-threshold binning into an undirected, unweighted trajectory.
/// The node set is every node with a contact inside the window.
pub fn bin_to_trajectory(events: &ContactEvents, spec: &BinningSpec) -> Result<Trajectory> {
    let res = spec.resolution;
    if !(res.is_finite() && res > 0.0) {
        return Err(Error::invalid(
            "resolution",
            format!("need a positive resolution, got {res}"),
        ));
    }
    let start = match spec.start.or(events.t_min()) {
        Some(s) => s,
        None => return Err(Error::EmptyWindow),
    };
    if let Some(end) = spec.end {
        if end <= start {
            return Err(Error::invalid(
                "window",
                format!("end {end} <= start {start}"),
            ));
        }
    }
    let inside = |e: &&Contact| e.t >= start && spec.end.is_none_or(|end| e.t < end);
    let picked: Vec<&Contact> = events.events().iter().filter(inside).collect();
    let last = picked.last().ok_or(Error::EmptyWindow)?.t;
    let n = match spec.end {
        Some(end) => ((end - start) / res).ceil() as usize,
        None => ((last - start) / res).floor() as usize + 1,
    };

    let active: BTreeSet<usize> = picked.iter().flat_map(|e| [e.a, e.b]).collect();
    let remap: HashMap<usize, usize> = active
        .iter()
        .enumerate()
        .map(|(k, &old)| (old, k))
        .collect();
    let labels: Vec<String> = active
        .iter()
        .map(|&old| events.labels()[old].clone())
        .collect();
    let m = labels.len();

    let mut lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in picked {
        let k = (((e.t - start) / res).floor() as usize).min(n - 1);
        lists[k].push((remap[&e.a], remap[&e.b]));
    }
    let snaps = lists
        .into_iter()
        .map(|l| Snapshot::undirected(m, l))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::build(snaps)?
        .with_index(IndexSemantics::Time {
            resolution: Some(res),
        })
        .with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ContactEvents> {
        parse_contacts(text.as_bytes(), &ParseOptions::default())
    }

    #[test]
    fn three_events() {
        let ev = parse("0 A B\n20 B C\n40 A B\n").unwrap();
        assert_eq!(ev.len(), 3);
        assert_eq!(ev.labels(), &["A", "B", "C"]);
        assert_eq!(ev.index_of("C"), Some(2));
        assert_eq!(ev.dropped_self_loops(), 0);
    }

    #[test]
    fn self_contacts_dropped() {
        let ev = parse("0 A B\n20 A A\n").unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev.dropped_self_loops(), 1);
    }

    #[test]
    fn sorted_by_time() {
        let ev = parse("40 A B\n0 B C\n20 A C\n").unwrap();
        let ts: Vec<f64> = ev.events().iter().map(|e| e.t).collect();
        assert_eq!(ts, vec![0.0, 20.0, 40.0]);
        assert_eq!((ev.events()[0].a, ev.events()[0].b), (1, 2));
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let ev = parse("0 10 9\n1 2 10\n").unwrap();
        assert_eq!(ev.labels(), &["2", "9", "10"]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("0 A B\nx A B\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse("0 A\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse("").is_err());
        assert!(parse("# only a comment\n").is_err());
    }

    #[test]
    fn csv_with_header_and_columns() {
        let csv = "src,dst,timestamp\nA,B,5\nB,C,30\n";
        let opts = ParseOptions {
            format: ContactFormat::Csv,
            ..Default::default()
        };
        let ev = parse_contacts(csv.as_bytes(), &opts).unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev.t_min(), Some(5.0));

        let odd = "who,whom,when\nA,B,5\n";
        let err = parse_contacts(odd.as_bytes(), &opts).unwrap_err();
        assert!(err.to_string().contains("--cols"), "{err}");

        let opts = ParseOptions {
            format: ContactFormat::Csv,
            columns: Some("i,j,t".parse().unwrap()),
            ..Default::default()
        };
        let ev = parse_contacts(odd.as_bytes(), &opts).unwrap();
        assert_eq!(ev.t_max(), Some(5.0));
    }

    #[test]
    fn column_order_validation() {
        assert!("t,i".parse::<ColumnOrder>().is_err());
        assert!("t,i,j,t".parse::<ColumnOrder>().is_err());
        assert!("t,x,j".parse::<ColumnOrder>().is_err());
        assert!("_,t,i,j".parse::<ColumnOrder>().is_ok());
    }

    #[test]
    fn bin_boundaries() {
        let ev = parse("0 A B\n25 A B\n").unwrap();
        let t = bin_to_trajectory(&ev, &BinningSpec::new(20.0)).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.snapshot(0).contains(0, 1) && t.snapshot(1).contains(0, 1));
        assert_eq!(
            t.index(),
            &IndexSemantics::Time {
                resolution: Some(20.0)
            }
        );
    }

    #[test]
    fn event_on_last_boundary_is_kept() {
        let ev = parse("0 A B\n40 B C\n").unwrap();
        let t = bin_to_trajectory(&ev, &BinningSpec::new(20.0)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.snapshot(1).nnz() == 0);
        assert!(t.snapshot(2).contains(1, 2));
    }

    #[test]
    fn coarse_resolution_unions_everything() {
        let ev = parse("0 A B\n20 B C\n40 A B\n").unwrap();
        let t = bin_to_trajectory(&ev, &BinningSpec::new(1000.0)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(
            t.snapshot(0).canonical_edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2)]
        );
    }

    #[test]
    fn window_restricts_nodes_and_span() {
        let ev = parse("0 A B\n100 C D\n130 C E\n500 A E\n").unwrap();
        let spec = BinningSpec {
            resolution: 60.0,
            start: Some(100.0),
            end: Some(220.0),
        };
        let t = bin_to_trajectory(&ev, &spec).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.labels().unwrap(), &["C", "D", "E"]);
        assert!(t.snapshot(0).contains(0, 1) && t.snapshot(0).contains(0, 2));
        let empty = BinningSpec {
            resolution: 60.0,
            start: Some(200.0),
            end: Some(400.0),
        };
        assert!(matches!(
            bin_to_trajectory(&ev, &empty),
            Err(Error::EmptyWindow)
        ));
        assert!(bin_to_trajectory(&ev, &BinningSpec::new(0.0)).is_err());
    }
}
