//! Line-oriented trajectory format:
//!
//! ```text
//! # free-form comments (generator parameters, provenance)
//! # index: {"kind":"time","resolution":20.0}
//! # label 0 alice
//! m=<int> n=<int> symmetric=<0|1>
//! t=0
//! i j
//! t=1
//! ...
//! ```
//!
//! Symmetric files list each undirected edge once with `i < j`.

use std::io::{BufRead, Write};
use std::path::Path;

use super::{atomic_write, open_input, write_err};
use crate::error::{Error, Result};
use crate::trajectory::{IndexSemantics, Snapshot, Trajectory};

const INDEX_PREFIX: &str = "index: ";
const LABEL_PREFIX: &str = "label ";

/// A parsed trajectory with the free-form comment lines that preceded it.
#[derive(Clone, Debug)]
pub struct TrajectoryFile {
    pub trajectory: Trajectory,
    pub comments: Vec<String>,
}

pub fn write_trajectory<W: Write + ?Sized>(
    w: &mut W,
    traj: &Trajectory,
    comments: &[String],
) -> Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}").map_err(write_err)?;
        }
    }
    if *traj.index() != IndexSemantics::Other {
        writeln!(
            w,
            "# {INDEX_PREFIX}{}",
            serde_json::to_string(traj.index())?
        )
        .map_err(write_err)?;
    }
    if let Some(labels) = traj.labels() {
        for (i, l) in labels.iter().enumerate() {
            writeln!(w, "# {LABEL_PREFIX}{i} {l}").map_err(write_err)?;
        }
    }
    writeln!(
        w,
        "m={} n={} symmetric={}",
        traj.m(),
        traj.len(),
        u8::from(traj.is_symmetric())
    )
    .map_err(write_err)?;
    for (t, s) in traj.snapshots().iter().enumerate() {
        writeln!(w, "t={t}").map_err(write_err)?;
        for (i, j) in s.canonical_edges() {
            writeln!(w, "{i} {j}").map_err(write_err)?;
        }
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header_field(line: usize, token: Option<&str>, key: &str) -> Result<usize> {
    let token = token.ok_or_else(|| parse_err(line, format!("header is missing `{key}=`")))?;
    token
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<int>`, found `{token}`")))
}

pub fn read_trajectory<R: BufRead>(reader: R) -> Result<TrajectoryFile> {
    let mut comments = Vec::new();
    let mut index = IndexSemantics::Other;
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut header: Option<(usize, usize, bool)> = None;
    let mut lists: Vec<Vec<(usize, usize)>> = Vec::new();

    for (k, line) in reader.lines().enumerate() {
        let lineno = k + 1;
        let line = line.map_err(|e| Error::io(format!("reading line {lineno}"), e))?;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(c) = body.strip_prefix('#') {
            let c = c.strip_prefix(' ').unwrap_or(c);
            if let Some(json) = c.strip_prefix(INDEX_PREFIX) {
                index = serde_json::from_str(json)
                    .map_err(|e| parse_err(lineno, format!("bad index tag: {e}")))?;
            } else if let Some(rest) = c.strip_prefix(LABEL_PREFIX) {
                let (idx, name) = rest
                    .split_once(' ')
                    .ok_or_else(|| parse_err(lineno, "label line needs `<index> <name>`"))?;
                let idx = idx
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad label index"))?;
                labels.push((idx, name.to_string()));
            } else {
                comments.push(c.to_string());
            }
            continue;
        }
        let Some((m, n, _)) = header else {
            let mut it = body.split_whitespace();
            let m = header_field(lineno, it.next(), "m")?;
            let n = header_field(lineno, it.next(), "n")?;
            let sym = header_field(lineno, it.next(), "symmetric")?;
            if sym > 1 {
                return Err(parse_err(lineno, "symmetric must be 0 or 1"));
            }
            header = Some((m, n, sym == 1));
            continue;
        };
        if let Some(t) = body.strip_prefix("t=") {
            let t: usize = t
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad snapshot index `{body}`")))?;
            if t != lists.len() {
                return Err(parse_err(
                    lineno,
                    format!("expected t={}, found t={t}", lists.len()),
                ));
            }
            if t >= n {
                return Err(parse_err(lineno, format!("more snapshots than n={n}")));
            }
            lists.push(Vec::new());
            continue;
        }
        let current = lists
            .last_mut()
            .ok_or_else(|| parse_err(lineno, "edge line before the first `t=` line"))?;
        let mut it = body.split_whitespace();
        let mut node = || -> Result<usize> {
            let tok = it
                .next()
                .ok_or_else(|| parse_err(lineno, "edge line needs two node indices"))?;
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad node index `{tok}`")))?;
            if v >= m {
                return Err(parse_err(
                    lineno,
                    format!("node {v} out of range for m={m}"),
                ));
            }
            Ok(v)
        };
        let (i, j) = (node()?, node()?);
        if i == j {
            return Err(parse_err(lineno, format!("self-loop ({i},{i})")));
        }
        current.push((i, j));
    }

    let (m, n, symmetric) =
        header.ok_or_else(|| parse_err(0, "missing `m= n= symmetric=` header"))?;
    if lists.len() != n {
        return Err(parse_err(
            0,
            format!("header declares n={n} snapshots, found {}", lists.len()),
        ));
    }
    let snaps = lists
        .into_iter()
        .map(|l| {
            if symmetric {
                Snapshot::undirected(m, l)
            } else {
                Snapshot::directed(m, l)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut trajectory = Trajectory::build(snaps)?.with_index(index);
    if !labels.is_empty() {
        labels.sort_by_key(|(i, _)| *i);
        if labels.iter().enumerate().any(|(k, (i, _))| k != *i) || labels.len() != m {
            return Err(parse_err(
                0,
                "label lines must name every node 0..m-1 exactly once",
            ));
        }
        trajectory = trajectory.with_labels(labels.into_iter().map(|(_, l)| l).collect())?;
    }
    Ok(TrajectoryFile {
        trajectory,
        comments,
    })
}

pub fn save_trajectory(path: &Path, traj: &Trajectory, comments: &[String]) -> Result<()> {
    atomic_write(path, |w| write_trajectory(w, traj, comments))
}

pub fn load_trajectory(path: &Path) -> Result<TrajectoryFile> {
    read_trajectory(open_input(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roundtrip(t: &Trajectory, comments: &[String]) -> TrajectoryFile {
        let mut buf = Vec::new();
        write_trajectory(&mut buf, t, comments).unwrap();
        read_trajectory(buf.as_slice()).unwrap()
    }

    #[test]
    fn exact_text() {
        let t = Trajectory::from_edge_lists(3, true, vec![vec![(1, 0)], vec![]]).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &t, &["model=white".to_string()]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# model=white\nm=3 n=2 symmetric=1\nt=0\n0 1\nt=1\n"
        );
    }

    #[test]
    fn metadata_survives() {
        let t = Trajectory::from_edge_lists(2, false, vec![vec![(1, 0)]])
            .unwrap()
            .with_index(IndexSemantics::Time {
                resolution: Some(20.0),
            })
            .with_labels(vec!["a b".into(), "c".into()])
            .unwrap();
        let back = roundtrip(&t, &["seed=1".into()]);
        assert_eq!(back.trajectory, t);
        assert_eq!(
            back.trajectory.labels().unwrap(),
            &["a b".to_string(), "c".to_string()]
        );
        assert_eq!(back.trajectory.index(), t.index());
        assert_eq!(back.comments, vec!["seed=1".to_string()]);
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("m=3 n=1 symmetric=1\n0 1\n", 2),
            ("m=3 n=1 symmetric=1\nt=0\n0 3\n", 3),
            ("m=3 n=1 symmetric=1\nt=0\n2 2\n", 3),
            ("m=3 n=2 symmetric=1\nt=0\nt=2\n", 3),
            ("m=3 symmetric=1\n", 1),
        ];
        for (text, line) in cases {
            match read_trajectory(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(read_trajectory("m=3 n=2 symmetric=1\nt=0\n".as_bytes()).is_err());
    }

    fn arb_trajectory() -> impl Strategy<Value = Trajectory> {
        (2usize..7, 1usize..6, any::<bool>()).prop_flat_map(|(m, n, sym)| {
            let pair = (0..m, 0..m).prop_filter("no self-loops", |(i, j)| i != j);
            proptest::collection::vec(proptest::collection::vec(pair, 0..8), n)
                .prop_map(move |lists| Trajectory::from_edge_lists(m, sym, lists).unwrap())
        })
    }

    proptest! {
        #[test]
        fn serialization_roundtrip(t in arb_trajectory()) {
            let back = roundtrip(&t, &[]);
            prop_assert_eq!(back.trajectory, t);
        }
    }
}
