//! Flag files: a JSON object, `key = value` lines, or a run manifest. Each
//! becomes a subcommand path plus `--key value` tokens spliced in after the
//! subcommand, ahead of (and overridden by) the user's own flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

const TOP_LEVEL: [&str; 4] = ["generate", "correlate", "analyze", "ingest"];
const NESTED: [&str; 2] = ["generate", "analyze"];

#[derive(Debug, Default, PartialEq)]
pub struct FlagFile {
    pub path: Vec<String>,
    pub flags: Vec<(String, Vec<String>)>,
}

pub fn parse_json(text: &str) -> Result<FlagFile> {
    let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
    let Value::Object(mut obj) = value else {
        bail!("JSON config must be an object");
    };
    let path = match obj.remove("subcommand").or_else(|| obj.remove("command")) {
        None => Vec::new(),
        Some(Value::String(s)) => s.split_whitespace().map(str::to_string).collect(),
        Some(Value::Array(a)) => a
            .into_iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .context("command entries must be strings")
            })
            .collect::<Result<_>>()?,
        Some(_) => bail!("`command` must be a string or a list of strings"),
    };
    let params = match obj.remove("params") {
        Some(Value::Object(p)) => p,
        Some(_) => bail!("`params` must be an object"),
        None => obj,
    };
    Ok(FlagFile {
        path,
        flags: flatten(params)?,
    })
}

fn flatten(params: Map<String, Value>) -> Result<Vec<(String, Vec<String>)>> {
    let mut flags = Vec::new();
    for (key, value) in params {
        let values = match value {
            Value::Null | Value::Bool(false) => continue,
            Value::Bool(true) => Vec::new(),
            Value::Number(n) => vec![n.to_string()],
            Value::String(s) => vec![s],
            Value::Array(items) => {
                if items.is_empty() {
                    continue;
                }
                items
                    .into_iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s),
                        Value::Number(n) => Ok(n.to_string()),
                        other => bail!("unsupported list entry {other} for `{key}`"),
                    })
                    .collect::<Result<_>>()?
            }
            Value::Object(_) => bail!("nested objects are not flags (`{key}`)"),
        };
        flags.push((key, values));
    }
    Ok(flags)
}

pub fn parse_key_values(text: &str) -> Result<FlagFile> {
    let mut file = FlagFile::default();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        if key.is_empty() {
            bail!("config line {}: missing key", k + 1);
        }
        match (key, value) {
            ("command" | "subcommand", Some(v)) => {
                file.path = v.split_whitespace().map(str::to_string).collect()
            }
            (_, Some("true")) | (_, None) => file.flags.push((key.to_string(), Vec::new())),
            (_, Some("false")) => {}
            (_, Some(v)) => file.flags.push((key.to_string(), vec![v.to_string()])),
        }
    }
    Ok(file)
}

pub fn load(path: &Path) -> Result<FlagFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_key_values(&text)
    }
}

fn flag_name(key: &str) -> String {
    format!("--{}", key.trim_start_matches('-').replace('_', "-"))
}

/// Pulls `--config FILE` out of `argv` and merges the file's flags in.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>> {
    let mut config = None;
    let mut args = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().context("--config needs a file")?);
        } else if let Some(v) = a.strip_prefix("--config=") {
            config = Some(v.to_string());
        } else {
            args.push(a);
        }
    }
    let Some(config) = config else {
        return Ok(args);
    };
    let file = load(Path::new(&config))?;
    Ok(splice(args, file))
}

pub fn splice(args: Vec<String>, file: FlagFile) -> Vec<String> {
    let (prog, args) = match args.split_first() {
        Some((p, a)) => (vec![p.clone()], a.to_vec()),
        None => (Vec::new(), Vec::new()),
    };
    let (lead, user_path, rest) = match args.iter().position(|a| TOP_LEVEL.contains(&a.as_str())) {
        Some(k) => {
            let nested = NESTED.contains(&args[k].as_str())
                && args.get(k + 1).is_some_and(|a| !a.starts_with('-'));
            let end = k + 1 + usize::from(nested);
            (&args[..k], &args[k..end], &args[end..])
        }
        None => (&args[..0], &args[..0], &args[..]),
    };
    let user_has = |flag: &str| {
        let prefix = format!("{flag}=");
        lead.iter()
            .chain(rest)
            .any(|a| a == flag || a.starts_with(&prefix))
    };

    let mut out = prog;
    out.extend_from_slice(lead);
    if user_path.is_empty() {
        out.extend(file.path);
    } else {
        out.extend_from_slice(user_path);
    }
    for (key, values) in file.flags {
        let flag = flag_name(&key);
        if user_has(&flag) {
            continue;
        }
        if values.is_empty() {
            out.push(flag.clone());
        }
        for v in values {
            out.push(flag.clone());
            out.push(v);
        }
    }
    out.extend_from_slice(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn key_value_file() {
        let f =
            parse_key_values("# comment\ncommand = generate white\nm = 10\ndirected\nraw=false\n")
                .unwrap();
        assert_eq!(f.path, s(&["generate", "white"]));
        assert_eq!(
            f.flags,
            vec![("m".into(), s(&["10"])), ("directed".into(), vec![])]
        );
    }

    #[test]
    fn json_and_manifest() {
        let f =
            parse_json(r#"{"command": "correlate", "tau_max": 20, "matrices": [10, 30]}"#).unwrap();
        assert_eq!(f.path, s(&["correlate"]));
        assert_eq!(
            f.flags,
            vec![
                ("matrices".into(), s(&["10", "30"])),
                ("tau_max".into(), s(&["20"]))
            ]
        );
        let m = parse_json(
            r#"{"subcommand": "generate white", "params": {"p": 0.2, "out": null}, "seed": 3}"#,
        )
        .unwrap();
        assert_eq!(m.path, s(&["generate", "white"]));
        assert_eq!(m.flags, vec![("p".into(), s(&["0.2"]))]);
        assert!(parse_json("[1]").is_err());
    }

    #[test]
    fn user_flags_win_and_path_is_kept() {
        let file = FlagFile {
            path: s(&["generate", "white"]),
            flags: vec![("m".into(), s(&["10"])), ("p".into(), s(&["0.2"]))],
        };
        let out = splice(s(&["netcorr", "--seed", "4", "--p", "0.5"]), file);
        assert_eq!(
            out,
            s(&["netcorr", "generate", "white", "--m", "10", "--seed", "4", "--p", "0.5"])
        );

        let file = FlagFile {
            path: s(&["generate", "white"]),
            flags: vec![("n".into(), s(&["5"]))],
        };
        let out = splice(s(&["netcorr", "generate", "periodic", "--t", "3"]), file);
        assert_eq!(
            out,
            s(&["netcorr", "generate", "periodic", "--n", "5", "--t", "3"])
        );
    }
}
