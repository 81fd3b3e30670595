//! Flat `key = value` config files. Keys are CLI flag names without the
//! leading dashes; every entry is turned into flag arguments placed ahead of
//! the user's own, so explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use clap::{Arg, ArgAction, Command};

use crate::Failure;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", idx + 1));
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", idx + 1));
        }
        let value = v.trim().trim_matches('"').to_string();
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(format!(
                "line {}: key `{key}` already set on line {}",
                idx + 1,
                prev.line
            ));
        }
        out.push(Entry {
            key,
            value,
            line: idx + 1,
        });
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Index of the subcommand token, skipping values of global flags.
fn subcommand_position(cmd: &Command, args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if let Some(name) = s.strip_prefix("--") {
            if !name.contains('=') && find_long(cmd.get_arguments(), name).is_some_and(takes_value) {
                i += 1;
            }
        } else if cmd.find_subcommand(&*s).is_some() {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn find_long<'a>(mut args: impl Iterator<Item = &'a Arg>, name: &str) -> Option<&'a Arg> {
    args.find(|a| a.get_long() == Some(name))
}

fn takes_value(a: &Arg) -> bool {
    a.get_action().takes_values()
}

fn as_flags(arg: &Arg, e: &Entry) -> Result<Vec<OsString>, Failure> {
    let flag = OsString::from(format!("--{}", e.key));
    if takes_value(arg) {
        return Ok(vec![flag, e.value.clone().into()]);
    }
    match (arg.get_action(), e.value.as_str()) {
        (ArgAction::SetTrue, "true" | "yes" | "1") => Ok(vec![flag]),
        (ArgAction::SetTrue, "false" | "no" | "0") => Ok(vec![]),
        _ => Err(Failure::InputFile(format!(
            "config line {}: `{}` expects true or false, got `{}`",
            e.line, e.key, e.value
        ))),
    }
}

/// Splice config-file entries into the argument list.
pub fn inject(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::InputFile(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse(&text).map_err(|m| Failure::InputFile(format!("config {}: {m}", path.display())))?;
    let sub_pos = subcommand_position(cmd, &args);
    let sub = sub_pos.and_then(|i| cmd.find_subcommand(&*args[i].to_string_lossy()));

    let mut global = Vec::new();
    let mut local = Vec::new();
    for e in &entries {
        if e.key == "config" {
            return Err(Failure::InputFile(format!(
                "config line {}: nested config files are not supported",
                e.line
            )));
        }
        if let Some(arg) = find_long(cmd.get_arguments(), &e.key) {
            global.extend(as_flags(arg, e)?);
        } else if let Some(arg) = sub.and_then(|s| find_long(s.get_arguments(), &e.key)) {
            local.extend(as_flags(arg, e)?);
        } else if !cmd
            .get_subcommands()
            .any(|s| find_long(s.get_arguments(), &e.key).is_some())
        {
            return Err(Failure::InputFile(format!(
                "config line {}: unknown key `{}`",
                e.line, e.key
            )));
        }
    }

    let mut out = vec![args[0].clone()];
    out.extend(global);
    match sub_pos {
        Some(i) => {
            out.extend_from_slice(&args[1..=i]);
            out.extend(local);
            out.extend_from_slice(&args[i + 1..]);
        }
        None => out.extend_from_slice(&args[1..]),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalizes_keys() {
        let e = parse("# run\nz_min = 3\n--points=4\n\nout = \"a b.csv\"\n").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!((e[0].key.as_str(), e[0].value.as_str(), e[0].line), ("z-min", "3", 2));
        assert_eq!(e[1].key, "points");
        assert_eq!(e[2].value, "a b.csv");
    }

    #[test]
    fn rejects_duplicates_and_missing_equals() {
        assert!(parse("a = 1\na = 2").unwrap_err().contains("line 2"));
        assert!(parse("a 1").is_err());
    }
}
