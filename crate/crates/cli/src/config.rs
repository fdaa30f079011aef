//! Flat `key=value` config files merged underneath the command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Command;

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse(text: &str, origin: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{origin}:{}: expected `key=value`", i + 1);
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            bail!("{origin}:{}: empty key", i + 1);
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text, &path.display().to_string())
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

fn longs(cmd: &Command) -> Vec<String> {
    cmd.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect()
}

fn takes_value(cmd: &Command, long: &str) -> bool {
    cmd.get_arguments()
        .find(|a| a.get_long() == Some(long))
        .is_some_and(|a| a.get_action().takes_values())
}

fn given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag.as_str() || s.starts_with(&format!("{flag}="))
    })
}

/// Inserts config entries into `args` for every flag not given explicitly.
/// Keys the selected subcommand does not know are skipped.
pub fn merge_args(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let entries = load(Path::new(&path))?;

    // walk down the subcommand path to find where its flags may start
    let mut current = cmd.clone();
    let mut insert_at = 1;
    let globals = longs(&current);
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy().to_string();
        if let Some(flag) = s.strip_prefix("--") {
            if !flag.contains('=') && takes_value(&current, flag) {
                i += 1;
            }
        } else if let Some(sub) = current.find_subcommand(&s).cloned() {
            current = sub;
            insert_at = i + 1;
        } else {
            break;
        }
        i += 1;
    }
    let local = longs(&current);

    let mut head: Vec<OsString> = Vec::new();
    let mut tail: Vec<OsString> = Vec::new();
    for (k, v) in entries {
        if k == "config" || given(&args, &k) {
            continue;
        }
        let flag = OsString::from(format!("--{k}={v}"));
        if local.contains(&k) {
            tail.push(flag);
        } else if globals.contains(&k) {
            head.push(flag);
        } else {
            log::warn!("config key `{k}` does not apply to this command; ignored");
        }
    }
    let mut out = Vec::with_capacity(args.len() + head.len() + tail.len());
    out.push(args[0].clone());
    out.extend(head);
    out.extend(args[1..insert_at].iter().cloned());
    out.extend(tail);
    out.extend(args[insert_at..].iter().cloned());
    Ok(out)
}
