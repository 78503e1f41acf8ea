//! Manifest runner: one instance path per line, optionally followed by
//! `expect YES` or `expect NO`. Relative paths are taken from the manifest's
//! directory; `#` and `c` start comment lines.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rainbow_core::exact::solve_subset_rainbow;
use rainbow_core::verify::verify_requests;
use rainbow_core::{Config, Error, Result};

use crate::cmd::{load_instance, read, EXIT_NO, EXIT_YES};
use crate::out::{field, Reporter};

#[derive(Debug, PartialEq, Eq)]
pub struct Entry {
    pub path: PathBuf,
    pub expect: Option<bool>,
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let expect = match toks.as_slice() {
            [] => continue,
            [first, ..] if first.starts_with('#') || *first == "c" => continue,
            [_] => None,
            [_, "expect", "YES"] => Some(true),
            [_, "expect", "NO"] => Some(false),
            _ => return Err(Error::parse(i + 1, "expected `<path> [expect YES|NO]`")),
        };
        out.push(Entry { path: base.join(toks[0]), expect });
    }
    Ok(out)
}

struct Row {
    name: String,
    verdict: String,
    satisfied: usize,
    requests: usize,
    millis: f64,
    matches: Option<bool>,
}

fn solve(path: &Path, cfg: &Config) -> Result<(bool, usize, usize)> {
    let inst = load_instance(path)?;
    let req = inst.request_pairs();
    let found = solve_subset_rainbow(&inst, cfg)?;
    let sat = found.as_ref().map_or(0, |c| verify_requests(&inst.graph, c, &req, inst.k).len());
    Ok((found.is_some(), sat, req.len()))
}

pub fn run(manifest: &Path, no_time: bool, cfg: &Config, rep: &Reporter) -> Result<u8> {
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&read(manifest)?, base)?;
    let mut rows = Vec::with_capacity(entries.len());
    for e in &entries {
        let start = Instant::now();
        let res = solve(&e.path, cfg);
        let millis = start.elapsed().as_secs_f64() * 1e3;
        let name = e.path.strip_prefix(base).unwrap_or(&e.path).display().to_string();
        let row = match res {
            Ok((yes, satisfied, requests)) => Row {
                name,
                verdict: if yes { "YES" } else { "NO" }.into(),
                satisfied,
                requests,
                millis,
                matches: e.expect.map(|x| x == yes),
            },
            Err(err) => {
                let kind = match err {
                    Error::Resource(_) => "RESOURCE",
                    Error::Parse { .. } | Error::Usage(_) => "BAD-INPUT",
                    _ => "ERROR",
                };
                Row { name, verdict: kind.into(), satisfied: 0, requests: 0, millis, matches: e.expect.map(|_| false) }
            }
        };
        rows.push(row);
    }
    let ok = rows.iter().all(|r| r.matches != Some(false) && (r.verdict == "YES" || r.verdict == "NO"));
    if rep.is_kv() {
        for r in &rows {
            let mut f = vec![
                field("instance", &r.name),
                field("verdict", &r.verdict),
                field("satisfied", r.satisfied),
                field("requests", r.requests),
            ];
            if !no_time {
                f.push(field("ms", format!("{:.3}", r.millis)));
            }
            if let Some(m) = r.matches {
                f.push(field("expected", m));
            }
            rep.record(&f);
        }
    } else {
        let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max("instance".len());
        let mut head = format!("{:<w$}  {:<9}  {:>9}  {:>8}", "instance", "verdict", "satisfied", "requests");
        if !no_time {
            head.push_str(&format!("  {:>10}", "ms"));
        }
        head.push_str("  expect");
        rep.raw(&head);
        for r in &rows {
            let mut line =
                format!("{:<w$}  {:<9}  {:>9}  {:>8}", r.name, r.verdict, r.satisfied, r.requests);
            if !no_time {
                line.push_str(&format!("  {:>10.3}", r.millis));
            }
            line.push_str(match r.matches {
                None => "  -",
                Some(true) => "  ok",
                Some(false) => "  MISMATCH",
            });
            rep.raw(&line);
        }
    }
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let m = parse_manifest("# x\na.rbw expect YES\n\nb.rbw\nc.rbw expect NO\n", Path::new("d")).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m[0], Entry { path: PathBuf::from("d/a.rbw"), expect: Some(true) });
        assert_eq!(m[1].expect, None);
        assert_eq!(m[2].expect, Some(false));
        assert!(parse_manifest("a expect maybe\n", Path::new(".")).is_err());
    }
}
