use std::path::{Path, PathBuf};
use std::process::Command;

pub fn cdc() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cdc"));
    c.env_remove("CDC_SEED");
    c
}

/// Stdout, then stderr if any, then the exit code.
pub fn transcript(args: &[String]) -> String {
    let out = cdc().args(args).output().expect("cdc runs");
    let mut t = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let err = String::from_utf8(out.stderr).expect("utf-8 stderr");
    if !err.is_empty() {
        t.push_str("--- stderr\n");
        t.push_str(&err);
    }
    t.push_str(&format!("[exit {}]\n", out.status.code().unwrap_or(-1)));
    t
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Every `.args` case with its expected transcript, sorted by name.
pub fn golden_cases() -> Vec<(String, Vec<String>, PathBuf)> {
    let mut cases: Vec<_> = std::fs::read_dir(golden_dir())
        .expect("golden directory")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "args").then_some(path)
        })
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&path).unwrap();
            let args = parse_args(&text);
            (name, args, path.with_extension("out"))
        })
        .collect();
    cases.sort();
    cases
}

/// One argument per line; a line ending in `\` continues onto the next,
/// keeping the newline.
fn parse_args(text: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut cur: Option<String> = None;
    for line in text.lines() {
        let (body, more) = match line.strip_suffix('\\') {
            Some(b) => (b, true),
            None => (line, false),
        };
        let arg = match cur.take() {
            Some(mut prev) => {
                prev.push('\n');
                prev.push_str(body);
                prev
            }
            None => body.to_string(),
        };
        if more {
            cur = Some(arg);
        } else {
            args.push(arg);
        }
    }
    args
}

/// Mismatching case names; `CDC_BLESS=1` rewrites the expectations instead.
pub fn golden_mismatches() -> Vec<String> {
    let bless = std::env::var_os("CDC_BLESS").is_some();
    let mut bad = Vec::new();
    for (name, args, out) in golden_cases() {
        let got = transcript(&args);
        if bless {
            std::fs::write(&out, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&out).unwrap_or_default();
        if got != want {
            bad.push(name);
        }
    }
    bad
}
