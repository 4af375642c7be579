//! Fixture files compiled into the binary and the corpus of expected
//! command outputs run by `gogtwist fixtures`.

use clap::Parser;
use serde::Deserialize;

use crate::{run, Cli, CmdResult, Outcome};

const BUNDLED: &[(&str, &str)] = &[
    ("loop.json", include_str!("../fixtures/loop.json")),
    ("loop_zero.json", include_str!("../fixtures/loop_zero.json")),
    ("loop_gog.json", include_str!("../fixtures/loop_gog.json")),
    ("case1.json", include_str!("../fixtures/case1.json")),
    ("case2.json", include_str!("../fixtures/case2.json")),
    ("corpus.json", include_str!("../fixtures/corpus.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Case {
    name: String,
    args: Vec<String>,
    code: u8,
    #[serde(default)]
    stdout: Option<String>,
    #[serde(default)]
    contains: Vec<String>,
    /// How the expected value was obtained.
    #[allow(dead_code)]
    why: String,
}

fn check(case: &Case) -> Result<(), String> {
    let cli = Cli::try_parse_from(std::iter::once("gogtwist".to_string()).chain(case.args.iter().cloned())).map_err(|e| e.to_string())?;
    let out = match run(cli) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: format!("error: {e}"), code: 1 },
    };
    if out.code != case.code {
        return Err(format!("exit code {} (expected {}): {}", out.code, case.code, out.stdout.trim()));
    }
    if let Some(s) = &case.stdout {
        if &out.stdout != s {
            return Err(format!("stdout {:?}", out.stdout));
        }
    }
    for s in &case.contains {
        if !out.stdout.contains(s.as_str()) {
            return Err(format!("stdout lacks {s:?}"));
        }
    }
    Ok(())
}

pub fn run_corpus() -> CmdResult {
    let cases: Vec<Case> = crate::docs::parse_doc(bundled("corpus.json").expect("corpus")).map_err(|e| format!("corpus.json: {e}"))?;
    let width = cases.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    let mut failed = 0;
    for c in &cases {
        match check(c) {
            Ok(()) => out.push_str(&format!("{:width$}  pass\n", c.name)),
            Err(e) => {
                failed += 1;
                out.push_str(&format!("{:width$}  FAIL  {e}\n", c.name));
            }
        }
    }
    out.push_str(&format!("{} of {} fixtures passed\n", cases.len() - failed, cases.len()));
    Ok(Outcome {
        stdout: out,
        code: if failed == 0 { 0 } else { 1 },
    })
}
