//! Re-runs the fixture corpus: every `NAME.scn` next to a `NAME.expected.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::{output, parser, pretty, run_source};

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureResult {
    pub name: String,
    pub pass: bool,
    /// Canonical print of the script parses back to the same tree.
    pub round_trip: bool,
    /// Two runs gave byte-identical output.
    pub deterministic: bool,
    pub detail: Option<String>,
}

/// Default corpus location, overridable through `DEGLOCI_FIXTURES`.
pub fn default_dir() -> PathBuf {
    std::env::var_os("DEGLOCI_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// Fixture names in sorted order.
pub fn fixture_names(dir: &Path) -> std::io::Result<Vec<String>> {
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|n| n.strip_suffix(".scn")).map(String::from))
        .collect();
    names.sort();
    Ok(names)
}

pub fn run_fixture(dir: &Path, name: &str) -> FixtureResult {
    let mut res = FixtureResult { name: name.to_string(), pass: false, round_trip: false, deterministic: false, detail: None };
    let fail = |mut r: FixtureResult, msg: String| {
        r.detail = Some(msg);
        r
    };
    let src = match fs::read_to_string(dir.join(format!("{}.scn", name))) {
        Ok(s) => s,
        Err(e) => return fail(res, format!("cannot read script: {}", e)),
    };
    let expected: Value = match fs::read_to_string(dir.join(format!("{}.expected.json", name)))
        .map_err(|e| e.to_string())
        .and_then(|s| serde_json::from_str(&s).map_err(|e| e.to_string()))
    {
        Ok(v) => v,
        Err(e) => return fail(res, format!("cannot load expected output: {}", e)),
    };
    let first = match run_source(&src) {
        Ok(r) => r,
        Err(e) => return fail(res, format!("script does not parse: {}", e)),
    };
    let second = run_source(&src).expect("parsed once already");
    let rendered = output::render_json(&first);
    res.deterministic = rendered == output::render_json(&second);
    res.round_trip = match parser::parse(&src) {
        Ok(tree) => parser::parse(&pretty::scenario(&tree)).map(|t| t == tree).unwrap_or(false),
        Err(_) => false,
    };
    let actual = output::report_value(&first);
    if actual != expected {
        let where_ = first_difference(&expected, &actual, "");
        return fail(res, format!("output differs from expected at {}", where_));
    }
    res.pass = res.round_trip && res.deterministic;
    if !res.pass {
        res.detail = Some("not deterministic or does not round-trip".into());
    }
    res
}

fn first_difference(a: &Value, b: &Value, path: &str) -> String {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for k in x.keys().chain(y.keys()) {
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) if u == v => continue,
                    (Some(u), Some(v)) => return first_difference(u, v, &format!("{}.{}", path, k)),
                    _ => return format!("{}.{}", path, k),
                }
            }
            path.to_string()
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                if u != v {
                    return first_difference(u, v, &format!("{}[{}]", path, i));
                }
            }
            path.to_string()
        }
        _ => if path.is_empty() { "<root>".into() } else { path.to_string() },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub fixtures: Vec<FixtureResult>,
}

impl Corpus {
    pub fn all_pass(&self) -> bool {
        !self.fixtures.is_empty() && self.fixtures.iter().all(|f| f.pass)
    }

    pub fn to_json(&self) -> Value {
        let fixtures: Vec<Value> = self
            .fixtures
            .iter()
            .map(|f| {
                json!({
                    "name": f.name,
                    "pass": f.pass,
                    "round_trip": f.round_trip,
                    "deterministic": f.deterministic,
                    "detail": f.detail,
                })
            })
            .collect();
        let passed = self.fixtures.iter().filter(|f| f.pass).count();
        json!({ "fixtures": fixtures, "passed": passed, "failed": self.fixtures.len() - passed })
    }
}

/// Runs every fixture whose name contains `filter`.
pub fn run_corpus(dir: &Path, filter: Option<&str>) -> std::io::Result<Corpus> {
    let fixtures = fixture_names(dir)?
        .into_iter()
        .filter(|n| filter.is_none_or(|f| n.contains(f)))
        .map(|n| run_fixture(dir, &n))
        .collect();
    Ok(Corpus { fixtures })
}
