//! Fixture corpus. Each fixture carries `#! key value` claims that are
//! recomputed and compared verbatim.

use std::fs;
use std::path::Path;

use anderson::algebra;
use anderson::format::parse_motive;
use anderson::local;
use anderson::morphisms;
use anderson::motive::Motive;
use anderson::{Error, Result};
use serde_json::{json, Value};

const BUILTIN: &[(&str, &str)] = &[
    ("carlitz", include_str!("../fixtures/carlitz.motive")),
    ("drinfeld", include_str!("../fixtures/drinfeld.motive")),
    ("unipotent", include_str!("../fixtures/unipotent.motive")),
    ("unipotent_f27", include_str!("../fixtures/unipotent_f27.motive")),
    ("quartic_a", include_str!("../fixtures/quartic_a.motive")),
    ("quartic_b", include_str!("../fixtures/quartic_b.motive")),
    ("quartic_c", include_str!("../fixtures/quartic_c.motive")),
    ("swap_d1", include_str!("../fixtures/swap_d1.motive")),
    ("swap_d1_e2", include_str!("../fixtures/swap_d1_e2.motive")),
    ("swap_d2", include_str!("../fixtures/swap_d2.motive")),
    ("swap_d2_e2", include_str!("../fixtures/swap_d2_e2.motive")),
    ("swap_d3", include_str!("../fixtures/swap_d3.motive")),
    ("swap_d3_e2", include_str!("../fixtures/swap_d3_e2.motive")),
    ("swap_q2_d2", include_str!("../fixtures/swap_q2_d2.motive")),
];

pub struct Check {
    pub fixture: String,
    pub key: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                if c.passed() {
                    format!("PASS {} {} = {}", c.fixture, c.key, c.actual)
                } else {
                    format!("FAIL {} {}: expected {}, got {}", c.fixture, c.key, c.expected, c.actual)
                }
            })
            .collect();
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        lines.push(format!("{passed}/{} claims passed", self.checks.len()));
        lines.join("\n")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| json!({
                "fixture": c.fixture, "key": c.key, "expected": c.expected,
                "actual": c.actual, "pass": c.passed(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn invariants(m: &Motive, at_inf: bool) -> Result<String> {
    let rep = algebra::hasse_invariants(m)?;
    Ok(join(rep.components.iter().flat_map(|c| {
        let v = if at_inf { &c.at_infinity } else { &c.at_char };
        v.iter().map(|l| l.inv).collect::<Vec<_>>()
    })))
}

fn evaluate(m: &Motive, key: &str) -> Result<String> {
    Ok(match key {
        "rank" => m.rank().to_string(),
        "dim" => m.dim().to_string(),
        "weight" => m.weight().to_string(),
        "chi" => m.chi()?.to_string(),
        "mu" => m.mu()?.to_string(),
        "semisimple" => m.is_semisimple()?.to_string(),
        "ss_degree" => m.semisimplification_degree()?.to_string(),
        "end_rank" => morphisms::solve_hom(m, m)?.rank.to_string(),
        "end_dim" => algebra::hasse_invariants(m)?.dim.to_string(),
        "inv_inf" => invariants(m, true)?,
        "inv_char" => invariants(m, false)?,
        "simple" => algebra::is_simple(m)?.to_string(),
        "chain" => {
            let c = local::infinity_filtration(m, local::default_precision(m))?;
            format!("{} {} {}", c.k, c.l, join(&c.coker_dims))
        }
        _ => return Err(Error::Invalid(format!("unknown claim `{key}`"))),
    })
}

fn check_fixture(name: &str, text: &str, out: &mut Vec<Check>) {
    let m = parse_motive(text);
    for line in text.lines() {
        let Some(claim) = line.strip_prefix("#!") else { continue };
        let (key, expected) = claim.trim().split_once(char::is_whitespace).unwrap_or((claim.trim(), ""));
        let actual = match &m {
            Ok(m) => evaluate(m, key).unwrap_or_else(|e| format!("error: {e}")),
            Err(e) => format!("error: {e}"),
        };
        out.push(Check {
            fixture: name.to_string(),
            key: key.to_string(),
            expected: expected.trim().to_string(),
            actual,
        });
    }
}

pub fn run(dir: Option<&Path>) -> Result<Report> {
    let mut checks = Vec::new();
    match dir {
        None => {
            for (name, text) in BUILTIN {
                check_fixture(name, text, &mut checks);
            }
        }
        Some(d) => {
            let mut paths: Vec<_> = fs::read_dir(d)
                .map_err(|e| Error::Invalid(format!("{}: {e}", d.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "motive"))
                .collect();
            paths.sort();
            for p in paths {
                let text = fs::read_to_string(&p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
                let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                check_fixture(&name, &text, &mut checks);
            }
        }
    }
    Ok(Report { checks })
}
