//! `dmono verify`: rechecks a target file (or every `.json` file in a
//! directory) and prints one PASS/FAIL line per check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::Value;

use dmono::bounds::{product_bound, within_amgm_bound};
use dmono::families::{self, Family, FamilySpec};
use dmono::format::{load_function, parse_function};
use dmono::{
    learn, monotone_degree, strict_decompose, BoolFn, ExhaustiveEq, Function, MembershipOracle,
    XorHypothesis,
};

use crate::{bound_sizes, implied_degree, Ctx, Failure};

struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("{tag} {name}: {detail}"));
    }
}

/// Loads `--against`: a function file, or a learn record whose
/// `hypothesis` field is one.
fn load_against(path: &Path, max_n: u32) -> Result<Function, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if let Ok(Value::Object(record)) = serde_json::from_str::<Value>(first) {
        if let Some(h) = record.get("hypothesis") {
            return Ok(parse_function(&h.to_string(), base, max_n)?.function);
        }
    }
    Ok(parse_function(&text, base, max_n)?.function)
}

fn family_checks(report: &mut Report, spec: &FamilySpec, h: &XorHypothesis) -> Result<(), Failure> {
    match spec.family {
        Family::Tightness => {
            let (d, t) = (spec.d, spec.t);
            let expected = (t as u128 + 1).pow(d as u32) - 1;
            report.check(
                "tightness size",
                h.size() as u128 == expected,
                format!("size_xorM = {}, (t+1)^d-1 = {expected}", h.size()),
            );
            let prefix = families::prefix_levels(d, t)?;
            report.check(
                "tightness levels",
                *h == prefix,
                "levels are the prefix joins".into(),
            );
        }
        Family::Takimoto => {
            let floor: u128 = spec.widths.iter().map(|&w| w as u128).product();
            report.check(
                "takimoto size",
                h.size() as u128 >= floor,
                format!("size_xorM = {} >= {floor}", h.size()),
            );
            let witnesses = families::witness_indices(&spec.widths);
            let mut bad = None;
            for idx in &witnesses {
                if !families::chain_witness_check(&spec.widths, h, idx)? {
                    bad = Some(idx.clone());
                    break;
                }
            }
            let detail = match &bad {
                None => format!("{} chain witnesses", witnesses.len()),
                Some(idx) => format!("witness {idx:?} missing"),
            };
            report.check("takimoto witnesses", bad.is_none(), detail);
        }
        Family::Random => {}
    }
    Ok(())
}

fn verify_file(ctx: &Ctx, path: &Path, against: Option<&Function>) -> Result<Report, Failure> {
    let loaded = load_function(path, ctx.max_n)?;
    let f = &loaded.function;
    let lattice = f.lattice().clone();
    let dense = f.to_dense();
    let mut report = Report {
        lines: Vec::new(),
        failed: 0,
    };

    let h = strict_decompose(f, lattice.len()).map_err(Failure::input)?;
    report.check(
        "roundtrip",
        h.to_dense() == dense,
        format!("{} levels xor back to the target", h.levels().len()),
    );
    report.check(
        "strict",
        h.is_strict(),
        format!("level sizes {:?}", h.level_sizes()),
    );

    let degree = monotone_degree(f);
    let d = implied_degree(f);
    report.check(
        "degree",
        degree == h.levels().len() && degree <= d,
        format!("degree {degree}, representation allows {d}"),
    );

    let sizes = bound_sizes(f)?;
    if let Function::Composed(_) = f {
        let total: usize = sizes.iter().sum();
        report.check(
            "size bound",
            within_amgm_bound(h.size() as u128, total, sizes.len())
                && h.size() as u128 <= product_bound(&sizes),
            format!(
                "size_xorM = {} <= {} <= (s/d+1)^d-1 with s = {total}, d = {}",
                h.size(),
                product_bound(&sizes),
                sizes.len()
            ),
        );
    }

    let mut mq = MembershipOracle::for_target(f);
    let mut eq = ExhaustiveEq::new(f);
    match learn(&lattice, d, &mut mq, &mut eq) {
        Ok(out) => {
            let stats = out.stats.with_bounds(&sizes, lattice.sigma());
            report.check(
                "learner exact",
                out.hypothesis.to_dense() == dense,
                format!("d = {d}, {} counterexamples", stats.counterexamples),
            );
            report.check(
                "learner bounds",
                stats.within_bounds(),
                format!(
                    "counterexamples {} <= {}, mq {} <= {}",
                    stats.counterexamples,
                    stats.eq_bound.unwrap_or_default(),
                    stats.mq_used,
                    stats.mq_bound.unwrap_or_default()
                ),
            );
        }
        Err(e) => report.check("learner exact", false, e.to_string()),
    }

    if let Some(spec) = &loaded.family {
        family_checks(&mut report, spec, &h)?;
    }

    if let Some(other) = against {
        let same_lattice = other.lattice() == f.lattice();
        let disagree = if same_lattice {
            other.to_dense().xor(&dense).ones().count()
        } else {
            0
        };
        report.check(
            "against",
            same_lattice && disagree == 0,
            if same_lattice {
                format!("{disagree} disagreeing points")
            } else {
                "different lattices".into()
            },
        );
    }
    Ok(report)
}

fn targets(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run(ctx: &Ctx, path: &Path, against: Option<&Path>) -> Result<ExitCode, Failure> {
    let against = against.map(|p| load_against(p, ctx.max_n)).transpose()?;
    let files = targets(path)?;
    let many = files.len() > 1 || path.is_dir();
    let mut out = String::new();
    let mut failed = 0;
    for file in &files {
        if many {
            out.push_str(&format!("== {}\n", file.display()));
        }
        let report = verify_file(ctx, file, against.as_ref())?;
        failed += report.failed;
        for line in report.lines {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str(&format!(
        "{} file(s), {failed} failed check(s)\n",
        files.len()
    ));
    ctx.emit(&out)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(crate::EXIT_INPUT)
    })
}
