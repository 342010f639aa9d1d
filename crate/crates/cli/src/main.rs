use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heatlie::derivations::DerivationTable;
use heatlie::fixtures::{golden_all, Finding, FixtureSet};
use heatlie::suite::{run_suite, SuiteResult};
use heatlie::verify::{combine, express_in_l_basis};
use heatlie::{build_all_q, build_q, GenusContext, JsonForm};
use serde_json::{json, Value};

/// Schrödinger operators, polynomial Lie algebras and their derivations for
/// hyperelliptic sigma functions.
#[derive(Parser)]
#[command(name = "heatlie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit L_2k, H_2k and Q_2k.
    Gen(Common),
    /// Run the verification suite.
    Verify(Common),
    /// Emit [Q_2i, Q_2j] and its expansion over the Q basis.
    Bracket {
        #[command(flatten)]
        common: Common,
        i: i64,
        j: i64,
    },
    /// Emit the derivations Lcal_2k and the right-hand sides w_2k,j.
    Derive(Common),
    /// Compare the transcribed tables with the generated operators.
    Fixtures(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_parser = parse_genus)]
    genus: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Restrict to these k (comma separated, each in 0..2g-1).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<i64>>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read tables from DIR/g<genus>/ instead of the built-in copies.
    #[arg(long, value_name = "DIR")]
    fixtures_dir: Option<PathBuf>,
}

fn parse_genus(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(g) if g >= 1 => Ok(g),
        _ => Err("genus must be a positive integer".into()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Error(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

/// The emitted document and whether every requested check passed.
struct Output {
    doc: String,
    ok: bool,
}

impl Common {
    fn ctx(&self) -> Result<GenusContext, Failure> {
        GenusContext::new(self.genus).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn ks(&self, ctx: &GenusContext) -> Result<Vec<i64>, Failure> {
        let n = ctx.rank() as i64;
        match &self.only {
            None => Ok((0..n).collect()),
            Some(ks) => {
                if let Some(k) = ks.iter().find(|k| !(0..n).contains(*k)) {
                    return Err(Failure::Usage(format!("k = {k} is out of range 0..{} for genus {}", n - 1, self.genus)));
                }
                let mut ks = ks.clone();
                ks.sort_unstable();
                ks.dedup();
                Ok(ks)
            }
        }
    }

    fn no_selection(&self, verb: &str) -> Result<(), Failure> {
        if self.only.is_some() {
            return Err(Failure::Usage(format!("--only is not supported by `{verb}`")));
        }
        Ok(())
    }

    fn fixture_set(&self) -> Result<Option<FixtureSet>, Failure> {
        let g = self.genus as u32;
        match &self.fixtures_dir {
            Some(dir) => {
                if !dir.is_dir() {
                    return Err(Failure::Usage(format!("fixtures directory {} does not exist", dir.display())));
                }
                let set = FixtureSet::from_dir(dir, g)?;
                Ok((!set.is_empty()).then_some(set))
            }
            None => FixtureSet::embedded(g).transpose().map_err(Failure::from),
        }
    }
}

fn line(out: &mut String, s: impl AsRef<str>) {
    out.push_str(s.as_ref());
    out.push('\n');
}

fn json_line(out: &mut String, v: Value) {
    line(out, serde_json::to_string(&v).expect("serialisable"));
}

fn gen(c: &Common) -> Result<Output, Failure> {
    let ctx = c.ctx()?;
    let mut doc = String::new();
    for k in c.ks(&ctx)? {
        let q = build_q(&ctx, k)?;
        let w = 2 * k;
        match c.format {
            Format::Text => {
                line(&mut doc, format!("L_{w} = {}", q.l_part.render()));
                line(&mut doc, format!("H_{w} = {}", q.h_part.render()));
                line(&mut doc, format!("Q_{w} = {}", q.render()));
            }
            Format::Json => json_line(&mut doc, json!({"type": "operator", "name": format!("Q_{w}"), "k": k, "operator": q.to_json()})),
        }
    }
    Ok(Output { doc, ok: true })
}

fn report(format: Format, suites: &[SuiteResult], findings: &[Finding]) -> Output {
    let mut doc = String::new();
    let mut ok = true;
    for SuiteResult { name: suite, records } in suites {
        for r in records {
            match format {
                Format::Text => line(&mut doc, r.text_line()),
                Format::Json => {
                    let mut v = json!({"type": "check", "suite": suite});
                    if let (Value::Object(m), Value::Object(r)) = (&mut v, serde_json::to_value(r).expect("serialisable")) {
                        m.extend(r);
                    }
                    json_line(&mut doc, v);
                }
            }
        }
    }
    for f in findings {
        match format {
            Format::Text => {
                let kind = serde_json::to_value(f.kind).expect("serialisable");
                line(&mut doc, format!("finding {} g={} {}: {}", kind.as_str().unwrap_or("?"), f.genus, f.subject, f.evidence));
            }
            Format::Json => {
                let mut v = serde_json::to_value(f).expect("serialisable");
                if let Value::Object(m) = &mut v {
                    m.insert("type".into(), json!("finding"));
                }
                json_line(&mut doc, v);
            }
        }
    }
    for SuiteResult { name: suite, records } in suites {
        let passed = records.iter().filter(|r| r.passed).count();
        let failed = records.len() - passed;
        ok &= failed == 0;
        let status = if failed == 0 { "pass" } else { "fail" };
        match format {
            Format::Text => line(&mut doc, format!("{suite}: {status} ({passed}/{})", records.len())),
            Format::Json => json_line(
                &mut doc,
                json!({"type": "summary", "suite": suite, "status": status, "passed": passed, "failed": failed}),
            ),
        }
    }
    Output { doc, ok }
}

fn verify(c: &Common) -> Result<Output, Failure> {
    c.no_selection("verify")?;
    let ctx = c.ctx()?;
    let tables = c.fixture_set()?;
    let r = run_suite(&ctx, tables.as_ref())?;
    Ok(report(c.format, &r.suites, &r.findings))
}

fn fixtures(c: &Common) -> Result<Output, Failure> {
    c.no_selection("fixtures")?;
    let ctx = c.ctx()?;
    let set = c.fixture_set()?.ok_or_else(|| Failure::Usage(format!("no tables for genus {}", c.genus)))?;
    let golden = golden_all(&ctx, &set)?;
    Ok(report(c.format, &[SuiteResult { name: "golden", records: golden.records }], &golden.findings))
}

fn bracket(c: &Common, i: i64, j: i64) -> Result<Output, Failure> {
    c.no_selection("bracket")?;
    let ctx = c.ctx()?;
    let n = ctx.rank() as i64;
    for k in [i, j] {
        if !(0..n).contains(&k) {
            return Err(Failure::Usage(format!("index {k} is out of range 0..{} for genus {}", n - 1, c.genus)));
        }
    }
    let qs = build_all_q(&ctx)?;
    let (qi, qj) = (&qs[i as usize], &qs[j as usize]);
    let comm = qi.commutator(qj)?;
    let coeffs = express_in_l_basis(&ctx, &comm.l_part)?;
    let ok = combine(&qs, &coeffs, comm.weight)? == comm;
    let (wi, wj) = (2 * i, 2 * j);
    let mut doc = String::new();
    match c.format {
        Format::Text => {
            line(&mut doc, format!("[Q_{wi}, Q_{wj}] = {}", comm.render()));
            let mut expansion = String::new();
            for (k, p) in coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                let r = p.render();
                let body = if p.len() == 1 { r } else { format!("({r})") };
                match (expansion.is_empty(), body.strip_prefix('-')) {
                    (true, _) => expansion.push_str(&body),
                    (false, Some(neg)) => expansion.push_str(&format!(" - {}", neg.trim_start())),
                    (false, None) => expansion.push_str(&format!(" + {body}")),
                }
                let _ = write!(expansion, " Q_{}", 2 * k);
            }
            if expansion.is_empty() {
                expansion.push('0');
            }
            line(&mut doc, format!("[Q_{wi}, Q_{wj}] = {expansion}"));
            for (k, p) in coeffs.iter().enumerate() {
                line(&mut doc, format!("c_{wi},{wj}^{} = {}", 2 * k, p.render()));
            }
            line(&mut doc, format!("identity: {}", if ok { "pass" } else { "FAIL" }));
        }
        Format::Json => {
            let cs: serde_json::Map<String, Value> =
                coeffs.iter().enumerate().map(|(k, p)| (format!("{}", 2 * k), p.to_json())).collect();
            json_line(
                &mut doc,
                json!({"type": "bracket", "genus": c.genus, "i": i, "j": j, "commutator": comm.to_json(), "coefficients": cs, "identity": ok}),
            );
        }
    }
    Ok(Output { doc, ok })
}

fn derive(c: &Common) -> Result<Output, Failure> {
    let ctx = c.ctx()?;
    let ks = c.ks(&ctx)?;
    let table = DerivationTable::compute(&ctx)?;
    let mut doc = String::new();
    for k in ks {
        let l = &table.operators[k as usize];
        let two_k = 2 * k as u32;
        match c.format {
            Format::Text => line(&mut doc, format!("Lcal_{two_k} = {}", l.render())),
            Format::Json => json_line(&mut doc, json!({"type": "derivation", "name": format!("Lcal_{two_k}"), "k": k, "operator": l.form().to_json()})),
        }
        for j in ctx.z_indices() {
            let w = table.get_w(two_k, j as u32).ok_or_else(|| Failure::Error(format!("w_{two_k},{j} missing")))?;
            match c.format {
                Format::Text => line(&mut doc, format!("w_{two_k},{j} = {}", w.render())),
                Format::Json => json_line(&mut doc, json!({"type": "w", "name": format!("w_{two_k},{j}"), "k": k, "j": j, "value": w.to_json()})),
            }
        }
    }
    Ok(Output { doc, ok: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out_path) = match &cli.command {
        Command::Gen(c) => (gen(c), &c.out),
        Command::Verify(c) => (verify(c), &c.out),
        Command::Bracket { common, i, j } => (bracket(common, *i, *j), &common.out),
        Command::Derive(c) => (derive(c), &c.out),
        Command::Fixtures(c) => (fixtures(c), &c.out),
    };
    let out = match result {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match out_path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &out.doc) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", out.doc),
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
