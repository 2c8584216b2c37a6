use std::io::{self, Write};

use elliptic_bailey::harness::{
    run_campaign, summarize_outcome, CampaignConfig, CampaignOutcome, ComplexArg, Identity, Summary,
};
use elliptic_bailey::VerificationReport;
use serde::Serialize;

use crate::{Status, VerifyArgs};

/// Schema tag carried by every JSON line.
pub const SCHEMA: &str = "elliptic-bailey/report/v1";

#[derive(Serialize)]
struct ReportLine<'a> {
    schema: &'static str,
    kind: &'static str,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    schema: &'static str,
    kind: &'static str,
    identity: Identity,
    seed: u64,
    #[serde(flatten)]
    summary: &'a Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    validation_messages: Vec<String>,
}

fn load_config(args: &VerifyArgs) -> Result<CampaignConfig, String> {
    let identity: Identity = args.identity.into();
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            let mut table: toml::Table =
                toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            table.insert("identity".into(), toml::Value::String(identity.name().into()));
            table
                .try_into::<CampaignConfig>()
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => CampaignConfig::new(identity),
    };
    if let Some(n) = args.n {
        config = config.n(n);
    }
    if let Some(n) = args.n_min {
        config.n_min = Some(n);
    }
    if let Some(n) = args.n_max {
        config.n_max = Some(n);
    }
    if let Some(d) = args.draws {
        config.draws = d;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if args.tolerance.is_some() {
        config.tolerance = args.tolerance;
    }
    if let Some(m) = args.bc_mode {
        config.bc_mode = m.into();
    }
    if let Some(t) = args.test_function {
        config.test_function = t.into();
    }
    if let Some(s) = args.spectators {
        config.spectators = s;
    }
    config.timing |= args.timing;
    let f = &args.fixed;
    let fixed = &mut config.fixed;
    for (slot, value) in [
        (&mut fixed.p, f.p),
        (&mut fixed.q, f.q),
        (&mut fixed.a, f.a),
        (&mut fixed.k, f.k),
        (&mut fixed.t_tilde, f.t_tilde),
        (&mut fixed.y, f.y),
        (&mut fixed.t, f.t),
        (&mut fixed.s, f.s),
        (&mut fixed.x, f.x),
        (&mut fixed.z, f.z),
        (&mut fixed.z0, f.z0),
    ] {
        if value.is_some() {
            *slot = value;
        }
    }
    Ok(config)
}

fn status_of(summary: &Summary) -> Status {
    if summary.validation_failures > 0 {
        Status::Config
    } else if summary.non_converged > 0 {
        Status::NonConvergence
    } else if summary.all_passed() {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn run(args: VerifyArgs) -> Status {
    let config = match load_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Config;
        }
    };
    let outcome = match run_campaign(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Config;
        }
    };
    let summary = summarize_outcome(&outcome);
    let written = if args.json {
        write_json(&outcome, &summary)
    } else {
        write_text(&outcome, &summary, args.verbose)
    };
    if let Err(e) = written {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
    for failure in &outcome.validation_failures {
        match failure.draw {
            Some(d) => eprintln!("validation failure (draw {d}): {}", failure.message),
            None => eprintln!("validation failure: {}", failure.message),
        }
    }
    status_of(&summary)
}

fn write_json(outcome: &CampaignOutcome, summary: &Summary) -> io::Result<()> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    for report in &outcome.reports {
        let line = ReportLine {
            schema: SCHEMA,
            kind: "report",
            report,
        };
        serde_json::to_writer(&mut out, &line)?;
        writeln!(out)?;
    }
    let line = SummaryLine {
        schema: SCHEMA,
        kind: "summary",
        identity: outcome.identity,
        seed: outcome.seed,
        summary,
        validation_messages: outcome.validation_failures.iter().map(|f| f.message.clone()).collect(),
    };
    serde_json::to_writer(&mut out, &line)?;
    writeln!(out)?;
    out.flush()
}

fn write_text(outcome: &CampaignOutcome, summary: &Summary, verbose: bool) -> io::Result<()> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    writeln!(out, "{} (seed {})", outcome.identity, outcome.seed)?;
    writeln!(out, "{:>6}  {:>4}  {:>12}  {:>12}  status", "draw", "size", "residual", "tolerance")?;
    for r in &outcome.reports {
        let size = r.settings.matrix_size.map_or("-".to_string(), |s| s.to_string());
        let status = if r.pass {
            "pass"
        } else if r.error.is_some() {
            "error"
        } else {
            "FAIL"
        };
        writeln!(
            out,
            "{:>6}  {:>4}  {:>12.3e}  {:>12.3e}  {status}",
            r.draw.unwrap_or(0),
            size,
            r.residual,
            r.tolerance
        )?;
    }
    writeln!(out)?;
    writeln!(
        out,
        "passed {}/{}  failed {}  errored {}  rejected draws {}",
        summary.passed, summary.reports, summary.failed, summary.errored, summary.rejected_draws
    )?;
    if let (Some(max), Some(median)) = (summary.max_residual, summary.median_residual) {
        writeln!(out, "max residual {max:.3e}  median residual {median:.3e}")?;
    }
    if verbose {
        for f in &summary.failures {
            write!(out, "draw {}:", f.draw.unwrap_or(0))?;
            for input in &f.inputs {
                write!(out, " {}={}", input.name, ComplexArg(input.value))?;
            }
            match &f.error {
                Some(e) => writeln!(out, "  error: {e}")?,
                None => writeln!(out, "  residual {:e}", f.residual)?,
            }
        }
    }
    out.flush()
}
