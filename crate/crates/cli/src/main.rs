use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use critlat::latcat::{self, NIEMEIER};
use critlat::morse::{
    self, alpha_sweep, critical_certificate, criticality, hessian_spectrum, noncritical_bound_report,
    rootless_local_max_certificate, sig12, Criticality, DEFAULT_HEAD_TERMS,
};
use critlat::{Certificate, Error, LatticeEntry, RootSystem, SpectrumReport, SymMatrix};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    #[value(alias = "markdown")]
    Md,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "critlat", version, about = "Criticality and Hessian spectra of even unimodular lattices")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "md")]
    format: ReportFormat,
    /// Certified error radius required for every Hessian eigenvalue.
    #[arg(long, global = true, default_value_t = morse::DEFAULT_TOL)]
    tol: f64,
    /// Number of theta coefficients printed in catalog and analyze output.
    #[arg(long, global = true, default_value_t = 16)]
    series_length: usize,
    /// Truncate printed mu values (never round) to this many decimals.
    #[arg(long, global = true)]
    paper_digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Criticality and Hessian spectrum of one lattice.
    Analyze {
        /// Catalog name or root system string such as `A1^8+A3^8`.
        lattice: String,
        #[arg(long, default_value = "pi", value_parser = parse_alpha)]
        alpha: f64,
        /// Dimension for a lattice given by its root system.
        #[arg(long)]
        dim: Option<usize>,
        /// Expected number of roots; checked against the root system.
        #[arg(long)]
        root_count: Option<u64>,
    },
    /// Hessian spectra of the 23 Niemeier lattices.
    Table24 {
        #[arg(long, default_value = "pi", value_parser = parse_alpha)]
        alpha: f64,
    },
    /// Spectra of the two 16-dimensional lattices.
    Dim16 {
        #[arg(long, default_value = "pi", value_parser = parse_alpha)]
        alpha: f64,
    },
    /// Non-criticality and local-maximum certificates in dimension 32.
    Dim32 {
        /// Parameter of the non-criticality certificate.
        #[arg(long, default_value = "14", value_parser = parse_alpha)]
        noncritical_alpha: f64,
        /// Parameter of the rootless local-maximum certificate.
        #[arg(long, default_value = "pi", value_parser = parse_alpha)]
        max_alpha: f64,
        #[arg(long, default_value_t = DEFAULT_HEAD_TERMS)]
        head_terms: usize,
        #[arg(long, default_value_t = 8)]
        partial_terms: usize,
    },
    /// Hessian eigenvalues on a uniform alpha grid.
    Sweep {
        lattice: String,
        #[arg(long, default_value = "pi/4", value_parser = parse_alpha)]
        from: f64,
        #[arg(long, default_value = "2pi", value_parser = parse_alpha)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        dim: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All catalog entries.
    Catalog,
    /// Quick checks against reference values.
    Selftest,
}

/// Accepts decimals and `pi`, `k*pi`, `kpi`, `pi/k`.
fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("invalid alpha `{s}`: {e}"));
    let v = if let Some(rest) = t.strip_prefix("pi/") {
        PI / num(rest)?
    } else if let Some(head) = t.strip_suffix("pi") {
        let head = head.strip_suffix('*').unwrap_or(head);
        if head.is_empty() {
            PI
        } else {
            num(head)? * PI
        }
    } else {
        num(&t)?
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("alpha must be positive and finite (got `{s}`)"))
    }
}

fn resolve(name: &str, dim: Option<usize>, root_count: Option<u64>) -> Result<LatticeEntry> {
    let entry = match latcat::get(name) {
        Ok(e) if dim.is_none_or(|d| d == e.dim()) => e,
        Ok(_) | Err(Error::UnknownLattice(_)) => {
            let rs = RootSystem::from_str(name)
                .with_context(|| format!("`{name}` is neither a catalog name nor a root system"))?;
            let n = dim.unwrap_or_else(|| rs.total_rank());
            LatticeEntry::new(name, n, rs)?
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(r) = root_count {
        if r != entry.root_count() {
            return Err(Error::InconsistentRootCount { dim: entry.dim(), root_count: r }.into());
        }
    }
    Ok(entry)
}

struct Out {
    opts: Opts,
    text: String,
    json: Value,
    ok: bool,
}

#[derive(Clone, Copy)]
struct Opts {
    format: ReportFormat,
    tol: f64,
    series_length: usize,
    paper_digits: Option<u32>,
}

impl Opts {
    fn mu(&self, x: f64) -> String {
        match self.paper_digits {
            Some(d) => {
                let p = 10f64.powi(d as i32);
                let t = (x * p).trunc() / p;
                format!("{t:.*}", d as usize)
            }
            None => sig12(x),
        }
    }
}

fn spectrum_md(o: &Opts, r: &SpectrumReport, s: &mut String) {
    let _ = writeln!(s, "## {} (n = {}), alpha = {}", r.lattice, r.dim, r.alpha);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "classification: {}, margin: {}, truncation order: {}",
        r.classification,
        sig12(r.margin()),
        r.truncation_order
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "| lambda | multiplicity | mu | error_radius |");
    let _ = writeln!(s, "|---|---|---|---|");
    for e in &r.entries {
        let _ = writeln!(s, "| {} | {} | {} | {} |", sig12(e.lambda), e.multiplicity, o.mu(e.mu), sig12(e.error_radius));
    }
    let _ = writeln!(s);
}

fn certificate_md(c: &Certificate, s: &mut String) {
    let _ = writeln!(s, "## Certificate {} for {}", c.kind_label(), c.lattice);
    let _ = writeln!(s);
    let _ = writeln!(s, "{}: {} > {}", if c.holds() { "holds" } else { "FAILS" }, sig12(c.lhs), sig12(c.rhs));
    let _ = writeln!(s);
    let _ = writeln!(s, "| constant | value |");
    let _ = writeln!(s, "|---|---|");
    for (k, v) in &c.constants {
        let _ = writeln!(s, "| {k} | {} |", sig12(*v));
    }
    let _ = writeln!(s);
}

fn spectrum_json(o: &Opts, r: &SpectrumReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["alpha_exact"] = json!(r.alpha);
    if o.paper_digits.is_some() {
        for (j, e) in r.entries.iter().enumerate() {
            v["entries"][j]["mu_truncated"] = json!(o.mu(e.mu));
        }
    }
    v
}

impl Out {
    fn new(opts: Opts) -> Self {
        Self { opts, text: String::new(), json: json!({}), ok: true }
    }

    fn spectrum(&mut self, r: &SpectrumReport) -> Value {
        spectrum_md(&self.opts, r, &mut self.text);
        spectrum_json(&self.opts, r)
    }

    fn certificate(&mut self, c: &Certificate) -> Value {
        certificate_md(c, &mut self.text);
        self.ok &= c.holds();
        serde_json::to_value(c).expect("certificate serializes")
    }
}

fn analyze(o: Opts, name: &str, alpha: f64, dim: Option<usize>, root_count: Option<u64>) -> Result<Out> {
    let entry = resolve(name, dim, root_count)?;
    let mut out = Out::new(o);
    let _ = writeln!(out.text, "# {} ({})\n", entry.name(), entry.root_system());
    let theta: Vec<String> = entry.theta_to(o.series_length).truncate(o.series_length).to_strings();
    let _ = writeln!(out.text, "theta: {}\n", theta.join(", "));
    let mut j = json!({
        "lattice": entry.name(),
        "dimension": entry.dim(),
        "root_system": entry.root_system().to_string(),
        "root_count": entry.root_count(),
        "theta": theta,
    });
    match criticality(&entry)? {
        Criticality::CriticalAllAlpha => {
            let _ = writeln!(out.text, "criticality: critical for every alpha\n");
            let c = critical_certificate(&entry)?;
            j["certificate"] = out.certificate(&c);
            let r = hessian_spectrum(&entry, alpha, o.tol)?;
            j["spectrum"] = out.spectrum(&r);
        }
        Criticality::MomentDefect { witness, .. } => {
            let _ = writeln!(out.text, "criticality: root shell is not a 2-design\n");
            let c = noncritical_bound_report(&entry, alpha, &witness, DEFAULT_HEAD_TERMS)?;
            j["certificate"] = out.certificate(&c);
            j["spectrum"] = Value::Null;
        }
    }
    out.json = j;
    Ok(out)
}

fn table24(o: Opts, alpha: f64) -> Result<Out> {
    let mut out = Out::new(o);
    let _ = writeln!(out.text, "# Niemeier lattices, alpha = {alpha}\n");
    let _ = writeln!(out.text, "| root system | a1 | h | lambda | multiplicity | mu | class |");
    let _ = writeln!(out.text, "|---|---|---|---|---|---|---|");
    let mut rows = Vec::new();
    for name in NIEMEIER {
        let e = latcat::get(name)?;
        let r = hessian_spectrum(&e, alpha, o.tol)?;
        for (i, s) in r.entries.iter().enumerate() {
            let head = if i == 0 {
                format!("{} | {} | {}", name, e.root_count(), e.coxeter().map_or("-".into(), |h| h.to_string()))
            } else {
                " | | ".to_string()
            };
            let class = if i == 0 { r.classification.to_string() } else { String::new() };
            let _ = writeln!(out.text, "| {head} | {} | {} | {} | {class} |", sig12(s.lambda), s.multiplicity, o.mu(s.mu));
        }
        let mut v = spectrum_json(&o, &r);
        v["root_count"] = json!(e.root_count());
        v["coxeter"] = json!(e.coxeter());
        rows.push(v);
    }
    out.json = json!({ "alpha": sig12(alpha), "alpha_exact": alpha, "lattices": rows });
    Ok(out)
}

fn dim16(o: Opts, alpha: f64) -> Result<Out> {
    let mut out = Out::new(o);
    let mut v = Vec::new();
    for name in ["D16+", "E8^2"] {
        let r = hessian_spectrum(&latcat::get(name)?, alpha, o.tol)?;
        v.push(out.spectrum(&r));
    }
    let h = SymMatrix::diagonal(&[1.0, -1.0]).scaled(std::f64::consts::FRAC_1_SQRT_2);
    let d = morse::deformation_diagnostic(alpha, &h)?;
    let _ = writeln!(
        out.text,
        "deformation check on the hexagonal lattice: finite difference {} / formula {} = {}",
        sig12(d.second_derivative),
        sig12(d.hessian_formula),
        sig12(d.factor)
    );
    out.json = json!({ "spectra": v, "deformation_diagnostic": d });
    Ok(out)
}

fn dim32(o: Opts, noncritical_alpha: f64, max_alpha: f64, head: usize, partial: usize) -> Result<Out> {
    let mut out = Out::new(o);
    let k = latcat::get("A1^8+A3^8")?;
    let witness = match criticality(&k)? {
        Criticality::MomentDefect { witness, .. } => witness,
        Criticality::CriticalAllAlpha => bail!("A1^8+A3^8 tested critical"),
    };
    let c = noncritical_bound_report(&k, noncritical_alpha, &witness, head)?;
    let jn = out.certificate(&c);
    let rootless = latcat::get("Rootless-32")?;
    let jr = match rootless_local_max_certificate(&rootless, max_alpha, partial) {
        Ok(c) => out.certificate(&c),
        Err(e @ Error::CertificateFails(_)) => {
            out.ok = false;
            let _ = writeln!(out.text, "rootless local-maximum certificate FAILS: {e}\n");
            json!({ "holds": false, "error": e.to_string() })
        }
        Err(e) => return Err(e.into()),
    };
    let r = hessian_spectrum(&rootless, max_alpha, o.tol)?;
    let js = out.spectrum(&r);
    out.json = json!({ "noncritical": jn, "rootless_local_max": jr, "rootless_spectrum": js });
    Ok(out)
}

fn catalog(o: Opts) -> Result<Out> {
    let mut out = Out::new(o);
    let _ = writeln!(out.text, "| name | n | root system | a1 | h | theta |");
    let _ = writeln!(out.text, "|---|---|---|---|---|---|");
    let mut rows = Vec::new();
    for e in latcat::catalog() {
        let mut row = e.summary();
        row.theta = e.theta_to(o.series_length).truncate(o.series_length).to_strings();
        let _ = writeln!(
            out.text,
            "| {} | {} | {} | {} | {} | {} |",
            row.name,
            row.dimension,
            row.root_system,
            row.root_count,
            row.coxeter.map_or("-".into(), |h| h.to_string()),
            row.theta.iter().take(4).cloned().collect::<Vec<_>>().join(", ")
        );
        rows.push(serde_json::to_value(&row)?);
    }
    out.json = Value::Array(rows);
    Ok(out)
}

fn sweep_csv(reports: &[SpectrumReport]) -> String {
    let mut s = String::from("alpha,lambda,mu,error_radius\n");
    for r in reports {
        for e in &r.entries {
            let _ = writeln!(s, "{},{},{},{}", r.alpha, sig12(e.lambda), sig12(e.mu), sig12(e.error_radius));
        }
    }
    s
}

fn sweep(o: Opts, name: &str, from: f64, to: f64, steps: usize, dim: Option<usize>) -> Result<Out> {
    let entry = resolve(name, dim, None)?;
    let reports = alpha_sweep(&entry, from, to, steps, o.tol)?;
    let mut out = Out::new(o);
    out.text = if o.format == ReportFormat::Csv {
        sweep_csv(&reports)
    } else {
        let mut s = String::new();
        for r in &reports {
            spectrum_md(&o, r, &mut s);
        }
        s
    };
    out.json = Value::Array(reports.iter().map(|r| spectrum_json(&o, r)).collect());
    Ok(out)
}

fn selftest(o: Opts) -> Result<Out> {
    let mut out = Out::new(o);
    let mut results = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        let _ = writeln!(out.text, "{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        results.push(json!({ "check": name, "pass": pass, "detail": detail }));
        pass
    };
    let trunc = |x: f64, d: i32| (x * 10f64.powi(d)).trunc() / 10f64.powi(d);
    let mut ok = true;
    for (name, lambda, want) in [
        ("D16+", 8.0, -0.06196),
        ("D16+", 56.0, 0.36093),
        ("E8^2", 0.0, -0.13245),
        ("E8^2", 24.0, 0.07899),
        ("E8^2", 120.0, 0.92480),
    ] {
        let r = hessian_spectrum(&latcat::get(name)?, PI, o.tol)?;
        let e = r.mu_of(lambda).context("missing eigenvalue")?;
        let pass = (trunc(e.mu, 5) - want).abs() < 1e-12 && e.error_radius <= 1e-9;
        ok &= check(&format!("mu({name}, {lambda})"), pass, format!("{} (expected {want})", sig12(e.mu)));
    }
    let r = hessian_spectrum(&latcat::get("D12^2")?, PI, o.tol)?;
    let got: Vec<(f64, usize, f64)> = r.entries.iter().map(|e| (e.lambda, e.multiplicity, trunc(e.mu, 4))).collect();
    let want = [(0.0, 144, -0.1371), (8.0, 132, -0.0345), (40.0, 22, 0.3758), (88.0, 1, 0.9914)];
    let pass = got.len() == 4
        && got.iter().zip(&want).all(|(g, w)| (g.0 - w.0).abs() < 1e-9 && g.1 == w.1 && (g.2 - w.2).abs() < 1e-12);
    ok &= check("D12^2 row", pass, format!("{got:?}"));
    let k = latcat::get("A1^8+A3^8")?;
    let w = SymMatrix::scalar_blocks(&[(8, 24.0), (24, -8.0)]);
    let c = noncritical_bound_report(&k, 14.0, &w, DEFAULT_HEAD_TERMS)?;
    ok &= check("A1^8+A3^8 not critical at 14", c.holds(), format!("{} > {}", sig12(c.lhs), sig12(c.rhs)));
    let pass = match rootless_local_max_certificate(&latcat::get("Rootless-32")?, PI, 8) {
        Ok(c) => check("rootless local maximum at pi", true, format!("{} > {}", sig12(c.lhs), sig12(c.rhs))),
        Err(e) => check("rootless local maximum at pi", false, e.to_string()),
    };
    ok &= pass;
    out.ok = ok;
    out.json = Value::Array(results);
    Ok(out)
}

fn run(cli: Cli) -> Result<Out> {
    let o = Opts { format: cli.format, tol: cli.tol, series_length: cli.series_length.max(1), paper_digits: cli.paper_digits };
    if o.format == ReportFormat::Csv && !matches!(cli.command, Command::Sweep { .. }) {
        bail!("csv output is only available for sweep");
    }
    match &cli.command {
        Command::Analyze { lattice, alpha, dim, root_count } => analyze(o, lattice, *alpha, *dim, *root_count),
        Command::Table24 { alpha } => table24(o, *alpha),
        Command::Dim16 { alpha } => dim16(o, *alpha),
        Command::Dim32 { noncritical_alpha, max_alpha, head_terms, partial_terms } => {
            dim32(o, *noncritical_alpha, *max_alpha, *head_terms, *partial_terms)
        }
        Command::Sweep { lattice, from, to, steps, dim, out } => {
            let r = sweep(o, lattice, *from, *to, *steps, *dim)?;
            if let Some(path) = out {
                let body = render(&r)?;
                std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
                return Ok(Out { text: String::new(), json: Value::Null, ..r });
            }
            Ok(r)
        }
        Command::Catalog => catalog(o),
        Command::Selftest => selftest(o),
    }
}

fn render(out: &Out) -> Result<String> {
    Ok(match out.opts.format {
        ReportFormat::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        _ => out.text.clone(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if !(out.json.is_null() && out.text.is_empty()) {
                match render(&out) {
                    Ok(s) => print!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        return ExitCode::FAILURE;
                    }
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_tokens() {
        assert_eq!(parse_alpha("pi").unwrap(), PI);
        assert_eq!(parse_alpha("PI").unwrap(), PI);
        assert_eq!(parse_alpha("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_alpha("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_alpha("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_alpha("14").unwrap(), 14.0);
        assert!(parse_alpha("-1").is_err());
        assert!(parse_alpha("tau").is_err());
    }

    #[test]
    fn truncating_digits() {
        let o = Opts { format: ReportFormat::Md, tol: 1e-9, series_length: 4, paper_digits: Some(4) };
        assert_eq!(o.mu(-0.13719), "-0.1371");
        assert_eq!(o.mu(0.99149), "0.9914");
    }
}
