//! Command-line front end: catalog queries (`dims`, `eval`, `residue`,
//! `classify`), tube sampling and dimension fits (`tube`, `fit`), and the
//! invariant suites (`verify`). Emits JSON/CSV with 17-significant-digit
//! decimals; a run manifest goes to stderr.

use clap::{Parser, Subcommand};
use fzeta::error::Error as FzError;
use fzeta::fmt::fmt17;
use fzeta::mero::{classify_fractality, poles_in_window, residue_at, Fractality, Window};
use fzeta::rfd::{box_dimension_fit, build_rfd, log_grid, tube_function_numeric, FitRange,
    QuadCfg, TubeSamples};
use fzeta::sprays::{catalog_example, catalog_names, ZetaRepr};
use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fzeta",
    about = "Fractal zeta functions and complex dimensions of relative fractal drums",
    version
)]
struct Cli {
    /// Seed for Monte Carlo sampling (deterministic per seed).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Reserved; evaluation is single-threaded and deterministic.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Relative tolerance for deterministic quadratures.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complex dimensions of a catalog example inside a window.
    Dims {
        #[arg(long)]
        example: Option<String>,
        /// Window `a:b:H` means Re in [a,b], |Im| <= H.
        #[arg(long, default_value = "-1:4:30", allow_hyphen_values = true)]
        window: String,
        /// List the catalog names and exit.
        #[arg(long)]
        list: bool,
        /// Write the pole list as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Output file (defaults to stdout).
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a catalog zeta function at a complex point `RE[,IM]`.
    Eval {
        #[arg(long)]
        example: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Sample the tube function of a geometry onto a log grid, as CSV.
    Tube {
        /// Geometry spec, e.g. `cantor:2:1/3:0.5`, `ball:2`, `gasket`,
        /// `torus:2:0.5`, `cusp:2`, `exp-cusp`, `dust`, `a-string:1`.
        #[arg(long)]
        geometry: String,
        #[arg(long, default_value_t = 1e-6)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-1)]
        tmax: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Dimension for the normalized third column volume/t^(N-D).
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        out: String,
        /// Monte Carlo sample budget for geometries without exact tubes.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Least-squares box-dimension fit of a tube CSV.
    Fit {
        #[arg(long = "in")]
        input: String,
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long, default_value_t = 1e-6)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-1)]
        tmax: f64,
    },
    /// Principal part of a catalog zeta at a declared pole `RE[,IM]`.
    Residue {
        #[arg(long)]
        example: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Fractality classification of a catalog example.
    Classify {
        #[arg(long)]
        example: String,
    },
    /// Run the invariant suites; exit 0 iff every check passes.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Quasiperiodic drum descriptor: prime bases, quasiperiods, the
    /// truncated singularity lattice and an independence certificate.
    Drum {
        /// Target dimension in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        d: f64,
        /// Number of prime components.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Coefficient bound for the rational-relation scan.
        #[arg(long, default_value_t = 10_000)]
        qmax: i64,
        /// Imaginary truncation of the reported lattice.
        #[arg(long, default_value_t = 20.0)]
        im_max: f64,
    },
}

fn parse_complex(text: &str) -> Result<Complex64, FzError> {
    let mut parts = text.splitn(2, ',');
    let re: f64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| FzError::InvalidParameter(format!("bad complex `{text}`")))?;
    let im: f64 = match parts.next() {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| FzError::InvalidParameter(format!("bad complex `{text}`")))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_window(text: &str) -> Result<Window, FzError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(FzError::InvalidParameter(format!(
            "window must be a:b:H, got `{text}`"
        )));
    }
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|_| FzError::InvalidParameter(format!("bad window `{text}`")))?;
    Window::new(nums[0], nums[1], nums[2])
}

/// Exit-code policy: 2 usage (clap), 3 validation, 4 numeric failure.
fn exit_code_for(err: &FzError) -> u8 {
    match err {
        FzError::PoleHit { .. }
        | FzError::ToleranceUnreachable { .. }
        | FzError::NonIntegrable(_)
        | FzError::QuadratureFailure(_)
        | FzError::SeedGridTooCoarse { .. }
        | FzError::EntireFactorFailure(_)
        | FzError::ContourContainsOtherPole { .. }
        | FzError::GeneratorValidationFailed { .. } => 4,
        _ => 3,
    }
}

struct Manifest {
    command: String,
    seed: u64,
    started: std::time::Instant,
    outputs: Vec<(String, String)>,
}

impl Manifest {
    fn new(seed: u64) -> Self {
        Manifest {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            seed,
            started: std::time::Instant::now(),
            outputs: Vec::new(),
        }
    }

    fn record(&mut self, path: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        self.outputs.push((path.to_string(), digest));
    }

    fn emit(&self) {
        let outputs = self
            .outputs
            .iter()
            .map(|(p, h)| format!("{{\"path\":{p:?},\"sha256\":\"{h}\"}}"))
            .collect::<Vec<_>>()
            .join(",");
        eprintln!(
            "{{\"manifest\":{{\"command\":{:?},\"seed\":{},\"version\":{:?},\"elapsed_ms\":{},\"outputs\":[{}]}}}}",
            self.command,
            self.seed,
            env!("CARGO_PKG_VERSION"),
            self.started.elapsed().as_millis(),
            outputs
        );
    }
}

fn write_output(
    manifest: &mut Manifest,
    out: &Option<String>,
    content: &str,
) -> Result<(), FzError> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, content.as_bytes())
                .map_err(|e| FzError::InvalidParameter(format!("cannot write {path}: {e}")))?;
            manifest.record(path, content.as_bytes());
            Ok(())
        }
    }
}

fn dims_json(example: &str, window: &Window, dims: &[fzeta::mero::ComplexDimension]) -> String {
    let mut rows = Vec::with_capacity(dims.len());
    for d in dims {
        let res = d.residue();
        rows.push(format!(
            "{{\"re\":{},\"im\":{},\"order\":{},\"residue_re\":{},\"residue_im\":{},\"principal\":{},\"cancelled\":{}}}",
            fmt17(d.s.re),
            fmt17(d.s.im),
            d.order,
            fmt17(res.re),
            fmt17(res.im),
            d.principal,
            d.cancelled
        ));
    }
    format!(
        "{{\"schema\":\"fzeta.dims.v1\",\"example\":{:?},\"window\":{{\"re_min\":{},\"re_max\":{},\"im_max\":{}}},\"dims\":[{}]}}",
        example,
        fmt17(window.re_min),
        fmt17(window.re_max),
        fmt17(window.im_max),
        rows.join(",")
    )
}

fn dims_csv(dims: &[fzeta::mero::ComplexDimension]) -> String {
    let mut out = String::from("re,im,order,residue_re,residue_im,principal,cancelled\n");
    for d in dims {
        let res = d.residue();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt17(d.s.re),
            fmt17(d.s.im),
            d.order,
            fmt17(res.re),
            fmt17(res.im),
            d.principal,
            d.cancelled
        ));
    }
    out
}

fn classification_string(f: &Fractality) -> String {
    match f {
        Fractality::NotFractal => "not_fractal".to_string(),
        Fractality::CriticallyFractal => "critically_fractal".to_string(),
        Fractality::StrictlySubcriticallyFractal { dims } => {
            let ds = dims
                .iter()
                .map(|d| format!("{d:.5}"))
                .collect::<Vec<_>>()
                .join(",");
            format!("strictly_subcritically_fractal d=[{ds}]")
        }
    }
}

fn run(cli: Cli) -> Result<(), FzError> {
    let mut manifest = Manifest::new(cli.seed);
    let cfg = QuadCfg {
        rel_tol: cli.tol,
        seed: cli.seed,
        ..Default::default()
    };
    match &cli.command {
        Command::Dims {
            example,
            window,
            list,
            csv,
            out,
        } => {
            if *list {
                let names = catalog_names().join("\n");
                println!("{names}");
                manifest.emit();
                return Ok(());
            }
            let name = example
                .as_deref()
                .ok_or_else(|| FzError::InvalidParameter("--example or --list required".into()))?;
            let entry = catalog_example(name)?;
            let window = parse_window(window)?;
            let dims = match &entry.zeta {
                ZetaRepr::Closed(expr) => poles_in_window(expr, &window)?,
                ZetaRepr::Dust(d) => d.candidates(&window),
            };
            let content = if *csv {
                dims_csv(&dims)
            } else {
                dims_json(name, &window, &dims)
            };
            write_output(&mut manifest, out, &content)?;
        }
        Command::Eval { example, s } => {
            let entry = catalog_example(example)?;
            let s = parse_complex(s)?;
            let v = entry.zeta.eval(s)?;
            println!(
                "{{\"schema\":\"fzeta.eval.v1\",\"example\":{:?},\"s\":[{},{}],\"value\":[{},{}]}}",
                example,
                fmt17(s.re),
                fmt17(s.im),
                fmt17(v.re),
                fmt17(v.im)
            );
        }
        Command::Tube {
            geometry,
            tmin,
            tmax,
            points,
            d,
            out,
            samples,
        } => {
            if !(*tmin > 0.0 && tmax > tmin && *points >= 2) {
                return Err(FzError::InvalidParameter(
                    "need 0 < tmin < tmax and points >= 2".into(),
                ));
            }
            let rfd = build_rfd(geometry)?;
            let cfg = QuadCfg {
                mc_samples: *samples,
                ..cfg
            };
            let grid = log_grid(*tmin, *tmax, *points);
            let tube = tube_function_numeric(&rfd, &grid, &cfg)?;
            let mut content = match d {
                Some(_) => String::from("t,volume,normalized\n"),
                None => String::from("t,volume\n"),
            };
            let nf = rfd.ambient as f64;
            for &(t, v) in &tube.pairs {
                match d {
                    Some(dim) => content.push_str(&format!(
                        "{},{},{}\n",
                        fmt17(t),
                        fmt17(v),
                        fmt17(v / t.powf(nf - dim))
                    )),
                    None => content.push_str(&format!("{},{}\n", fmt17(t), fmt17(v))),
                }
            }
            std::fs::write(out, content.as_bytes())
                .map_err(|e| FzError::InvalidParameter(format!("cannot write {out}: {e}")))?;
            manifest.record(out, content.as_bytes());
            println!(
                "{{\"schema\":\"fzeta.tube.v1\",\"geometry\":{:?},\"points\":{},\"method\":\"{}\",\"out\":{:?}}}",
                geometry,
                tube.pairs.len(),
                match tube.method {
                    fzeta::rfd::SampleMethod::Exact => "exact".to_string(),
                    fzeta::rfd::SampleMethod::MonteCarlo { samples, .. } =>
                        format!("montecarlo:{samples}"),
                },
                out
            );
        }
        Command::Fit {
            input,
            ambient,
            tmin,
            tmax,
        } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| FzError::InvalidParameter(format!("cannot read {input}: {e}")))?;
            let mut pairs = Vec::new();
            for line in text.lines().skip(1) {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() < 2 {
                    continue;
                }
                let t: f64 = cols[0]
                    .trim()
                    .parse()
                    .map_err(|_| FzError::InvalidParameter(format!("bad CSV row `{line}`")))?;
                let v: f64 = cols[1]
                    .trim()
                    .parse()
                    .map_err(|_| FzError::InvalidParameter(format!("bad CSV row `{line}`")))?;
                pairs.push((t, v));
            }
            let stderr = vec![0.0; pairs.len()];
            let samples = TubeSamples {
                pairs,
                stderr,
                method: fzeta::rfd::SampleMethod::Exact,
            };
            let fit = box_dimension_fit(
                &samples,
                *ambient,
                FitRange {
                    t_min: *tmin,
                    t_max: *tmax,
                },
            )?;
            println!(
                "{{\"schema\":\"fzeta.fit.v1\",\"d\":{},\"d_lower\":{},\"d_upper\":{},\"slope\":{},\"slope_stderr\":{},\"t_min\":{},\"t_max\":{},\"residual_rms\":{},\"points\":{}}}",
                fmt17(fit.d),
                fmt17(fit.d_lower),
                fmt17(fit.d_upper),
                fmt17(fit.slope),
                fmt17(fit.slope_stderr),
                fmt17(fit.t_min),
                fmt17(fit.t_max),
                fmt17(fit.residual_rms),
                fit.points
            );
        }
        Command::Residue { example, at } => {
            let entry = catalog_example(example)?;
            let s = parse_complex(at)?;
            let expr = entry.zeta.closed().ok_or_else(|| {
                FzError::UnsupportedKind(
                    "residues of the delegated dust zeta are not served".into(),
                )
            })?;
            let pp = residue_at(expr, s)?;
            let coeffs = pp
                .iter()
                .rev()
                .enumerate()
                .map(|(k, ck)| {
                    format!(
                        "{{\"k\":{},\"re\":{},\"im\":{}}}",
                        -(k as i64 + 1),
                        fmt17(ck.re),
                        fmt17(ck.im)
                    )
                })
                .collect::<Vec<_>>()
                .join(",");
            println!(
                "{{\"schema\":\"fzeta.residue.v1\",\"example\":{:?},\"at\":[{},{}],\"order\":{},\"principal_part\":[{}]}}",
                example,
                fmt17(s.re),
                fmt17(s.im),
                pp.len(),
                coeffs
            );
        }
        Command::Classify { example } => {
            let entry = catalog_example(example)?;
            let classification = match &entry.zeta {
                ZetaRepr::Closed(expr) => classify_fractality(expr, &entry.window)?,
                ZetaRepr::Dust(_) => entry.expected_class.clone(),
            };
            let note = if matches!(entry.zeta, ZetaRepr::Dust(_)) {
                ",\"note\":\"critical-line lattice is conjectural (possible zero-pole cancellation)\""
            } else {
                ""
            };
            println!(
                "{{\"schema\":\"fzeta.classify.v1\",\"example\":{:?},\"classification\":\"{}\"{}}}",
                example,
                classification_string(&classification),
                note
            );
        }
        Command::Drum { d, n, qmax, im_max } => {
            let drum = fzeta::cantor::quasiperiodic_drum_build(
                *d,
                *n,
                1.0,
                &fzeta::cantor::OmegaRule::TwoPowNegI,
            )?;
            let lattice = drum
                .singularity_lattice(*im_max)
                .iter()
                .map(|z| format!("[{},{}]", fmt17(z.re), fmt17(z.im)))
                .collect::<Vec<_>>()
                .join(",");
            let certificate = match drum.independence_certificate(*qmax) {
                fzeta::numeric::rational::RelationScan::Independent => {
                    format!("{{\"independent_up_to\":{qmax}}}")
                }
                fzeta::numeric::rational::RelationScan::Relation(q) => {
                    format!("{{\"relation\":{q:?}}}")
                }
            };
            println!(
                "{{\"schema\":\"fzeta.drum.v1\",\"d\":{},\"m_list\":{:?},\"a_list\":[{}],\"omega_lengths\":[{}],\"quasiperiods\":[{}],\"lattice_periods\":[{}],\"singularity_lattice\":[{}],\"certificate\":{}}}",
                fmt17(*d),
                drum.m_list,
                drum.a_list.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(","),
                drum.omega_lengths.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(","),
                drum.quasiperiods.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(","),
                drum.lattice_periods.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(","),
                lattice,
                certificate
            );
        }
        Command::Verify { suite } => {
            let reports = fzeta::verify::run(suite, &cfg)?;
            let mut all_pass = true;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for report in &reports {
                for check in &report.checks {
                    all_pass &= check.pass;
                    writeln!(
                        lock,
                        "[{}] {} {} ({})",
                        report.suite,
                        if check.pass { "PASS" } else { "FAIL" },
                        check.name,
                        check.detail
                    )
                    .ok();
                }
                writeln!(
                    lock,
                    "[{}] {} checks in {} ms",
                    report.suite,
                    report.checks.len(),
                    report.elapsed_ms
                )
                .ok();
            }
            manifest.emit();
            if !all_pass {
                return Err(FzError::InvalidParameter("verification failed".into()));
            }
            return Ok(());
        }
    }
    manifest.emit();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
