//! Command-line front end: parse a run configuration, dispatch the
//! computations, emit CSV tables and JSON dumps.

use crate::asymptotics::{self, ClosedFormModel};
use crate::chain::{CouplingSet, CriticalClass};
use crate::correlation::{self, CorrelationMode, SubsystemSpec};
use crate::error::{Error, Result};
use crate::mobius::{self, MobiusMap};
use crate::riemann::entropy::{entropy_contour, DeterminantFactor};
use crate::riemann::HyperellipticCurve;
use crate::{io, models};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

type C64 = Complex64;

#[derive(Debug, Clone)]
pub enum ChainSource {
    File(PathBuf),
    XyDm { gamma: f64, s: f64, h: f64 },
}

impl ChainSource {
    fn load(&self) -> Result<CouplingSet> {
        match self {
            ChainSource::File(p) => io::load_chain(p),
            ChainSource::XyDm { gamma, s, h } => Ok(CouplingSet::xy_dm(*gamma, *s, *h)),
        }
    }

    fn describe(&self) -> String {
        match self {
            ChainSource::File(p) => format!("file:{}", p.display()),
            ChainSource::XyDm { gamma, s, h } => format!("xydm:{gamma},{s},{h}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum AsymModel {
    CriticalXx { h: f64 },
    Ising { gamma: f64 },
    XxDm { s: f64, h: f64 },
    Aef { angles: Vec<f64> },
}

#[derive(Debug, Clone)]
pub enum Command {
    Classify {
        chain: ChainSource,
        /// Optional map whose admissibility and predicted entropy shift are
        /// reported next to the classification.
        map: Option<MobiusMap>,
    },
    Entropy {
        chain: ChainSource,
        alphas: Vec<f64>,
        intervals: Vec<(i64, i64)>,
        mode: CorrelationMode,
    },
    Asym {
        model: AsymModel,
        alphas: Vec<f64>,
        sizes: Vec<usize>,
    },
    Flow {
        chain: ChainSource,
        zetas: Vec<f64>,
        alphas: Vec<f64>,
        sizes: Vec<usize>,
        mode: CorrelationMode,
    },
    ThetaEntropy {
        chain: ChainSource,
        alpha: f64,
        size: usize,
        check_direct: bool,
    },
    Multi {
        chain: ChainSource,
        alphas: Vec<f64>,
        intervals: Vec<(i64, i64)>,
        mode: CorrelationMode,
    },
    Figures {
        which: u8,
        alpha: f64,
        sizes: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out_dir: PathBuf,
    pub jobs: usize,
    pub tol: f64,
}

pub const USAGE: &str = "usage: chain-entropy <command> [flags]

commands:
  classify       phase classification, pinchings and Fermi insertions
  entropy        Renyi entropies of a (multi-)interval subsystem
  asym           closed-form asymptotics (critxx / ising / xxdm / aef)
  flow           boost flow of the entropy vs the conjectured shift
  theta-entropy  theta-function entropy of a gapped real chain
  multi          disjoint intervals: direct vs product formula
  figures        scan protocols (3, 4 or 5)

flags:
  --chain <path>           chain specification JSON
  --xydm g,s,h             nearest-neighbour parameters
  --alpha <csv>            Renyi indices (default 2)
  --X <csv>                subsystem sizes (default 100)
  --zeta <f>|start:stop:step  boost rapidity or grid (default 0:0.5:0.1)
  --mobius a_re,a_im,..    general map (8 entries) for classify admissibility
  --intervals a:b[,c:d..]  site intervals (default 1:X)
  --mode finite:<N>|thermo Fourier mode (default thermo)
  --model <spec>           critxx:<h> | ising:<g> | xxdm:<s>,<h> | aef:<t1,t2,..>
  --which <3|4|5>          figure protocol
  --check-direct           also diagonalize directly (theta-entropy)
  --out <dir>              output directory (default .)
  --jobs <n>               worker threads (default all)
  --tol <f>                quadrature target (default 1e-10)
";

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Usage(format!("{what}: not a number: {s}")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Usage(format!("{what}: not an integer: {s}")))
}

fn parse_csv_f64(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|p| parse_f64(p.trim(), what)).collect()
}

fn parse_zeta_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return Ok(vec![parse_f64(parts[0], "--zeta")?]);
    }
    if parts.len() != 3 {
        return Err(Error::Usage(format!(
            "--zeta expects a float or start:stop:step, got {s}"
        )));
    }
    let start = parse_f64(parts[0], "--zeta")?;
    let stop = parse_f64(parts[1], "--zeta")?;
    let step = parse_f64(parts[2], "--zeta")?;
    if step <= 0.0 || stop < start {
        return Err(Error::Usage(
            "--zeta needs stop >= start and step > 0".into(),
        ));
    }
    let mut grid = Vec::new();
    let n = ((stop - start) / step).round() as usize;
    for k in 0..=n {
        grid.push(start + step * k as f64);
    }
    Ok(grid)
}

fn parse_intervals(s: &str) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let bits: Vec<&str> = part.split(':').collect();
        if bits.len() != 2 {
            return Err(Error::Usage(format!("interval must be a:b, got {part}")));
        }
        let a = bits[0]
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Usage(format!("bad interval bound {}", bits[0])))?;
        let b = bits[1]
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Usage(format!("bad interval bound {}", bits[1])))?;
        out.push((a, b));
    }
    Ok(out)
}

fn parse_model(s: &str) -> Result<AsymModel> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Usage(format!("--model expects kind:params, got {s}")))?;
    match kind {
        "critxx" => Ok(AsymModel::CriticalXx {
            h: parse_f64(rest, "--model critxx")?,
        }),
        "ising" => Ok(AsymModel::Ising {
            gamma: parse_f64(rest, "--model ising")?,
        }),
        "xxdm" => {
            let v = parse_csv_f64(rest, "--model xxdm")?;
            if v.len() != 2 {
                return Err(Error::Usage("--model xxdm expects s,h".into()));
            }
            Ok(AsymModel::XxDm { s: v[0], h: v[1] })
        }
        "aef" => Ok(AsymModel::Aef {
            angles: parse_csv_f64(rest, "--model aef")?,
        }),
        other => Err(Error::Usage(format!("unknown model kind {other}"))),
    }
}

/// Parse the command line into a validated run configuration.
pub fn parse_config(args: &[String]) -> Result<RunConfig> {
    if args.is_empty() {
        return Err(Error::Usage(USAGE.into()));
    }
    let command_name = args[0].as_str();
    let mut chain: Option<ChainSource> = None;
    let mut alphas = vec![2.0];
    let mut sizes = vec![100usize];
    let mut zetas = parse_zeta_grid("0:0.5:0.1")?;
    let mut zeta_explicit = false;
    let mut mobius_map: Option<MobiusMap> = None;
    let mut intervals: Option<Vec<(i64, i64)>> = None;
    let mut mode = CorrelationMode::thermodynamic();
    let mut model: Option<AsymModel> = None;
    let mut which = 3u8;
    let mut check_direct = false;
    let mut out_dir = PathBuf::from(".");
    let mut jobs = 0usize;
    let mut tol = 1e-10;

    let mut i = 1;
    let expect = |i: &mut usize| -> Result<&String> {
        *i += 1;
        args.get(*i)
            .ok_or_else(|| Error::Usage(format!("flag {} needs a value", args[*i - 1])))
    };
    while i < args.len() {
        match args[i].as_str() {
            "--chain" => chain = Some(ChainSource::File(PathBuf::from(expect(&mut i)?))),
            "--xydm" => {
                let v = parse_csv_f64(expect(&mut i)?, "--xydm")?;
                if v.len() != 3 {
                    return Err(Error::Usage("--xydm expects gamma,s,h".into()));
                }
                chain = Some(ChainSource::XyDm {
                    gamma: v[0],
                    s: v[1],
                    h: v[2],
                });
            }
            "--alpha" => {
                alphas = parse_csv_f64(expect(&mut i)?, "--alpha")?;
                if alphas.iter().any(|&a| a <= 0.0) {
                    return Err(Error::Usage("Renyi indices must be positive".into()));
                }
            }
            "--X" => {
                sizes = expect(&mut i)?
                    .split(',')
                    .map(|p| parse_usize(p.trim(), "--X"))
                    .collect::<Result<_>>()?;
                if sizes.contains(&0) {
                    return Err(Error::Usage("subsystem sizes must be positive".into()));
                }
            }
            "--zeta" => {
                zetas = parse_zeta_grid(expect(&mut i)?)?;
                zeta_explicit = true;
            }
            "--mobius" => {
                let v = parse_csv_f64(expect(&mut i)?, "--mobius")?;
                if v.len() != 8 {
                    return Err(Error::Usage(
                        "--mobius expects a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im".into(),
                    ));
                }
                mobius_map = Some(MobiusMap::new(
                    C64::new(v[0], v[1]),
                    C64::new(v[2], v[3]),
                    C64::new(v[4], v[5]),
                    C64::new(v[6], v[7]),
                )?);
            }
            "--intervals" => intervals = Some(parse_intervals(expect(&mut i)?)?),
            "--mode" => {
                let v = expect(&mut i)?;
                mode = if v == "thermo" {
                    CorrelationMode::thermodynamic()
                } else if let Some(n) = v.strip_prefix("finite:") {
                    CorrelationMode::FiniteChain(parse_usize(n, "--mode finite")?)
                } else {
                    return Err(Error::Usage(format!(
                        "--mode expects thermo or finite:<N>, got {v}"
                    )));
                };
            }
            "--model" => model = Some(parse_model(expect(&mut i)?)?),
            "--which" => {
                which = expect(&mut i)?
                    .parse::<u8>()
                    .map_err(|_| Error::Usage("--which expects 3, 4 or 5".into()))?;
                if !(3..=5).contains(&which) {
                    return Err(Error::Usage("--which expects 3, 4 or 5".into()));
                }
            }
            "--check-direct" => check_direct = true,
            "--out" => out_dir = PathBuf::from(expect(&mut i)?),
            "--jobs" => jobs = parse_usize(expect(&mut i)?, "--jobs")?,
            "--tol" => {
                tol = parse_f64(expect(&mut i)?, "--tol")?;
                if tol <= 0.0 || tol > 1e-2 {
                    return Err(Error::Usage("--tol must be in (0, 1e-2]".into()));
                }
            }
            other => return Err(Error::Usage(format!("unknown flag {other}\n{USAGE}"))),
        }
        i += 1;
    }

    let need_chain = |chain: Option<ChainSource>| -> Result<ChainSource> {
        chain.ok_or_else(|| Error::Usage("this command needs --chain or --xydm".into()))
    };
    let default_intervals = |intervals: Option<Vec<(i64, i64)>>, x: usize| {
        intervals.unwrap_or_else(|| vec![(1, x as i64)])
    };
    let command = match command_name {
        "classify" => Command::Classify {
            chain: need_chain(chain)?,
            map: match mobius_map {
                Some(m) => Some(m),
                None if zeta_explicit => Some(MobiusMap::boost(zetas[0])),
                None => None,
            },
        },
        "entropy" => Command::Entropy {
            chain: need_chain(chain)?,
            intervals: default_intervals(intervals, sizes[0]),
            alphas,
            mode,
        },
        "asym" => Command::Asym {
            model: model.ok_or_else(|| Error::Usage("asym needs --model".into()))?,
            alphas,
            sizes,
        },
        "flow" => Command::Flow {
            chain: need_chain(chain)?,
            zetas,
            alphas,
            sizes,
            mode,
        },
        "theta-entropy" => Command::ThetaEntropy {
            chain: need_chain(chain)?,
            alpha: alphas[0],
            size: sizes[0],
            check_direct,
        },
        "multi" => Command::Multi {
            chain: need_chain(chain)?,
            intervals: intervals.ok_or_else(|| Error::Usage("multi needs --intervals".into()))?,
            alphas,
            mode,
        },
        "figures" => Command::Figures {
            which,
            alpha: alphas[0],
            sizes,
        },
        other => return Err(Error::Usage(format!("unknown command {other}\n{USAGE}"))),
    };
    Ok(RunConfig {
        command,
        out_dir,
        jobs,
        tol,
    })
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn provenance(cmd: &str, detail: &str, tol: f64) -> String {
    format!("# chain-entropy {cmd}\n# {detail}\n# tol {tol:e}\n")
}

/// Execute the configured command; returns the written artifact paths.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    if config.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("worker pool: {e}")))?;
        pool.install(|| run_inner(config))
    } else {
        run_inner(config)
    }
}

fn run_inner(config: &RunConfig) -> Result<Vec<PathBuf>> {
    match &config.command {
        Command::Classify { chain, map } => run_classify(config, chain, map.as_ref()),
        Command::Entropy {
            chain,
            alphas,
            intervals,
            mode,
        } => run_entropy(config, chain, alphas, intervals, *mode),
        Command::Asym {
            model,
            alphas,
            sizes,
        } => run_asym(config, model, alphas, sizes),
        Command::Flow {
            chain,
            zetas,
            alphas,
            sizes,
            mode,
        } => run_flow(config, chain, zetas, alphas, sizes, *mode),
        Command::ThetaEntropy {
            chain,
            alpha,
            size,
            check_direct,
        } => run_theta_entropy(config, chain, *alpha, *size, *check_direct),
        Command::Multi {
            chain,
            alphas,
            intervals,
            mode,
        } => run_multi(config, chain, alphas, intervals, *mode),
        Command::Figures {
            which,
            alpha,
            sizes,
        } => run_figures(config, *which, *alpha, sizes),
    }
}

fn class_name(c: CriticalClass) -> &'static str {
    match c {
        CriticalClass::Gapped => "gapped",
        CriticalClass::CriticalParityPreservingVacuum => "critical-parity-preserving",
        CriticalClass::CriticalDiracSea => "critical-dirac-sea",
    }
}

fn run_classify(
    config: &RunConfig,
    source: &ChainSource,
    map: Option<&MobiusMap>,
) -> Result<Vec<PathBuf>> {
    let chain = source.load()?;
    let report = chain.classify(config.tol)?;
    let mut doc = String::new();
    let _ = writeln!(doc, "{{");
    let _ = writeln!(doc, "  \"class\": \"{}\",", class_name(report.class));
    let _ = writeln!(doc, "  \"R\": {},", report.r);
    let _ = writeln!(doc, "  \"Q\": {},", report.q);
    let fmt_points = |pts: &[C64]| -> String {
        let inner: Vec<String> = pts
            .iter()
            .map(|z| format!("[{:.12e}, {:.12e}]", z.re, z.im))
            .collect();
        format!("[{}]", inner.join(", "))
    };
    let _ = writeln!(doc, "  \"pinchings\": {},", fmt_points(&report.pinchings));
    let _ = writeln!(doc, "  \"insertions\": {},", fmt_points(&report.insertions));
    let arcs: Vec<String> = report
        .dirac_intervals
        .iter()
        .map(|(a, b)| format!("[{a:.12e}, {b:.12e}]"))
        .collect();
    let sep = if map.is_some() { "," } else { "" };
    let _ = writeln!(doc, "  \"dirac_intervals\": [{}]{sep}", arcs.join(", "));
    if let Some(m) = map {
        let curve = chain.spectral_curve(config.tol)?;
        let verdict = m.is_admissible(&curve, config.tol);
        let _ = writeln!(doc, "  \"map\": {{");
        let _ = writeln!(doc, "    \"admissible\": {},", verdict.admissible);
        let _ = writeln!(doc, "    \"side_preserved\": {},", verdict.side_preserved);
        let _ = writeln!(
            doc,
            "    \"quartet_preserved\": {},",
            verdict.quartet_preserved
        );
        let _ = writeln!(doc, "    \"indeterminate\": {},", verdict.indeterminate);
        if verdict.admissible {
            let shift = mobius::predicted_shift(2.0, m, &report, 1)?;
            let _ = writeln!(
                doc,
                "    \"entropy_shift_alpha2\": {:.12e}",
                shift.entropy_shift
            );
        } else {
            let _ = writeln!(doc, "    \"entropy_shift_alpha2\": null");
        }
        let _ = writeln!(doc, "  }}");
    }
    let _ = writeln!(doc, "}}");
    println!(
        "{}: class {}, R = {}, Q = {}",
        source.describe(),
        class_name(report.class),
        report.r,
        report.q
    );
    Ok(vec![write_artifact(
        &config.out_dir,
        "classify.json",
        &doc,
    )?])
}

fn run_entropy(
    config: &RunConfig,
    source: &ChainSource,
    alphas: &[f64],
    intervals: &[(i64, i64)],
    mode: CorrelationMode,
) -> Result<Vec<PathBuf>> {
    let chain = source.load()?;
    let sub = SubsystemSpec::new(intervals.to_vec())?;
    let v = correlation::build_correlation(&chain, &sub, mode)?;
    let spectrum = correlation::entanglement_spectrum(&v)?;
    let mut artifacts = Vec::new();
    let mut csv = provenance("entropy", &source.describe(), config.tol);
    csv.push_str("alpha,X_size,S,Z,spectrum_path\n");
    let spec_name = "spectrum.csv".to_string();
    for &alpha in alphas {
        let res = correlation::renyi_from_spectrum(&spectrum, alpha)?;
        let _ = writeln!(
            csv,
            "{alpha},{},{:.12e},{:.12e},{spec_name}",
            sub.len(),
            res.s_alpha,
            res.z_alpha
        );
    }
    let mut spec_csv = provenance("entropy spectrum", &source.describe(), config.tol);
    spec_csv.push_str("level,nu\n");
    for (l, nu) in spectrum.iter().enumerate() {
        let _ = writeln!(spec_csv, "{l},{nu:.12e}");
    }
    artifacts.push(write_artifact(&config.out_dir, "entropy.csv", &csv)?);
    artifacts.push(write_artifact(&config.out_dir, &spec_name, &spec_csv)?);
    Ok(artifacts)
}

fn run_asym(
    config: &RunConfig,
    model: &AsymModel,
    alphas: &[f64],
    sizes: &[usize],
) -> Result<Vec<PathBuf>> {
    let mut csv = provenance("asym", "closed-form asymptotics", config.tol);
    csv.push_str("model,params,alpha,X,S_asym\n");
    for &alpha in alphas {
        for &x in sizes {
            let (name, params, value) = match model {
                AsymModel::CriticalXx { h } => (
                    "critxx",
                    format!("{h}"),
                    asymptotics::closed_form(
                        ClosedFormModel::CriticalXx { h: *h },
                        x as f64,
                        alpha,
                    )?,
                ),
                AsymModel::Ising { gamma } => (
                    "ising",
                    format!("{gamma}"),
                    asymptotics::closed_form(
                        ClosedFormModel::IsingLine { gamma: *gamma },
                        x as f64,
                        alpha,
                    )?,
                ),
                AsymModel::XxDm { s, h } => (
                    "xxdm",
                    format!("{s};{h}"),
                    asymptotics::closed_form(
                        ClosedFormModel::XxDm { s: *s, h: *h },
                        x as f64,
                        alpha,
                    )?,
                ),
                AsymModel::Aef { angles } => {
                    let points: Vec<C64> = angles.iter().map(|&t| C64::new(0.0, t).exp()).collect();
                    let joined: Vec<String> = angles.iter().map(|t| format!("{t}")).collect();
                    (
                        "aef",
                        joined.join(";"),
                        asymptotics::entropy_aef(&points, x as f64, alpha)?,
                    )
                }
            };
            let _ = writeln!(csv, "{name},{params},{alpha},{x},{value:.12e}");
        }
    }
    Ok(vec![write_artifact(&config.out_dir, "asym.csv", &csv)?])
}

fn run_flow(
    config: &RunConfig,
    source: &ChainSource,
    zetas: &[f64],
    alphas: &[f64],
    sizes: &[usize],
    mode: CorrelationMode,
) -> Result<Vec<PathBuf>> {
    let chain = source.load()?;
    let mut csv = provenance("flow", &source.describe(), config.tol);
    csv.push_str("alpha,X,zeta,theta_marker,S_numeric,S_predicted\n");
    for &alpha in alphas {
        for &x in sizes {
            let sub = SubsystemSpec::single(x);
            let rows = correlation::entropy_flow_scan(&chain, zetas, alpha, &sub, mode)?;
            for row in rows {
                let marker = flow_marker(&row.chain, config.tol);
                let _ = writeln!(
                    csv,
                    "{alpha},{x},{:.6},{marker:.9},{:.12e},{:.12e}",
                    row.zeta, row.s_numeric, row.s_predicted
                );
            }
        }
    }
    Ok(vec![write_artifact(&config.out_dir, "flow.csv", &csv)?])
}

/// First discontinuity angle of the chain: a readable flow coordinate.
fn flow_marker(chain: &CouplingSet, tol: f64) -> f64 {
    chain
        .classify(tol)
        .map(|r| {
            r.pinchings
                .iter()
                .chain(r.insertions.iter())
                .map(|z| z.arg().abs())
                .fold(f64::NAN, |acc, v| if acc.is_nan() { v } else { acc.min(v) })
        })
        .unwrap_or(f64::NAN)
}

fn run_theta_entropy(
    config: &RunConfig,
    source: &ChainSource,
    alpha: f64,
    size: usize,
    check_direct: bool,
) -> Result<Vec<PathBuf>> {
    let chain = source.load()?;
    let curve = HyperellipticCurve::from_chain(&chain)?;
    let factor = DeterminantFactor::from_curve(&curve)?;
    let s_theta = entropy_contour(&factor, alpha, size)?;
    let mut csv = provenance("theta-entropy", &source.describe(), config.tol);
    csv.push_str("alpha,X,S_theta,S_direct,diff\n");
    if check_direct {
        let s_direct = correlation::subsystem_entropy(
            &chain,
            &SubsystemSpec::single(size),
            alpha,
            CorrelationMode::thermodynamic(),
        )?
        .s_alpha;
        let _ = writeln!(
            csv,
            "{alpha},{size},{s_theta:.12e},{s_direct:.12e},{:.12e}",
            (s_theta - s_direct).abs()
        );
    } else {
        let _ = writeln!(csv, "{alpha},{size},{s_theta:.12e},,");
    }

    // structured dump of the curve data
    let (mu, nu) = curve.characteristics();
    let mut doc = String::new();
    let _ = writeln!(doc, "{{");
    let list = |v: &[f64]| -> String {
        v.iter()
            .map(|x| format!("{x}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let roots_re: Vec<String> = curve
        .roots
        .iter()
        .map(|z| format!("{:.12e}", z.re))
        .collect();
    let roots_im: Vec<String> = curve
        .roots
        .iter()
        .map(|z| format!("{:.12e}", z.im))
        .collect();
    let eps: Vec<String> = curve.eps.iter().map(|e| format!("{e}")).collect();
    let _ = writeln!(doc, "  \"roots_re\": [{}],", roots_re.join(", "));
    let _ = writeln!(doc, "  \"roots_im\": [{}],", roots_im.join(", "));
    let _ = writeln!(doc, "  \"epsilons\": [{}],", eps.join(", "));
    let g = factor.pi_mat.rows;
    let mut pi_re = Vec::new();
    let mut pi_im = Vec::new();
    for i in 0..g {
        let re_row: Vec<String> = (0..g)
            .map(|j| format!("{:.12e}", factor.pi_mat[(i, j)].re))
            .collect();
        let im_row: Vec<String> = (0..g)
            .map(|j| format!("{:.12e}", factor.pi_mat[(i, j)].im))
            .collect();
        pi_re.push(format!("[{}]", re_row.join(", ")));
        pi_im.push(format!("[{}]", im_row.join(", ")));
    }
    let _ = writeln!(doc, "  \"Pi_re\": [{}],", pi_re.join(", "));
    let _ = writeln!(doc, "  \"Pi_im\": [{}],", pi_im.join(", "));
    let _ = writeln!(doc, "  \"mu\": [{}],", list(&mu));
    let _ = writeln!(doc, "  \"nu\": [{}]", list(&nu));
    let _ = writeln!(doc, "}}");

    Ok(vec![
        write_artifact(&config.out_dir, "theta_entropy.csv", &csv)?,
        write_artifact(&config.out_dir, "theta_data.json", &doc)?,
    ])
}

fn run_multi(
    config: &RunConfig,
    source: &ChainSource,
    alphas: &[f64],
    intervals: &[(i64, i64)],
    mode: CorrelationMode,
) -> Result<Vec<PathBuf>> {
    let chain = source.load()?;
    let sub = SubsystemSpec::new(intervals.to_vec())?;
    let mut csv = provenance("multi", &source.describe(), config.tol);
    csv.push_str("alpha,intervals,S_direct,S_product,diff\n");
    let desc: Vec<String> = intervals.iter().map(|(a, b)| format!("{a}:{b}")).collect();
    let desc = desc.join(";");
    for &alpha in alphas {
        let direct = correlation::subsystem_entropy(&chain, &sub, alpha, mode)?.s_alpha;
        let product = product_formula_entropy(&chain, intervals, alpha, mode)?;
        let _ = writeln!(
            csv,
            "{alpha},{desc},{direct:.12e},{product:.12e},{:.12e}",
            (direct - product).abs()
        );
    }
    Ok(vec![write_artifact(&config.out_dir, "multi.csv", &csv)?])
}

/// Product-formula prediction with numerically computed single-interval
/// entropies at the pairwise endpoint separations.
pub fn product_formula_entropy(
    chain: &CouplingSet,
    intervals: &[(i64, i64)],
    alpha: f64,
    mode: CorrelationMode,
) -> Result<f64> {
    let mut endpoints = Vec::new();
    for &(a, b) in intervals {
        endpoints.push(a as f64 - 0.5);
        endpoints.push(b as f64 + 0.5);
    }
    // pairwise separations are integers with the half-site convention
    let mut lengths = Vec::new();
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            lengths.push((endpoints[j] - endpoints[i]).round() as usize);
        }
    }
    lengths.sort_unstable();
    lengths.dedup();
    let singles: Vec<(usize, f64)> = lengths
        .iter()
        .map(|&len| {
            correlation::subsystem_entropy(chain, &SubsystemSpec::single(len), alpha, mode)
                .map(|r| (len, r.s_alpha))
        })
        .collect::<Result<_>>()?;
    let lookup = |len: f64| -> f64 {
        let l = len.round() as usize;
        singles
            .iter()
            .find(|(n, _)| *n == l)
            .map(|(_, s)| *s)
            .unwrap_or(f64::NAN)
    };
    asymptotics::multiinterval_entropy(lookup, &endpoints)
}

fn run_figures(config: &RunConfig, which: u8, alpha: f64, sizes: &[usize]) -> Result<Vec<PathBuf>> {
    match which {
        3 => figure_pinch_flow(config, alpha, sizes, false),
        4 => figure_pinch_flow(config, alpha, sizes, true),
        5 => figure_constant_entropy_map(config, alpha, sizes[0]),
        _ => Err(Error::Usage("--which expects 3, 4 or 5".into())),
    }
}

/// Boost-flow scans of the critical chains: numeric entropy against the
/// conjectured homogeneous-field shift, one row per (X, zeta).
fn figure_pinch_flow(
    config: &RunConfig,
    alpha: f64,
    sizes: &[usize],
    dirac: bool,
) -> Result<Vec<PathBuf>> {
    let theta0 = 3.0 * PI / 4.0;
    let chain = if dirac {
        models::dirac_sea_chain()
    } else {
        models::critical_pinch_chain(theta0)
    };
    // boost grid mapping the leading angle from 3 pi/4 towards pi/4
    let targets: Vec<f64> = (0..11)
        .map(|k| theta0 - (theta0 - PI / 4.0) * k as f64 / 10.0)
        .collect();
    let zetas: Vec<f64> = targets
        .iter()
        .map(|&t| 0.5 * ((theta0 / 2.0).tan() / (t / 2.0).tan()).ln())
        .collect();
    let name = if dirac { "fig4.csv" } else { "fig3.csv" };
    let mut csv = provenance(
        "figures",
        if dirac {
            "dirac-sea flow protocol"
        } else {
            "parity-preserving pinch flow protocol"
        },
        config.tol,
    );
    csv.push_str("X,zeta,theta_marker,S_numeric,S_conjectured\n");
    for &x in sizes {
        let sub = SubsystemSpec::single(x);
        let rows = correlation::entropy_flow_scan(
            &chain,
            &zetas,
            alpha,
            &sub,
            CorrelationMode::thermodynamic(),
        )?;
        for row in rows {
            let marker = flow_marker(&row.chain, config.tol);
            let _ = writeln!(
                csv,
                "{x},{:.6},{marker:.9},{:.12e},{:.12e}",
                row.zeta, row.s_numeric, row.s_predicted
            );
        }
    }
    Ok(vec![write_artifact(&config.out_dir, name, &csv)?])
}

/// Entropy landscape over the anisotropy/field plane with boost-flow
/// trajectories riding the constant-entropy conics.
fn figure_constant_entropy_map(config: &RunConfig, alpha: f64, x: usize) -> Result<Vec<PathBuf>> {
    use rayon::prelude::*;
    let mut csv = provenance("figures", "constant-entropy map", config.tol);
    csv.push_str("kind,gamma,h,zeta,S\n");
    let gammas: Vec<f64> = (1..=8).map(|k| 0.25 * k as f64).collect();
    let fields: Vec<f64> = (0..=7).map(|k| 2.25 + 0.4 * k as f64).collect();
    let sub = SubsystemSpec::single(x);
    let mut grid_jobs = Vec::new();
    for &g in &gammas {
        for &h in &fields {
            grid_jobs.push((g, h));
        }
    }
    let grid_rows: Vec<Result<String>> = grid_jobs
        .par_iter()
        .map(|&(g, h)| {
            let chain = CouplingSet::xy_dm(g, 0.0, h);
            if chain.classify(1e-9)?.class != CriticalClass::Gapped {
                return Ok(String::new());
            }
            let s = correlation::subsystem_entropy(
                &chain,
                &sub,
                alpha,
                CorrelationMode::thermodynamic(),
            )?
            .s_alpha;
            Ok(format!("grid,{g},{h},0,{s:.12e}\n"))
        })
        .collect();
    for row in grid_rows {
        csv.push_str(&row?);
    }
    // flow trajectories through three seeds
    for (g0, h0) in [(1.0, 3.0), (1.5, 4.0), (0.5, 2.6)] {
        for k in 0..=10 {
            let zeta = -0.25 + 0.05 * k as f64;
            let (g, _, h) = mobius::transform_xydm(zeta, g0, 0.0, h0)?;
            let chain = CouplingSet::xy_dm(g, 0.0, h);
            let s = correlation::subsystem_entropy(
                &chain,
                &sub,
                alpha,
                CorrelationMode::thermodynamic(),
            )?
            .s_alpha;
            let _ = writeln!(csv, "flow,{g:.9},{h:.9},{zeta:.3},{s:.12e}");
        }
    }
    Ok(vec![write_artifact(&config.out_dir, "fig5.csv", &csv)?])
}

/// Entry point used by the binary: returns the process exit code.
pub fn main_entry(args: &[String]) -> i32 {
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    match run(&config) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
