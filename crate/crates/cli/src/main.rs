//! kmx: exact construction and certification of affine Kac-Moody
//! highest weight modules.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use kmx_cli::schema::*;
use kmx_core::affine::AffineAlgebra;
use kmx_core::cartan::{classify, validate_gcm};
use kmx_core::chevalley::{finite_gcm, finite_roots, structure_constants, ChevalleyBasis};
use kmx_core::rootdata::{catalog_by_parts, label};
use kmx_core::scalar::{rat_to_string, Rat};
use kmx_core::verma::{check_unitarizable, gram_all, HighestWeightSpec, Verdict};
use kmx_core::weights::fundamental_weights;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "kmx", version, about = "Exact affine Kac-Moody toolkit")]
struct Cli {
    /// Write the JSON output to this path instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a generalized Cartan matrix and classify it
    Classify {
        /// JSON array of arrays of integers
        #[arg(long)]
        matrix: String,
    },
    /// Enumerate roots of a catalog family with |j| <= jmax
    Roots {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        twist: usize,
        #[arg(long, default_value_t = 2)]
        jmax: usize,
    },
    /// Fundamental weights and the mu coefficients of a family
    Weights {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        twist: usize,
    },
    /// Bracket two loop elements over the finite part of a family
    Bracket {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        twist: usize,
        /// LoopElement JSON `{"terms":[{"deg":1,"sym":"E[1]","coef":"1"}],"c":"0","d":"0"}`
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Exact Gram certificates per weight space of an integrable module
    Gram {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        twist: usize,
        /// Comma-separated values of Lambda on h_0..h_l
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value = "compact")]
        omega: String,
    },
    /// Certify positive semidefiniteness up to the depth cutoff
    Unitarize {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        twist: usize,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Gram certificates of an elementary-class module
    Elementary {
        /// Finite hermitian-symmetric algebra letter
        #[arg(long, default_value = "A")]
        family: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Noncompact simple node (1-based)
        #[arg(long, default_value_t = 1)]
        nc: usize,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        phases: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
    /// Gram certificates of an exceptional-class module over z^k sl(n+1)
    Exceptional {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        moments: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(json) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, json + "\n") {
                    eprintln!("{{\"error\":\"{e}\"}}");
                    std::process::exit(1);
                }
            } else {
                emit(&json);
            }
        }
        Err(e) => {
            let payload = serde_json::to_string(&ErrorOut {
                error: format!("{e:#}"),
            })
            .unwrap_or_else(|_| format!("{{\"error\":\"{e}\"}}"));
            emit(&payload);
            std::process::exit(1);
        }
    }
}

/// Write one line to stdout; a consumer closing the pipe early is not an
/// error.
fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn dispatch(cmd: &Command) -> Result<String> {
    let json = match cmd {
        Command::Classify { matrix } => {
            let entries: Vec<Vec<i64>> =
                serde_json::from_str(matrix).context("parsing --matrix")?;
            let gcm = validate_gcm(entries)?;
            let c = classify(&gcm);
            serde_json::to_string(&ClassifyOut {
                kind: c.kind.to_string(),
                family: c.family,
                det: rat_to_string(&c.det),
            })?
        }
        Command::Roots {
            family,
            rank,
            twist,
            jmax,
        } => {
            let r = catalog_entry(family, *rank, *twist)?;
            let roots = r.enumerate_roots(*jmax);
            serde_json::to_string(&RootsOut {
                family: r.family.clone(),
                delta: r.delta.iter().map(rat_str).collect(),
                roots: roots
                    .into_iter()
                    .map(|root| RootOut {
                        coords: root.coords.iter().map(rat_str).collect(),
                        imaginary: root.is_imaginary,
                        mult: root.multiplicity,
                    })
                    .collect(),
            })?
        }
        Command::Weights {
            family,
            rank,
            twist,
        } => {
            let r = catalog_entry(family, *rank, *twist)?;
            let fw = fundamental_weights(&r)?;
            serde_json::to_string(&WeightsOut {
                mu: fw.mu.iter().map(rat_str).collect(),
                lambda: fw
                    .lambdas
                    .iter()
                    .map(|lam| LambdaOut {
                        h: lam.on_h.iter().map(rat_str).collect(),
                        d: rat_str(&lam.on_d),
                    })
                    .collect(),
            })?
        }
        Command::Bracket {
            family,
            rank,
            twist,
            x,
            y,
        } => {
            if *twist != 1 {
                bail!("bracket is defined on the untwisted loop realization");
            }
            let chev = finite_part(family, *rank, *twist)?;
            let alg = AffineAlgebra::new(chev);
            let xe = loop_elem_from_io(&serde_json::from_str(x).context("parsing --x")?)?;
            let ye = loop_elem_from_io(&serde_json::from_str(y).context("parsing --y")?)?;
            let out = alg.bracket(&xe, &ye);
            serde_json::to_string(&loop_elem_to_io(&out))?
        }
        Command::Gram {
            family,
            rank,
            twist,
            weight,
            depth,
            omega,
        } => {
            if omega != "compact" {
                bail!("use the elementary/exceptional subcommands for twisted involutions");
            }
            let spec = integrable_spec(family, *rank, *twist, weight)?;
            let certs = gram_all(&spec, *depth)?;
            serde_json::to_string(&GramOut {
                certificates: certs.iter().map(|c| gram_cert_out(&spec, c)).collect(),
            })?
        }
        Command::Unitarize {
            family,
            rank,
            twist,
            weight,
            depth,
        } => {
            let spec = integrable_spec(family, *rank, *twist, weight)?;
            let out = match check_unitarizable(&spec, *depth)? {
                Verdict::PsdCertifiedToDepth(d) => UnitarizeOut {
                    verdict: "PSD".into(),
                    depth: d,
                    weight: None,
                    negative: None,
                },
                Verdict::IndefiniteAt { weight, negative } => UnitarizeOut {
                    verdict: "IndefiniteAt".into(),
                    depth: *depth,
                    weight: Some(weight),
                    negative: Some(negative),
                },
            };
            serde_json::to_string(&out)?
        }
        Command::Elementary {
            family,
            rank,
            nc,
            weights,
            phases,
            depth,
            window,
        } => {
            let chev = finite_chev(family, *rank)?;
            let wfile: ElementaryWeightsFile = read_json(weights)?;
            let pfile: PhasesFile = read_json(phases)?;
            let spec = kmx_core::unitary::ElementarySpec::new(
                weights_from_file(&wfile)?,
                phases_from_file(&pfile)?,
            )?;
            if *nc == 0 {
                bail!("--nc is 1-based");
            }
            let hw = HighestWeightSpec::elementary(chev, *nc - 1, spec, *window)?;
            let hw = apply_env_budget(hw)?;
            let certs = gram_all(&hw, *depth)?;
            serde_json::to_string(&GramOut {
                certificates: certs.iter().map(|c| gram_cert_out(&hw, c)).collect(),
            })?
        }
        Command::Exceptional {
            n,
            moments,
            depth,
            window,
        } => {
            let mfile: MomentsFile = read_json(moments)?;
            let spec = kmx_core::unitary::ExceptionalSpec::new(
                *n,
                mfile.truncation,
                moments_from_file(&mfile)?,
                mfile.positive,
                mfile.infinitely_supported,
            )?;
            let hw = HighestWeightSpec::exceptional(spec, *window)?;
            let hw = apply_env_budget(hw)?;
            let certs = gram_all(&hw, *depth)?;
            serde_json::to_string(&GramOut {
                certificates: certs.iter().map(|c| gram_cert_out(&hw, c)).collect(),
            })?
        }
    };
    Ok(json)
}

fn catalog_entry(
    family: &str,
    rank: usize,
    twist: usize,
) -> Result<kmx_core::rootdata::RealizedRootSystem> {
    let letter = single_letter(family)?;
    catalog_by_parts(letter, rank, twist)
        .with_context(|| format!("no catalog entry {}", label(letter, rank, twist)))
}

fn single_letter(family: &str) -> Result<char> {
    let mut it = family.chars();
    match (it.next(), it.next()) {
        (Some(c), None) if c.is_ascii_uppercase() => Ok(c),
        _ => Err(anyhow!("--family must be a single letter A..G")),
    }
}

/// Finite Chevalley basis of the affine family's horizontal subalgebra.
fn finite_part(family: &str, rank: usize, twist: usize) -> Result<ChevalleyBasis> {
    let r = catalog_entry(family, rank, twist)?;
    let gcm = r.cartan_from_roots()?.delete_index(0);
    Ok(structure_constants(&finite_roots(&gcm)?))
}

/// Finite Chevalley basis named directly by letter and rank.
fn finite_chev(family: &str, rank: usize) -> Result<ChevalleyBasis> {
    let letter = single_letter(family)?;
    let gcm =
        finite_gcm(letter, rank).ok_or_else(|| anyhow!("no finite family {letter}_{rank}"))?;
    Ok(structure_constants(&finite_roots(&gcm)?))
}

fn integrable_spec(
    family: &str,
    rank: usize,
    twist: usize,
    weight: &str,
) -> Result<HighestWeightSpec> {
    if twist != 1 {
        bail!("highest weight modules are implemented for untwisted families");
    }
    let chev = finite_part(family, rank, twist)?;
    let m: Vec<Rat> = weight
        .split(',')
        .map(|t| parse_rat(t.trim()))
        .collect::<Result<_>>()
        .context("parsing --weight")?;
    let spec = HighestWeightSpec::affine_borel(chev, m, Rat::from_integer(0.into()))?;
    apply_env_budget(spec)
}

fn apply_env_budget(spec: HighestWeightSpec) -> Result<HighestWeightSpec> {
    match std::env::var("KMX_MAX_TERMS") {
        Ok(v) => {
            let n: u64 = v.parse().context("KMX_MAX_TERMS must be an integer")?;
            Ok(spec.with_max_terms(n))
        }
        Err(_) => Ok(spec),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
