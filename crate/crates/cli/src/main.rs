//! blaschke-dyn: command-line front end for the disk-dynamics library.
//!
//! Subcommands: cheby, ellrat, compose, decompose, monodromy, ritt, pair,
//! orbit, height, intersect, verify. Output is JSON (or CSV where noted)
//! on stdout or --out; identical configuration and seed produce
//! byte-identical output.
//!
//! Exit status: 0 success, 1 verification failure, 2 input validation,
//! 3 numerical failure.

mod io;
mod verify;

use blaschke_core::cheby::cheby_blaschke;
use blaschke_core::dynamics::{
    canonical_height_estimate, naive_height, orbit, orbit_intersection, GaussianRational,
    ProjPoint, DEFAULT_BIT_CAP,
};
use blaschke_core::elliptic::{gamma_of_t, ModularTau};
use blaschke_core::ellrat::{ell_rat_critical_values, ell_rat_fit, EllipticRationalParams};
use blaschke_core::factor::{
    bilu_tichy_pair, block_systems, decompose_recognized, numerical_monodromy, ritt_move_cheby,
    ritt_move_power, BiluTichyCase, Decomposition, MonodromyOptions,
};
use blaschke_core::{Error, C64};
use clap::{Args, Parser, Subcommand};
use io::{ComplexJson, FbpJson, SCHEMA};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "blaschke-dyn",
    about = "Finite Blaschke products: Chebyshev-Blaschke and elliptic rational constructions, \
             monodromy factorization, and exact Q(i) orbit experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the artifact to this path instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the Chebyshev-Blaschke product T_{n,t}
    Cheby {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        /// json: the product document; csv: columns x,T(x) sampled on the
        /// core interval [-gamma(t), gamma(t)]
        #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
        emit: String,
        /// Number of CSV samples
        #[arg(long, default_value_t = 129)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Elliptic rational function n_tau: fitted coefficients / critical values
    Ellrat {
        #[arg(long)]
        n: usize,
        /// Modular parameter as RE,IM (IM > 0)
        #[arg(long)]
        tau: String,
        /// Include the fitted degree-n/degree-n coefficients
        #[arg(long)]
        fit: bool,
        /// Include the predicted critical values (torsion images;
        /// infinity serializes as null)
        #[arg(long)]
        critvals: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compose two products: outer after inner
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split a product along the recognized families
    Decompose {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical monodromy: permutations in cycle notation plus block systems
    Monodromy {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build both sides of a Ritt relation
    Ritt {
        /// power: z^r g(z)^k . z^k = z^k . z^r g(z^k); cheby: the T-swap
        #[arg(long = "move", value_parser = ["power", "cheby"])]
        mv: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Product file for g (power move)
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Construct a pair family from the finiteness theorem
    Pair {
        /// Case: i, ii, iii, iv or v
        #[arg(long, value_parser = ["i", "ii", "iii", "iv", "v"])]
        case: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        /// Disk point as RE,IM
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// Optional product file for the p factor
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact orbit of a point under an exact map
    Orbit {
        /// Path to an exact-map JSON, or the shorthand z^N
        #[arg(long)]
        map: String,
        /// Exact point, e.g. "1/2" or "1/2+1/3*i" (or "inf")
        #[arg(long)]
        point: String,
        #[arg(long)]
        steps: usize,
        /// Bit-size growth cap for orbit entries
        #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
        bit_cap: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Naive height and canonical-height estimate of a point
    Height {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
        bit_cap: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact orbit intersection of two maps
    Intersect {
        #[arg(long = "map-f")]
        map_f: String,
        #[arg(long = "point-x")]
        point_x: String,
        #[arg(long = "map-g")]
        map_g: String,
        #[arg(long = "point-y")]
        point_y: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
        bit_cap: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the identity suites and print a pass/fail table
    Verify {
        /// Run a single suite (default: all of normalization, nesting,
        /// commuting, tt, critvals, gamma0, monodromy, ritt)
        #[arg(long)]
        suite: Option<String>,
        /// Chebyshev parameter used by the suites
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Seed for the randomized draws
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Override the per-suite pass tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            3
        }
    };
    std::process::exit(code);
}

enum CliError {
    Validation(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => CliError::Validation(format!("{e}")),
            _ => CliError::Numerical(format!("{e}")),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

type CliResult = Result<i32, CliError>;

fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    let body = text.trim_end_matches('\n');
    match &output.out {
        Some(path) => std::fs::write(path, format!("{body}\n"))
            .map_err(|e| validation(format!("cannot write {path}: {e}"))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("serialization: {e}")))
}

fn parse_complex_pair(s: &str) -> Result<C64, CliError> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| validation(format!("expected RE,IM, got {s}")))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| validation(format!("bad real part {re}")))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| validation(format!("bad imaginary part {im}")))?;
    Ok(C64::new(re, im))
}

fn parse_point(s: &str) -> Result<ProjPoint, CliError> {
    if s.trim() == "inf" {
        return Ok(ProjPoint::Infinity);
    }
    let x: GaussianRational = s
        .parse()
        .map_err(|e: Error| validation(format!("bad exact point {s}: {e}")))?;
    Ok(ProjPoint::Finite(x))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Cheby {
            n,
            t,
            emit: fmt,
            samples,
            output,
        } => {
            let cb = cheby_blaschke(n, t)?;
            if fmt == "csv" {
                if samples < 2 {
                    return Err(validation("csv needs at least 2 samples"));
                }
                let g_t = gamma_of_t(t)?;
                let mut text = String::from("x,T(x)\n");
                for m in 0..samples {
                    let x = g_t * ((m as f64 / (samples - 1) as f64) * 2.0 - 1.0);
                    let v = cb.product.eval(C64::new(x, 0.0));
                    text.push_str(&format!("{:.17e},{:.17e}\n", x, v.re));
                }
                emit(&output, &text)?;
            } else {
                #[derive(Serialize)]
                struct ChebyDoc {
                    schema: &'static str,
                    n: usize,
                    t: f64,
                    chi: f64,
                    gamma_core: f64,
                    gamma_image: f64,
                    rho: ComplexJson,
                    zeros: Vec<ComplexJson>,
                }
                let doc = ChebyDoc {
                    schema: SCHEMA,
                    n,
                    t,
                    chi: cb.chi,
                    gamma_core: cb.gamma_core()?,
                    gamma_image: cb.gamma_image()?,
                    rho: cb.product.rho().into(),
                    zeros: cb.product.zeros().iter().map(|&z| z.into()).collect(),
                };
                emit(&output, &to_json(&doc)?)?;
            }
            Ok(0)
        }
        Command::Ellrat {
            n,
            tau,
            fit,
            critvals,
            output,
        } => {
            let tau = ModularTau::new(parse_complex_pair(&tau)?)?;
            let params = EllipticRationalParams::new(n, tau)?;
            #[derive(Serialize)]
            struct EllratDoc {
                schema: &'static str,
                n: usize,
                tau: ComplexJson,
                #[serde(skip_serializing_if = "Option::is_none")]
                critical_values: Option<Vec<Option<ComplexJson>>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                numerator: Option<Vec<ComplexJson>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                denominator: Option<Vec<ComplexJson>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                holdout_residual: Option<f64>,
            }
            let mut doc = EllratDoc {
                schema: SCHEMA,
                n,
                tau: tau.value().into(),
                critical_values: None,
                numerator: None,
                denominator: None,
                holdout_residual: None,
            };
            if critvals {
                let cv = ell_rat_critical_values(&params)?;
                doc.critical_values = Some(
                    cv.into_iter()
                        .map(|v| v.finite().map(ComplexJson::from))
                        .collect(),
                );
            }
            if fit {
                let fitted = ell_rat_fit(&params)?;
                doc.numerator = Some(
                    fitted
                        .numerator()
                        .into_iter()
                        .map(ComplexJson::from)
                        .collect(),
                );
                doc.denominator = Some(
                    fitted
                        .denominator()
                        .into_iter()
                        .map(ComplexJson::from)
                        .collect(),
                );
                doc.holdout_residual = Some(fitted.holdout_residual);
            }
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Compose {
            outer,
            inner,
            output,
        } => {
            let f = io::read_fbp(&outer).map_err(validation)?;
            let g = io::read_fbp(&inner).map_err(validation)?;
            let comp = f.compose(&g)?;
            emit(&output, &to_json(&FbpJson::from_product(&comp))?)?;
            Ok(0)
        }
        Command::Decompose { input, output } => {
            let f = io::read_fbp(&input).map_err(validation)?;
            #[derive(Serialize)]
            struct DecomposeDoc {
                schema: &'static str,
                kind: &'static str,
                #[serde(skip_serializing_if = "Option::is_none")]
                outer: Option<FbpJson>,
                #[serde(skip_serializing_if = "Option::is_none")]
                inner: Option<FbpJson>,
                #[serde(skip_serializing_if = "Option::is_none")]
                inner_degrees: Option<Vec<usize>>,
            }
            let doc = match decompose_recognized(&f)? {
                Decomposition::Factors { outer, inner } => DecomposeDoc {
                    schema: SCHEMA,
                    kind: "factors",
                    outer: Some(FbpJson::from_product(&outer)),
                    inner: Some(FbpJson::from_product(&inner)),
                    inner_degrees: None,
                },
                Decomposition::DegreesOnly { inner_degrees } => DecomposeDoc {
                    schema: SCHEMA,
                    kind: "degrees-only",
                    outer: None,
                    inner: None,
                    inner_degrees: Some(inner_degrees),
                },
                Decomposition::Indecomposable => DecomposeDoc {
                    schema: SCHEMA,
                    kind: "indecomposable",
                    outer: None,
                    inner: None,
                    inner_degrees: None,
                },
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Monodromy { input, output } => {
            let f = io::read_fbp(&input).map_err(validation)?;
            let rep = numerical_monodromy(&f, &MonodromyOptions::default())?;
            let systems = block_systems(&rep)?;
            #[derive(Serialize)]
            struct MonodromyDoc {
                schema: &'static str,
                degree: usize,
                base_point: ComplexJson,
                critical_values: Vec<ComplexJson>,
                /// one permutation per critical value, as 1-based cycles
                loops: Vec<Vec<Vec<usize>>>,
                transitive: bool,
                cycle_deficiency: usize,
                block_systems: Vec<Vec<Vec<usize>>>,
            }
            let doc = MonodromyDoc {
                schema: SCHEMA,
                degree: rep.degree,
                base_point: rep.base_point.into(),
                critical_values: rep.critical_values.iter().map(|&v| v.into()).collect(),
                loops: rep
                    .loops
                    .iter()
                    .map(|p| {
                        p.cycles()
                            .into_iter()
                            .filter(|cy| cy.len() > 1)
                            .map(|cy| cy.into_iter().map(|i| i + 1).collect())
                            .collect()
                    })
                    .collect(),
                transitive: rep.is_transitive(),
                cycle_deficiency: rep.total_cycle_deficiency(),
                block_systems: systems
                    .into_iter()
                    .map(|s| {
                        s.blocks
                            .into_iter()
                            .map(|b| b.into_iter().map(|i| i + 1).collect())
                            .collect()
                    })
                    .collect(),
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Ritt {
            mv,
            k,
            r,
            g,
            p,
            q,
            t,
            output,
        } => {
            let (lhs, rhs) = match mv.as_str() {
                "power" => {
                    let k = k.ok_or_else(|| validation("--move power needs --k"))?;
                    let r = r.ok_or_else(|| validation("--move power needs --r"))?;
                    let g = match g {
                        Some(path) => io::read_fbp(&path).map_err(validation)?,
                        None => return Err(validation("--move power needs --g FILE")),
                    };
                    ritt_move_power(k, r, &g)?
                }
                "cheby" => {
                    let p = p.ok_or_else(|| validation("--move cheby needs --p"))?;
                    let q = q.ok_or_else(|| validation("--move cheby needs --q"))?;
                    let t = t.ok_or_else(|| validation("--move cheby needs --t"))?;
                    ritt_move_cheby(p, q, t)?
                }
                _ => unreachable!("clap validates"),
            };
            #[derive(Serialize)]
            struct RittDoc {
                schema: &'static str,
                lhs: FbpJson,
                rhs: FbpJson,
            }
            let doc = RittDoc {
                schema: SCHEMA,
                lhs: FbpJson::from_product(&lhs),
                rhs: FbpJson::from_product(&rhs),
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Pair {
            case,
            m,
            n,
            r,
            t,
            a,
            b,
            p,
            output,
        } => {
            let p_fbp = match p {
                Some(path) => Some(io::read_fbp(&path).map_err(validation)?),
                None => None,
            };
            let parse_pt = |s: Option<String>, name: &str| -> Result<C64, CliError> {
                parse_complex_pair(
                    &s.ok_or_else(|| validation(format!("this case needs --{name} RE,IM")))?,
                )
            };
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| validation(format!("this case needs --{name}")))
            };
            let spec = match case.as_str() {
                "i" => BiluTichyCase::PowerPair {
                    m: need(m, "m")?,
                    r: need(r, "r")?,
                    p: p_fbp,
                },
                "ii" => BiluTichyCase::SquareFamily {
                    a: parse_pt(a, "a")?,
                    p: p_fbp,
                },
                "iii" => BiluTichyCase::ChebyCoprime {
                    m: need(m, "m")?,
                    n: need(n, "n")?,
                    t: t.ok_or_else(|| validation("case iii needs --t"))?,
                },
                "iv" => BiluTichyCase::ChebyNegated {
                    m: need(m, "m")?,
                    n: need(n, "n")?,
                    t: t.ok_or_else(|| validation("case iv needs --t"))?,
                },
                "v" => BiluTichyCase::SpecialSextic {
                    a: parse_pt(a, "a")?,
                    b: parse_pt(b, "b")?,
                },
                _ => unreachable!("clap validates"),
            };
            let (f1, g1) = bilu_tichy_pair(&spec)?;
            #[derive(Serialize)]
            struct PairDoc {
                schema: &'static str,
                case: String,
                first: FbpJson,
                second: FbpJson,
            }
            let doc = PairDoc {
                schema: SCHEMA,
                case,
                first: FbpJson::from_product(&f1),
                second: FbpJson::from_product(&g1),
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Orbit {
            map,
            point,
            steps,
            bit_cap,
            output,
        } => {
            let f = io::parse_exact_map(&map).map_err(validation)?;
            let x = parse_point(&point)?;
            let report = orbit(&f, &x, steps, bit_cap)?;
            #[derive(Serialize)]
            struct OrbitDoc {
                schema: &'static str,
                degree: usize,
                points: Vec<String>,
                #[serde(skip_serializing_if = "Option::is_none")]
                cycle_enter: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                cycle_period: Option<usize>,
            }
            let doc = OrbitDoc {
                schema: SCHEMA,
                degree: f.degree(),
                points: report.points.iter().map(|p| format!("{p}")).collect(),
                cycle_enter: report.cycle.map(|ci| ci.enter),
                cycle_period: report.cycle.map(|ci| ci.period),
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Height {
            map,
            point,
            steps,
            bit_cap,
            output,
        } => {
            let f = io::parse_exact_map(&map).map_err(validation)?;
            let x = parse_point(&point)?;
            let est = canonical_height_estimate(&f, &x, steps, bit_cap)?;
            #[derive(Serialize)]
            struct HeightDoc {
                schema: &'static str,
                degree: usize,
                naive: f64,
                canonical_estimate: f64,
                iterations_used: usize,
                trace: Vec<f64>,
            }
            let doc = HeightDoc {
                schema: SCHEMA,
                degree: f.degree(),
                naive: naive_height(&x),
                canonical_estimate: est.canonical_estimate,
                iterations_used: est.iterations_used,
                trace: est.trace,
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Intersect {
            map_f,
            point_x,
            map_g,
            point_y,
            steps,
            bit_cap,
            output,
        } => {
            let f = io::parse_exact_map(&map_f).map_err(validation)?;
            let g = io::parse_exact_map(&map_g).map_err(validation)?;
            let x = parse_point(&point_x)?;
            let y = parse_point(&point_y)?;
            let rep = orbit_intersection(&f, &x, &g, &y, steps, bit_cap)?;
            #[derive(Serialize)]
            struct HitDoc {
                i: usize,
                j: usize,
                point: String,
            }
            #[derive(Serialize)]
            struct IntersectDoc {
                schema: &'static str,
                hits: Vec<HitDoc>,
                steps_f: usize,
                steps_g: usize,
                truncated_f: bool,
                truncated_g: bool,
            }
            let doc = IntersectDoc {
                schema: SCHEMA,
                hits: rep
                    .hits
                    .iter()
                    .map(|(i, j, p)| HitDoc {
                        i: *i,
                        j: *j,
                        point: format!("{p}"),
                    })
                    .collect(),
                steps_f: rep.steps_f,
                steps_g: rep.steps_g,
                truncated_f: rep.truncated_f,
                truncated_g: rep.truncated_g,
            };
            emit(&output, &to_json(&doc)?)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            t,
            seed,
            tol,
        } => {
            if !(t > 0.0) {
                return Err(validation("--t must be positive"));
            }
            if let Some(tol) = tol {
                if !(tol > 0.0) {
                    return Err(validation("--tol must be positive"));
                }
            }
            let cfg = verify::VerifyConfig {
                t,
                seed,
                tolerance: tol,
            };
            let names: Vec<&str> = match &suite {
                Some(name) => {
                    let name = verify::SUITES
                        .iter()
                        .find(|s| **s == name.as_str())
                        .ok_or_else(|| {
                            validation(format!(
                                "unknown suite {name}; expected one of {:?}",
                                verify::SUITES
                            ))
                        })?;
                    vec![*name]
                }
                None => verify::SUITES.to_vec(),
            };
            let mut all_pass = true;
            println!("{:<14} {:<6} {:<12} detail", "suite", "status", "max dev");
            for name in names {
                let result = verify::run_suite(name, &cfg).map_err(CliError::Numerical)?;
                all_pass &= result.pass;
                println!(
                    "{:<14} {:<6} {:<12.3e} {}",
                    result.name,
                    if result.pass { "pass" } else { "FAIL" },
                    result.max_deviation,
                    result.detail
                );
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}
