mod fmt;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtt_core::codec::{self, DriverBook, SymbolTable};
use dtt_core::dft::{self, PrimeField};
use dtt_core::imagelab::{self, GrayImage, Kernel};
use dtt_core::scalar::{c, max_abs_diff, real, Scalar, ONE};
use dtt_core::taylor::series::{self, SeriesKind};
use dtt_core::vandermonde::{self, McConfig};
use dtt_core::{dtt, generators, seqio, Driver};

use fmt::{complex, g9};

#[derive(Parser)]
#[command(name = "dtt", version, about = "Discrete Taylor transform toolkit", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Driven DTT g_k = (1/t) Σ f_n (γ_k/t)^n of a JSON sequence
    Dtt {
        #[command(flatten)]
        driver: DriverArgs,
        /// JSON array of numbers or [re, im] pairs
        #[arg(long)]
        input: PathBuf,
        /// Evaluation point (real part)
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// Evaluation point (imaginary part)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_im: f64,
    },
    /// Recover f from g = Γ f by the Vandermonde solve
    Dttmi {
        #[command(flatten)]
        driver: DriverArgs,
        #[arg(long)]
        input: PathBuf,
    },
    /// Inverse driver ξ and weights w, if Γ⁻¹ has Vandermonde rows
    IdttSystem {
        #[command(flatten)]
        driver: DriverArgs,
        #[arg(long, default_value_t = dtt::DEFAULT_IDTT_TOL)]
        tol: f64,
    },
    /// Exact inverse of the Vandermonde matrix on the driver nodes
    VandInv {
        #[command(flatten)]
        driver: DriverArgs,
    },
    /// Monte Carlo inverse; CSV rows n,l,d1,d2,seconds
    VandMc {
        /// Comma-separated sizes
        #[arg(long, value_delimiter = ',', default_value = "5")]
        n: Vec<usize>,
        /// Number of Gaussian samples
        #[arg(long, default_value_t = 100_000)]
        l: usize,
        #[arg(long, env = "DTT_SEED", default_value_t = 1)]
        seed: u64,
        /// Real node generator
        #[arg(long = "gamma-seq", visible_alias = "nodes", default_value = "inv-shift2")]
        gamma_seq: String,
        /// Scale S⁺ by (p − r − 2)/p when S is rank deficient
        #[arg(long)]
        rank_adjusted: bool,
    },
    /// Driven DTT on roots of unity vs the direct DFT; CSV rows n,max_diff,orthogonality
    DftCheck {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,8,16,32")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "DTT_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Number-theoretic transform mod a prime
    Ntt {
        #[arg(long)]
        p: u64,
        /// Principal root of unity of order len(input)
        #[arg(long)]
        root: u64,
        /// JSON array of nonnegative integers
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Series values with a certified tail bound
    Series {
        #[arg(long, value_enum)]
        kind: SeriesName,
        /// Argument z (zeta, eta)
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        z: f64,
        /// Upper parameters (hyper)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        a: Vec<f64>,
        /// Lower parameters (hyper)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        /// Argument x (hyper)
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        x: f64,
        /// n for the totient
        #[arg(long = "n", default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = series::DEFAULT_SERIES_CUTOFF)]
        cutoff: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Encode a message into the binary wire format
    Encode {
        #[command(flatten)]
        codec: CodecArgs,
        /// Message text
        #[arg(long)]
        message: String,
        /// 1-based driver index into the book
        #[arg(long, default_value_t = 1.0)]
        index: f64,
        /// Wire file to write; values are printed when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode a wire file
    Decode {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long)]
        input: PathBuf,
    },
    /// Blockwise DTT of a PGM image into a JSON sequence
    ImgDtt {
        #[command(flatten)]
        io: ImgIo,
        #[command(flatten)]
        driver: DriverArgs,
        #[arg(long, default_value_t = imagelab::DEFAULT_BLOCK_LEN)]
        block_len: usize,
        /// Also write the rescaled real parts as an image
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Recover a PGM image from a blockwise DTT sequence
    ImgIdtt {
        #[command(flatten)]
        io: ImgIo,
        #[command(flatten)]
        driver: DriverArgs,
        #[arg(long, default_value_t = imagelab::DEFAULT_BLOCK_LEN)]
        block_len: usize,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// 3×3 neighborhood filter, rescaled to [0, 1]
    ImgFilter {
        #[command(flatten)]
        io: ImgIo,
        #[arg(long, value_enum, default_value = "sobel")]
        kernel: KernelName,
        /// Kernel file for --kernel file: three rows of three weights
        #[arg(long)]
        kernel_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Print raw filter values (row-major, one row per line) instead of an image
        #[arg(long)]
        raw: bool,
    },
    /// w·orig + (1 − w)·other
    ImgBlend {
        #[command(flatten)]
        io: ImgIo,
        /// Second image
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        w: f64,
    },
    /// Multiply each pixel by 1 + N(0, σ²)
    ImgNoise {
        #[command(flatten)]
        io: ImgIo,
        #[arg(long)]
        sigma: f64,
        #[arg(long, env = "DTT_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Mean over each in-range 3×3 neighborhood
    ImgSmooth {
        #[command(flatten)]
        io: ImgIo,
    },
}

#[derive(Args)]
struct DriverArgs {
    /// Node generator: harmonic, inv-shift2, catalan-shifted, unity, cos2, cos, sin
    #[arg(long = "gamma-seq", visible_alias = "nodes", default_value = "harmonic")]
    gamma_seq: String,
    /// JSON file of nodes; overrides --gamma-seq
    #[arg(long)]
    gamma_file: Option<PathBuf>,
    /// Number of nodes; defaults to the input length
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct CodecArgs {
    /// Symbol table file (char<TAB>value); the built-in table by default
    #[arg(long)]
    table: Option<PathBuf>,
    /// Driver book, one driver per line
    #[arg(long)]
    book: Option<PathBuf>,
    #[arg(long, default_value_t = codec::DEFAULT_BLOCK_LEN)]
    block_len: usize,
}

#[derive(Args)]
struct ImgIo {
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    Zeta,
    Eta,
    Hyper,
    Totient,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelName {
    Sobel,
    Scharr,
    Prewitt,
    Bump,
    File,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<dtt_core::Error> for Failure {
    fn from(e: dtt_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out = Result<(), Failure>;

fn read_text(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))
}

fn read_seq(p: &Path) -> Result<Vec<Scalar>, Failure> {
    Ok(seqio::parse_seq(&read_text(p)?)?)
}

fn read_image(p: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(p).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
    Ok(imagelab::pgm_decode(&bytes)?)
}

fn write_image(img: &GrayImage, out: Option<&Path>) -> Out {
    let bytes = imagelab::pgm_encode(img, 255)?;
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn driver(a: &DriverArgs, default_len: Option<usize>) -> Result<Driver, Failure> {
    if let Some(p) = &a.gamma_file {
        let d = Driver::new(read_seq(p)?)?;
        return match a.n {
            Some(n) => Ok(d.prefix(n)?),
            None => Ok(d),
        };
    }
    let n = a
        .n
        .or(default_len)
        .ok_or_else(|| Failure::Usage("--n is required with --gamma-seq here".into()))?;
    Ok(generators::by_name(&a.gamma_seq, n)?)
}

fn print_lines(v: &[Scalar]) {
    for z in v {
        println!("{}", complex(*z));
    }
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Dtt { driver: da, input, t, t_im } => {
            let f = read_seq(&input)?;
            let d = driver(&da, Some(f.len()))?;
            print_lines(&dtt_core::dtt_driven(&f, &d, c(t, t_im))?);
        }
        Cmd::Dttmi { driver: da, input } => {
            let g = read_seq(&input)?;
            let d = driver(&da, Some(g.len()))?;
            let r = dtt_core::dttmi(&g, &d)?;
            print_lines(&r.f);
            eprintln!("condition {}", g9(r.condition));
            if r.ill_conditioned {
                eprintln!("warning: ill-conditioned driver; expect lost digits");
            }
        }
        Cmd::IdttSystem { driver: da, tol } => {
            let d = driver(&da, None)?;
            let s = dtt_core::idtt_system(&d, tol)?;
            println!("n,xi,weight");
            for (k, (x, w)) in s.xi.iter().zip(&s.weights).enumerate() {
                println!("{k},{},{}", complex(*x), complex(*w));
            }
            println!("structure {}", g9(s.structure_rel));
            println!("orthogonality {}", g9(s.residual));
        }
        Cmd::VandInv { driver: da } => {
            let d = driver(&da, None)?;
            let e = vandermonde::inv_exact(d.nodes())?;
            for i in 0..d.len() {
                let row: Vec<String> = (0..d.len()).map(|j| complex(e.inverse[(i, j)])).collect();
                println!("{}", row.join(" "));
            }
            println!("residual {}", g9(e.residual));
        }
        Cmd::VandMc { n, l, seed, gamma_seq, rank_adjusted } => {
            let mut cfg = McConfig::new(l, seed);
            cfg.rank_adjusted = rank_adjusted;
            println!("n,l,d1,d2,seconds");
            for size in n {
                let d = generators::by_name(&gamma_seq, size)?;
                if !d.is_real() {
                    return Err(Failure::Domain(format!("{gamma_seq} nodes are not real")));
                }
                let nodes: Vec<f64> = d.nodes().iter().map(|z| z.re).collect();
                let t = Instant::now();
                let r = vandermonde::inv_mc(&nodes, &cfg)?;
                let secs = t.elapsed().as_secs_f64();
                println!("{size},{l},{},{},{secs:.3}", g9(r.d1), g9(r.d2));
                eprintln!("n={size}: d1 against Γ^T Γ = {}", g9(r.d1_transposed));
            }
        }
        Cmd::DftCheck { n, trials, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            println!("n,max_diff,orthogonality");
            for size in n {
                let d = dft::unity_driver(size)?;
                let mut worst = 0.0f64;
                for _ in 0..trials {
                    let f: Vec<Scalar> =
                        (0..size).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                    worst = worst.max(max_abs_diff(&dtt_core::dtt_driven(&f, &d, ONE)?, &dft::dft(&f)));
                }
                let s = dtt_core::idtt_system(&d, dtt::DEFAULT_IDTT_TOL)?;
                println!("{size},{},{}", g9(worst), g9(s.residual));
            }
        }
        Cmd::Ntt { p, root, input, inverse } => {
            let text = read_text(&input)?;
            let v: Vec<u64> = serde_json::from_str(&text)
                .map_err(|e| Failure::Domain(format!("{}: expected an array of nonnegative integers: {e}", input.display())))?;
            let field = PrimeField::new(p, root, v.len() as u64)?;
            let out = if inverse { field.intt(&v)? } else { field.ntt(&v)? };
            for x in out {
                println!("{x}");
            }
        }
        Cmd::Series { kind, z, a, b, x, n, cutoff, tol } => {
            let k = match kind {
                SeriesName::Totient => {
                    println!("{}", series::totient_via_dft(n)?);
                    return Ok(());
                }
                SeriesName::Zeta => SeriesKind::Zeta(real(z)),
                SeriesName::Eta => SeriesKind::Eta(real(z)),
                SeriesName::Hyper => SeriesKind::Hypergeometric {
                    a: a.into_iter().map(real).collect(),
                    b: b.into_iter().map(real).collect(),
                    gamma: real(x),
                },
            };
            let e = series::series_eval(&k, cutoff, tol)?;
            println!("value {}", complex(e.value));
            println!("tail_bound {}", g9(e.tail_bound));
        }
        Cmd::Encode { codec: ca, message, index, output } => {
            let (table, book) = codec_inputs(&ca)?;
            let w = codec::encode(&message, &table, &book, index, ca.block_len)?;
            match output {
                Some(p) => codec::wire_write(&w, fs::File::create(p)?)?,
                None => {
                    println!("{}", g9(w.index));
                    for v in &w.payload {
                        println!("{}", g9(*v));
                    }
                }
            }
        }
        Cmd::Decode { codec: ca, input } => {
            let (table, book) = codec_inputs(&ca)?;
            let bytes = fs::read(&input).map_err(|e| Failure::Domain(format!("{}: {e}", input.display())))?;
            let w = codec::WireMessage::from_bytes(&bytes)?;
            println!("{}", codec::decode(&w, &table, &book, ca.block_len)?);
        }
        Cmd::ImgDtt { io: o, driver: da, block_len, preview } => {
            let img = read_image(&o.input)?;
            let d = driver(&da, Some(block_len))?;
            let g = imagelab::block_transform(&img, &d, block_len)?;
            let text = seqio::format_seq(&g) + "\n";
            match &o.output {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            if let Some(p) = preview {
                let re: Vec<f64> = g.iter().map(|z| z.re).collect();
                let raster = imagelab::devectorize_raster(&re, img.rows(), img.cols())?;
                write_image(&raster.rescaled(), Some(&p))?;
            }
        }
        Cmd::ImgIdtt { io: o, driver: da, block_len, rows, cols } => {
            let g = read_seq(&o.input)?;
            let d = driver(&da, Some(block_len))?;
            let img = imagelab::block_recover(&g, &d, block_len, rows, cols)?;
            write_image(&img, o.output.as_deref())?;
        }
        Cmd::ImgFilter { io: o, kernel, kernel_file, t, raw } => {
            let k = match (kernel, kernel_file) {
                (KernelName::File, Some(p)) => imagelab::parse_kernel(&read_text(&p)?)?,
                (KernelName::File, None) => return Err(Failure::Usage("--kernel file needs --kernel-file".into())),
                (_, Some(_)) => return Err(Failure::Usage("--kernel-file is only used with --kernel file".into())),
                (KernelName::Sobel, None) => Kernel::sobel(),
                (KernelName::Scharr, None) => Kernel::scharr(),
                (KernelName::Prewitt, None) => Kernel::prewitt(),
                (KernelName::Bump, None) => Kernel::bump(),
            };
            let img = read_image(&o.input)?;
            if raw {
                let r = imagelab::neighbor_filter_raw(&img, &k, t)?;
                let mut text = String::new();
                for i in 0..r.rows() {
                    let row: Vec<String> = (0..r.cols()).map(|j| g9(r.get(i, j))).collect();
                    text.push_str(&row.join(" "));
                    text.push('\n');
                }
                match &o.output {
                    Some(p) => fs::write(p, text)?,
                    None => print!("{text}"),
                }
            } else {
                write_image(&imagelab::neighbor_filter(&img, &k, t)?, o.output.as_deref())?;
            }
        }
        Cmd::ImgBlend { io: o, other, w } => {
            let a = read_image(&o.input)?;
            let b = read_image(&other)?;
            write_image(&imagelab::blend(&a, &b, w)?, o.output.as_deref())?;
        }
        Cmd::ImgNoise { io: o, sigma, seed } => {
            let img = read_image(&o.input)?;
            write_image(&imagelab::gaussian_noise(&img, sigma, seed)?, o.output.as_deref())?;
        }
        Cmd::ImgSmooth { io: o } => {
            let img = read_image(&o.input)?;
            write_image(&imagelab::smooth(&img), o.output.as_deref())?;
        }
    }
    Ok(())
}

fn codec_inputs(a: &CodecArgs) -> Result<(SymbolTable, DriverBook), Failure> {
    let table = match &a.table {
        Some(p) => SymbolTable::parse(&read_text(p)?)?,
        None => SymbolTable::default_table(),
    };
    let book = match &a.book {
        Some(p) => DriverBook::parse(&read_text(p)?)?,
        None => DriverBook::new(vec![generators::by_name("harmonic", a.block_len)?]),
    };
    Ok((table, book))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
