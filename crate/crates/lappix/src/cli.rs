//! Command line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or image format, 3 bitstream.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lappix_core::codec::{analyze, Analysis};
use lappix_core::dering::{dering_plane, DeringContext, BLOCK};
use lappix_core::partition::SB_SIZE;
use lappix_core::transform::LapConfig;
use lappix_core::{decode, encode, psnr, DecodeError, EncoderOptions, Image, Plane};

use crate::io::{read_auto, write_auto, IoError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_BITSTREAM: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lappix", version, about = "Lapped-transform still image codec")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LapMode {
    #[value(name = "4")]
    Four,
    #[value(name = "8")]
    Eight,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a .y4m, .pgm or .ppm image.
    Encode {
        /// Quantizer step, 16 units per 8-bit sample step.
        #[arg(short, long, default_value_t = 32, value_parser = clap::value_parser!(u16).range(1..=512))]
        q: u16,
        /// Exterior lapping: 4-point everywhere, or 8-point on 16x16 and
        /// larger block edges.
        #[arg(long, value_enum, default_value = "4")]
        lap: LapMode,
        #[arg(long)]
        no_dering: bool,
        #[arg(long)]
        no_smooth: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Decompress a bitstream to an image.
    Decode { input: PathBuf, output: PathBuf },
    /// Run only the deringing filter on an image.
    Dering {
        #[arg(short, long, default_value_t = 32, value_parser = clap::value_parser!(u16).range(1..=512))]
        q: u16,
        input: PathBuf,
        output: PathBuf,
    },
    /// Report block sizes and deringing directions as TSV.
    Analyze {
        input: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two images.
    Psnr { reference: PathBuf, test: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: IoError },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Bitstream { path: PathBuf, source: DecodeError },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Image { .. } | CliError::File { .. } => EXIT_IO,
            CliError::Bitstream { .. } => EXIT_BITSTREAM,
        }
    }
}

fn load(path: &Path) -> Result<Image, CliError> {
    read_auto(path).map_err(|source| CliError::Image { path: path.into(), source })
}

fn store(img: &Image, path: &Path) -> Result<(), CliError> {
    write_auto(img, path).map_err(|source| CliError::Image { path: path.into(), source })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::File { path: path.into(), source })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::File { path: path.into(), source })
}

/// Parse `args` (program name first) and run, writing reports to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "lappix: {e}");
            e.code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Encode {
            q,
            lap,
            no_dering,
            no_smooth,
            input,
            output,
        } => {
            let img = load(&input)?;
            let opts = EncoderOptions {
                q,
                lap: match lap {
                    LapMode::Four => LapConfig::FourPoint,
                    LapMode::Eight => LapConfig::EightExterior,
                },
                dering: !no_dering,
                smooth: !no_smooth,
            };
            let bytes = encode(&img, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
            write_bytes(&output, &bytes)
        }
        Command::Decode { input, output } => {
            let bytes = read_bytes(&input)?;
            let img = decode(&bytes).map_err(|source| CliError::Bitstream { path: input, source })?;
            store(&img, &output)
        }
        Command::Dering { q, input, output } => {
            let mut img = load(&input)?;
            for p in 0..img.num_planes() {
                let filtered = dering_standalone(img.plane(p), q as u32);
                *img.plane_mut(p) = filtered;
            }
            store(&img, &output)
        }
        Command::Analyze { input, output } => {
            let bytes = read_bytes(&input)?;
            let a = analyze(&bytes).map_err(|source| CliError::Bitstream { path: input, source })?;
            let report = analysis_report(&a);
            match output {
                Some(path) => write_bytes(&path, report.as_bytes()),
                None => out
                    .write_all(report.as_bytes())
                    .map_err(|source| CliError::File { path: "<stdout>".into(), source }),
            }
        }
        Command::Psnr { reference, test } => {
            let a = load(&reference)?;
            let b = load(&test)?;
            let p = psnr(&a, &b).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = psnr_report(&p);
            out.write_all(report.as_bytes())
                .map_err(|source| CliError::File { path: "<stdout>".into(), source })
        }
    }
}

/// Dering a plane of any size: pad to whole 8x8 blocks by edge replication,
/// filter every superblock, crop.
pub fn dering_standalone(plane: &Plane, q: u32) -> Plane {
    let (w, h) = (plane.width(), plane.height());
    let (pw, ph) = (w.div_ceil(BLOCK) * BLOCK, h.div_ceil(BLOCK) * BLOCK);
    let mut padded = Plane::filled(pw, ph, 0);
    for y in 0..ph {
        for x in 0..pw {
            padded.set(x, y, plane.get(x.min(w - 1), y.min(h - 1)));
        }
    }
    let ctx = DeringContext {
        q,
        sb_size: SB_SIZE,
        sb_enabled: &[],
        block_mask: &[],
    };
    let filtered = dering_plane(&padded, &ctx);
    let mut out = plane.clone();
    for y in 0..h {
        for x in 0..w {
            out.set(x, y, filtered.get(x, y));
        }
    }
    out
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4}")
    }
}

/// TSV report: a `plane` line per plane, then `all`.
pub fn psnr_report(p: &lappix_core::Psnr) -> String {
    let mut s = String::from("plane\tpsnr_db\n");
    for (name, v) in ["Y", "Cb", "Cr"].iter().zip(p.planes) {
        if let Some(v) = v {
            let _ = writeln!(s, "{name}\t{}", fmt_db(v));
        }
    }
    let _ = writeln!(s, "all\t{}", fmt_db(p.combined));
    if p.combined.is_infinite() {
        s.push_str("identical\n");
    }
    s
}

/// TSV report: header fields, one `block` line per luma leaf, one `sb` line
/// per superblock deringing flag, and one `dir` line per 8x8 luma block.
pub fn analysis_report(a: &Analysis) -> String {
    let h = &a.header;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# width={} height={} format={:?} q={} lap={:?} dering={} smooth={}",
        h.width, h.height, h.format, h.q, h.lap, h.dering, h.smooth
    );
    s.push_str("# block\tx\ty\tsize\n");
    for &(x, y, n) in &a.leaves {
        let _ = writeln!(s, "block\t{x}\t{y}\t{n}");
    }
    s.push_str("# sb\tindex\tdering\n");
    for (i, f) in a.dering_flags.iter().enumerate() {
        let _ = writeln!(s, "sb\t{i}\t{}", *f as u8);
    }
    s.push_str("# dir\tbx\tby\td_opt\tdelta\ttd\n");
    for b in &a.directions {
        let _ = writeln!(
            s,
            "dir\t{}\t{}\t{}\t{:.3}\t{}",
            b.bx,
            b.by,
            b.direction.d_opt,
            b.direction.delta_real(),
            b.params.td
        );
    }
    s
}
