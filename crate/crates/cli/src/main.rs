use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use segmsa::evaluation::{column_correlation, parse_flagged_columns, sp_score, ReferenceAlignment};
use segmsa::msa::{parse_aligned_fasta, Msa};
use segmsa::neighborhoods::ThresholdCurve;
use segmsa::pairwise::{GapPenalties, KarlinAltschul, SubstitutionMatrix};
use segmsa::pipeline::{run_align, run_segment_stages, AlignOutput, Config};
use segmsa::scoring::{GapScheme, PairScheme, ScoringScheme};
use segmsa::seq::{parse_fasta, parse_segment_annotations, AnnotatedSequence};

/// Multiple alignment of segment-annotated protein sequences.
#[derive(Parser)]
#[command(name = "segmsa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align the sequences and write the MSA, guide tree, distances and report.
    Align {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Fasta)]
        out: Format,
        /// Write alignment, tree, distances and report here instead of
        /// printing the alignment.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Also dump intermediate artifacts (segment scores, distances, tree).
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Print the segment score table as TSV.
    Scores(Input),
    /// Print the segment-level distance matrix in PHYLIP format.
    Distances(Input),
    /// Print the guide tree in Newick format.
    Tree(Input),
    /// Compare an alignment with a reference over flagged columns.
    Eval {
        test: PathBuf,
        reference: PathBuf,
        /// Flagged reference columns, one 0-based index per line. Without it
        /// every column is flagged.
        #[arg(long)]
        flags: Option<PathBuf>,
        /// Substitution matrix in NCBI format for the SP score.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Penalty per residue-gap pair in the SP score.
        #[arg(long, default_value_t = 4.0)]
        sp_gap_penalty: f64,
    },
}

#[derive(Args)]
struct Input {
    /// Sequences in FASTA format.
    fasta: PathBuf,
    /// Segment annotations: id, start, end, type, weight (tab-separated).
    #[arg(long)]
    segments: PathBuf,
    #[arg(long, default_value_t = 6.0)]
    alpha: f64,
    #[arg(long, default_value_t = 5)]
    min_seg_len: usize,
    #[arg(long, default_value_t = 4)]
    merge_gap: usize,
    #[arg(long, value_enum, default_value_t = PairArg::Linear)]
    pair_scheme: PairArg,
    #[arg(long, value_enum, default_value_t = GapArg::Max)]
    gap_scheme: GapArg,
    /// Breakpoints `d c(d)`, one per line.
    #[arg(long)]
    threshold_curve: Option<PathBuf>,
    /// Substitution matrix in NCBI format; BLOSUM62 by default.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 11)]
    gap_open: i32,
    #[arg(long, default_value_t = 1)]
    gap_extend: i32,
    /// Karlin-Altschul lambda for bit scores.
    #[arg(long, default_value_t = 0.3176)]
    lambda: f64,
    /// Karlin-Altschul K for bit scores.
    #[arg(long, default_value_t = 0.134)]
    karlin_k: f64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Fasta,
    Clustal,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Progressive,
    Linear,
    Quadratic,
}

#[derive(Clone, Copy, ValueEnum)]
enum GapArg {
    Zero,
    Max,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_matrix(path: Option<&Path>) -> Result<SubstitutionMatrix> {
    match path {
        None => Ok(SubstitutionMatrix::blosum62()),
        Some(p) => {
            let name = p.file_name().map_or("matrix".into(), |n| n.to_string_lossy());
            SubstitutionMatrix::parse_ncbi(&name, &read(p)?).with_context(|| format!("in {}", p.display()))
        }
    }
}

impl Input {
    fn config(&self) -> Result<Config> {
        let curve = match &self.threshold_curve {
            None => ThresholdCurve::default(),
            Some(p) => {
                let text = String::from_utf8(read(p)?).with_context(|| format!("{} is not UTF-8", p.display()))?;
                ThresholdCurve::parse(&text).with_context(|| format!("in {}", p.display()))?
            }
        };
        let config = Config {
            alpha: self.alpha,
            min_seg_len: self.min_seg_len,
            merge_gap: self.merge_gap,
            scheme: ScoringScheme {
                pair: match self.pair_scheme {
                    PairArg::Progressive => PairScheme::Progressive,
                    PairArg::Linear => PairScheme::Linear,
                    PairArg::Quadratic => PairScheme::Quadratic,
                },
                gap: match self.gap_scheme {
                    GapArg::Zero => GapScheme::Zero,
                    GapArg::Max => GapScheme::Max,
                },
            },
            curve,
            matrix: load_matrix(self.matrix.as_deref())?,
            gaps: GapPenalties::new(self.gap_open, self.gap_extend),
            stats: KarlinAltschul {
                lambda: self.lambda,
                log_k: self.karlin_k.ln(),
            },
            threads: self.threads,
        };
        config.validate()?;
        Ok(config)
    }

    fn sequences(&self) -> Result<Vec<AnnotatedSequence>> {
        let seqs = parse_fasta(&read(&self.fasta)?).with_context(|| format!("in {}", self.fasta.display()))?;
        parse_segment_annotations(&read(&self.segments)?, seqs)
            .with_context(|| format!("in {}", self.segments.display()))
    }
}

fn write_outputs(out: &AlignOutput, format: Format, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    match format {
        Format::Fasta => write(dir, "alignment.fasta", &out.msa.to_fasta())?,
        Format::Clustal => write(dir, "alignment.aln", &out.msa.to_clustal())?,
    }
    write(dir, "guide_tree.nwk", &out.tree.to_newick())?;
    write(dir, "distances.phy", &out.distances.to_phylip(out.names()))?;
    write(dir, "report.txt", &out.report())
}

fn align(input: &Input, format: Format, output_dir: Option<&Path>, dump_dir: Option<&Path>) -> Result<()> {
    let config = input.config()?;
    let seqs = input.sequences()?;
    let out = run_align(&seqs, &config).context("alignment failed")?;
    if let Some(dir) = dump_dir {
        write_outputs(&out, format, dir)?;
        write(dir, "segment_scores.tsv", &out.score_table.to_tsv())?;
    }
    match output_dir {
        Some(dir) => write_outputs(&out, format, dir)?,
        None => {
            print!(
                "{}",
                match format {
                    Format::Fasta => out.msa.to_fasta(),
                    Format::Clustal => out.msa.to_clustal(),
                }
            );
            eprint!("{}", out.report());
        }
    }
    Ok(())
}

enum Stage {
    Scores,
    Distances,
    Tree,
}

fn stage(input: &Input, which: Stage) -> Result<()> {
    let config = input.config()?;
    let seqs = input.sequences()?;
    let st = run_segment_stages(&seqs, &config)?;
    for d in &st.diagnostics {
        log::warn!("{d}");
    }
    let names: Vec<String> = seqs.iter().map(|s| s.id.clone()).collect();
    print!(
        "{}",
        match which {
            Stage::Scores => st.table.to_tsv(),
            Stage::Distances => st.distances.to_phylip(&names),
            Stage::Tree => st.tree.to_newick(),
        }
    );
    Ok(())
}

fn load_msa(path: &Path) -> Result<Msa> {
    let msa = parse_aligned_fasta(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    // a malformed user alignment is bad input, not an internal fault
    msa.check_shape()
        .map_err(|e| anyhow::anyhow!("in {}: {}", path.display(), e))?;
    Ok(msa)
}

fn eval(test: &Path, reference: &Path, flags: Option<&Path>, matrix: Option<&Path>, gap: f64) -> Result<()> {
    let test = load_msa(test)?;
    let ref_msa = load_msa(reference)?;
    let matrix = load_matrix(matrix)?;
    let reference = match flags {
        Some(p) if p.exists() => {
            let text = String::from_utf8(read(p)?).with_context(|| format!("{} is not UTF-8", p.display()))?;
            let cols = parse_flagged_columns(&text).with_context(|| format!("in {}", p.display()))?;
            ReferenceAlignment::new(ref_msa, cols)?
        }
        _ => {
            match flags {
                Some(p) => log::warn!("flags file {} not found; flagging every column", p.display()),
                None => log::warn!("no flags file; flagging every column"),
            }
            ReferenceAlignment::all_columns(ref_msa)
        }
    };
    let corr = column_correlation(&test, &reference)?;
    let pct = |v: Option<f64>| v.map_or("NA".to_string(), |v| format!("{v:.2}"));
    println!("flagged_columns={}", reference.flagged.len());
    println!("column_correlation={}", pct(corr.columns));
    println!("pair_correlation={}", pct(corr.pairs));
    println!("sp_score={:.2}", sp_score(&test, &matrix, gap));
    println!("reference_sp_score={:.2}", sp_score(&reference.msa, &matrix, gap));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Align {
            input,
            out,
            output_dir,
            dump_dir,
        } => align(&input, out, output_dir.as_deref(), dump_dir.as_deref()),
        Command::Scores(input) => stage(&input, Stage::Scores),
        Command::Distances(input) => stage(&input, Stage::Distances),
        Command::Tree(input) => stage(&input, Stage::Tree),
        Command::Eval {
            test,
            reference,
            flags,
            matrix,
            sp_gap_penalty,
        } => eval(&test, &reference, flags.as_deref(), matrix.as_deref(), sp_gap_penalty),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for internal invariant violations, 2 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    let internal = e
        .chain()
        .any(|c| c.downcast_ref::<segmsa::Error>().is_some_and(|e| e.is_internal()));
    if internal {
        3
    } else {
        2
    }
}
