//! The full alignment run: informative segments, pair scores, neighbors,
//! segment scores, distances, guide tree, progressive segment MSA, stitching.

use std::time::{Duration, Instant};

use crate::exec::Exec;
use crate::guide_tree::{neighbor_joining, GuideTree};
use crate::msa::Msa;
use crate::neighborhoods::{
    all_segment_pair_scores, build_neighbor_index, DivergenceMatrix, NeighborIndex, SegRef, SegmentPairScores,
    ThresholdCurve,
};
use crate::pairwise::{global_align_residues, GapPenalties, KarlinAltschul, SmithWaterman, SubstitutionMatrix};
use crate::progressive::{assemble_msa, progressive_residue_msa, progressive_segment_msa};
use crate::scoring::{GapScheme, PairScheme, ScoringScheme, SegmentScoreTable};
use crate::segment_align::{all_pairwise_segment_alignments, build_distance_matrix, DistanceMatrix};
use crate::seq::{classify_informative, AnnotatedSequence, InformativeView};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Config {
    pub alpha: f64,
    pub min_seg_len: usize,
    pub merge_gap: usize,
    pub scheme: ScoringScheme,
    pub curve: ThresholdCurve,
    pub matrix: SubstitutionMatrix,
    pub gaps: GapPenalties,
    pub stats: KarlinAltschul,
    /// Worker threads; 1 runs sequentially, 0 uses the default pool size.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            alpha: 6.0,
            min_seg_len: 5,
            merge_gap: 4,
            scheme: ScoringScheme {
                pair: PairScheme::Linear,
                gap: GapScheme::Max,
            },
            curve: ThresholdCurve::default(),
            matrix: SubstitutionMatrix::blosum62(),
            gaps: GapPenalties::default(),
            stats: KarlinAltschul::default(),
            threads: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if self.min_seg_len < 1 {
            return Err(Error::InvalidParameter("minimum segment length must be >= 1".into()));
        }
        if self.gaps.open < 0 || self.gaps.extend < 1 {
            return Err(Error::InvalidParameter(format!(
                "gap costs must satisfy open >= 0 and extend >= 1, got {}/{}",
                self.gaps.open, self.gaps.extend
            )));
        }
        if self.stats.lambda.is_nan() || self.stats.lambda <= 0.0 {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        Ok(())
    }

    pub fn exec(&self) -> Exec {
        Exec::for_threads(self.threads)
    }

    pub fn local_aligner(&self) -> SmithWaterman {
        SmithWaterman::new(self.matrix.clone(), self.gaps, self.stats)
    }
}

/// Informative views plus everything derived from segment-pair scores.
pub struct Prepared<'a> {
    pub views: Vec<InformativeView<'a>>,
    pub scores: SegmentPairScores,
    pub divergence: DivergenceMatrix,
    pub index: NeighborIndex,
}

impl Prepared<'_> {
    /// Neighbor segments of every sequence, in sequence order.
    pub fn neighbor_segments(&self) -> Vec<Vec<SegRef>> {
        self.index
            .nei_segments
            .iter()
            .enumerate()
            .map(|(seq, idx)| idx.iter().map(|&i| SegRef::new(seq, i)).collect())
            .collect()
    }
}

/// Informative segments, pair scores, divergences and neighbor structures.
pub fn prepare<'a>(seqs: &'a [AnnotatedSequence], config: &Config, timings: &mut Timings) -> Result<Prepared<'a>> {
    let exec = config.exec();
    let h = config.local_aligner();
    let views: Vec<InformativeView<'a>> = timings.run("informative segments", || {
        seqs.iter()
            .map(|s| classify_informative(s, config.alpha, config.min_seg_len, config.merge_gap))
            .collect()
    });
    let scores = timings.run("segment pair scores", || all_segment_pair_scores(&views, &h, exec));
    let divergence = timings.run("divergence", || DivergenceMatrix::compute(&views, &h, exec));
    let index = timings.run("neighbors", || {
        build_neighbor_index(&scores, &divergence, &config.curve, exec)
    })?;
    Ok(Prepared {
        views,
        scores,
        divergence,
        index,
    })
}

/// Wall-clock time per stage, in run order.
#[derive(Debug, Clone, Default)]
pub struct Timings(pub Vec<(String, Duration)>);

impl Timings {
    pub fn run<R>(&mut self, stage: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.0.push((stage.to_string(), t.elapsed()));
        r
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct AlignOutput {
    pub msa: Msa,
    pub tree: GuideTree,
    pub distances: DistanceMatrix,
    pub score_table: SegmentScoreTable,
    /// True when no matched segments existed and the residue-level fallback ran.
    pub fallback: bool,
    pub anchors: usize,
    /// DP cells of pairwise and progressive segment NW.
    pub segment_nw_cells: u64,
    /// DP cells of residue-level alignment (stitching, or the fallback).
    pub residue_cells: u64,
    pub diagnostics: Vec<String>,
    pub timings: Timings,
}

impl AlignOutput {
    pub fn names(&self) -> &[String] {
        &self.msa.ids
    }

    /// Plain-text report: diagnostics, counts and stage timings.
    pub fn report(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "sequences={}", self.msa.num_rows());
        let _ = writeln!(out, "columns={}", self.msa.width());
        let _ = writeln!(out, "fallback={}", self.fallback);
        let _ = writeln!(out, "anchors={}", self.anchors);
        let _ = writeln!(out, "segment_nw_cells={}", self.segment_nw_cells);
        let _ = writeln!(out, "residue_cells={}", self.residue_cells);
        for (stage, d) in &self.timings.0 {
            let _ = writeln!(out, "time[{stage}]={:.6}", d.as_secs_f64());
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "warning: {d}");
        }
        out
    }
}

fn check_input(seqs: &[AnnotatedSequence]) -> Result<()> {
    if seqs.len() < 2 {
        return Err(Error::TooFewSequences {
            needed: 2,
            got: seqs.len(),
        });
    }
    Ok(())
}

/// Runs the whole heuristic. Falls back to residue-level progressive
/// alignment when the segment MSA has no matched segments.
pub fn run_align(seqs: &[AnnotatedSequence], config: &Config) -> Result<AlignOutput> {
    config.validate()?;
    check_input(seqs)?;
    let exec = config.exec();
    exec.install(config.threads, || run_inner(seqs, config, exec))
}

/// Segment-level stages, from informative segments up to the guide tree.
pub struct SegmentStages<'a> {
    pub prep: Prepared<'a>,
    pub table: SegmentScoreTable,
    pub neighbor_segments: Vec<Vec<SegRef>>,
    pub distances: DistanceMatrix,
    pub tree: GuideTree,
    /// DP cells of the pairwise segment alignments.
    pub segment_nw_cells: u64,
    pub diagnostics: Vec<String>,
}

fn segment_stages<'a>(
    seqs: &'a [AnnotatedSequence],
    config: &Config,
    exec: Exec,
    timings: &mut Timings,
) -> Result<SegmentStages<'a>> {
    let prep = prepare(seqs, config, timings)?;
    let mut diagnostics = prep.divergence.diagnostics.clone();
    let names: Vec<String> = seqs.iter().map(|s| s.id.clone()).collect();
    let table = timings.run("segment scores", || {
        SegmentScoreTable::build(&prep.scores, &prep.index, config.scheme, exec)
    })?;
    let nei = prep.neighbor_segments();
    let pairwise = timings.run("segment alignment", || {
        all_pairwise_segment_alignments(&nei, &table, exec)
    })?;
    let segment_nw_cells = pairwise.iter().map(|(_, _, a)| a.cells).sum();
    let g: Vec<(usize, usize, f64)> = pairwise.iter().map(|(i, j, a)| (*i, *j, a.score)).collect();
    let (distances, note) = build_distance_matrix(seqs.len(), &g);
    diagnostics.extend(note);
    let tree = timings.run("guide tree", || neighbor_joining(&distances, &names))?;
    Ok(SegmentStages {
        prep,
        table,
        neighbor_segments: nei,
        distances,
        tree,
        segment_nw_cells,
        diagnostics,
    })
}

/// Runs the segment-level stages alone, for inspecting scores, distances or
/// the guide tree.
pub fn run_segment_stages<'a>(seqs: &'a [AnnotatedSequence], config: &Config) -> Result<SegmentStages<'a>> {
    config.validate()?;
    check_input(seqs)?;
    let exec = config.exec();
    exec.install(config.threads, || {
        segment_stages(seqs, config, exec, &mut Timings::default())
    })
}

fn run_inner(seqs: &[AnnotatedSequence], config: &Config, exec: Exec) -> Result<AlignOutput> {
    let mut timings = Timings::default();
    let SegmentStages {
        prep,
        table,
        neighbor_segments: nei,
        distances,
        tree,
        mut segment_nw_cells,
        mut diagnostics,
    } = segment_stages(seqs, config, exec, &mut timings)?;
    let (root, cells) = timings.run("progressive segment alignment", || {
        progressive_segment_msa(&nei, &tree, &table)
    })?;
    segment_nw_cells += cells;

    let has_anchor = (0..root.width()).any(|c| root.column(c).len() >= 2);
    if !has_anchor {
        diagnostics.push("no matched segments; using residue-level progressive alignment".to_string());
        log::warn!("no matched segments; using residue-level progressive alignment");
        let fb = timings.run("fallback alignment", || residue_progressive(seqs, config, exec))?;
        return Ok(AlignOutput {
            msa: fb.msa,
            tree: fb.tree,
            distances: fb.distances,
            score_table: table,
            fallback: true,
            anchors: 0,
            segment_nw_cells,
            residue_cells: fb.cells,
            diagnostics,
            timings,
        });
    }

    let asm = timings.run("stitching", || {
        assemble_msa(&root, seqs, &prep.scores, &tree, &config.matrix, config.gaps, exec)
    })?;
    for d in &diagnostics {
        log::warn!("{d}");
    }
    Ok(AlignOutput {
        msa: asm.msa,
        tree,
        distances,
        score_table: table,
        fallback: false,
        anchors: asm.anchors,
        segment_nw_cells,
        residue_cells: asm.stitch_cells,
        diagnostics,
        timings,
    })
}

/// Output of the residue-level progressive aligner.
#[derive(Debug, Clone)]
pub struct ResidueProgressive {
    pub msa: Msa,
    pub tree: GuideTree,
    pub distances: DistanceMatrix,
    /// DP cells over pairwise distances and profile merges.
    pub cells: u64,
}

/// Plain progressive alignment: pairwise global scores, the same distance
/// normalization, NJ, and residue profile merges.
pub fn residue_progressive(seqs: &[AnnotatedSequence], config: &Config, exec: Exec) -> Result<ResidueProgressive> {
    check_input(seqs)?;
    let k = seqs.len();
    let names: Vec<String> = seqs.iter().map(|s| s.id.clone()).collect();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let scored = exec.map(&pairs, |&(i, j)| {
        let al = global_align_residues(&seqs[i].residues, &seqs[j].residues, &config.matrix, config.gaps);
        (i, j, al.score as f64, al.cells)
    });
    let mut cells: u64 = scored.iter().map(|s| s.3).sum();
    let g: Vec<(usize, usize, f64)> = scored.iter().map(|s| (s.0, s.1, s.2)).collect();
    let (distances, _) = build_distance_matrix(k, &g);
    let tree = neighbor_joining(&distances, &names)?;
    let strings: Vec<&[u8]> = seqs.iter().map(|s| s.residues.as_slice()).collect();
    let (rows, c) = progressive_residue_msa(&strings, &tree, &config.matrix, config.gaps)?;
    cells += c;
    let msa = Msa { ids: names, rows };
    msa.check_against(seqs)?;
    Ok(ResidueProgressive {
        msa,
        tree,
        distances,
        cells,
    })
}
