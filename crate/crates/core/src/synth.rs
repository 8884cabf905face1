//! Seeded synthetic inputs: planted typed motifs with a known reference
//! alignment, and unconstrained random annotated sequences.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::msa::Msa;
use crate::seq::{AnnotatedSequence, Segment, GAP};

const AMINO: &[u8; 20] = b"ACDEFGHIKLMNPQRSTVWY";
const TYPES: [&str; 3] = ["H", "E", "C"];

#[derive(Debug, Clone)]
pub struct MotifParams {
    pub sequences: usize,
    pub length: usize,
    pub motifs: usize,
    pub motif_len: (usize, usize),
    pub motif_weight: f64,
    /// Each copy gets between 0 and `floor(rate * len)` substitutions.
    pub mutation_rate: f64,
    /// Low-weight segments placed in the flanks of every sequence.
    pub decoys: usize,
    /// Smallest flank before, between and after motifs.
    pub min_flank: usize,
}

impl Default for MotifParams {
    fn default() -> Self {
        MotifParams {
            sequences: 5,
            length: 150,
            motifs: 2,
            motif_len: (8, 12),
            motif_weight: 8.0,
            mutation_rate: 0.1,
            decoys: 2,
            min_flank: 6,
        }
    }
}

/// A generated instance with its ground truth.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub seqs: Vec<AnnotatedSequence>,
    /// Motif copies stacked in shared columns; flanks left-justified.
    pub reference: Msa,
    /// Reference columns holding motif residues.
    pub flagged: Vec<usize>,
}

fn random_residues(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| AMINO[rng.gen_range(0..AMINO.len())]).collect()
}

/// Splits `total` into `parts` values, each at least `min`.
fn split(rng: &mut ChaCha8Rng, total: usize, parts: usize, min: usize) -> Vec<usize> {
    let free = total - parts * min;
    let mut cuts: Vec<usize> = (0..parts - 1).map(|_| rng.gen_range(0..=free)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(free)) {
        out.push(min + c - prev);
        prev = c;
    }
    out
}

/// Plants `params.motifs` motifs, in the same order, into every sequence.
pub fn planted_motifs(params: &MotifParams, seed: u64) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motifs: Vec<Vec<u8>> = (0..params.motifs)
        .map(|_| {
            let len = rng.gen_range(params.motif_len.0..=params.motif_len.1);
            random_residues(&mut rng, len)
        })
        .collect();
    let motif_total: usize = motifs.iter().map(|m| m.len()).sum();
    let flank_total = params
        .length
        .checked_sub(motif_total)
        .filter(|&f| f >= (params.motifs + 1) * params.min_flank)
        .expect("sequence too short for the requested motifs");

    // per sequence: flank strings and motif copies
    let mut flanks: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut copies: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut seqs = Vec::new();
    for n in 0..params.sequences {
        let sizes = split(&mut rng, flank_total, params.motifs + 1, params.min_flank);
        let f: Vec<Vec<u8>> = sizes.iter().map(|&s| random_residues(&mut rng, s)).collect();
        let c: Vec<Vec<u8>> = motifs
            .iter()
            .map(|m| {
                let mut copy = m.clone();
                let max_mut = (params.mutation_rate * m.len() as f64).floor() as usize;
                let n_mut = rng.gen_range(0..=max_mut);
                let mut pos: Vec<usize> = (0..m.len()).collect();
                pos.shuffle(&mut rng);
                for &p in &pos[..n_mut] {
                    let old = copy[p];
                    while copy[p] == old {
                        copy[p] = AMINO[rng.gen_range(0..AMINO.len())];
                    }
                }
                copy
            })
            .collect();

        let mut residues = Vec::with_capacity(params.length);
        let mut segments = Vec::new();
        for (i, flank) in f.iter().enumerate() {
            let fstart = residues.len();
            residues.extend_from_slice(flank);
            // decoys sit inside flanks, away from the motif boundaries
            if i < params.decoys && flank.len() >= 8 {
                let len = rng.gen_range(3..=flank.len() - 4).min(10);
                let start = fstart + rng.gen_range(1..=flank.len() - len - 1);
                let w = rng.gen_range(1.0..params.motif_weight.min(6.0) - 0.5);
                segments.push(Segment::new(start, start + len, TYPES[rng.gen_range(0..3)], w));
            }
            if let Some(copy) = c.get(i) {
                let s = residues.len();
                residues.extend_from_slice(copy);
                segments.push(Segment::new(s, residues.len(), TYPES[i % 3], params.motif_weight));
            }
        }
        let mut seq = AnnotatedSequence::new(format!("seq{n}"), &residues).expect("valid residues");
        seq.set_segments(segments).expect("non-overlapping segments");
        seqs.push(seq);
        flanks.push(f);
        copies.push(c);
    }

    let k = params.sequences;
    let mut rows = vec![Vec::new(); k];
    let mut flagged = Vec::new();
    for i in 0..=params.motifs {
        let w = (0..k).map(|n| flanks[n][i].len()).max().unwrap_or(0);
        for n in 0..k {
            rows[n].extend_from_slice(&flanks[n][i]);
            rows[n].extend(std::iter::repeat_n(GAP, w - flanks[n][i].len()));
        }
        if i < params.motifs {
            let start = rows[0].len();
            for n in 0..k {
                rows[n].extend_from_slice(&copies[n][i]);
            }
            flagged.extend(start..rows[0].len());
        }
    }
    let reference = Msa {
        ids: seqs.iter().map(|s| s.id.clone()).collect(),
        rows,
    };
    PlantedInstance {
        seqs,
        reference,
        flagged,
    }
}

/// `k` random sequences with lengths in `1..=max_len` and random
/// non-overlapping segments of random type and weight in `[0, 10)`.
pub fn random_annotated(k: usize, max_len: usize, seed: u64) -> Vec<AnnotatedSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|n| {
            let len = rng.gen_range(1..=max_len);
            let residues = random_residues(&mut rng, len);
            let mut segments = Vec::new();
            let mut pos = rng.gen_range(0..=len.min(10));
            while pos < len {
                let seg_len = rng.gen_range(1..=20.min(len - pos));
                segments.push(Segment::new(
                    pos,
                    pos + seg_len,
                    TYPES[rng.gen_range(0..3)],
                    rng.gen_range(0.0..10.0),
                ));
                pos += seg_len + rng.gen_range(0..=15);
            }
            let mut s = AnnotatedSequence::new(format!("r{n}"), &residues).expect("valid residues");
            s.set_segments(segments).expect("non-overlapping segments");
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_reference_is_consistent() {
        for seed in 0..20 {
            let p = MotifParams {
                sequences: 4,
                motifs: 3,
                ..MotifParams::default()
            };
            let inst = planted_motifs(&p, seed);
            inst.reference.check_against(&inst.seqs).unwrap();
            assert!(inst.seqs.iter().all(|s| s.len() == 150));
            let motif_cols: usize = inst.seqs[0]
                .segments
                .iter()
                .filter(|s| s.weight == 8.0)
                .map(|s| s.len())
                .sum();
            assert_eq!(inst.flagged.len(), motif_cols);
            for &c in &inst.flagged {
                assert!(inst.reference.rows.iter().all(|r| r[c] != GAP));
            }
        }
    }

    #[test]
    fn mutation_budget_is_respected() {
        let p = MotifParams {
            sequences: 10,
            motifs: 3,
            ..MotifParams::default()
        };
        let inst = planted_motifs(&p, 7);
        let motif_segs: Vec<Vec<&Segment>> = inst
            .seqs
            .iter()
            .map(|s| s.segments.iter().filter(|g| g.weight == 8.0).collect())
            .collect();
        for (m, first) in motif_segs[0].iter().enumerate().take(3) {
            let len = first.len();
            for a in 0..10 {
                for b in a + 1..10 {
                    let x = inst.seqs[a].segment_residues(motif_segs[a][m]);
                    let y = inst.seqs[b].segment_residues(motif_segs[b][m]);
                    let diff = x.iter().zip(y).filter(|(p, q)| p != q).count();
                    assert!(diff <= 2 * len / 10);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_annotated(6, 300, 11);
        let b = random_annotated(6, 300, 11);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| !s.is_empty() && s.len() <= 300));
    }
}
