use proptest::prelude::*;

use segmsa::msa::Msa;
use segmsa::neighborhoods::SegRef;
use segmsa::pairwise::{global_align_residues, GapPenalties, SubstitutionMatrix};
use segmsa::pipeline::{run_align, run_segment_stages, Config};
use segmsa::progressive::progressive_segment_msa;
use segmsa::scoring::{GapScheme, PairScheme, ScoringScheme};
use segmsa::seq::{AnnotatedSequence, Segment, GAP};
use segmsa::synth::{planted_motifs, random_annotated, MotifParams};

fn check_round_trip(msa: &Msa, seqs: &[AnnotatedSequence]) -> Result<(), TestCaseError> {
    let w = msa.width();
    prop_assert_eq!(msa.num_rows(), seqs.len());
    for (r, s) in seqs.iter().enumerate() {
        prop_assert_eq!(&msa.ids[r], &s.id);
        prop_assert_eq!(msa.rows[r].len(), w);
        prop_assert_eq!(msa.degapped(r), s.residues.clone());
    }
    for c in 0..w {
        prop_assert!(msa.rows.iter().any(|row| row[c] != GAP));
    }
    Ok(())
}

/// Column of every residue, per row.
fn residue_columns(msa: &Msa) -> Vec<Vec<usize>> {
    msa.rows
        .iter()
        .map(|row| (0..row.len()).filter(|&c| row[c] != GAP).collect())
        .collect()
}

/// Rebuilds the root segment profile and checks that matched segments share
/// at least one MSA column: every pair when `all_pairs`, otherwise each
/// column's center (largest summed SEG, ties to the smaller segment) against
/// the rest.
fn check_conservation(seqs: &[AnnotatedSequence], all_pairs: bool) -> Result<(), TestCaseError> {
    let config = Config::default();
    let stages = run_segment_stages(seqs, &config).unwrap();
    let p = &stages.prep;
    let (root, _) = progressive_segment_msa(&stages.neighbor_segments, &stages.tree, &stages.table).unwrap();

    let out = run_align(seqs, &config).unwrap();
    let cols = residue_columns(&out.msa);
    let share = |s: SegRef, t: SegRef| {
        let (si, ti) = (p.scores.info(s), p.scores.info(t));
        let cs = &cols[s.seq][si.start..si.start + si.len];
        let ct = &cols[t.seq][ti.start..ti.start + ti.len];
        cs.iter().any(|x| ct.contains(x))
    };
    for c in 0..root.width() {
        let members: Vec<SegRef> = root.column(c).into_iter().map(|(_, s)| s).collect();
        if members.len() < 2 {
            continue;
        }
        let total = |s: SegRef| {
            members
                .iter()
                .filter(|&&t| t != s)
                .map(|&t| p.scores.seg(s, t).unwrap_or(0.0))
                .sum::<f64>()
        };
        let mut center = members[0];
        for &s in &members {
            if total(s) > total(center) || (total(s) == total(center) && s < center) {
                center = s;
            }
        }
        for (a, &s) in members.iter().enumerate() {
            for &t in &members[a + 1..] {
                let checked = all_pairs || s == center || t == center;
                let aligned = p.scores.alignment(s, t).is_some_and(|al| !al.is_empty());
                if checked && aligned {
                    prop_assert!(share(s, t), "{} and {} share no column", s, t);
                }
            }
        }
    }
    Ok(())
}

fn scheme_strategy() -> impl Strategy<Value = ScoringScheme> {
    (
        prop_oneof![
            Just(PairScheme::Progressive),
            Just(PairScheme::Linear),
            Just(PairScheme::Quadratic)
        ],
        prop_oneof![Just(GapScheme::Zero), Just(GapScheme::Max)],
    )
        .prop_map(|(pair, gap)| ScoringScheme { pair, gap })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_inputs_round_trip(seed in any::<u64>(), k in 2usize..=6, scheme in scheme_strategy(), alpha in 0.0f64..9.0) {
        let seqs = random_annotated(k, 150, seed);
        let config = Config { scheme, alpha, ..Config::default() };
        let out = run_align(&seqs, &config).unwrap();
        check_round_trip(&out.msa, &seqs)?;
    }

    #[test]
    fn planted_inputs_round_trip(seed in any::<u64>(), k in 2usize..=8, motifs in 1usize..=4) {
        let params = MotifParams { sequences: k, length: 120, motifs, ..MotifParams::default() };
        let inst = planted_motifs(&params, seed);
        let out = run_align(&inst.seqs, &Config::default()).unwrap();
        check_round_trip(&out.msa, &inst.seqs)?;
        prop_assert!(!out.fallback);
    }

    #[test]
    fn thread_count_does_not_change_output(seed in any::<u64>(), k in 2usize..=6) {
        let seqs = random_annotated(k, 120, seed);
        let render = |threads| {
            let out = run_align(&seqs, &Config { threads, ..Config::default() }).unwrap();
            (out.msa.to_fasta(), out.tree.to_newick(), out.distances.to_phylip(out.names()), out.score_table.to_tsv())
        };
        prop_assert_eq!(render(1), render(4));
    }

    #[test]
    fn planted_matched_segments_share_a_column(seed in any::<u64>(), k in 3usize..=8) {
        let params = MotifParams { sequences: k, length: 120, motifs: 3, ..MotifParams::default() };
        check_conservation(&planted_motifs(&params, seed).seqs, true)?;
    }

    #[test]
    fn centers_share_a_column_with_their_column_mates(seed in any::<u64>(), k in 3usize..=8) {
        check_conservation(&random_annotated(k, 150, seed), false)?;
    }
}

#[test]
fn disjoint_pair_is_plain_global_alignment() {
    let mut a = AnnotatedSequence::new("a", b"MKTAYIAKQRQISFVKSHFSRQ").unwrap();
    a.set_segments(vec![Segment::new(2, 10, "H", 8.0)]).unwrap();
    let mut b = AnnotatedSequence::new("b", b"MKTAYIAKQRISFVKSHFSRQLEERLGLIEVQ").unwrap();
    b.set_segments(vec![Segment::new(12, 20, "E", 8.0)]).unwrap();
    let seqs = vec![a, b];
    let out = run_align(&seqs, &Config::default()).unwrap();
    assert!(out.fallback);
    let nw = global_align_residues(
        &seqs[0].residues,
        &seqs[1].residues,
        &SubstitutionMatrix::blosum62(),
        GapPenalties::default(),
    );
    assert_eq!(out.msa.rows, vec![nw.top, nw.bottom]);
}

#[test]
fn identical_annotations_keep_segments_aligned() {
    let res = b"GSHMKLVVAGGDWTPELLKKAAEEGFKVIVLDRSGNPEAIEKALKEAG";
    let mut seqs = Vec::new();
    for (n, cut) in [0usize, 3, 7].into_iter().enumerate() {
        let mut s = AnnotatedSequence::new(format!("s{n}"), &res[cut..]).unwrap();
        s.set_segments(vec![Segment::new(20 - cut, 32 - cut, "H", 9.0)])
            .unwrap();
        seqs.push(s);
    }
    let out = run_align(&seqs, &Config::default()).unwrap();
    assert!(!out.fallback);
    let cols = residue_columns(&out.msa);
    let first: Vec<usize> = (0..3).map(|r| cols[r][20 - [0, 3, 7][r]]).collect();
    assert!(first.iter().all(|&c| c == first[0]));
}
