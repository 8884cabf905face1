use std::collections::BTreeSet;

use proptest::prelude::*;

use segmsa::exec::Exec;
use segmsa::neighborhoods::SegRef;
use segmsa::pipeline::{prepare, Config, Timings};
use segmsa::scoring::{score_gap, score_pair, GapScheme, PairScheme, ScoringScheme, SegmentScoreTable};
use segmsa::seq::AnnotatedSequence;
use segmsa::synth::{planted_motifs, MotifParams};

fn planted(seed: u64, k: usize) -> Vec<AnnotatedSequence> {
    let params = MotifParams {
        sequences: k,
        length: 90,
        motifs: 3,
        ..MotifParams::default()
    };
    planted_motifs(&params, seed).seqs
}

const SCHEMES: [PairScheme; 3] = [PairScheme::Progressive, PairScheme::Linear, PairScheme::Quadratic];

#[test]
fn planted_inputs_have_mutual_support() {
    let seqs = planted(3, 5);
    let p = prepare(&seqs, &Config::default(), &mut Timings::default()).unwrap();
    assert!(p.index.mutual.values().any(|mn| mn.len() >= 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schemes_are_ordered_and_symmetric(seed in any::<u64>(), k in 2usize..=6) {
        let seqs = planted(seed, k);
        let p = prepare(&seqs, &Config::default(), &mut Timings::default()).unwrap();
        for &(s, t) in p.index.mutual.keys() {
            let v: Vec<f64> = SCHEMES.iter().map(|&sc| score_pair(s, t, &p.scores, &p.index, sc).unwrap()).collect();
            prop_assert!(v[0] >= 0.0 && v[1] >= v[0] && v[2] >= v[1]);
            for (i, &sc) in SCHEMES.iter().enumerate() {
                prop_assert_eq!(score_pair(t, s, &p.scores, &p.index, sc).unwrap(), v[i]);
            }
        }
        for s in p.scores.all_segments() {
            prop_assert_eq!(score_gap(s, &p.scores, &p.index, GapScheme::Zero), 0.0);
            prop_assert!(score_gap(s, &p.scores, &p.index, GapScheme::Max) >= 0.0);
        }
    }

    #[test]
    fn deleting_a_third_sequence_never_raises_scores(seed in any::<u64>(), k in 3usize..=6, drop in 0usize..6) {
        let drop = drop % k;
        let seqs = planted(seed, k);
        let config = Config::default();
        let full = prepare(&seqs, &config, &mut Timings::default()).unwrap();
        let rest: Vec<AnnotatedSequence> = seqs.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, s)| s.clone()).collect();
        let part = prepare(&rest, &config, &mut Timings::default()).unwrap();
        let old_of = |n: usize| if n >= drop { n + 1 } else { n };
        let new_of = |s: SegRef| SegRef::new(if s.seq > drop { s.seq - 1 } else { s.seq }, s.idx);
        for &(s, t) in full.index.mutual.keys() {
            if s.seq == drop || t.seq == drop {
                continue;
            }
            let before: BTreeSet<SegRef> = full.index.mutual_neighborhood(s, t).iter().copied().collect();
            let after: BTreeSet<SegRef> = part
                .index
                .compute_mutual(&part.scores, new_of(s), new_of(t))
                .into_iter()
                .map(|u| SegRef::new(old_of(u.seq), u.idx))
                .collect();
            prop_assert!(after.is_subset(&before));
            for sc in [PairScheme::Linear, PairScheme::Quadratic] {
                let a = score_pair(new_of(s), new_of(t), &part.scores, &part.index, sc).unwrap();
                let b = score_pair(s, t, &full.scores, &full.index, sc).unwrap();
                prop_assert!(a <= b);
            }
        }
    }

    #[test]
    fn table_covers_neighbor_segments(seed in any::<u64>(), k in 2usize..=5) {
        let seqs = planted(seed, k);
        let p = prepare(&seqs, &Config::default(), &mut Timings::default()).unwrap();
        let table = SegmentScoreTable::build(&p.scores, &p.index, ScoringScheme::default(), Exec::Sequential).unwrap();
        let nei = p.neighbor_segments();
        for (i, bi) in nei.iter().enumerate() {
            for &s in bi {
                prop_assert!(table.gap(s).unwrap() >= 0.0);
                for bj in nei.iter().skip(i + 1) {
                    for &t in bj {
                        let same = table.seg_type(s) == table.seg_type(t);
                        prop_assert_eq!(table.pair(s, t).is_some(), same);
                        prop_assert_eq!(table.pair(s, t), table.pair(t, s));
                    }
                }
            }
        }
        prop_assert!(table.pairs().all(|(_, _, v)| v >= 0.0));
    }
}
