//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mixture_codes::bhcode::{build_bh_codebook, verify_bh, BhCodebook, Verification};
use mixture_codes::bits::{format_sum, real_sum};
use mixture_codes::bounds::{
    bh_upper_tight, gap_table, mc_upper, naive_bh_upper, round_half_even, EntropyMode, B2_RATE,
};
use mixture_codes::channel::{
    count_correctable_multi, count_correctable_single, detect_substitution, partial_sum_strings,
    reconstruct_redundancy_free, IncrementFlag, Merge,
};
use mixture_codes::codec::{block_balance, decode_mixture, encode, pool_sources, separate_pool, sum_from_prefixes, LeadRun, McCodebook};
use mixture_codes::composition::{full_multiset, is_dyck, pool, prefix_multiset, suffix_multiset};
use mixture_codes::ecc::{EccCodec, Scheme};
use mixture_codes::gf2::DEFAULT_BUDGET;
use mixture_codes::oracle::{brute_decode, check_prefix_code_cycles, verify_hmc, CycleReport, HmcVerdict, Readout};
use mixture_codes::sums::Side;
use mixture_codes::{tables, BitString, Composition, CompositionMultiset};
use num_rational::Ratio;

fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

fn strings(items: &[&str]) -> Vec<BitString> {
    items.iter().map(|s| bs(s)).collect()
}

fn ms(items: &[&str]) -> CompositionMultiset {
    items.iter().map(|t| t.parse::<Composition>().unwrap()).collect()
}

fn digits(s: &str) -> Vec<u32> {
    s.chars().map(|c| c.to_digit(10).unwrap()).collect()
}

fn sorted(mut v: Vec<BitString>) -> Vec<BitString> {
    v.sort();
    v
}

fn bh(table: &str, h: usize) -> BhCodebook {
    build_bh_codebook(h, tables::spec(table).unwrap()).unwrap()
}

fn exact_sum(p: &CompositionMultiset, n: usize, hbar: usize) -> Option<Vec<u32>> {
    reconstruct_redundancy_free(p, n, hbar, None).ok()?.sum().map(<[u32]>::to_vec)
}

const PAIR_MISSING_PREFIX_3: [&str; 23] = [
    "1", "1", "0 1", "1^2", "0 1^2", "0^2 1^2", "0 1^3", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^3",
    "0^3 1^3", "0^3 1^2", "0^3 1^2", "0^2 1^2", "0^3 1", "0^2 1", "0^2 1", "0 1", "0^2", "0", "0",
];

fn worked_examples() {
    let s = bs("01101");
    assert_eq!(
        full_multiset(&s).to_json(),
        ms(&["0", "0 1", "0 1^2", "0^2 1^2", "0^2 1^3", "1", "0 1", "0 1^2", "0 1^3", "0^2 1^3"]).to_json()
    );
    assert_eq!(prefix_multiset(&s).to_json(), ms(&["0", "0 1", "0 1^2", "0^2 1^2", "0^2 1^3"]).to_json());
    assert_eq!(suffix_multiset(&s).to_json(), ms(&["1", "0 1", "0 1^2", "0 1^3", "0^2 1^3"]).to_json());

    let (a, b) = (bs("110100"), bs("101010"));
    assert_eq!(format_sum(&real_sum([&a, &b])), "211110");
    let p = pool(&[a.clone(), b.clone()]).unwrap();
    let (pre, suf) = separate_pool(&p, 6, 2).unwrap();
    assert_eq!(format_sum(&sum_from_prefixes(&pre, 6, 2).unwrap()), "211110");
    assert_eq!(p.len(), 24);
    assert_eq!(pre.len(), 12);
    assert_eq!(pre.to_json(), prefix_multiset(&a).union(&prefix_multiset(&b)).to_json());
    assert_eq!(suf.to_json(), suffix_multiset(&a).union(&suffix_multiset(&b)).to_json());
    assert_eq!(CompositionMultiset::from_json(&p.to_json()).unwrap().to_json(), p.to_json());

    let three = strings(&["110100", "101010", "110010"]);
    assert_eq!(verify_bh(&three, 2, DEFAULT_BUDGET).unwrap(), Verification::Valid);
    let four = strings(&["110100", "101010", "110010", "101100"]);
    match verify_bh(&four, 2, DEFAULT_BUDGET).unwrap() {
        Verification::Collision { sum, .. } => assert_eq!(format_sum(&sum), "211110"),
        v => panic!("{v:?}"),
    }
}

fn round_trips() {
    let cb = McCodebook::new(bh(tables::BCH_15_7, 2), LeadRun::Strict).unwrap();
    let words = cb.bh().strings().to_vec();
    assert_eq!(words.len(), 15);
    let mut checked = 0;
    for k in 1..=2 {
        for subset in (0..words.len()).combinations(k) {
            let chosen: Vec<BitString> = subset.iter().map(|&i| words[i].clone()).collect();
            let p = pool_sources(&chosen, &cb).unwrap();
            assert_eq!(sorted(decode_mixture(&p, &cb).unwrap()), sorted(chosen));
            checked += 1;
        }
    }
    assert_eq!(checked, 120);

    let cb3 = McCodebook::new(bh(tables::BCH_15_5, 3), LeadRun::Strict).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let chosen: Vec<BitString> = cb3.bh().strings().choose_multiple(&mut rng, 3).cloned().collect();
        let p = pool_sources(&chosen, &cb3).unwrap();
        assert_eq!(sorted(decode_mixture(&p, &cb3).unwrap()), sorted(chosen));
    }
}

fn check_balancing(s: &BitString) {
    let n = s.len();
    let q = n.isqrt() as i64;
    let pair = block_balance(s).unwrap();
    let profile = pair.u.rds_profile();
    for j in 1..=q as usize {
        assert!(profile[j * q as usize - 1].abs() <= q, "block end {j} of {s}");
    }
    assert!(profile.iter().all(|&r| 2 * r.abs() <= 3 * q), "{s}");
    let word = encode(s, LeadRun::Strict).unwrap().bits;
    let r = word.rds_profile();
    assert!(r[..r.len() - 1].iter().all(|&v| 0 < v && v <= 5 * q), "{s} gives {word}");
    assert!(is_dyck(&word).unwrap());
}

fn balancing() {
    for v in 0..16 {
        check_balancing(&BitString::from_index(v, 4));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [16, 36] {
        for _ in 0..10_000 {
            let bits = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            check_balancing(&BitString::new(bits).unwrap());
        }
    }
}

fn bounds() {
    let g = EntropyMode::Gaussian;
    let close = |x: f64, want: f64| (x - want).abs() <= 5e-4;
    for (h, naive, tight) in [(4, 0.5118, 0.4406), (6, 0.3899, 0.3433), (8, 0.3184, 0.2837)] {
        assert!(close(naive_bh_upper(h, g), naive));
        assert!(close(bh_upper_tight(h, g).unwrap(), tight));
    }
    assert_eq!(mc_upper(2).unwrap(), Ratio::new(2, 3));
    assert_eq!(mc_upper(3).unwrap(), Ratio::new(2, 3));
    assert_eq!(mc_upper(4).unwrap(), Ratio::new(3, 5));
    let gaps = gap_table(&[2, 4, 6, 8], g).unwrap();
    assert!(gaps[0].gap >= 0.09 && gaps[0].reference == B2_RATE);
    for (row, want) in gaps[1..].iter().zip([0.0882, 0.1815, 0.2372]) {
        assert!(close(row.gap, want));
    }
    let exact = bh_upper_tight(4, EntropyMode::Exact).unwrap();
    assert!(close(exact, 0.4313));
    assert_ne!(round_half_even(exact, 4), round_half_even(bh_upper_tight(4, g).unwrap(), 4));
}

fn erasures() {
    let dyck: Vec<BitString> = (0..64u64).map(|v| BitString::from_index(v, 6)).filter(|s| is_dyck(s).unwrap()).collect();
    let mut sets: Vec<Vec<BitString>> = dyck.iter().map(|s| vec![s.clone()]).collect();
    sets.extend(dyck.iter().cloned().combinations(2));
    sets.extend(strings(&["110100", "101010", "110010"]).into_iter().combinations(2));
    for set in sets {
        let clean = pool(&set).unwrap();
        let truth = real_sum(&set);
        for (c, _) in clean.iter() {
            let mut damaged = clean.clone();
            damaged.remove(&c);
            assert_eq!(exact_sum(&damaged, 6, set.len()), Some(truth.clone()), "{set:?} without {c}");
        }
    }

    let single = |items: &[&str]| exact_sum(&ms(items), 6, 1);
    assert_eq!(single(&["1", "1^3", "0 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1", "0^3", "0^2", "0"]), Some(digits("111000")));
    assert_eq!(single(&["1", "1^3", "0 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3", "0^2", "0"]), Some(digits("111000")));
    assert_eq!(single(&["1", "1^2", "0 1^2", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1", "0^2", "0"]), Some(digits("110100")));
    let two_readings = ms(&["1", "1^2", "0 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1", "0^2", "0"]);
    let r = reconstruct_redundancy_free(&two_readings, 6, 1, Some(&strings(&["111000", "110100", "101010"]))).unwrap();
    assert!(matches!(r.outcome, Merge::Ambiguous { .. }));
    assert_eq!(r.witnesses, vec![strings(&["111000"]), strings(&["110100"])]);

    let missing_prefix = ms(&PAIR_MISSING_PREFIX_3);
    assert_eq!(exact_sum(&missing_prefix, 6, 2), Some(digits("211110")));
    let disjoint = ms(&[
        "1", "1", "0 1", "1^2", "0 1^2", "0^2 1^2", "0 1^3", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^3", "0^3 1^2", "0^2 1^2", "0^3 1", "0^2 1", "0^2 1", "0 1", "0^2", "0", "0",
    ]);
    let partial = partial_sum_strings(&disjoint, 6, 2);
    assert_eq!((partial.0.to_string(), partial.1.to_string()), ("21εε10".into(), "εε1110".into()));
    assert_eq!(exact_sum(&disjoint, 6, 2), Some(digits("211110")));
    let overlap = ms(&[
        "1", "1", "0 1", "1^2", "0 1^2", "0^2 1^2", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^2", "0^2 1^2", "0^3 1", "0^2 1", "0^2 1", "0 1", "0^2", "0", "0",
    ]);
    assert_eq!(exact_sum(&overlap, 6, 2), Some(digits("211110")));
    let same_length = ms(&[
        "1", "1", "0 1", "1^2", "0 1^2", "0^2 1^2", "0 1^3", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^3", "0^3 1^2", "0^3 1^2", "0^2 1^2", "0^3 1", "0^2 1", "0 1", "0^2", "0", "0",
    ]);
    let universe = strings(&["110100", "101010", "110010", "111000"]);
    let r = reconstruct_redundancy_free(&same_length, 6, 2, Some(&universe)).unwrap();
    assert!(matches!(r.outcome, Merge::Ambiguous { .. }));
    assert_eq!(r.witnesses, vec![strings(&["110100", "101010"]), strings(&["101010", "111000"])]);

    assert_eq!(count_correctable_single(6, 2), 60);
    assert_eq!(count_correctable_multi(6, 2), 72);
    let binom = |n: u128, k: u128| (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1));
    for n in 1..=12u128 {
        for t in 0..=4u128.min(n) {
            let lower = binom(n, t / 2) * binom(n - t / 2, t.div_ceil(2));
            assert!(lower <= count_correctable_single(n as usize, t as usize), "n={n} t={t}");
        }
    }
}

fn ecc() {
    let cb = bh(tables::BCH_255_239, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sets: Vec<Vec<BitString>> =
        (0..16).map(|k| sorted(cb.strings().choose_multiple(&mut rng, 1 + k % 2).cloned().collect())).collect();
    for scheme in [Scheme::OneStep, Scheme::TwoStep, Scheme::Integral] {
        let codec = EccCodec::standard(scheme, 16, 1, 2).unwrap();
        for sources in &sets {
            let clean = codec.pool(sources).unwrap();
            for (c, _) in clean.iter() {
                let mut damaged = clean.clone();
                damaged.remove(&c);
                assert_eq!(codec.decode(&damaged, sources.len(), &cb).map(sorted).ok().as_ref(), Some(sources), "{scheme:?}");
            }
        }
        let codec = EccCodec::standard(scheme, 16, 2, 2).unwrap();
        let mut silent = 0;
        for _ in 0..10_000 {
            let hbar = rng.gen_range(1..=2);
            let sources = sorted(cb.strings().choose_multiple(&mut rng, hbar).cloned().collect());
            let clean = codec.pool(&sources).unwrap();
            let items: Vec<Composition> = clean.expanded().collect();
            let mut damaged = clean.clone();
            for i in rand::seq::index::sample(&mut rng, items.len(), 2) {
                damaged.remove(&items[i]);
            }
            if let Ok(found) = codec.decode(&damaged, sources.len(), &cb) {
                silent += usize::from(sorted(found) != sources);
            }
        }
        assert_eq!(silent, 0, "{scheme:?}");
    }
    let integral = EccCodec::standard(Scheme::Integral, 16, 2, 2).unwrap();
    assert_eq!(integral.code().erasure_capability(), 1);

    for t in 1..=2 {
        let two = EccCodec::standard(Scheme::TwoStep, 16, t, 2).unwrap();
        let g = two.geometry();
        let (m1, root) = (g.padded_len(), g.block);
        let m3 = two.flag_code().unwrap().n();
        assert_eq!(2 * two.total_len(), 2 * m1 + 17 * root + 4 * (m3 - root) + 4);
    }
}

fn oracle() {
    let cb = McCodebook::new(bh(tables::BCH_15_7, 2), LeadRun::Strict).unwrap();
    let sources = cb.bh().strings().to_vec();
    let words = cb.codewords().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let k = rng.gen_range(0..=2);
        let picks = sorted(rand::seq::index::sample(&mut rng, sources.len(), k).into_iter().map(|i| sources[i].clone()).collect());
        let p = pool_sources(&picks, &cb).unwrap();
        let fast = sorted(decode_mixture(&p, &cb).unwrap());
        let brute = brute_decode(&p, &words, 2, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(brute.len(), 1);
        let from_words: Vec<BitString> = fast.iter().map(|s| encode(s, LeadRun::Strict).unwrap().bits).collect();
        assert_eq!(sorted(brute[0].clone()), sorted(from_words));
    }

    let constructed = [
        (words.clone(), 2),
        (McCodebook::new(bh(tables::BCH_15_5, 3), LeadRun::Strict).unwrap().codewords().unwrap()[..12].to_vec(), 3),
    ];
    for (code, h) in &constructed {
        assert_eq!(verify_hmc(code, *h, Readout::Full, DEFAULT_BUDGET).unwrap(), HmcVerdict::Valid);
        assert_eq!(verify_hmc(code, *h, Readout::Prefix, DEFAULT_BUDGET).unwrap(), HmcVerdict::Valid);
        for split in 1..code[0].len() {
            assert_eq!(check_prefix_code_cycles(code, split, 4).unwrap(), CycleReport::Free);
        }
    }

    let planted = strings(&["1000", "0111", "1011", "0100"]);
    match check_prefix_code_cycles(&planted, 2, 4).unwrap() {
        CycleReport::Cycle { weight, strings } => {
            assert_eq!(weight, 1);
            assert_eq!(sorted(strings), sorted(planted.clone()));
        }
        CycleReport::Free => panic!("planted cycle missed"),
    }
}

fn substitutions() {
    let missing_prefix = ms(&PAIR_MISSING_PREFIX_3);
    let report = detect_substitution(&missing_prefix, 6, 2);
    assert!(report.out_of_range.contains(&IncrementFlag { side: Side::Prefix, position: 3, value: -1 }));

    let fixes = |p: &CompositionMultiset| -> Vec<(String, String, String)> {
        detect_substitution(p, 6, 2)
            .candidates
            .iter()
            .map(|c| (c.observed.to_string(), c.corrected.to_string(), format_sum(&c.sum)))
            .collect()
    };
    let unique = ms(&[
        "1", "1", "0^2", "1^2", "1^3", "0 1^2", "0 1^3", "0 1^3", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1^2", "0^3 1", "0^3 1", "0^3", "0^2 1", "0^2", "0^2", "0", "0",
    ]);
    assert_eq!(fixes(&unique), vec![("0^2".into(), "1^2".into(), "221100".into())]);
    let two = ms(&[
        "1", "1", "1^2", "1^2", "0^3", "0 1^2", "0 1^3", "0^2 1^2", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1^2", "0^3 1", "0^3 1", "0^2 1", "0^2 1", "0^2", "0 1", "0", "0",
    ]);
    assert_eq!(
        fixes(&two),
        vec![("0^3".into(), "0 1^2".into(), "220110".into()), ("0^2 1".into(), "1^3".into(), "221010".into())]
    );
    let incompatible = ms(&[
        "1", "1", "1^2", "0 1", "0 1^2", "0 1^2", "0 1^3", "0^2 1^2", "0^2 1^3", "0^2 1^3", "0^3 1^3", "0^3 1^3",
        "0^3 1^3", "0^3 1^3", "0^3 1^2", "0^3 1^2", "0^3 1", "0^3 1", "0^2 1", "0^2 1", "0^2", "0 1", "0", "0",
    ]);
    let report = detect_substitution(&incompatible, 6, 2);
    assert!(report.incompatible_lengths.contains(&2));
    assert_eq!(report.prefix_sum.as_deref().map(format_sum).as_deref(), Some("211110"));
    assert_eq!(report.suffix_sum.as_deref().map(format_sum).as_deref(), Some("220110"));
    assert_eq!(
        fixes(&incompatible),
        vec![("0 1".into(), "1^2".into(), "220110".into()), ("0^3 1".into(), "0^2 1^2".into(), "211110".into())]
    );
}

fn main() {
    let criteria: [(&str, fn()); 8] = [
        ("worked examples", worked_examples),
        ("round trips", round_trips),
        ("balancing invariants", balancing),
        ("bounds table", bounds),
        ("erasure model", erasures),
        ("ecc schemes", ecc),
        ("oracle equivalence", oracle),
        ("substitution detection", substitutions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        failed += usize::from(!ok);
        println!("criterion {} {name}: {} ({:.2?})", i + 1, if ok { "PASS" } else { "FAIL" }, start.elapsed());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
