use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mixture_codes::gf2::DEFAULT_BUDGET;
use mixture_codes::oracle::{check_prefix_code_cycles, verify_hmc, CycleReport, HmcVerdict, Readout};
use mixture_codes::BitString;

/// Adds strings in random order whenever the prefix readout stays unique.
fn random_prefix_code(rng: &mut ChaCha8Rng, n: usize) -> Vec<BitString> {
    let mut all: Vec<BitString> = (0..1u64 << n).map(|v| BitString::from_index(v, n)).collect();
    all.shuffle(rng);
    let mut code: Vec<BitString> = Vec::new();
    for s in all {
        code.push(s);
        if verify_hmc(&code, 2, Readout::Prefix, DEFAULT_BUDGET).unwrap() != HmcVerdict::Valid {
            code.pop();
        }
    }
    code
}

#[test]
fn verified_prefix_codes_have_no_four_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let code = random_prefix_code(&mut rng, 6);
        assert!(code.len() >= 4);
        for split in 1..6 {
            assert_eq!(check_prefix_code_cycles(&code, split, 4).unwrap(), CycleReport::Free, "{code:?} at {split}");
        }
    }
}

#[test]
fn a_cycle_always_comes_with_a_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let all: Vec<BitString> = (0..64u64).map(|v| BitString::from_index(v, 6)).collect();
    for _ in 0..200 {
        let code: Vec<BitString> = all.choose_multiple(&mut rng, 8).cloned().collect();
        let cyclic = (1..6).any(|split| check_prefix_code_cycles(&code, split, 4).unwrap() != CycleReport::Free);
        if cyclic {
            assert!(matches!(verify_hmc(&code, 2, Readout::Prefix, DEFAULT_BUDGET).unwrap(), HmcVerdict::Witness { .. }));
        }
    }
}
