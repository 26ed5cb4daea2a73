//! Parity-check matrices shipped with the crate.
//!
//! Each table is a shortened binary cyclic code (BCH or Hamming) in the
//! `d=<int>` text format, with its minimum distance checked when loaded.

use crate::bhcode::ParityCheckSpec;
use crate::error::Result;
use crate::gf2::LinearCode;

/// `[15, 7, 5]` BCH code; its 15 columns of length 8 form a B_2 codebook.
pub const BCH_15_7: &str = include_str!("../data/bch_15_7_d5.txt");
/// `[15, 5, 7]` BCH code; its 15 columns of length 10 form a B_3 codebook.
pub const BCH_15_5: &str = include_str!("../data/bch_15_5_d7.txt");
/// `[7, 4, 3]` Hamming code; its columns are the nonzero strings of length 3.
pub const HAMMING_7_4: &str = include_str!("../data/hamming_7_4_d3.txt");
/// `[255, 239, 5]` BCH code; 255 columns of length 16 form a B_2 codebook.
pub const BCH_255_239: &str = include_str!("../data/bch_255_239_d5.txt");
/// `[43, 16, 11]` shortened BCH code.
pub const BCH_43_16: &str = include_str!("../data/bch_43_16_d11.txt");
/// `[61, 16, 21]` shortened BCH code.
pub const BCH_61_16: &str = include_str!("../data/bch_61_16_d21.txt");
/// `[55, 16, 15]` shortened BCH code.
pub const BCH_55_16: &str = include_str!("../data/bch_55_16_d15.txt");
/// `[12, 8, 3]` shortened Hamming code.
pub const HAMMING_12_8: &str = include_str!("../data/hamming_12_8_d3.txt");
/// `[18, 8, 5]` shortened BCH code.
pub const BCH_18_8: &str = include_str!("../data/bch_18_8_d5.txt");
/// `[28, 8, 11]` shortened BCH code.
pub const BCH_28_8: &str = include_str!("../data/bch_28_8_d11.txt");

pub fn spec(text: &str) -> Result<ParityCheckSpec> {
    ParityCheckSpec::parse(text)
}

pub fn code(text: &str) -> Result<LinearCode> {
    LinearCode::parse(text)
}

/// Looks a table up by the name used on the command line, e.g. `bch_15_7`.
pub fn by_name(name: &str) -> Option<&'static str> {
    Some(match name {
        "bch_15_7" => BCH_15_7,
        "bch_15_5" => BCH_15_5,
        "hamming_7_4" => HAMMING_7_4,
        "bch_255_239" => BCH_255_239,
        "bch_43_16" => BCH_43_16,
        "bch_61_16" => BCH_61_16,
        "bch_55_16" => BCH_55_16,
        "hamming_12_8" => HAMMING_12_8,
        "bch_18_8" => BCH_18_8,
        "bch_28_8" => BCH_28_8,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_meets_its_distance() {
        let expected = [
            (BCH_15_7, 15, 7, 5),
            (BCH_15_5, 15, 5, 7),
            (HAMMING_7_4, 7, 4, 3),
            (BCH_255_239, 255, 239, 5),
            (BCH_43_16, 43, 16, 11),
            (BCH_61_16, 61, 16, 21),
            (BCH_55_16, 55, 16, 15),
            (HAMMING_12_8, 12, 8, 3),
            (BCH_18_8, 18, 8, 5),
            (BCH_28_8, 28, 8, 11),
        ];
        for (text, n, k, d) in expected {
            let c = code(text).unwrap();
            assert_eq!((c.n(), c.k(), c.d()), (n, k, d));
        }
    }
}
