#![allow(dead_code)]

use std::path::PathBuf;

use ldpc_parsim::channel::{llr_init, modulate, transmit, ChannelConfig, LlrVector};
use ldpc_parsim::code::{load_alist, syndrome_ok, Codeword, ParityCheckMatrix};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

/// The 252x504 (3,6)-regular fixture.
pub fn regular_504() -> ParityCheckMatrix {
    load_alist(&read_data("regular_504_3_6.alist")).unwrap()
}

pub fn hamming() -> ParityCheckMatrix {
    load_alist(&read_data("hamming_7_4.alist")).unwrap()
}

/// Priors of the all-zero codeword after the AWGN channel.
pub fn noisy_zero(h: &ParityCheckMatrix, ebno_db: f64, seed: u64) -> LlrVector {
    let ch = ChannelConfig::new(ebno_db, h.info().rate, seed);
    llr_init(&transmit(&modulate(&Codeword::zeros(h.n())), &ch), &ch)
}

/// Every length-n word, bit 0 first.
pub fn all_words(n: usize) -> impl Iterator<Item = Codeword> {
    (0u32..1 << n).map(move |w| Codeword((0..n).map(|i| ((w >> i) & 1) as u8).collect()))
}

pub fn codewords(h: &ParityCheckMatrix) -> Vec<Codeword> {
    all_words(h.n()).filter(|x| syndrome_ok(h, x).unwrap()).collect()
}

pub fn hamming_distance(a: &Codeword, b: &Codeword) -> usize {
    a.bits().iter().zip(b.bits()).filter(|(x, y)| x != y).count()
}

/// Maximum-likelihood codeword for soft priors: maximises the correlation
/// sum of (1 - 2x_v) * prior_v. `None` on a tie.
pub fn ml_codeword(book: &[Codeword], prior: &[f64]) -> Option<Codeword> {
    let score = |x: &Codeword| -> f64 {
        x.bits()
            .iter()
            .zip(prior)
            .map(|(&b, &p)| if b == 0 { p } else { -p })
            .sum()
    };
    let mut scored: Vec<(f64, &Codeword)> = book.iter().map(|x| (score(x), x)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    if scored.len() > 1 && scored[0].0 == scored[1].0 {
        return None;
    }
    Some(scored[0].1.clone())
}

/// Uncoded BPSK bit error rate, Q(sqrt(2 Eb/N0)) = erfc(sqrt(Eb/N0)) / 2.
pub fn uncoded_bpsk_ber(ebno_db: f64) -> f64 {
    0.5 * libm::erfc(10f64.powf(ebno_db / 10.0).sqrt())
}
