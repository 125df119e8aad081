mod common;

use common::*;
use ldpc_parsim::channel::LlrVector;
use ldpc_parsim::code::{generate_regular, syndrome_ok, Codeword, ParityCheckMatrix};
use ldpc_parsim::decoder::reference::{decode_minsum_reference, MinSumReference};
use ldpc_parsim::decoder::{decode, Arithmetic, DecoderConfig, FloatArith, RmsaDecoder};
use proptest::prelude::*;

fn small_code(seed: u64) -> ParityCheckMatrix {
    // n in {12, 18, 24}
    let n = 12 + 6 * (seed % 3) as usize;
    generate_regular(n, 3, 6, seed).unwrap()
}

fn prior_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-6.0f64..6.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn messages_match_reference_minsum(seed in 0u64..1000, raw in prior_strategy(24)) {
        let h = small_code(seed);
        let prior = &raw[..h.n()];
        let mut rmsa = RmsaDecoder::new(&h, prior, FloatArith { clamp: None });
        let mut reference = MinSumReference::new(&h, prior, None);
        for _ in 0..10 {
            let st = rmsa.state();
            let diffs: Vec<f64> = h.iter_edges().enumerate().map(|(e, (_, v))| st.total[v] - st.check_msg[e]).collect();
            let a = rmsa.iterate();
            let b = reference.iterate();
            for (d, q) in diffs.iter().zip(reference.var_messages()) {
                prop_assert!((d - q).abs() <= 1e-9, "difference {} vs q {}", d, q);
            }
            for (x, y) in rmsa.check_messages_f64().iter().zip(reference.check_messages()) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
            // hard decisions may only differ where the total is rounding noise
            for (v, t) in reference.totals().iter().enumerate() {
                if t.abs() > 1e-9 {
                    prop_assert_eq!(a.bits()[v], b.bits()[v]);
                }
            }
        }
    }

    #[test]
    fn column_permutation_permutes_output(seed in 0u64..1000, raw in prior_strategy(24), rot in 1usize..23) {
        let h = small_code(seed);
        let n = h.n();
        let perm = |v: usize| (v * 5 + rot) % n; // 5 is coprime to 12, 18 and 24
        let rows: Vec<Vec<usize>> = (0..h.m()).map(|c| h.row(c).iter().map(|&v| perm(v)).collect()).collect();
        let hp = ParityCheckMatrix::from_rows(n, rows).unwrap();
        let mut pp = vec![0.0; n];
        for v in 0..n {
            pp[perm(v)] = raw[v];
        }
        let cfg = DecoderConfig::default();
        let a = decode(&h, &LlrVector(raw[..n].to_vec()), &cfg).unwrap();
        let b = decode(&hp, &LlrVector(pp), &cfg).unwrap();
        prop_assert_eq!(a.iterations_used, b.iterations_used);
        for v in 0..n {
            prop_assert_eq!(a.bits.bits()[v], b.bits.bits()[perm(v)]);
        }
    }

    #[test]
    fn converged_flag_is_the_syndrome(seed in 0u64..1000, raw in prior_strategy(24), early in any::<bool>(), fixed in any::<bool>()) {
        let h = small_code(seed);
        let cfg = DecoderConfig {
            early_exit: early,
            arithmetic: if fixed { Arithmetic::Q8_4 } else { Arithmetic::Float64 },
            ..Default::default()
        };
        let r = decode(&h, &LlrVector(raw[..h.n()].to_vec()), &cfg).unwrap();
        prop_assert_eq!(r.converged, syndrome_ok(&h, &r.bits).unwrap());
        prop_assert!(r.iterations_used >= 1 && r.iterations_used <= 30);
        if !early {
            prop_assert_eq!(r.iterations_used, 30);
        }
    }
}

#[test]
fn decode_is_deterministic() {
    let h = regular_504();
    for arithmetic in [Arithmetic::Float64, Arithmetic::Q8_4] {
        let cfg = DecoderConfig { arithmetic, ..Default::default() };
        let prior = noisy_zero(&h, 1.5, 42);
        let a = serde_json::to_vec(&decode(&h, &prior, &cfg).unwrap()).unwrap();
        let b = serde_json::to_vec(&decode(&h, &prior, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn reference_agrees_on_hamming_noise() {
    let h = hamming();
    let cfg = DecoderConfig::default();
    for seed in 0..100 {
        let prior = noisy_zero(&h, 1.0, seed);
        let a = decode(&h, &prior, &cfg).unwrap();
        let b = decode_minsum_reference(&h, &prior, &cfg).unwrap();
        assert_eq!(a.bits, b.bits, "seed {seed}");
        assert_eq!(a.iterations_used, b.iterations_used);
    }
}

#[test]
fn weak_single_errors_decode_to_ml_codeword() {
    let h = hamming();
    let book = codewords(&h);
    for arithmetic in [Arithmetic::Float64, Arithmetic::Q8_4] {
        let cfg = DecoderConfig { arithmetic, ..Default::default() };
        for x in &book {
            for flip in 0..7 {
                let prior: Vec<f64> = x
                    .bits()
                    .iter()
                    .enumerate()
                    .map(|(v, &b)| {
                        let s = if b == 0 { 1.0 } else { -1.0 };
                        if v == flip { -0.5 * s } else { 4.0 * s }
                    })
                    .collect();
                let r = decode(&h, &LlrVector(prior.clone()), &cfg).unwrap();
                assert!(r.converged);
                assert_eq!(&r.bits, x);
                assert_eq!(ml_codeword(&book, &prior).as_ref(), Some(x));
            }
        }
    }
}

/// Found by searching quarter-step priors in [-2, 2] on this code for inputs
/// whose hard decision violates every check and that never converge.
fn adversarial() -> (ParityCheckMatrix, LlrVector) {
    let h = generate_regular(12, 3, 6, 7).unwrap();
    let prior = vec![-2.0, -0.25, 1.5, -0.5, -2.0, 1.5, -2.0, -1.0, 1.75, -2.0, -2.0, 0.5];
    (h, LlrVector(prior))
}

#[test]
fn adversarial_prior_exhausts_iterations() {
    let (h, prior) = adversarial();
    let hard = Codeword(prior.values().iter().map(|&p| u8::from(p < 0.0)).collect());
    for c in 0..h.m() {
        let parity: u8 = h.row(c).iter().map(|&v| hard.bits()[v]).sum::<u8>() % 2;
        assert_eq!(parity, 1, "check {c} satisfied by the prior");
    }
    let cfg = DecoderConfig { max_iter: 30, early_exit: false, ..Default::default() };
    let r = decode(&h, &prior, &cfg).unwrap();
    assert!(!r.converged);
    assert_eq!(r.iterations_used, 30);
    let r = decode(&h, &prior, &DecoderConfig::default()).unwrap();
    assert!(!r.converged);
    assert_eq!(r.iterations_used, 30);
}

#[test]
fn high_snr_converges_in_first_iteration() {
    let h = regular_504();
    let first = (0..50)
        .filter(|&seed| decode(&h, &noisy_zero(&h, 8.0, seed), &DecoderConfig::default()).unwrap().iterations_used == 1)
        .count();
    assert!(first >= 45, "{first}/50 converged in one iteration");
}
