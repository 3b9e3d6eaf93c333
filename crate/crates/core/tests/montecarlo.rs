use rand::Rng;
use rfso_secrecy::channels::{Detection, DggLink, RngStream, Turbulence};
use rfso_secrecy::cli::ScenarioConfig;
use rfso_secrecy::montecarlo::{
    chunk_rng, count_sop1, estimate_sop1, estimate_sop1_with, estimate_sop2, estimate_sop2_with, estimate_spsc1,
    estimate_spsc2, FsoSampling, McOptions, MCEstimate,
};
use rfso_secrecy::secrecy::{sop2_lower, spsc2};

fn base() -> ScenarioConfig {
    ScenarioConfig::default()
}

/// `|a − b| ≤ k·√(σa² + σb²)` for two independent estimates.
fn consistent(a: &MCEstimate, b: &MCEstimate, k: f64) -> bool {
    (a.value - b.value).abs() <= k * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
}

#[test]
fn same_stream_same_estimate() {
    let s = base().build().unwrap();
    let rng = RngStream::new(99, 5);
    let a = estimate_sop1(&s.s1, 200_000, &rng, false).unwrap();
    let b = estimate_sop1(&s.s1, 200_000, &rng, false).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let c = estimate_sop1(&s.s1, 200_000, &RngStream::new(99, 6), false).unwrap();
    assert_ne!(a.hits(), c.hits());
}

#[test]
fn chunked_estimate_equals_concatenated_streams() {
    let s = base().build().unwrap();
    let rng = RngStream::new(3, 11);
    let n = 100_000;
    for chunk in [10_000u64, 30_000, 65_536] {
        let par = estimate_sop1_with(&s.s1, n, &rng, true, &McOptions { chunk, ..McOptions::default() }).unwrap();
        let mut hits = 0;
        let mut done = 0;
        let mut i = 0;
        while done < n {
            let m = chunk.min(n - done);
            hits += count_sop1(&s.s1, m, &mut chunk_rng(&rng, i), true).unwrap();
            done += m;
            i += 1;
        }
        assert_eq!(par.hits(), hits, "chunk {chunk}");
    }
}

#[test]
fn std_error_scales_as_inverse_root_n() {
    let s = base().build().unwrap();
    let rng = RngStream::new(8, 1);
    let se: Vec<f64> =
        [10_000u64, 100_000, 1_000_000].iter().map(|&n| estimate_sop1(&s.s1, n, &rng, false).unwrap().std_error).collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio / 10f64.sqrt() - 1.0).abs() <= 0.1, "{se:?}");
    }
}

#[test]
fn too_few_samples_is_an_error() {
    let s = base().build().unwrap();
    assert!(estimate_sop1(&s.s1, 9_999, &RngStream::new(1, 1), false).is_err());
}

#[test]
fn vanishing_eavesdropper() {
    let sc = ScenarioConfig { phi_se_db: -80.0, ue_db: -80.0, target_rate: 0.0, ..base() };
    let s = sc.build().unwrap();
    let rng = RngStream::new(21, 0);
    let sop = estimate_sop1(&s.s1, 100_000, &rng, false).unwrap();
    assert!(sop.agrees_with(0.0, 3.0), "{sop:?}");
    let p1 = estimate_spsc1(&s.s1, 100_000, &rng).unwrap();
    let p2 = estimate_spsc2(&s.s2, 100_000, &rng).unwrap();
    assert!(p1.agrees_with(1.0, 3.0) && p2.agrees_with(1.0, 3.0), "{p1:?} {p2:?}");
}

#[test]
fn identical_fso_links_are_a_coin_flip() {
    for t in [Turbulence::STRONG, Turbulence::WEAK] {
        let sc = ScenarioConfig { turbulence: t, ud_db: 15.0, ue_db: 15.0, target_rate: 0.0, ..base() };
        let s = sc.build().unwrap();
        let p = estimate_spsc2(&s.s2, 400_000, &RngStream::new(5, 2)).unwrap();
        assert!(p.agrees_with(0.5, 3.0), "{p:?}");
        let q = estimate_sop2(&s.s2, 400_000, &RngStream::new(5, 3), false).unwrap();
        assert!(q.agrees_with(0.5, 3.0), "{q:?}");
    }
}

/// With a 60 dB RF hop the scenario-2 outage only depends on the two FSO
/// draws, so a two-variable simulation must agree.
#[test]
fn strong_rf_hop_reduces_to_fso_pair() {
    let sc = ScenarioConfig {
        phi_sr_db: 60.0,
        turbulence: Turbulence::MODERATE,
        ue_db: 12.0,
        ..base()
    };
    let s = sc.build().unwrap();
    let n = 1_000_000;
    let full = estimate_sop2(&s.s2, n, &RngStream::new(12, 0), true).unwrap();
    let phi2 = s.s2.phi2();
    let (main, eve) = (&s.s2.fso_main, &s.s2.fso_eve);
    let mut rng = RngStream::new(12, 1);
    let mut hits = 0u64;
    for _ in 0..n {
        let gd = main.sample(&mut rng, 1)[0];
        let ge = eve.sample(&mut rng, 1)[0];
        if gd <= phi2 * ge + phi2 - 1.0 {
            hits += 1;
        }
    }
    let reduced = MCEstimate::from_counts(hits, n);
    assert!(consistent(&full, &reduced, 3.0), "{full:?} vs {reduced:?}");
}

#[test]
fn inverse_cdf_sampling_agrees_with_physical_sampling() {
    for (t, d) in [(Turbulence::STRONG, Detection::ImDd), (Turbulence::WEAK, Detection::Hd)] {
        let sc = ScenarioConfig { turbulence: t, s0: d, se: d, ue_db: 5.0, ..base() };
        let s = sc.build().unwrap();
        let n = 500_000;
        let inv = McOptions { sampling: FsoSampling::InverseCdf, ..McOptions::default() };
        let a = estimate_sop2_with(&s.s2, n, &RngStream::new(77, 0), false, &McOptions::default()).unwrap();
        let b = estimate_sop2_with(&s.s2, n, &RngStream::new(77, 1), false, &inv).unwrap();
        assert!(consistent(&a, &b, 3.0), "{a:?} vs {b:?}");
        let closed = sop2_lower(&s.s2).unwrap().value;
        assert!(b.agrees_with(closed, 3.0), "{closed} vs {b:?}");
        let p = estimate_spsc2(&s.s2, n, &RngStream::new(77, 2)).unwrap();
        assert!(p.agrees_with(spsc2(&s.s2).unwrap().value, 3.0));
    }
}

#[test]
fn wilson_interval_near_zero() {
    let e = MCEstimate::from_counts(0, 100_000);
    assert_eq!(e.value, 0.0);
    assert_eq!(e.ci95_low, 0.0);
    assert!(e.ci95_high > 0.0 && e.ci95_high < 1e-4);
    let e = MCEstimate::from_counts(50_000, 100_000);
    assert!((e.ci95_high - e.ci95_low - 2.0 * 1.96 * e.std_error).abs() < 1e-6);
}

#[test]
fn streams_are_independent_of_each_other() {
    let mut a = RngStream::new(1, 0);
    let mut b = RngStream::new(1, 1);
    let xa: Vec<u64> = (0..8).map(|_| a.random()).collect();
    let xb: Vec<u64> = (0..8).map(|_| b.random()).collect();
    assert_ne!(xa, xb);
    let l = DggLink::new(Turbulence::WEAK, 1.0, Detection::Hd, 1.0).unwrap();
    assert_eq!(l.sample(&mut RngStream::new(4, 4), 5), l.sample(&mut RngStream::new(4, 4), 5));
}
