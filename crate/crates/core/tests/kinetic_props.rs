//! Kinetic/static equivalence and event legality for the polygonal scheme.

use num_traits::One;
use sdg_core::kinetic_qdt::KineticQdt;
use sdg_core::num::{rat, Rat};
use sdg_core::scenario::Scenario;
use sdg_core::Error;

/// Walk seeds until `want` scenarios run clean; returns (clean, skipped).
fn run_scenarios(
    base_seed: u64,
    want: usize,
    n: usize,
    k: usize,
    degree: usize,
    samples: i64,
) -> (usize, usize) {
    let mut clean = 0;
    let mut skipped = 0;
    let mut seed = base_seed;
    while clean < want {
        seed += 1;
        let sc = Scenario::random(seed, n, k, degree, Rat::one());
        match exercise(&sc, samples) {
            Ok(()) => clean += 1,
            Err(Error::DegenerateMotion(_)) | Err(Error::DegenerateConfiguration(_)) => {
                skipped += 1;
                assert!(
                    skipped < want * 10 + 50,
                    "too many degenerate scenarios (seed {seed})"
                );
            }
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    (clean, skipped)
}

fn exercise(sc: &Scenario, samples: i64) -> Result<(), Error> {
    let mut kq = KineticQdt::new(sc)?;
    for i in 1..=samples {
        let t = rat(i, samples);
        kq.advance_to(&t)?;
        if !kq.matches_static_at(&t)? {
            panic!("kinetic/static mismatch at t = {t} (seed {})", sc.seed);
        }
    }
    // certificate count stays linear in n
    assert!(
        kq.live_cert_count() <= 12 * sc.n().max(2),
        "live certificates {} exceed 12n (n = {})",
        kq.live_cert_count(),
        sc.n()
    );
    Ok(())
}

#[test]
fn small_scenarios_match_static() {
    let (clean, skipped) = run_scenarios(1000, 6, 5, 8, 2, 16);
    assert_eq!(clean, 6);
    println!("n=5 k=8: 6 clean, {skipped} degenerate-skipped");
}

#[test]
fn mid_scenarios_match_static_k12() {
    let (clean, skipped) = run_scenarios(2000, 4, 8, 12, 2, 16);
    assert_eq!(clean, 4);
    println!("n=8 k=12: 4 clean, {skipped} degenerate-skipped");
}

#[test]
fn replay_determinism() {
    // two runs over the same scenario produce byte-identical traces
    let mut seed = 3000;
    loop {
        seed += 1;
        let sc = Scenario::random(seed, 6, 8, 2, Rat::one());
        let run = |sc: &Scenario| -> Result<Vec<String>, Error> {
            let mut kq = KineticQdt::new(sc)?;
            kq.advance_to(&sc.horizon)?;
            Ok(kq.trace.iter().map(|e| e.to_line()).collect())
        };
        match (run(&sc), run(&sc)) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a, b, "traces differ for seed {seed}");
                assert!(!a.is_empty() || sc.is_stationary());
                break;
            }
            (Err(Error::DegenerateMotion(_)), _) | (Err(Error::DegenerateConfiguration(_)), _) => {
                continue
            }
            (Err(e), _) | (_, Err(e)) => panic!("{e}"),
        }
    }
}
