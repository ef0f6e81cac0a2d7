//! Along a line in parameter space an invariant may only change where a
//! quasienergy gap closes.

use boundfloq::topology::{
    chern_number, closing_condition, kitaev_invariants, min_gaps, ClosingCondition, DrivenHaldane, DrivenKitaev,
};

fn chern(t1: f64, t2: f64) -> Option<i64> {
    chern_number(&DrivenHaldane::reference(t1, t2), 40).ok().map(|c| c.value)
}

fn smallest_gap(t1: f64, t2: f64) -> (f64, ClosingCondition) {
    let m = DrivenHaldane::reference(t1, t2);
    let [g0, gpi] = min_gaps(&m, 48).unwrap();
    let g = if g0.gap < gpi.gap { g0 } else { gpi };
    (g.gap, closing_condition(&m, g.theta, 0.02))
}

#[test]
fn chern_number_changes_only_at_gap_closings() {
    let t2 = 1.2;
    let ts: Vec<f64> = (0..=28).map(|i| 0.2 + 0.05 * i as f64).collect();
    let mut changes = 0;
    for w in ts.windows(2) {
        let (Some(a), Some(b)) = (chern(w[0], t2), chern(w[1], t2)) else { continue };
        if a == b {
            continue;
        }
        changes += 1;
        // bisect onto the transition
        let (mut lo, mut hi) = (w[0], w[1]);
        for _ in 0..25 {
            let mid = 0.5 * (lo + hi);
            match chern(mid, t2) {
                Some(c) if c == a => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
        }
        // a coarse grid flips its plaquette sum slightly off the true closing
        let (gap, tag) = smallest_gap(0.5 * (lo + hi), t2);
        let open = smallest_gap(w[0], t2).0.min(smallest_gap(w[1], t2).0);
        assert!(gap < 1e-2 && gap < 0.1 * open, "C: {a} -> {b} near T1 = {lo} with gap {gap} (ends {open})");
        assert_ne!(tag, ClosingCondition::Anomaly, "near T1 = {lo}");
    }
    assert!(changes > 0, "path crosses no transition");
}

#[test]
fn kitaev_counts_change_only_where_the_chain_is_gapless() {
    // below T ≈ 0.2 the reference chain at t1 = 3 is in the 10 phase, above it
    // reaches 11; in between the windings are either refused or jump
    let counts = |t: f64| {
        kitaev_invariants(&DrivenKitaev::reference(3.0, 2.5, t), 4096).ok().and_then(|w| w.counts())
    };
    let grid: Vec<f64> = (0..=30).map(|i| 0.05 + 0.01 * i as f64).collect();
    let mut previous: Option<(f64, _)> = None;
    let mut seen = std::collections::BTreeSet::new();
    for &t in &grid {
        let Some(c) = counts(t) else {
            previous = None;
            continue;
        };
        seen.insert((c.zero, c.pi));
        if let Some((tp, cp)) = previous {
            if cp != c {
                // a change between neighbours needs a closing in between
                let closes = (1..20).any(|j| {
                    let tt = tp + (t - tp) * j as f64 / 20.0;
                    let m = DrivenKitaev::reference(3.0, 2.5, tt);
                    (0..4096).any(|k| {
                        let f = m.floquet(0, 2.0 * std::f64::consts::PI * k as f64 / 4096.0);
                        let (g0, gpi) = f.gaps();
                        g0.min(gpi) < 0.05
                    })
                });
                assert!(closes, "counts change between T = {tp} and {t} without a closing");
            }
        }
        previous = Some((t, c));
    }
    assert!(seen.len() >= 2, "only {seen:?} along the path");
}
