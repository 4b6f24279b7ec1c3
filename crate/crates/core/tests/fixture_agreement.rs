mod common;

use common::{CASE1, CASE2, K2_SET};
use lame_qes::fixtures::fixture_for;
use lame_qes::{band_edge_spectrum, EllipticModulus, LameParameters};

const GRID: usize = 401;

fn grid(k: f64) -> Vec<f64> {
    (0..GRID).map(|i| 2.0 * k * i as f64 / (GRID - 1) as f64).collect()
}

#[test]
fn simple_states_match_closed_forms_up_to_scale() {
    for (m2, l2) in CASE1 {
        let p = LameParameters::from_twice(m2, l2).unwrap();
        let fixture = fixture_for(&p).unwrap();
        for k2 in K2_SET {
            let md = EllipticModulus::new(k2).unwrap();
            let k = md.quarter_period();
            let x0 = k / 3.0;
            let spectrum = band_edge_spectrum(&p, &md).unwrap();
            for (e, f) in fixture.states(k2) {
                let st = spectrum
                    .states
                    .iter()
                    .find(|s| (s.energy - e).abs() < 1e-9)
                    .unwrap_or_else(|| panic!("{p} k²={k2}: no state at {e}"));
                let w = &st.samplers[0];
                let (w0, f0) = (w.eval(x0), f(x0, &md));
                let worst = grid(k)
                    .iter()
                    .map(|&x| (w.eval(x) / w0 - f(x, &md) / f0).abs())
                    .fold(0.0, f64::max);
                assert!(worst < 1e-8, "{p} k²={k2} E={e}: {worst:e}");
            }
        }
    }
}

/// Least-squares distance of `target` from span{basis} over the grid,
/// relative to the size of `target`.
fn span_distance(basis: &[Vec<f64>], target: &[f64]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for _ in 0..2 {
            for u in &ortho {
                let c = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= c * ui);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            v.iter_mut().for_each(|vi| *vi /= n);
            ortho.push(v);
        }
    }
    let mut r = target.to_vec();
    for u in &ortho {
        let c = dot(u, &r);
        r.iter_mut().zip(u).for_each(|(ri, ui)| *ri -= c * ui);
    }
    let scale = target.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    r.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / scale
}

#[test]
fn degenerate_levels_span_the_closed_forms() {
    for (m2, l2) in CASE2 {
        let p = LameParameters::from_twice(m2, l2).unwrap();
        let fixture = fixture_for(&p).unwrap();
        for k2 in K2_SET {
            let md = EllipticModulus::new(k2).unwrap();
            let xs = grid(md.quarter_period());
            let spectrum = band_edge_spectrum(&p, &md).unwrap();
            for (e, f) in fixture.states(k2) {
                let st = spectrum.states.iter().find(|s| (s.energy - e).abs() < 1e-9).unwrap();
                let basis: Vec<Vec<f64>> = st
                    .samplers
                    .iter()
                    .map(|s| xs.iter().map(|&x| s.eval(x)).collect())
                    .collect();
                let target: Vec<f64> = xs.iter().map(|&x| f(x, &md)).collect();
                let d = span_distance(&basis, &target);
                assert!(d < 1e-8, "{p} k²={k2} E={e}: {d:e}");
            }
        }
    }
}

#[test]
fn lower_three_halves_half_level_is_dn_to_the_three_halves() {
    let p = LameParameters::from_twice(3, 1).unwrap();
    for k2 in K2_SET {
        let md = EllipticModulus::new(k2).unwrap();
        let s = band_edge_spectrum(&p, &md).unwrap();
        let st = &s.states[0];
        assert!((st.energy - 2.25 * k2).abs() < 1e-12);
        assert_eq!(st.degeneracy, 1);
        let w = &st.samplers[0];
        let w0 = w.eval(0.0);
        for x in grid(md.quarter_period()) {
            assert!((w.eval(x) / w0 - md.sn_cn_dn(x).2.powf(1.5)).abs() < 1e-12);
        }
    }
}
