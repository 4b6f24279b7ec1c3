//! Closed-form band-edge energies and eigenfunctions for small `(m, l)`,
//! written directly in terms of sn, cn, dn for golden testing.
//!
//! Half-odd `m` needs the half-angle factors `√(dn + cn)` and
//! `sgn(sn)·√(dn − cn)`. Those have a kink and a jump at `x = 2K`, so they
//! are replaced by their smooth continuations [`half_plus`] and
//! [`half_minus`], which agree with them on `(−2K, 2K)`.

use crate::algebraize::LameParameters;
use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};

pub type EnergyFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
pub type WaveFn = Box<dyn Fn(f64, &EllipticModulus<f64>) -> f64 + Send + Sync>;

pub struct FixtureLevel {
    pub energy: EnergyFn,
    pub functions: Vec<WaveFn>,
}

pub struct Fixture {
    pub params: LameParameters,
    pub levels: Vec<FixtureLevel>,
}

impl Fixture {
    pub fn function_count(&self) -> usize {
        self.levels.iter().map(|l| l.functions.len()).sum()
    }

    /// One energy per level, ascending.
    pub fn level_energies(&self, k2: f64) -> Vec<f64> {
        let mut e: Vec<f64> = self.levels.iter().map(|l| (l.energy)(k2)).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `(energy, function)` for every listed eigenfunction.
    pub fn states(&self, k2: f64) -> Vec<(f64, &WaveFn)> {
        self.levels
            .iter()
            .flat_map(|l| {
                let e = (l.energy)(k2);
                l.functions.iter().map(move |f| (e, f))
            })
            .collect()
    }
}

/// The `(m, l)` pairs (as twice their values) that have a fixture.
pub const FIXTURE_PAIRS: [(i64, i64); 11] = [
    (2, 0),
    (2, 2),
    (4, 0),
    (4, 2),
    (4, 4),
    (1, 0),
    (1, 1),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
];

fn jac(x: f64, m: &EllipticModulus<f64>) -> (f64, f64, f64) {
    m.sn_cn_dn(x)
}

/// Smooth continuation of `√(dn x + cn x)` (period `8K`).
pub fn half_plus(x: f64, m: &EllipticModulus<f64>) -> f64 {
    half_angle_pair(x, m).0
}

/// Smooth continuation of `sgn(sn x)·√(dn x − cn x)` (period `8K`).
pub fn half_minus(x: f64, m: &EllipticModulus<f64>) -> f64 {
    half_angle_pair(x, m).1
}

fn half_angle_pair(x: f64, m: &EllipticModulus<f64>) -> (f64, f64) {
    let quarter = m.quarter_period();
    let (sn, cn, dn) = jac(x, m);
    let kp_sn = m.kprime() * sn;
    // the product of the two factors is k′ sn; take the root of whichever
    // of dn ± cn is bounded away from zero and divide for the other
    let shifted = (x + quarter).rem_euclid(8.0 * quarter);
    match (shifted / (2.0 * quarter)) as usize {
        0 => {
            let p = (dn + cn).sqrt();
            (p, kp_sn / p)
        }
        1 => {
            let q = (dn - cn).sqrt();
            (kp_sn / q, q)
        }
        2 => {
            let p = -(dn + cn).sqrt();
            (p, kp_sn / p)
        }
        _ => {
            let q = -(dn - cn).sqrt();
            (kp_sn / q, q)
        }
    }
}

fn level(energy: impl Fn(f64) -> f64 + Send + Sync + 'static, functions: Vec<WaveFn>) -> FixtureLevel {
    FixtureLevel {
        energy: Box::new(energy),
        functions,
    }
}

fn wave(f: impl Fn(f64, &EllipticModulus<f64>) -> f64 + Send + Sync + 'static) -> WaveFn {
    Box::new(f)
}

fn kp(k2: f64) -> f64 {
    (1.0 - k2).sqrt()
}

fn r1(k2: f64) -> f64 {
    (k2 * k2 - k2 + 1.0).sqrt()
}

fn r16(k2: f64) -> f64 {
    (k2 * k2 - 16.0 * k2 + 16.0).sqrt()
}

fn r9(k2: f64) -> f64 {
    (k2 * k2 + 9.0 * (1.0 - k2)).sqrt()
}

fn one_zero() -> Vec<FixtureLevel> {
    vec![
        level(|k2| k2, vec![wave(|x, m| jac(x, m).2)]),
        level(|_| 1.0, vec![wave(|x, m| jac(x, m).1)]),
        level(|k2| 1.0 + k2, vec![wave(|x, m| jac(x, m).0)]),
    ]
}

fn one_one() -> Vec<FixtureLevel> {
    let pm = |s: f64| {
        wave(move |x, m| {
            let (_, _, dn) = jac(x, m);
            dn + s * m.kprime() / dn
        })
    };
    vec![
        level(|k2| 2.0 + k2 - 2.0 * kp(k2), vec![pm(1.0)]),
        level(|k2| 2.0 + k2 + 2.0 * kp(k2), vec![pm(-1.0)]),
        level(
            |_| 4.0,
            vec![wave(|x, m| {
                let (sn, cn, dn) = jac(x, m);
                sn * cn / dn
            })],
        ),
    ]
}

fn two_zero() -> Vec<FixtureLevel> {
    let outer = |s: f64| {
        wave(move |x, m| {
            let k2 = m.k2();
            3.0 * jac(x, m).2.powi(2) + k2 - 2.0 + s * r1(k2)
        })
    };
    vec![
        level(|k2| 2.0 * (1.0 + k2 - r1(k2)), vec![outer(1.0)]),
        level(
            |k2| 1.0 + k2,
            vec![wave(|x, m| {
                let (_, cn, dn) = jac(x, m);
                cn * dn
            })],
        ),
        level(
            |k2| 1.0 + 4.0 * k2,
            vec![wave(|x, m| {
                let (sn, _, dn) = jac(x, m);
                sn * dn
            })],
        ),
        level(
            |k2| 4.0 + k2,
            vec![wave(|x, m| {
                let (sn, cn, _) = jac(x, m);
                sn * cn
            })],
        ),
        level(|k2| 2.0 * (1.0 + k2 + r1(k2)), vec![outer(-1.0)]),
    ]
}

fn two_one() -> Vec<FixtureLevel> {
    let r43 = |k2: f64| (4.0 - 3.0 * k2).sqrt();
    let r54 = |k2: f64| (k2 * k2 - 5.0 * k2 + 4.0).sqrt();
    let cn_state = move |s: f64| {
        wave(move |x, m| {
            let (_, cn, dn) = jac(x, m);
            cn * (3.0 * dn * dn - 1.0 + s * r43(m.k2())) / dn
        })
    };
    let sn_state = move |s: f64| {
        wave(move |x, m| {
            let (sn, _, dn) = jac(x, m);
            sn * (3.0 * dn * dn - m.kprime2() + s * r54(m.k2())) / dn
        })
    };
    vec![
        level(|k2| 4.0 * k2, vec![wave(|x, m| jac(x, m).2.powi(2))]),
        level(move |k2| 5.0 + k2 - 2.0 * r43(k2), vec![cn_state(1.0)]),
        level(move |k2| 5.0 + k2 + 2.0 * r43(k2), vec![cn_state(-1.0)]),
        level(move |k2| 5.0 + 2.0 * k2 - 2.0 * r54(k2), vec![sn_state(1.0)]),
        level(move |k2| 5.0 + 2.0 * k2 + 2.0 * r54(k2), vec![sn_state(-1.0)]),
    ]
}

fn two_two() -> Vec<FixtureLevel> {
    let eta = |k2: f64, s: f64| 4.0 - k2 + s * r16(k2);
    let even = move |s: f64| {
        wave(move |x, m| {
            let (sn, _, dn) = jac(x, m);
            let (k2, s2) = (m.k2(), sn * sn);
            let e = eta(k2, s);
            (1.0 - e * s2 + (e - k2) * s2 * s2) / (dn * dn)
        })
    };
    let odd = |s: f64| {
        wave(move |x, m| {
            let (sn, cn, dn) = jac(x, m);
            sn * cn * (1.0 + (s * m.kprime() - 1.0) * sn * sn) / (dn * dn)
        })
    };
    vec![
        level(move |k2| 2.0 * eta(k2, -1.0) + 4.0 * k2, vec![even(-1.0)]),
        level(
            |k2| 4.0 * (1.0 + k2),
            vec![wave(|x, m| {
                let (sn, _, dn) = jac(x, m);
                let s2 = sn * sn;
                (1.0 - 2.0 * s2 + m.k2() * s2 * s2) / (dn * dn)
            })],
        ),
        level(|k2| 10.0 + k2 - 6.0 * kp(k2), vec![odd(1.0)]),
        level(|k2| 10.0 + k2 + 6.0 * kp(k2), vec![odd(-1.0)]),
        level(move |k2| 2.0 * eta(k2, 1.0) + 4.0 * k2, vec![even(1.0)]),
    ]
}

fn half_zero() -> Vec<FixtureLevel> {
    vec![level(
        |k2| (1.0 + k2) / 4.0,
        vec![wave(half_plus), wave(half_minus)],
    )]
}

fn half_half() -> Vec<FixtureLevel> {
    vec![level(
        |k2| 1.0 + k2 / 4.0,
        vec![
            wave(|x, m| {
                let (_, cn, dn) = jac(x, m);
                cn / dn.sqrt()
            }),
            wave(|x, m| {
                let (sn, _, dn) = jac(x, m);
                sn / dn.sqrt()
            }),
        ],
    )]
}

fn three_halves_zero() -> Vec<FixtureLevel> {
    let alpha = |k2: f64, s: f64| 1.0 - k2 + s * r1(k2);
    let pair = move |s: f64| {
        vec![
            wave(move |x, m| {
                let (_, cn, dn) = jac(x, m);
                half_plus(x, m) * (m.k2() * cn + alpha(m.k2(), s) * dn)
            }),
            wave(move |x, m| {
                let (_, cn, dn) = jac(x, m);
                half_minus(x, m) * (m.k2() * cn - alpha(m.k2(), s) * dn)
            }),
        ]
    };
    vec![
        level(|k2| 1.25 * (1.0 + k2) - r1(k2), pair(1.0)),
        level(|k2| 1.25 * (1.0 + k2) + r1(k2), pair(-1.0)),
    ]
}

fn three_halves_half() -> Vec<FixtureLevel> {
    vec![
        level(|k2| 2.25 * k2, vec![wave(|x, m| jac(x, m).2.powf(1.5))]),
        level(
            |k2| 4.0 + k2 / 4.0,
            vec![
                wave(|x, m| {
                    let (sn, _, dn) = jac(x, m);
                    (2.0 * sn * sn - 1.0) / dn.sqrt()
                }),
                wave(|x, m| {
                    let (sn, cn, dn) = jac(x, m);
                    sn * cn / dn.sqrt()
                }),
            ],
        ),
    ]
}

fn three_halves_one() -> Vec<FixtureLevel> {
    let coeffs = |k2: f64, s: f64| {
        let r = r9(k2);
        let beta = 8.0 * k2 * k2 + 72.0 * k2 - 96.0 + s * 8.0 * (k2 - 4.0) * r;
        let gamma = 8.0 * k2 * (-3.0 * k2 + 6.0 + s * 2.0 * r);
        let delta = 48.0 * k2 * k2 - 144.0 * k2 + 96.0 + s * 32.0 * (1.0 - k2) * r;
        (beta, gamma, delta)
    };
    let pair = move |s: f64| {
        vec![
            wave(move |x, m| {
                let (_, cn, dn) = jac(x, m);
                let (b, g, d) = coeffs(m.k2(), s);
                half_plus(x, m) * (b * dn * dn + g * cn * dn + d) / dn
            }),
            wave(move |x, m| {
                let (_, cn, dn) = jac(x, m);
                let (b, g, d) = coeffs(m.k2(), s);
                half_minus(x, m) * (b * dn * dn - g * cn * dn + d) / dn
            }),
        ]
    };
    vec![
        level(|k2| 3.25 + 1.25 * k2 - r9(k2), pair(-1.0)),
        level(|k2| 3.25 + 1.25 * k2 + r9(k2), pair(1.0)),
    ]
}

fn three_halves_three_halves() -> Vec<FixtureLevel> {
    let coeffs = |k2: f64, s: f64| {
        let r = r16(k2);
        let phi = 3.0 * k2 * k2 - 20.0 * k2 + 16.0 + s * (3.0 * k2 - 4.0) * r;
        let rho = -k2 * k2 - 12.0 * k2 + 16.0 + s * (k2 - 4.0) * r;
        let eps = 3.0 * k2 - 4.0 + s * r;
        (phi, rho, eps)
    };
    let pair = move |s: f64| {
        vec![
            wave(move |x, m| {
                let (sn, cn, dn) = jac(x, m);
                let (phi, _, eps) = coeffs(m.k2(), s);
                cn * (phi * sn * sn + 2.0 * m.k2() + eps) / dn.powf(1.5)
            }),
            wave(move |x, m| {
                let (sn, _, dn) = jac(x, m);
                let (_, rho, eps) = coeffs(m.k2(), s);
                sn * (rho * sn * sn + 3.0 * eps) / dn.powf(1.5)
            }),
        ]
    };
    vec![
        level(|k2| 5.0 + 1.25 * k2 - r16(k2), pair(1.0)),
        level(|k2| 5.0 + 1.25 * k2 + r16(k2), pair(-1.0)),
    ]
}

pub fn fixture_for(params: &LameParameters) -> Result<Fixture> {
    let levels = match (params.m().twice(), params.l().twice()) {
        (2, 0) => one_zero(),
        (2, 2) => one_one(),
        (4, 0) => two_zero(),
        (4, 2) => two_one(),
        (4, 4) => two_two(),
        (1, 0) => half_zero(),
        (1, 1) => half_half(),
        (3, 0) => three_halves_zero(),
        (3, 1) => three_halves_half(),
        (3, 2) => three_halves_one(),
        (3, 3) => three_halves_three_halves(),
        _ => {
            return Err(Error::NoFixture {
                m: params.m().to_string(),
                l: params.l().to_string(),
            })
        }
    };
    Ok(Fixture { params: *params, levels })
}
