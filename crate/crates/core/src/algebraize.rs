//! Matching the algebraic potential to the associated Lamé potential
//!
//! ```text
//! V(x) = m(m+1) k² sn²x + l(l+1) k² cn²x / dn²x
//! ```
//!
//! With `B₄ = (1+ξ²)(1+k′²ξ²)` and `ξ = sn/cn` the algebraic potential takes
//! the form `P sn² + Q sn cn + R sn cn/dn² + S cn²/dn²`. Requiring
//! `P = k²m(m+1)`, `Q = R = 0`, `S = k²l(l+1)` leaves four families of
//! linear coefficients:
//!
//! | family | n         | C₊ = C₋        | C₀             |
//! |--------|-----------|----------------|----------------|
//! | A      | m + l     | 0              | k²(l − m)      |
//! | B      | m − l − 1 | 0              | −k²(l + m + 1) |
//! | C      | m − 1/2   | i k′(2l + 1)   | −k²(m + 1/2)   |
//! | D      | m − 1/2   | −i k′(2l + 1)  | −k²(m + 1/2)   |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};
use crate::sl2core::{HamiltonianCoefficients, QuadraticCoefficients};

/// An exact multiple of one half, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        Self(twice)
    }

    pub const fn integer(value: i64) -> Self {
        Self(2 * value)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        match *r.denom() {
            1 => Ok(Self(2 * r.numer())),
            2 => Ok(Self(*r.numer())),
            _ => Err(Error::InvalidParameters(format!(
                "{r} is not an integer or half-integer"
            ))),
        }
    }

    /// Integer value of `self`, if it is a non-negative integer.
    pub fn as_count(self) -> Option<usize> {
        (self.is_integer() && self.0 >= 0).then_some((self.0 / 2) as usize)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `"2"`, `"3/2"`, `"-1"`, `"6/4"`; decimal notation is rejected so that
/// admissibility never depends on a float comparison.
impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = Ratio::<i64>::from_str(s.trim()).map_err(|_| {
            Error::InvalidParameters(format!(
                "cannot parse {s:?} as an exact rational (use forms like \"2\" or \"3/2\")"
            ))
        })?;
        Self::from_ratio(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LameCase {
    /// m, l non-negative integers.
    Integer,
    /// m half an odd integer, l a half-integer.
    HalfOdd,
}

/// Exact `(m, l)` of the associated Lamé potential, restricted to the
/// admissible grid `0 ≤ l ≤ m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LameParameters {
    m: HalfInteger,
    l: HalfInteger,
}

impl LameParameters {
    pub fn new(m: HalfInteger, l: HalfInteger) -> Result<Self> {
        if m.twice() < 0 {
            return Err(Error::InvalidParameters(format!("m = {m} must be non-negative")));
        }
        if l.twice() < 0 {
            return Err(Error::InvalidParameters(format!(
                "l = {l} must be non-negative (l = -1 duplicates l = 0)"
            )));
        }
        if l > m {
            return Err(Error::InvalidParameters(format!(
                "l = {l} exceeds m = {m}; the convention is m >= l (swap them)"
            )));
        }
        if m.is_integer() && !l.is_integer() {
            return Err(Error::InvalidParameters(format!(
                "integer m = {m} requires an integer l, got {l}"
            )));
        }
        Ok(Self { m, l })
    }

    /// Convenience constructor from doubled values, e.g. `(3, 1)` is `(3/2, 1/2)`.
    pub fn from_twice(m2: i64, l2: i64) -> Result<Self> {
        Self::new(HalfInteger::from_twice(m2), HalfInteger::from_twice(l2))
    }

    pub fn parse(m: &str, l: &str) -> Result<Self> {
        Self::new(m.parse()?, l.parse()?)
    }

    pub fn m(&self) -> HalfInteger {
        self.m
    }

    pub fn l(&self) -> HalfInteger {
        self.l
    }

    pub fn case(&self) -> LameCase {
        if self.m.is_integer() {
            LameCase::Integer
        } else {
            LameCase::HalfOdd
        }
    }

    /// Number of band-edge functions, `2m + 1`.
    pub fn function_count(&self) -> usize {
        (self.m.twice() + 1) as usize
    }
}

impl fmt::Display for LameParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m, l) = ({}, {})", self.m, self.l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    /// Representation label as a half-integer; admissible only when it is a
    /// non-negative integer.
    pub fn raw_label(self, p: &LameParameters) -> HalfInteger {
        let (m2, l2) = (p.m.twice(), p.l.twice());
        HalfInteger::from_twice(match self {
            Family::A => m2 + l2,
            Family::B => m2 - l2 - 2,
            Family::C | Family::D => m2 - 1,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Families that algebraize `(m, l)`: A and B in the integer case (B drops
/// out at `l = m`), C and D in the half-odd case.
pub fn admissible_families(params: &LameParameters) -> Vec<Family> {
    let candidates: &[Family] = match params.case() {
        LameCase::Integer => &[Family::A, Family::B],
        LameCase::HalfOdd => &[Family::C, Family::D],
    };
    candidates
        .iter()
        .copied()
        .filter(|f| f.raw_label(params).as_count().is_some())
        .collect()
}

/// All coefficients of one algebraization.
#[derive(Clone, Debug)]
pub struct AlgebraizationParams {
    pub lame: LameParameters,
    pub family: Family,
    pub n: usize,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub c_zero: Complex64,
    pub quad: QuadraticCoefficients<Complex64>,
    pub d: Complex64,
    pub modulus: EllipticModulus<f64>,
}

impl AlgebraizationParams {
    pub fn coefficients(&self) -> HamiltonianCoefficients<Complex64> {
        HamiltonianCoefficients {
            quad: self.quad.clone(),
            c_plus: self.c_plus,
            c_zero: self.c_zero,
            c_minus: self.c_minus,
            d: self.d,
        }
    }

    /// True when every coefficient is real (families A and B).
    pub fn is_real(&self) -> bool {
        [self.c_plus, self.c_minus, self.c_zero, self.d]
            .iter()
            .all(|z| z.im == 0.0)
    }
}

/// The additive constant that removes the residual constant from the potential.
pub fn constant_d(
    n: usize,
    c_plus: Complex64,
    c_minus: Complex64,
    c_zero: Complex64,
    modulus: &EllipticModulus<f64>,
) -> Complex64 {
    let k2 = modulus.k2();
    let kp = modulus.kprime();
    let n = n as f64;
    (c_minus * c_minus - (c_zero * c_zero + 2.0 * c_plus * c_minus) + (c_plus / kp).powi(2))
        / (4.0 * k2)
        - n * (n + 2.0) / 2.0
}

pub fn solve_family(
    params: &LameParameters,
    family: Family,
    modulus: &EllipticModulus<f64>,
) -> Result<AlgebraizationParams> {
    let label = family.raw_label(params);
    let inadmissible = |reason: String| Error::Inadmissible {
        family,
        m: params.m.to_string(),
        l: params.l.to_string(),
        reason,
    };
    let case_ok = matches!(
        (params.case(), family),
        (LameCase::Integer, Family::A | Family::B) | (LameCase::HalfOdd, Family::C | Family::D)
    );
    if !case_ok {
        return Err(inadmissible(format!("family {family} does not apply to {:?} case", params.case())));
    }
    let n = label
        .as_count()
        .ok_or_else(|| inadmissible(format!("representation label n = {label} is not a non-negative integer")))?;

    let k2 = modulus.k2();
    let kp = modulus.kprime();
    let (m, l) = (params.m.to_f64(), params.l.to_f64());
    let zero = Complex64::new(0.0, 0.0);
    let (c_pm, c_zero) = match family {
        Family::A => (zero, k2 * (l - m)),
        Family::B => (zero, -k2 * (l + m + 1.0)),
        Family::C => (Complex64::new(0.0, kp * (2.0 * l + 1.0)), -k2 * (m + 0.5)),
        Family::D => (Complex64::new(0.0, -kp * (2.0 * l + 1.0)), -k2 * (m + 0.5)),
    };
    let c_zero = Complex64::new(c_zero, 0.0);
    let d = constant_d(n, c_pm, c_pm, c_zero, modulus);
    Ok(AlgebraizationParams {
        lame: *params,
        family,
        n,
        c_plus: c_pm,
        c_minus: c_pm,
        c_zero,
        quad: QuadraticCoefficients::lame(Complex64::new(k2, 0.0)),
        d,
        modulus: *modulus,
    })
}

/// Coefficients of `P sn² + Q sn cn + R sn cn/dn² + S cn²/dn²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialCoefficients {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

pub fn potential_coefficients(ap: &AlgebraizationParams) -> PotentialCoefficients {
    let k2 = ap.modulus.k2();
    let kp2 = ap.modulus.kprime2();
    let n = ap.n as f64;
    let (cp, cm, c0) = (ap.c_plus, ap.c_minus, ap.c_zero);
    let diff = cp - cm;
    let skew = cp - kp2 * cm;
    PotentialCoefficients {
        p: k2 / 4.0 * n * (n + 2.0) - c0 / 2.0 * (n + 1.0) + (c0 * c0 - diff * diff) / (4.0 * k2),
        q: diff * (k2 * (n + 1.0) - c0) / (2.0 * k2),
        r: skew * (k2 * (n + 1.0) + c0) / (2.0 * k2),
        s: k2 / 4.0 * n * (n + 2.0)
            + c0 / 2.0 * (n + 1.0)
            + (c0 * c0 - skew * skew / kp2) / (4.0 * k2),
    }
}

/// `m(m+1)k² sn²x + l(l+1)k² cn²x/dn²x`.
pub fn lame_potential(x: f64, params: &LameParameters, modulus: &EllipticModulus<f64>) -> f64 {
    let (sn, cn, dn) = modulus.sn_cn_dn(x);
    let (m, l) = (params.m.to_f64(), params.l.to_f64());
    let k2 = modulus.k2();
    m * (m + 1.0) * k2 * sn * sn + l * (l + 1.0) * k2 * (cn * cn) / (dn * dn)
}

/// The potential produced by an algebraization, before any matching is assumed.
pub fn algebraic_potential(x: f64, ap: &AlgebraizationParams) -> Complex64 {
    let c = potential_coefficients(ap);
    let (sn, cn, dn) = ap.modulus.sn_cn_dn(x);
    let dn2 = dn * dn;
    c.p * (sn * sn) + c.q * (sn * cn) + c.r * (sn * cn / dn2) + c.s * (cn * cn / dn2)
}
