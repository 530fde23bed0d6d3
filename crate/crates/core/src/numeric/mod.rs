//! Exact arithmetic: rationals, vectors, norms, linear algebra and the simplex
//! kernel every other module builds on.

pub mod linalg;
pub mod lp;
mod vector;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use vector::QVector;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime parts). Every scalar on an exact path is one of these.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let magnitude = BigInt::from_str(&digits).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical text form: `"p/q"` or an integer string.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Nearest `f64`; for display and numeric heuristics only.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(value: f64) -> Rational {
    Rational::from_float(value).unwrap_or_else(Rational::zero)
}

/// Dyadic rational closest to `value` with denominator `2^bits` (floor).
pub fn dyadic_floor(value: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = value * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

pub fn dyadic_ceil(value: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = value * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

/// Smallest power of two `2^k >= value` for positive `value`.
pub fn next_pow2_at_least(value: &Rational) -> Rational {
    let mut p = Rational::one();
    if value <= &p {
        while &(&p / int(2)) >= value {
            p /= int(2);
        }
        return p;
    }
    while &p < value {
        p *= int(2);
    }
    p
}

/// Rational bracket `lo <= sqrt(value) <= hi` with `hi - lo <= tol`, for
/// non-negative `value`.
pub fn sqrt_bracket(value: &Rational, tol: &Rational) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = max(Rational::one(), value.clone());
    if value.is_zero() {
        return (lo.clone(), lo);
    }
    while &(&hi - &lo) > tol {
        let mid = (&lo + &hi) / int(2);
        if &(&mid * &mid) <= value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Serde adapter writing a [`Rational`] as its canonical string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(serde::de::Error::custom)
    }

    /// Rationals are accepted either as strings or as JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalText {
        Text(String),
        Int(i64),
    }

    impl RationalText {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RationalText::Text(t) => parse_rational(&t),
                RationalText::Int(i) => Ok(int(i)),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec_serde {
    use super::rational_serde::RationalText;
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let texts: Vec<String> = values.iter().map(format_rational).collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<RationalText>::deserialize(d)?;
        texts
            .into_iter()
            .map(|t| t.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for square or ragged matrices of rationals.
pub mod rational_matrix_serde {
    use super::rational_serde::RationalText;
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let texts: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<RationalText>>::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|t| t.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// The two polyhedral norms every distance in the crate is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// `max |x_i|`
    #[default]
    Sup,
    /// `sum |x_i|`
    Sum,
}

impl Norm {
    pub fn of(self, v: &QVector) -> Rational {
        match self {
            Norm::Sup => v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero),
            Norm::Sum => v.iter().map(|x| x.abs()).sum(),
        }
    }

    /// Norm of the dual space, so that `|u . x| <= dual(u) * norm(x)`.
    pub fn dual(self) -> Norm {
        match self {
            Norm::Sup => Norm::Sum,
            Norm::Sum => Norm::Sup,
        }
    }

    /// A unit vector `x` with `u . x = dual(u)`.
    pub fn norming_vector(self, u: &QVector) -> QVector {
        let n = u.dim();
        match self {
            Norm::Sup => QVector::new(
                u.iter()
                    .map(|c| if c.is_negative() { -Rational::one() } else { Rational::one() })
                    .collect(),
            ),
            Norm::Sum => {
                let mut best = 0;
                for i in 0..n {
                    if u[i].abs() > u[best].abs() {
                        best = i;
                    }
                }
                let mut x = QVector::zeros(n);
                if n > 0 {
                    x[best] = if u[best].is_negative() { -Rational::one() } else { Rational::one() };
                }
                x
            }
        }
    }

    /// Vertices of the closed unit ball.
    pub fn ball_vertices(self, dim: usize) -> Vec<QVector> {
        match self {
            Norm::Sup => (0..(1usize << dim))
                .map(|mask| {
                    QVector::new(
                        (0..dim)
                            .map(|i| if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() })
                            .collect(),
                    )
                })
                .collect(),
            Norm::Sum => (0..dim)
                .flat_map(|i| {
                    [Rational::one(), -Rational::one()]
                        .into_iter()
                        .map(move |s| QVector::unit(dim, i).scale(&s))
                })
                .collect(),
        }
    }

    /// Half-space rows `(normal, offset)` describing the closed ball of the
    /// given radius around `center`.
    pub fn ball_rows(self, center: &QVector, radius: &Rational) -> Vec<(QVector, Rational)> {
        let dim = center.dim();
        let normals: Vec<QVector> = match self {
            Norm::Sup => Norm::Sum.ball_vertices(dim),
            Norm::Sum => Norm::Sup.ball_vertices(dim),
        };
        normals
            .into_iter()
            .map(|a| {
                let offset = radius + a.dot(center);
                (a, offset)
            })
            .collect()
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Sup => write!(f, "sup"),
            Norm::Sum => write!(f, "sum"),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" | "supnorm" | "inf" => Ok(Norm::Sup),
            "sum" | "sumnorm" | "l1" => Ok(Norm::Sum),
            other => Err(Error::InvalidInput(format!("unknown norm {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("1/-3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(format_rational(&rat(10, -4)), "-5/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn dual_norms_pair_up() {
        let u = QVector::from_ints(&[3, -4, 1]);
        for norm in [Norm::Sup, Norm::Sum] {
            let x = norm.dual().norming_vector(&u);
            assert_eq!(norm.dual().of(&x), int(1));
            assert_eq!(u.dot(&x), norm.of(&u));
        }
    }

    #[test]
    fn ball_rows_describe_the_ball() {
        let c = QVector::from_ints(&[1, 2]);
        for norm in [Norm::Sup, Norm::Sum] {
            let rows = norm.ball_rows(&c, &int(2));
            for v in norm.ball_vertices(2) {
                let p = &c + &v.scale(&int(2));
                assert!(rows.iter().all(|(a, b)| &a.dot(&p) <= b));
                let outside = &c + &v.scale(&int(3));
                assert!(rows.iter().any(|(a, b)| &a.dot(&outside) > b));
            }
        }
    }

    #[test]
    fn square_root_brackets() {
        let tol = rat(1, 1 << 20);
        let (lo, hi) = sqrt_bracket(&int(2), &tol);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(&hi - &lo <= tol);
        assert_eq!(sqrt_bracket(&int(0), &tol), (int(0), int(0)));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(next_pow2_at_least(&rat(3, 1)), int(4));
        assert_eq!(next_pow2_at_least(&rat(1, 3)), rat(1, 2));
        assert_eq!(next_pow2_at_least(&int(1)), int(1));
    }
}
