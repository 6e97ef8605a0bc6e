use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// `a + b·i + c·j + d·k` over the rationals, `i² = j² = k² = ijk = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl Quaternion {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn scalar(a: BigRational) -> Self {
        Quaternion {
            a,
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |x: i64| BigRational::from_integer(x.into());
        Quaternion::new(r(a), r(b), r(c), r(d))
    }

    pub fn zero() -> Self {
        Self::scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    /// The basis `1, i, j, k`.
    pub fn basis() -> [Quaternion; 4] {
        [
            Quaternion::from_ints(1, 0, 0, 0),
            Quaternion::from_ints(0, 1, 0, 0),
            Quaternion::from_ints(0, 0, 1, 0),
            Quaternion::from_ints(0, 0, 0, 1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|x| x.is_zero())
    }

    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn norm(&self) -> BigRational {
        self.coords()
            .iter()
            .map(|x| *x * *x)
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }

    /// Inverse of a nonzero element, `conj / norm`.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Quaternion::new(&c.a / &n, &c.b / &n, &c.c / &n, &c.d / &n))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Quaternion::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }
}

impl<'a> Add for &'a Quaternion {
    type Output = Quaternion;

    fn add(self, o: &'a Quaternion) -> Quaternion {
        Quaternion::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl<'a> Mul for &'a Quaternion {
    type Output = Quaternion;

    fn mul(self, o: &'a Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

/// Monic polynomial over the rationals, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoly {
    #[serde(with = "rational_strings")]
    pub coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at a quaternion; coefficients are central.
    pub fn eval(&self, x: &Quaternion) -> Quaternion {
        self.coeffs.iter().rev().fold(Quaternion::zero(), |acc, c| {
            &(&acc * x) + &Quaternion::scalar(c.clone())
        })
    }
}

/// Minimal polynomial of `x` over the rational center: `X - a` for a
/// scalar, otherwise `X² - 2aX + (a² + b² + c² + d²)`.
pub fn quaternion_min_poly(x: &Quaternion) -> RationalPoly {
    let coeffs = if x.is_central() {
        vec![-&x.a, BigRational::one()]
    } else {
        vec![x.norm(), -(&x.a + &x.a), BigRational::one()]
    };
    RationalPoly { coeffs }
}

mod rational_strings {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn hamilton_relations() {
        let [one, i, j, k] = Quaternion::basis();
        let minus_one = one.scale(&int(-1));
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&k * &k, minus_one);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, k.scale(&int(-1)));
        assert_eq!(&(&i * &j) * &k, minus_one);
    }

    #[test]
    fn min_poly_examples() {
        assert_eq!(
            quaternion_min_poly(&Quaternion::from_ints(3, 0, 0, 0)).coeffs,
            vec![int(-3), int(1)]
        );
        assert_eq!(
            quaternion_min_poly(&Quaternion::from_ints(0, 1, 0, 0)).coeffs,
            vec![int(1), int(0), int(1)]
        );
        let x = Quaternion::from_ints(1, 1, 1, 1);
        let p = quaternion_min_poly(&x);
        assert_eq!(p.coeffs, vec![int(4), int(-2), int(1)]);
        // x² = 1 + 2(i + j + k) - 3 = -2 + 2i + 2j + 2k, and x² - 2x + 4 = 0
        assert_eq!(&x * &x, Quaternion::from_ints(-2, 2, 2, 2));
        assert!(p.eval(&x).is_zero());
    }

    #[test]
    fn inverses() {
        let x = Quaternion::from_ints(1, -2, 0, 3);
        assert_eq!(&x * &x.inverse().unwrap(), Quaternion::one());
        assert!(Quaternion::zero().inverse().is_none());
    }
}
