//! Standard polynomials on exact rational matrices, the spanning constant, and
//! the quaternion algebra as a degree-2 division algebra.

mod matrix;
mod quaternion;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrix::{rank_of, ExactMatrix};
pub use num_rational::BigRational;
pub use quaternion::{quaternion_min_poly, Quaternion, RationalPoly};

pub const MAX_DEGREE: usize = 8;
pub const DEFAULT_SEED: u64 = 42;
/// Random entries are drawn uniformly from `-ENTRY_RANGE..=ENTRY_RANGE`.
pub const ENTRY_RANGE: i64 = 3;

/// Parity of a permutation by inversion count; `true` for odd.
fn is_odd(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// `s_C(y_1..y_C) = Σ_π sign(π) y_π(1)…y_π(C)`.
pub fn standard_polynomial(c: usize, args: &[ExactMatrix]) -> Result<ExactMatrix> {
    if c == 0 {
        return Err(Error::Parameter(
            "standard polynomial degree must be at least 1".into(),
        ));
    }
    if c > MAX_DEGREE {
        return Err(Error::Limit {
            what: "degree",
            value: c,
            cap: MAX_DEGREE,
        });
    }
    if args.len() != c {
        return Err(Error::Shape(format!(
            "s_{c} takes {c} arguments, got {}",
            args.len()
        )));
    }
    let n = args[0].dim();
    if let Some(bad) = args.iter().find(|m| m.dim() != n) {
        return Err(Error::Shape(format!("mixed dimensions {n} and {}", bad.dim())));
    }
    let mut sum = ExactMatrix::zero(n);
    for perm in (0..c).permutations(c) {
        let term = perm[1..]
            .iter()
            .fold(args[perm[0]].clone(), |acc, &i| &acc * &args[i]);
        sum = if is_odd(&perm) { &sum - &term } else { &sum + &term };
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub degree: usize,
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub all_vanished: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<ExactMatrix>>,
    /// Matrix-unit tuple on which `s_{degree-1}` is nonzero, if one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_degree_witness: Option<Vec<ExactMatrix>>,
}

impl IdentityReport {
    /// Re-evaluates any recorded tuples.
    pub fn verify(&self) -> bool {
        let nonzero = |c: usize, tuple: &[ExactMatrix]| {
            tuple.iter().all(|m| m.dim() == self.dimension)
                && standard_polynomial(c, tuple).is_ok_and(|v| !v.is_zero())
        };
        if self.all_vanished != self.counterexample.is_none() {
            return false;
        }
        if let Some(t) = &self.counterexample {
            if !nonzero(self.degree, t) {
                return false;
            }
        }
        match &self.lower_degree_witness {
            Some(t) => self.degree >= 2 && nonzero(self.degree - 1, t),
            None => true,
        }
    }
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> ExactMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| BigRational::from_integer(rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE).into()))
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("square by construction")
}

/// All `n²` matrix units of the n×n algebra, row-major.
pub fn matrix_units(n: usize) -> Vec<ExactMatrix> {
    (1..=n)
        .cartesian_product(1..=n)
        .map(|(i, j)| ExactMatrix::unit(n, i, j))
        .collect()
}

/// Checks `s_{2n} = 0` on `trials` seeded random n×n tuples and searches the
/// matrix-unit tuples for one where `s_{2n-1}` does not vanish.
pub fn amitsur_levitzski_check(n: usize, trials: usize, seed: u64) -> Result<IdentityReport> {
    if !(1..=2).contains(&n) {
        return Err(Error::Parameter(format!("dimension must be 1 or 2, got {n}")));
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let degree = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexample = None;
    for _ in 0..trials {
        let tuple: Vec<ExactMatrix> = (0..degree).map(|_| random_matrix(n, &mut rng)).collect();
        if counterexample.is_none() && !standard_polynomial(degree, &tuple)?.is_zero() {
            counterexample = Some(tuple);
        }
    }
    let units = matrix_units(n);
    let mut lower_degree_witness = None;
    for tuple in itertools::repeat_n(units.iter(), degree - 1).multi_cartesian_product() {
        let tuple: Vec<ExactMatrix> = tuple.into_iter().cloned().collect();
        if !standard_polynomial(degree - 1, &tuple)?.is_zero() {
            lower_degree_witness = Some(tuple);
            break;
        }
    }
    Ok(IdentityReport {
        degree,
        dimension: n,
        trials,
        seed,
        all_vanished: counterexample.is_none(),
        counterexample,
        lower_degree_witness,
    })
}

/// `(1 + m + … + m^N, 2·(1 + m + … + m^N))`, overflow-checked.
pub fn spanning_constant(m: u64, n: u32) -> Result<(u64, u64)> {
    if m == 0 {
        return Err(Error::Parameter("alphabet size must be at least 1".into()));
    }
    let mut bound = 0u64;
    let mut power = 1u64;
    for k in 0..=n {
        bound = bound
            .checked_add(power)
            .ok_or(Error::Overflow("spanning bound"))?;
        if k < n {
            power = power.checked_mul(m).ok_or(Error::Overflow("spanning bound"))?;
        }
    }
    let c = bound.checked_mul(2).ok_or(Error::Overflow("spanning constant"))?;
    Ok((bound, c))
}

/// Exact rank of the coordinate vectors of the given quaternions.
pub fn quaternion_rank(xs: &[Quaternion]) -> usize {
    rank_of(
        xs.iter()
            .map(|x| x.coords().into_iter().cloned().collect())
            .collect(),
    )
}

/// True when every coefficient is zero in the evaluated polynomial.
pub fn annihilates(p: &RationalPoly, x: &Quaternion) -> bool {
    p.coeffs.last().is_some_and(|c| !c.is_zero()) && p.eval(x).is_zero()
}
