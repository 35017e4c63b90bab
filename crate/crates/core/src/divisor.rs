//! Divisor classes on a smooth complete toric variety: the degree matrix
//! presenting the class group, lifts of classes to torus divisors, and the
//! canonical class.

use crate::fan::{Fan, ToricVariety};
use crate::lattice::{integer_kernel, smith_normal_form, solve_rational, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;

/// An element of the class group `Pic(X) ~ Z^(n-d)`, in the coordinates fixed
/// by the degree matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<i64>);

/// A torus-invariant divisor `sum a_rho D_rho`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TDivisor(pub Vec<i64>);

/// Computes a degree matrix for the fan: a Hermite-normalized basis of the
/// left kernel of the ray matrix, so that `D * R = 0` with `R` the `n x d`
/// matrix of ray rows.
pub fn compute_degree_matrix(fan: &Fan) -> IntMatrix {
    integer_kernel(&fan.ray_matrix())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeMatrixCheck {
    Valid,
    Inconsistent(String),
}

/// Validates a candidate degree matrix against the fan: correct shape, rows
/// annihilate the rays, full rank `n - d`, and all Smith invariant factors 1
/// (so the rows are a basis of the full relation lattice, not a finite-index
/// sublattice).
pub fn validate_degree_matrix(v: &ToricVariety, d: &IntMatrix) -> DegreeMatrixCheck {
    validate_degree_matrix_for_fan(&v.fan, d)
}

pub fn validate_degree_matrix_for_fan(fan: &Fan, d: &IntMatrix) -> DegreeMatrixCheck {
    let n = fan.rays.len();
    let rank = n - fan.dim;
    if d.nrows() != rank || d.ncols() != n {
        return DegreeMatrixCheck::Inconsistent(format!(
            "shape {}x{}, expected {}x{}",
            d.nrows(),
            d.ncols(),
            rank,
            n
        ));
    }
    let prod = d.mul(&fan.ray_matrix());
    if !prod.is_zero() {
        return DegreeMatrixCheck::Inconsistent("rows do not annihilate the rays".into());
    }
    if d.rank() != rank {
        return DegreeMatrixCheck::Inconsistent("rows are linearly dependent".into());
    }
    let factors = smith_normal_form(d).invariant_factors();
    if factors.iter().any(|f| !f.is_one()) {
        return DegreeMatrixCheck::Inconsistent(format!(
            "row lattice is not saturated (invariant factors {:?})",
            factors.iter().map(|f| f.to_string()).collect::<Vec<_>>()
        ));
    }
    DegreeMatrixCheck::Valid
}

impl ToricVariety {
    /// Class of a torus divisor: `degree_matrix * coefficients`.
    pub fn class_of(&self, t: &TDivisor) -> DivisorClass {
        let coeffs: Vec<BigInt> = t.0.iter().map(|&x| BigInt::from(x)).collect();
        let cls = self.degree_matrix.mul_vec(&coeffs);
        DivisorClass(cls.iter().map(|x| i64::try_from(x).expect("class overflow")).collect())
    }

    /// Deterministic lift of a class to a torus divisor via the stored right
    /// inverse of the degree matrix.
    pub fn lift_class(&self, c: &DivisorClass) -> TDivisor {
        let vec: Vec<BigInt> = c.0.iter().map(|&x| BigInt::from(x)).collect();
        let lift = self.lift_matrix.mul_vec(&vec);
        TDivisor(lift.iter().map(|x| i64::try_from(x).expect("lift overflow")).collect())
    }

    /// The canonical class `K_X = -sum_rho [D_rho]`.
    pub fn canonical_class(&self) -> DivisorClass {
        let n = self.n_rays();
        let ones = TDivisor(vec![1; n]);
        let DivisorClass(c) = self.class_of(&ones);
        DivisorClass(c.into_iter().map(|x| -x).collect())
    }

    /// Whether two torus divisors are linearly equivalent: their difference
    /// must be an integer combination of the ray-relation rows, i.e. of the
    /// form `(m . u_rho)_rho` for some lattice point `m`.
    pub fn linearly_equivalent(&self, a: &TDivisor, b: &TDivisor) -> bool {
        let diff: Vec<BigInt> = a.0.iter().zip(&b.0).map(|(x, y)| BigInt::from(x - y)).collect();
        // diff = R * m for integral m, with R the n x d ray matrix.
        match solve_rational(&self.fan.ray_matrix(), &diff) {
            Some(m) => m.iter().all(|x| x.denom().is_one()),
            None => false,
        }
    }
}
