//! Wall relations and the numerical wall criterion.
//!
//! Every wall (codimension-1 cone) of a smooth complete fan yields a unique
//! integer relation
//!
//!   u_a + u_b + sum_{i in wall} b_i u_i = 0
//!
//! where `a`, `b` are the two rays completing the wall to its adjacent
//! maximal cones. The criterion passes when, across all walls, every
//! coefficient satisfies `b_i >= -1` and at most one coefficient per wall
//! equals `-1`.

use crate::fan::ToricVariety;
use crate::lattice::{solve_rational, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;

#[derive(Debug, thiserror::Error)]
pub enum WallError {
    #[error("wall relation for wall {wall:?} is not integral")]
    NonIntegralRelation { wall: Vec<usize> },
    #[error("wall {wall:?} has degenerate adjacent cones")]
    DegenerateWall { wall: Vec<usize> },
}

/// The relation attached to one wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRelation {
    /// Sorted ray indices of the wall.
    pub wall: Vec<usize>,
    /// The two rays completing the wall to its adjacent maximal cones, each
    /// entering the relation with coefficient 1.
    pub opposite: (usize, usize),
    /// Coefficient `b_i` for each wall ray, in wall order.
    pub coefficients: Vec<i64>,
}

impl WallRelation {
    /// Verifies `u_a + u_b + sum b_i u_i = 0` exactly.
    pub fn check(&self, v: &ToricVariety) -> bool {
        let d = v.fan.dim;
        let mut acc = vec![0i64; d];
        let add = |acc: &mut Vec<i64>, ray: &[i64], k: i64| {
            for (a, r) in acc.iter_mut().zip(ray) {
                *a += k * r;
            }
        };
        add(&mut acc, &v.fan.rays[self.opposite.0], 1);
        add(&mut acc, &v.fan.rays[self.opposite.1], 1);
        for (&i, &b) in self.wall.iter().zip(&self.coefficients) {
            add(&mut acc, &v.fan.rays[i], b);
        }
        acc.iter().all(|&x| x == 0)
    }
}

/// Computes the relation for the wall at the given index in the fan's wall
/// list.
pub fn wall_relation(v: &ToricVariety, wall_index: usize) -> Result<WallRelation, WallError> {
    let wall = &v.fan.walls[wall_index];
    let (c1, c2) = wall.cones;
    let ray_a = *v.fan.max_cones[c1]
        .iter()
        .find(|r| !wall.rays.contains(r))
        .ok_or_else(|| WallError::DegenerateWall { wall: wall.rays.clone() })?;
    let ray_b = *v.fan.max_cones[c2]
        .iter()
        .find(|r| !wall.rays.contains(r))
        .ok_or_else(|| WallError::DegenerateWall { wall: wall.rays.clone() })?;

    // Express u_b in the basis (u_a, wall rays) of the first cone; smoothness
    // makes the coefficients integers, and the coefficient of u_a is -1.
    let d = v.fan.dim;
    let basis: Vec<usize> = std::iter::once(ray_a).chain(wall.rays.iter().copied()).collect();
    let cols: Vec<Vec<i64>> = (0..d)
        .map(|coord| basis.iter().map(|&r| v.fan.rays[r][coord]).collect())
        .collect();
    let a = IntMatrix::from_rows_i64(&cols);
    let rhs: Vec<BigInt> = v.fan.rays[ray_b].iter().map(|&x| BigInt::from(x)).collect();
    let sol = solve_rational(&a, &rhs)
        .ok_or_else(|| WallError::DegenerateWall { wall: wall.rays.clone() })?;
    if sol.iter().any(|x| !x.denom().is_one()) {
        return Err(WallError::NonIntegralRelation { wall: wall.rays.clone() });
    }
    let ints: Vec<i64> = sol
        .iter()
        .map(|x| i64::try_from(&x.to_integer()).expect("coefficient overflow"))
        .collect();
    if ints[0] != -1 {
        return Err(WallError::NonIntegralRelation { wall: wall.rays.clone() });
    }
    let rel = WallRelation {
        wall: wall.rays.clone(),
        opposite: (ray_a, ray_b),
        coefficients: ints[1..].iter().map(|&c| -c).collect(),
    };
    debug_assert!(rel.check(v));
    Ok(rel)
}

/// Outcome of the numerical wall criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallCriterion {
    Pass,
    /// The first offending wall in lexicographic wall order, with the reason.
    Fail { relation: WallRelation, reason: FailureReason },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// Some coefficient is at most -2; carries the wall ray and the value.
    CoefficientBelowMinusOne { ray: usize, value: i64 },
    /// Two or more coefficients equal -1; carries the wall rays involved.
    MultipleMinusOnes { rays: Vec<usize> },
}

/// Evaluates the criterion over all walls, in lexicographic wall order,
/// reporting the first failure.
pub fn bondal_criterion(v: &ToricVariety) -> Result<WallCriterion, WallError> {
    for wi in 0..v.fan.walls.len() {
        let rel = wall_relation(v, wi)?;
        if let Some(pos) = rel.coefficients.iter().position(|&b| b <= -2) {
            return Ok(WallCriterion::Fail {
                reason: FailureReason::CoefficientBelowMinusOne {
                    ray: rel.wall[pos],
                    value: rel.coefficients[pos],
                },
                relation: rel,
            });
        }
        let minus_ones: Vec<usize> = rel
            .wall
            .iter()
            .zip(&rel.coefficients)
            .filter(|&(_, &b)| b == -1)
            .map(|(&r, _)| r)
            .collect();
        if minus_ones.len() >= 2 {
            return Ok(WallCriterion::Fail {
                reason: FailureReason::MultipleMinusOnes { rays: minus_ones },
                relation: rel,
            });
        }
    }
    Ok(WallCriterion::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;

    #[test]
    fn p2_relations_pass() {
        let v = ToricVariety::from_fan(Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ))
        .unwrap();
        // Each wall is a single ray; relation u_a + u_b + b u_i = 0 with
        // b = 1 everywhere on P^2.
        for wi in 0..v.fan.walls.len() {
            let rel = wall_relation(&v, wi).unwrap();
            assert_eq!(rel.coefficients, vec![1]);
            assert!(rel.check(&v));
        }
        assert_eq!(bondal_criterion(&v).unwrap(), WallCriterion::Pass);
    }

    #[test]
    fn hirzebruch_f2_fails() {
        // F_2: rays (1,0), (0,1), (-1,2), (0,-1); the wall at ray 1 has
        // u_0 + u_2 - 2 u_1 = 0, coefficient -2.
        let v = ToricVariety::from_fan(Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 2], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        ))
        .unwrap();
        match bondal_criterion(&v).unwrap() {
            WallCriterion::Fail { relation, reason } => {
                assert_eq!(relation.wall, vec![1]);
                assert_eq!(
                    reason,
                    FailureReason::CoefficientBelowMinusOne { ray: 1, value: -2 }
                );
            }
            WallCriterion::Pass => panic!("F_2 should fail the wall criterion"),
        }
    }

    #[test]
    fn p1_x_p1_passes() {
        let v = ToricVariety::from_fan(Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        ))
        .unwrap();
        // Opposite rays sum to zero: all wall coefficients are 0.
        for wi in 0..v.fan.walls.len() {
            let rel = wall_relation(&v, wi).unwrap();
            assert_eq!(rel.coefficients, vec![0]);
        }
        assert_eq!(bondal_criterion(&v).unwrap(), WallCriterion::Pass);
    }
}
