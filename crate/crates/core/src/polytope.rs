//! Rational convex polytopes from half-space descriptions: parsing, exact
//! vertex enumeration, primitive inner facet normals, and reflexivity.

use crate::lattice::{solve_rational, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

pub type Rat = BigRational;

#[derive(Debug, thiserror::Error)]
pub enum PolytopeError {
    #[error("half-space row {row} has {got} columns, expected {expected}")]
    WrongColumnCount { row: usize, got: usize, expected: usize },
    #[error("half-space row {row} has a zero normal vector")]
    ZeroNormal { row: usize },
    #[error("feasible region is unbounded")]
    UnboundedRegion,
    #[error("feasible region is empty or not full-dimensional")]
    DegenerateRegion,
    #[error("origin is not an interior point")]
    OriginNotInterior,
}

/// A system of half-spaces `a_0 + a . x >= 0`, one row per inequality, in the
/// convention of the polymake FACETS section: row `(a_0, a_1, ..., a_d)`
/// encodes `a_0 + a_1 x_1 + ... + a_d x_d >= 0`.
#[derive(Debug, Clone)]
pub struct HalfSpaceRep {
    pub dim: usize,
    /// Per row: the constant term `a_0` and the normal `(a_1, ..., a_d)`.
    pub rows: Vec<(Rat, Vec<Rat>)>,
}

/// Parses rows `(a_0, a_1, ..., a_d)`. Rows whose normal is a positive
/// multiple of an earlier row's normal with an implied-or-equal constant are
/// redundant duplicates and are dropped; the number dropped is returned.
pub fn parse_hrep(rows: &[Vec<Rat>], dim: usize) -> Result<(HalfSpaceRep, usize), PolytopeError> {
    let mut out: Vec<(Rat, Vec<Rat>)> = Vec::new();
    let mut dropped = 0usize;
    for (idx, row) in rows.iter().enumerate() {
        if row.len() != dim + 1 {
            return Err(PolytopeError::WrongColumnCount {
                row: idx,
                got: row.len(),
                expected: dim + 1,
            });
        }
        let a0 = row[0].clone();
        let normal = row[1..].to_vec();
        if normal.iter().all(|x| x.is_zero()) {
            return Err(PolytopeError::ZeroNormal { row: idx });
        }
        // Drop exact duplicates of earlier rows (same inequality up to
        // positive scaling).
        let dup = out.iter().any(|(b0, bn)| same_inequality(&a0, &normal, b0, bn));
        if dup {
            dropped += 1;
        } else {
            out.push((a0, normal));
        }
    }
    Ok((HalfSpaceRep { dim, rows: out }, dropped))
}

fn same_inequality(a0: &Rat, an: &[Rat], b0: &Rat, bn: &[Rat]) -> bool {
    // Find scaling lambda > 0 with an = lambda * bn and a0 = lambda * b0.
    let Some(k) = bn.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if an[k].is_zero() {
        return false;
    }
    let lambda = &an[k] / &bn[k];
    if !lambda.is_positive() {
        return false;
    }
    an.iter().zip(bn).all(|(a, b)| *a == &lambda * b) && *a0 == &lambda * b0
}

/// Converts to the `A x <= b` convention: `a_0 + a . x >= 0` becomes
/// `(-a) . x <= a_0`.
pub fn to_leq_form(h: &HalfSpaceRep) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let a = h.rows.iter().map(|(_, n)| n.iter().map(|x| -x).collect()).collect();
    let b = h.rows.iter().map(|(a0, _)| a0.clone()).collect();
    (a, b)
}

/// A bounded full-dimensional polytope with enumerated vertices.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub hrep: HalfSpaceRep,
    /// Vertices in deterministic (lexicographic) order.
    pub vertices: Vec<Vec<Rat>>,
    /// For each facet (hrep row), the set of incident vertex indices.
    pub facet_vertices: Vec<BTreeSet<usize>>,
}

/// Enumerates the vertices of the feasible region by exact solution of all
/// `d`-subsets of facet equalities, keeping feasible intersection points.
/// Rejects unbounded or lower-dimensional regions.
pub fn enumerate_vertices(h: &HalfSpaceRep) -> Result<Polytope, PolytopeError> {
    let d = h.dim;
    let n = h.rows.len();
    let mut vertices: Vec<Vec<Rat>> = Vec::new();

    for subset in subsets(n, d) {
        let Some(pt) = intersection_point(h, &subset) else {
            continue;
        };
        if !is_feasible(h, &pt) {
            continue;
        }
        if !vertices.contains(&pt) {
            vertices.push(pt);
        }
    }
    vertices.sort();

    // Unbounded edge check: a region with a vertex is unbounded iff some
    // (d-1)-subset of facets cuts out a line whose direction satisfies all
    // inequalities asymptotically (normal . v >= 0 for every row).
    if d >= 1 {
        for subset in subsets(n, d - 1) {
            for dir in line_directions(h, &subset) {
                let ok_pos = h.rows.iter().all(|(_, nrm)| !dot(nrm, &dir).is_negative());
                let ok_neg = h.rows.iter().all(|(_, nrm)| !dot(nrm, &dir).is_positive());
                if ok_pos || ok_neg {
                    return Err(PolytopeError::UnboundedRegion);
                }
            }
        }
    }
    if vertices.is_empty() {
        return Err(PolytopeError::DegenerateRegion);
    }
    // Full-dimensionality: affine hull of the vertices must have dimension d.
    let v0 = &vertices[0];
    let diffs: Vec<Vec<BigInt>> = vertices[1..]
        .iter()
        .map(|v| clear_denominators(&v.iter().zip(v0).map(|(a, b)| a - b).collect::<Vec<_>>()))
        .collect();
    if IntMatrix::from_rows(diffs).rank() < d {
        return Err(PolytopeError::DegenerateRegion);
    }

    let facet_vertices = (0..n)
        .map(|i| {
            vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| {
                    let (a0, nrm) = &h.rows[i];
                    (a0 + dot(nrm, v)).is_zero()
                })
                .map(|(k, _)| k)
                .collect()
        })
        .collect();

    Ok(Polytope { hrep: h.clone(), vertices, facet_vertices })
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn is_feasible(h: &HalfSpaceRep, pt: &[Rat]) -> bool {
    h.rows.iter().all(|(a0, nrm)| !(a0 + dot(nrm, pt)).is_negative())
}

/// Solves the equality system of the given facet subset; `None` when the
/// system is singular or inconsistent.
fn intersection_point(h: &HalfSpaceRep, subset: &[usize]) -> Option<Vec<Rat>> {
    let mut int_rows = Vec::with_capacity(subset.len());
    let mut rhs = Vec::with_capacity(subset.len());
    for &i in subset {
        let (a0, nrm) = &h.rows[i];
        let mut all: Vec<Rat> = nrm.to_vec();
        all.push(-a0.clone());
        let cleared = clear_denominators(&all);
        rhs.push(cleared[h.dim].clone());
        int_rows.push(cleared[..h.dim].to_vec());
    }
    let a = IntMatrix::from_rows(int_rows);
    if a.rank() < h.dim {
        return None;
    }
    solve_rational(&a, &rhs)
}

/// Directions of the line cut out by a rank-(d-1) subset of facet equalities.
fn line_directions(h: &HalfSpaceRep, subset: &[usize]) -> Vec<Vec<Rat>> {
    let d = h.dim;
    let rows: Vec<Vec<BigInt>> = subset
        .iter()
        .map(|&i| clear_denominators(&h.rows[i].1))
        .collect();
    let a = if rows.is_empty() {
        IntMatrix::zero(0, d)
    } else {
        IntMatrix::from_rows(rows)
    };
    if !subset.is_empty() && a.rank() < d - 1 {
        return Vec::new();
    }
    // Kernel of the normal matrix (right kernel = left kernel of transpose).
    let k = crate::lattice::integer_kernel(&a.transpose());
    (0..k.nrows())
        .map(|i| k.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive_vector(v: &[Rat]) -> Vec<BigInt> {
    let ints = clear_denominators(v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Primitive integer inner normals of the facets, in hrep row order.
pub fn primitive_inner_normals(h: &HalfSpaceRep) -> Result<Vec<Vec<BigInt>>, PolytopeError> {
    h.rows
        .iter()
        .enumerate()
        .map(|(idx, (_, nrm))| {
            if nrm.iter().all(|x| x.is_zero()) {
                Err(PolytopeError::ZeroNormal { row: idx })
            } else {
                Ok(primitive_vector(nrm))
            }
        })
        .collect()
}

/// A polytope with the origin interior is reflexive when every facet
/// inequality, scaled so that its normal is primitive integral, has constant
/// term exactly 1.
pub fn is_reflexive(p: &Polytope) -> Result<bool, PolytopeError> {
    for (a0, nrm) in &p.hrep.rows {
        if !(a0 + dot(nrm, &vec![Rat::zero(); p.hrep.dim])).is_positive() {
            return Err(PolytopeError::OriginNotInterior);
        }
    }
    for (a0, nrm) in &p.hrep.rows {
        let prim = primitive_vector(nrm);
        // Scaling factor lambda with nrm = lambda * prim.
        let k = prim.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let lambda = &nrm[k] / BigRational::from_integer(prim[k].clone());
        if a0 / &lambda != Rat::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        for i in start..=n.saturating_sub(needed) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}
