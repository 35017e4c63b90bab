//! Complete simplicial fans: construction as normal fans of simple lattice
//! polytopes, wall structure, and certification of smoothness and
//! completeness.

use crate::lattice::{solve_rational, IntMatrix};
use crate::polytope::{primitive_inner_normals, Polytope};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum FanError {
    #[error("vertex {vertex} lies on {count} facets; the normal fan is not simplicial there")]
    NonSimplicialVertex { vertex: usize, count: usize },
    #[error("fan rays do not match the requested ray order")]
    RayOrderMismatch,
    #[error("fan is not smooth: cone {cone} has index {index}")]
    NotSmooth { cone: usize, index: String },
    #[error("fan is not complete")]
    NotComplete,
    #[error("degree matrix is inconsistent with the fan: {0}")]
    DegreeMatrixInconsistent(String),
}

/// A codimension-1 intersection of two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// Sorted ray indices spanning the wall (d-1 of them).
    pub rays: Vec<usize>,
    /// The two maximal cones containing the wall.
    pub cones: (usize, usize),
}

/// A simplicial fan in `Z^d` given by its rays and maximal cones.
#[derive(Debug, Clone)]
pub struct Fan {
    pub dim: usize,
    /// Primitive ray generators.
    pub rays: Vec<Vec<i64>>,
    /// Each maximal cone as a sorted list of `dim` ray indices; the list of
    /// cones is sorted lexicographically.
    pub max_cones: Vec<Vec<usize>>,
    /// Walls, sorted lexicographically by ray indices. Only populated for
    /// wall-pure fans (every codimension-1 face in exactly two maximal cones).
    pub walls: Vec<Wall>,
    /// Whether every codimension-1 face of a maximal cone lies in exactly two
    /// maximal cones.
    pub wall_pure: bool,
}

impl Fan {
    /// Builds a fan from rays and maximal cones, deriving the wall structure.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, mut max_cones: Vec<Vec<usize>>) -> Fan {
        for cone in &mut max_cones {
            cone.sort_unstable();
        }
        max_cones.sort();
        let (walls, wall_pure) = derive_walls(dim, &max_cones);
        Fan { dim, rays, max_cones, walls, wall_pure }
    }

    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_i64(&self.rays)
    }

    /// The `d x d` matrix whose columns are the rays of the given cone.
    fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.dim)
            .map(|coord| cone.iter().map(|&r| self.rays[r][coord]).collect())
            .collect();
        IntMatrix::from_rows_i64(&rows)
    }
}

fn derive_walls(dim: usize, max_cones: &[Vec<usize>]) -> (Vec<Wall>, bool) {
    let mut face_cones: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in max_cones.iter().enumerate() {
        for omit in 0..dim {
            let mut face = cone.clone();
            face.remove(omit);
            face_cones.entry(face).or_default().push(ci);
        }
    }
    let mut pure = true;
    let mut walls = Vec::new();
    for (face, cones) in face_cones {
        match cones.as_slice() {
            [a, b] => walls.push(Wall { rays: face, cones: (*a, *b) }),
            _ => pure = false,
        }
    }
    (walls, pure)
}

/// Constructs the normal fan of a simple polytope. Rays appear in the order of
/// the polytope's facets; maximal cones correspond to vertices.
pub fn normal_fan(p: &Polytope) -> Result<Fan, FanError> {
    let d = p.hrep.dim;
    let normals = primitive_inner_normals(&p.hrep).expect("validated at parse time");
    let rays: Vec<Vec<i64>> = normals
        .iter()
        .map(|n| n.iter().map(|x| i64::try_from(x).expect("ray coordinate overflow")).collect())
        .collect();

    let mut max_cones = Vec::new();
    for (vi, _) in p.vertices.iter().enumerate() {
        let incident: Vec<usize> = p
            .facet_vertices
            .iter()
            .enumerate()
            .filter(|(_, fv)| fv.contains(&vi))
            .map(|(f, _)| f)
            .collect();
        if incident.len() != d {
            return Err(FanError::NonSimplicialVertex { vertex: vi, count: incident.len() });
        }
        max_cones.push(incident);
    }
    let fan = Fan::new(d, rays, max_cones);
    // The cone rays at each vertex must be linearly independent.
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        if fan.cone_matrix(cone).determinant().is_zero() {
            return Err(FanError::NonSimplicialVertex { vertex: ci, count: d });
        }
    }
    Ok(fan)
}

/// Reorders the rays of a fan to match `target` exactly (used to align with an
/// externally given ray numbering). Fails when the ray sets differ.
pub fn reorder_rays(fan: &Fan, target: &[Vec<i64>]) -> Result<Fan, FanError> {
    if fan.rays.len() != target.len() {
        return Err(FanError::RayOrderMismatch);
    }
    let perm: Option<Vec<usize>> = fan
        .rays
        .iter()
        .map(|r| target.iter().position(|t| t == r))
        .collect();
    let Some(perm) = perm else {
        return Err(FanError::RayOrderMismatch);
    };
    let mut seen = vec![false; target.len()];
    for &p in &perm {
        if seen[p] {
            return Err(FanError::RayOrderMismatch);
        }
        seen[p] = true;
    }
    let max_cones = fan
        .max_cones
        .iter()
        .map(|cone| cone.iter().map(|&r| perm[r]).collect())
        .collect();
    Ok(Fan::new(fan.dim, target.to_vec(), max_cones))
}

/// A fan is smooth when each maximal cone's rays form a basis of the lattice.
pub fn certify_smooth(fan: &Fan) -> bool {
    fan.max_cones
        .iter()
        .all(|cone| cone.len() == fan.dim && fan.cone_matrix(cone).determinant().abs() == BigInt::from(1))
}

/// Certifies completeness of a simplicial fan: every codimension-1 face must
/// lie in exactly two maximal cones (wall purity), and a deterministic sweep
/// of probe directions must find every probe inside some maximal cone.
///
/// Probes cover all sign patterns `{-1, 1}^d` plus off-axis combinations
/// `2 e_i + e_j` and their negatives, chosen to avoid lying on cone
/// boundaries for the unimodular fans in scope; a probe that does land on a
/// boundary still lies in a closed maximal cone and certifies nothing false.
pub fn certify_complete(fan: &Fan) -> bool {
    if !fan.wall_pure {
        return false;
    }
    let d = fan.dim;
    let mut probes: Vec<Vec<i64>> = Vec::new();
    for bits in 0..(1u32 << d) {
        probes.push((0..d).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect());
    }
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let mut p = vec![0i64; d];
            p[i] = 2;
            p[j] = 1;
            probes.push(p.clone());
            probes.push(p.iter().map(|x| -x).collect());
        }
    }
    probes.iter().all(|p| point_in_some_cone(fan, p))
}

/// Whether the point lies in some (closed) maximal cone: the solution of
/// `cone_matrix * c = p` must be componentwise nonnegative.
fn point_in_some_cone(fan: &Fan, p: &[i64]) -> bool {
    let rhs: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
    fan.max_cones.iter().any(|cone| {
        let m = fan.cone_matrix(cone);
        match solve_rational(&m, &rhs) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    })
}

/// A smooth complete toric variety: a certified fan together with a degree
/// matrix presenting the class group (free of rank `n - d`).
#[derive(Debug, Clone)]
pub struct ToricVariety {
    pub fan: Fan,
    /// `(n - d) x n` matrix whose columns are the classes of the torus
    /// divisors `D_rho`.
    pub degree_matrix: IntMatrix,
    /// A right inverse of the degree matrix, used for deterministic lifts of
    /// classes to torus divisors.
    pub lift_matrix: IntMatrix,
}

impl ToricVariety {
    /// Certifies the fan and adopts the given degree matrix after validation.
    pub fn with_degree_matrix(fan: Fan, degree_matrix: IntMatrix) -> Result<ToricVariety, FanError> {
        let v = Self::certify(fan)?;
        match crate::divisor::validate_degree_matrix(&v, &degree_matrix) {
            crate::divisor::DegreeMatrixCheck::Valid => {}
            crate::divisor::DegreeMatrixCheck::Inconsistent(reason) => {
                return Err(FanError::DegreeMatrixInconsistent(reason));
            }
        }
        let lift_matrix = crate::lattice::right_inverse(&degree_matrix)
            .expect("validated degree matrix is surjective");
        Ok(ToricVariety { degree_matrix, lift_matrix, ..v })
    }

    /// Certifies the fan and derives a degree matrix from the ray kernel.
    pub fn from_fan(fan: Fan) -> Result<ToricVariety, FanError> {
        let v = Self::certify(fan)?;
        Ok(v)
    }

    fn certify(fan: Fan) -> Result<ToricVariety, FanError> {
        for (ci, cone) in fan.max_cones.iter().enumerate() {
            if cone.len() != fan.dim {
                return Err(FanError::NotSmooth { cone: ci, index: "non-simplicial".into() });
            }
            let det = fan.cone_matrix(cone).determinant().abs();
            if det != BigInt::from(1) {
                return Err(FanError::NotSmooth { cone: ci, index: det.to_string() });
            }
        }
        if !certify_complete(&fan) {
            return Err(FanError::NotComplete);
        }
        let degree_matrix = crate::divisor::compute_degree_matrix(&fan);
        let lift_matrix = crate::lattice::right_inverse(&degree_matrix)
            .expect("kernel of smooth complete fan rays is surjective");
        Ok(ToricVariety { fan, degree_matrix, lift_matrix })
    }

    /// Number of rays.
    pub fn n_rays(&self) -> usize {
        self.fan.rays.len()
    }

    /// Picard rank `n - d`.
    pub fn picard_rank(&self) -> usize {
        self.fan.rays.len() - self.fan.dim
    }
}
