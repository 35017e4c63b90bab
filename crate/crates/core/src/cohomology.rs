//! Line-bundle cohomology on smooth complete toric varieties.
//!
//! For a torus divisor `D = sum a_rho D_rho`, each lattice point `m`
//! contributes the reduced cohomology of the simplicial complex induced on
//! the "negative" ray set `I(m) = { rho : <m, u_rho> < -a_rho }` inside the
//! face complex of the fan:
//!
//!   h^l(X, O(D)) = sum_m  htilde^{l-1}( K[I(m)] ).
//!
//! Lattice points are enumerated over the integer bounding box of the
//! hyperplane arrangement `<m, u_rho> = -a_rho`; outside that box the
//! negative set is constant along rays of the arrangement and contributes
//! nothing. A paranoid mode re-runs with a wider box and reports any
//! discrepancy instead of silently trusting the bound.

use crate::divisor::{DivisorClass, TDivisor};
use crate::fan::ToricVariety;
use crate::lattice::{solve_rational, IntMatrix};
use crate::polytope::subsets;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

#[derive(Debug, thiserror::Error)]
pub enum CohomologyError {
    #[error("enumeration box unstable for divisor {divisor:?}: margin 1 gave {narrow}, margin 2 gave {wide}")]
    BoxUnstable { divisor: Vec<i64>, narrow: String, wide: String },
    #[error("variety has {got} rays; at most {max} supported")]
    TooManyRays { got: usize, max: usize },
}

/// An abstract simplicial complex on labelled vertices.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    pub vertices: Vec<usize>,
    pub maximal_faces: Vec<BTreeSet<usize>>,
}

/// Reduced rational Betti numbers of the complex, indexed so that entry `i`
/// is `htilde^{i-1}`; entry 0 is the reduced (-1)-st cohomology, which is 1
/// exactly for the empty complex.
pub fn reduced_cohomology(k: &SimplicialComplex) -> Vec<u64> {
    // Relabel vertices into 0..v and convert faces to bitmasks.
    let labels: Vec<usize> = k.vertices.clone();
    assert!(labels.len() <= 32, "complex too large");
    let masks: Vec<u32> = k
        .maximal_faces
        .iter()
        .map(|f| {
            f.iter()
                .map(|v| {
                    let i = labels.iter().position(|l| l == v).expect("face vertex not listed");
                    1u32 << i
                })
                .fold(0, |a, b| a | b)
        })
        .collect();
    reduced_cohomology_masks(&masks)
}

/// Mask-based reduced cohomology used by the enumeration hot path.
fn reduced_cohomology_masks(maximal_faces: &[u32]) -> Vec<u64> {
    // Enumerate every face (all submasks of maximal faces, including the
    // empty face).
    let mut faces: HashSet<u32> = HashSet::new();
    faces.insert(0);
    for &mf in maximal_faces {
        let mut sub = mf;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mf;
        }
    }
    let max_size = faces.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); max_size + 1];
    for f in faces {
        by_size[f.count_ones() as usize].push(f);
    }
    for level in &mut by_size {
        level.sort_unstable();
    }

    // Coboundary ranks: delta_k maps cochains on k-sets to cochains on
    // (k+1)-sets.
    let mut ranks = vec![0usize; max_size + 1];
    for k in 0..max_size {
        let rows = &by_size[k + 1];
        let cols = &by_size[k];
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let col_index: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut m = IntMatrix::zero(rows.len(), cols.len());
        for (ri, &g) in rows.iter().enumerate() {
            let mut sign = 1i64;
            let mut bits = g;
            while bits != 0 {
                let v = bits & bits.wrapping_neg();
                let face = g & !v;
                let ci = col_index[&face];
                m.set(ri, ci, sign.into());
                sign = -sign;
                bits &= bits - 1;
            }
        }
        ranks[k] = m.rank();
    }

    // htilde^{p} with p = k - 1 for k-sets: dim C^p - rank delta^p - rank
    // delta^{p-1}.
    let mut out = vec![0u64; max_size + 1];
    for k in 0..=max_size {
        let dim = by_size[k].len();
        let below = if k == 0 { 0 } else { ranks[k - 1] };
        out[k] = (dim - ranks[k] - below) as u64;
    }
    out
}

/// Ranks of the cohomology groups of a line bundle, as a sparse map from
/// degree to rank.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CohomologyTable {
    dims: BTreeMap<usize, u64>,
}

impl CohomologyTable {
    pub fn from_map(dims: BTreeMap<usize, u64>) -> Self {
        let dims = dims.into_iter().filter(|&(_, v)| v != 0).collect();
        CohomologyTable { dims }
    }

    pub fn rank(&self, degree: usize) -> u64 {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Nonzero only in degree 0.
    pub fn concentrated_in_degree_zero(&self) -> bool {
        self.dims.keys().all(|&d| d == 0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.dims.iter().map(|(&d, &r)| (d, r))
    }

    pub fn total_rank(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.dims.iter().map(|(d, r)| format!("{}: {}", d, r)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Cohomology computations on a fixed variety, with memoization of both the
/// negative-set complexes and complete tables per divisor class.
pub struct CohomologyEngine<'a> {
    pub variety: &'a ToricVariety,
    /// Maximal cones as bitmasks over the rays.
    cone_masks: Vec<u32>,
    mask_cache: Mutex<HashMap<u32, Vec<u64>>>,
    table_cache: Mutex<HashMap<Vec<i64>, CohomologyTable>>,
    pub paranoid: bool,
}

impl<'a> CohomologyEngine<'a> {
    pub fn new(variety: &'a ToricVariety) -> Result<Self, CohomologyError> {
        let n = variety.n_rays();
        if n > 32 {
            return Err(CohomologyError::TooManyRays { got: n, max: 32 });
        }
        let cone_masks = variety
            .fan
            .max_cones
            .iter()
            .map(|cone| cone.iter().fold(0u32, |m, &r| m | 1 << r))
            .collect();
        Ok(CohomologyEngine {
            variety,
            cone_masks,
            mask_cache: Mutex::new(HashMap::new()),
            table_cache: Mutex::new(HashMap::new()),
            paranoid: false,
        })
    }

    pub fn with_paranoid(variety: &'a ToricVariety, paranoid: bool) -> Result<Self, CohomologyError> {
        let mut e = Self::new(variety)?;
        e.paranoid = paranoid;
        Ok(e)
    }

    /// Reduced cohomology of the subcomplex induced on the vertex set `s`
    /// inside the fan's face complex.
    fn negative_set_cohomology(&self, s: u32) -> Vec<u64> {
        if let Some(hit) = self.mask_cache.lock().unwrap().get(&s) {
            return hit.clone();
        }
        // Maximal faces of the induced complex: maximal elements among the
        // intersections of maximal cones with s.
        let mut inter: Vec<u32> = self.cone_masks.iter().map(|&c| c & s).collect();
        inter.sort_unstable();
        inter.dedup();
        let maximal: Vec<u32> = inter
            .iter()
            .copied()
            .filter(|&f| !inter.iter().any(|&g| g != f && g & f == f))
            .collect();
        let h = reduced_cohomology_masks(&maximal);
        self.mask_cache.lock().unwrap().insert(s, h.clone());
        h
    }

    /// Cohomology of `O(D)` for a torus divisor, computed directly from its
    /// coefficients (no re-lifting). Enumerates the bounding box of the
    /// hyperplane arrangement with the given margin.
    pub fn table_of_divisor(&self, t: &TDivisor, margin: i64) -> CohomologyTable {
        let d = self.variety.fan.dim;
        let rays = &self.variety.fan.rays;
        let (lo, hi) = self.enumeration_box(t, margin);

        let mut dims: BTreeMap<usize, u64> = BTreeMap::new();
        let mut m = lo.clone();
        loop {
            let mut mask = 0u32;
            for (rho, u) in rays.iter().enumerate() {
                let dot: i64 = u.iter().zip(&m).map(|(a, b)| a * b).sum();
                if dot + t.0[rho] < 0 {
                    mask |= 1 << rho;
                }
            }
            let h = self.negative_set_cohomology(mask);
            for (k, &v) in h.iter().enumerate() {
                if v != 0 {
                    *dims.entry(k).or_insert(0) += v;
                }
            }
            // Odometer increment over the box.
            let mut carry = true;
            for i in 0..d {
                if m[i] < hi[i] {
                    m[i] += 1;
                    carry = false;
                    break;
                }
                m[i] = lo[i];
            }
            if carry {
                break;
            }
        }
        CohomologyTable::from_map(dims)
    }

    /// Integer bounding box (with margin) of all points where `d` of the
    /// hyperplanes `<m, u_rho> = -a_rho` meet.
    fn enumeration_box(&self, t: &TDivisor, margin: i64) -> (Vec<i64>, Vec<i64>) {
        let d = self.variety.fan.dim;
        let n = self.variety.n_rays();
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        let mut any = false;
        for subset in subsets(n, d) {
            let rows: Vec<Vec<i64>> =
                subset.iter().map(|&r| self.variety.fan.rays[r].clone()).collect();
            let a = IntMatrix::from_rows_i64(&rows);
            let rhs: Vec<num_bigint::BigInt> =
                subset.iter().map(|&r| num_bigint::BigInt::from(-t.0[r])).collect();
            if a.rank() < d {
                continue;
            }
            let Some(pt) = solve_rational(&a, &rhs) else {
                continue;
            };
            any = true;
            for i in 0..d {
                let fl = pt[i].floor().to_integer();
                let ce = pt[i].ceil().to_integer();
                let fl = i64::try_from(&fl).expect("box overflow");
                let ce = i64::try_from(&ce).expect("box overflow");
                lo[i] = lo[i].min(fl);
                hi[i] = hi[i].max(ce);
            }
        }
        if !any {
            lo = vec![0; d];
            hi = vec![0; d];
        }
        (lo.iter().map(|x| x - margin).collect(), hi.iter().map(|x| x + margin).collect())
    }

    /// Cohomology of the line bundle with the given class, via the canonical
    /// lift. Cached per class. In paranoid mode the enumeration is re-run
    /// with a wider box and any discrepancy is an error.
    pub fn cohomology_table(&self, c: &DivisorClass) -> Result<CohomologyTable, CohomologyError> {
        if let Some(hit) = self.table_cache.lock().unwrap().get(&c.0) {
            return Ok(hit.clone());
        }
        let t = self.variety.lift_class(c);
        let table = self.table_of_divisor(&t, 1);
        if self.paranoid {
            let wide = self.table_of_divisor(&t, 2);
            if wide != table {
                return Err(CohomologyError::BoxUnstable {
                    divisor: t.0.clone(),
                    narrow: table.to_string(),
                    wide: wide.to_string(),
                });
            }
        }
        self.table_cache.lock().unwrap().insert(c.0.clone(), table.clone());
        Ok(table)
    }

    /// `Hom(O(src), O(dst)[*]) = H^*(X, O(dst - src))`.
    pub fn hom_table(
        &self,
        src: &DivisorClass,
        dst: &DivisorClass,
    ) -> Result<CohomologyTable, CohomologyError> {
        let diff = DivisorClass(dst.0.iter().zip(&src.0).map(|(a, b)| a - b).collect());
        self.cohomology_table(&diff)
    }
}
