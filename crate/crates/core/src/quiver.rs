//! Hom quivers of line-bundle collections: the full tensor of graded Hom
//! ranks, exceptionality of the objects, orderability of the collection
//! (acyclicity of the Hom quiver), strongness, and reporting helpers.

use crate::cohomology::{CohomologyEngine, CohomologyError, CohomologyTable};
use crate::divisor::DivisorClass;
use rayon::prelude::*;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum QuiverError {
    #[error("collection contains a repeated bundle at indices {0} and {1}")]
    RepeatedBundle(usize, usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// An ordered list of pairwise-distinct line bundles, given by their classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    pub bundles: Vec<DivisorClass>,
}

impl Collection {
    pub fn new(bundles: Vec<DivisorClass>) -> Result<Collection, QuiverError> {
        for i in 0..bundles.len() {
            for j in i + 1..bundles.len() {
                if bundles[i] == bundles[j] {
                    return Err(QuiverError::RepeatedBundle(i, j));
                }
            }
        }
        Ok(Collection { bundles })
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }
}

/// The full tensor of graded Hom ranks: `table(i, j) = Hom(E_i, E_j[*])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomTensor {
    pub n: usize,
    tables: Vec<CohomologyTable>,
}

impl HomTensor {
    pub fn table(&self, i: usize, j: usize) -> &CohomologyTable {
        &self.tables[i * self.n + j]
    }
}

/// Computes every pairwise Hom table. With `parallel`, pairs are evaluated on
/// the rayon thread pool; results are assembled in index order either way, so
/// output is identical.
pub fn build_hom_tensor(
    engine: &CohomologyEngine<'_>,
    collection: &Collection,
    parallel: bool,
) -> Result<HomTensor, QuiverError> {
    let n = collection.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let compute = |&(i, j): &(usize, usize)| {
        engine.hom_table(&collection.bundles[i], &collection.bundles[j])
    };
    let tables: Result<Vec<CohomologyTable>, CohomologyError> = if parallel {
        pairs.par_iter().map(compute).collect()
    } else {
        pairs.iter().map(compute).collect()
    };
    Ok(HomTensor { n, tables: tables? })
}

/// A certified cycle in the Hom quiver: indices of a directed cycle, plus the
/// Hom tables along one offending pair of arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    /// Vertices of the cycle in order; the cycle closes from last to first.
    pub cycle: Vec<usize>,
    /// A pair `(i, j)` on the cycle with arrows both ways (for 2-cycles) or
    /// the first arrow of the cycle otherwise.
    pub pair: (usize, usize),
    pub forward: CohomologyTable,
    pub backward: CohomologyTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The quiver is acyclic; `ordering` is a topological order of the input
    /// indices (identity whenever the input order itself is topological).
    Orderable { ordering: Vec<usize>, strong: bool },
    NotOrderable { witness: CycleWitness },
}

/// Full analysis of a collection against a computed Hom tensor.
#[derive(Debug, Clone)]
pub struct CollectionVerdict {
    /// Whether every bundle is exceptional (`Hom(E,E) = k` in degree 0 only);
    /// automatic for line bundles, but certified rather than assumed.
    pub all_exceptional: bool,
    pub verdict: Verdict,
}

/// Decides orderability, strongness, and exceptionality from the tensor.
pub fn analyze(tensor: &HomTensor) -> CollectionVerdict {
    let n = tensor.n;
    let all_exceptional = (0..n).all(|i| {
        let t = tensor.table(i, i);
        t.rank(0) == 1 && t.total_rank() == 1
    });

    // Adjacency: arrow i -> j when some graded Hom is nonzero (i != j).
    let edge = |i: usize, j: usize| i != j && !tensor.table(i, j).is_zero();

    // Prefer a 2-cycle witness, scanning pairs in index order.
    for i in 0..n {
        for j in i + 1..n {
            if edge(i, j) && edge(j, i) {
                return CollectionVerdict {
                    all_exceptional,
                    verdict: Verdict::NotOrderable {
                        witness: CycleWitness {
                            cycle: vec![i, j],
                            pair: (i, j),
                            forward: tensor.table(i, j).clone(),
                            backward: tensor.table(j, i).clone(),
                        },
                    },
                };
            }
        }
    }

    // Kahn's algorithm, always removing the smallest available index: when
    // the input order is already topological this returns the identity.
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if edge(i, j) {
                indegree[j] += 1;
            }
        }
    }
    let mut removed = vec![false; n];
    let mut ordering = Vec::with_capacity(n);
    while ordering.len() < n {
        let Some(next) = (0..n).find(|&i| !removed[i] && indegree[i] == 0) else {
            // A cycle of length >= 3 remains; extract a shortest one.
            let witness = shortest_cycle(tensor, &removed, &edge);
            return CollectionVerdict {
                all_exceptional,
                verdict: Verdict::NotOrderable { witness },
            };
        };
        removed[next] = true;
        ordering.push(next);
        for j in 0..n {
            if !removed[j] && edge(next, j) {
                indegree[j] -= 1;
            }
        }
    }

    // Strong: every nonzero Hom between distinct objects sits in degree 0.
    let strong = (0..n).all(|i| (0..n).all(|j| tensor.table(i, j).concentrated_in_degree_zero()));
    CollectionVerdict {
        all_exceptional,
        verdict: Verdict::Orderable { ordering, strong },
    }
}

fn shortest_cycle(
    tensor: &HomTensor,
    removed: &[bool],
    edge: &dyn Fn(usize, usize) -> bool,
) -> CycleWitness {
    let n = tensor.n;
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        if removed[start] {
            continue;
        }
        // BFS back to `start`.
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([start]);
        let mut found = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if removed[v] || !edge(u, v) {
                    continue;
                }
                if v == start {
                    found = Some(u);
                    break 'bfs;
                }
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if let Some(mut u) = found {
            let mut cycle = vec![];
            while u != start {
                cycle.push(u);
                u = prev[u];
            }
            cycle.push(start);
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    let cycle = best.expect("Kahn stalled, so a cycle exists");
    let (i, j) = (cycle[0], cycle[1]);
    CycleWitness {
        pair: (i, j),
        forward: tensor.table(i, j).clone(),
        backward: tensor.table(j, i).clone(),
        cycle,
    }
}

/// Early-exit orderability check: evaluates pairs lazily and stops at the
/// first 2-cycle. Falls back to the full analysis when no 2-cycle exists, so
/// both modes always agree.
pub fn analyze_quick(
    engine: &CohomologyEngine<'_>,
    collection: &Collection,
) -> Result<CollectionVerdict, QuiverError> {
    let n = collection.len();
    for i in 0..n {
        for j in i + 1..n {
            let fwd = engine.hom_table(&collection.bundles[i], &collection.bundles[j])?;
            let bwd = engine.hom_table(&collection.bundles[j], &collection.bundles[i])?;
            if !fwd.is_zero() && !bwd.is_zero() {
                let all_exceptional = (0..n).try_fold(true, |acc, k| {
                    let t = engine.hom_table(&collection.bundles[k], &collection.bundles[k])?;
                    Ok::<_, QuiverError>(acc && t.rank(0) == 1 && t.total_rank() == 1)
                })?;
                return Ok(CollectionVerdict {
                    all_exceptional,
                    verdict: Verdict::NotOrderable {
                        witness: CycleWitness {
                            cycle: vec![i, j],
                            pair: (i, j),
                            forward: fwd,
                            backward: bwd,
                        },
                    },
                });
            }
        }
    }
    let tensor = build_hom_tensor(engine, collection, false)?;
    Ok(analyze(&tensor))
}

/// The matrix of degree-0 Hom ranks under an ordering: entry `(i, j)` is
/// `rank Hom^0(E_{ord(j)}, E_{ord(i)})`, which is lower-triangular with unit
/// diagonal for a strong ordered exceptional collection.
pub fn hom_matrix(tensor: &HomTensor, ordering: &[usize]) -> Vec<Vec<u64>> {
    let n = ordering.len();
    (0..n)
        .map(|i| (0..n).map(|j| tensor.table(ordering[j], ordering[i]).rank(0)).collect())
        .collect()
}

/// Renders the degree-0 Hom quiver in Graphviz DOT format. Nodes are labelled
/// by bundle coordinates; an edge `i -> j` carries the rank of
/// `Hom^0(E_i, E_j)` when nonzero.
pub fn emit_dot(collection: &Collection, tensor: &HomTensor) -> String {
    let mut out = String::from("digraph homs {\n  rankdir=LR;\n");
    for (i, b) in collection.bundles.iter().enumerate() {
        let coords: Vec<String> = b.0.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  n{} [label=\"O({})\"];", i, coords.join(","));
    }
    for i in 0..tensor.n {
        for j in 0..tensor.n {
            if i == j {
                continue;
            }
            let r = tensor.table(i, j).rank(0);
            if r > 0 {
                let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", i, j, r);
            }
        }
    }
    out.push_str("}\n");
    out
}
