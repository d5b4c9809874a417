//! Louvain modularity optimisation on the symmetrised window graph.
//!
//! Weights are edge speeds. `A_ij = w(i->j) + w(j->i)` for `i != j`, and a
//! self-loop contributes its weight once to `A_ii`. Degrees are row sums of
//! `A`, so aggregated graphs reproduce the modularity of the partition they
//! were collapsed from.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::CellId;
use crate::twg::{SpatialActivityGraph, TimeWindow};

const GAIN_EPS: f64 = 1e-10;
const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub window: TimeWindow,
    /// Community per cell; ids are contiguous from 0 in order of each
    /// community's lowest cell id.
    pub assignment: BTreeMap<CellId, usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.values().max().map_or(0, |&m| m + 1)
    }

    /// Cells of each community, indexed by community id.
    pub fn members(&self) -> Vec<Vec<CellId>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (&cell, &c) in &self.assignment {
            out[c].push(cell);
        }
        out
    }
}

/// Symmetric weight matrix in adjacency-list form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricWeights {
    pub nodes: Vec<CellId>,
    /// Off-diagonal neighbours `(j, A_ij)`, sorted by `j`.
    pub adj: Vec<Vec<(usize, f64)>>,
    /// `A_ii`.
    pub self_weight: Vec<f64>,
}

impl SymmetricWeights {
    pub fn from_graph(g: &SpatialActivityGraph) -> Self {
        let nodes: Vec<CellId> = g.nodes.iter().copied().collect();
        let pos: HashMap<CellId, usize> = nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); nodes.len()];
        let mut self_weight = vec![0.0; nodes.len()];
        for e in &g.edges {
            let (i, j) = (pos[&e.from_cell], pos[&e.to_cell]);
            if i == j {
                self_weight[i] += e.avg_speed;
            } else {
                *rows[i].entry(j).or_insert(0.0) += e.avg_speed;
                *rows[j].entry(i).or_insert(0.0) += e.avg_speed;
            }
        }
        Self {
            nodes,
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            self_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.self_weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_weight.is_empty()
    }

    fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.self_weight)
            .map(|(row, &s)| s + row.iter().map(|&(_, w)| w).sum::<f64>())
            .collect()
    }
}

/// Modularity of `assignment` (community per node index).
pub fn modularity(w: &SymmetricWeights, assignment: &[usize]) -> f64 {
    let k = w.degrees();
    let two_m: f64 = k.iter().sum();
    if two_m <= 0.0 {
        return 0.0;
    }
    let communities = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut inside = vec![0.0; communities];
    let mut total = vec![0.0; communities];
    for i in 0..w.len() {
        let c = assignment[i];
        total[c] += k[i];
        inside[c] += w.self_weight[i];
        for &(j, a) in &w.adj[i] {
            if assignment[j] == c {
                inside[c] += a;
            }
        }
    }
    inside
        .iter()
        .zip(&total)
        .map(|(&ins, &tot)| ins / two_m - (tot / two_m) * (tot / two_m))
        .sum()
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Independent Louvain runs per call; the best partition is kept.
pub const DEFAULT_RESTARTS: usize = 8;

/// Modularity recorded after every local-moving sweep of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    /// Starts with the all-singletons value.
    pub sweeps: Vec<f64>,
    pub levels: usize,
    /// Final modularity of this run.
    pub modularity: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LouvainTrace {
    pub runs: Vec<RunTrace>,
    /// Index of the run whose partition was returned.
    pub best: usize,
}

/// Louvain with [`DEFAULT_RESTARTS`] visit orders derived from `seed`.
pub fn louvain(g: &SpatialActivityGraph, seed: u64) -> Partition {
    louvain_traced(g, seed, DEFAULT_RESTARTS).0
}

/// Runs the Louvain descent `restarts` times (at least once), each with its
/// own node visit order drawn from stream `r` of a ChaCha8 generator seeded
/// with `seed`, keeps the highest-modularity partition (the earliest run on
/// ties) and refines it.
pub fn louvain_traced(g: &SpatialActivityGraph, seed: u64, restarts: usize) -> (Partition, LouvainTrace) {
    let original = SymmetricWeights::from_graph(g);
    let mut trace = LouvainTrace::default();
    if original.is_empty() {
        let p = Partition {
            window: g.window,
            assignment: BTreeMap::new(),
            modularity: 0.0,
        };
        return (p, trace);
    }

    let restarts = restarts.max(1);
    let mut best: Vec<usize> = Vec::new();
    for r in 0..restarts {
        let (membership, run) = single_run(&original, &mut stream(seed, r));
        if r == 0 || run.modularity > trace.runs[trace.best].modularity + GAIN_EPS {
            best = membership;
            trace.best = r;
        }
        trace.runs.push(run);
    }
    let mut rng = stream(seed, restarts);
    let mut run = trace.runs[trace.best].clone();
    let best = refine(&original, best, &mut rng, &mut run);
    // a vertex-mover search from one all-covering community finds bisections
    // the descent can miss on weakly structured graphs
    let mut whole = RunTrace::default();
    let split = refine(&original, vec![0; original.len()], &mut rng, &mut whole);
    let best = if whole.modularity > run.modularity + GAIN_EPS {
        run.sweeps.push(whole.modularity);
        run.modularity = whole.modularity;
        split
    } else {
        best
    };
    trace.runs[trace.best] = run;

    let membership = canonical_labels(&best);
    let modularity = modularity(&original, &membership);
    let assignment = original.nodes.iter().copied().zip(membership).collect();
    (
        Partition {
            window: g.window,
            assignment,
            modularity,
        },
        trace,
    )
}

/// One multi-level descent from singletons. The trace records the modularity
/// after every sweep.
fn single_run(original: &SymmetricWeights, rng: &mut ChaCha8Rng) -> (Vec<usize>, RunTrace) {
    let mut trace = RunTrace::default();
    let singletons: Vec<usize> = (0..original.len()).collect();
    trace.sweeps.push(modularity(original, &singletons));
    let membership = descend(original, singletons, rng, &mut trace.levels, |q| trace.sweeps.push(q));
    trace.modularity = modularity(original, &membership);
    (membership, trace)
}

/// Alternates vertex-mover passes (see [`fine_tune`]) with a resumed descent
/// for as long as that raises modularity, appending each accepted value to
/// `trace`. Node moves and merges alone cannot regroup nodes across
/// communities; the vertex mover can.
fn refine(
    original: &SymmetricWeights,
    mut membership: Vec<usize>,
    rng: &mut ChaCha8Rng,
    trace: &mut RunTrace,
) -> Vec<usize> {
    let mut current = modularity(original, &membership);
    while let Some(tuned) = fine_tune(original, &membership) {
        let candidate = descend(original, tuned, rng, &mut trace.levels, |_| {});
        let q = modularity(original, &candidate);
        if q <= current + GAIN_EPS {
            break;
        }
        membership = candidate;
        current = q;
        trace.sweeps.push(q);
    }
    trace.modularity = current;
    membership
}

/// One vertex-mover pass: every node is moved exactly once, each step taking
/// the best available move (to a neighbouring community, or alone into an
/// empty one) even when it lowers modularity. Returns the best partition seen
/// along the way if it beats the starting one.
fn fine_tune(w: &SymmetricWeights, start: &[usize]) -> Option<Vec<usize>> {
    let n = w.len();
    let k = w.degrees();
    let two_m: f64 = k.iter().sum();
    if two_m <= 0.0 || n < 2 {
        return None;
    }
    // ids 0..2n leave room for every node to sit alone
    let mut comm = start.to_vec();
    let mut tot = vec![0.0; 2 * n];
    let mut size = vec![0usize; 2 * n];
    for (i, &c) in comm.iter().enumerate() {
        tot[c] += k[i];
        size[c] += 1;
    }
    let mut empty: BTreeSet<usize> = (0..2 * n).filter(|&c| size[c] == 0).collect();
    let mut moved = vec![false; n];
    let (mut gained, mut best_gain) = (0.0, 0.0);
    let mut best: Option<Vec<usize>> = None;
    let mut links = vec![0.0; 2 * n];
    let mut touched: Vec<usize> = Vec::new();

    for _ in 0..n {
        // (gain, node, target); strict comparisons keep the lowest node, then id, on ties
        let mut step: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| !moved[i]) {
            for &(j, a) in &w.adj[i] {
                touched.push(comm[j]);
                links[comm[j]] += a;
            }
            touched.sort_unstable();
            touched.dedup();
            let old = comm[i];
            let stay = links[old] - (tot[old] - k[i]) * k[i] / two_m;
            let mut consider = |c: usize, g: f64| {
                if step.is_none_or(|(bg, _, _)| g > bg + GAIN_EPS) {
                    step = Some((g, i, c));
                }
            };
            for &c in &touched {
                if c != old {
                    consider(c, links[c] - tot[c] * k[i] / two_m - stay);
                }
            }
            if size[old] > 1 {
                if let Some(&e) = empty.first() {
                    consider(e, -stay);
                }
            }
            for &c in &touched {
                links[c] = 0.0;
            }
            touched.clear();
        }
        let Some((g, i, c)) = step else { break };
        let old = comm[i];
        tot[old] -= k[i];
        size[old] -= 1;
        if size[old] == 0 {
            empty.insert(old);
        }
        tot[c] += k[i];
        size[c] += 1;
        empty.remove(&c);
        comm[i] = c;
        moved[i] = true;
        gained += g;
        if gained > best_gain + GAIN_EPS {
            best_gain = gained;
            best = Some(comm.clone());
        }
    }
    best
}

/// Multi-level descent from `membership` (arbitrary community ids): local
/// moving on the aggregated graph, then aggregation, until no node moves.
/// Calls `on_sweep` with the modularity on `original` after every sweep that
/// moved a node.
fn descend(
    original: &SymmetricWeights,
    membership: Vec<usize>,
    rng: &mut ChaCha8Rng,
    levels: &mut usize,
    mut on_sweep: impl FnMut(f64),
) -> Vec<usize> {
    let (relabel, mut level) = aggregate(original, &membership);
    let mut membership: Vec<usize> = membership.iter().map(|&c| relabel[c]).collect();
    while level.len() > 1 {
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(rng);
        let (comm, moved) = local_moving(&level, &order, |comm| {
            let m: Vec<usize> = membership.iter().map(|&c| comm[c]).collect();
            on_sweep(modularity(original, &m));
        });
        *levels += 1;
        if !moved {
            break;
        }
        let (relabel, next) = aggregate(&level, &comm);
        for c in membership.iter_mut() {
            *c = relabel[comm[*c]];
        }
        level = next;
    }
    membership
}

/// Greedy node moves until a sweep changes nothing. Returns the community of
/// every node and whether any node moved.
fn local_moving(w: &SymmetricWeights, order: &[usize], mut on_sweep: impl FnMut(&[usize])) -> (Vec<usize>, bool) {
    let n = w.len();
    let k = w.degrees();
    let two_m: f64 = k.iter().sum();
    let mut comm: Vec<usize> = (0..n).collect();
    if two_m <= 0.0 {
        return (comm, false);
    }
    let mut tot = k.clone();
    let mut size = vec![1usize; n];
    // community ids with no members; a node may always leave for one of these
    let mut empty: BTreeSet<usize> = BTreeSet::new();
    let mut any_move = false;
    let mut links: BTreeMap<usize, f64> = BTreeMap::new();

    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for &i in order {
            links.clear();
            for &(j, a) in &w.adj[i] {
                *links.entry(comm[j]).or_insert(0.0) += a;
            }
            let old = comm[i];
            tot[old] -= k[i];
            size[old] -= 1;
            let gain = |c: usize, tot: &[f64]| links.get(&c).copied().unwrap_or(0.0) - tot[c] * k[i] / two_m;
            let stay = gain(old, &tot);

            // links iterates in ascending community id, so the first maximum wins ties
            let mut best: Option<(usize, f64)> = None;
            for &c in links.keys() {
                if c == old {
                    continue;
                }
                let g = gain(c, &tot);
                if best.is_none_or(|(_, bg)| g > bg + GAIN_EPS) {
                    best = Some((c, g));
                }
            }
            // isolating the node gains nothing from links and pays nothing in degree
            if size[old] > 0 {
                if let Some(&e) = empty.first() {
                    let better = match best {
                        None => true,
                        Some((c, bg)) => 0.0 > bg + GAIN_EPS || (0.0 >= bg - GAIN_EPS && e < c),
                    };
                    if better {
                        best = Some((e, 0.0));
                    }
                }
            }
            let target = match best {
                Some((c, g)) if g > stay + GAIN_EPS => c,
                _ => old,
            };
            tot[target] += k[i];
            size[target] += 1;
            if target != old {
                if size[old] == 0 {
                    empty.insert(old);
                }
                empty.remove(&target);
                comm[i] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        any_move = true;
        on_sweep(&comm);
    }
    (comm, any_move)
}

/// Collapses communities into super-nodes. Returns the dense relabelling of
/// community ids and the aggregated weights.
fn aggregate(w: &SymmetricWeights, comm: &[usize]) -> (Vec<usize>, SymmetricWeights) {
    let mut relabel = vec![usize::MAX; comm.iter().max().map_or(0, |&m| m + 1)];
    let mut count = 0;
    for &c in comm {
        if relabel[c] == usize::MAX {
            relabel[c] = count;
            count += 1;
        }
    }
    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
    let mut self_weight = vec![0.0; count];
    for i in 0..w.len() {
        let ci = relabel[comm[i]];
        self_weight[ci] += w.self_weight[i];
        for &(j, a) in &w.adj[i] {
            let cj = relabel[comm[j]];
            if ci == cj {
                self_weight[ci] += a;
            } else {
                *rows[ci].entry(cj).or_insert(0.0) += a;
            }
        }
    }
    let next = SymmetricWeights {
        nodes: Vec::new(),
        adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
        self_weight,
    };
    (relabel, next)
}

/// Renumbers communities 0.. in order of first appearance.
fn canonical_labels(membership: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    membership
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twg::AggregatedEdge;

    fn graph(edges: &[(u32, u32, f64)]) -> SpatialActivityGraph {
        SpatialActivityGraph::from_edges(
            TimeWindow::new(0.0, 5.0),
            edges
                .iter()
                .map(|&(a, b, s)| AggregatedEdge {
                    from_cell: a,
                    to_cell: b,
                    players: [1].into_iter().collect(),
                    avg_speed: s,
                    action_count: 1,
                })
                .collect(),
            [],
        )
    }

    #[test]
    fn two_triangles() {
        let g = graph(&[
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
            (10, 11, 1.0),
            (11, 12, 1.0),
            (12, 10, 1.0),
        ]);
        let p = louvain(&g, 0);
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.members(), vec![vec![0, 1, 2], vec![10, 11, 12]]);
        assert!((p.modularity - 0.5).abs() < 1e-9);
    }

    #[test]
    fn refinement_regroups_across_communities() {
        // plain descent stops at {0,6,7} {1,5} {2,3,4}; the optimum swaps 1 and 5
        let edges = [
            (0, 2, 2.786477896825927),
            (0, 5, 0.5182017253841382),
            (1, 5, 6.150519419897307),
            (2, 1, 7.598509829466294),
            (2, 3, 5.486822335055691),
            (2, 4, 3.895538243599718),
            (2, 6, 1.1275624305738332),
            (3, 1, 6.769357874471845),
            (3, 4, 2.733445797202645),
            (3, 6, 6.337341973510509),
            (4, 1, 3.7228850987234963),
            (4, 5, 2.384961953736549),
            (4, 6, 0.962276238950658),
            (5, 1, 7.860951679320214),
            (5, 7, 6.909684564575528),
            (6, 0, 3.2524777578096438),
            (6, 1, 2.031129469823918),
            (6, 5, 7.94522944889531),
            (7, 4, 4.10282615994757),
            (7, 6, 7.2819083840429615),
        ];
        let p = louvain(&graph(&edges), 33);
        assert_eq!(p.members(), vec![vec![0, 5, 6, 7], vec![1, 2, 3, 4]]);
        assert!((p.modularity - 0.12332963390187138).abs() < 1e-12);
    }

    #[test]
    fn leaf_with_self_loop_stays_apart() {
        // greedy merging swallows node 1 into the hub's community
        let edges = [
            (1, 1, 1.267033741900186),
            (2, 3, 5.520125984275615),
            (3, 0, 3.6801797436433485),
            (3, 1, 3.166553464180777),
            (3, 2, 2.1272095651589136),
        ];
        let p = louvain(&graph(&edges), 15);
        assert_eq!(p.members(), vec![vec![0, 2, 3], vec![1]]);
        assert!((p.modularity - 0.040808672780091766).abs() < 1e-12);
    }

    #[test]
    fn sweeps_never_lower_modularity() {
        let g = graph(&[
            (0, 1, 2.0),
            (1, 2, 1.0),
            (2, 0, 3.0),
            (2, 3, 0.5),
            (3, 4, 2.0),
            (4, 5, 2.0),
            (5, 3, 1.0),
        ]);
        let (_, trace) = louvain_traced(&g, 9, 4);
        assert_eq!(trace.runs.len(), 4);
        for run in &trace.runs {
            assert!(run.sweeps.windows(2).all(|w| w[1] >= w[0]), "{:?}", run.sweeps);
        }
    }

    #[test]
    fn single_node() {
        let g = SpatialActivityGraph::from_edges(TimeWindow::new(0.0, 5.0), vec![], [4]);
        let p = louvain(&g, 3);
        assert_eq!(p.assignment, [(4, 0)].into_iter().collect());
        assert_eq!(p.modularity, 0.0);
    }

    #[test]
    fn opposing_edges_are_summed() {
        let w = SymmetricWeights::from_graph(&graph(&[(0, 1, 2.0), (1, 0, 3.0), (1, 1, 4.0)]));
        assert_eq!(w.adj[0], vec![(1, 5.0)]);
        assert_eq!(w.adj[1], vec![(0, 5.0)]);
        assert_eq!(w.self_weight, vec![0.0, 4.0]);
    }

    #[test]
    fn seed_determinism() {
        let mut edges = Vec::new();
        for i in 0..30u32 {
            edges.push((i, (i * 7 + 3) % 30, 1.0 + (i % 5) as f64));
            edges.push((i, (i + 1) % 30, 2.0));
        }
        let g = graph(&edges);
        assert_eq!(louvain(&g, 11), louvain(&g, 11));
    }

    #[test]
    fn aggregation_preserves_modularity() {
        let g = graph(&[
            (0, 1, 1.0),
            (1, 2, 2.0),
            (2, 3, 1.5),
            (3, 0, 0.5),
            (1, 1, 3.0),
            (2, 0, 1.0),
        ]);
        let w = SymmetricWeights::from_graph(&g);
        let comm = vec![0, 0, 2, 2];
        let (relabel, agg) = aggregate(&w, &comm);
        let singletons: Vec<usize> = (0..agg.len()).collect();
        let collapsed: Vec<usize> = comm.iter().map(|&c| relabel[c]).collect();
        assert!((modularity(&agg, &singletons) - modularity(&w, &collapsed)).abs() < 1e-12);
    }
}
