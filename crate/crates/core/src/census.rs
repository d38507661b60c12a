//! Exhaustive census of small minimal-candidate complexes: isomorph-free
//! enumeration of triangle sets satisfying (M1) and (M2) up to a triangle
//! budget, with deterministic canonical forms and homology fingerprints.
//!
//! Complexes satisfying (M1) have no extra edges, so the census enumerates
//! pure triangle sets. Generation is by lexicographically increasing
//! triangle lists with vertices introduced in first-use order; classes are
//! deduplicated by canonical relabeling at acceptance. Budgets are applied
//! per search branch, so results are identical for any worker count.

use serde::Serialize;

use crate::complex::Simplex2Complex;
use crate::homology::homology_summary;

/// Resource limits for a census run. `max_nodes_per_branch` is deterministic;
/// `max_seconds` is a wall-clock safety valve that marks the result
/// incomplete when hit.
#[derive(Clone, Debug, Default)]
pub struct CensusBudget {
    pub max_nodes_per_branch: Option<u64>,
    pub max_seconds: Option<u64>,
    pub workers: usize,
}

/// One isomorphism class in the census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub canonical_triangles: Vec<[usize; 3]>,
    pub s0: usize,
    pub s1: usize,
    pub s2: usize,
    pub euler: i64,
    pub betti: [usize; 3],
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusResult {
    pub max_t: u64,
    pub entries: Vec<CensusEntry>,
    pub complete: bool,
    pub nodes_explored: u64,
}

impl CensusResult {
    /// Newline-delimited JSON: one record per class in canonical order, plus
    /// an explicit trailer when the run was budget-limited.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(&serde_json::to_string(entry).expect("serializable"));
            out.push('\n');
        }
        if !self.complete {
            out.push_str(
                &serde_json::to_string(&serde_json::json!({
                    "incomplete": true,
                    "nodes_explored": self.nodes_explored,
                    "max_t": self.max_t,
                }))
                .expect("serializable"),
            );
            out.push('\n');
        }
        out
    }
}

/// Canonical form of a triangle set under vertex relabeling: the relabeled,
/// sorted triangle list minimizing the (max, mid, min)-ordered key sequence.
/// Every vertex must occur in some triangle.
pub fn canonical_form(triangles: &[[usize; 3]], vertex_count: usize) -> Vec<[usize; 3]> {
    if triangles.is_empty() {
        return Vec::new();
    }
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (i, t) in triangles.iter().enumerate() {
        for &v in t {
            by_vertex[v].push(i);
        }
    }
    debug_assert!(
        by_vertex.iter().all(|l| !l.is_empty()),
        "dense vertex use required"
    );
    let mut search = CanonSearch {
        triangles,
        by_vertex: &by_vertex,
        new_label: vec![usize::MAX; vertex_count],
        chosen: Vec::with_capacity(vertex_count),
        seq: Vec::with_capacity(triangles.len()),
        best: None,
    };
    search.run(vertex_count);
    let keys = search.best.expect("some labeling exists");
    let mut out: Vec<[usize; 3]> = keys.iter().map(|&[c, b, a]| [a, b, c]).collect();
    out.sort_unstable();
    out
}

struct CanonSearch<'a> {
    triangles: &'a [[usize; 3]],
    by_vertex: &'a [Vec<usize>],
    /// old vertex -> new label (usize::MAX when unassigned).
    new_label: Vec<usize>,
    /// new label -> old vertex.
    chosen: Vec<usize>,
    /// Completed triangle keys [max, mid, min] in discovery order.
    seq: Vec<[usize; 3]>,
    best: Option<Vec<[usize; 3]>>,
}

impl CanonSearch<'_> {
    fn run(&mut self, vertex_count: usize) {
        let depth = self.chosen.len();
        if depth == vertex_count {
            if self.best.as_ref().is_none_or(|b| self.seq < *b) {
                self.best = Some(self.seq.clone());
            }
            return;
        }
        for old in 0..vertex_count {
            if self.new_label[old] != usize::MAX {
                continue;
            }
            // Assign new label `depth`; newly completed triangles all have
            // their maximum new label here, so the key sequence grows by a
            // sorted batch and earlier entries are final.
            self.new_label[old] = depth;
            self.chosen.push(old);
            let mut batch: Vec<[usize; 3]> = Vec::new();
            for &ti in &self.by_vertex[old] {
                let t = self.triangles[ti];
                let mut labels = [0usize; 3];
                let mut complete = true;
                for (slot, &v) in t.iter().enumerate() {
                    let l = self.new_label[v];
                    if l == usize::MAX {
                        complete = false;
                        break;
                    }
                    labels[slot] = l;
                }
                if complete {
                    labels.sort_unstable_by(|a, b| b.cmp(a));
                    batch.push(labels);
                }
            }
            batch.sort_unstable();
            let before = self.seq.len();
            self.seq.extend_from_slice(&batch);
            let prune = match &self.best {
                Some(best) => self.seq.as_slice() > &best[..self.seq.len().min(best.len())],
                None => false,
            };
            if !prune {
                self.run(vertex_count);
            }
            self.seq.truncate(before);
            self.chosen.pop();
            self.new_label[old] = usize::MAX;
        }
    }
}

/// Two triangle sets related by a vertex relabeling?
pub fn isomorphic(a: &[[usize; 3]], na: usize, b: &[[usize; 3]], nb: usize) -> bool {
    na == nb && a.len() == b.len() && canonical_form(a, na) == canonical_form(b, nb)
}

/// Runs the census of (M1)/(M2) complexes with at most `max_t` triangles.
pub fn census(max_t: u64, budget: &CensusBudget) -> CensusResult {
    let vcap = (3 * max_t / 4) as usize;
    let mut result = CensusResult {
        max_t,
        entries: Vec::new(),
        complete: true,
        nodes_explored: 0,
    };
    if max_t < 4 || vcap < 3 {
        return result;
    }

    // Top-level branches: the first triangle is [0, 1, 2] in any canonical
    // labeling; branch over the second triangle.
    let first = [0usize, 1, 2];
    let branches: Vec<[usize; 3]> = extensions(&[first], 3, vcap);

    let workers = budget.workers.max(1).min(branches.len().max(1));
    let deadline = budget
        .max_seconds
        .map(|s| std::time::Instant::now() + std::time::Duration::from_secs(s));
    let outcomes: Vec<BranchOutcome> = if workers <= 1 {
        branches
            .iter()
            .map(|&second| explore_branch(first, second, max_t, vcap, budget, deadline))
            .collect()
    } else {
        let mut slots: Vec<Option<BranchOutcome>> = vec![None; branches.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for worker in 0..workers {
                let branches = &branches;
                let budget_ref = budget;
                handles.push(scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut idx = worker;
                    while idx < branches.len() {
                        local.push((
                            idx,
                            explore_branch(first, branches[idx], max_t, vcap, budget_ref, deadline),
                        ));
                        idx += workers;
                    }
                    local
                }));
            }
            for handle in handles {
                for (idx, outcome) in handle.join().expect("census worker") {
                    slots[idx] = Some(outcome);
                }
            }
        });
        slots
            .into_iter()
            .map(|o| o.expect("all branches explored"))
            .collect()
    };

    let mut classes: std::collections::BTreeSet<Vec<[usize; 3]>> =
        std::collections::BTreeSet::new();
    for outcome in outcomes {
        result.nodes_explored += outcome.nodes;
        result.complete &= outcome.complete;
        classes.extend(outcome.classes);
    }
    result.entries = classes
        .into_iter()
        .map(|canonical| entry_for(&canonical))
        .collect();
    result
}

#[derive(Clone)]
struct BranchOutcome {
    classes: std::collections::BTreeSet<Vec<[usize; 3]>>,
    nodes: u64,
    complete: bool,
}

struct Dfs<'a> {
    max_t: usize,
    vcap: usize,
    budget: &'a CensusBudget,
    deadline: Option<std::time::Instant>,
    nodes: u64,
    complete: bool,
    classes: std::collections::BTreeSet<Vec<[usize; 3]>>,
}

fn explore_branch(
    first: [usize; 3],
    second: [usize; 3],
    max_t: u64,
    vcap: usize,
    budget: &CensusBudget,
    deadline: Option<std::time::Instant>,
) -> BranchOutcome {
    let mut dfs = Dfs {
        max_t: max_t as usize,
        vcap,
        budget,
        deadline,
        nodes: 0,
        complete: true,
        classes: std::collections::BTreeSet::new(),
    };
    let mut tris = vec![first, second];
    dfs.visit(&mut tris);
    BranchOutcome {
        classes: dfs.classes,
        nodes: dfs.nodes,
        complete: dfs.complete,
    }
}

impl Dfs<'_> {
    fn visit(&mut self, tris: &mut Vec<[usize; 3]>) {
        self.nodes += 1;
        if let Some(limit) = self.budget.max_nodes_per_branch {
            if self.nodes > limit {
                self.complete = false;
                return;
            }
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if std::time::Instant::now() > deadline {
                    self.complete = false;
                    return;
                }
            }
        }

        let used = tris.iter().flatten().max().map_or(0, |&m| m + 1);
        let (edge_deg, vert_deg) = degrees(tris, used);
        if vert_deg.iter().all(|&d| d >= 4) && edge_deg.values().all(|&d| d >= 2) {
            self.classes.insert(canonical_form(tris, used));
        }
        if tris.len() == self.max_t {
            return;
        }

        // Deficit pruning: each future triangle repairs at most three edge
        // deficits and three vertex deficits.
        let rem = (self.max_t - tris.len()) as u64;
        let edge_deficit: u64 = edge_deg
            .values()
            .map(|&d| 2u64.saturating_sub(d as u64))
            .sum();
        let vert_deficit: u64 = vert_deg
            .iter()
            .map(|&d| 4u64.saturating_sub(d as u64))
            .sum();
        if edge_deficit > 3 * rem || vert_deficit > 3 * rem {
            return;
        }

        // Lexicographic feasibility: a deficient edge or vertex whose largest
        // possible completing triangle is already behind the frontier is dead.
        let last = *tris.last().expect("branch states have two triangles");
        for (e, &d) in &edge_deg {
            if d < 2 && max_triple_with_pair(*e, used, self.vcap) <= last {
                return;
            }
        }
        for (v, &d) in vert_deg.iter().enumerate() {
            if d < 4 && max_triple_with_vertex(v, used, self.vcap) <= last {
                return;
            }
        }

        for next in extensions(tris, used, self.vcap) {
            tris.push(next);
            self.visit(tris);
            tris.pop();
            if !self.complete {
                return;
            }
        }
    }
}

fn degrees(
    tris: &[[usize; 3]],
    used: usize,
) -> (std::collections::BTreeMap<[usize; 2], u32>, Vec<u32>) {
    let mut edge_deg: std::collections::BTreeMap<[usize; 2], u32> =
        std::collections::BTreeMap::new();
    let mut vert_deg = vec![0u32; used];
    for t in tris {
        for e in crate::complex::triangle_edges(t) {
            *edge_deg.entry(e).or_insert(0) += 1;
        }
        for &v in t {
            vert_deg[v] += 1;
        }
    }
    (edge_deg, vert_deg)
}

/// Lexicographically largest sorted triple containing both endpoints of `e`,
/// over vertices below `vcap` (new vertices may still be introduced).
fn max_triple_with_pair(e: [usize; 2], used: usize, vcap: usize) -> [usize; 3] {
    let top = vcap.max(used) - 1;
    let w = if top != e[0] && top != e[1] {
        top
    } else if top >= 1 && top - 1 != e[0] && top - 1 != e[1] {
        top - 1
    } else {
        top.saturating_sub(2)
    };
    let mut t = [e[0], e[1], w];
    t.sort_unstable();
    t
}

fn max_triple_with_vertex(v: usize, used: usize, vcap: usize) -> [usize; 3] {
    let top = vcap.max(used) - 1;
    let mut picks = Vec::with_capacity(2);
    let mut w = top;
    while picks.len() < 2 {
        if w != v {
            picks.push(w);
        }
        if w == 0 {
            break;
        }
        w -= 1;
    }
    let mut t = [v, picks[0], *picks.get(1).unwrap_or(&0)];
    t.sort_unstable();
    t
}

/// All valid next triangles: lexicographically above the last one, with new
/// vertices introduced contiguously, below the vertex cap.
fn extensions(tris: &[[usize; 3]], used: usize, vcap: usize) -> Vec<[usize; 3]> {
    let last = *tris.last().expect("nonempty state");
    let present: std::collections::BTreeSet<[usize; 3]> = tris.iter().copied().collect();
    let mut out = Vec::new();
    // Triples over existing vertices.
    for a in 0..used {
        for b in a + 1..used {
            for c in b + 1..used {
                let t = [a, b, c];
                if t > last && !present.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    // One new vertex.
    if used < vcap {
        for a in 0..used {
            for b in a + 1..used {
                let t = [a, b, used];
                if t > last {
                    out.push(t);
                }
            }
        }
    }
    // Two new vertices.
    if used + 1 < vcap {
        for a in 0..used {
            let t = [a, used, used + 1];
            if t > last {
                out.push(t);
            }
        }
    }
    // Three new vertices (a fresh component).
    if used + 2 < vcap {
        let t = [used, used + 1, used + 2];
        if t > last {
            out.push(t);
        }
    }
    out.sort_unstable();
    out
}

fn entry_for(canonical: &[[usize; 3]]) -> CensusEntry {
    let vertex_count = canonical.iter().flatten().max().map_or(0, |&m| m + 1);
    let complex = Simplex2Complex::new(vertex_count, canonical.to_vec(), vec![])
        .expect("census states are valid complexes");
    let stats = complex.stats();
    let h = homology_summary(&complex);
    CensusEntry {
        canonical_triangles: canonical.to_vec(),
        s0: stats.s0,
        s1: stats.s1,
        s2: stats.s2,
        euler: stats.euler,
        betti: [h.betti.0, h.betti.1, h.betti.2],
        torsion: h
            .h1_torsion_factors
            .iter()
            .map(|f| u64::try_from(f).expect("small torsion at census scale"))
            .collect(),
    }
}
