//! The `e = 2` engine.
//!
//! Each clause `x_{i1} ⊕ .. ⊕ x_{ia} ⊕ y_i ⊕ y_j = ε` is an edge `{y_i, y_j}`
//! labelled by the vector `(ε, x-coefficients)`. A cycle is bad when the XOR
//! of its labels is nonzero; the formula is true iff no cycle is bad.
//! Every cycle is a sum of fundamental cycles of a spanning forest, and
//! weights add, so it suffices to check the cycle closed by each non-tree
//! edge. A union-find whose nodes carry the XOR of labels up to their root
//! gives that weight directly.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::model::{Clause, QxorInstance};
use crate::solver::Verdicts;

/// Edge label over positions `0..=m`: position 0 is the constant, position
/// `i` the coefficient of `x_i`. Stored sparsely as the ascending list of
/// set positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    set: SmallVec<[u32; 4]>,
}

impl EdgeLabel {
    pub fn zero() -> Self {
        EdgeLabel::default()
    }

    /// Label from arbitrary positions; repeated positions cancel in pairs.
    pub fn from_positions(positions: impl IntoIterator<Item = u32>) -> Self {
        let mut v: SmallVec<[u32; 4]> = positions.into_iter().collect();
        v.sort_unstable();
        let mut set = SmallVec::new();
        for p in v {
            if set.last() == Some(&p) {
                set.pop();
            } else {
                set.push(p);
            }
        }
        EdgeLabel { set }
    }

    pub fn from_clause(clause: &Clause) -> Self {
        let mut set = SmallVec::with_capacity(clause.universal().len() + 1);
        if clause.rhs() {
            set.push(0);
        }
        set.extend_from_slice(clause.universal());
        EdgeLabel { set }
    }

    pub fn positions(&self) -> &[u32] {
        &self.set
    }

    pub fn is_zero(&self) -> bool {
        self.set.is_empty()
    }

    /// Whether the constant position is set.
    pub fn has_constant(&self) -> bool {
        self.set.first() == Some(&0)
    }

    pub fn xor(&self, other: &EdgeLabel) -> EdgeLabel {
        let (a, b) = (&self.set, &other.set);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        EdgeLabel { set: out }
    }
}

/// What inserting one edge did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeOutcome {
    /// Joined two components.
    Tree,
    /// Closed a cycle of weight zero.
    GoodCycle,
    /// Closed a cycle of nonzero weight.
    BadCycle { weight: EdgeLabel },
}

/// Union-find with a label potential on every node.
#[derive(Clone, Debug)]
pub struct ParityForest {
    parent: Vec<u32>,
    size: Vec<u32>,
    /// XOR of labels from the node to its parent.
    potential: Vec<EdgeLabel>,
}

impl ParityForest {
    pub fn new(vertices: usize) -> Self {
        assert!(vertices <= u32::MAX as usize);
        ParityForest {
            parent: (0..vertices as u32).collect(),
            size: vec![1; vertices],
            potential: vec![EdgeLabel::zero(); vertices],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `v` and the XOR of labels along the stored path from `v` to it.
    pub fn find(&mut self, v: usize) -> (usize, EdgeLabel) {
        let mut path: SmallVec<[u32; 16]> = SmallVec::new();
        let mut x = v as u32;
        while self.parent[x as usize] != x {
            path.push(x);
            x = self.parent[x as usize];
        }
        let root = x;
        let mut acc = EdgeLabel::zero();
        for &node in path.iter().rev() {
            let node = node as usize;
            acc = acc.xor(&self.potential[node]);
            self.potential[node] = acc.clone();
            self.parent[node] = root;
        }
        (root as usize, acc)
    }

    /// Inserts the edge `{u, v}` with label `w`. A bad cycle is reported but
    /// leaves the forest unchanged, so later edges can still be processed.
    pub fn add_edge(&mut self, u: usize, v: usize, w: &EdgeLabel) -> Result<EdgeOutcome> {
        if u == v {
            return Err(Error::invalid(format!("self-loop on vertex {u}")));
        }
        if u >= self.len() || v >= self.len() {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) outside {} vertices",
                self.len()
            )));
        }
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        let through = pu.xor(&pv).xor(w);
        if ru == rv {
            return Ok(if through.is_zero() {
                EdgeOutcome::GoodCycle
            } else {
                EdgeOutcome::BadCycle { weight: through }
            });
        }
        let (big, small) = if self.size[ru] >= self.size[rv] { (ru, rv) } else { (rv, ru) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.potential[small] = through;
        Ok(EdgeOutcome::Tree)
    }
}

/// Summary of one pass over all edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphReport {
    /// Edges that closed a cycle: `L - n + #components`.
    pub cycles: usize,
    /// Closing edges whose fundamental cycle has nonzero weight.
    pub bad_cycles: usize,
    /// Closing edges whose fundamental cycle has odd constant parity.
    pub constant_bad_cycles: usize,
}

impl GraphReport {
    pub fn verdicts(&self) -> Verdicts {
        Verdicts {
            maxrank: self.cycles == 0,
            qxor: self.bad_cycles == 0,
            xorsat: self.constant_bad_cycles == 0,
        }
    }
}

fn require_e2(inst: &QxorInstance) -> Result<()> {
    if inst.e() != 2 {
        return Err(Error::capability(format!(
            "graph engine needs e = 2, instance has e = {}",
            inst.e()
        )));
    }
    Ok(())
}

/// Inserts every edge of `G_a(s)` and tallies cycles.
pub fn analyze_graph(inst: &QxorInstance) -> Result<GraphReport> {
    require_e2(inst)?;
    let mut forest = ParityForest::new(inst.n());
    let mut report = GraphReport::default();
    for clause in inst.clauses() {
        let [u, v] = clause.existential() else {
            unreachable!("e = 2 checked above")
        };
        let label = EdgeLabel::from_clause(clause);
        match forest.add_edge(*u as usize - 1, *v as usize - 1, &label)? {
            EdgeOutcome::Tree => {}
            EdgeOutcome::GoodCycle => report.cycles += 1,
            EdgeOutcome::BadCycle { weight } => {
                report.cycles += 1;
                report.bad_cycles += 1;
                if weight.has_constant() {
                    report.constant_bad_cycles += 1;
                }
            }
        }
    }
    Ok(report)
}

pub fn decide_qxor_graph(inst: &QxorInstance) -> Result<bool> {
    Ok(analyze_graph(inst)?.bad_cycles == 0)
}

/// Satisfiability of the existential part (labels projected to the constant).
pub fn decide_xorsat_graph(inst: &QxorInstance) -> Result<bool> {
    Ok(analyze_graph(inst)?.constant_bad_cycles == 0)
}

/// No cycle at all, equivalently `E` has full row rank.
pub fn is_acyclic(inst: &QxorInstance) -> Result<bool> {
    Ok(analyze_graph(inst)?.cycles == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStats {
    pub independent_cycles: usize,
    pub bad_found: bool,
}

pub fn cycle_stats(inst: &QxorInstance) -> Result<CycleStats> {
    let r = analyze_graph(inst)?;
    Ok(CycleStats {
        independent_cycles: r.cycles,
        bad_found: r.bad_cycles > 0,
    })
}
