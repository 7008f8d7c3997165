//! Decision procedures for the three properties of a quantified instance.
//!
//! `∀X∃Y (AX + EY = C)` holds iff `C ∈ Im(E)` and `Im(A) ⊆ Im(E)`. One
//! forward elimination of `[E | A | C]` with pivots taken only in the `E`
//! block answers all three questions: after it, the rows whose `E` part
//! vanished must also vanish on `A` (quantified truth) or at least on `C`
//! (existential-part satisfiability), and the pivot count is `rank(E)`.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::model::QxorInstance;

/// Largest `m` and `n` accepted by the exhaustive oracle.
pub const BRUTE_FORCE_LIMIT: usize = 16;

/// Verdicts for one instance.
///
/// `maxrank ⇒ qxor ⇒ xorsat` holds for every instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdicts {
    /// `E` has full row rank `L`.
    pub maxrank: bool,
    /// The quantified formula is true.
    pub qxor: bool,
    /// `EY = C` is solvable.
    pub xorsat: bool,
}

impl Verdicts {
    pub fn is_ordered(&self) -> bool {
        (!self.maxrank || self.qxor) && (!self.qxor || self.xorsat)
    }
}

/// `[E | A | C]` for an instance: `E` in columns `0..n`, `A` in `n..n+m`, `C` last.
fn augmented(inst: &QxorInstance) -> BitMatrix {
    let (n, m) = (inst.n(), inst.m());
    let mut aug = BitMatrix::zeros(inst.len(), n + m + 1);
    for (k, clause) in inst.clauses().iter().enumerate() {
        for &y in clause.existential() {
            aug.set(k, y as usize - 1, true);
        }
        for &x in clause.universal() {
            aug.set(k, n + x as usize - 1, true);
        }
        if clause.rhs() {
            aug.set(k, n + m, true);
        }
    }
    aug
}

/// All three verdicts from a single elimination.
pub fn analyze(inst: &QxorInstance) -> Verdicts {
    let mut aug = augmented(inst);
    let n = inst.n();
    let rhs_col = n + inst.m();
    let rank = aug.eliminate(0..n);
    let mut qxor = true;
    let mut xorsat = true;
    for row in rank..aug.rows() {
        if aug.get(row, rhs_col) {
            xorsat = false;
            qxor = false;
            break;
        }
        if qxor && !aug.row_is_zero(row) {
            qxor = false;
        }
    }
    Verdicts {
        maxrank: rank == inst.len(),
        qxor,
        xorsat,
    }
}

/// Truth of `∀X∃Y (AX + EY = C)`.
pub fn decide_qxor(inst: &QxorInstance) -> bool {
    let mut aug = augmented(inst);
    let rank = aug.eliminate(0..inst.n());
    (rank..aug.rows()).all(|row| aug.row_is_zero(row))
}

/// Satisfiability of the existential part, `C ∈ Im(E)`. For `a = 0` this is
/// plain e-XOR-SAT of the formula.
pub fn decide_xorsat(inst: &QxorInstance) -> bool {
    analyze(inst).xorsat
}

/// Whether `E` has full row rank, i.e. `Im(E)` is the whole space.
pub fn decide_maxrank(inst: &QxorInstance) -> bool {
    if inst.len() > inst.n() {
        return false;
    }
    let mut e = BitMatrix::zeros(inst.len(), inst.n());
    for (k, clause) in inst.clauses().iter().enumerate() {
        for &y in clause.existential() {
            e.set(k, y as usize - 1, true);
        }
    }
    e.eliminate(0..inst.n()) == inst.len()
}

/// Clause as bit masks over `x` and `y` for the exhaustive searches.
struct MaskClause {
    x: u32,
    y: u32,
    rhs: bool,
}

fn mask_clauses(inst: &QxorInstance) -> Result<Vec<MaskClause>> {
    if inst.m() > BRUTE_FORCE_LIMIT || inst.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::capability(format!(
            "exhaustive search limited to m, n <= {BRUTE_FORCE_LIMIT} (got m = {}, n = {})",
            inst.m(),
            inst.n()
        )));
    }
    Ok(inst
        .clauses()
        .iter()
        .map(|c| MaskClause {
            x: c.universal().iter().fold(0, |acc, &u| acc | 1 << (u - 1)),
            y: c.existential().iter().fold(0, |acc, &v| acc | 1 << (v - 1)),
            rhs: c.rhs(),
        })
        .collect())
}

fn satisfied(clauses: &[MaskClause], x: u32, y: u32) -> bool {
    clauses
        .iter()
        .all(|c| ((c.x & x).count_ones() + (c.y & y).count_ones()) % 2 == u32::from(c.rhs))
}

/// Reference oracle: for every universal assignment, search every
/// existential assignment for a witness.
pub fn brute_force_decide(inst: &QxorInstance) -> Result<bool> {
    let clauses = mask_clauses(inst)?;
    let ys = 1u32 << inst.n();
    Ok((0..1u32 << inst.m()).all(|x| (0..ys).any(|y| satisfied(&clauses, x, y))))
}

/// Exhaustive `∃Y: EY = C`.
pub fn brute_force_xorsat(inst: &QxorInstance) -> Result<bool> {
    let clauses = mask_clauses(inst)?;
    Ok((0..1u32 << inst.n()).any(|y| satisfied(&clauses, 0, y)))
}

/// Exhaustive max-rank: `Im(E)` has all `2^L` vectors.
pub fn brute_force_maxrank(inst: &QxorInstance) -> Result<bool> {
    let clauses = mask_clauses(inst)?;
    if clauses.len() > inst.n() {
        return Ok(false);
    }
    let mut image = std::collections::HashSet::new();
    for y in 0..1u32 << inst.n() {
        let v: u32 = clauses
            .iter()
            .enumerate()
            .fold(0, |acc, (k, c)| acc | ((c.y & y).count_ones() & 1) << k);
        image.insert(v);
    }
    Ok(image.len() == 1 << clauses.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenConfig};
    use crate::model::tests::worked_example;
    use crate::model::Clause;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(text: &str) -> QxorInstance {
        QxorInstance::parse(text).unwrap()
    }

    #[test]
    fn worked_example_is_false() {
        let ex = worked_example();
        assert!(!decide_qxor(&ex));
        assert!(!brute_force_decide(&ex).unwrap());
        assert!(decide_xorsat(&ex));
        assert!(brute_force_xorsat(&ex).unwrap());
        assert!(!decide_maxrank(&ex));
    }

    #[test]
    fn empty_instance_is_true_everywhere() {
        let e = QxorInstance::empty(2, 3, 1, 2).unwrap();
        assert_eq!(
            analyze(&e),
            Verdicts { maxrank: true, qxor: true, xorsat: true }
        );
        assert!(brute_force_decide(&e).unwrap());
    }

    #[test]
    fn single_clause_is_true() {
        let s = inst("p qxor 1 2 1 1 2\n1 | 1 2 | 0\n");
        assert!(brute_force_decide(&s).unwrap());
        assert!(decide_qxor(&s));
    }

    #[test]
    fn contradictory_pair() {
        let s = inst("p qxor 0 3 2 0 2\n| 1 2 | 0\n| 1 2 | 1\n");
        assert!(!decide_xorsat(&s));
        assert!(!decide_qxor(&s));
    }

    #[test]
    fn maxrank_examples() {
        assert!(!decide_maxrank(&inst("p qxor 0 3 2 0 2\n| 1 2 | 0\n| 1 2 | 0\n")));
        assert!(decide_maxrank(&inst("p qxor 0 3 2 0 2\n| 1 2 | 0\n| 2 3 | 1\n")));
        assert!(brute_force_maxrank(&inst("p qxor 0 3 2 0 2\n| 1 2 | 0\n| 2 3 | 1\n")).unwrap());
    }

    #[test]
    fn oracle_guard() {
        let big = QxorInstance::empty(17, 2, 1, 2).unwrap();
        assert!(matches!(brute_force_decide(&big), Err(Error::Capability(_))));
        let big_n = QxorInstance::empty(1, 17, 1, 2).unwrap();
        assert!(matches!(brute_force_xorsat(&big_n), Err(Error::Capability(_))));
    }

    fn small_random(rng: &mut ChaCha8Rng) -> QxorInstance {
        let a = rng.gen_range(0..=2);
        let e = rng.gen_range(1..=3);
        let m = rng.gen_range(a.max(1)..=3).max(a);
        let n = rng.gen_range(e..=4);
        let l = rng.gen_range(0..=6);
        generate(&GenConfig { m, n, clauses: l, a, e, seed: rng.gen() }).unwrap()
    }

    #[test]
    fn engines_agree_with_oracles_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..5000 {
            let s = small_random(&mut rng);
            let v = analyze(&s);
            assert_eq!(v.qxor, brute_force_decide(&s).unwrap(), "{s}");
            assert_eq!(v.qxor, decide_qxor(&s));
            assert_eq!(v.xorsat, brute_force_xorsat(&s).unwrap(), "{s}");
            assert_eq!(v.maxrank, brute_force_maxrank(&s).unwrap(), "{s}");
            assert_eq!(v.maxrank, decide_maxrank(&s));
            assert!(v.is_ordered(), "{v:?} {s}");
        }
    }

    #[test]
    fn adding_clauses_never_makes_false_true() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let base = generate(&GenConfig { m: 4, n: 12, clauses: 0, a: 1, e: 2, seed: rng.gen() }).unwrap();
            let extra = generate(&GenConfig { m: 4, n: 12, clauses: 14, a: 1, e: 2, seed: rng.gen() }).unwrap();
            let mut chain = base;
            let mut was_false = false;
            for cl in extra.clauses() {
                chain.push(cl.clone()).unwrap();
                let now = decide_qxor(&chain);
                assert!(!(was_false && now), "{chain}");
                was_false |= !now;
            }
        }
    }

    #[test]
    fn invariant_under_clause_reordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let s = generate(&GenConfig { m: 3, n: 20, clauses: 18, a: 1, e: 3, seed: rng.gen() }).unwrap();
            let mut order: Vec<usize> = (0..s.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            assert_eq!(analyze(&s), analyze(&s.reordered(&order)));
        }
    }

    #[test]
    fn universal_only_constraint_is_false() {
        // Same y-pair, different x: together they demand x1 ⊕ x2 = 0 for all x.
        let mut s = QxorInstance::empty(2, 2, 1, 2).unwrap();
        s.push(Clause::new([1], [1, 2], false)).unwrap();
        s.push(Clause::new([2], [1, 2], false)).unwrap();
        assert!(!decide_qxor(&s));
        assert!(decide_xorsat(&s));
        assert!(!brute_force_decide(&s).unwrap());
    }
}
