//! Clauses, closed `∀X∃Y` instances, the `p qxor` text format, and the
//! matrix form `AX + EY = C`.
//!
//! Text format (line-oriented, `\n` line ends):
//!
//! ```text
//! c optional comment
//! p qxor <m> <n> <L> <a> <e>
//! <u_1> .. <u_a> | <v_1> .. <v_e> | <rhs>
//! ```
//!
//! Universal indices are in `1..=m`, existential in `1..=n`, `rhs` is 0 or 1.
//! The writer emits indices ascending; the parser accepts any order.

use std::fmt::{self, Write as _};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub type VarList = SmallVec<[u32; 4]>;

/// One XOR clause `x_{i1} ⊕ .. ⊕ x_{ia} ⊕ y_{j1} ⊕ .. ⊕ y_{je} = rhs`,
/// with 1-based variable indices stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    universal: VarList,
    existential: VarList,
    rhs: bool,
}

impl Clause {
    /// Sorts both blocks. Range and arity checks happen when the clause is
    /// placed in an instance.
    pub fn new(
        universal: impl IntoIterator<Item = u32>,
        existential: impl IntoIterator<Item = u32>,
        rhs: bool,
    ) -> Self {
        let mut universal: VarList = universal.into_iter().collect();
        let mut existential: VarList = existential.into_iter().collect();
        universal.sort_unstable();
        existential.sort_unstable();
        Clause {
            universal,
            existential,
            rhs,
        }
    }

    pub fn universal(&self) -> &[u32] {
        &self.universal
    }

    pub fn existential(&self) -> &[u32] {
        &self.existential
    }

    pub fn rhs(&self) -> bool {
        self.rhs
    }

    fn check(&self, dims: &Dims) -> std::result::Result<(), String> {
        check_block("universal", &self.universal, dims.a, dims.m)?;
        check_block("existential", &self.existential, dims.e, dims.n)
    }
}

fn check_block(name: &str, vars: &[u32], arity: usize, count: usize) -> std::result::Result<(), String> {
    if vars.len() != arity {
        return Err(format!(
            "{name} block has {} variables, expected {arity}",
            vars.len()
        ));
    }
    if let Some(&v) = vars.iter().find(|&&v| v == 0 || v as usize > count) {
        return Err(format!("{name} index {v} outside 1..={count}"));
    }
    // blocks are sorted, so duplicates are adjacent
    if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("duplicate {name} index {}", w[0]));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Dims {
    m: usize,
    n: usize,
    a: usize,
    e: usize,
}

impl Dims {
    fn validate(&self) -> std::result::Result<(), String> {
        if self.a > self.m {
            return Err(format!("a = {} exceeds m = {}", self.a, self.m));
        }
        if self.e == 0 {
            return Err("e must be at least 1".into());
        }
        if self.e > self.n {
            return Err(format!("e = {} exceeds n = {}", self.e, self.n));
        }
        if self.m > u32::MAX as usize || self.n > u32::MAX as usize {
            return Err("variable counts must fit in 32 bits".into());
        }
        Ok(())
    }
}

/// A closed formula `∀x_1..x_m ∃y_1..y_n` over a conjunction of `(a,e)` XOR clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QxorInstance {
    dims: Dims,
    clauses: Vec<Clause>,
}

impl QxorInstance {
    pub fn new(m: usize, n: usize, a: usize, e: usize, clauses: Vec<Clause>) -> Result<Self> {
        let dims = Dims { m, n, a, e };
        dims.validate().map_err(Error::InvalidInput)?;
        for (k, clause) in clauses.iter().enumerate() {
            clause
                .check(&dims)
                .map_err(|msg| Error::invalid(format!("clause {}: {msg}", k + 1)))?;
        }
        Ok(QxorInstance { dims, clauses })
    }

    /// Instance with no clauses (always true).
    pub fn empty(m: usize, n: usize, a: usize, e: usize) -> Result<Self> {
        QxorInstance::new(m, n, a, e, Vec::new())
    }

    pub(crate) fn from_parts_unchecked(m: usize, n: usize, a: usize, e: usize, clauses: Vec<Clause>) -> Self {
        let dims = Dims { m, n, a, e };
        debug_assert!(dims.validate().is_ok());
        debug_assert!(clauses.iter().all(|c| c.check(&dims).is_ok()));
        QxorInstance { dims, clauses }
    }

    pub fn m(&self) -> usize {
        self.dims.m
    }

    pub fn n(&self) -> usize {
        self.dims.n
    }

    pub fn a(&self) -> usize {
        self.dims.a
    }

    pub fn e(&self) -> usize {
        self.dims.e
    }

    /// Number of clauses, `L`.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Appends a clause after validating it against this instance's parameters.
    pub fn push(&mut self, clause: Clause) -> Result<()> {
        clause.check(&self.dims).map_err(Error::InvalidInput)?;
        self.clauses.push(clause);
        Ok(())
    }

    /// Same instance with clauses in a different order. `order` must be a
    /// permutation of `0..len()`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.clauses.len());
        QxorInstance {
            dims: self.dims,
            clauses: order.iter().map(|&i| self.clauses[i].clone()).collect(),
        }
    }

    /// `(A, E, C)` with row `k` of `A`/`E` holding clause `k`'s universal and
    /// existential variables and `C[k]` its right-hand side.
    pub fn to_matrices(&self) -> (BitMatrix, BitMatrix, Vec<bool>) {
        let l = self.clauses.len();
        let mut a = BitMatrix::zeros(l, self.dims.m);
        let mut e = BitMatrix::zeros(l, self.dims.n);
        let mut c = Vec::with_capacity(l);
        for (k, clause) in self.clauses.iter().enumerate() {
            for &x in &clause.universal {
                a.set(k, x as usize - 1, true);
            }
            for &y in &clause.existential {
                e.set(k, y as usize - 1, true);
            }
            c.push(clause.rhs);
        }
        (a, e, c)
    }

    /// Parses the `p qxor` text format. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dims: Option<(Dims, usize)> = None;
        let mut clauses = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            last_line = lineno;
            let line = raw.trim();
            if line.is_empty() || line == "c" || line.starts_with("c ") || line.starts_with("c\t") {
                continue;
            }
            if line.starts_with('p') {
                if dims.is_some() {
                    return Err(Error::parse(lineno, "duplicate header"));
                }
                dims = Some(parse_header(line).map_err(|msg| Error::parse(lineno, msg))?);
                continue;
            }
            let Some((d, expected)) = dims else {
                return Err(Error::parse(lineno, "clause before `p qxor` header"));
            };
            if clauses.len() == expected {
                return Err(Error::parse(
                    lineno,
                    format!("more clauses than the {expected} declared in the header"),
                ));
            }
            let clause = parse_clause(line).map_err(|msg| Error::parse(lineno, msg))?;
            clause.check(&d).map_err(|msg| Error::parse(lineno, msg))?;
            clauses.push(clause);
        }
        let Some((d, expected)) = dims else {
            return Err(Error::parse(last_line.max(1), "missing `p qxor` header"));
        };
        if clauses.len() != expected {
            return Err(Error::parse(
                last_line.max(1),
                format!(
                    "header declares {expected} clauses, found {}",
                    clauses.len()
                ),
            ));
        }
        Ok(QxorInstance { dims: d, clauses })
    }

    /// Canonical text: header then one clause per line, indices ascending.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QxorInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Dims { m, n, a, e } = self.dims;
        writeln!(f, "p qxor {m} {n} {} {a} {e}", self.clauses.len())?;
        let mut line = String::new();
        for clause in &self.clauses {
            line.clear();
            for u in &clause.universal {
                write!(line, "{u} ")?;
            }
            line.push('|');
            for v in &clause.existential {
                write!(line, " {v}")?;
            }
            write!(line, " | {}", u8::from(clause.rhs))?;
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn parse_header(line: &str) -> std::result::Result<(Dims, usize), String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 7 || tokens[0] != "p" || tokens[1] != "qxor" {
        return Err(format!("malformed header {line:?}, expected `p qxor m n L a e`"));
    }
    let mut nums = [0usize; 5];
    for (slot, tok) in nums.iter_mut().zip(&tokens[2..]) {
        *slot = tok
            .parse()
            .map_err(|_| format!("header field {tok:?} is not a non-negative integer"))?;
    }
    let [m, n, l, a, e] = nums;
    let dims = Dims { m, n, a, e };
    dims.validate()?;
    Ok((dims, l))
}

fn parse_clause(line: &str) -> std::result::Result<Clause, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let bars: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == "|")
        .map(|(i, _)| i)
        .collect();
    let [first, second] = bars[..] else {
        return Err(format!(
            "clause needs exactly two `|` separators, found {}",
            bars.len()
        ));
    };
    let parse_vars = |toks: &[&str]| -> std::result::Result<VarList, String> {
        toks.iter()
            .map(|t| t.parse::<u32>().map_err(|_| format!("bad variable index {t:?}")))
            .collect()
    };
    let universal = parse_vars(&tokens[..first])?;
    let existential = parse_vars(&tokens[first + 1..second])?;
    let rhs = match &tokens[second + 1..] {
        ["0"] => false,
        ["1"] => true,
        other => return Err(format!("right-hand side must be a single 0 or 1, got {other:?}")),
    };
    Ok(Clause::new(universal, existential, rhs))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The eight equations of the worked example over x1..x3, y1..y7, in canonical form.
    pub(crate) const WORKED_EXAMPLE: &str = "\
c y1+y2=x1, y2+y3=x3, y3+y4=x2+1, y4+y5=x3+1, y1+y7=x2, y2+y6=x2+1, y3+y5=x3, y6+y7=x1+1
p qxor 3 7 8 1 2
1 | 1 2 | 0
3 | 2 3 | 0
2 | 3 4 | 1
3 | 4 5 | 1
2 | 1 7 | 0
2 | 2 6 | 1
3 | 3 5 | 0
1 | 6 7 | 1
";

    pub(crate) fn worked_example() -> QxorInstance {
        QxorInstance::parse(WORKED_EXAMPLE).unwrap()
    }

    #[test]
    fn parses_worked_example() {
        let inst = worked_example();
        assert_eq!((inst.m(), inst.n(), inst.len(), inst.a(), inst.e()), (3, 7, 8, 1, 2));
        let third = &inst.clauses()[2];
        assert_eq!(third.universal(), &[2]);
        assert_eq!(third.existential(), &[3, 4]);
        assert!(third.rhs());
    }

    #[test]
    fn serializes_worked_example() {
        let text = worked_example().serialize();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "p qxor 3 7 8 1 2");
        assert_eq!(lines[3], "2 | 3 4 | 1");
        assert_eq!(QxorInstance::parse(&text).unwrap(), worked_example());
    }

    #[test]
    fn empty_instance() {
        let inst = QxorInstance::parse("p qxor 1 2 0 1 2\n").unwrap();
        assert!(inst.is_empty());
        assert_eq!(inst.serialize(), "p qxor 1 2 0 1 2\n");
        let (a, e, c) = inst.to_matrices();
        assert_eq!((a.rows(), a.cols(), e.rows(), e.cols(), c.len()), (0, 1, 0, 2, 0));
    }

    #[test]
    fn pure_xor_lines_start_with_bar() {
        let inst = QxorInstance::parse("p qxor 0 3 1 0 2\n| 3 1 | 1\n").unwrap();
        assert_eq!(inst.clauses()[0].existential(), &[1, 3]);
        assert_eq!(inst.serialize(), "p qxor 0 3 1 0 2\n| 1 3 | 1\n");
    }

    #[test]
    fn parser_accepts_any_index_order() {
        let inst = QxorInstance::parse("p qxor 3 4 1 2 2\n3 1 | 4 2 | 0\n").unwrap();
        assert_eq!(inst.serialize(), "p qxor 3 4 1 2 2\n1 3 | 2 4 | 0\n");
    }

    fn parse_err(text: &str) -> (usize, String) {
        match QxorInstance::parse(text) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let (line, msg) = parse_err("p qxor 1 2 1 1 2\n1 | 2 2 | 0\n");
        assert_eq!(line, 2);
        assert!(msg.contains("duplicate"), "{msg}");

        let (line, _) = parse_err("c hi\np qxor 1 2 x 1 2\n");
        assert_eq!(line, 2);

        let (line, msg) = parse_err("p qxor 1 2 1 1 2\n1 | 1 3 | 0\n");
        assert_eq!(line, 2);
        assert!(msg.contains("outside"), "{msg}");

        let (_, msg) = parse_err("p qxor 2 3 1 1 2\n1 2 | 1 3 | 0\n");
        assert!(msg.contains("expected 1"), "{msg}");

        let (line, msg) = parse_err("p qxor 1 2 2 1 2\n1 | 1 2 | 0\n");
        assert_eq!(line, 2);
        assert!(msg.contains("declares 2"), "{msg}");

        let (line, msg) = parse_err("p qxor 1 2 1 1 2\n1 | 1 2 | 0\n1 | 1 2 | 1\n");
        assert_eq!(line, 3);
        assert!(msg.contains("more clauses"), "{msg}");

        let (_, msg) = parse_err("p qxor 1 2 1 1 2\n1 | 1 2 | 2\n");
        assert!(msg.contains("0 or 1"), "{msg}");

        let (_, msg) = parse_err("p qxor 1 2 1 1 2\n1 1 2 | 0\n");
        assert!(msg.contains("separators"), "{msg}");

        let (_, msg) = parse_err("p qxor 1 2 0 2 2\n");
        assert!(msg.contains("exceeds"), "{msg}");

        parse_err("1 | 1 2 | 0\n");
        parse_err("");
    }

    #[test]
    fn to_matrices_single_clause() {
        let inst = QxorInstance::parse("p qxor 1 2 1 1 2\n1 | 1 2 | 0\n").unwrap();
        let (a, e, c) = inst.to_matrices();
        assert_eq!(a, BitMatrix::from_strs(&["1"]).unwrap());
        assert_eq!(e, BitMatrix::from_strs(&["11"]).unwrap());
        assert_eq!(c, vec![false]);
    }

    #[test]
    fn to_matrices_worked_example_row() {
        let (a, e, c) = worked_example().to_matrices();
        // y3 ⊕ y4 = x2 ⊕ 1, canonical x2 ⊕ y3 ⊕ y4 = 1
        assert!(a.get(2, 1) && a.count_ones(2) == 1);
        assert!(e.get(2, 2) && e.get(2, 3) && e.count_ones(2) == 2);
        assert!(c[2]);
        for r in 0..8 {
            assert_eq!(a.count_ones(r), 1);
            assert_eq!(e.count_ones(r), 2);
        }
    }

    #[test]
    fn duplicate_clauses_are_kept() {
        let inst = QxorInstance::parse("p qxor 1 2 2 1 2\n1 | 1 2 | 0\n1 | 1 2 | 0\n").unwrap();
        assert_eq!(inst.len(), 2);
    }

    #[test]
    fn push_validates() {
        let mut inst = QxorInstance::empty(2, 3, 1, 2).unwrap();
        inst.push(Clause::new([2], [3, 1], true)).unwrap();
        assert!(inst.push(Clause::new([3], [1, 2], true)).is_err());
        assert!(inst.push(Clause::new([1], [1], true)).is_err());
        assert!(QxorInstance::empty(1, 2, 0, 0).is_err());
    }
}
