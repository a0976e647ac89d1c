//! Finite groups as explicit multiplication tables.
//!
//! Groups here are always concrete index tables (no presentations); builders
//! cover the cyclic groups and the small standard nonabelian groups used in
//! tests and coverings.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct GroupData {
    order: usize,
    /// row-major: `mult[a * order + b]` = index of a·b
    mult: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
    abelian: bool,
    name: Option<String>,
}

/// A finite group given by its multiplication table.
///
/// Construction validates the group laws: rows and columns must be
/// permutations, the identity and inverse laws must hold, and associativity
/// is checked on all triples for orders up to 64 (sampled above that).
#[derive(Clone)]
pub struct GroupTable(Arc<GroupData>);

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.order == other.0.order && self.0.mult == other.0.mult)
    }
}
impl Eq for GroupTable {}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.name {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "group of order {}", self.0.order),
        }
    }
}

const FULL_ASSOC_CHECK_MAX: usize = 64;

impl GroupTable {
    /// Build from an explicit table. `mult[a][b]` is the index of a·b.
    pub fn from_table(
        mult: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
        name: Option<String>,
    ) -> Result<GroupTable> {
        let g = mult.len();
        if g == 0 {
            return Err(Error::TableInvalid("empty table".into()));
        }
        for row in &mult {
            if row.len() != g || row.iter().any(|&v| v >= g) {
                return Err(Error::TableInvalid(
                    "table is not square or has bad indices".into(),
                ));
            }
        }
        let flat: Vec<usize> = mult.iter().flatten().copied().collect();
        Self::build(g, flat, labels, name)
    }

    fn build(
        order: usize,
        mult: Vec<usize>,
        labels: Option<Vec<String>>,
        name: Option<String>,
    ) -> Result<GroupTable> {
        let at = |a: usize, b: usize| mult[a * order + b];
        // rows and columns are permutations
        for a in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for b in 0..order {
                if std::mem::replace(&mut seen_row[at(a, b)], true) {
                    return Err(Error::TableInvalid(format!("row {a} is not a permutation")));
                }
                if std::mem::replace(&mut seen_col[at(b, a)], true) {
                    return Err(Error::TableInvalid(format!(
                        "column {a} is not a permutation"
                    )));
                }
            }
        }
        // identity
        let mut identity = None;
        for e in 0..order {
            if (0..order).all(|a| at(e, a) == a && at(a, e) == a) {
                identity = Some(e);
                break;
            }
        }
        let identity = identity.ok_or_else(|| Error::TableInvalid("no identity element".into()))?;
        // inverses
        let mut inverse = vec![0usize; order];
        for a in 0..order {
            let inv = (0..order).find(|&b| at(a, b) == identity && at(b, a) == identity);
            match inv {
                Some(b) => inverse[a] = b,
                None => return Err(Error::TableInvalid(format!("element {a} has no inverse"))),
            }
        }
        // associativity: full scan for small orders, deterministic sample above
        if order <= FULL_ASSOC_CHECK_MAX {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(Error::TableInvalid(format!(
                                "associativity fails on ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state as usize
            };
            for _ in 0..4096 {
                let (a, b, c) = (next() % order, next() % order, next() % order);
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::TableInvalid(format!(
                        "associativity fails on ({a}, {b}, {c})"
                    )));
                }
            }
        }
        let abelian = (0..order).all(|a| (0..order).all(|b| at(a, b) == at(b, a)));
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| format!("g{i}")).collect());
        if labels.len() != order {
            return Err(Error::TableInvalid(
                "label count does not match order".into(),
            ));
        }
        Ok(GroupTable(Arc::new(GroupData {
            order,
            mult,
            identity,
            inverse,
            labels,
            abelian,
            name,
        })))
    }

    /// C_r with generator labelled `s`.
    pub fn cyclic(r: usize) -> GroupTable {
        assert!(r >= 1);
        let mut mult = vec![0usize; r * r];
        for a in 0..r {
            for b in 0..r {
                mult[a * r + b] = (a + b) % r;
            }
        }
        let labels = (0..r)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "s".to_string(),
                i => format!("s^{i}"),
            })
            .collect();
        Self::build(r, mult, Some(labels), Some(format!("C{r}"))).expect("cyclic table is valid")
    }

    /// S₃ with normal form r^a s^b, r³ = s² = 1, s·r = r²·s.
    pub fn s3() -> GroupTable {
        Self::two_generator(3, 2, |a| (3 - a) % 3, "S3")
    }

    /// D₄ with normal form r^a s^b, r⁴ = s² = 1, s·r = r³·s.
    pub fn d4() -> GroupTable {
        Self::two_generator(4, 2, |a| (4 - a) % 4, "D4")
    }

    /// groups of shape ⟨r, s | r^n, s^2, s r = r^twist(1) s⟩ with index a + n·b
    fn two_generator(n: usize, _m: usize, twist: fn(usize) -> usize, name: &str) -> GroupTable {
        let order = 2 * n;
        let idx = |a: usize, b: usize| a + n * b;
        let mut mult = vec![0usize; order * order];
        for a in 0..n {
            for b in 0..2 {
                for c in 0..n {
                    for d in 0..2 {
                        // r^a s^b r^c s^d = r^{a + (c or twist(c))} s^{b+d}
                        let cc = if b == 1 { twist(c) } else { c };
                        let e = idx((a + cc) % n, (b + d) % 2);
                        mult[idx(a, b) * order + idx(c, d)] = e;
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(order);
        for b in 0..2 {
            for a in 0..n {
                let r = match a {
                    0 => String::new(),
                    1 => "r".to_string(),
                    a => format!("r^{a}"),
                };
                let s = if b == 1 { "s" } else { "" };
                let l = match (r.is_empty(), s.is_empty()) {
                    (true, true) => "1".to_string(),
                    (false, true) => r,
                    (true, false) => s.to_string(),
                    (false, false) => format!("{r}*{s}"),
                };
                labels.push(l);
            }
        }
        Self::build(order, mult, Some(labels), Some(name.into())).expect("table is valid")
    }

    /// The quaternion group Q₈ = {±1, ±i, ±j, ±k}.
    pub fn q8() -> GroupTable {
        // element = (sign, sym) with sym in {1, i, j, k}; index = sym*2 + sign
        let sym_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign flip, sym) for product of basis symbols
            match (a, b) {
                (0, x) => (0, x),
                (x, 0) => (0, x),
                (1, 1) => (1, 0),
                (2, 2) => (1, 0),
                (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let order = 8;
        let mut mult = vec![0usize; order * order];
        for sa in 0..2 {
            for a in 0..4 {
                for sb in 0..2 {
                    for b in 0..4 {
                        let (flip, sym) = sym_mul(a, b);
                        let sign = (sa + sb + flip) % 2;
                        mult[(a * 2 + sa) * order + (b * 2 + sb)] = sym * 2 + sign;
                    }
                }
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::build(order, mult, Some(labels), Some("Q8".into())).expect("table is valid")
    }

    /// Builder by symbolic name, for JSON shortcuts.
    pub fn by_name(name: &str) -> Result<GroupTable> {
        match name {
            "C1" => Ok(Self::cyclic(1)),
            "C2" => Ok(Self::cyclic(2)),
            "C3" => Ok(Self::cyclic(3)),
            "C4" => Ok(Self::cyclic(4)),
            "C5" => Ok(Self::cyclic(5)),
            "C6" => Ok(Self::cyclic(6)),
            "S3" => Ok(Self::s3()),
            "D4" => Ok(Self::d4()),
            "Q8" => Ok(Self::q8()),
            other => Err(Error::Invalid(format!("unknown group builder: {other}"))),
        }
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mult[a * self.0.order + b]
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.0.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.0.abelian
    }

    pub fn label(&self, a: usize) -> &str {
        &self.0.labels[a]
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn mult_rows(&self) -> Vec<Vec<usize>> {
        (0..self.0.order)
            .map(|a| (0..self.0.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Multiplicative order of element `a`.
    pub fn order_of(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.0.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// A generator, when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.0.order).find(|&a| self.order_of(a) == self.0.order)
    }

    /// Closure of a generating set under multiplication.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.0.order];
        in_set[self.0.identity] = true;
        let mut queue: Vec<usize> = vec![self.0.identity];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                queue.push(g);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                for y in [self.mul(x, g), self.mul(g, x)] {
                    if !in_set[y] {
                        in_set[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
        let mut v: Vec<usize> = (0..self.0.order).filter(|&i| in_set[i]).collect();
        v.sort_unstable();
        v
    }

    /// The commutator subgroup, generated by all a·b·a⁻¹·b⁻¹.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        for a in 0..self.0.order {
            for b in 0..self.0.order {
                let c = self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b)));
                if c != self.0.identity && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        self.subgroup_closure(&gens)
    }

    /// Quotient by a normal subgroup. Returns the quotient table and the map
    /// element → coset index. Coset representatives are the minimal indices,
    /// and cosets are ordered by representative.
    pub fn quotient(&self, normal: &[usize]) -> (GroupTable, Vec<usize>) {
        let g = self.0.order;
        let mut coset_of = vec![usize::MAX; g];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..g {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &n in normal {
                coset_of[self.mul(x, n)] = id;
            }
            // normality makes left and right cosets coincide
            debug_assert!(normal.iter().all(|&n| coset_of[self.mul(n, x)] == id));
        }
        let k = reps.len();
        let mut mult = vec![0usize; k * k];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mult[i * k + j] = coset_of[self.mul(a, b)];
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("[{}]", self.label(r)))
            .collect();
        let name = self.0.name.as_ref().map(|n| format!("{n}/N"));
        let q = GroupTable::build(k, mult, Some(labels), name).expect("quotient table is valid");
        (q, coset_of)
    }

    /// Abelianization G → G^ab (quotient by the commutator subgroup).
    pub fn abelianization(&self) -> (GroupTable, Vec<usize>) {
        let n = self.commutator_subgroup();
        self.quotient(&n)
    }
}
