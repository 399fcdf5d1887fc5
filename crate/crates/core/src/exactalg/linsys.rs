//! Homogeneous linear systems over ℚ and their exact solution spaces.
//!
//! Rows are cleared of denominators and kept primitive (content 1, leading
//! coefficient positive), then inserted into an incrementally maintained
//! reduced echelon form. Eliminations combine two integer rows and divide by
//! the content again, so no rational arithmetic happens until the basis is
//! read off.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{LinForm, Poly};
use super::rat::Rat;
use super::ExactError;

/// Labelled unknowns plus rows of linear forms required to vanish.
#[derive(Clone, Debug, Default)]
pub struct LinSystem {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
    rows: Vec<Vec<(usize, Rat)>>,
}

impl LinSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an unknown (or returns the existing index for this label).
    pub fn unknown(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        if let Some(&i) = self.lookup.get(&label) {
            return i;
        }
        let i = self.labels.len();
        self.lookup.insert(label.clone(), i);
        self.labels.push(label);
        i
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_unknowns(&self) -> usize {
        self.labels.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Rat)>] {
        &self.rows
    }

    pub fn add_row(&mut self, row: Vec<(usize, Rat)>) -> Result<(), ExactError> {
        if let Some((i, _)) = row.iter().find(|(i, _)| *i >= self.labels.len()) {
            return Err(ExactError::UndeclaredUnknown(*i));
        }
        let row: Vec<_> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !row.is_empty() {
            self.rows.push(row);
        }
        Ok(())
    }

    pub fn add_form(&mut self, f: &LinForm) -> Result<(), ExactError> {
        self.add_row(f.entries().map(|(i, c)| (i, c.clone())).collect())
    }

    /// Requires every coefficient of `p` to vanish.
    pub fn require_zero(&mut self, p: &Poly<LinForm>) -> Result<(), ExactError> {
        for (_, f) in p.terms() {
            self.add_form(f)?;
        }
        Ok(())
    }

    /// Residual of each row at a concrete assignment.
    pub fn residuals(&self, x: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(Rat::zero(), |a, (i, c)| a + c * &x[*i]))
            .collect()
    }
}

/// Exact basis of the solution set of a [`LinSystem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub labels: Vec<String>,
    pub basis: Vec<Vec<Rat>>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Labelled nonzero entries of one basis member.
    pub fn describe(&self, k: usize) -> BTreeMap<String, Rat> {
        self.basis[k]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.labels[i].clone(), c.clone()))
            .collect()
    }
}

/// Solves `sys` exactly. The dimension is `#unknowns - rank`.
pub fn nullspace(sys: &LinSystem) -> SolutionSpace {
    let mut ech = Echelon::new();
    for r in &sys.rows {
        ech.insert(r);
    }
    SolutionSpace {
        labels: sys.labels.clone(),
        basis: ech.kernel_basis(sys.num_unknowns()),
    }
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[Vec<Rat>]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        let row: Vec<(usize, Rat)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        ech.insert(&row);
    }
    ech.rank()
}

/// Rank of the vectors restricted to the listed coordinates.
pub fn rank_on(vectors: &[Vec<Rat>], coords: &[usize]) -> usize {
    let proj: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|v| coords.iter().map(|&i| v[i].clone()).collect())
        .collect();
    rank(&proj)
}

/// Members of `candidates` that extend the span of `base`, chosen greedily
/// in order, compared on `coords` only.
pub fn complement_on(base: &[Vec<Rat>], candidates: &[Vec<Rat>], coords: &[usize]) -> Vec<usize> {
    let mut ech = Echelon::new();
    let proj = |v: &Vec<Rat>| -> Vec<(usize, Rat)> {
        coords
            .iter()
            .enumerate()
            .filter(|(_, &i)| !v[i].is_zero())
            .map(|(k, &i)| (k, v[i].clone()))
            .collect()
    };
    for b in base {
        ech.insert(&proj(b));
    }
    let mut picked = Vec::new();
    for (n, c) in candidates.iter().enumerate() {
        if ech.insert(&proj(c)) {
            picked.push(n);
        }
    }
    picked
}

/// Sparse primitive integer row, sorted by column.
type IntRow = Vec<(usize, BigInt)>;

fn primitive(mut row: IntRow) -> IntRow {
    row.retain(|(_, c)| !c.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, c) in &row {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
    row
}

fn integer_row(row: &[(usize, Rat)]) -> IntRow {
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (i, c) in row {
        *acc.entry(*i).or_insert_with(Rat::zero) += c;
    }
    let mut l = BigInt::one();
    for c in acc.values() {
        l = l.lcm(c.denom());
    }
    primitive(
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, (c * BigRational::from_integer(l.clone())).to_integer()))
            .collect(),
    )
}

fn coeff_at(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(i, _)| *i)
        .ok()
        .map(|k| &row[k].1)
}

/// `a·x − b·y`, made primitive.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    primitive(out)
}

/// Reduced echelon form grown one row at a time.
struct Echelon {
    /// pivot column -> row whose only pivot-column entry is that column
    pivots: BTreeMap<usize, IntRow>,
    seen: HashSet<IntRow>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            seen: HashSet::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts a row; returns whether the rank grew.
    fn insert(&mut self, row: &[(usize, Rat)]) -> bool {
        let mut r = integer_row(row);
        if r.is_empty() || !self.seen.insert(r.clone()) {
            return false;
        }
        let hits: Vec<usize> = r
            .iter()
            .map(|(i, _)| *i)
            .filter(|i| self.pivots.contains_key(i))
            .collect();
        // Pivot rows carry no other pivot columns, so one pass suffices.
        for col in hits {
            let Some(rc) = coeff_at(&r, col).cloned() else {
                continue;
            };
            let p = &self.pivots[&col];
            let pc = coeff_at(p, col).expect("pivot entry");
            r = combine(pc, &r, &rc, p);
        }
        if r.is_empty() {
            return false;
        }
        let col = r[0].0;
        let rc = r[0].1.clone();
        for prow in self.pivots.values_mut() {
            if let Some(c) = coeff_at(prow, col).cloned() {
                *prow = combine(&rc, prow, &c, &r);
            }
        }
        self.pivots.insert(col, r);
        true
    }

    fn kernel_basis(&self, n: usize) -> Vec<Vec<Rat>> {
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains_key(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (&pc, row) in &self.pivots {
                if let Some(a) = coeff_at(row, f) {
                    let p = coeff_at(row, pc).expect("pivot entry");
                    v[pc] = -BigRational::new(a.clone(), p.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Finds one solution of the inhomogeneous system `rows · x = rhs` (one rhs
/// entry per stored row) by adding
/// a homogenizing unknown. Returns `None` when inconsistent.
pub fn solve_affine(sys: &LinSystem, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = sys.num_unknowns();
    let mut ech = Echelon::new();
    for (row, b) in sys.rows().iter().zip(rhs) {
        let mut r = row.clone();
        if !b.is_zero() {
            r.push((n, -b.clone()));
        }
        ech.insert(&r);
    }
    let basis = ech.kernel_basis(n + 1);
    let hit = basis.into_iter().find(|v| !v[n].is_zero())?;
    let t = hit[n].clone();
    Some(hit[..n].iter().map(|c| c / &t).collect())
}
