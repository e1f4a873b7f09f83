//! A brute-force oracle at p = 2: the normalized bar complex
//! `Bar_•(id, Poly_R, M)` for the trivial algebra on one class, its
//! homology over F_2 in each (degree, weight) cell, and the comparison with
//! the admissible dual words counted by `unstable_ext_basis`.
//!
//! Level `s` is `Poly_R^s(M)`, spanned by nested monomials: the outermost
//! monomial has as atoms monomials one level down, and so on to the
//! generator. The faces are the augmentation on the outer layer, the monad
//! multiplication on each adjacent pair of layers and the trivial action on
//! the innermost layer. Degenerate nested monomials (some layer consisting
//! only of bare atoms) span the image of the degeneracies and are dropped.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dual::{unstable_ext_basis, Variant};
use crate::error::{Error, Result};
use crate::fp::{LinComb, Prime};
use crate::par::Exec;
use crate::primal::{
    monomials_in_cell, polyr_monad_mult, Atom, Factor, Gen, Monomial, NestedAtom, PolyEval,
};

const P2: Prime = Prime::two();

/// Default memory budget in MiB when `PARTITION_OPS_MEM_MB` is unset.
pub const DEFAULT_MEM_MB: u64 = 2048;

/// An element of some level of the bar construction: the generator, or a
/// monomial whose atoms live one level down.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BarNode {
    Gen(Gen),
    Mono(Box<Monomial<BarNode>>),
}

impl Atom for BarNode {
    fn degree(&self) -> i64 {
        match self {
            BarNode::Gen(g) => g.degree,
            BarNode::Mono(m) => m.degree(),
        }
    }

    fn weight(&self) -> u64 {
        match self {
            BarNode::Gen(_) => 1,
            BarNode::Mono(m) => m.weight(),
        }
    }
}

impl BarNode {
    fn mono(m: Monomial<BarNode>) -> Self {
        BarNode::Mono(Box::new(m))
    }

    /// Whether every monomial at `depth` (1 = outermost) is a bare atom.
    fn bare_at(&self, depth: usize) -> bool {
        match self {
            BarNode::Gen(_) => false,
            BarNode::Mono(m) => {
                if depth == 1 {
                    m.as_atom().is_some()
                } else {
                    m.factors.iter().all(|f| f.atom.bare_at(depth - 1))
                }
            }
        }
    }

    /// Whether the element at level `s` lies in the image of a degeneracy.
    pub fn is_degenerate(&self, s: usize) -> bool {
        (1..=s).any(|k| self.bare_at(k))
    }

    /// Writes the element with the generator as `x` and `Q` words.
    pub fn show(&self) -> String {
        match self {
            BarNode::Gen(_) => "x".to_string(),
            BarNode::Mono(m) => {
                let parts: Vec<String> = m
                    .factors
                    .iter()
                    .map(|f| {
                        let inner = f.atom.show();
                        if f.word.is_empty() {
                            inner
                        } else {
                            let w: Vec<String> = f.word.iter().map(|i| format!("Q{i}")).collect();
                            format!("{} {inner}", w.join(" "))
                        }
                    })
                    .collect();
                format!("({})", parts.join("·"))
            }
        }
    }
}

/// A sparse matrix over F_2 as bit rows.
#[derive(Clone, Debug)]
pub struct SparseMatrixF2 {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<Vec<u64>>,
}

impl SparseMatrixF2 {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrixF2 {
            rows,
            cols,
            bits: vec![vec![0; cols.div_ceil(64)]; rows],
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.bits[r][c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.bits.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &SparseMatrixF2) -> SparseMatrixF2 {
        let mut out = SparseMatrixF2::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for (x, y) in out.bits[r].iter_mut().zip(&other.bits[k]) {
                        *x ^= y;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|r| r.iter().all(|&w| w == 0))
    }
}

/// The normalized complex in one (degree, weight) cell.
#[derive(Clone, Debug)]
pub struct BarCell {
    pub degree: i64,
    pub weight: u64,
    /// Nondegenerate basis at each level.
    pub levels: Vec<Vec<BarNode>>,
    /// `boundaries[s]` maps level `s` to level `s - 1` (empty at `s = 0`).
    pub boundaries: Vec<SparseMatrixF2>,
}

impl BarCell {
    pub fn homology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(SparseMatrixF2::rank).collect();
        (0..self.levels.len())
            .map(|s| {
                let out = if s == 0 { 0 } else { ranks[s] };
                let inc = ranks.get(s + 1).copied().unwrap_or(0);
                self.levels[s].len() - out - inc
            })
            .collect()
    }

    /// Whether every composite of consecutive boundaries vanishes.
    pub fn boundary_squares_zero(&self) -> bool {
        (2..self.boundaries.len()).all(|s| self.boundaries[s - 1].mul(&self.boundaries[s]).is_zero())
    }
}

/// Builds the bar complex for a trivial algebra on one class of degree `j`.
pub struct BarBuilder {
    j: i64,
    eval: PolyEval<BarNode>,
    cache: Vec<HashMap<(i64, u64), Vec<BarNode>>>,
    budget_bytes: u64,
    used_bytes: u64,
}

impl BarBuilder {
    pub fn new(j: i64) -> Self {
        let mb = std::env::var("PARTITION_OPS_MEM_MB")
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .unwrap_or(DEFAULT_MEM_MB);
        BarBuilder::with_budget(j, mb)
    }

    pub fn with_budget(j: i64, mem_mb: u64) -> Self {
        BarBuilder {
            j,
            eval: PolyEval::new(),
            cache: Vec::new(),
            budget_bytes: mem_mb.saturating_mul(1 << 20),
            used_bytes: 0,
        }
    }

    fn charge(&mut self, bytes: u64) -> Result<()> {
        self.used_bytes += bytes;
        if self.used_bytes > self.budget_bytes {
            return Err(Error::Resource(format!(
                "bar complex exceeds the memory budget of {} MiB",
                self.budget_bytes >> 20
            )));
        }
        Ok(())
    }

    /// All basis elements of level `s` (degenerate ones included).
    pub fn basis(&mut self, s: usize, d: i64, w: u64) -> Result<Vec<BarNode>> {
        if s == 0 {
            let g = Gen { id: 0, degree: self.j };
            return Ok(if w == 1 && d == self.j {
                vec![BarNode::Gen(g)]
            } else {
                Vec::new()
            });
        }
        while self.cache.len() <= s {
            self.cache.push(HashMap::new());
        }
        if let Some(v) = self.cache[s].get(&(d, w)) {
            return Ok(v.clone());
        }
        let mut err = None;
        let j = self.j;
        let monos = {
            let mut atoms = |dd: i64, ww: u64| -> Vec<BarNode> {
                match self.basis(s - 1, dd, ww) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        Vec::new()
                    }
                }
            };
            monomials_in_cell(d, w, j, &mut atoms)
        };
        if let Some(e) = err {
            return Err(e);
        }
        let out: Vec<BarNode> = monos.into_iter().map(BarNode::mono).collect();
        self.charge(out.len() as u64 * 64 * (s as u64 + 1))?;
        self.cache[s].insert((d, w), out.clone());
        Ok(out)
    }

    /// Applies `f` to every node at `depth` (1 = the node itself), extending
    /// through the outer layers by functoriality.
    fn at_depth(
        &mut self,
        x: &BarNode,
        depth: usize,
        f: &mut dyn FnMut(&mut Self, &BarNode) -> Result<LinComb<BarNode>>,
    ) -> Result<LinComb<BarNode>> {
        if depth == 1 {
            return f(self, x);
        }
        let BarNode::Mono(m) = x else {
            return Err(Error::InvalidWord("bar element shallower than its level".into()));
        };
        let mut acc: LinComb<Vec<Factor<BarNode>>> = LinComb::single(P2, Vec::new());
        for fac in &m.factors {
            let img = self.at_depth(&fac.atom, depth - 1, f)?;
            let mut next = LinComb::zero(P2);
            for (prefix, _) in acc.iter() {
                for (a, _) in img.iter() {
                    let mut v = prefix.clone();
                    v.push(Factor {
                        word: fac.word.clone(),
                        atom: a.clone(),
                    });
                    next.add_term(v, 1);
                }
            }
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        let mut out = LinComb::zero(P2);
        for (fs, _) in acc.iter() {
            out.add_term(BarNode::mono(Monomial::new(fs.clone())), 1);
        }
        Ok(out)
    }

    /// Face `d_i` on an element of level `s`.
    pub fn face(&mut self, x: &BarNode, s: usize, i: usize) -> Result<LinComb<BarNode>> {
        let augment = |_: &mut Self, n: &BarNode| -> Result<LinComb<BarNode>> {
            Ok(match n {
                BarNode::Mono(m) => match m.as_atom() {
                    Some(a) => LinComb::single(P2, a.clone()),
                    None => LinComb::zero(P2),
                },
                BarNode::Gen(_) => LinComb::zero(P2),
            })
        };
        if i == 0 {
            return self.at_depth(x, 1, &mut { augment });
        }
        if i == s {
            return self.at_depth(x, s, &mut { augment });
        }
        let mut mult = |b: &mut Self, n: &BarNode| -> Result<LinComb<BarNode>> {
            let BarNode::Mono(m) = n else {
                return Err(Error::InvalidWord("bar element shallower than its level".into()));
            };
            let factors = m
                .factors
                .iter()
                .map(|f| match &f.atom {
                    BarNode::Mono(inner) => Ok(Factor {
                        word: f.word.clone(),
                        atom: NestedAtom((**inner).clone()),
                    }),
                    BarNode::Gen(_) => Err(Error::InvalidWord("bar element shallower than its level".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            let nested = Monomial::new(factors);
            let poly = polyr_monad_mult(&mut b.eval, &nested)?;
            Ok(poly.map_keys(BarNode::mono))
        };
        self.at_depth(x, i, &mut mult)
    }

    /// The normalized boundary of a level-`s` element: the sum of all faces
    /// with degenerate terms dropped.
    pub fn boundary(&mut self, x: &BarNode, s: usize) -> Result<LinComb<BarNode>> {
        let mut out = LinComb::zero(P2);
        for i in 0..=s {
            out.add_assign(&self.face(x, s, i)?);
        }
        Ok(LinComb::from_terms(
            P2,
            out.into_terms().filter(|(n, _)| !n.is_degenerate(s - 1)),
        ))
    }

    /// The nondegenerate basis of every level in the cell `(d, w)`.
    pub fn levels(&mut self, d: i64, w: u64) -> Result<Vec<Vec<BarNode>>> {
        // a nondegenerate element at level s has weight at least s + 1
        let top = if w == 1 { 0 } else { w as usize - 1 };
        (0..=top)
            .map(|s| {
                Ok(self
                    .basis(s, d, w)?
                    .into_iter()
                    .filter(|n| !n.is_degenerate(s))
                    .collect())
            })
            .collect()
    }

    /// Assembles the boundary matrices on the given level bases.
    pub fn assemble(&mut self, d: i64, w: u64, levels: Vec<Vec<BarNode>>) -> Result<BarCell> {
        let mut boundaries = vec![SparseMatrixF2::zero(0, levels[0].len())];
        for s in 1..levels.len() {
            let index: HashMap<&BarNode, usize> =
                levels[s - 1].iter().enumerate().map(|(k, n)| (n, k)).collect();
            let (rows, cols) = (levels[s - 1].len(), levels[s].len());
            self.charge((rows as u64 * cols.div_ceil(64) as u64 * 8).max(1))?;
            let mut m = SparseMatrixF2::zero(rows, cols);
            for (c, x) in levels[s].iter().enumerate() {
                for (y, _) in self.boundary(x, s)?.iter() {
                    let r = *index.get(y).ok_or_else(|| {
                        Error::InvalidWord(format!("boundary term {} outside the basis", y.show()))
                    })?;
                    m.toggle(r, c);
                }
            }
            boundaries.push(m);
        }
        Ok(BarCell {
            degree: d,
            weight: w,
            levels,
            boundaries,
        })
    }

    /// The normalized complex in the cell `(d, w)`.
    pub fn cell(&mut self, d: i64, w: u64) -> Result<BarCell> {
        let levels = self.levels(d, w)?;
        self.assemble(d, w, levels)
    }
}

/// The normalized bar complex on one class of degree `j`, one block per
/// (degree, weight) cell with degree in `[lo, hi]` and weight up to `weight_cap`.
pub fn build_bar_complex(j: i64, weight_cap: u64, lo: i64, hi: i64) -> Result<Vec<BarCell>> {
    if !(1..=4).contains(&weight_cap) {
        return Err(Error::UnsupportedRelation(format!("bar weight cap {weight_cap} outside 1..=4")));
    }
    let mut b = BarBuilder::new(j);
    (1..=weight_cap)
        .flat_map(|w| (lo..=hi).map(move |d| (d, w)))
        .map(|(d, w)| b.cell(d, w))
        .collect()
}

/// One cell of the comparison: bar homology against admissible dual words,
/// per filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellComparison {
    pub degree: i64,
    pub weight: u64,
    pub bar: Vec<usize>,
    pub ext: Vec<usize>,
    pub boundary_squares_zero: bool,
}

impl CellComparison {
    pub fn agrees(&self) -> bool {
        let n = self.bar.len().max(self.ext.len());
        let at = |v: &Vec<usize>, s: usize| v.get(s).copied().unwrap_or(0);
        self.boundary_squares_zero && (0..n).all(|s| at(&self.bar, s) == at(&self.ext, s))
    }
}

/// Compares bar homology with the admissible dual words on the dual class
/// (internal degree `-j`) in every cell of degrees `[lo, hi]` and weights
/// up to `weight_cap`. A dual word of length `s` and internal degree `t`
/// matches bar level `s` in degree `-t`.
pub fn compare_with_e2(j: i64, weight_cap: u64, lo: i64, hi: i64, exec: Exec) -> Result<Vec<CellComparison>> {
    let letters = {
        let mut k = 0;
        while (1u64 << (k + 1)) <= weight_cap {
            k += 1;
        }
        k
    };
    let mut ext: BTreeMap<(i64, u64), Vec<usize>> = BTreeMap::new();
    // total target is -len - degree
    for w in unstable_ext_basis(P2, -j, Variant::Full, letters, -hi - letters as i64, -lo) {
        let (s, t) = w.target();
        let d = -t;
        if d < lo || d > hi || w.weight() > weight_cap {
            continue;
        }
        let v = ext.entry((d, w.weight())).or_default();
        let s = (-s) as usize;
        if v.len() <= s {
            v.resize(s + 1, 0);
        }
        v[s] += 1;
    }
    let cells: Vec<(i64, u64)> = (1..=weight_cap)
        .flat_map(|w| (lo..=hi).map(move |d| (d, w)))
        .collect();
    let budget = std::env::var("PARTITION_OPS_MEM_MB")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(DEFAULT_MEM_MB);
    // each worker gets its own share of the budget
    let share = budget / exec.workers() as u64;
    let ext = &ext;
    let parts = exec.try_map(cells, |(d, w)| -> Result<CellComparison> {
        let mut b = BarBuilder::with_budget(j, share);
        let cell = b.cell(d, w)?;
        let mut bar = cell.homology();
        while bar.last() == Some(&0) {
            bar.pop();
        }
        let mut e = ext.get(&(d, w)).cloned().unwrap_or_default();
        while e.last() == Some(&0) {
            e.pop();
        }
        Ok(CellComparison {
            degree: d,
            weight: w,
            bar,
            ext: e,
            boundary_squares_zero: cell.boundary_squares_zero(),
        })
    })?;
    Ok(parts)
}

/// Homology dimensions per (degree, weight), summed over levels.
pub fn homology_dims(cells: &[CellComparison]) -> BTreeMap<(i64, u64), usize> {
    cells
        .iter()
        .map(|c| ((c.degree, c.weight), c.bar.iter().sum()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_one_and_two() {
        let mut b = BarBuilder::new(1);
        let c = b.cell(1, 1).unwrap();
        assert_eq!(c.homology(), vec![1]);
        // weight 2: x·x in degree 2, Q^i x in degree 1 + i for i >= 2
        for d in 2..8 {
            let c = b.cell(d, 2).unwrap();
            assert_eq!(c.homology(), vec![0, 1], "degree {d}");
            assert!(c.boundary_squares_zero());
        }
        assert_eq!(b.cell(1, 2).unwrap().homology(), vec![0, 0]);
    }

    #[test]
    fn weight_three_vanishes() {
        let mut b = BarBuilder::new(0);
        for d in 0..8 {
            let c = b.cell(d, 3).unwrap();
            assert!(c.homology().iter().all(|&h| h == 0), "degree {d}: {:?}", c.homology());
            assert!(c.boundary_squares_zero());
        }
    }

    #[test]
    fn rank_examples() {
        let mut m = SparseMatrixF2::zero(3, 3);
        m.toggle(0, 0);
        m.toggle(1, 0);
        m.toggle(2, 1);
        assert_eq!(m.rank(), 2);
        m.toggle(2, 2);
        m.toggle(0, 2);
        assert_eq!(m.rank(), 3);
        assert!(SparseMatrixF2::zero(2, 5).is_zero());
    }

    #[test]
    fn budget_is_enforced() {
        let mut b = BarBuilder::with_budget(0, 0);
        assert!(matches!(b.cell(4, 4), Err(Error::Resource(_))));
    }
}
