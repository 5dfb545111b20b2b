//! Class alphabets, partial products, and normal-form buffer words.
//!
//! The buffering mechanism of a zero-automatic queue is a partial product on
//! a finite alphabet `Σ`: the product of two letters is either the unit
//! (cancellation), another letter (merge), or falls outside `Σ ∪ {1}`
//! (no interaction). Words with no adjacent interacting pair are *normal
//! forms* and represent buffer contents. [`PairSpec`] holds the alphabet and
//! product table, either built from a free product of standard factors
//! ([`build_pair`](PairSpec::build_pair)) or from an explicit table
//! ([`build_custom`](PairSpec::build_custom)).

use crate::{Error, Result};
use std::fmt;

/// Index of a generator within a [`PairSpec`] alphabet.
///
/// Identifiers are dense indices `0..|Σ|`; the owning `PairSpec` maps them to
/// their symbolic labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId(pub u32);

impl GeneratorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Outcome of multiplying two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// The product is the unit: both letters vanish.
    Identity,
    /// The product is another generator: the letters merge.
    Letter(GeneratorId),
    /// The product leaves `Σ ∪ {1}`: the letters stand side by side.
    Irreducible,
}

/// One factor of a free product.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorSpec {
    /// A free monoid on the given letters: nothing ever reduces.
    FreeMonoid { letters: Vec<String> },
    /// A free group on the given letters; formal inverses are added with a
    /// `^-1` suffix and cancel against their partners.
    FreeGroup { letters: Vec<String> },
    /// A finite monoid given by its full multiplication table (row-major,
    /// entries are element labels). Elements include the unit, which is
    /// detected from the table and stripped from the alphabet.
    FiniteMonoid {
        elements: Vec<String>,
        table: Vec<Vec<String>>,
    },
}

/// Why a pair built from factors is not covered by the plain-triple theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcludedCase {
    /// The factor list is a single one-generator free group.
    IsomorphicToZ,
    /// The factor list is exactly two order-2 groups.
    IsomorphicToZ2StarZ2,
}

/// A word in normal form, stored in multiplication order.
///
/// Index `0` is the back-end of the buffer (where arrivals interact) and the
/// last index is the front-end (where services remove customers). Every
/// adjacent pair multiplies to something outside `Σ ∪ {1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BufferWord(pub Vec<GeneratorId>);

impl BufferWord {
    pub fn empty() -> Self {
        BufferWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Back-end letter (arrival side), if any.
    pub fn back_end(&self) -> Option<GeneratorId> {
        self.0.first().copied()
    }

    /// Front-end letter (service side), if any.
    pub fn front_end(&self) -> Option<GeneratorId> {
        self.0.last().copied()
    }
}

impl From<Vec<GeneratorId>> for BufferWord {
    fn from(v: Vec<GeneratorId>) -> Self {
        BufferWord(v)
    }
}

/// An alphabet together with its partial product and neighbor sets.
///
/// `right(a)` collects the letters `b` with `a*b` irreducible and `left(a)`
/// those with `b*a` irreducible; for pairs built from factors the two always
/// coincide (the common set is written `next`). The table is immutable after
/// construction, so a `PairSpec` can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct PairSpec {
    labels: Vec<String>,
    table: Vec<Reduction>,
    left: Vec<Vec<GeneratorId>>,
    right: Vec<Vec<GeneratorId>>,
    is_plain: bool,
    excluded_case: Option<ExcludedCase>,
    /// All pairs `(b, d)` with `b*d = 1`, precomputed for the solvers.
    identity_pairs: Vec<(GeneratorId, GeneratorId)>,
    /// All triples `(b, d, c)` with `b*d = c in Σ`.
    letter_products: Vec<(GeneratorId, GeneratorId, GeneratorId)>,
}

impl PairSpec {
    /// Builds the pair of a free product of factors with its natural
    /// generators.
    ///
    /// Products are assembled factor by factor: letters of one finite monoid
    /// multiply through its table (unit results cancel), a free-group letter
    /// cancels against its inverse, and every other combination — free-monoid
    /// letters, distinct-factor letters, a group letter against itself — is
    /// irreducible.
    pub fn build_pair(factors: &[FactorSpec]) -> Result<PairSpec> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }

        // Per-letter factor membership and, for reducible factors, the local
        // product: None encodes the factor unit.
        let mut labels: Vec<String> = Vec::new();
        let mut factor_of: Vec<usize> = Vec::new();
        enum Local {
            Free,
            GroupPair { inverse: usize },
            Finite { base: usize, prod: Vec<Vec<Option<usize>>> },
        }
        let mut locals: Vec<Local> = Vec::new();

        for (fi, factor) in factors.iter().enumerate() {
            match factor {
                FactorSpec::FreeMonoid { letters } => {
                    if letters.is_empty() {
                        return Err(Error::EmptyFactor(fi));
                    }
                    for l in letters {
                        labels.push(l.clone());
                        factor_of.push(fi);
                        locals.push(Local::Free);
                    }
                }
                FactorSpec::FreeGroup { letters } => {
                    if letters.is_empty() {
                        return Err(Error::EmptyFactor(fi));
                    }
                    for l in letters {
                        let i = labels.len();
                        labels.push(l.clone());
                        labels.push(format!("{l}^-1"));
                        factor_of.push(fi);
                        factor_of.push(fi);
                        locals.push(Local::GroupPair { inverse: i + 1 });
                        locals.push(Local::GroupPair { inverse: i });
                    }
                }
                FactorSpec::FiniteMonoid { elements, table } => {
                    let (non_unit, prod) = reduce_finite_monoid(fi, elements, table)?;
                    if non_unit.is_empty() {
                        return Err(Error::EmptyFactor(fi));
                    }
                    let base = labels.len();
                    for l in &non_unit {
                        labels.push(l.clone());
                        factor_of.push(fi);
                        locals.push(Local::Finite {
                            base,
                            prod: prod.clone(),
                        });
                    }
                }
            }
        }

        check_unique_labels(&labels)?;
        let n = labels.len();

        let mut table = vec![Reduction::Irreducible; n * n];
        for i in 0..n {
            for j in 0..n {
                if factor_of[i] != factor_of[j] {
                    continue;
                }
                let red = match (&locals[i], &locals[j]) {
                    (Local::Free, _) => Reduction::Irreducible,
                    (Local::GroupPair { inverse }, _) => {
                        if *inverse == j {
                            Reduction::Identity
                        } else {
                            Reduction::Irreducible
                        }
                    }
                    (Local::Finite { base, prod }, _) => {
                        match prod[i - base][j - base] {
                            None => Reduction::Identity,
                            Some(k) => Reduction::Letter(GeneratorId((base + k) as u32)),
                        }
                    }
                };
                table[i * n + j] = red;
            }
        }

        let (left, right) = neighbor_sets_from_table(n, &table);
        let excluded_case = detect_excluded(factors);
        // The plain-triple theorems additionally require an infinite monoid,
        // which fails only when the whole product is one finite factor.
        let infinite = factors.len() >= 2
            || factors
                .iter()
                .any(|f| !matches!(f, FactorSpec::FiniteMonoid { .. }));
        let is_plain = infinite && excluded_case.is_none();

        Ok(PairSpec::assemble(
            labels,
            table,
            left,
            right,
            is_plain,
            excluded_case,
        ))
    }

    /// Builds a pair from an explicit product table.
    ///
    /// The table must satisfy the neighbor-compatibility condition
    /// `Left(a*b) = Left(a)`, `Right(a*b) = Right(b)` whenever `a*b` is a
    /// letter, and be associative on every triple whose two adjacent products
    /// both reduce. These are necessary conditions only — a finite table
    /// cannot certify that the normal forms are a genuine cross-section, so
    /// custom pairs are never flagged plain and none of the plain-triple
    /// uniqueness guarantees are claimed for them.
    pub fn build_custom(sigma: &[String], table_in: &[Vec<Reduction>]) -> Result<PairSpec> {
        check_unique_labels(sigma)?;
        let n = sigma.len();
        if table_in.len() != n || table_in.iter().any(|row| row.len() != n) {
            return Err(Error::Parse(format!(
                "custom table must be {n}x{n} to match the alphabet"
            )));
        }
        let mut table = vec![Reduction::Irreducible; n * n];
        for i in 0..n {
            for j in 0..n {
                if let Reduction::Letter(c) = table_in[i][j] {
                    if c.index() >= n {
                        return Err(Error::UnknownLetter(format!("#{}", c.0)));
                    }
                }
                table[i * n + j] = table_in[i][j];
            }
        }
        let (left, right) = neighbor_sets_from_table(n, &table);

        // Left(a*b) = Left(a), Right(a*b) = Right(b) for every merge.
        for i in 0..n {
            for j in 0..n {
                if let Reduction::Letter(c) = table[i * n + j] {
                    if left[c.index()] != left[i] || right[c.index()] != right[j] {
                        return Err(Error::NeighborMismatch {
                            a: sigma[i].clone(),
                            b: sigma[j].clone(),
                            c: sigma[c.index()].clone(),
                        });
                    }
                }
            }
        }

        // Associativity on triples (a, b, c) where both a*b and b*c reduce.
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                if ab == Reduction::Irreducible {
                    continue;
                }
                for c in 0..n {
                    let bc = table[b * n + c];
                    if bc == Reduction::Irreducible {
                        continue;
                    }
                    let fail: Option<String> = match (ab, bc) {
                        (Reduction::Identity, Reduction::Identity) => {
                            // (a*b)*c = c and a*(b*c) = a.
                            (a != c).then(|| format!(
                                "{a_}*{b_}=1 and {b_}*{c_}=1 force {a_}={c_}",
                                a_ = sigma[a],
                                b_ = sigma[b],
                                c_ = sigma[c]
                            ))
                        }
                        (Reduction::Identity, Reduction::Letter(e)) => {
                            // a*(b*c) = a*e must equal (a*b)*c = c.
                            (table[a * n + e.index()] != Reduction::Letter(GeneratorId(c as u32)))
                                .then(|| format!(
                                    "{}*{} should be {}",
                                    sigma[a],
                                    sigma[e.index()],
                                    sigma[c]
                                ))
                        }
                        (Reduction::Letter(d), Reduction::Identity) => {
                            // (a*b)*c = d*c must equal a*(b*c) = a.
                            (table[d.index() * n + c] != Reduction::Letter(GeneratorId(a as u32)))
                                .then(|| format!(
                                    "{}*{} should be {}",
                                    sigma[d.index()],
                                    sigma[c],
                                    sigma[a]
                                ))
                        }
                        (Reduction::Letter(d), Reduction::Letter(e)) => {
                            // d*c and a*e are the same element.
                            (table[d.index() * n + c] != table[a * n + e.index()]).then(|| {
                                format!(
                                    "({}*{})*{} and {}*({}*{}) disagree",
                                    sigma[a], sigma[b], sigma[c], sigma[a], sigma[b], sigma[c]
                                )
                            })
                        }
                        (Reduction::Irreducible, _) | (_, Reduction::Irreducible) => None,
                    };
                    if let Some(detail) = fail {
                        return Err(Error::TripleInconsistent {
                            triple: (sigma[a].clone(), sigma[b].clone(), sigma[c].clone()),
                            detail,
                        });
                    }
                }
            }
        }

        Ok(PairSpec::assemble(
            sigma.to_vec(),
            table,
            left,
            right,
            false,
            None,
        ))
    }

    fn assemble(
        labels: Vec<String>,
        table: Vec<Reduction>,
        left: Vec<Vec<GeneratorId>>,
        right: Vec<Vec<GeneratorId>>,
        is_plain: bool,
        excluded_case: Option<ExcludedCase>,
    ) -> PairSpec {
        let n = labels.len();
        let mut identity_pairs = Vec::new();
        let mut letter_products = Vec::new();
        for b in 0..n {
            for d in 0..n {
                match table[b * n + d] {
                    Reduction::Identity => {
                        identity_pairs.push((GeneratorId(b as u32), GeneratorId(d as u32)))
                    }
                    Reduction::Letter(c) => {
                        letter_products.push((GeneratorId(b as u32), GeneratorId(d as u32), c))
                    }
                    Reduction::Irreducible => {}
                }
            }
        }
        PairSpec {
            labels,
            table,
            left,
            right,
            is_plain,
            excluded_case,
            identity_pairs,
            letter_products,
        }
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// All generators in index order.
    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        (0..self.labels.len() as u32).map(GeneratorId)
    }

    pub fn label(&self, a: GeneratorId) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn by_label(&self, label: &str) -> Option<GeneratorId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| GeneratorId(i as u32))
    }

    pub fn is_plain(&self) -> bool {
        self.is_plain
    }

    pub fn excluded_case(&self) -> Option<ExcludedCase> {
        self.excluded_case
    }

    /// The product `a * b` as a reduction.
    #[inline]
    pub fn product(&self, a: GeneratorId, b: GeneratorId) -> Reduction {
        self.table[a.index() * self.labels.len() + b.index()]
    }

    /// Letters `b` with `b * a` irreducible.
    pub fn left(&self, a: GeneratorId) -> &[GeneratorId] {
        &self.left[a.index()]
    }

    /// Letters `b` with `a * b` irreducible.
    pub fn right(&self, a: GeneratorId) -> &[GeneratorId] {
        &self.right[a.index()]
    }

    /// Both neighbor sets of `a`; for plain pairs they coincide (`Next(a)`).
    pub fn neighbor_sets(&self, a: GeneratorId) -> (&[GeneratorId], &[GeneratorId]) {
        (&self.left[a.index()], &self.right[a.index()])
    }

    /// `(b, d)` pairs with `b*d = 1`.
    pub fn identity_pairs(&self) -> &[(GeneratorId, GeneratorId)] {
        &self.identity_pairs
    }

    /// `(b, d, c)` triples with `b*d = c`.
    pub fn letter_products(&self) -> &[(GeneratorId, GeneratorId, GeneratorId)] {
        &self.letter_products
    }

    /// Checks the normal-form condition: adjacent letters never interact.
    pub fn is_normal(&self, letters: &[GeneratorId]) -> Result<bool> {
        for &l in letters {
            if l.index() >= self.labels.len() {
                return Err(Error::UnknownLetter(format!("#{}", l.0)));
            }
        }
        Ok(letters
            .windows(2)
            .all(|w| self.product(w[0], w[1]) == Reduction::Irreducible))
    }

    /// Applies an arrival of class `b` to the buffer.
    ///
    /// The arriving letter multiplies the back-end letter from the left:
    /// depending on `b * s1` the new customer stacks up, merges, or cancels.
    /// An arrival at an empty buffer always yields the one-letter word; the
    /// boundary admission probability is the simulator's concern, not the
    /// algebra's.
    pub fn arrive(&self, w: &BufferWord, b: GeneratorId) -> BufferWord {
        let Some(s1) = w.back_end() else {
            return BufferWord(vec![b]);
        };
        match self.product(b, s1) {
            Reduction::Irreducible => {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(b);
                v.extend_from_slice(&w.0);
                BufferWord(v)
            }
            Reduction::Letter(c) => {
                let mut v = w.0.clone();
                v[0] = c;
                BufferWord(v)
            }
            Reduction::Identity => BufferWord(w.0[1..].to_vec()),
        }
    }

    /// Completes a service: removes the front-end letter.
    pub fn serve(&self, w: &BufferWord) -> Result<BufferWord> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(BufferWord(w.0[..w.len() - 1].to_vec()))
    }

    /// Right-multiplies the word by `b`, reducing at the front end.
    ///
    /// This is the step of the underlying right random walk; it uses the same
    /// reduction rules as [`arrive`](Self::arrive) but at the opposite end,
    /// so the back-end prefix of the word stabilizes as the walk escapes.
    pub fn extend_right(&self, w: &BufferWord, b: GeneratorId) -> BufferWord {
        let Some(sk) = w.front_end() else {
            return BufferWord(vec![b]);
        };
        match self.product(sk, b) {
            Reduction::Irreducible => {
                let mut v = w.0.clone();
                v.push(b);
                BufferWord(v)
            }
            Reduction::Letter(c) => {
                let mut v = w.0.clone();
                *v.last_mut().expect("nonempty") = c;
                BufferWord(v)
            }
            Reduction::Identity => BufferWord(w.0[..w.len() - 1].to_vec()),
        }
    }

    /// Strong connectivity of the successor graph `a -> b` iff `b in Right(a)`.
    pub fn successor_strongly_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let fwd = |a: usize| self.right[a].iter().map(|g| g.index());
        let reach_fwd = dfs_reach(n, 0, |a, out| out.extend(fwd(a)));
        if reach_fwd.iter().any(|&r| !r) {
            return false;
        }
        let reach_bwd = dfs_reach(n, 0, |a, out| {
            out.extend(
                (0..n).filter(|&b| self.right[b].iter().any(|g| g.index() == a)),
            )
        });
        reach_bwd.iter().all(|&r| r)
    }

    /// Parses a word from letter labels, checking normality.
    pub fn word_from_labels(&self, labels: &[&str]) -> Result<BufferWord> {
        let mut letters = Vec::with_capacity(labels.len());
        for l in labels {
            letters.push(
                self.by_label(l)
                    .ok_or_else(|| Error::UnknownLetter((*l).to_string()))?,
            );
        }
        if !self.is_normal(&letters)? {
            return Err(Error::NotNormal(labels.join(".")));
        }
        Ok(BufferWord(letters))
    }

    /// Renders a word with `.`-separated labels; the empty word prints as `ε`.
    pub fn format_word(&self, w: &BufferWord) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.0.iter()
            .map(|&l| self.label(l))
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::Identity => write!(f, "1"),
            Reduction::Letter(c) => write!(f, "letter#{}", c.0),
            Reduction::Irreducible => write!(f, "*"),
        }
    }
}

fn check_unique_labels(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

type NeighborTable = Vec<Vec<GeneratorId>>;

fn neighbor_sets_from_table(n: usize, table: &[Reduction]) -> (NeighborTable, NeighborTable) {
    let mut left = vec![Vec::new(); n];
    let mut right = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            if table[a * n + b] == Reduction::Irreducible {
                right[a].push(GeneratorId(b as u32));
                left[b].push(GeneratorId(a as u32));
            }
        }
    }
    (left, right)
}

fn dfs_reach(n: usize, start: usize, nbrs: impl Fn(usize, &mut Vec<usize>)) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut buf = Vec::new();
    while let Some(a) = stack.pop() {
        buf.clear();
        nbrs(a, &mut buf);
        for &b in &buf {
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

/// Local products of a finite factor: `None` encodes the unit.
type LocalProducts = Vec<Vec<Option<usize>>>;

/// Validates a finite-monoid table, locates the unit, and returns the
/// non-unit elements with their local products.
fn reduce_finite_monoid(
    fi: usize,
    elements: &[String],
    table: &[Vec<String>],
) -> Result<(Vec<String>, LocalProducts)> {
    let m = elements.len();
    check_unique_labels(elements)?;
    if table.len() != m || table.iter().any(|r| r.len() != m) {
        return Err(Error::Parse(format!(
            "factor #{fi}: table must be {m}x{m} over its elements"
        )));
    }
    let pos = |label: &str| -> Result<usize> {
        elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownLetter(label.to_string()))
    };
    let mut prod = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in 0..m {
            prod[i][j] = pos(&table[i][j])?;
        }
    }
    // Two-sided unit.
    let unit = (0..m)
        .find(|&u| (0..m).all(|x| prod[u][x] == x && prod[x][u] == x))
        .ok_or(Error::MissingUnit(fi))?;
    // Associativity over all triples.
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if prod[prod[a][b]][c] != prod[a][prod[b][c]] {
                    return Err(Error::NonAssociative {
                        factor: fi,
                        triple: (
                            elements[a].clone(),
                            elements[b].clone(),
                            elements[c].clone(),
                        ),
                    });
                }
            }
        }
    }
    let non_unit: Vec<String> = elements
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != unit)
        .map(|(_, e)| e.clone())
        .collect();
    // Re-index products over the non-unit elements.
    let dense: Vec<usize> = (0..m).filter(|&i| i != unit).collect();
    let back: Vec<Option<usize>> = (0..m)
        .map(|i| dense.iter().position(|&d| d == i))
        .collect();
    let mut out = vec![vec![None; dense.len()]; dense.len()];
    for (i, &di) in dense.iter().enumerate() {
        for (j, &dj) in dense.iter().enumerate() {
            let p = prod[di][dj];
            out[i][j] = if p == unit { None } else { back[p] };
        }
    }
    Ok((non_unit, out))
}

fn detect_excluded(factors: &[FactorSpec]) -> Option<ExcludedCase> {
    if factors.len() == 1 {
        if let FactorSpec::FreeGroup { letters } = &factors[0] {
            if letters.len() == 1 {
                return Some(ExcludedCase::IsomorphicToZ);
            }
        }
    }
    if factors.len() == 2 {
        let order_two_group = |f: &FactorSpec| -> bool {
            if let FactorSpec::FiniteMonoid { elements, table } = f {
                if elements.len() != 2 {
                    return false;
                }
                if let Ok((non_unit, prod)) = reduce_finite_monoid(0, elements, table) {
                    return non_unit.len() == 1 && prod[0][0].is_none();
                }
            }
            false
        };
        if order_two_group(&factors[0]) && order_two_group(&factors[1]) {
            return Some(ExcludedCase::IsomorphicToZ2StarZ2);
        }
    }
    None
}

/// Ready-made pairs used throughout the tests and examples.
pub mod pairs {
    use super::*;

    /// Cyclic group of order `k` as a [`FactorSpec`], with elements
    /// `1, g, g2, ...` named after `g`.
    pub fn cyclic_group_factor(g: &str, k: usize) -> FactorSpec {
        assert!(k >= 2);
        let mut elements = vec!["1".to_string()];
        for i in 1..k {
            elements.push(if i == 1 {
                g.to_string()
            } else {
                format!("{g}{i}")
            });
        }
        let table = (0..k)
            .map(|i| (0..k).map(|j| elements[(i + j) % k].clone()).collect())
            .collect();
        FactorSpec::FiniteMonoid { elements, table }
    }

    /// The idempotent one-generator monoid (`b*b = b`).
    pub fn boolean_factor(b: &str) -> FactorSpec {
        FactorSpec::FiniteMonoid {
            elements: vec!["1".to_string(), b.to_string()],
            table: vec![
                vec!["1".to_string(), b.to_string()],
                vec![b.to_string(), b.to_string()],
            ],
        }
    }

    /// `Z/3Z * Z/3Z` with alphabet `a, a2, b, b2`.
    pub fn z3_star_z3() -> PairSpec {
        PairSpec::build_pair(&[cyclic_group_factor("a", 3), cyclic_group_factor("b", 3)])
            .expect("valid factors")
    }

    /// The free monoid on one letter (the plain M/M/1 buffer).
    pub fn free_monoid(letter: &str) -> PairSpec {
        PairSpec::build_pair(&[FactorSpec::FreeMonoid {
            letters: vec![letter.to_string()],
        }])
        .expect("valid factors")
    }

    /// The one-generator free group with alphabet `a, a^-1`.
    pub fn free_group_z() -> PairSpec {
        PairSpec::build_pair(&[FactorSpec::FreeGroup {
            letters: vec!["a".to_string()],
        }])
        .expect("valid factors")
    }

    /// The bicyclic pair `<a,b | ab=1>` as a custom table.
    pub fn bicyclic() -> PairSpec {
        let sigma = vec!["a".to_string(), "b".to_string()];
        let table = vec![
            vec![Reduction::Irreducible, Reduction::Identity],
            vec![Reduction::Irreducible, Reduction::Irreducible],
        ];
        PairSpec::build_custom(&sigma, &table).expect("valid table")
    }

    /// The bicyclic pair extended with one free letter `c`.
    pub fn bicyclic_star_free() -> PairSpec {
        let sigma = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let mut table = vec![vec![Reduction::Irreducible; 3]; 3];
        table[0][1] = Reduction::Identity;
        PairSpec::build_custom(&sigma, &table).expect("valid table")
    }

    /// `N * Z * B`: one free letter, one group letter pair, one idempotent.
    pub fn n_star_z_star_b() -> PairSpec {
        PairSpec::build_pair(&[
            FactorSpec::FreeMonoid {
                letters: vec!["a".to_string()],
            },
            FactorSpec::FreeGroup {
                letters: vec!["b".to_string()],
            },
            boolean_factor("c"),
        ])
        .expect("valid factors")
    }

    /// `N * B`: one free letter and one idempotent letter.
    pub fn n_star_b() -> PairSpec {
        PairSpec::build_pair(&[
            FactorSpec::FreeMonoid {
                letters: vec!["a".to_string()],
            },
            boolean_factor("b"),
        ])
        .expect("valid factors")
    }
}
