use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{companion_operator, IntPolynomial, RationalMatrix};
use crate::sumset::IntegralForm;
use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u128 = 100_000_000;

const DENSE_COUNTER_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub best_value: usize,
    pub best_set: Vec<Vec<i64>>,
    pub exhaustive: bool,
    pub universe: String,
    pub seed: Option<u64>,
    /// Number of complete configurations whose value was computed.
    pub evaluated: u64,
}

/// `|A + αA|` recomputed with exact rationals and an ordered set.
pub fn naive_dilate_size(m: &RationalMatrix, a: &[Vec<i64>]) -> usize {
    let pts: Vec<Vec<BigRational>> = a
        .iter()
        .map(|p| p.iter().map(|&c| BigRational::from_integer(c.into())).collect())
        .collect();
    let images: Vec<Vec<BigRational>> = pts.iter().map(|p| m.mul_vec(p)).collect();
    let mut out = BTreeSet::new();
    for p in &pts {
        for q in &images {
            out.insert(p.iter().zip(q).map(|(x, y)| x + y).collect::<Vec<_>>());
        }
    }
    out.len()
}

/// Packs `den·a + N·b` into a single `u128` for coordinates bounded by `radius`.
#[derive(Clone)]
struct Packer {
    dim: usize,
    form: IntegralForm,
    offset: Vec<i128>,
    stride: Vec<u128>,
    cells: u128,
}

impl Packer {
    fn new(m: &RationalMatrix, radius: i64) -> Result<Self> {
        let overflow = || Error::CoordinateOverflow("search key");
        let form = IntegralForm::of(m).ok_or_else(overflow)?;
        let d = form.dim;
        let r = radius as i128;
        let mut offset = Vec::with_capacity(d);
        let mut stride = Vec::with_capacity(d);
        let mut cells: u128 = 1;
        for i in 0..d {
            let row: i128 = (0..d).map(|j| form.numer[i * d + j].abs()).sum();
            let b = (form.denom + row).checked_mul(r).ok_or_else(overflow)?;
            offset.push(b);
            stride.push(cells);
            cells = cells.checked_mul((2 * b + 1) as u128).ok_or_else(overflow)?;
        }
        Ok(Packer { dim: d, form, offset, stride, cells })
    }

    /// Key of `a + M·b`.
    fn key(&self, a: &[i64], b: &[i64], buf: &mut [i128]) -> u128 {
        self.form.apply_numer(b, buf).expect("bounded by construction");
        (0..self.dim)
            .map(|i| (self.form.denom * a[i] as i128 + buf[i] + self.offset[i]) as u128 * self.stride[i])
            .sum()
    }
}

enum Counter {
    Dense(Vec<u32>),
    Sparse(HashMap<u128, u32>),
}

impl Counter {
    fn new(cells: u128) -> Self {
        if cells <= DENSE_COUNTER_LIMIT {
            Counter::Dense(vec![0; cells as usize])
        } else {
            Counter::Sparse(HashMap::new())
        }
    }

    /// Returns whether the key is new.
    fn inc(&mut self, k: u128) -> bool {
        let c = match self {
            Counter::Dense(v) => &mut v[k as usize],
            Counter::Sparse(m) => m.entry(k).or_insert(0),
        };
        *c += 1;
        *c == 1
    }

    /// Returns whether the key disappeared.
    fn dec(&mut self, k: u128) -> bool {
        match self {
            Counter::Dense(v) => {
                v[k as usize] -= 1;
                v[k as usize] == 0
            }
            Counter::Sparse(m) => {
                let c = m.get_mut(&k).expect("counted key");
                *c -= 1;
                if *c == 0 {
                    m.remove(&k);
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// A multiset of sums `a + M·b` over a growing or shrinking point list.
struct Tracker {
    packer: Packer,
    counter: Counter,
    points: Vec<Vec<i64>>,
    distinct: usize,
    buf: Vec<i128>,
}

impl Tracker {
    fn new(packer: Packer) -> Self {
        let counter = Counter::new(packer.cells);
        let buf = vec![0; packer.dim];
        Tracker { packer, counter, points: Vec::new(), distinct: 0, buf }
    }

    fn push(&mut self, p: Vec<i64>) {
        for s in &self.points {
            for k in [self.packer.key(s, &p, &mut self.buf), self.packer.key(&p, s, &mut self.buf)] {
                self.distinct += self.counter.inc(k) as usize;
            }
        }
        let k = self.packer.key(&p, &p, &mut self.buf);
        self.distinct += self.counter.inc(k) as usize;
        self.points.push(p);
    }

    fn remove(&mut self, idx: usize) -> Vec<i64> {
        let p = self.points.swap_remove(idx);
        for s in &self.points {
            for k in [self.packer.key(s, &p, &mut self.buf), self.packer.key(&p, s, &mut self.buf)] {
                self.distinct -= self.counter.dec(k) as usize;
            }
        }
        let k = self.packer.key(&p, &p, &mut self.buf);
        self.distinct -= self.counter.dec(k) as usize;
        p
    }

    fn pop(&mut self) {
        let last = self.points.len() - 1;
        self.remove(last);
    }
}

fn operator_for(f: &IntPolynomial) -> Result<RationalMatrix> {
    if f.degree() == 0 || !f.is_primitive() {
        return Err(Error::Precondition(format!("{f} must be primitive of degree >= 1")));
    }
    companion_operator(f)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `min |A + αA|` over `n`-point sets fitting in a translate of `[0, radius]^d`.
pub fn exhaustive_min(f: &IntPolynomial, n: usize, radius: u32) -> Result<SearchResult> {
    exhaustive_min_with_budget(f, n, radius, DEFAULT_NODE_BUDGET)
}

/// As [`exhaustive_min`] with an explicit bound on the number of candidate sets.
pub fn exhaustive_min_with_budget(f: &IntPolynomial, n: usize, radius: u32, budget: u128) -> Result<SearchResult> {
    let m = operator_for(f)?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let d = f.degree();
    let r = radius as i64;
    // Sets are normalized so their least point is the origin; the other
    // points are lexicographically positive and within the radius.
    let side = (2 * radius as u128 + 1).checked_pow(d as u32 - 1).unwrap_or(u128::MAX);
    let predicted = binomial(side.saturating_mul(radius as u128 + 1) - 1, n as u128 - 1);
    if predicted > budget {
        return Err(Error::SearchTooLarge { predicted, budget });
    }
    let candidates = normalized_candidates(d, r);

    let mut search = Exhaustive {
        tracker: Tracker::new(Packer::new(&m, r)?),
        candidates: &candidates,
        n,
        radius: r,
        best: usize::MAX,
        best_set: Vec::new(),
        evaluated: 0,
    };
    search.tracker.push(vec![0; d]);
    search.dfs(0);
    if search.best_set.is_empty() {
        return Err(Error::Precondition(format!("no {n}-point set fits in [0,{radius}]^{d}")));
    }
    let best_set = search.best_set;
    let best_value = search.best;
    let oracle = naive_dilate_size(&m, &best_set);
    assert_eq!(oracle, best_value, "search objective disagrees with the exact recount");
    Ok(SearchResult {
        n,
        best_value,
        best_set,
        exhaustive: true,
        universe: format!("translates of [0,{radius}]^{d}"),
        seed: None,
        evaluated: search.evaluated,
    })
}

/// Lexicographically positive points with first coordinate in `[0, r]` and
/// the rest in `[-r, r]`, in lexicographic order.
fn normalized_candidates(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for k in 0..d {
        let lo = if k == 0 { 0 } else { -r };
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=r).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0));
    out
}

struct Exhaustive<'a> {
    tracker: Tracker,
    candidates: &'a [Vec<i64>],
    n: usize,
    radius: i64,
    best: usize,
    best_set: Vec<Vec<i64>>,
    evaluated: u64,
}

impl Exhaustive<'_> {
    fn dfs(&mut self, from: usize) {
        let have = self.tracker.points.len();
        if have == self.n {
            if is_canonical(&self.tracker.points) {
                self.evaluated += 1;
                if self.tracker.distinct < self.best {
                    self.best = self.tracker.distinct;
                    self.best_set = self.tracker.points.clone();
                }
            }
            return;
        }
        let need = self.n - have;
        for i in from..self.candidates.len() {
            if self.candidates.len() - i < need {
                break;
            }
            let p = &self.candidates[i];
            if !self.fits(p) {
                continue;
            }
            self.tracker.push(p.clone());
            // Adding points never shrinks the sumset.
            if self.tracker.distinct < self.best {
                self.dfs(i + 1);
            }
            self.tracker.pop();
        }
    }

    fn fits(&self, p: &[i64]) -> bool {
        (0..p.len()).all(|k| {
            let (lo, hi) = self
                .tracker
                .points
                .iter()
                .fold((p[k], p[k]), |(l, h), q| (l.min(q[k]), h.max(q[k])));
            hi - lo <= self.radius
        })
    }
}

/// Translation-normalized `A` is kept only if it is not larger than the
/// normalized `−A`.
fn is_canonical(a: &[Vec<i64>]) -> bool {
    let mut neg: Vec<Vec<i64>> = a.iter().map(|p| p.iter().map(|c| -c).collect()).collect();
    neg.sort();
    let base = neg[0].clone();
    for p in &mut neg {
        for (c, b) in p.iter_mut().zip(&base) {
            *c -= b;
        }
    }
    let mut sorted = a.to_vec();
    sorted.sort();
    sorted <= neg
}

/// Seeded hill climb over `n`-point subsets of `[0, radius]^d` with
/// single-point swaps; moves that do not increase `|A + αA|` are accepted.
pub fn local_search_min(f: &IntPolynomial, n: usize, radius: u32, iters: u64, seed: u64) -> Result<SearchResult> {
    let m = operator_for(f)?;
    if n < 2 {
        return Err(Error::Precondition("local search needs n >= 2".into()));
    }
    if iters == 0 {
        return Err(Error::Precondition("iters must be at least 1".into()));
    }
    let d = f.degree();
    let universe = (radius as u128 + 1).checked_pow(d as u32).unwrap_or(u128::MAX);
    if universe < n as u128 {
        return Err(Error::Precondition(format!("[0,{radius}]^{d} has fewer than {n} points")));
    }
    let r = radius as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let packer = Packer::new(&m, r)?;

    let start = match best_box_start(&packer, n, r, d) {
        Some(b) => b,
        None => {
            let mut seen = HashSet::new();
            while seen.len() < n {
                seen.insert((0..d).map(|_| rng.random_range(0..=r)).collect::<Vec<i64>>());
            }
            let mut v: Vec<Vec<i64>> = seen.into_iter().collect();
            v.sort();
            v
        }
    };
    let mut tracker = Tracker::new(packer);
    for p in start {
        tracker.push(p);
    }
    let mut members: HashSet<Vec<i64>> = tracker.points.iter().cloned().collect();
    let mut current = tracker.distinct;
    let mut best = current;
    let mut best_set = sorted(&tracker.points);
    let mut evaluated = 1;

    while evaluated < iters {
        let idx = rng.random_range(0..n);
        let q: Vec<i64> = loop {
            let q: Vec<i64> = (0..d).map(|_| rng.random_range(0..=r)).collect();
            if !members.contains(&q) {
                break q;
            }
        };
        let old = tracker.remove(idx);
        tracker.push(q.clone());
        evaluated += 1;
        let value = tracker.distinct;
        if value <= current {
            members.remove(&old);
            members.insert(q);
            current = value;
            if value <= best {
                let s = sorted(&tracker.points);
                if value < best || s < best_set {
                    best = value;
                    best_set = s;
                }
            }
        } else {
            tracker.pop();
            tracker.push(old);
        }
    }
    let oracle = naive_dilate_size(&m, &best_set);
    assert_eq!(oracle, best, "search objective disagrees with the exact recount");
    Ok(SearchResult {
        n,
        best_value: best,
        best_set,
        exhaustive: false,
        universe: format!("[0,{radius}]^{d}"),
        seed: Some(seed),
        evaluated,
    })
}

fn sorted(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut v = points.to_vec();
    v.sort();
    v
}

/// The best axis box with `n` points inside `[0, r]^d`, if one fits.
fn best_box_start(packer: &Packer, n: usize, r: i64, d: usize) -> Option<Vec<Vec<i64>>> {
    let mut shapes = Vec::new();
    box_shapes(n, d, r as usize + 1, &mut Vec::new(), &mut shapes);
    let mut best: Option<(usize, Vec<Vec<i64>>)> = None;
    for shape in shapes {
        let mut pts = vec![Vec::new()];
        for &s in &shape {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..s as i64).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        let mut t = Tracker::new(packer.clone());
        for p in &pts {
            t.push(p.clone());
        }
        if best.as_ref().is_none_or(|(v, b)| t.distinct < *v || (t.distinct == *v && pts < *b)) {
            best = Some((t.distinct, pts));
        }
    }
    best.map(|(_, pts)| pts)
}

fn box_shapes(n: usize, d: usize, max_side: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == d - 1 {
        if n <= max_side {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    for s in 1..=n.min(max_side) {
        if n % s == 0 {
            cur.push(s);
            box_shapes(n / s, d, max_side, cur, out);
            cur.pop();
        }
    }
}
