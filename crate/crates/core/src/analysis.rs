//! Branching vectors, branching numbers and weight optimization for the
//! running-time analysis of the enumerator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::Rule;
use crate::error::{Error, Result};

/// Weights of the measure `|V'_n| + α|O_n| + β|V'_d| + δc`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl WeightSet {
    /// Weights used for 2-degenerate inputs, with β fixed to 1.
    pub const TWO_DEGENERATE: WeightSet = WeightSet {
        alpha: 0.106,
        beta: 1.0,
        delta: 0.106,
    };

    /// Weights used for general inputs.
    pub const GENERAL: WeightSet = WeightSet {
        alpha: 0.110901,
        beta: 0.984405,
        delta: 0.143516,
    };

    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0,1), got {alpha}"
            )));
        }
        if !open(delta) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0,1), got {delta}"
            )));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0,1], got {beta}"
            )));
        }
        Ok(Self { alpha, beta, delta })
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} delta={}",
            short(self.alpha),
            short(self.beta),
            short(self.delta)
        )
    }
}

/// At most seven decimals, without trailing zeros.
fn short(x: f64) -> String {
    let s = format!("{x:.7}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Decreases of the measure in each branch of one rule (sub)case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchingVector {
    pub label: String,
    pub decreases: Vec<f64>,
}

impl BranchingVector {
    pub fn new(label: impl Into<String>, decreases: Vec<f64>) -> Result<Self> {
        if decreases.is_empty() {
            return Err(Error::InvalidParameter("branching vector is empty".into()));
        }
        if let Some(r) = decreases
            .iter()
            .find(|&&r| r.is_nan() || r <= 0.0 || r.is_infinite())
        {
            return Err(Error::InvalidParameter(format!("nonpositive decrease {r}")));
        }
        Ok(Self {
            label: label.into(),
            decreases,
        })
    }

    pub fn branching_number(&self) -> f64 {
        root(&self.decreases)
    }
}

/// The unique `λ ≥ 1` with `Σ λ^{-r_i} = 1`; 1 for a single entry.
pub fn branching_number(decreases: &[f64]) -> Result<f64> {
    BranchingVector::new("", decreases.to_vec()).map(|v| v.branching_number())
}

fn root(r: &[f64]) -> f64 {
    if r.len() == 1 {
        return 1.0;
    }
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (1.0_f64, (r.len() as f64).powf(1.0 / min));
    // relative tolerance: for tiny decreases the root can be far above 2
    while hi - lo > 1e-12 * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(r, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn excess(r: &[f64], lambda: f64) -> f64 {
    r.iter().map(|&x| lambda.powf(-x)).sum::<f64>() - 1.0
}

/// Status of a vertex that decides which subcase row applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Undominated,
    Dominated,
}

/// Which row of a rule's case table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Subcase {
    Single,
    /// Statuses of the two neighbors `v1`, `v2`.
    Pair(Kind, Kind),
    /// Number of undominated vertices among the other neighbors, capped at 2.
    Count(usize),
    /// Status of the witness `y`.
    Witness(Kind),
    /// Undominated counts `n1`, `n2` outside `u`, `v1`, `v2`, capped at 2.
    Counts(usize, usize),
}

/// Claimed decreases for a rule subcase, in branch order. Rows for mixed
/// statuses of rules 5 and 6 are derived here, as the tables only list one
/// orientation.
pub fn subcase_vector(rule: Rule, sub: Subcase, w: &WeightSet) -> Option<Vec<f64>> {
    use Kind::{Dominated as D, Undominated as N};
    let WeightSet {
        alpha: a,
        beta: b,
        delta: d,
    } = *w;
    let v = match (rule, sub) {
        (Rule::B1, Subcase::Single) => vec![b, b + a],
        (Rule::B2, Subcase::Single) => vec![b, b + d],
        (Rule::B3, Subcase::Single) => vec![b, b + 1.0, b + 1.0 + a],
        (Rule::B4, Subcase::Single) => vec![b, 2.0 * b, 2.0 * b + d],
        (Rule::B5, Subcase::Pair(N, N)) => vec![2.0 - d, 3.0 - d - a, 2.0 - d, 3.0 - d],
        (Rule::B5, Subcase::Pair(N, D)) => vec![2.0 - d, 2.0 - a + b, 2.0 - d, 2.0 + b],
        (Rule::B5, Subcase::Pair(D, N)) => vec![1.0 + b, 2.0 + b - d, 1.0 + b, 2.0 + b - d],
        (Rule::B5, Subcase::Pair(D, D)) => vec![1.0 + b, 1.0 + 2.0 * b, 1.0 + b, 1.0 + 2.0 * b],
        (Rule::B6, Subcase::Pair(N, N)) => vec![1.0 + a - d, 2.0 - d],
        (Rule::B6, Subcase::Pair(N, D)) => vec![1.0 + a - d, 1.0 + b],
        (Rule::B6, Subcase::Pair(D, N)) => vec![b + a, 1.0 + b + a - d],
        (Rule::B6, Subcase::Pair(D, D)) => vec![b + a, 2.0 * b + a],
        (Rule::B7, Subcase::Count(2)) => vec![b, b + 3.0 - 2.0 * a, 1.0 + b],
        (Rule::B7, Subcase::Count(1)) => vec![b, 2.0 * b + 2.0 - a, 1.0 + b],
        (Rule::B7, Subcase::Count(0)) => vec![b, 3.0 * b + 1.0, 1.0 + b],
        (Rule::B8, Subcase::Witness(N)) => vec![b, 2.0, 3.0, 3.0 + b - a],
        (Rule::B8, Subcase::Witness(D)) => vec![b, 1.0 + b, 2.0 + b, 2.0 + 2.0 * b],
        (Rule::B9, Subcase::Witness(N)) => {
            vec![
                b,
                1.0 + b,
                2.0 + b,
                3.0 + b - a,
                3.0 + b - d + b.min(1.0 - a),
            ]
        }
        (Rule::B9, Subcase::Witness(D)) => {
            vec![
                b,
                1.0 + b,
                2.0 + b,
                2.0 + 2.0 * b,
                2.0 + 2.0 * b + b.min(1.0 - a),
            ]
        }
        (Rule::B10, Subcase::Counts(n1, n2)) if n1 <= 2 && n2 <= 2 => {
            let second = [1.0 + b, 2.0, 3.0 - b][n1];
            let third = [2.0 + b, 3.0, 4.0 - b][n2];
            let excluded = |k: usize| [2.0 + 3.0 * b, 3.0 + 2.0 * b - a, 4.0 + b - 2.0 * a][k];
            vec![b, second, third, excluded(n1), excluded(n2)]
        }
        (Rule::B12, Subcase::Single) => vec![b, 3.0 - 2.0 * b],
        _ => return None,
    };
    Some(v)
}

/// The printed bound next to a catalog row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Bound {
    Below(f64),
    Equal(f64),
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub rule: Rule,
    pub vector: BranchingVector,
    pub bound: Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    TwoDegenerate,
    General,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2deg" | "2-degenerate" => Ok(Mode::TwoDegenerate),
            "general" => Ok(Mode::General),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

fn entry(rule: Rule, label: String, decreases: Vec<f64>, bound: Bound) -> CatalogEntry {
    CatalogEntry {
        rule,
        vector: BranchingVector { label, decreases },
        bound,
    }
}

/// The eleven rows for 2-degenerate inputs at `(α, δ)`; β is ignored.
pub fn vectors_2degenerate(w: &WeightSet) -> Vec<CatalogEntry> {
    let (a, d) = (w.alpha, w.delta);
    let rows: [(Rule, Vec<f64>, Bound); 11] = [
        (Rule::B1, vec![1.0, 1.0 + a], Bound::None),
        (Rule::B2, vec![1.0, 1.0 + d], Bound::None),
        (Rule::B3, vec![1.0, 2.0, 2.0 + a], Bound::Below(1.9766)),
        (Rule::B4, vec![1.0, 2.0, 2.0 + d], Bound::Below(1.9766)),
        (
            Rule::B5,
            vec![2.0 - d, 3.0 - d - a, 2.0 - d, 3.0 - d],
            Bound::Below(1.8269),
        ),
        (Rule::B6, vec![1.0 + a - d, 2.0 - d], Bound::Below(1.6420)),
        (
            Rule::B7,
            vec![1.0, 4.0 - 2.0 * a, 2.0],
            Bound::Below(1.7691),
        ),
        (Rule::B8, vec![1.0, 2.0, 3.0, 4.0 - a], Bound::Below(1.9333)),
        (
            Rule::B9,
            vec![1.0, 2.0, 3.0, 4.0 - a, 5.0 - d - a],
            Bound::Below(1.9767),
        ),
        (
            Rule::B10,
            vec![1.0, 2.0, 3.0, 5.0 - 2.0 * a, 5.0 - 2.0 * a],
            Bound::Below(1.9420),
        ),
        (Rule::B12, vec![1.0, 1.0], Bound::Equal(2.0)),
    ];
    rows.into_iter()
        .map(|(rule, v, bound)| entry(rule, rule.label().to_string(), v, bound))
        .collect()
}

/// The full catalog for general inputs, one row per tabulated subcase.
pub fn vectors_general(w: &WeightSet) -> Vec<CatalogEntry> {
    use Kind::{Dominated as D, Undominated as N};
    let mut out = Vec::with_capacity(27);
    let mut push = |rule: Rule, tag: &str, sub: Subcase, bound: f64| {
        let v = subcase_vector(rule, sub, w).expect("tabulated subcase");
        let label = if tag.is_empty() {
            rule.label().to_string()
        } else {
            format!("{} {tag}", rule.label())
        };
        out.push(entry(rule, label, v, Bound::Below(bound)));
    };
    push(Rule::B1, "", Subcase::Single, 1.9489);
    push(Rule::B2, "", Subcase::Single, 1.9297);
    push(Rule::B3, "", Subcase::Single, 1.9896);
    push(Rule::B4, "", Subcase::Single, 1.9896);
    push(Rule::B5, "v1,v2 undominated", Subcase::Pair(N, N), 1.8463);
    push(
        Rule::B5,
        "v1 undominated, v2 dominated",
        Subcase::Pair(N, D),
        1.8236,
    );
    push(Rule::B5, "v1,v2 dominated", Subcase::Pair(D, D), 1.7785);
    push(Rule::B6, "v1,v2 undominated", Subcase::Pair(N, N), 1.6635);
    push(
        Rule::B6,
        "v1 undominated, v2 dominated",
        Subcase::Pair(N, D),
        1.5855,
    );
    push(Rule::B6, "v1,v2 dominated", Subcase::Pair(D, D), 1.5817);
    push(Rule::B7, "v1,v2 undominated", Subcase::Count(2), 1.7796);
    push(
        Rule::B7,
        "v1 undominated, v2 dominated",
        Subcase::Count(1),
        1.7729,
    );
    push(Rule::B7, "v1,v2 dominated", Subcase::Count(0), 1.7665);
    push(Rule::B8, "y undominated", Subcase::Witness(N), 1.9403);
    push(Rule::B8, "y dominated", Subcase::Witness(D), 1.9398);
    push(Rule::B9, "y undominated", Subcase::Witness(N), 1.9896);
    push(Rule::B9, "y dominated", Subcase::Witness(D), 1.9813);
    let b10 = [
        [1.9430, 1.9440, 1.9453],
        [1.9426, 1.9437, 1.9449],
        [1.9425, 1.9435, 1.9448],
    ];
    for (n1, row) in b10.iter().enumerate() {
        for (n2, &bound) in row.iter().enumerate() {
            push(
                Rule::B10,
                &format!("n1={n1} n2={n2}"),
                Subcase::Counts(n1, n2),
                bound,
            );
        }
    }
    push(Rule::B12, "", Subcase::Single, 1.9896);

    // The table row for rule 6 with mixed statuses is listed as (1+α, 1+β);
    // keep it verbatim here. The runtime check uses the exact decrease.
    let row = out
        .iter_mut()
        .find(|e| e.vector.label == "B6 v1 undominated, v2 dominated")
        .expect("rule 6 mixed row");
    row.vector.decreases = vec![1.0 + w.alpha, 1.0 + w.beta];
    out
}

pub fn catalog(mode: Mode, w: &WeightSet) -> Vec<CatalogEntry> {
    match mode {
        Mode::TwoDegenerate => vectors_2degenerate(w),
        Mode::General => vectors_general(w),
    }
}

/// Bounds are checked with this much room to spare.
pub const BOUND_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub entry: CatalogEntry,
    pub number: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub mode: Mode,
    pub weights: WeightSet,
    pub rows: Vec<RowReport>,
    /// Largest branching number among the rows that count toward the
    /// running time (the catch-all row is excluded for 2-degenerate inputs).
    pub max: f64,
    pub argmax: String,
    pub all_pass: bool,
}

pub fn summarize(mode: Mode, w: &WeightSet) -> Summary {
    let rows: Vec<RowReport> = catalog(mode, w)
        .into_iter()
        .map(|entry| {
            let number = entry.vector.branching_number();
            let pass = match entry.bound {
                Bound::Below(b) => number <= b - BOUND_MARGIN,
                Bound::Equal(b) => (number - b).abs() <= 1e-9,
                Bound::None => true,
            };
            RowReport {
                entry,
                number,
                pass,
            }
        })
        .collect();
    let (mut max, mut argmax) = (1.0, String::new());
    for row in rows.iter().filter(|r| counts_toward(mode, r.entry.rule)) {
        if row.number > max {
            max = row.number;
            argmax = row.entry.vector.label.clone();
        }
    }
    Summary {
        mode,
        weights: *w,
        all_pass: rows.iter().all(|r| r.pass),
        rows,
        max,
        argmax,
    }
}

fn counts_toward(mode: Mode, rule: Rule) -> bool {
    !(mode == Mode::TwoDegenerate && rule == Rule::B12)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Optimum {
    pub weights: WeightSet,
    pub value: f64,
}

/// Searches for weights minimizing the largest branching number: a coarse
/// grid, a fine grid around the best coarse point, then a pattern search
/// with halving steps. In 2-degenerate mode β stays at 1.
pub fn optimize_weights(mode: Mode) -> Optimum {
    let dims = match mode {
        Mode::TwoDegenerate => 2,
        Mode::General => 3,
    };
    let mut best = Best {
        mode,
        point: vec![0.1; dims],
        value: f64::INFINITY,
    };

    let coarse: Vec<f64> = (1..50).map(|i| i as f64 * 0.02).collect();
    let beta_coarse: Vec<f64> = (1..=50).map(|i| i as f64 * 0.02).collect();
    for_each_point(dims, &coarse, &beta_coarse, |p| best.offer(p));

    let center = best.point.clone();
    let local = |c: f64| -> Vec<f64> { (-10..=10).map(|i| c + i as f64 * 0.002).collect() };
    let axes: Vec<Vec<f64>> = center.iter().map(|&c| local(c)).collect();
    for_each_point_on(&axes, |p| best.offer(p));

    let mut step = 0.002;
    while step >= 1e-7 {
        let mut improved = false;
        let mut dirs = directions(dims);
        dirs.extend(best.ridge_directions());
        for dir in dirs {
            let p: Vec<f64> = best
                .point
                .iter()
                .zip(&dir)
                .map(|(x, d)| x + step * d)
                .collect();
            if best.offer(&p) {
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Optimum {
        weights: best
            .weights(&best.point.clone())
            .expect("best point is valid"),
        value: best.value,
    }
}

const MIN_IMPROVEMENT: f64 = 1e-10;

struct Best {
    mode: Mode,
    point: Vec<f64>,
    value: f64,
}

impl Best {
    fn weights(&self, p: &[f64]) -> Option<WeightSet> {
        let w = match (self.mode, p) {
            (Mode::TwoDegenerate, &[a, d]) => WeightSet::new(a, 1.0, d),
            (Mode::General, &[a, b, d]) => WeightSet::new(a, b, d),
            _ => return None,
        };
        w.ok()
    }

    fn row_numbers(&self, p: &[f64]) -> Option<Vec<f64>> {
        let w = self.weights(p)?;
        let rows = catalog(self.mode, &w);
        Some(
            rows.iter()
                .filter(|e| counts_toward(self.mode, e.rule))
                .map(|e| e.vector.branching_number())
                .collect(),
        )
    }

    /// The maximum sits on a ridge where several rows tie, and lattice
    /// directions only creep along it. For every small set of nearly tied
    /// rows, the least-norm direction lowering all of them at unit rate
    /// (first order) follows the ridge.
    fn ridge_directions(&self) -> Vec<Vec<f64>> {
        const H: f64 = 1e-7;
        let dims = self.point.len();
        let Some(here) = self.row_numbers(&self.point) else {
            return Vec::new();
        };
        let active: Vec<usize> = (0..here.len())
            .filter(|&i| here[i] > self.value - 1e-4)
            .collect();
        let mut grads = vec![vec![0.0; dims]; here.len()];
        for k in 0..dims {
            let mut up = self.point.clone();
            let mut down = self.point.clone();
            up[k] += H;
            down[k] -= H;
            let (Some(fu), Some(fd)) = (self.row_numbers(&up), self.row_numbers(&down)) else {
                return Vec::new();
            };
            for &i in &active {
                grads[i][k] = (fu[i] - fd[i]) / (2.0 * H);
            }
        }
        let mut out = Vec::new();
        for mask in 1u32..1 << active.len() {
            if mask.count_ones() as usize > dims {
                continue;
            }
            let g: Vec<&Vec<f64>> = active
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &i)| &grads[i])
                .collect();
            let gram: Vec<Vec<f64>> = g
                .iter()
                .map(|a| g.iter().map(|b| dot(a, b)).collect())
                .collect();
            let Some(y) = solve(gram, vec![-1.0; g.len()]) else {
                continue;
            };
            let mut d = vec![0.0; dims];
            for (gi, yi) in g.iter().zip(&y) {
                for k in 0..dims {
                    d[k] += yi * gi[k];
                }
            }
            let norm = dot(&d, &d).sqrt();
            if norm > 0.0 && norm.is_finite() {
                out.push(d.iter().map(|x| x / norm).collect());
            }
        }
        out
    }

    /// Takes `p` if it improves on the current value by more than the
    /// solver's noise, so the pattern search cannot drift along a tie.
    fn offer(&mut self, p: &[f64]) -> bool {
        let Some(w) = self.weights(p) else {
            return false;
        };
        let target = self.value - MIN_IMPROVEMENT;
        let rows = catalog(self.mode, &w);
        let counted = rows.iter().filter(|e| counts_toward(self.mode, e.rule));
        if target.is_finite()
            && counted
                .clone()
                .any(|e| excess(&e.vector.decreases, target) >= 0.0)
        {
            return false;
        }
        let value = counted
            .map(|e| e.vector.branching_number())
            .fold(1.0, f64::max);
        if value < target {
            self.value = value;
            self.point = p.to_vec();
            true
        } else {
            false
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, rest) = a.split_at_mut(row);
            for (x, y) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * y;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn for_each_point(dims: usize, grid: &[f64], beta_grid: &[f64], mut f: impl FnMut(&[f64]) -> bool) {
    let axes: Vec<Vec<f64>> = match dims {
        2 => vec![grid.to_vec(), grid.to_vec()],
        _ => vec![grid.to_vec(), beta_grid.to_vec(), grid.to_vec()],
    };
    for_each_point_on(&axes, &mut f);
}

fn for_each_point_on(axes: &[Vec<f64>], mut f: impl FnMut(&[f64]) -> bool) {
    let mut idx = vec![0; axes.len()];
    let mut p: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&p);
        let mut k = 0;
        loop {
            if k == axes.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                p[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            p[k] = axes[k][0];
            k += 1;
        }
    }
}

/// All nonzero vectors in `{-1, 0, 1}^dims`.
fn directions(dims: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(dims as u32) {
        let mut c = code;
        let dir: Vec<f64> = (0..dims)
            .map(|_| {
                let d = (c % 3) as f64 - 1.0;
                c /= 3;
                d
            })
            .collect();
        if dir.iter().any(|&d| d != 0.0) {
            out.push(dir);
        }
    }
    out
}
