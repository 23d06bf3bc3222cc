//! Betti-table bookkeeping: cyclic grading and periodicity, Lefschetz
//! transfer to a hyperplane section, the hard Lefschetz window, Gysin
//! sequences of circle bundles and the rank constraints of Oh's spectral
//! sequence.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{CheckReport, CheckStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BettiError {
    #[error("inconsistent table: {0}")]
    InconsistentTable(String),
    #[error("rank inconsistency: {0}")]
    RankInconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Ranks `b_0, ..., b_top` of the rational cohomology of a closed manifold
/// of real dimension `top`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiTable {
    ranks: Vec<u64>,
}

impl BettiTable {
    pub fn new(ranks: Vec<u64>) -> Self {
        Self { ranks }
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    /// `b_j`, zero outside `0..=top`.
    pub fn b(&self, j: i64) -> u64 {
        usize::try_from(j).ok().and_then(|j| self.ranks.get(j)).copied().unwrap_or(0)
    }

    /// Real dimension; `None` for the empty table.
    pub fn top(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// Complex dimension when the real dimension is even.
    pub fn complex_dim(&self) -> Option<usize> {
        self.top().filter(|t| t % 2 == 0).map(|t| t / 2)
    }

    pub fn total(&self) -> u64 {
        self.ranks.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Indices `j` with `b_j != b_{top-j}`, listed once per pair.
    pub fn poincare_violations(&self) -> Vec<usize> {
        let Some(top) = self.top() else { return Vec::new() };
        (0..=top / 2).filter(|&j| self.ranks[j] != self.ranks[top - j]).collect()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranks.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A table in which some ranks are not determined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialBettiTable {
    ranks: Vec<Option<u64>>,
}

impl PartialBettiTable {
    pub fn ranks(&self) -> &[Option<u64>] {
        &self.ranks
    }

    pub fn unknown_indices(&self) -> Vec<usize> {
        self.ranks.iter().enumerate().filter(|(_, b)| b.is_none()).map(|(j, _)| j).collect()
    }

    /// The full table, when every rank is known.
    pub fn complete(&self) -> Option<BettiTable> {
        self.ranks.iter().copied().collect::<Option<Vec<u64>>>().map(BettiTable::new)
    }
}

impl fmt::Display for PartialBettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranks.iter().map(|b| b.map_or("?".into(), |b| b.to_string())).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Ranks summed over degrees congruent modulo the period `2C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicBetti {
    pub period: usize,
    pub values: Vec<u64>,
}

pub fn cyclic_betti(table: &BettiTable, c: usize) -> Result<CyclicBetti, BettiError> {
    if c == 0 {
        return Err(BettiError::InvalidInput("the minimal Chern number must be positive".into()));
    }
    let period = 2 * c;
    let mut values = vec![0; period];
    for (j, &b) in table.ranks().iter().enumerate() {
        values[j % period] += b;
    }
    Ok(CyclicBetti { period, values })
}

fn pd_entry(table: &BettiTable, report: &mut CheckReport) {
    let v = table.poincare_violations();
    let top = table.top().unwrap_or(0);
    report.check(
        "poincare_duality",
        v.is_empty(),
        if v.is_empty() {
            format!("b_j = b_{{{top}-j}} for all j")
        } else {
            let list: Vec<String> = v.iter().map(|j| format!("b_{j} = {} != b_{} = {}", table.b(*j as i64), top - j, table.b((top - j) as i64))).collect();
            list.join("; ")
        },
    );
}

/// Cyclic periodicity `b~_j = b~_{j+2}` for the grading modulo `2C`, plus
/// Poincaré duality and the equivalent unwrapped identities
///
/// * `b_j + b_{j+2C} = b_{j+2} + b_{j+2C+2}` for `0 <= j <= 2C-3`,
/// * `b_{2C-2} = b_{2C} + 1`,
/// * `b_{2C-1} = b_{2C+1} + b_1`.
///
/// The unwrapped form assumes a connected manifold of real dimension below
/// `4C - 2`; otherwise it is reported as skipped.
pub fn check_periodicity(table: &BettiTable, c: usize) -> Result<CheckReport, BettiError> {
    let cyc = cyclic_betti(table, c)?;
    let p = cyc.period;
    let mut report = CheckReport::new();
    pd_entry(table, &mut report);

    let bad: Vec<usize> = (0..p).filter(|&j| cyc.values[j] != cyc.values[(j + 2) % p]).collect();
    let shown: Vec<String> = cyc.values.iter().map(|v| v.to_string()).collect();
    report.check(
        "cyclic_periodicity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("b~ = ({}) with period {p}", shown.join(","))
        } else {
            let list: Vec<String> =
                bad.iter().map(|&j| format!("b~_{j} = {} != b~_{} = {}", cyc.values[j], (j + 2) % p, cyc.values[(j + 2) % p])).collect();
            format!("b~ = ({}); failing: {}", shown.join(","), list.join("; "))
        },
    );

    let applicable = table.b(0) == 1 && table.top().is_some_and(|t| t + 2 < 2 * p);
    let b = |j: usize| table.b(j as i64);
    let mut failures = Vec::new();
    for j in 0..p.saturating_sub(2) {
        if b(j) + b(j + p) != b(j + 2) + b(j + p + 2) {
            failures.push(format!("b_{j} + b_{} != b_{} + b_{}", j + p, j + 2, j + p + 2));
        }
    }
    let top_identity = p >= 2 && b(p - 2) == b(p) + 1;
    let odd_identity = b(p - 1) == b(p + 1) + b(1);
    let details = format!(
        "b_{} = {} vs b_{} + 1 = {}; b_{} = {} vs b_{} + b_1 = {}{}",
        p - 2,
        b(p - 2),
        p,
        b(p) + 1,
        p - 1,
        b(p - 1),
        p + 1,
        b(p + 1) + b(1),
        if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
    );
    if applicable {
        report.check("unwrapped_identities", failures.is_empty() && top_identity && odd_identity, details);
    } else {
        report.push(
            "unwrapped_identities",
            CheckStatus::Skipped,
            "needs b_0 = 1 and real dimension below 4C - 2",
        );
    }
    Ok(report)
}

/// Betti numbers of a hyperplane section `Sigma` of `X^n` with defect `k`:
/// `b_j(Sigma) = b_j(X)` for `j <= n+k-2`, the rest by Poincaré duality on
/// `Sigma`. With `k = 0` the middle rank is left unknown.
pub fn lefschetz_transfer(table_x: &BettiTable, n: usize, k: usize) -> Result<PartialBettiTable, BettiError> {
    if n < 2 {
        return Err(BettiError::InvalidInput("need n >= 2".into()));
    }
    if table_x.ranks().len() != 2 * n + 1 {
        return Err(BettiError::InvalidInput(format!(
            "table has {} entries, expected {} for complex dimension {n}",
            table_x.ranks().len(),
            2 * n + 1
        )));
    }
    let top = 2 * n - 2;
    let lef = n + k - 2;
    let direct = |j: usize| (j <= lef).then(|| table_x.b(j as i64));
    let mut ranks = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let a = direct(j);
        let d = direct(top - j);
        match (a, d) {
            (Some(x), Some(y)) if x != y => {
                return Err(BettiError::InconsistentTable(format!(
                    "b_{j}(Sigma) = {x} from X but Poincaré duality gives b_{}(X) = {y}",
                    top - j
                )))
            }
            (x, y) => ranks.push(x.or(y)),
        }
    }
    Ok(PartialBettiTable { ranks })
}

/// Rank-level hard Lefschetz: `b_j = b_{j+2}` for `n-k-1 <= j <= n+k-1`.
pub fn hard_lefschetz_window(table: &BettiTable, n: usize, k: usize) -> CheckReport {
    let mut report = CheckReport::new();
    let lo = n as i64 - k as i64 - 1;
    let hi = (n + k) as i64 - 1;
    let bad: Vec<String> = (lo.max(0)..=hi)
        .filter(|&j| table.b(j) != table.b(j + 2))
        .map(|j| format!("j = {j}: b_{j} = {} != b_{} = {}", table.b(j), j + 2, table.b(j + 2)))
        .collect();
    report.check(
        "hard_lefschetz_window",
        bad.is_empty(),
        if bad.is_empty() { format!("b_j = b_(j+2) for {lo} <= j <= {hi}") } else { bad.join("; ") },
    );
    report
}

/// Largest ranks of `cup e: H^j -> H^(j+2)` compatible with the table,
/// `min(b_j, b_{j+2})`; hard Lefschetz realizes them for a polarized table.
pub fn default_cup_ranks(table: &BettiTable) -> Vec<u64> {
    (0..table.ranks().len() as i64).map(|j| table.b(j).min(table.b(j + 2))).collect()
}

/// Betti numbers of the circle bundle `P -> Sigma` with Euler class `e`,
/// from the Gysin sequence: `b_j(P) = (b_j - r_{j-2}) + (b_{j-1} - r_{j-1})`
/// where `r_j` is the rank of `cup e: H^j -> H^(j+2)`.
pub fn gysin_circle_bundle(table: &BettiTable, cup_ranks: &[u64]) -> Result<BettiTable, BettiError> {
    let len = table.ranks().len();
    if cup_ranks.len() > len {
        return Err(BettiError::RankInconsistency(format!("{} ranks given for a table of length {len}", cup_ranks.len())));
    }
    let r = |j: i64| usize::try_from(j).ok().and_then(|j| cup_ranks.get(j)).copied().unwrap_or(0);
    for (j, &rj) in cup_ranks.iter().enumerate() {
        let bound = table.b(j as i64).min(table.b(j as i64 + 2));
        if rj > bound {
            return Err(BettiError::RankInconsistency(format!(
                "rank of H^{j} -> H^{} is {rj}, but min(b_{j}, b_{}) = {bound}",
                j + 2,
                j + 2
            )));
        }
    }
    let ranks = (0..=len as i64)
        .map(|j| (table.b(j) - r(j - 2)) + (table.b(j - 1) - r(j - 1)))
        .collect();
    Ok(BettiTable::new(ranks))
}

/// Rank constraints from Oh's spectral sequence for a monotone Lagrangian
/// with minimal Maslov number `N` and vanishing Floer cohomology:
/// `b_j <= b_{j-1+N} + b_{j+1-N}` for every `j`. Given `(n, k)` also checks
/// the vanishing `b_j = 0` for `n-k+3 <= j <= n+k-2` and, as an advisory,
/// `b_j = b_{j-1+n+k}` for `0 <= j <= n-k-2`.
pub fn oh_exactness_check(table: &BettiTable, min_maslov: usize, nk: Option<(usize, usize)>) -> Result<CheckReport, BettiError> {
    if min_maslov < 2 {
        return Err(BettiError::InvalidInput("the minimal Maslov number must be at least 2".into()));
    }
    let nn = min_maslov as i64;
    let mut report = CheckReport::new();
    let bad: Vec<String> = (0..table.ranks().len() as i64)
        .filter(|&j| table.b(j) > table.b(j - 1 + nn) + table.b(j + 1 - nn))
        .map(|j| {
            format!("j = {j}: b_{j} = {} > b_{} + b_{} = {}", table.b(j), j - 1 + nn, j + 1 - nn, table.b(j - 1 + nn) + table.b(j + 1 - nn))
        })
        .collect();
    report.check(
        "oh_exactness",
        bad.is_empty(),
        if bad.is_empty() { format!("b_j <= b_(j-1+{nn}) + b_(j+1-{nn}) for all j") } else { bad.join("; ") },
    );
    if let Some((n, k)) = nk {
        let (n, k) = (n as i64, k as i64);
        let lo = n - k + 3;
        let hi = n + k - 2;
        let bad: Vec<String> = (lo.max(0)..=hi).filter(|&j| table.b(j) != 0).map(|j| format!("b_{j} = {}", table.b(j))).collect();
        report.check(
            "oh_vanishing",
            bad.is_empty(),
            if lo > hi {
                "empty range".to_string()
            } else if bad.is_empty() {
                format!("b_j = 0 for {lo} <= j <= {hi}")
            } else {
                bad.join("; ")
            },
        );
        let shift = n + k - 1;
        let bad: Vec<String> = (0..=(n - k - 2))
            .filter(|&j| table.b(j) != table.b(j + shift))
            .map(|j| format!("b_{j} = {} != b_{} = {}", table.b(j), j + shift, table.b(j + shift)))
            .collect();
        report.push(
            "oh_shift_isomorphism",
            CheckStatus::Advisory,
            if bad.is_empty() { format!("b_j = b_(j+{shift}) for 0 <= j <= {}", n - k - 2) } else { bad.join("; ") },
        );
    }
    Ok(report)
}
