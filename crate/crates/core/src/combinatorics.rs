//! Partitions, bipartitions and the `(m|n)`-cross condition.

use std::fmt;

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts into weakly decreasing order and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th part counting from one; zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `k`, in reverse lexicographic order.
pub fn partitions(k: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            rec(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Whether some `1 <= i <= m+1` has `left_i + right_{m+2-i} < n+1`.
pub fn is_mn_cross(left: &Partition, right: &Partition, m: usize, n: usize) -> bool {
    (1..=m + 1).any(|i| left.part(i) + right.part(m + 2 - i) < n + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub left: Partition,
    pub right: Partition,
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CrossMode {
    /// Sizes exactly `(r, s)`.
    Exact,
    /// Sizes `(r-t, s-t)` for `0 <= t <= min(r, s)`.
    #[default]
    Contracted,
}

impl std::str::FromStr for CrossMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Self::Exact),
            "contracted" => Ok(Self::Contracted),
            other => Err(format!(
                "unknown mode {other:?}; expected exact or contracted"
            )),
        }
    }
}

impl fmt::Display for CrossMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Contracted => "contracted",
        })
    }
}

/// Cross bipartitions labelling the summands of `T(r,s)`.
pub fn enumerate_cross(
    r: usize,
    s: usize,
    m: usize,
    n: usize,
    mode: CrossMode,
) -> Vec<Bipartition> {
    let contractions = match mode {
        CrossMode::Exact => 0..=0,
        CrossMode::Contracted => 0..=r.min(s),
    };
    let mut out = Vec::new();
    for t in contractions {
        for left in partitions(r - t) {
            for right in partitions(s - t) {
                if is_mn_cross(&left, &right, m, n) {
                    out.push(Bipartition {
                        left: left.clone(),
                        right,
                    });
                }
            }
        }
    }
    out
}
