//! On-disk cache of exact sparse matrix sets, one text file per
//! `(m, n, r, s, kind)`.
//!
//! ```text
//! superschur-cache v1
//! kind rho
//! params 3 1 1 1
//! size 16
//! matrices 16
//! matrix E(0,0) 7
//! 0 0 1 1
//! ...
//! ```
//!
//! Each entry line is `row column numerator denominator` in decimal.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use superschur::rational::{from_decimal_pair, to_decimal_pair};
use superschur::sparse::SparseMatrix;

pub const CACHE_HEADER: &str = "superschur-cache v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `rho_{r,s}(E_ab)` for every basis element.
    Rho,
    /// Every walled Brauer diagram matrix, then the generator matrices.
    Brauer,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Rho => "rho",
            Kind::Brauer => "brauer",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub kind: Kind,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

impl CacheKey {
    pub fn file_name(&self) -> String {
        format!(
            "{}_{}_{}_{}_{}.txt",
            self.kind.name(),
            self.m,
            self.n,
            self.r,
            self.s
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed cache file at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cache file is for {found}, expected {expected}")]
    Mismatch { found: String, expected: String },
}

/// A labelled list of square matrices of one size.
pub type MatrixSet = Vec<(String, SparseMatrix)>;

pub fn encode(key: &CacheKey, size: usize, matrices: &[(String, SparseMatrix)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CACHE_HEADER}");
    let _ = writeln!(out, "kind {}", key.kind.name());
    let _ = writeln!(out, "params {} {} {} {}", key.m, key.n, key.r, key.s);
    let _ = writeln!(out, "size {size}");
    let _ = writeln!(out, "matrices {}", matrices.len());
    for (label, m) in matrices {
        let _ = writeln!(out, "matrix {label} {}", m.nnz());
        for (i, j, v) in m.triplets() {
            let (num, den) = to_decimal_pair(v);
            let _ = writeln!(out, "{i} {j} {num} {den}");
        }
    }
    out
}

/// Parses a cache file and checks it was written for `key`.
pub fn decode(text: &str, key: &CacheKey) -> Result<(usize, MatrixSet), CacheError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| CacheError::Malformed {
            line: 0,
            reason: format!("missing {what}"),
        })
    };
    let malformed = |line: usize, reason: &str| CacheError::Malformed {
        line,
        reason: reason.to_string(),
    };
    let field = |(line, text): (usize, &str), name: &str| -> Result<String, CacheError> {
        text.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| malformed(line, &format!("expected {name}")))
    };
    let header = next("header")?;
    if header.1 != CACHE_HEADER {
        return Err(malformed(header.0, "unknown version"));
    }
    let kind = field(next("kind")?, "kind")?;
    let params = field(next("params")?, "params")?;
    let expected = format!(
        "{} {} {} {} {}",
        key.kind.name(),
        key.m,
        key.n,
        key.r,
        key.s
    );
    let found = format!("{kind} {params}");
    if found != expected {
        return Err(CacheError::Mismatch { found, expected });
    }
    let line = next("size")?;
    let size: usize = field(line, "size")?
        .parse()
        .map_err(|_| malformed(line.0, "bad size"))?;
    let line = next("matrices")?;
    let count: usize = field(line, "matrices")?
        .parse()
        .map_err(|_| malformed(line.0, "bad count"))?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let line = next("matrix")?;
        let rest = field(line, "matrix")?;
        let (label, nnz) = rest
            .rsplit_once(' ')
            .ok_or_else(|| malformed(line.0, "expected label and count"))?;
        let nnz: usize = nnz
            .parse()
            .map_err(|_| malformed(line.0, "bad entry count"))?;
        let mut triplets = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let (k, text) = next("entry")?;
            let parts: Vec<&str> = text.split(' ').collect();
            let [i, j, num, den] = parts[..] else {
                return Err(malformed(k, "expected row column numerator denominator"));
            };
            let i: usize = i.parse().map_err(|_| malformed(k, "bad row"))?;
            let j: usize = j.parse().map_err(|_| malformed(k, "bad column"))?;
            if i >= size || j >= size {
                return Err(malformed(k, "index out of range"));
            }
            let v = from_decimal_pair(num, den).ok_or_else(|| malformed(k, "bad rational"))?;
            triplets.push((i, j, v));
        }
        out.push((
            label.to_string(),
            SparseMatrix::from_triplets(size, triplets),
        ));
    }
    Ok((size, out))
}

#[derive(Clone, Debug)]
pub struct MatrixCache {
    dir: PathBuf,
}

impl MatrixCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// `Ok(None)` when there is no file for `key`.
    pub fn load(&self, key: &CacheKey) -> Result<Option<(usize, MatrixSet)>, CacheError> {
        match std::fs::read_to_string(self.path(key)) {
            Ok(text) => decode(&text, key).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place.
    pub fn store(
        &self,
        key: &CacheKey,
        size: usize,
        matrices: &[(String, SparseMatrix)],
    ) -> Result<(), CacheError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(encode(key, size, matrices).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key))
            .map_err(|e| CacheError::Io(e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use superschur::rational::frac;

    fn key() -> CacheKey {
        CacheKey {
            kind: Kind::Rho,
            m: 1,
            n: 1,
            r: 1,
            s: 0,
        }
    }

    fn sample() -> MatrixSet {
        vec![
            (
                "E(0,1)".into(),
                SparseMatrix::from_triplets(2, [(0, 1, frac(-7, 3))]),
            ),
            ("E(1,1)".into(), SparseMatrix::zero(2)),
        ]
    }

    #[test]
    fn encode_decode() {
        let text = encode(&key(), 2, &sample());
        assert!(text.contains("0 1 -7 3"));
        assert_eq!(decode(&text, &key()).unwrap(), (2, sample()));
        let other = CacheKey { r: 2, ..key() };
        assert!(matches!(
            decode(&text, &other),
            Err(CacheError::Mismatch { .. })
        ));
        let truncated = text.replace("0 1 -7 3\n", "");
        assert!(matches!(
            decode(&truncated, &key()),
            Err(CacheError::Malformed { .. })
        ));
    }

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::new(dir.path().join("nested")).unwrap();
        assert!(cache.load(&key()).unwrap().is_none());
        cache.store(&key(), 2, &sample()).unwrap();
        assert_eq!(cache.load(&key()).unwrap(), Some((2, sample())));
        let leftovers = std::fs::read_dir(cache.dir()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
