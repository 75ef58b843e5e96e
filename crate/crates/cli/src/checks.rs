use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use serde_json::{json, Value};
use superschur::brauer::{act_on_t, enumerate_diagrams, generator_matrices, DEFAULT_MAX_DIAGRAMS};
use superschur::centralizer::{
    block_structure, center_dimension, commutant, radical, subalgebra_equal, MatrixSubalgebra,
};
use superschur::combinatorics::{enumerate_cross, CrossMode};
use superschur::liealg::{
    image_algebra, rho_rs, verify_representation, GlBasisElement, RepresentationMatrixSet,
    TensorSpace,
};
use superschur::superlinalg::SuperDim;
use superschur::superpoly::{
    bidegree_dimension, check_berezinian_laws, CoordinateRing, IdentityFailure,
};
use superschur::{Error, Result};

use crate::cache::{CacheKey, Kind, MatrixCache, MatrixSet};
use crate::config::{Check, SweepConfig};
use crate::report::{Entry, SkipReason, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

impl Point {
    pub fn new(m: usize, n: usize, r: usize, s: usize) -> Self {
        Self { m, n, r, s }
    }

    pub fn dim(&self) -> SuperDim {
        SuperDim::new(self.m, self.n)
    }

    pub fn space(&self) -> TensorSpace {
        TensorSpace::new(self.dim(), self.r, self.s)
    }

    /// `m - n >= r + s`, the hypothesis of the double centralizer and
    /// semisimplicity claims.
    pub fn in_stable_range(&self) -> bool {
        self.m >= self.n + self.r + self.s
    }

    fn cache_key(&self, kind: Kind) -> CacheKey {
        CacheKey {
            kind,
            m: self.m,
            n: self.n,
            r: self.r,
            s: self.s,
        }
    }
}

type Values = BTreeMap<String, Value>;

struct Outcome {
    status: Status,
    skip: Option<SkipReason>,
    message: Option<String>,
}

impl Outcome {
    fn pass_if(ok: bool) -> Self {
        Self {
            status: if ok { Status::Pass } else { Status::Fail },
            skip: None,
            message: None,
        }
    }

    fn recorded() -> Self {
        Self {
            status: Status::Recorded,
            skip: None,
            message: None,
        }
    }

    fn precondition(msg: impl Into<String>) -> Self {
        Self {
            status: Status::Skipped,
            skip: Some(SkipReason::Precondition),
            message: Some(msg.into()),
        }
    }

    fn with_message(mut self, msg: Option<String>) -> Self {
        self.message = msg.or(self.message);
        self
    }
}

fn timed(
    check: Check,
    m: usize,
    n: usize,
    rs: Option<(usize, usize)>,
    body: impl FnOnce(&mut Values) -> Result<Outcome>,
) -> Entry {
    let start = Instant::now();
    let mut values = Values::new();
    let outcome = match body(&mut values) {
        Ok(o) => o,
        Err(e @ Error::ResourceLimit { .. }) => Outcome {
            status: Status::Skipped,
            skip: Some(SkipReason::Resource),
            message: Some(e.to_string()),
        },
        Err(e) => Outcome {
            status: Status::Fail,
            skip: None,
            message: Some(e.to_string()),
        },
    };
    Entry {
        check,
        m,
        n,
        r: rs.map(|p| p.0),
        s: rs.map(|p| p.1),
        status: outcome.status,
        skip: outcome.skip,
        values,
        reference: check.reference().to_string(),
        message: outcome.message,
        time_us: start.elapsed().as_micros() as u64,
    }
}

fn put(values: &mut Values, key: &str, v: impl Into<Value>) {
    values.insert(key.to_string(), v.into());
}

fn rho_label(x: GlBasisElement) -> String {
    format!("E({},{})", x.a, x.b)
}

fn parse_rho_label(label: &str) -> Option<GlBasisElement> {
    let (a, b) = label
        .strip_prefix("E(")?
        .strip_suffix(')')?
        .split_once(',')?;
    Some(GlBasisElement::new(a.parse().ok()?, b.parse().ok()?))
}

/// Lazily computed objects shared by the checks at one grid point.
pub struct PointContext<'a> {
    pub point: Point,
    cfg: &'a SweepConfig,
    cache: Option<&'a MatrixCache>,
    reps: OnceLock<Result<RepresentationMatrixSet>>,
    image: OnceLock<Result<MatrixSubalgebra>>,
    brauer: OnceLock<Result<MatrixSubalgebra>>,
    commutant_rho: OnceLock<Result<MatrixSubalgebra>>,
}

impl<'a> PointContext<'a> {
    pub fn new(point: Point, cfg: &'a SweepConfig, cache: Option<&'a MatrixCache>) -> Self {
        Self {
            point,
            cfg,
            cache,
            reps: OnceLock::new(),
            image: OnceLock::new(),
            brauer: OnceLock::new(),
            commutant_rho: OnceLock::new(),
        }
    }

    fn cached(&self, kind: Kind) -> Option<MatrixSet> {
        let cache = self.cache?;
        let key = self.point.cache_key(kind);
        match cache.load(&key) {
            Ok(Some((size, set))) if size == self.point.space().size() => Some(set),
            Ok(Some(_)) => {
                log::warn!("cache {} has the wrong size, recomputing", key.file_name());
                None
            }
            Ok(None) => None,
            Err(e) => {
                log::warn!("ignoring cache {}: {e}", key.file_name());
                None
            }
        }
    }

    fn store(&self, kind: Kind, set: &[(String, superschur::sparse::SparseMatrix)]) {
        if let Some(cache) = self.cache {
            let key = self.point.cache_key(kind);
            if let Err(e) = cache.store(&key, self.point.space().size(), set) {
                log::warn!("could not write cache {}: {e}", key.file_name());
            }
        }
    }

    pub fn reps(&self) -> Result<&RepresentationMatrixSet> {
        self.reps
            .get_or_init(|| {
                let p = self.point;
                p.space().check_limit(self.cfg.max_dim)?;
                if let Some(set) = self.cached(Kind::Rho) {
                    let matrices: Option<BTreeMap<_, _>> = set
                        .into_iter()
                        .map(|(label, m)| Some((parse_rho_label(&label)?, m)))
                        .collect();
                    match matrices {
                        Some(matrices) if matrices.len() == p.dim().total().pow(2) => {
                            return Ok(RepresentationMatrixSet {
                                space: p.space(),
                                matrices,
                            })
                        }
                        _ => log::warn!("cache for {p:?} has bad labels, recomputing"),
                    }
                }
                let reps = rho_rs(p.dim(), p.r, p.s, self.cfg.max_dim)?;
                let set: MatrixSet = reps
                    .matrices
                    .iter()
                    .map(|(x, m)| (rho_label(*x), m.clone()))
                    .collect();
                self.store(Kind::Rho, &set);
                Ok(reps)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn image(&self) -> Result<&MatrixSubalgebra> {
        self.image
            .get_or_init(|| image_algebra(self.reps()?, self.max_algebra_dim()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Span of the walled Brauer diagram matrices, with generator matrices
    /// recorded.
    pub fn brauer(&self) -> Result<&MatrixSubalgebra> {
        self.brauer
            .get_or_init(|| {
                let p = self.point;
                let space = p.space();
                space.check_limit(self.cfg.max_dim)?;
                let set = match self.cached(Kind::Brauer) {
                    Some(set) => set,
                    None => {
                        let diagrams = enumerate_diagrams(p.r, p.s, DEFAULT_MAX_DIAGRAMS)?;
                        let mut set = Vec::new();
                        for (k, d) in diagrams.iter().enumerate() {
                            set.push((format!("D{k}"), act_on_t(d, p.dim(), self.cfg.max_dim)?));
                        }
                        for (k, (_, g)) in generator_matrices(p.dim(), p.r, p.s, self.cfg.max_dim)?
                            .into_iter()
                            .enumerate()
                        {
                            set.push((format!("G{k}"), g));
                        }
                        self.store(Kind::Brauer, &set);
                        set
                    }
                };
                let (span, gens): (Vec<_>, Vec<_>) = set
                    .into_iter()
                    .partition(|(label, _)| label.starts_with('D'));
                Ok(
                    MatrixSubalgebra::from_span(space.size(), span.into_iter().map(|(_, m)| m))
                        .with_generators(gens.into_iter().map(|(_, m)| m).collect()),
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn commutant_rho(&self) -> Result<&MatrixSubalgebra> {
        self.commutant_rho
            .get_or_init(|| {
                let reps = self.reps()?;
                Ok(commutant(reps.size(), &reps.generating_matrices()))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn max_algebra_dim(&self) -> usize {
        usize::try_from(self.cfg.max_dim).unwrap_or(usize::MAX)
    }

    fn entry(&self, check: Check, body: impl FnOnce(&mut Values) -> Result<Outcome>) -> Entry {
        let p = self.point;
        timed(check, p.m, p.n, Some((p.r, p.s)), |values| {
            if p.m + p.n == 0 {
                return Ok(Outcome::precondition("requires m+n >= 1"));
            }
            body(values)
        })
    }

    pub fn run(&self, check: Check) -> Entry {
        match check {
            Check::Dims => self.run_dims(),
            Check::SchurWeyl => self.run_schur_weyl(),
            Check::Semisimple => self.run_semisimple(),
            Check::Bipartitions => self.run_bipartitions(),
            Check::VerifyRing => run_verify_ring(self.cfg, self.point.m, self.point.n),
        }
    }

    /// Bidegree span dimension against the dimension of the image of `rho`.
    pub fn run_dims(&self) -> Entry {
        self.entry(Check::Dims, |v| {
            let p = self.point;
            check_symbolic_bound(self.cfg, p.m, p.n)?;
            let coord = CoordinateRing::new(p.dim());
            let bidegree = bidegree_dimension(&coord, p.r, p.s, self.cfg.max_span)?;
            let image = self.image()?.dimension();
            let representation = verify_representation(self.reps()?);
            put(v, "bidegree_dim", bidegree);
            put(v, "image_dim", image);
            put(v, "representation", representation);
            let msg = (bidegree != image)
                .then(|| format!("bidegree span {bidegree} differs from image {image}"));
            Ok(Outcome::pass_if(bidegree == image && representation).with_message(msg))
        })
    }

    pub fn run_schur_weyl(&self) -> Entry {
        self.entry(Check::SchurWeyl, |v| {
            let p = self.point;
            if p.m < p.n {
                return Ok(Outcome::precondition("requires m >= n"));
            }
            let n = p.space().size();
            let image = self.image()?;
            let brauer = self.brauer()?;
            let reps = self.reps()?;
            let commutes = brauer
                .generating_set()
                .iter()
                .all(|b| reps.matrices.values().all(|x| x.commutes_with(b)));
            let cb = commutant(n, brauer.generating_set());
            let cr = self.commutant_rho()?;
            let eq_image = subalgebra_equal(&cb, image);
            let eq_brauer = subalgebra_equal(cr, brauer);
            put(v, "image_dim", image.dimension());
            put(v, "brauer_dim", brauer.dimension());
            put(v, "commutant_brauer_dim", cb.dimension());
            put(v, "commutant_rho_dim", cr.dimension());
            put(v, "commutant_brauer_eq_image", eq_image);
            put(v, "commutant_rho_eq_brauer", eq_brauer);
            put(v, "brauer_commutes", commutes);
            put(v, "loop_value", p.m as i64 - p.n as i64);
            put(v, "stable_range", p.in_stable_range());
            if !commutes {
                return Ok(Outcome::pass_if(false)
                    .with_message(Some("a Brauer generator does not commute with rho".into())));
            }
            if !p.in_stable_range() {
                return Ok(Outcome::recorded());
            }
            if let Some(blocks) = block_structure(brauer) {
                let pairs: Vec<Value> = blocks
                    .iter()
                    .map(|b| json!([b.size(), b.multiplicity()]))
                    .collect();
                put(v, "brauer_blocks", pairs);
            }
            Ok(Outcome::pass_if(eq_image && eq_brauer))
        })
    }

    pub fn run_semisimple(&self) -> Entry {
        self.entry(Check::Semisimple, |v| {
            let p = self.point;
            let image = self.image()?;
            let rad = radical(image)?;
            put(v, "image_dim", image.dimension());
            put(v, "radical_dim", rad.len());
            put(v, "stable_range", p.in_stable_range());
            if !p.in_stable_range() {
                return Ok(Outcome::recorded());
            }
            Ok(Outcome::pass_if(rad.is_empty()))
        })
    }

    pub fn run_bipartitions(&self) -> Entry {
        self.entry(Check::Bipartitions, |v| {
            let p = self.point;
            let exact = enumerate_cross(p.r, p.s, p.m, p.n, CrossMode::Exact);
            let contracted = enumerate_cross(p.r, p.s, p.m, p.n, CrossMode::Contracted);
            let blocks = center_dimension(self.commutant_rho()?);
            let mode = self.cfg.mode;
            let labels = match mode {
                CrossMode::Exact => &exact,
                CrossMode::Contracted => &contracted,
            };
            put(v, "exact_count", exact.len());
            put(v, "contracted_count", contracted.len());
            put(v, "center_dim", blocks);
            put(v, "exact_agrees", exact.len() == blocks);
            put(v, "contracted_agrees", contracted.len() == blocks);
            put(v, "mode", mode.to_string());
            put(
                v,
                "labels",
                labels.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            );
            put(v, "stable_range", p.in_stable_range());
            let msg = [("exact", exact.len()), ("contracted", contracted.len())]
                .into_iter()
                .filter(|&(_, c)| c != blocks)
                .map(|(name, c)| format!("{name}-mode count {c} differs from block count {blocks}"))
                .collect::<Vec<_>>();
            let msg = (!msg.is_empty()).then(|| msg.join("; "));
            let outcome = if p.in_stable_range() {
                Outcome::pass_if(labels.len() == blocks)
            } else {
                Outcome::recorded()
            };
            Ok(outcome.with_message(msg))
        })
    }
}

/// Computations in `k[GL(m|n)]` need the generic inverse, whose size grows
/// too fast past small `m+n`.
fn check_symbolic_bound(cfg: &SweepConfig, m: usize, n: usize) -> Result<()> {
    if m + n > cfg.symbolic_bound {
        return Err(Error::ResourceLimit {
            what: "coordinate ring computations, m+n".into(),
            required: (m + n) as u128,
            limit: cfg.symbolic_bound as u128,
        });
    }
    Ok(())
}

/// Largest `m+n` for the fully symbolic `A C = C A = Id` check.
pub const SYMBOLIC_DELTA_BOUND: usize = 3;
const DELTA_POINTS: usize = 3;

/// Symbolic identities of `k[GL(m|n)]` and sampled Berezinian laws.
pub fn run_verify_ring(cfg: &SweepConfig, m: usize, n: usize) -> Entry {
    timed(Check::VerifyRing, m, n, None, |v| {
        if m + n == 0 {
            return Ok(Outcome::precondition("requires m+n >= 1"));
        }
        check_symbolic_bound(cfg, m, n)?;
        let coord = CoordinateRing::new(SuperDim::new(m, n));
        let mut failures: Vec<IdentityFailure> = Vec::new();
        let mut record = |v: &mut Values, key: &str, failure: Option<IdentityFailure>| {
            put(v, key, failure.is_none());
            failures.extend(failure);
        };
        record(v, "inverse_identities", coord.inverse_identity_failure());
        record(v, "cramer", coord.cramer_failure()?);
        // the symbolic tensor square outgrows memory from m+n = 4
        if m + n <= SYMBOLIC_DELTA_BOUND {
            put(v, "delta_inverse_method", "symbolic");
            record(v, "delta_inverse", coord.delta_inverse_failure());
        } else {
            put(
                v,
                "delta_inverse_method",
                format!("evaluated at {DELTA_POINTS} random points"),
            );
            record(
                v,
                "delta_inverse",
                coord.delta_inverse_failure_random(DELTA_POINTS, cfg.seed)?,
            );
        }
        record(v, "inverse_counit", coord.inverse_counit_failure());
        let laws = [
            ("coassociativity", coord.verify_coassociativity()),
            ("counit_laws", coord.verify_counit_laws()),
            ("twist_isomorphism", coord.twist_isomorphism_check()),
        ];
        for (key, ok) in laws {
            put(v, key, ok);
        }
        let ber = check_berezinian_laws(coord.dim(), cfg.grassmann, cfg.samples, cfg.seed)?;
        put(v, "ber_samples", ber.samples);
        put(v, "ber_multiplicative", ber.ber_multiplicative);
        put(v, "ber_star_multiplicative", ber.star_multiplicative);
        put(v, "ber_times_star_is_one", ber.ber_times_star_is_one);
        let mut messages: Vec<String> = failures.iter().map(ToString::to_string).collect();
        messages.extend(
            laws.iter()
                .filter(|(_, ok)| !ok)
                .map(|(key, _)| format!("{key} fails")),
        );
        if !ber.all_hold() {
            messages.push(format!("Berezinian laws fail: {ber:?}"));
        }
        let ok = messages.is_empty();
        Ok(Outcome::pass_if(ok).with_message((!ok).then(|| messages.join("; "))))
    })
}
