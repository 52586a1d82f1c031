use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::bundle::{InstanceBundle, OptProvenance};
use super::sieve_hard::{gen_sieve_hard, sieve_guess_thresholds, SieveHardSpec};
use crate::error::{Error, Result};
use crate::objectives::{CoverageObjective, ExemplarObjective, IndexObjective, RecommendationObjective};
use crate::oracle::ElementId;

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("edge probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Erdős–Rényi graph under closed-neighborhood coverage. The bundle's `k`
/// is 1; callers pick their own capacities.
pub fn gen_random_graph(n_vertices: usize, edge_prob: f64, seed: u64) -> Result<InstanceBundle> {
    check_probability(edge_prob)?;
    if n_vertices == 0 {
        return Err(Error::Parameter("graph needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n_vertices as u32 {
        for v in u + 1..n_vertices as u32 {
            if rng.random_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let f = CoverageObjective::from_edges(n_vertices, &edges)?;
    Ok(InstanceBundle::with_identity_order(f.into(), 1)
        .with_meta("generator", "graph")
        .with_meta("n", n_vertices)
        .with_meta("p", edge_prob)
        .with_meta("seed", seed))
}

/// Points drawn around a few Gaussian cluster centers, mean-centered.
pub fn gen_random_points(n_points: usize, dim: usize, clusters: usize, seed: u64) -> Result<InstanceBundle> {
    if n_points == 0 || dim == 0 || clusters == 0 {
        return Err(Error::Parameter("points, dimension and clusters must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = Normal::new(0.0, 0.3).expect("valid deviation");
    let centers: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0).collect())
        .collect();
    let points = (0..n_points)
        .map(|i| {
            let c = &centers[i % clusters];
            c.iter().map(|x| x + spread.sample(&mut rng)).collect()
        })
        .collect();
    let f = ExemplarObjective::new(points, true)?;
    Ok(InstanceBundle::with_identity_order(f.into(), 1)
        .with_meta("generator", "points")
        .with_meta("n", n_points)
        .with_meta("d", dim)
        .with_meta("seed", seed))
}

/// Random low-rank movie and user vectors, scaled so similarities stay O(1).
pub fn gen_random_recsys(n_movies: usize, dim: usize, alpha: f64, seed: u64) -> Result<InstanceBundle> {
    if n_movies == 0 || dim == 0 {
        return Err(Error::Parameter("movie count and dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (dim as f64).sqrt();
    let vector = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) * scale).collect()
    };
    let movies = (0..n_movies).map(|_| vector(&mut rng)).collect();
    let user = vector(&mut rng);
    let f = RecommendationObjective::new(movies, user, alpha)?;
    Ok(InstanceBundle::with_identity_order(f.into(), 1)
        .with_meta("generator", "recsys")
        .with_meta("n", n_movies)
        .with_meta("d", dim)
        .with_meta("alpha", alpha)
        .with_meta("seed", seed))
}

/// The INDEX reduction instance for Alice's bits `x` and Bob's 1-based index `i`.
/// The stream is Alice's `k·m` elements followed by Bob's single element.
pub fn gen_index_instance(m: usize, k: usize, x: &[bool], i: usize) -> Result<InstanceBundle> {
    if x.len() != m {
        return Err(Error::Parameter(format!("bit vector has length {}, expected {m}", x.len())));
    }
    let f = IndexObjective::new(k, x.to_vec(), i)?;
    let opt = f.closed_form_opt();
    let order = (0..=f.alice_len()).map(ElementId::from).collect();
    let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
    Ok(InstanceBundle::new(f.into(), order, k)?
        .with_known_opt(opt, OptProvenance::Constructed)
        .with_meta("generator", "index")
        .with_meta("m", m)
        .with_meta("x", bits)
        .with_meta("i", i))
}

/// A generator invocation written as `kind:key=value,...`, e.g.
/// `graph:n=12,p=0.3` or `sieve-hard:k=4,delta=0.25,opt=8`.
#[derive(Clone, Debug, PartialEq)]
pub enum SyntheticSpec {
    Graph { n: usize, p: f64 },
    Points { n: usize, d: usize, clusters: usize },
    Recsys { n: usize, d: usize, alpha: f64 },
    /// Thresholds default to the single known-OPT threshold `opt/(2k)`, or to
    /// the sieve guess set when `eps` is given.
    SieveHard { k: usize, delta: f64, opt: f64, eps: Option<f64>, thresholds: Option<Vec<f64>> },
    Index { k: usize, bits: Vec<bool>, i: usize },
}

impl SyntheticSpec {
    /// Builds the instance. `seed` only affects the random families.
    pub fn generate(&self, seed: u64) -> Result<InstanceBundle> {
        match self {
            SyntheticSpec::Graph { n, p } => gen_random_graph(*n, *p, seed),
            SyntheticSpec::Points { n, d, clusters } => gen_random_points(*n, *d, *clusters, seed),
            SyntheticSpec::Recsys { n, d, alpha } => gen_random_recsys(*n, *d, *alpha, seed),
            SyntheticSpec::SieveHard {
                k,
                delta,
                opt,
                eps,
                thresholds,
            } => {
                let thresholds = match (thresholds, eps) {
                    (Some(t), _) => t.clone(),
                    (None, Some(eps)) => sieve_guess_thresholds(*k, *opt, *eps)?,
                    (None, None) => vec![opt / (2.0 * *k as f64)],
                };
                let spec = SieveHardSpec::new(*k, thresholds, *delta, *opt);
                Ok(gen_sieve_hard(&spec)?.0)
            }
            SyntheticSpec::Index { k, bits, i } => gen_index_instance(bits.len(), *k, bits, *i),
        }
    }
}

struct Fields<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn take<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parameter(format!("bad value '{v}' for '{key}' in '{}'", self.spec))),
        }
    }

    fn need<T: FromStr>(&self, key: &str) -> Result<T> {
        self.take(key)?
            .ok_or_else(|| Error::Parameter(format!("'{}' is missing '{key}'", self.spec)))
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

impl FromStr for SyntheticSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut pairs = Vec::new();
        for field in rest.split(',').filter(|f| !f.is_empty()) {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got '{field}'")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let f = Fields { spec, pairs };
        Ok(match kind {
            "graph" => SyntheticSpec::Graph {
                n: f.need("n")?,
                p: f.need("p")?,
            },
            "points" => SyntheticSpec::Points {
                n: f.need("n")?,
                d: f.take("d")?.unwrap_or(2),
                clusters: f.take("clusters")?.unwrap_or(3),
            },
            "recsys" => SyntheticSpec::Recsys {
                n: f.need("n")?,
                d: f.take("d")?.unwrap_or(4),
                alpha: f.take("alpha")?.unwrap_or(0.75),
            },
            "sieve-hard" => SyntheticSpec::SieveHard {
                k: f.need("k")?,
                delta: f.need("delta")?,
                opt: f.take("opt")?.unwrap_or(1.0),
                eps: f.take("eps")?,
                thresholds: f
                    .raw("thresholds")
                    .map(|t| {
                        t.split(';')
                            .map(|x| {
                                x.parse::<f64>()
                                    .map_err(|_| Error::Parameter(format!("bad threshold '{x}'")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .transpose()?,
            },
            "index" => {
                let x = f.raw("x").ok_or_else(|| Error::Parameter(format!("'{spec}' is missing 'x'")))?;
                let bits = x
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Parameter(format!("bit string '{x}' must be 0s and 1s"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                SyntheticSpec::Index {
                    k: f.need("k")?,
                    bits,
                    i: f.need("i")?,
                }
            }
            other => return Err(Error::Parameter(format!("unknown synthetic family '{other}'"))),
        })
    }
}
