//! Metric-trigraphs over the three point geometries (Hamming cube, unit
//! sphere, Euclidean space) and the embeddings between them, plus the
//! shattered-sphere lower-bound instance.
//!
//! All floating-point threshold comparisons use a 10^-12 guard band, recorded
//! in the returned object. The Euclidean-to-Hamming embedding is Las-Vegas:
//! it redraws on certificate failure and always returns a checked artifact.

use crate::bits::VSet;
use crate::core::{PairStatus, TriGraph, TriGraphBuilder};
use crate::rng::derive_rng;
use rand::{Rng, RngCore};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const GUARD_BAND: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("geometry mismatch: expected {expected}, got {got}")]
    Geometry { expected: &'static str, got: &'static str },
    #[error("point {0} is not unit-norm (|1 - ||p||| = {1:e})")]
    NotUnit(usize, f64),
    #[error("point {0} has dimension {1}, cloud says {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("point {0} exceeds the norm bound 3")]
    NormBound(usize),
    #[error("epsilon out of range (need 0 < eps <= 0.5)")]
    BadEps,
    #[error("required bit count {0} exceeds the cap {1}")]
    BitBudget(usize, usize),
    #[error("gap unachieved after {rounds} rounds; worst quadruple {quadruple:?}")]
    GapFailure { rounds: usize, quadruple: (usize, usize, usize, usize) },
    #[error("dimension {0} outside supported range {1}..={2}")]
    DimensionRange(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Hamming,
    Sphere,
    Euclidean,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Hamming => "hamming",
            Geometry::Sphere => "sphere",
            Geometry::Euclidean => "euclidean",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointData {
    /// one bitset of length `dimension` per point
    Bits(Vec<VSet>),
    Reals(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub geometry: Geometry,
    pub dimension: usize,
    pub points: PointData,
}

impl PointCloud {
    pub fn hamming(dimension: usize, points: Vec<VSet>) -> Self {
        assert!(points.iter().all(|p| p.ground_size() == dimension));
        PointCloud { geometry: Geometry::Hamming, dimension, points: PointData::Bits(points) }
    }

    pub fn sphere(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(MetricError::DimensionMismatch(i, p.len(), dimension));
            }
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > GUARD_BAND {
                return Err(MetricError::NotUnit(i, (norm - 1.0).abs()));
            }
        }
        Ok(PointCloud { geometry: Geometry::Sphere, dimension, points: PointData::Reals(points) })
    }

    pub fn euclidean(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(MetricError::DimensionMismatch(i, p.len(), dimension));
            }
        }
        Ok(PointCloud { geometry: Geometry::Euclidean, dimension, points: PointData::Reals(points) })
    }

    pub fn len(&self) -> usize {
        match &self.points {
            PointData::Bits(v) => v.len(),
            PointData::Reals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The geometry's metric: Hamming distance (bit count), great-circle
    /// distance arccos<u,v>, or the Euclidean norm.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match (&self.points, self.geometry) {
            (PointData::Bits(v), _) => hamming_distance(&v[i], &v[j]) as f64,
            (PointData::Reals(v), Geometry::Sphere) => {
                let dot: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                dot.clamp(-1.0, 1.0).acos()
            }
            (PointData::Reals(v), _) => {
                v[i].iter().zip(&v[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            }
        }
    }

    pub fn bits(&self) -> &[VSet] {
        match &self.points {
            PointData::Bits(v) => v,
            _ => panic!("not a hamming cloud"),
        }
    }

    pub fn reals(&self) -> &[Vec<f64>] {
        match &self.points {
            PointData::Reals(v) => v,
            _ => panic!("not a real-coordinate cloud"),
        }
    }
}

pub fn hamming_distance(a: &VSet, b: &VSet) -> usize {
    a.union(b).len() - a.intersection_size(b)
}

/// Bit k of coordinate byte j holds coordinate 8j + k; lowercase hex.
pub fn pack_bits_hex(p: &VSet) -> String {
    let nbytes = (p.ground_size() + 7) / 8;
    let mut bytes = vec![0u8; nbytes];
    for i in p.iter() {
        bytes[i / 8] |= 1 << (i % 8);
    }
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn unpack_bits_hex(dimension: usize, s: &str) -> Result<VSet, String> {
    if s.len() != 2 * ((dimension + 7) / 8) {
        return Err(format!("hex string length {} does not match dimension {dimension}", s.len()));
    }
    let mut out = VSet::empty(dimension);
    for (j, chunk) in s.as_bytes().chunks(2).enumerate() {
        let byte = u8::from_str_radix(std::str::from_utf8(chunk).map_err(|e| e.to_string())?, 16)
            .map_err(|e| e.to_string())?;
        for k in 0..8 {
            if byte & (1 << k) != 0 {
                let idx = 8 * j + k;
                if idx >= dimension {
                    return Err(format!("bit {idx} beyond dimension {dimension}"));
                }
                out.insert(idx);
            }
        }
    }
    Ok(out)
}

impl Serialize for PointCloud {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let packed = matches!(self.points, PointData::Bits(_));
        let mut st = ser.serialize_struct("PointCloud", if packed { 4 } else { 3 })?;
        st.serialize_field("geometry", self.geometry.name())?;
        st.serialize_field("dimension", &self.dimension)?;
        match &self.points {
            PointData::Bits(v) => {
                let rows: Vec<Vec<u8>> = v
                    .iter()
                    .map(|p| (0..self.dimension).map(|i| p.contains(i) as u8).collect())
                    .collect();
                st.serialize_field("points", &rows)?;
                let hex: Vec<String> = v.iter().map(pack_bits_hex).collect();
                st.serialize_field("packed", &hex)?;
            }
            PointData::Reals(v) => st.serialize_field("points", v)?,
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for PointCloud {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            geometry: String,
            dimension: usize,
            #[serde(default)]
            points: Option<Vec<Vec<f64>>>,
            #[serde(default)]
            packed: Option<Vec<String>>,
        }
        let raw = Raw::deserialize(de)?;
        let geometry = match raw.geometry.as_str() {
            "hamming" => Geometry::Hamming,
            "sphere" => Geometry::Sphere,
            "euclidean" => Geometry::Euclidean,
            g => return Err(DeError::custom(format!("unknown geometry {g:?}"))),
        };
        if geometry == Geometry::Hamming {
            let bits: Vec<VSet> = if let Some(hex) = raw.packed {
                hex.iter()
                    .map(|s| unpack_bits_hex(raw.dimension, s).map_err(DeError::custom))
                    .collect::<Result<_, _>>()?
            } else {
                let pts = raw.points.ok_or_else(|| DeError::custom("missing points"))?;
                pts.iter()
                    .map(|row| {
                        if row.len() != raw.dimension {
                            return Err(DeError::custom("point dimension mismatch"));
                        }
                        let mut v = VSet::empty(raw.dimension);
                        for (i, &x) in row.iter().enumerate() {
                            if x == 1.0 {
                                v.insert(i);
                            } else if x != 0.0 {
                                return Err(DeError::custom("hamming coordinate not in {0,1}"));
                            }
                        }
                        Ok(v)
                    })
                    .collect::<Result<_, _>>()?
            };
            return Ok(PointCloud::hamming(raw.dimension, bits));
        }
        let pts = raw.points.ok_or_else(|| DeError::custom("missing points"))?;
        match geometry {
            Geometry::Sphere => PointCloud::sphere(raw.dimension, pts).map_err(DeError::custom),
            _ => PointCloud::euclidean(raw.dimension, pts).map_err(DeError::custom),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricTrigraph {
    pub trigraph: TriGraph,
    pub tau: f64,
    pub eps: f64,
    pub guard_band: f64,
}

/// Edge iff d <= tau, red iff tau < d <= tau + eps, up to the guard band.
pub fn metric_trigraph(p: &PointCloud, tau: f64, eps: f64) -> MetricTrigraph {
    assert!(tau >= 0.0 && eps >= 0.0);
    let n = p.len();
    let mut b = TriGraphBuilder::new(n);
    for v in 1..n {
        for u in 0..v {
            let d = p.distance(u, v);
            let st = if d <= tau + GUARD_BAND {
                PairStatus::Edge
            } else if d <= tau + eps + GUARD_BAND {
                PairStatus::Red
            } else {
                PairStatus::White
            };
            b.set(u, v, st);
        }
    }
    MetricTrigraph { trigraph: b.build(), tau, eps, guard_band: GUARD_BAND }
}

/// b |-> +-1/sqrt(N) per bit; <phi(u), phi(v)> = 1 - 2 d_H(u,v)/N exactly.
pub fn embed_hamming_to_sphere(p: &PointCloud) -> Result<PointCloud, MetricError> {
    if p.geometry != Geometry::Hamming {
        return Err(MetricError::Geometry { expected: "hamming", got: p.geometry.name() });
    }
    let n = p.dimension;
    assert!(n >= 1);
    let s = 1.0 / (n as f64).sqrt();
    let pts = p
        .bits()
        .iter()
        .map(|bv| (0..n).map(|i| if bv.contains(i) { s } else { -s }).collect())
        .collect();
    PointCloud::sphere(n, pts)
}

/// Marsaglia polar method; two standard normals per rejection round.
fn gaussian_pair(rng: &mut impl RngCore) -> (f64, f64) {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        let s = x * x + y * y;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (x * f, y * f);
        }
    }
}

fn gaussian_vector(rng: &mut impl RngCore, n: usize, sd: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = gaussian_pair(rng);
        out.push(a * sd);
        if out.len() < n {
            out.push(b * sd);
        }
    }
    out
}

/// Bit j = side of the j-th uniformly random hyperplane through the origin.
/// Expected normalized distance between two images is d_S(u,v)/pi. The
/// random stream is indexed per coordinate, so batches parallelize without
/// changing the output.
pub fn embed_sphere_to_hamming(p: &PointCloud, m: usize, seed: u64) -> Result<PointCloud, MetricError> {
    if p.geometry != Geometry::Sphere {
        return Err(MetricError::Geometry { expected: "sphere", got: p.geometry.name() });
    }
    assert!(m >= 1);
    let pts = p.reals();
    let mut bits = vec![VSet::empty(m); pts.len()];
    for j in 0..m {
        let mut rng = derive_rng(seed, "sphere-hyperplane", j as u64);
        let normal = gaussian_vector(&mut rng, p.dimension, 1.0);
        for (v, pt) in pts.iter().enumerate() {
            let dot: f64 = normal.iter().zip(pt).map(|(a, b)| a * b).sum();
            if dot >= 0.0 {
                bits[v].insert(j);
            }
        }
    }
    Ok(PointCloud::hamming(m, bits))
}

pub const EUCLIDEAN_BIT_CAP: usize = 200_000;
pub const EUCLIDEAN_MAX_ROUNDS: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct GapCertificate {
    /// largest Hamming distance over originally-close pairs (d <= 1)
    pub threshold: f64,
    /// required Hamming gap eps^2 * N
    pub sensitivity: f64,
    pub checked_quadruples: usize,
    /// (v1, w1, v2, w2) with d(v1,w1) <= 1, d(v2,w2) >= 1+eps but
    /// d_H gap below sensitivity
    pub violations: Vec<(usize, usize, usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EuclideanEmbedding {
    pub cloud: PointCloud,
    pub certificate: GapCertificate,
    pub rounds_used: usize,
    pub bits: usize,
}

fn close_far_pairs(p: &PointCloud, eps: f64) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let n = p.len();
    let mut close = Vec::new();
    let mut far = Vec::new();
    for v in 0..n {
        for w in (v + 1)..n {
            let d = p.distance(v, w);
            if d <= 1.0 + GUARD_BAND {
                close.push((v, w));
            } else if d >= 1.0 + eps - GUARD_BAND {
                far.push((v, w));
            }
        }
    }
    (close, far)
}

/// Exhaustive quadruple check of the gap property against the source cloud.
pub fn check_gap(source: &PointCloud, image: &PointCloud, eps: f64) -> GapCertificate {
    let (close, far) = close_far_pairs(source, eps);
    let gap = eps * eps * image.dimension as f64;
    let bits = image.bits();
    let dh = |&(a, b): &(usize, usize)| hamming_distance(&bits[a], &bits[b]) as f64;
    let threshold = close.iter().map(dh).fold(0.0, f64::max);
    let mut violations = Vec::new();
    for &(v1, w1) in &close {
        let d1 = hamming_distance(&bits[v1], &bits[w1]) as f64;
        for &(v2, w2) in &far {
            let d2 = hamming_distance(&bits[v2], &bits[w2]) as f64;
            if d2 - d1 < gap {
                violations.push((v1, w1, v2, w2));
            }
        }
    }
    GapCertificate {
        threshold,
        sensitivity: gap,
        checked_quadruples: close.len() * far.len(),
        violations,
    }
}

/// Random-projection embedding into the Hamming cube: bit i is the side of a
/// Gaussian direction U^i (coordinate variance pi/(2n)) against a uniform
/// threshold in [-3b/sqrt(n), 3b/sqrt(n)], b = sqrt(pi ln(2/a)),
/// a = eps^2/(4pi). N is the least integer with exp(-2 eps^4 N) < 1/|V|^2.
/// Las-Vegas: redraws everything on a certificate violation, up to
/// [`EUCLIDEAN_MAX_ROUNDS`] rounds.
pub fn embed_euclidean_to_hamming(
    p: &PointCloud,
    eps: f64,
    seed: u64,
) -> Result<EuclideanEmbedding, MetricError> {
    if p.geometry != Geometry::Euclidean {
        return Err(MetricError::Geometry { expected: "euclidean", got: p.geometry.name() });
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(MetricError::BadEps);
    }
    let pts = p.reals();
    for (i, pt) in pts.iter().enumerate() {
        if pt.iter().map(|x| x * x).sum::<f64>().sqrt() > 3.0 + GUARD_BAND {
            return Err(MetricError::NormBound(i));
        }
    }
    let v = pts.len().max(2);
    let nbits = ((2.0 * (v as f64).ln()) / (2.0 * eps.powi(4))).floor() as usize + 1;
    if nbits > EUCLIDEAN_BIT_CAP {
        return Err(MetricError::BitBudget(nbits, EUCLIDEAN_BIT_CAP));
    }
    let n = p.dimension.max(1);
    let alpha = eps * eps / (4.0 * std::f64::consts::PI);
    let beta = (std::f64::consts::PI * (2.0 / alpha).ln()).sqrt();
    let tmax = 3.0 * beta / (n as f64).sqrt();
    let sd = (std::f64::consts::PI / (2.0 * n as f64)).sqrt();

    let mut worst = (0, 0, 0, 0);
    for round in 0..EUCLIDEAN_MAX_ROUNDS {
        let mut bits = vec![VSet::empty(nbits); pts.len()];
        for i in 0..nbits {
            let mut rng = derive_rng(seed, &format!("euclid-round-{round}"), i as u64);
            let u = gaussian_vector(&mut rng, n, sd);
            let t: f64 = rng.gen_range(-tmax..tmax);
            for (vtx, pt) in pts.iter().enumerate() {
                let dot: f64 = u.iter().zip(pt).map(|(a, b)| a * b).sum();
                if dot > t {
                    bits[vtx].insert(i);
                }
            }
        }
        let cloud = PointCloud::hamming(nbits, bits);
        let cert = check_gap(p, &cloud, eps);
        if cert.violations.is_empty() {
            return Ok(EuclideanEmbedding { cloud, certificate: cert, rounds_used: round + 1, bits: nbits });
        }
        worst = cert.violations[0];
    }
    Err(MetricError::GapFailure { rounds: EUCLIDEAN_MAX_ROUNDS, quadruple: worst })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShatteredSphere {
    pub cloud: PointCloud,
    /// indices of the basis points inside the cloud
    pub basis: Vec<usize>,
    pub tau: f64,
    pub eps: f64,
}

/// Orthonormal basis b_1..b_N plus, for every S subseteq [N], the point
/// v_S = (sum_{s in S} b_s - sum_{t notin S} b_t)/sqrt(N). At tau = pi/2 and
/// sensitivity 1/(2 sqrt(N)), the basis is shattered: <b_i, v_S> = +-1/sqrt(N)
/// exactly according to membership.
pub fn shattered_sphere_instance(n: usize) -> Result<ShatteredSphere, MetricError> {
    if !(2..=16).contains(&n) {
        return Err(MetricError::DimensionRange(n, 2, 16));
    }
    let s = 1.0 / (n as f64).sqrt();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + (1 << n));
    for i in 0..n {
        let mut b = vec![0.0; n];
        b[i] = 1.0;
        pts.push(b);
    }
    for mask in 0u32..(1 << n) {
        pts.push((0..n).map(|i| if mask & (1 << i) != 0 { s } else { -s }).collect());
    }
    Ok(ShatteredSphere {
        cloud: PointCloud::sphere(n, pts)?,
        basis: (0..n).collect(),
        tau: std::f64::consts::FRAC_PI_2,
        eps: 0.5 * s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vc::{is_shattered, vc_dimension};

    fn bitv(n: usize, bits: &[usize]) -> VSet {
        VSet::from_iter(n, bits.iter().copied())
    }

    #[test]
    fn trigraph_band_classification() {
        let p = PointCloud::euclidean(1, vec![vec![0.0], vec![0.5], vec![1.05], vec![3.0]]).unwrap();
        let m = metric_trigraph(&p, 1.0, 0.1);
        assert_eq!(m.trigraph.status(0, 1), PairStatus::Edge);
        assert_eq!(m.trigraph.status(0, 2), PairStatus::Red);
        assert_eq!(m.trigraph.status(0, 3), PairStatus::White);
        // antipodal sphere points at tau = pi/2: white (d = pi)
        let s = PointCloud::sphere(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let m = metric_trigraph(&s, std::f64::consts::FRAC_PI_2, 0.1);
        assert_eq!(m.trigraph.status(0, 1), PairStatus::White);
    }

    #[test]
    fn trigraph_never_misses_close_pairs() {
        let mut rng = derive_rng(11, "metric-test", 0);
        let pts: Vec<Vec<f64>> = (0..12).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let p = PointCloud::euclidean(3, pts).unwrap();
        let m = metric_trigraph(&p, 1.0, 0.2);
        for v in 0..p.len() {
            for u in 0..v {
                if p.distance(u, v) <= 1.0 {
                    assert_eq!(m.trigraph.status(u, v), PairStatus::Edge);
                }
            }
        }
    }

    #[test]
    fn hamming_to_sphere_identity() {
        let n = 64;
        let mut rng = derive_rng(12, "metric-test", 1);
        let bits: Vec<VSet> = (0..10)
            .map(|_| VSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.5))))
            .collect();
        let p = PointCloud::hamming(n, bits);
        let q = embed_hamming_to_sphere(&p).unwrap();
        for v in 0..p.len() {
            for u in 0..v {
                let dot: f64 = q.reals()[u].iter().zip(&q.reals()[v]).map(|(a, b)| a * b).sum();
                let expect = 1.0 - 2.0 * hamming_distance(&p.bits()[u], &p.bits()[v]) as f64 / n as f64;
                assert!((dot - expect).abs() < 1e-9);
            }
        }
        // equal points and complementary points
        let p = PointCloud::hamming(4, vec![bitv(4, &[0, 2]), bitv(4, &[0, 2]), bitv(4, &[1, 3])]);
        let q = embed_hamming_to_sphere(&p).unwrap();
        let dot = |a: usize, b: usize| -> f64 {
            q.reals()[a].iter().zip(&q.reals()[b]).map(|(x, y)| x * y).sum()
        };
        assert!((dot(0, 1) - 1.0).abs() < 1e-12);
        assert!((dot(0, 2) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_to_hamming_frequencies() {
        // orthogonal pair: expected normalized distance 1/2
        let p = PointCloud::sphere(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let m = 10_000;
        let mut hits = 0;
        for seed in 0..100u64 {
            let q = embed_sphere_to_hamming(&p, m, seed).unwrap();
            let f = hamming_distance(&q.bits()[0], &q.bits()[1]) as f64 / m as f64;
            if (f - 0.5).abs() <= 0.02 {
                hits += 1;
            }
        }
        assert!(hits >= 99, "only {hits}/100 within band");
        // equal points: always identical; antipodal: always full distance
        let p = PointCloud::sphere(3, vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0],
        ]).unwrap();
        let q = embed_sphere_to_hamming(&p, 256, 5).unwrap();
        assert_eq!(hamming_distance(&q.bits()[0], &q.bits()[1]), 0);
        assert_eq!(hamming_distance(&q.bits()[0], &q.bits()[2]), 256);
    }

    #[test]
    fn sphere_to_hamming_mean_matches() {
        // d_H/m tracks d_S/pi within 3 standard errors, per pair
        let mut rng = derive_rng(13, "metric-test", 2);
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|_| {
                let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0f64)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter().map(|x| x / norm).collect()
            })
            .collect();
        let p = PointCloud::sphere(4, pts).unwrap();
        let m = 20_000;
        let q = embed_sphere_to_hamming(&p, m, 17).unwrap();
        for v in 0..p.len() {
            for u in 0..v {
                let prob = p.distance(u, v) / std::f64::consts::PI;
                let se = (prob * (1.0 - prob) / m as f64).sqrt();
                let f = hamming_distance(&q.bits()[u], &q.bits()[v]) as f64 / m as f64;
                assert!((f - prob).abs() <= 3.0 * se + 1e-9, "pair ({u},{v}): {f} vs {prob}");
            }
        }
    }

    #[test]
    fn euclidean_embedding_trivial_cases() {
        // identical points map to identical strings
        let p = PointCloud::euclidean(2, vec![vec![0.3, 0.4], vec![0.3, 0.4]]).unwrap();
        let e = embed_euclidean_to_hamming(&p, 0.3, 9).unwrap();
        assert_eq!(hamming_distance(&e.cloud.bits()[0], &e.cloud.bits()[1]), 0);
        // two points at distance 2: no close pair, certificate vacuously clean
        let p = PointCloud::euclidean(1, vec![vec![0.0], vec![2.0]]).unwrap();
        let e = embed_euclidean_to_hamming(&p, 0.3, 9).unwrap();
        assert!(e.certificate.violations.is_empty());
        assert_eq!(e.certificate.checked_quadruples, 0);
    }

    #[test]
    fn euclidean_embedding_random_clouds() {
        // uniform in the radius-3 ball, dimension high enough that pairs
        // under the unit threshold are rare: the gap check is then over few
        // (often zero) close pairs, which is where the construction operates
        let mut clean = 0;
        for seed in 0..30u64 {
            let mut rng = derive_rng(seed, "metric-test-cloud", 3);
            let nv = rng.gen_range(5..=40);
            let dim = rng.gen_range(10..=20);
            let pts: Vec<Vec<f64>> = (0..nv)
                .map(|_| {
                    let g = gaussian_vector(&mut rng, dim, 1.0);
                    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let r = 3.0 * rng.gen_range(0.0..1.0f64).powf(1.0 / dim as f64);
                    g.iter().map(|x| x / norm * r).collect()
                })
                .collect();
            let p = PointCloud::euclidean(dim, pts).unwrap();
            if let Ok(e) = embed_euclidean_to_hamming(&p, 0.3, seed) {
                // the certificate must be recomputable from the clouds
                let re = check_gap(&p, &e.cloud, 0.3);
                assert!(re.violations.is_empty());
                assert_eq!(re.checked_quadruples, e.certificate.checked_quadruples);
                clean += 1;
            }
        }
        assert!(clean >= 27, "only {clean}/30 clean");
    }

    #[test]
    fn shattered_sphere_shatters() {
        for n in 2..=4 {
            let inst = shattered_sphere_instance(n).unwrap();
            // construction identity: <b_i, v_S> = +-1/sqrt(N)
            let s = 1.0 / (n as f64).sqrt();
            let pts = inst.cloud.reals();
            for mask in 0..(1usize << n) {
                let v = &pts[n + mask];
                for i in 0..n {
                    let dot: f64 = pts[i].iter().zip(v).map(|(a, b)| a * b).sum();
                    let expect = if mask & (1 << i) != 0 { s } else { -s };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
            let m = metric_trigraph(&inst.cloud, inst.tau, inst.eps);
            let h = m.trigraph.to_hypergraph();
            let basis = VSet::from_iter(h.ground_size, inst.basis.iter().copied());
            assert!(is_shattered(&h, &basis).is_some());
            let vc = vc_dimension(&h, n);
            assert!(vc.dimension >= n as i64, "vc {} < {n}", vc.dimension);
        }
        assert!(shattered_sphere_instance(1).is_err());
        assert!(shattered_sphere_instance(17).is_err());
    }

    #[test]
    fn cloud_json_roundtrip() {
        let p = PointCloud::hamming(10, vec![bitv(10, &[0, 3, 9]), bitv(10, &[])]);
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.contains("\"packed\""));
        let q: PointCloud = serde_json::from_str(&js).unwrap();
        assert_eq!(p, q);
        // packed-only input
        let q2: PointCloud = serde_json::from_str(
            r#"{"geometry":"hamming","dimension":10,"packed":["0902","0000"]}"#,
        )
        .unwrap();
        assert_eq!(p, q2);
        let s = PointCloud::sphere(2, vec![vec![0.6, 0.8]]).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        let t: PointCloud = serde_json::from_str(&js).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn hamming_sphere_threshold_transfer() {
        // arccos(a) - arccos(b) >= b - a for -1 <= b <= a <= 1, sampled;
        // so a Hamming gap of 2 eps survives the sphere embedding
        let mut rng = derive_rng(14, "metric-test", 4);
        for _ in 0..200 {
            let mut a: f64 = rng.gen_range(-1.0..1.0);
            let mut b: f64 = rng.gen_range(-1.0..1.0);
            if b > a {
                std::mem::swap(&mut a, &mut b);
            }
            // now b <= a, so arccos(b) >= arccos(a); arccos is 1-Lipschitz
            // from below: it shrinks no gap
            assert!(b.acos() - a.acos() >= a - b - 1e-12);
        }
    }
}
