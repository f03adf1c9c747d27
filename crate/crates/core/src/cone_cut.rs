//! Cone cuts: growth-rate portal selection and the truncated exponential
//! radius.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ConeContext;
use crate::error::{precondition, Error, Result};
use crate::graph::{path_to, sssp, BallCounter, Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate {
    /// `|X| / ball_size`.
    pub chi: f64,
    pub anchor: usize,
    pub ball_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSample {
    /// Dimensionless radius; the cone radius is `r * Delta`.
    pub r: f64,
    /// 1-based index of the chosen subinterval.
    pub interval: u32,
    pub intervals: u32,
    pub coins: Vec<bool>,
}

impl RadiusSample {
    /// Bounds of subinterval `h` of `[eps/4, eps/2]` split into `n` parts.
    pub fn subinterval(eps: f64, n: u32, h: u32) -> (f64, f64) {
        let w = eps / (4.0 * n as f64);
        (eps / 4.0 + (h - 1) as f64 * w, eps / 4.0 + h as f64 * w)
    }
}

/// Portal choice for the next cone.
#[derive(Clone, Debug, PartialEq)]
pub struct PortalChoice {
    pub anchor: usize,
    /// Tail in the central ball.
    pub y: usize,
    /// Head in the unassigned set; the cone's center.
    pub x: usize,
    pub growth: GrowthRate,
}

#[derive(Clone, Debug)]
pub struct ConeCut {
    pub members: VertexSet,
    pub y: usize,
    pub x: usize,
    pub sample: RadiusSample,
    pub growth: GrowthRate,
}

/// `N = max(1, ceil(2 log2 chi))`.
pub fn interval_count(chi: f64) -> u32 {
    let n = (2.0 * chi.log2()).ceil();
    if n >= 1.0 {
        n as u32
    } else {
        1
    }
}

pub fn sample_truncated_radius<R: Rng + ?Sized>(chi: f64, eps: f64, rng: &mut R) -> Result<RadiusSample> {
    if !(chi >= 1.0) {
        return precondition(format!("growth rate must be >= 1, got {chi}"));
    }
    if !(eps > 0.0) {
        return precondition(format!("eps must be positive, got {eps}"));
    }
    let n = interval_count(chi);
    let mut h = 1;
    let mut coins = Vec::new();
    loop {
        let head: bool = rng.gen();
        coins.push(head);
        if head && h < n {
            h += 1;
        } else {
            break;
        }
    }
    let (lo, hi) = RadiusSample::subinterval(eps, n, h);
    Ok(RadiusSample {
        r: uniform_in(lo, hi, rng),
        interval: h,
        intervals: n,
        coins,
    })
}

/// Uniform draw from `[lo, hi]` using a 53-bit mantissa.
pub(crate) fn uniform_in<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    let u = (rng.gen::<u64>() >> 11) as f64 / (1u64 << 53) as f64;
    (lo + u * (hi - lo)).clamp(lo, hi)
}

/// The first edge of a vertex path whose head lies in `y_set`, with its tail
/// required to lie in `x0_set`.
pub(crate) fn first_crossing(path: &[usize], x0_set: &VertexSet, y_set: &VertexSet) -> Result<(usize, usize)> {
    let i = path
        .iter()
        .position(|&v| y_set.contains(v))
        .ok_or_else(|| Error::Internal("shortest path never enters the unassigned set".into()))?;
    if i == 0 || !x0_set.contains(path[i - 1]) {
        return Err(Error::Internal(format!(
            "shortest path enters the unassigned set at {} from outside the central ball",
            path[i]
        )));
    }
    Ok((path[i - 1], path[i]))
}

/// Picks the anchor minimising `|X| / |B_Y(z, eps Delta / 16)|` (lowest id on
/// ties) and the portal edge on the canonical shortest path toward it.
pub fn select_portal(
    g: &Graph,
    x_size: usize,
    x0: usize,
    x0_set: &VertexSet,
    y_set: &VertexSet,
    delta: f64,
    eps: f64,
) -> Result<PortalChoice> {
    if y_set.is_empty() || x0_set.is_empty() {
        return precondition("portal selection needs a nonempty central ball and unassigned set");
    }
    let radius = eps * delta / 16.0;
    let mut counter = BallCounter::new(g.vertex_count());
    let mut best: Option<(usize, usize)> = None;
    for z in y_set.iter() {
        let size = counter.count(g, y_set, z, radius);
        // largest ball gives the smallest ratio; iteration is ascending so `>` keeps the lowest id
        if best.map_or(true, |(b, _)| size > b) {
            best = Some((size, z));
        }
    }
    let (ball_size, anchor) = best.expect("y_set is nonempty");
    let ambient = x0_set.union(y_set);
    let dm = sssp(g, &ambient, x0)?;
    let path = path_to(g, &ambient, &dm, anchor)?;
    let (y, x) = first_crossing(&path, x0_set, y_set)?;
    Ok(PortalChoice {
        anchor,
        y,
        x,
        growth: GrowthRate {
            chi: x_size as f64 / ball_size as f64,
            anchor,
            ball_size,
        },
    })
}

/// One cone cut: portal selection, radius sampling, and the cone ball.
#[allow(clippy::too_many_arguments)]
pub fn cut_cone<R: Rng + ?Sized>(
    g: &Graph,
    x_size: usize,
    x0: usize,
    x0_set: &VertexSet,
    y_set: &VertexSet,
    delta: f64,
    eps: f64,
    rng: &mut R,
) -> Result<ConeCut> {
    let choice = select_portal(g, x_size, x0, x0_set, y_set, delta, eps)?;
    let sample = sample_truncated_radius(choice.growth.chi, eps, rng)?;
    let ctx = ConeContext::new(g, &x0_set.union(y_set), y_set, x0, choice.x)?;
    Ok(ConeCut {
        members: ctx.ball(sample.r * delta)?,
        y: choice.y,
        x: choice.x,
        sample,
        growth: choice.growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_unit_edges(n, &e).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    // brute-force growth oracle: a fresh ball per candidate
    fn oracle_min_chi(g: &Graph, x_size: usize, y_set: &VertexSet, radius: f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for z in y_set.iter() {
            let chi = x_size as f64 / ball(g, y_set, z, radius).unwrap().len() as f64;
            if chi < best.0 {
                best = (chi, z);
            }
        }
        best
    }

    #[test]
    fn k4_portal() {
        let g = complete(4);
        let x0 = VertexSet::singleton(4, 0);
        let y = VertexSet::from_vertices(4, [1, 2, 3]);
        // eps * Delta / 16 = 1
        let pc = select_portal(&g, 4, 0, &x0, &y, 16.0, 1.0).unwrap();
        assert_eq!(oracle_min_chi(&g, 4, &y, 1.0), (4.0 / 3.0, 1));
        assert_eq!(pc.growth.chi, 4.0 / 3.0);
        assert_eq!(pc.anchor, 1);
        assert_eq!((pc.y, pc.x), (0, 1));
    }

    #[test]
    fn star_portal() {
        let g = Graph::from_unit_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let x0 = VertexSet::singleton(4, 0);
        let y = VertexSet::from_vertices(4, [1, 2, 3]);
        let pc = select_portal(&g, 4, 0, &x0, &y, 1.0, 0.5).unwrap();
        assert_eq!(oracle_min_chi(&g, 4, &y, 0.5 / 16.0), (4.0, 1));
        assert_eq!(pc.growth.chi, 4.0);
        assert_eq!(pc.anchor, 1);
    }

    #[test]
    fn single_candidate_portal() {
        let g = path(4);
        let x0 = VertexSet::from_vertices(4, [0, 1, 2]);
        let y = VertexSet::singleton(4, 3);
        let pc = select_portal(&g, 4, 0, &x0, &y, 3.0, 0.5).unwrap();
        assert_eq!(pc.anchor, 3);
        assert_eq!(pc.growth.chi, 4.0);
        assert_eq!((pc.y, pc.x), (2, 3));
    }

    #[test]
    fn interval_counts() {
        assert_eq!(interval_count(16.0), 8);
        assert_eq!(interval_count(1.0), 1);
        assert_eq!(interval_count(1.2), 1);
        assert_eq!(interval_count(2.0), 2);
        assert_eq!(interval_count(1024.0), 20);
        let (lo, hi) = RadiusSample::subinterval(1.0, 8, 1);
        assert_eq!((lo, hi), (0.25, 0.25 + 1.0 / 32.0));
        assert_eq!(RadiusSample::subinterval(1.0, 8, 8).1, 0.5);
    }

    #[test]
    fn sampler_ranges_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let s = sample_truncated_radius(16.0, 0.4, &mut rng).unwrap();
            assert_eq!(s.intervals, 8);
            assert!((1..=8).contains(&s.interval));
            let (lo, hi) = RadiusSample::subinterval(0.4, 8, s.interval);
            assert!(lo <= s.r && s.r <= hi);
            // heads before the final toss advance h
            let heads = s.coins.iter().take(s.coins.len() - 1).filter(|&&c| c).count();
            assert_eq!(heads as u32 + 1, s.interval);
        }
        let one = sample_truncated_radius(1.0, 0.4, &mut rng).unwrap();
        assert_eq!(one.intervals, 1);
        assert!((0.1..=0.2).contains(&one.r));
        let a = sample_truncated_radius(16.0, 0.3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_truncated_radius(16.0, 0.3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(sample_truncated_radius(0.5, 0.3, &mut rng).is_err());
    }

    #[test]
    fn sampler_first_interval_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 100_000;
        let mut counts = [0u32; 9];
        for _ in 0..trials {
            counts[sample_truncated_radius(16.0, 0.5, &mut rng).unwrap().interval as usize] += 1;
        }
        let p1 = counts[1] as f64 / trials as f64;
        assert!((p1 - 0.5).abs() <= 0.01);
        let p8 = 2f64.powi(-7);
        let sigma = (p8 * (1.0 - p8) / trials as f64).sqrt();
        assert!((counts[8] as f64 / trials as f64 - p8).abs() <= 3.0 * sigma);
    }

    #[test]
    fn cone_cut_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = path(5);
        let x0 = VertexSet::from_vertices(5, [0, 1, 2]);
        let y = VertexSet::from_vertices(5, [3, 4]);
        let cut = cut_cone(&g, 5, 0, &x0, &y, 4.0, 0.5, &mut rng).unwrap();
        assert_eq!(cut.members.members(), &[3, 4]);
        assert_eq!((cut.y, cut.x), (2, 3));

        let single = VertexSet::singleton(5, 4);
        let x0b = VertexSet::from_vertices(5, 0..4);
        let cut = cut_cone(&g, 5, 0, &x0b, &single, 4.0, 0.5, &mut rng).unwrap();
        assert_eq!(cut.members, single);

        // C6 with the central ball {0}: threshold of 4 is 2, of 5 is 4
        let c6 = Graph::from_unit_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
        let x0c = VertexSet::singleton(6, 0);
        let yc = VertexSet::from_vertices(6, 1..6);
        // eps Delta / 16 < 1 so every growth ball is a singleton and the anchor is 1
        let cut = cut_cone(&c6, 6, 0, &x0c, &yc, 3.0, 0.5, &mut rng).unwrap();
        assert_eq!((cut.y, cut.x), (0, 1));
        assert!(cut.sample.r * 3.0 < 2.0);
        assert_eq!(cut.members.members(), &[1, 2, 3]);
    }
}
