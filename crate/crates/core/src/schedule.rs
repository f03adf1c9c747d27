//! Iterated logarithms, the epsilon schedules, and run parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Central-ball constant of the unrefined schedule.
pub const PAPER_C: f64 = 65536.0;

/// `log^(t) x`, all logarithms base 2; `t = 0` returns `x`.
pub fn iterated_log(x: f64, t: u32) -> Result<f64> {
    let mut v = x;
    for step in 0..t {
        if !(v > 0.0) {
            return Err(Error::Domain(format!(
                "log^({}) of {x} is undefined: argument {v} at step {step}",
                t
            )));
        }
        v = v.log2();
    }
    Ok(v)
}

/// `log* x = min { t : 1 <= log^(t) x < 2 }`.
pub fn log_star(x: f64) -> Result<u32> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("log* needs x >= 2, got {x}")));
    }
    let mut v = x;
    let mut t = 0;
    while !(1.0..2.0).contains(&v) {
        v = v.log2();
        t += 1;
    }
    Ok(t)
}

/// `phi_t(n) = prod_{k=2..t} log^(k) n`, with `phi_1 = 1`.
pub fn phi(n: f64, t: u32) -> Result<f64> {
    let top = log_star(n)?;
    if t < 1 || t > top {
        return Err(Error::Domain(format!("phi_t(n) needs 1 <= t <= log* n = {top}, got t = {t}")));
    }
    let mut prod = 1.0;
    let mut v = n.log2();
    for _ in 2..=t {
        v = v.log2();
        prod *= v;
    }
    Ok(prod)
}

/// `k = 20 c (ln(1/eps) + 5)`, rounded up.
pub fn scale_gap_k(eps: f64, c: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("scale gap needs 0 < eps <= 1, got {eps}")));
    }
    let k = 20.0 * c * (-eps.ln() + 5.0);
    // absorb rounding noise so exact integers stay put
    Ok((k - 1e-9).ceil() as u64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Demo,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    /// `eps = 1 / (170 c log log |X|)`.
    Basic,
    /// `eps = 1 / (170 c phi_t(|X|))`.
    Iterated { t: u32 },
    /// A constant eps; demo mode only.
    Fixed { eps: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub c: f64,
    pub schedule: Schedule,
    /// Base-case radius in demo mode; paper mode always uses `16 c`.
    pub base_radius: f64,
    pub seed: u64,
    pub mode: Mode,
    /// Short-edge contraction constant; 0 disables contraction.
    pub contraction: f64,
    pub per_component: bool,
    pub shuffle: bool,
    /// Draw the root uniformly instead of defaulting to vertex 0.
    pub random_root: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params::demo(2.0, 0.5)
    }
}

impl Params {
    pub fn demo(c: f64, eps: f64) -> Self {
        Params {
            c,
            schedule: Schedule::Fixed { eps },
            base_radius: 1.0,
            seed: 0,
            mode: Mode::Demo,
            contraction: 0.0,
            per_component: false,
            shuffle: false,
            random_root: false,
        }
    }

    /// c = 2^16 with the unrefined schedule.
    pub fn paper_basic() -> Self {
        Params {
            c: PAPER_C,
            schedule: Schedule::Basic,
            mode: Mode::Paper,
            ..Params::default()
        }
    }

    /// The refined schedule for an `n`-vertex graph:
    /// `t = floor(log* n / 2)` (at least 1) and `c = 2^18 log^(t) n`.
    pub fn paper_iterated(n: usize) -> Result<Self> {
        let t = paper_t(n)?;
        Ok(Params {
            c: paper_iterated_c(n, t)?,
            schedule: Schedule::Iterated { t },
            mode: Mode::Paper,
            ..Params::default()
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Radius at or below which a cluster becomes a shortest-path tree.
    pub fn base_threshold(&self) -> f64 {
        match self.mode {
            Mode::Paper => 16.0 * self.c,
            Mode::Demo => self.base_radius,
        }
    }

    /// Checks the parameter invariants for a graph with `n` vertices.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(Error::Params(m));
        if !(self.c.is_finite() && self.c >= 2.0) {
            return bad(format!("c must be a finite number >= 2, got {}", self.c));
        }
        if !(self.contraction.is_finite() && self.contraction >= 0.0) {
            return bad(format!("contraction constant must be >= 0, got {}", self.contraction));
        }
        match self.schedule {
            Schedule::Fixed { eps } if !(eps > 0.0 && eps <= 0.5) => {
                return bad(format!("fixed eps must lie in (0, 1/2], got {eps}"))
            }
            Schedule::Iterated { t: 0 } => return bad("iterated schedule needs t >= 1".into()),
            _ => {}
        }
        match self.mode {
            Mode::Demo => {
                if !(self.base_radius.is_finite() && self.base_radius >= 0.0) {
                    return bad(format!("base radius must be >= 0, got {}", self.base_radius));
                }
            }
            Mode::Paper => match self.schedule {
                Schedule::Fixed { .. } => return bad("a fixed eps is only allowed in demo mode".into()),
                Schedule::Basic if self.c != PAPER_C => {
                    return bad(format!("paper mode with the basic schedule needs c = 2^16, got {}", self.c))
                }
                Schedule::Iterated { t } => {
                    let want_t = paper_t(n)?;
                    let want_c = paper_iterated_c(n, want_t)?;
                    if t != want_t || self.c != want_c {
                        return bad(format!(
                            "paper mode with the iterated schedule needs t = {want_t}, c = {want_c} for n = {n}"
                        ));
                    }
                }
                Schedule::Basic => {}
            },
        }
        Ok(())
    }
}

fn paper_t(n: usize) -> Result<u32> {
    Ok((log_star(n.max(2) as f64)? / 2).max(1))
}

fn paper_iterated_c(n: usize, t: u32) -> Result<f64> {
    Ok(262144.0 * iterated_log(n.max(2) as f64, t)?.max(1.0))
}

/// The eps used when star-partitioning a cluster of `cluster_size` vertices.
pub fn epsilon_for(cluster_size: usize, params: &Params) -> f64 {
    let c = params.c;
    match params.schedule {
        Schedule::Basic => {
            let ll = (cluster_size as f64).log2().log2();
            1.0 / (170.0 * c * ll.max(1.0))
        }
        Schedule::Iterated { t } => {
            let n = (cluster_size.max(16)) as f64;
            let t = t.clamp(1, log_star(n).expect("n >= 16"));
            1.0 / (170.0 * c * phi(n, t).expect("t within range"))
        }
        Schedule::Fixed { eps } => eps,
    }
}
