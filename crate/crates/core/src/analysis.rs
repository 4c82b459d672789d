//! Threshold arithmetic and deterministic load-bound checks.
//!
//! Everything here answers one question from two directions: how long do the
//! color lists have to be, as a function of the uniformity k and the maximum
//! degree Δ, for the sampled partial coloring to leave every last-part
//! vertex extendable?
//!
//! * `q_threshold` is the headline list size ((4/5)(k−1+ε)·Δ/ln Δ)^(1/(k−1)).
//! * `q_requirement` is the list size the per-vertex analysis actually
//!   needs; it is a fixed point because the maximum landing probability p
//!   depends on q itself.
//! * `select_focus_colors` picks, per last-part vertex, the color subset
//!   whose average expected load is provably small — the whole list when
//!   edge-wise list overlaps are small on average, the high-ranked tail
//!   otherwise — and `check_load_bound` verifies the bound in exact
//!   arithmetic.
//! * `lll_certificate` evaluates the dependency-graph success condition
//!   e·p·(d+1) < 1 in log space: the degrees where it starts holding are far
//!   beyond what a float can represent directly.

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{KPartiteHypergraph, VertexId};
use crate::lists::ListAssignment;
use crate::sampler::expected_problematic;

/// The constant `a` of the load bound Δ(a+γ)/q^(k−1).
pub const A_EXISTENCE: f64 = 0.8;

/// Slack parameter γ = ε/(4k) used throughout the analysis.
pub fn slack_gamma(k: u32, epsilon: f64) -> f64 {
    epsilon / (4.0 * f64::from(k))
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::BadParameter(format!("need k >= 2 (got {k})")));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadParameter(format!(
            "epsilon must lie in (0,1) (got {epsilon})"
        )));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 1.0) {
        return Err(Error::DegreeTooSmall(delta));
    }
    Ok(())
}

/// List size ((4/5)(k−1+ε)·Δ/ln Δ)^(1/(k−1)) above which list coloring is
/// guaranteed for large Δ.
pub fn q_threshold(k: u32, delta: f64, epsilon: f64) -> Result<f64> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    let inner = 0.8 * (f64::from(k) - 1.0 + epsilon) * delta / delta.ln();
    Ok(inner.powf(1.0 / (f64::from(k) - 1.0)))
}

/// Largest landing probability over all edges and colors for lists of size
/// q: the rank-1 case 2(4q−3)/(q^(k−1)(5q−3)), exact.
pub fn max_problematic_prob(k: u32, q: u32) -> Result<BigRational> {
    check_k(k)?;
    if q < 2 {
        return Err(Error::ListSizeTooSmall { got: q, min: 2 });
    }
    let q = u64::from(q);
    Ok(BigRational::new(
        BigInt::from(2 * (4 * q - 3)),
        BigInt::from(q).pow(k - 1) * BigInt::from(5 * q - 3),
    ))
}

/// Floating-point twin of [`max_problematic_prob`], defined for real q so
/// the fixed-point iteration below can use it between integers.
pub fn max_problematic_prob_f64(k: u32, q: f64) -> f64 {
    2.0 * (4.0 * q - 3.0) / (q.powi(k as i32 - 1) * (5.0 * q - 3.0))
}

/// List size required by the per-vertex analysis: the fixed point of
/// q = ((k−1)(a+2γ)/(1−p(k,q)) · Δ/ln Δ)^(1/(k−1)), solved by iteration to
/// relative tolerance 1e−9.
pub fn q_requirement(k: u32, delta: f64, gamma: f64, a: f64) -> Result<f64> {
    check_k(k)?;
    check_delta(delta)?;
    if !(gamma > 0.0 && gamma < 1.0) || !(a > 0.0 && a < 1.0) {
        return Err(Error::BadParameter(format!(
            "gamma and a must lie in (0,1) (got gamma = {gamma}, a = {a})"
        )));
    }
    let base = (f64::from(k) - 1.0) * (a + 2.0 * gamma) * delta / delta.ln();
    let inv = 1.0 / (f64::from(k) - 1.0);
    let mut q = base.powf(inv);
    for _ in 0..100 {
        let p = max_problematic_prob_f64(k, q);
        if !(0.0..1.0).contains(&p) {
            return Err(Error::BadParameter(format!(
                "landing probability {p} outside [0,1) at q = {q}; degree too small"
            )));
        }
        let next = (base / (1.0 - p)).powf(inv);
        if (next - q).abs() <= 1e-9 * next {
            return Ok(next);
        }
        q = next;
    }
    Err(Error::NonConvergent(100))
}

/// Log-space version of [`q_requirement`]: takes ln Δ, returns ln q. Needed
/// because the certificate regime starts at degrees like e^700.
pub fn q_requirement_ln(k: u32, ln_delta: f64, gamma: f64, a: f64) -> Result<f64> {
    check_k(k)?;
    if !(ln_delta > 0.0) {
        return Err(Error::DegreeTooSmall(ln_delta.exp()));
    }
    if !(gamma > 0.0 && gamma < 1.0) || !(a > 0.0 && a < 1.0) {
        return Err(Error::BadParameter(format!(
            "gamma and a must lie in (0,1) (got gamma = {gamma}, a = {a})"
        )));
    }
    let inv = 1.0 / (f64::from(k) - 1.0);
    let base_ln =
        ((f64::from(k) - 1.0) * (a + 2.0 * gamma)).ln() + ln_delta - ln_delta.ln();
    let mut ln_q = inv * base_ln;
    for _ in 0..100 {
        // Past ln q ≈ 200 the landing probability underflows to zero anyway.
        let p = if ln_q > 200.0 {
            0.0
        } else {
            max_problematic_prob_f64(k, ln_q.exp())
        };
        if !(0.0..1.0).contains(&p) {
            return Err(Error::BadParameter(format!(
                "landing probability {p} outside [0,1) at ln q = {ln_q}"
            )));
        }
        let next = inv * (base_ln - (-p).ln_1p());
        if (next - ln_q).abs() <= 1e-12 * next.abs().max(1.0) {
            return Ok(next);
        }
        ln_q = next;
    }
    Err(Error::NonConvergent(100))
}

/// Every scalar of the analysis for one (k, Δ, ε) triple.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdParams {
    pub k: u32,
    pub delta: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub a: f64,
    pub q_threshold: f64,
    pub q_requirement: f64,
    /// Integer list size actually used: ⌈q_requirement⌉, at least 2.
    pub q: u32,
    /// Maximum landing probability at the integer q.
    pub p: f64,
}

impl ThresholdParams {
    pub fn new(k: u32, delta: f64, epsilon: f64) -> Result<Self> {
        check_k(k)?;
        check_epsilon(epsilon)?;
        check_delta(delta)?;
        let gamma = slack_gamma(k, epsilon);
        let a = A_EXISTENCE;
        let q_thr = q_threshold(k, delta, epsilon)?;
        let q_req = q_requirement(k, delta, gamma, a)?;
        let q = (q_req.ceil() as u32).max(2);
        let p = max_problematic_prob(k, q)?
            .to_f64()
            .expect("small rational fits in f64");
        Ok(ThresholdParams {
            k,
            delta,
            epsilon,
            gamma,
            a,
            q_threshold: q_thr,
            q_requirement: q_req,
            q,
            p,
        })
    }

    /// Right-hand side of the load bound, Δ(a+γ)/q^(k−1).
    pub fn load_bound_rhs(&self) -> f64 {
        self.delta * (self.a + self.gamma) / f64::from(self.q).powi(self.k as i32 - 1)
    }

    /// Same bound as an exact rational (a = 4/5 exactly; γ taken as the
    /// exact binary value of the ε input).
    pub fn load_bound_rhs_exact(&self) -> BigRational {
        let delta = BigRational::from_float(self.delta).expect("finite delta");
        let eps = BigRational::from_float(self.epsilon).expect("finite epsilon");
        let gamma = eps / BigRational::from(BigInt::from(4 * u64::from(self.k)));
        let a = BigRational::new(BigInt::from(4), BigInt::from(5));
        let qk = BigRational::from(BigInt::from(u64::from(self.q)).pow(self.k - 1));
        delta * (a + gamma) / qk
    }

    pub fn lll_certificate(&self, blocked_prob_bound: Option<f64>) -> Result<LllCertificate> {
        lll_certificate(self.k, self.epsilon, self.delta, blocked_prob_bound)
    }
}

/// Which side of the average-overlap split a vertex falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapRegime {
    /// Average shared-list size over the vertex's edges is ≤ 2q/3.
    Low,
    /// Average shared-list size exceeds 2q/3.
    High,
}

/// The focus color set of one last-part vertex, with its measured load.
#[derive(Clone, Debug)]
pub struct FocusSelection {
    pub vertex: VertexId,
    pub regime: OverlapRegime,
    /// The chosen colors: the full list in the low regime, the tail of
    /// ranks ≥ (1−γ)q in the high regime.
    pub colors: Vec<u32>,
    /// Σ over the vertex's edges of the shared-list size.
    pub overlap_sum: u64,
    /// The instance's global maximum degree, used as the normalizer.
    pub max_degree: u64,
    /// z = overlap_sum / Δ.
    pub mean_overlap: f64,
    /// Average over the focus colors of the expected number of edges
    /// landing on the color, exact.
    pub mean_load_exact: BigRational,
    pub mean_load: f64,
}

/// Picks the focus colors for `v` and measures their average expected load.
/// The split is exact: low regime iff 3·overlap_sum ≤ 2·q·Δ.
pub fn select_focus_colors(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    gamma: f64,
    v: VertexId,
) -> Result<FocusSelection> {
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    if !lists.is_normalized(q) {
        return Err(Error::NotNormalized { q });
    }
    let delta = h.max_degree() as u64;
    let mut overlap_sum: u64 = 0;
    for &ei in h.incident_edges(v)? {
        overlap_sum += lists.common_list(h, h.edge(ei as usize))?.len() as u64;
    }
    let low = 3 * overlap_sum <= 2 * u64::from(q) * delta;
    let list = lists.for_vertex(h, v)?;
    let colors: Vec<u32> = if low {
        list.iter().collect()
    } else {
        let cut = (1.0 - gamma) * f64::from(q);
        list.iter()
            .enumerate()
            .filter(|(i, _)| (*i as f64 + 1.0) >= cut)
            .map(|(_, c)| c)
            .collect()
    };
    if colors.is_empty() {
        return Err(Error::EmptyFocusSet { vertex: v });
    }
    let mut total = BigRational::zero();
    for &c in &colors {
        total += expected_problematic(h, lists, q, v, c)?;
    }
    let mean_load_exact = total / BigRational::from(BigInt::from(colors.len() as u64));
    let mean_load = mean_load_exact.to_f64().unwrap_or(f64::NAN);
    Ok(FocusSelection {
        vertex: v,
        regime: if low { OverlapRegime::Low } else { OverlapRegime::High },
        colors,
        overlap_sum,
        max_degree: delta,
        mean_overlap: if delta == 0 {
            0.0
        } else {
            overlap_sum as f64 / delta as f64
        },
        mean_load_exact,
        mean_load,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LoadBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the measured average load against Δ(a+γ)/q^(k−1). The verdict
/// is computed in exact rational arithmetic; the f64 fields are for
/// reporting.
pub fn check_load_bound(sel: &FocusSelection, params: &ThresholdParams) -> LoadBoundCheck {
    let rhs = params.load_bound_rhs_exact();
    let holds = sel.mean_load_exact <= rhs;
    LoadBoundCheck {
        lhs: sel.mean_load,
        rhs: rhs.to_f64().unwrap_or(f64::NAN),
        holds,
    }
}

/// Closed-form ceiling for the average load in the low-overlap regime:
/// (8/5)/(q^(k−1)(1−3/(5q))) · (zΔ/q − 3Δz²/(8q²)).
pub fn low_overlap_load_bound(k: u32, q: u32, delta: f64, z: f64) -> f64 {
    let qf = f64::from(q);
    let front = 1.6 / (qf.powi(k as i32 - 1) * (1.0 - 3.0 / (5.0 * qf)));
    front * (z * delta / qf - 3.0 * delta * z * z / (8.0 * qf * qf))
}

/// ln of the tail bound exp(−Δ^(γ/3k)) on the probability that a last-part
/// vertex has every color forbidden.
pub fn blocked_prob_bound_ln(k: u32, gamma: f64, ln_delta: f64) -> f64 {
    -((gamma / (3.0 * f64::from(k))) * ln_delta).exp()
}

pub fn blocked_prob_bound(k: u32, gamma: f64, delta: f64) -> f64 {
    blocked_prob_bound_ln(k, gamma, delta.ln()).exp()
}

/// The dependency-graph success condition e·p·(d+1) < 1 with
/// p = exp(−Δ^(ε/(12k²))) and d+1 = (k−1)Δ², evaluated in log space.
#[derive(Clone, Debug, Serialize)]
pub struct LllCertificate {
    pub k: u32,
    pub epsilon: f64,
    pub ln_delta: f64,
    /// Per-event probability bound; may underflow to 0 at large degrees.
    pub p_lll: f64,
    /// ln of the per-event probability bound (= −Δ^(ε/(12k²)) by default).
    pub ln_p_lll: f64,
    /// Events dependent on any fixed event: (k−1)Δ² − 1; may overflow.
    pub d_lll: f64,
    /// ln(e·p·(d+1)) = 1 + ln(k−1) + 2 ln Δ + ln p. Negative iff the
    /// condition holds.
    pub lhs_ln: f64,
    pub holds: bool,
}

pub fn lll_certificate(
    k: u32,
    epsilon: f64,
    delta: f64,
    blocked_prob_bound: Option<f64>,
) -> Result<LllCertificate> {
    check_delta(delta)?;
    let mut cert = lll_certificate_ln(k, epsilon, delta.ln(), blocked_prob_bound.map(f64::ln))?;
    // The log-space round trip smears the (purely informational) dependency
    // count; with the degree in hand it is exact.
    cert.d_lll = (f64::from(k) - 1.0) * delta * delta - 1.0;
    Ok(cert)
}

pub fn lll_certificate_ln(
    k: u32,
    epsilon: f64,
    ln_delta: f64,
    ln_blocked_prob_bound: Option<f64>,
) -> Result<LllCertificate> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    if !(ln_delta > 0.0) {
        return Err(Error::DegreeTooSmall(ln_delta.exp()));
    }
    let exponent = epsilon / (12.0 * f64::from(k * k));
    let ln_p = ln_blocked_prob_bound.unwrap_or_else(|| -(exponent * ln_delta).exp());
    let lhs_ln = 1.0 + (f64::from(k) - 1.0).ln() + 2.0 * ln_delta + ln_p;
    Ok(LllCertificate {
        k,
        epsilon,
        ln_delta,
        p_lll: ln_p.exp(),
        ln_p_lll: ln_p,
        d_lll: (f64::from(k) - 1.0) * (2.0 * ln_delta).exp() - 1.0,
        lhs_ln,
        holds: lhs_ln < 0.0,
    })
}

/// Where the asymptotic guarantees start holding for a given (k, ε): the
/// smallest degree at which (i) the headline list size covers the analysis
/// requirement and (ii) the dependency certificate passes. The certificate
/// crossing sits at degrees around e^700 and beyond, so it is reported as
/// ln Δ plus a scientific-notation rendering.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub k: u32,
    pub epsilon: f64,
    pub gamma: f64,
    /// Smallest integer degree where q_threshold ≥ q_requirement.
    pub delta_threshold_ok: u64,
    /// ln of the smallest degree where the certificate holds.
    pub ln_delta_certificate: f64,
    /// ln of the smallest degree where both conditions hold.
    pub ln_delta_star: f64,
    pub delta_star_sci: String,
    /// Both conditions re-evaluated at the reported degree.
    pub verified_at_star: bool,
    /// The conjunction re-evaluated at half the reported degree; true means
    /// it indeed fails there.
    pub falsified_at_half: bool,
}

fn sci_from_ln(ln_x: f64) -> String {
    let log10 = ln_x / std::f64::consts::LN_10;
    let exp = log10.floor();
    let mantissa = 10f64.powf(log10 - exp);
    format!("{mantissa:.3}e{}", exp as i64)
}

fn threshold_covers_requirement_ln(k: u32, epsilon: f64, ln_delta: f64) -> Result<bool> {
    let gamma = slack_gamma(k, epsilon);
    let inv = 1.0 / (f64::from(k) - 1.0);
    let ln_q_thr =
        inv * ((0.8 * (f64::from(k) - 1.0 + epsilon)).ln() + ln_delta - ln_delta.ln());
    let ln_q_req = q_requirement_ln(k, ln_delta, gamma, A_EXISTENCE)?;
    Ok(ln_q_thr >= ln_q_req - 1e-12)
}

pub fn regime_report(k: u32, epsilon: f64) -> Result<RegimeReport> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    let gamma = slack_gamma(k, epsilon);

    // Condition (i): scan integer degrees. The crossing is at desk scale.
    let mut delta_threshold_ok = None;
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        if threshold_covers_requirement_ln(k, epsilon, (d as f64).ln())? {
            delta_threshold_ok = Some(d);
            break;
        }
        d += 1;
    }
    let delta_threshold_ok = delta_threshold_ok.ok_or_else(|| {
        Error::SearchGuardExceeded(
            "no degree below 10^6 satisfies the threshold comparison".into(),
        )
    })?;

    // Condition (ii): the certificate's left side in log space rises, peaks,
    // and then falls through zero exactly once; bracket the crossing by
    // doubling and bisect.
    let exponent = epsilon / (12.0 * f64::from(k * k));
    let g = |t: f64| 1.0 + (f64::from(k) - 1.0).ln() + 2.0 * t - (exponent * t).exp();
    let floor_t = std::f64::consts::LN_2;
    let ln_delta_certificate = if g(floor_t) < 0.0 {
        floor_t
    } else {
        let mut hi = 1.0f64.max(floor_t);
        while g(hi) >= 0.0 {
            hi *= 2.0;
            if hi > 1e9 {
                return Err(Error::SearchGuardExceeded(
                    "certificate crossing beyond ln Δ = 10^9".into(),
                ));
            }
        }
        let mut lo = floor_t;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi // certificate strictly holds here
    };

    let ln_delta_star = ln_delta_certificate.max((delta_threshold_ok as f64).ln());
    let at_star = threshold_covers_requirement_ln(k, epsilon, ln_delta_star)?
        && lll_certificate_ln(k, epsilon, ln_delta_star, None)?.holds;
    let half = ln_delta_star - std::f64::consts::LN_2;
    let conj_at_half = threshold_covers_requirement_ln(k, epsilon, half)?
        && lll_certificate_ln(k, epsilon, half, None)?.holds;

    Ok(RegimeReport {
        k,
        epsilon,
        gamma,
        delta_threshold_ok,
        ln_delta_certificate,
        ln_delta_star,
        delta_star_sci: sci_from_ln(ln_delta_star),
        verified_at_star: at_star,
        falsified_at_half: !conj_at_half,
    })
}
