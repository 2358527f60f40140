//! Large-value sets of Dirichlet polynomials over t-grids, and the
//! witness-producing reductions between block lines, ζ values and zeros.
//!
//! Two scans form the core: `measure_r` marks t where some dyadic zeta-sum
//! window on the line σ beats T^η, `measure_theorem_lhs` marks t where some
//! integer window (M, M'] ⊂ (M, 2M] of the harmonic line beats M^(−ν).
//! Both advance one rotation state per n across the grid (re-anchored every
//! [`eval::CHUNK`] points, so results are worker-count independent) and
//! convert marked runs into interval sets with an explicit discretization
//! error estimate.

use crate::error::{Error, Result};
use crate::eval::{self, unit_phase, CSum, DirichletBlock, GridSpec};
use crate::zeta::{self, zeta_em, zeta_grid};
use crate::zeros::{count_n, ZeroTable};
use crate::ComplexVal;
use rayon::prelude::*;
use serde::Serialize;

/// Finite union of disjoint intervals with its exact total measure.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
    measure: f64,
}

impl IntervalSet {
    pub fn from_intervals(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let mut last_hi = f64::NEG_INFINITY;
        let mut measure = 0.0;
        for &(lo, hi) in &intervals {
            if lo >= hi || lo < last_hi {
                return Err(Error::Domain(format!(
                    "intervals must be disjoint ascending with lo < hi, got ({lo}, {hi})"
                )));
            }
            last_hi = hi;
            measure += hi - lo;
        }
        Ok(IntervalSet { intervals, measure })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Marked grid points become [t−dt/2, t+dt/2]; touching runs merge.
    pub fn from_marked(grid: &GridSpec, marked: &[bool]) -> Self {
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        let half = grid.dt / 2.0;
        let mut run_start: Option<usize> = None;
        for k in 0..=marked.len() {
            let on = k < marked.len() && marked[k];
            match (run_start, on) {
                (None, true) => run_start = Some(k),
                (Some(s), false) => {
                    intervals.push((grid.point(s) - half, grid.point(k - 1) + half));
                    run_start = None;
                }
                _ => {}
            }
        }
        let measure = intervals.iter().map(|(a, b)| b - a).sum();
        IntervalSet { intervals, measure }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MPolicy {
    AllIntegers,
    DyadicRefined,
}

/// Shared scan configuration; the grid always spans [−T, T].
#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub t_horizon: f64,
    pub dt: f64,
    pub eps: f64,
    pub nu: f64,
    pub m_policy: MPolicy,
    /// Bisect marked/unmarked boundaries down to 1e-4.
    pub refine_boundaries: bool,
    /// Horizon multiplier of the zero count N(α, C·T) on the comparison
    /// side; the estimate leaves C(ε) unspecified, reports pin it at 4.
    pub theorem_c: f64,
}

impl ScanConfig {
    pub fn new(t_horizon: f64, dt: f64, eps: f64, nu: f64) -> Result<Self> {
        if !(t_horizon > 1.0 && dt > 0.0 && dt < t_horizon) {
            return Err(Error::Domain(format!(
                "scan needs T > 1 and 0 < dt < T, got T = {t_horizon}, dt = {dt}"
            )));
        }
        if !(eps > 0.0) || !(0.0..=0.5).contains(&nu) {
            return Err(Error::Domain(format!(
                "scan needs eps > 0 and nu in [0, 1/2], got eps = {eps}, nu = {nu}"
            )));
        }
        Ok(ScanConfig {
            t_horizon,
            dt,
            eps,
            nu,
            m_policy: MPolicy::AllIntegers,
            refine_boundaries: false,
            theorem_c: 4.0,
        })
    }

    /// Symmetric grid containing 0 and spanning [−T, T].
    pub fn grid(&self) -> Result<GridSpec> {
        let half = (self.t_horizon / self.dt).floor() as usize;
        GridSpec::new(-(half as f64) * self.dt, self.dt, 2 * half + 1)
    }
}

/// Scan output: the interval set plus how trustworthy its boundary is.
#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub set: IntervalSet,
    /// marked/unmarked transitions seen on the grid
    pub crossings: usize,
    /// dt·crossings, or 1e-4·crossings after boundary refinement
    pub discretization_error: f64,
    pub threshold_note: String,
}

/// Witness classes produced by the reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessTag {
    Lemma21,
    Lemma24Main,
    Lemma24Dual,
    Case1,
    Case2,
    U1,
}

/// A verified large value: |Σ_{M<m≤M'} m^(−line−it)| = value ≥ threshold.
///
/// For tag = U1 the record is a classification, not an inequality claim.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WitnessRecord {
    pub t_or_gamma: f64,
    pub m: f64,
    pub m_prime: f64,
    /// σ of the line the witness block lives on.
    pub line_sigma: f64,
    pub value: f64,
    pub threshold: f64,
    pub tag: WitnessTag,
}

impl WitnessRecord {
    /// Fresh evaluation of the stored block; independent of how the witness
    /// was produced. U1 records hold a mollified block value, which a plain
    /// unit block cannot reproduce.
    pub fn reverify(&self) -> Result<f64> {
        if self.tag == WitnessTag::U1 {
            return Err(Error::Domain(
                "U1 records classify, they do not claim a unit-block inequality".into(),
            ));
        }
        let block = DirichletBlock::unit(self.m, self.m_prime, self.line_sigma)?;
        Ok(eval::zeta_sum(&block, self.t_or_gamma)?.norm())
    }
}

// ---------------------------------------------------------------------------
// grid scans
// ---------------------------------------------------------------------------

/// Dyadic windows (A, min(2A, cap)] for A = 1, 2, 4, ... below cap.
fn dyadic_windows(cap: f64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = 1u64;
    while (a as f64) < cap {
        let hi = ((2 * a) as f64).min(cap).floor() as u64;
        if hi > a {
            out.push((a, hi));
        }
        a *= 2;
    }
    out
}

/// Marks grid points via per-n rotation states; `test` inspects the prefix
/// values of one grid point and decides marking.
///
/// `test` receives the prefix array P where P[i] = Σ_{n ≤ n_first+i} scale·phase
/// for n ascending (n from 2), i.e. running sums of the scan line.
fn scan_grid<F>(grid: &GridSpec, n_max: u64, scale: &[f64], test: F) -> Vec<bool>
where
    F: Fn(&[ComplexVal]) -> bool + Sync,
{
    let n_count = (n_max.max(1) - 1) as usize; // n = 2..=n_max
    let rots: Vec<ComplexVal> = (2..=n_max).map(|n| unit_phase(n, grid.dt)).collect();
    let mut marked = vec![false; grid.count];
    marked
        .par_chunks_mut(eval::CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let k0 = ci * eval::CHUNK;
            let t_start = grid.point(k0);
            let mut states: Vec<ComplexVal> =
                (2..=n_max).map(|n| unit_phase(n, t_start)).collect();
            let mut prefix = vec![ComplexVal::new(0.0, 0.0); n_count];
            let chunk_len = chunk.len();
            for (off, slot) in chunk.iter_mut().enumerate() {
                // build prefix sums of scale[n]·n^(−it) at this t
                let mut acc = ComplexVal::new(0.0, 0.0);
                for i in 0..n_count {
                    acc += scale[i] * states[i];
                    prefix[i] = acc;
                }
                *slot = test(&prefix);
                if off + 1 < chunk_len {
                    for (s, r) in states.iter_mut().zip(&rots) {
                        *s *= *r;
                    }
                }
            }
        });
    marked
}

fn count_crossings(marked: &[bool]) -> usize {
    marked.windows(2).filter(|w| w[0] != w[1]).count()
}

/// |{t ∈ [−T,T] : max over dyadic windows (A, min(2A,√T)] of
/// |Σ_{A<n≤B} n^(−σ−it)| ≥ T^η}| on the configured grid.
pub fn measure_r(sigma: f64, eta: f64, config: &ScanConfig) -> Result<ScanResult> {
    let grid = config.grid()?;
    let cap = config.t_horizon.sqrt();
    let n_max = cap.floor() as u64;
    let threshold = config.t_horizon.powf(eta);
    let thr2 = threshold * threshold;
    let windows = dyadic_windows(cap);
    if n_max < 2 || windows.is_empty() {
        return Ok(ScanResult {
            set: IntervalSet::default(),
            crossings: 0,
            discretization_error: 0.0,
            threshold_note: format!("R-scan sigma={sigma} eta={eta}: no windows below sqrt(T)"),
        });
    }
    let scale: Vec<f64> = (2..=n_max).map(|n| (n as f64).powf(-sigma)).collect();
    // windows as prefix-index pairs: block (A, B] = P[B-2] − P[A-2], P[0] ~ n=2
    let idx_windows: Vec<(usize, usize)> = windows
        .iter()
        .map(|&(a, b)| (a as usize, b as usize))
        .collect();
    let marked = scan_grid(&grid, n_max, &scale, |prefix| {
        for &(a, b) in &idx_windows {
            let base = if a >= 2 {
                prefix[a - 2]
            } else {
                ComplexVal::new(0.0, 0.0)
            };
            for y in a.max(2)..=b {
                if (prefix[y - 2] - base).norm_sqr() >= thr2 {
                    return true;
                }
            }
        }
        false
    });
    finish_scan(
        &grid,
        marked,
        config,
        format!("R-scan sigma={sigma} eta={eta} threshold=T^eta={threshold:.6e}"),
        |t| r_predicate_point(sigma, eta, config.t_horizon, t),
    )
}

/// Pointwise R-scan predicate (used for boundary refinement and rescans).
pub fn r_predicate_point(sigma: f64, eta: f64, t_horizon: f64, t: f64) -> bool {
    let cap = t_horizon.sqrt();
    let threshold2 = t_horizon.powf(eta).powi(2);
    for (a, b) in dyadic_windows(cap) {
        let mut acc = CSum::default();
        for n in a + 1..=b {
            acc.add((n as f64).powf(-sigma) * unit_phase(n, t));
            if acc.value().norm_sqr() >= threshold2 {
                return true;
            }
        }
    }
    false
}

/// |{t ∈ [−T,T] : |Σ_{M<m≤M'} m^(−1−it)| ≥ M^(−ν) for some integer
/// M ∈ [T^ε, √T/2], M' ∈ (M, 2M]}| on the configured grid.
pub fn measure_theorem_lhs(config: &ScanConfig) -> Result<ScanResult> {
    let grid = config.grid()?;
    let m_lo = config.t_horizon.powf(config.eps).ceil() as u64;
    let m_hi = (config.t_horizon.sqrt() / 2.0).floor() as u64;
    if m_lo > m_hi {
        return Ok(ScanResult {
            set: IntervalSet::default(),
            crossings: 0,
            discretization_error: 0.0,
            threshold_note: format!(
                "theorem-LHS scan: empty M-range [{m_lo}, {m_hi}]"
            ),
        });
    }
    let n_max = 2 * m_hi;
    let scale: Vec<f64> = (2..=n_max).map(|n| 1.0 / n as f64).collect();
    let dyadic_only = config.m_policy == MPolicy::DyadicRefined;
    let m_values: Vec<u64> = if dyadic_only {
        let mut v = Vec::new();
        let mut m = m_lo;
        while m <= m_hi {
            v.push(m);
            m *= 2;
        }
        v
    } else {
        (m_lo..=m_hi).collect()
    };
    let thresholds2: Vec<f64> = m_values
        .iter()
        .map(|&m| (m as f64).powf(-2.0 * config.nu))
        .collect();
    let marked = scan_grid(&grid, n_max, &scale, |prefix| {
        for (mi, &m) in m_values.iter().enumerate() {
            let base = prefix[m as usize - 2];
            let thr2 = thresholds2[mi];
            for y in m + 1..=2 * m {
                if (prefix[y as usize - 2] - base).norm_sqr() >= thr2 {
                    return true;
                }
            }
        }
        false
    });
    let (nu, eps, t_horizon) = (config.nu, config.eps, config.t_horizon);
    finish_scan(
        &grid,
        marked,
        config,
        format!("theorem-LHS scan nu={nu} eps={eps} M in [{m_lo}, {m_hi}]"),
        |t| lhs_predicate_point(nu, eps, t_horizon, t),
    )
}

/// Pointwise theorem-LHS predicate.
pub fn lhs_predicate_point(nu: f64, eps: f64, t_horizon: f64, t: f64) -> bool {
    let m_lo = t_horizon.powf(eps).ceil() as u64;
    let m_hi = (t_horizon.sqrt() / 2.0).floor() as u64;
    for m in m_lo..=m_hi {
        let thr2 = (m as f64).powf(-2.0 * nu);
        let mut acc = CSum::default();
        for y in m + 1..=2 * m {
            acc.add(unit_phase(y, t) / y as f64);
            if acc.value().norm_sqr() >= thr2 {
                return true;
            }
        }
    }
    false
}

fn finish_scan<F>(
    grid: &GridSpec,
    marked: Vec<bool>,
    config: &ScanConfig,
    note: String,
    predicate: F,
) -> Result<ScanResult>
where
    F: Fn(f64) -> bool,
{
    let crossings = count_crossings(&marked);
    let mut set = IntervalSet::from_marked(grid, &marked);
    let mut disc = grid.dt * crossings as f64;
    if config.refine_boundaries && crossings > 0 {
        let mut refined = Vec::with_capacity(set.intervals.len());
        for &(lo, hi) in &set.intervals {
            let lo_r = refine_edge(lo - grid.dt / 2.0, lo + grid.dt / 2.0, &predicate, false);
            let hi_r = refine_edge(hi - grid.dt / 2.0, hi + grid.dt / 2.0, &predicate, true);
            if lo_r < hi_r {
                refined.push((lo_r, hi_r));
            }
        }
        set = IntervalSet::from_intervals(refined)?;
        disc = 1e-4 * crossings as f64;
    }
    Ok(ScanResult {
        set,
        crossings,
        discretization_error: disc,
        threshold_note: note,
    })
}

/// Bisect a marked/unmarked transition to width 1e-4. `falling` means the
/// predicate holds on the left side.
fn refine_edge<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, predicate: &F, falling: bool) -> f64 {
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        let inside = predicate(mid);
        if inside == falling {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// witness reductions
// ---------------------------------------------------------------------------

/// Partial-summation shift of a hypothesis block (M, M'] on the harmonic
/// line to the line 1−ν−η, producing the guaranteed M^η/4 witness.
pub fn reduce_to_shifted_line(
    t: f64,
    nu: f64,
    eta: f64,
    m: f64,
    m_prime: f64,
) -> Result<WitnessRecord> {
    let hyp_block = DirichletBlock::unit(m, m_prime, 1.0)?;
    let hyp = eval::zeta_sum(&hyp_block, t)?.norm();
    let hyp_threshold = m.powf(-nu);
    if hyp <= hyp_threshold {
        return Err(Error::HypothesisFailure {
            value: hyp,
            threshold: hyp_threshold,
        });
    }
    let line = 1.0 - nu - eta;
    let shifted = DirichletBlock::unit(m, m_prime, line)?;
    let (y_star, max_value) = eval::prefix_max_sum(&shifted, t)?;
    let threshold = m.powf(eta) / 4.0;
    if max_value < threshold {
        return Err(Error::StageShortfall {
            stage: "shifted-line prefix max",
            detail: format!("max {max_value:.6e} below M^eta/4 = {threshold:.6e}"),
        });
    }
    Ok(WitnessRecord {
        t_or_gamma: t,
        m,
        m_prime: y_star as f64,
        line_sigma: line,
        value: max_value,
        threshold,
        tag: WitnessTag::Lemma21,
    })
}

/// Dyadic cover of (1, hi]: blocks (lo_j, hi_j] with hi_j ≤ 2·lo_j.
fn dyadic_cover(hi: f64) -> Vec<(f64, f64)> {
    let mut blocks = Vec::new();
    let mut upper = hi;
    while upper > 2.0 {
        let lower = (upper / 2.0).max(1.0);
        blocks.push((lower, upper));
        upper = lower;
    }
    if upper > 1.0 {
        blocks.push((1.0, upper));
    }
    blocks
}

/// AFE dichotomy at a large-|ζ| point, reduced to a dyadic block on the
/// shifted line σ+(2−ε)β (the measured membership for R_{σ',εβ/3}(2T)).
///
/// Dual-branch witnesses record −t: the dual sum carries e^(+it log n), and
/// conjugation puts the block back into the scanned form.
pub fn afe_reduction(
    t: f64,
    sigma: f64,
    beta: f64,
    eps: f64,
    t_horizon: f64,
) -> Result<WitnessRecord> {
    if t.abs() <= 2.0 * std::f64::consts::PI || t.abs() > t_horizon {
        return Err(Error::Domain(format!(
            "afe_reduction needs 2pi < |t| <= T, got t = {t}, T = {t_horizon}"
        )));
    }
    let s = ComplexVal::new(sigma, t);
    let z_abs = zeta_em(s)?.norm();
    let t_beta = t_horizon.powf(beta);
    if z_abs < t_beta {
        return Err(Error::HypothesisFailure {
            value: z_abs,
            threshold: t_beta,
        });
    }
    let x = (t.abs() / (2.0 * std::f64::consts::PI)).sqrt();
    let main = zeta::zeta_sum_upto(x, s).norm();
    let dual = zeta::zeta_sum_upto(x, ComplexVal::new(1.0 - sigma, -t)).norm();

    let need_main = t_beta / 3.0;
    let need_dual = t_horizon.powf(beta + sigma - 0.5) / 300.0;
    let threshold = t_horizon.powf(eps * beta / 3.0);
    let line = sigma + (2.0 - eps) * beta;

    let (tag, scan_t, source_line) = if main >= need_main {
        (WitnessTag::Lemma24Main, t, sigma)
    } else if dual >= need_dual {
        (WitnessTag::Lemma24Dual, -t, 1.0 - sigma)
    } else {
        return Err(Error::BranchFailure {
            main_sum: main,
            dual_sum: dual,
            need_main,
            need_dual,
        });
    };
    let _ = source_line;

    // strongest dyadic witness on the shifted line
    let mut best: Option<WitnessRecord> = None;
    for (lo, hi) in dyadic_cover(x) {
        let block = DirichletBlock::unit(lo, hi, line)?;
        if block.is_empty() {
            continue;
        }
        let (y_star, value) = eval::prefix_max_sum(&block, scan_t)?;
        let better = best.map_or(true, |b| value > b.value);
        if better {
            best = Some(WitnessRecord {
                t_or_gamma: scan_t,
                m: lo,
                m_prime: y_star as f64,
                line_sigma: line,
                value,
                threshold,
                tag,
            });
        }
    }
    let best = best.ok_or_else(|| Error::StageShortfall {
        stage: "afe dyadic cover",
        detail: format!("no nonempty dyadic block below x = {x}"),
    })?;
    if best.value < threshold {
        return Err(Error::StageShortfall {
            stage: "afe shifted-line block",
            detail: format!(
                "best dyadic block {:.6e} below T^(eps*beta/3) = {threshold:.6e} \
                 (main {main:.4e}, dual {dual:.4e})",
                best.value
            ),
        });
    }
    Ok(best)
}

/// Level-set side of the R-to-ζ dichotomy.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub beta: f64,
    pub level_lo: f64,
    pub level_measure: f64,
    /// (level measure)·50·T^β·(log T)² / (R·T^η)
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub r_measure: f64,
    pub branch_a_bound: f64,
    pub branch_a: bool,
    pub beta_floor: f64,
    pub levels: Vec<LevelReport>,
    pub best: Option<LevelReport>,
    /// some level with β ≥ η − 3 loglog T/log T reaches ratio ≥ 1
    pub qualifying: bool,
}

/// Either R_{σ,η}(T) ≤ 4T^((1−σ)/2), or some dyadic ζ level set on the line
/// σ+1/log T is big; reports the levels and the paper's predicted ratio.
pub fn dichotomy_report(sigma: f64, eta: f64, config: &ScanConfig) -> Result<DichotomyReport> {
    let t_horizon = config.t_horizon;
    let log_t = t_horizon.ln();
    let r = measure_r(sigma, eta, config)?;
    let branch_a_bound = 4.0 * t_horizon.powf((1.0 - sigma) / 2.0);
    let beta_floor = eta - 3.0 * log_t.ln() / log_t;
    let mut report = DichotomyReport {
        r_measure: r.set.measure(),
        branch_a_bound,
        branch_a: r.set.measure() <= branch_a_bound,
        beta_floor,
        levels: Vec::new(),
        best: None,
        qualifying: false,
    };
    if report.branch_a {
        return Ok(report);
    }

    // |ζ(σ+1/log T + it)| over [−2T, 2T] \ [−10, 10] at step dt/4
    let step = config.dt / 4.0;
    let count = (4.0 * t_horizon / step).floor() as usize + 1;
    let grid = GridSpec::new(-2.0 * t_horizon, step, count)?;
    let zvals = zeta_grid(sigma + 1.0 / log_t, &grid)?;
    let mut abs: Vec<f64> = Vec::with_capacity(count);
    for (k, z) in zvals.iter().enumerate() {
        let t = grid.point(k);
        if t.abs() > 10.0 && t.abs() <= 2.0 * t_horizon {
            abs.push(z.norm());
        }
    }
    // dyadic levels 2^j covering the value range
    let max_abs = abs.iter().cloned().fold(0.0f64, f64::max);
    if max_abs <= 0.0 {
        return Ok(report);
    }
    let j_hi = max_abs.log2().floor() as i32;
    let j_lo = (j_hi - 40).max(-40);
    let r_t_eta = r.set.measure() * t_horizon.powf(eta);
    for j in j_lo..=j_hi {
        let lo = 2f64.powi(j);
        let hi = 2.0 * lo;
        let count_in = abs.iter().filter(|&&v| v > lo && v <= hi).count();
        if count_in == 0 {
            continue;
        }
        let level_measure = count_in as f64 * step;
        let beta = lo.ln() / log_t;
        let ratio = level_measure * 50.0 * lo * log_t * log_t / r_t_eta;
        let lr = LevelReport {
            beta,
            level_lo: lo,
            level_measure,
            ratio,
        };
        if beta >= beta_floor && ratio >= 1.0 {
            report.qualifying = true;
        }
        if report.best.as_ref().map_or(true, |b| ratio > b.ratio) {
            report.best = Some(lr.clone());
        }
        report.levels.push(lr);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxBoundReport {
    pub lhs_measure: f64,
    pub script_l: f64,
    pub zero_count: u64,
    pub bound: f64,
    pub passes: bool,
}

/// Measures {t ∈ [−T,T] : |ζ(σ+it)| ≥ T^β} and compares with the
/// 3ℒ·(N(σ−1/(loglog T)^(1/2), 2T)+1) box bound, ℒ = (log T)²/4.
///
/// Needs the table to reach 2T (the count is taken at height 2T).
pub fn box_bound_report(
    table: &ZeroTable,
    sigma: f64,
    beta: f64,
    t_horizon: f64,
    dt: f64,
) -> Result<BoxBoundReport> {
    let log_t = t_horizon.ln();
    let grid_half = (t_horizon / dt).floor() as usize;
    let grid = GridSpec::new(-(grid_half as f64) * dt, dt, 2 * grid_half + 1)?;
    let zvals = zeta_grid(sigma, &grid)?;
    let threshold = t_horizon.powf(beta);
    let marked: Vec<bool> = zvals.iter().map(|z| z.norm() >= threshold).collect();
    let lhs = IntervalSet::from_marked(&grid, &marked).measure();

    let script_l = log_t * log_t / 4.0;
    let sigma_shift = sigma - 1.0 / log_t.ln().sqrt();
    let n = count_n(table, sigma_shift, 2.0 * t_horizon)?.count;
    let bound = 3.0 * script_l * (n as f64 + 1.0);
    Ok(BoxBoundReport {
        lhs_measure: lhs,
        script_l,
        zero_count: n,
        bound,
        passes: lhs <= bound,
    })
}

/// Greedy left-to-right one-spaced subset: a point is kept iff it lies ≥ 1
/// beyond the last kept point. Every input point ends within 1 of a kept one.
///
/// `values` ride along for the caller's bookkeeping; selection is purely
/// positional.
pub fn one_spaced_select(points: &[f64], values: &[f64]) -> Result<Vec<usize>> {
    if !values.is_empty() && values.len() != points.len() {
        return Err(Error::Domain(format!(
            "values length {} does not match points length {}",
            values.len(),
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("points must be ascending".into()));
    }
    let mut kept = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (i, &p) in points.iter().enumerate() {
        if p - last >= 1.0 {
            kept.push(i);
            last = p;
        }
    }
    Ok(kept)
}

/// CSV rows (t_lo, t_hi) for an interval set; RFC-4180 with a leading
/// single-field hash record added by the caller.
pub fn intervals_csv(set: &IntervalSet) -> String {
    let mut out = String::from("t_lo,t_hi\r\n");
    for &(lo, hi) in set.intervals() {
        out.push_str(&format!("{lo:.9},{hi:.9}\r\n"));
    }
    out
}
