//! Zero ordinates of ζ on the critical line: production (Hardy-Z sign
//! changes), ingestion, validation against the Riemann–von Mangoldt main
//! term, and the zero-proximity checks used by the reductions.
//!
//! Desk regime: every ordinate in range is on the critical line and simple;
//! each table is validated against θ(t)/π + 1 within ±3 before use, so a
//! missed pair of close zeros is an error, not a silent gap.

use crate::error::{Error, Result};
use crate::eval::GridSpec;
use crate::zeta::{log_gamma, zeta_and_deriv, zeta_em, zeta_grid};
use crate::ComplexVal;
use serde::{Deserialize, Serialize};
use std::io::BufRead;
use std::path::Path;

/// Scan step of the sign-change search.
const SCAN_STEP: f64 = 0.05;
/// Bisection refinement width.
const REFINE_WIDTH: f64 = 1e-9;
/// Allowed |count − (θ(t)/π + 1)| slack.
const COMPLETENESS_SLACK: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroSource {
    Computed,
    Ingested,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub gamma: f64,
    pub source: ZeroSource,
}

/// Ascending positive ordinates, complete up to `t_max`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroTable {
    records: Vec<ZeroRecord>,
    t_max: f64,
}

/// Riemann–Siegel θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
pub fn theta(t: f64) -> f64 {
    let lg = log_gamma(ComplexVal::new(0.25, t / 2.0)).expect("no pole off the real axis");
    lg.im - t / 2.0 * std::f64::consts::PI.ln()
}

/// Riemann–von Mangoldt main term θ(t)/π + 1 for the count of γ ∈ (0, t].
pub fn main_term(t: f64) -> f64 {
    theta(t) / std::f64::consts::PI + 1.0
}

/// Hardy Z(t) = e^(iθ(t)) ζ(1/2+it); real by construction, the imaginary
/// residue must stay under 1e-8.
pub fn hardy_z(t: f64) -> Result<f64> {
    if t < 2.0 {
        return Err(Error::Domain(format!("hardy_z needs t >= 2, got {t}")));
    }
    let z = zeta_em(ComplexVal::new(0.5, t))?;
    let rot = ComplexVal::new(0.0, theta(t)).exp();
    let v = rot * z;
    if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
        return Err(Error::Numerical {
            what: "hardy_z imaginary residue",
            achieved: v.im.abs(),
            wanted: 1e-8,
        });
    }
    Ok(v.re)
}

/// Z on an equispaced grid through the block fast path.
fn hardy_z_grid(grid: &GridSpec) -> Result<Vec<f64>> {
    let zvals = zeta_grid(0.5, grid)?;
    Ok(zvals
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let rot = ComplexVal::new(0.0, theta(grid.point(k))).exp();
            (rot * z).re
        })
        .collect())
}

/// All critical-line zeros with γ ∈ [10, T], validated for completeness.
pub fn find_zeros(t_max: f64) -> Result<ZeroTable> {
    if !(10.0..=1.0e6).contains(&t_max) {
        return Err(Error::Domain(format!(
            "find_zeros horizon must be in [10, 1e6], got {t_max}"
        )));
    }
    let count = ((t_max - 10.0) / SCAN_STEP).ceil() as usize + 1;
    let grid = GridSpec::new(10.0, SCAN_STEP, count)?;
    let zvals = hardy_z_grid(&grid)?;

    let mut records = Vec::new();
    for k in 0..count - 1 {
        let (za, zb) = (zvals[k], zvals[k + 1]);
        if za.signum() != zb.signum() {
            let gamma = bisect_zero(grid.point(k), grid.point(k + 1))?;
            if gamma <= t_max {
                records.push(ZeroRecord {
                    gamma,
                    source: ZeroSource::Computed,
                });
            }
        }
    }
    let table = ZeroTable { records, t_max };
    table.validate()?;
    Ok(table)
}

fn bisect_zero(mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = hardy_z(lo)?;
    while hi - lo > REFINE_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = hardy_z(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_lo.signum() == f_mid.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Plain-text table: one ascending positive decimal ordinate per line,
/// `#` comments and blank lines ignored.
pub fn ingest_zeros(path: &Path) -> Result<ZeroTable> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    let mut last = 0.0f64;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let gamma: f64 = body.parse().map_err(|e| Error::Parse {
            line: line_no,
            msg: format!("{e}"),
        })?;
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("ordinate must be positive and finite, got {gamma}"),
            });
        }
        if gamma <= last {
            return Err(Error::OrderViolation { line: line_no });
        }
        last = gamma;
        records.push(ZeroRecord {
            gamma,
            source: ZeroSource::Ingested,
        });
    }
    let t_max = records.last().map(|r| r.gamma).unwrap_or(0.0);
    let table = ZeroTable { records, t_max };
    if !table.records.is_empty() {
        table.validate()?;
    }
    Ok(table)
}

impl ZeroTable {
    pub fn records(&self) -> &[ZeroRecord] {
        &self.records
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// #{γ ≤ t} among positive ordinates.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.gamma <= t)
    }

    /// Completeness against the Riemann–von Mangoldt main term at every
    /// record and at the horizon.
    fn validate(&self) -> Result<()> {
        let check = |t: f64, have: usize| -> Result<()> {
            let expected = main_term(t);
            if (have as f64 - expected).abs() > COMPLETENESS_SLACK {
                return Err(Error::Incomplete {
                    lo: 0.0,
                    hi: t,
                    expected,
                    found: have,
                });
            }
            Ok(())
        };
        for (k, r) in self.records.iter().enumerate() {
            check(r.gamma, k + 1)?;
        }
        check(self.t_max, self.records.len())
    }

    fn horizon_guard(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::Horizon {
                t,
                t_max: self.t_max,
            });
        }
        Ok(())
    }

    /// Count of signed ordinates (±γ) inside [lo, hi].
    pub fn signed_in(&self, lo: f64, hi: f64) -> usize {
        let pos = self.records.partition_point(|r| r.gamma <= hi)
            - self.records.partition_point(|r| r.gamma < lo);
        // negatives: −γ ∈ [lo, hi] ⇔ γ ∈ [−hi, −lo]
        let neg = self.records.partition_point(|r| r.gamma <= -lo)
            - self.records.partition_point(|r| r.gamma < -hi);
        pos + neg
    }
}

/// N(σ,T) in the RH-verified desk regime, with a provenance note.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroCount {
    pub count: u64,
    pub provenance: &'static str,
}

/// N(σ,T): 2·#{γ ≤ T} for σ ≤ 1/2 (the ± pairing), 0 above the critical
/// line — the desk-range ground truth.
pub fn count_n(table: &ZeroTable, sigma: f64, t: f64) -> Result<ZeroCount> {
    table.horizon_guard(t)?;
    let count = if sigma <= 0.5 {
        2 * table.count_up_to(t) as u64
    } else {
        0
    };
    Ok(ZeroCount {
        count,
        provenance: "RH-verified desk regime: all in-range zeros at beta = 1/2",
    })
}

/// #{ρ : Im ρ ∈ [U, U+1]} over signed ordinates.
pub fn box_count(table: &ZeroTable, u: f64) -> Result<u64> {
    if u + 1.0 > table.t_max {
        return Err(Error::Horizon {
            t: u + 1.0,
            t_max: table.t_max,
        });
    }
    Ok(table.signed_in(u, u + 1.0) as u64)
}

/// |ζ′/ζ(σ₁+iu) − Σ_{|Im ρ − u| ≤ 1} 1/(σ₁+iu−ρ)| over ρ = 1/2 ± iγ.
pub fn partial_fraction_residual(table: &ZeroTable, sigma1: f64, u: f64) -> Result<f64> {
    if !(-1.0..=2.0).contains(&sigma1) || u.abs() < 2.0 || u.abs() > table.t_max - 1.0 {
        return Err(Error::Domain(format!(
            "partial fraction domain: sigma1 in [-1,2], |u| in [2, t_max-1]; got {sigma1}, {u}"
        )));
    }
    let s = ComplexVal::new(sigma1, u);
    // nearby zeros, both signs
    let mut nearby = Vec::new();
    for r in &table.records {
        for g in [r.gamma, -r.gamma] {
            if (g - u).abs() <= 1.0 {
                nearby.push(ComplexVal::new(0.5, g));
            }
        }
    }
    for rho in &nearby {
        if (s - rho).norm() <= 1e-3 {
            return Err(Error::Conditioning {
                zeta_abs: (s - rho).norm(),
                min: 1e-3,
            });
        }
    }
    let (z, dz) = zeta_and_deriv(s)?;
    if z.norm() <= 1e-4 {
        return Err(Error::Conditioning {
            zeta_abs: z.norm(),
            min: 1e-4,
        });
    }
    let mut sum = ComplexVal::new(0.0, 0.0);
    for rho in &nearby {
        sum += (s - rho).inv();
    }
    Ok((dz / z - sum).norm())
}

/// A zero in the rectangle Re ρ ≥ σ − 1/(log log T)^(1/2),
/// |Im ρ − t| ≤ (log T)²/4, if the table holds one (closest ordinate wins).
pub fn nearby_zero(
    table: &ZeroTable,
    sigma: f64,
    t: f64,
    t_scale: f64,
) -> Result<Option<ZeroRecord>> {
    let log_t = t_scale.ln();
    if !(0.5..=1.0).contains(&sigma) || t.abs() < log_t * log_t / 2.0 || t.abs() > t_scale {
        return Err(Error::Domain(format!(
            "nearby_zero domain: sigma in [1/2,1], |t| in [(log T)^2/2, T]; got {sigma}, {t}"
        )));
    }
    table.horizon_guard(t_scale)?;
    let re_floor = sigma - 1.0 / log_t.ln().sqrt();
    if re_floor > 0.5 {
        // desk zeros all sit on the critical line
        return Ok(None);
    }
    let height = log_t * log_t / 4.0;
    let mut best: Option<ZeroRecord> = None;
    for r in &table.records {
        for g in [r.gamma, -r.gamma] {
            if (g - t).abs() <= height {
                let better = match &best {
                    None => true,
                    Some(b) => (g - t).abs() < (b.gamma - t).abs(),
                };
                if better {
                    best = Some(ZeroRecord {
                        gamma: g,
                        source: r.source,
                    });
                }
            }
        }
    }
    Ok(best)
}

/// Write a table in the plain-text exchange format.
pub fn write_zeros(table: &ZeroTable, path: &Path) -> Result<()> {
    use std::io::Write;
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "# zeta zero ordinates, ascending; t_max = {}", table.t_max)?;
    for r in &table.records {
        writeln!(f, "{:.9}", r.gamma)?;
    }
    Ok(())
}
