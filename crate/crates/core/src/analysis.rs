//! Region geometry and dynamics of the family: which η goes negative where,
//! sudden-death and sudden-transition times, trajectories, and the
//! phase-diagram sweep.
//!
//! The parameter triangle splits into a red region (η2 < 0, entanglement
//! frozen forever), green/blue regions (η3/η4 < 0, sudden death at finite
//! t_sd), and the gray separable middle. Independently of the colors, the
//! LQU dynamics is classified by σ = |s|: monotone growth for r < 1/3, a
//! sudden change at t_st for r > 1/3 with 3r - σ < 1, monotone decay for
//! 3r - σ >= 1.

use std::io;

use serde::Serialize;

use crate::channel::{evolve_params, ChannelParams};
use crate::correlations::{
    family_report, lqu_family, lqu_generic, negativity, negativity_family, pt_spectrum_family,
    CorrelationReport,
};
use crate::error::{Error, Result};
use crate::states::{build_xstate, XStateParams};

/// η values and sub-region margins within this distance of zero are tagged
/// as boundaries by the tolerant classifier.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    RedInvariant,
    GreenSd,
    BlueSd,
    GraySeparable,
    Boundary,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::RedInvariant => "RED_INVARIANT",
            Region::GreenSd => "GREEN_SD",
            Region::BlueSd => "BLUE_SD",
            Region::GraySeparable => "GRAY_SEPARABLE",
            Region::Boundary => "BOUNDARY",
        }
    }
}

/// Dynamical regime of the LQU along the vertical evolution path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LquRegime {
    MonotoneLquGrowth,
    SuddenChange,
    MonotoneLquDecay,
}

impl LquRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            LquRegime::MonotoneLquGrowth => "MONOTONE_LQU_GROWTH",
            LquRegime::SuddenChange => "SUDDEN_CHANGE",
            LquRegime::MonotoneLquDecay => "MONOTONE_LQU_DECAY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionTag {
    pub region: Region,
    pub subregion: Option<LquRegime>,
}

fn tag(params: XStateParams, tolerant: bool) -> RegionTag {
    let [_, e2, e3, e4] = pt_spectrum_family(params);
    let region = if tolerant && [e2, e3, e4].iter().any(|e| e.abs() <= BOUNDARY_TOL) {
        Region::Boundary
    } else if e2 < 0.0 {
        Region::RedInvariant
    } else if e3 < 0.0 {
        Region::GreenSd
    } else if e4 < 0.0 {
        Region::BlueSd
    } else {
        Region::GraySeparable
    };

    let r = params.r();
    let sigma = params.s().abs();
    let growth_margin = r - 1.0 / 3.0; // < 0: β2 dominates β3 for all t
    let decay_margin = 3.0 * r - sigma - 1.0; // >= 0: β3 dominates from t = 0
    let subregion = if tolerant
        && (growth_margin.abs() <= BOUNDARY_TOL || decay_margin.abs() <= BOUNDARY_TOL)
    {
        None
    } else if decay_margin >= 0.0 {
        Some(LquRegime::MonotoneLquDecay)
    } else if growth_margin > 0.0 {
        Some(LquRegime::SuddenChange)
    } else {
        // at r = 1/3 exactly, s(t) > 0 = 3r - 1 for all finite t: still growth
        Some(LquRegime::MonotoneLquGrowth)
    };

    RegionTag { region, subregion }
}

/// Region and LQU-regime classification; anything within 1e-12 of an η zero
/// or a sub-region border is reported as BOUNDARY / no sub-region.
pub fn classify(params: XStateParams) -> RegionTag {
    tag(params, true)
}

/// Closed-set assignment with no boundary tags: region ties go to the
/// separable side, sub-region ties to the decay side.
pub fn classify_strict(params: XStateParams) -> RegionTag {
    tag(params, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventTimes {
    pub t_sd: Option<f64>,
    pub t_st: Option<f64>,
}

/// t_sd = -(1/2Γ) ln[(1-2r)/(2σ)] for green/blue states with r < 1/2;
/// red states keep their entanglement forever, r = 1/2 states lose it only
/// asymptotically, gray states have none to lose.
pub fn sudden_death_time(params: XStateParams, ch: &ChannelParams) -> Option<f64> {
    match classify(params).region {
        Region::GreenSd | Region::BlueSd => {
            let r = params.r();
            if r >= 0.5 {
                return None;
            }
            let sigma = params.s().abs();
            Some(-0.5 / ch.damping_rate() * ((1.0 - 2.0 * r) / (2.0 * sigma)).ln())
        }
        _ => None,
    }
}

/// t_st = -(1/2Γ) ln[(3r-1)/σ]: the β2 = β3 crossing, present exactly in the
/// SUDDEN_CHANGE sub-region.
pub fn sudden_transition_time(params: XStateParams, ch: &ChannelParams) -> Option<f64> {
    if classify(params).subregion != Some(LquRegime::SuddenChange) {
        return None;
    }
    let r = params.r();
    let sigma = params.s().abs();
    Some(-0.5 / ch.damping_rate() * ((3.0 * r - 1.0) / sigma).ln())
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub reports: Vec<CorrelationReport>,
    pub events: EventTimes,
    pub region: RegionTag,
}

/// Evolve `params` on a uniform `n_steps`-point grid over [0, t_max].
///
/// Per-point values come from the closed forms along the parameter flow;
/// at both endpoints the generic eigensolve route is run as a cross-check.
pub fn trajectory(
    params: XStateParams,
    ch: &ChannelParams,
    t_max: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidParams(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    if n_steps < 2 {
        return Err(Error::InvalidParams(format!(
            "a trajectory needs at least 2 points, got {n_steps}"
        )));
    }
    let denom = (n_steps - 1) as f64;
    let times: Vec<f64> = (0..n_steps).map(|i| t_max * (i as f64 / denom)).collect();
    let reports: Vec<CorrelationReport> = times
        .iter()
        .map(|&t| Ok(family_report(t, evolve_params(params, t, ch)?)))
        .collect::<Result<_>>()?;

    for idx in [0, n_steps - 1] {
        let rep = &reports[idx];
        let state = build_xstate(rep.params_t);
        let dn = (rep.negativity - negativity(&state)).abs();
        if dn > 1e-9 {
            return Err(Error::CrossCheck(format!(
                "negativity closed-form vs eigensolve differ by {dn:.3e} at t = {}",
                rep.t
            )));
        }
        let dl = (rep.lqu - lqu_generic(&state)).abs();
        if dl > 1e-8 {
            return Err(Error::CrossCheck(format!(
                "LQU closed-form vs generic differ by {dl:.3e} at t = {}",
                rep.t
            )));
        }
    }

    Ok(Trajectory {
        times,
        reports,
        events: EventTimes {
            t_sd: sudden_death_time(params, ch),
            t_st: sudden_transition_time(params, ch),
        },
        region: classify(params),
    })
}

/// One grid point of the phase diagram; unphysical points keep only (r, s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub r: f64,
    pub s: f64,
    pub physical: bool,
    pub tag: Option<RegionTag>,
    pub negativity0: Option<f64>,
    pub lqu0: Option<f64>,
    pub lqu_inf: Option<f64>,
    pub t_sd: Option<f64>,
    pub t_st: Option<f64>,
}

impl Serialize for PhasePoint {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PhasePoint", 10)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("physical", &self.physical)?;
        st.serialize_field("region", &self.tag.map(|t| t.region))?;
        st.serialize_field("subregion", &self.tag.and_then(|t| t.subregion))?;
        st.serialize_field("negativity0", &self.negativity0)?;
        st.serialize_field("lqu0", &self.lqu0)?;
        st.serialize_field("lqu_inf", &self.lqu_inf)?;
        st.serialize_field("t_sd", &self.t_sd)?;
        st.serialize_field("t_st", &self.t_st)?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub grid_n: usize,
    pub points: Vec<PhasePoint>,
}

/// Sweep a uniform grid: `grid_n` points over r in [0, 1/2] and 2·grid_n - 1
/// points over s in [-1/2, 1/2] (equal spacing, so r = |s| lands exactly on
/// grid nodes). Rows are emitted r-major, s inner, keyed by grid index.
pub fn phase_diagram(grid_n: usize, ch: &ChannelParams) -> Result<PhaseDiagram> {
    if grid_n < 2 {
        return Err(Error::InvalidParams(format!(
            "the phase-diagram grid needs at least 2 points per axis, got {grid_n}"
        )));
    }
    let last = (grid_n - 1) as f64;
    let mut points = Vec::with_capacity(grid_n * (2 * grid_n - 1));
    for i in 0..grid_n {
        let r = 0.5 * (i as f64 / last);
        for j in 0..(2 * grid_n - 1) {
            let k = j as i64 - (grid_n as i64 - 1);
            let s = 0.5 * (k as f64 / last);
            points.push(match XStateParams::new(r, s) {
                Ok(p) => {
                    let asymptotic = 1.0 - 2.0 * (r * (1.0 - 2.0 * r)).sqrt().max(r);
                    PhasePoint {
                        r,
                        s,
                        physical: true,
                        tag: Some(classify(p)),
                        negativity0: Some(negativity_family(p)),
                        lqu0: Some(lqu_family(p).0),
                        lqu_inf: Some(asymptotic),
                        t_sd: sudden_death_time(p, ch),
                        t_st: sudden_transition_time(p, ch),
                    }
                }
                Err(_) => PhasePoint {
                    r,
                    s,
                    physical: false,
                    tag: None,
                    negativity0: None,
                    lqu0: None,
                    lqu_inf: None,
                    t_sd: None,
                    t_st: None,
                },
            });
        }
    }
    Ok(PhaseDiagram { grid_n, points })
}

fn fmt_opt(v: Option<f64>) -> String {
    // `{}` on f64 prints the shortest representation that parses back
    // exactly, which keeps the CSV byte-stable and lossless
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_trajectory_csv<W: io::Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    writeln!(out, "t,r,s_t,negativity,lqu,beta1,beta2,beta3")?;
    for rep in &traj.reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            rep.t,
            rep.params_t.r(),
            rep.params_t.s(),
            rep.negativity,
            rep.lqu,
            rep.betas.beta1,
            rep.betas.beta2,
            rep.betas.beta3
        )?;
    }
    Ok(())
}

pub fn write_phase_diagram_csv<W: io::Write>(pd: &PhaseDiagram, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "r,s,physical,region,subregion,negativity0,lqu0,lqu_inf,t_sd,t_st"
    )?;
    for p in &pd.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            p.r,
            p.s,
            p.physical,
            p.tag.map(|t| t.region.as_str()).unwrap_or(""),
            p.tag
                .and_then(|t| t.subregion)
                .map(|x| x.as_str())
                .unwrap_or(""),
            fmt_opt(p.negativity0),
            fmt_opt(p.lqu0),
            fmt_opt(p.lqu_inf),
            fmt_opt(p.t_sd),
            fmt_opt(p.t_st)
        )?;
    }
    Ok(())
}
