use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{saiga_rhs, DynamicsParams, DynamicsState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub game: String,
    pub dt: f64,
    pub steps: usize,
    pub projected: bool,
}

/// States of the dynamics on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DynamicsState>,
    pub params: DynamicsParams,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn last(&self) -> &DynamicsState {
        self.states.last().expect("trajectories are never empty")
    }

    /// State at time `t` by linear interpolation on the grid (clamped to its ends).
    pub fn state_at(&self, t: f64) -> DynamicsState {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.states[0];
        }
        if t >= self.times[n - 1] {
            return self.states[n - 1];
        }
        let hi = self.times.partition_point(|&x| x < t);
        let lo = hi - 1;
        let frac = (t - self.times[lo]) / (self.times[hi] - self.times[lo]);
        let a = self.states[lo].to_array();
        let b = self.states[hi].to_array();
        let mut x = [0.0; 4];
        for k in 0..4 {
            x[k] = a[k] + frac * (b[k] - a[k]);
        }
        DynamicsState::from_array(x)
    }

    /// Writes `t,p1,p2,w1,w2` rows, keeping every `every`-th state and the last one.
    pub fn write_csv<W: Write>(&self, mut out: W, every: usize) -> Result<()> {
        let every = every.max(1);
        writeln!(out, "t,p1,p2,w1,w2")?;
        let n = self.states.len();
        for (i, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            if i % every == 0 || i + 1 == n {
                writeln!(out, "{t},{},{},{},{}", s.p1, s.p2, s.w1, s.w2)?;
            }
        }
        Ok(())
    }
}

/// Fixed-step RK4 integration of [`saiga_rhs`].
///
/// With `projected` set, stage states and the post-step state are clamped to
/// the unit box, which mimics the projection of policies and attitudes onto
/// [0, 1].
pub fn integrate(
    params: &DynamicsParams,
    x0: DynamicsState,
    dt: f64,
    steps: usize,
    projected: bool,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::contract(format!("dt must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::contract("steps must be at least 1"));
    }
    let project = |x: [f64; 4]| if projected { x.map(|v| v.clamp(0.0, 1.0)) } else { x };
    let f = |x: [f64; 4]| saiga_rhs(&DynamicsState::from_array(x), params);
    let axpy = |x: [f64; 4], h: f64, k: [f64; 4]| {
        let mut y = x;
        for i in 0..4 {
            y[i] += h * k[i];
        }
        project(y)
    };

    let mut x = project(x0.to_array());
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state_of(x, projected));
    for step in 1..=steps {
        let k1 = f(x);
        let k2 = f(axpy(x, 0.5 * dt, k1));
        let k3 = f(axpy(x, 0.5 * dt, k2));
        let k4 = f(axpy(x, dt, k3));
        let mut next = x;
        for i in 0..4 {
            next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        x = project(next);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration { step });
        }
        times.push(step as f64 * dt);
        states.push(state_of(x, projected));
    }
    Ok(Trajectory {
        times,
        states,
        params: *params,
        meta: TrajectoryMeta {
            game: String::new(),
            dt,
            steps,
            projected,
        },
    })
}

fn state_of(x: [f64; 4], projected: bool) -> DynamicsState {
    let mut s = DynamicsState::from_array(x);
    s.unconstrained = !projected;
    s
}
