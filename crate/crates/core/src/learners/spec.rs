use std::fmt;
use std::str::FromStr;

use super::{Cjal, Exploration, Fixed, Learner, Phc, Sapga, WolfPhc};
use crate::error::{Error, Result};
use crate::games::NormalFormGame;

/// A learner description such as `sapga(w0=0.85,api=0.001)`.
///
/// Omitted keys take their defaults. `p0` is the initial probability of
/// action 0; without it the policy starts uniform.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerSpec {
    Sapga {
        w0: f64,
        alpha_pi: f64,
        alpha_w: f64,
        beta: f64,
        p0: Option<f64>,
        exploration: Exploration,
    },
    Phc {
        alpha: f64,
        beta: f64,
        p0: Option<f64>,
        exploration: Exploration,
    },
    WolfPhc {
        delta_win: f64,
        delta_lose: f64,
        beta: f64,
        p0: Option<f64>,
        exploration: Exploration,
    },
    Cjal {
        warmup: u64,
        exploration: Exploration,
    },
    Fixed {
        p: f64,
    },
}

impl LearnerSpec {
    pub fn sapga(w0: f64) -> Self {
        Self::Sapga {
            w0,
            alpha_pi: 0.001,
            alpha_w: 0.001,
            beta: 0.8,
            p0: None,
            exploration: Exploration::default(),
        }
    }

    pub fn phc() -> Self {
        Self::Phc {
            alpha: 0.001,
            beta: 0.8,
            p0: None,
            exploration: Exploration::default(),
        }
    }

    pub fn wolfphc() -> Self {
        Self::WolfPhc {
            delta_win: 0.001 / 4.0,
            delta_lose: 0.001,
            beta: 0.8,
            p0: None,
            exploration: Exploration::default(),
        }
    }

    pub fn cjal() -> Self {
        Self::Cjal {
            warmup: 100,
            exploration: Exploration::default(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Sapga { .. } => "sapga",
            Self::Phc { .. } => "phc",
            Self::WolfPhc { .. } => "wolfphc",
            Self::Cjal { .. } => "cjal",
            Self::Fixed { .. } => "fixed",
        }
    }

    /// Replaces the initial probability of action 0 where the learner has one.
    pub fn with_p0(mut self, value: f64) -> Self {
        match &mut self {
            Self::Sapga { p0, .. } | Self::Phc { p0, .. } | Self::WolfPhc { p0, .. } => *p0 = Some(value),
            Self::Fixed { p } => *p = value,
            Self::Cjal { .. } => {}
        }
        self
    }

    /// Instantiates the learner for `seat` of `game`.
    pub fn build(&self, game: &NormalFormGame, seat: usize) -> Result<Box<dyn Learner>> {
        self.validate()?;
        let n = game.actions()[seat];
        Ok(match *self {
            Self::Sapga { w0, alpha_pi, alpha_w, beta, p0, exploration } => {
                Box::new(Sapga::new(n, w0, alpha_pi, alpha_w, beta, p0, exploration))
            }
            Self::Phc { alpha, beta, p0, exploration } => Box::new(Phc::new(n, alpha, beta, p0, exploration)),
            Self::WolfPhc { delta_win, delta_lose, beta, p0, exploration } => {
                Box::new(WolfPhc::new(n, delta_win, delta_lose, beta, p0, exploration))
            }
            Self::Cjal { warmup, exploration } => {
                if game.n_players() != 2 {
                    return Err(Error::Config("cjal needs a two-player game".into()));
                }
                Box::new(Cjal::new(n, game.actions()[1 - seat], seat, warmup, exploration))
            }
            Self::Fixed { p } => Box::new(Fixed { policy: super::initial_policy(n, Some(p)) }),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{} {name} must lie in [0, 1], got {v}", self.kind())))
            }
        };
        let rate = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{} {name} must lie in (0, 1], got {v}", self.kind())))
            }
        };
        let p0 = |p: Option<f64>| p.map_or(Ok(()), |v| unit("p0", v));
        match *self {
            Self::Sapga { w0, alpha_pi, alpha_w, beta, p0: init, .. } => {
                unit("w0", w0)?;
                rate("api", alpha_pi)?;
                unit("aw", alpha_w)?;
                rate("beta", beta)?;
                p0(init)
            }
            Self::Phc { alpha, beta, p0: init, .. } => {
                rate("alpha", alpha)?;
                rate("beta", beta)?;
                p0(init)
            }
            Self::WolfPhc { delta_win, delta_lose, beta, p0: init, .. } => {
                rate("dwin", delta_win)?;
                rate("dlose", delta_lose)?;
                if delta_win > delta_lose {
                    return Err(Error::Config(format!(
                        "wolfphc needs dwin <= dlose, got {delta_win} > {delta_lose}"
                    )));
                }
                rate("beta", beta)?;
                p0(init)
            }
            Self::Cjal { .. } => Ok(()),
            Self::Fixed { p } => unit("p", p),
        }
    }

    /// Parses a comma-separated list of specs, respecting parentheses.
    pub fn parse_list(text: &str) -> Result<Vec<LearnerSpec>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(text[start..i].parse()?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(text[start..].parse()?);
        Ok(out)
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(open) => {
                let Some(inner) = text[open + 1..].strip_suffix(')') else {
                    return Err(Error::Parse(format!("learner spec `{text}` is missing a closing `)`")));
                };
                (text[..open].trim(), inner)
            }
            None => (text, ""),
        };
        let mut spec = match name {
            "sapga" => Self::sapga(0.85),
            "phc" => Self::phc(),
            "wolfphc" => Self::wolfphc(),
            "cjal" => Self::cjal(),
            "fixed" => Self::Fixed { p: 0.5 },
            other => return Err(Error::Parse(format!("unknown learner `{other}`"))),
        };
        // wolfphc's alpha sets both steps unless they are given explicitly
        let mut wolf_alpha = None;
        let mut wolf_explicit = (false, false);
        for pair in args.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let Some((key, value)) = pair.split_once('=') else {
                return Err(Error::Parse(format!("expected key=value in {name}(...), got `{pair}`")));
            };
            let key = key.trim();
            let value = value.trim();
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}` in {name}(...)")))
            };
            let unknown = || Error::Parse(format!("unknown parameter `{key}` for {name}"));
            let exploration = match &mut spec {
                Self::Sapga { exploration, .. }
                | Self::Phc { exploration, .. }
                | Self::WolfPhc { exploration, .. }
                | Self::Cjal { exploration, .. } => Some(exploration),
                Self::Fixed { .. } => None,
            };
            match (key, exploration) {
                ("eps0", Some(e)) => {
                    e.eps0 = num()?;
                    continue;
                }
                ("tau", Some(e)) => {
                    e.tau = num()?;
                    continue;
                }
                _ => {}
            }
            match (&mut spec, key) {
                (Self::Sapga { w0, .. }, "w0") => *w0 = num()?,
                (Self::Sapga { alpha_pi, .. }, "api") => *alpha_pi = num()?,
                (Self::Sapga { alpha_w, .. }, "aw") => *alpha_w = num()?,
                (Self::Phc { alpha, .. }, "alpha") => *alpha = num()?,
                (Self::WolfPhc { .. }, "alpha") => wolf_alpha = Some(num()?),
                (Self::WolfPhc { delta_win, .. }, "dwin") => {
                    *delta_win = num()?;
                    wolf_explicit.0 = true;
                }
                (Self::WolfPhc { delta_lose, .. }, "dlose") => {
                    *delta_lose = num()?;
                    wolf_explicit.1 = true;
                }
                (Self::Sapga { beta, .. } | Self::Phc { beta, .. } | Self::WolfPhc { beta, .. }, "beta") => {
                    *beta = num()?
                }
                (Self::Sapga { p0, .. } | Self::Phc { p0, .. } | Self::WolfPhc { p0, .. }, "p0") => {
                    *p0 = Some(num()?)
                }
                (Self::Cjal { warmup, .. }, "warmup") => {
                    *warmup = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad value `{value}` for `warmup` in cjal(...)")))?
                }
                (Self::Fixed { p }, "p") => *p = num()?,
                _ => return Err(unknown()),
            }
        }
        if let (Some(alpha), Self::WolfPhc { delta_win, delta_lose, .. }) = (wolf_alpha, &mut spec) {
            if !wolf_explicit.0 {
                *delta_win = alpha / 4.0;
            }
            if !wolf_explicit.1 {
                *delta_lose = alpha;
            }
        }
        spec.validate().map_err(|e| match e {
            Error::Config(msg) => Error::Parse(msg),
            other => other,
        })?;
        Ok(spec)
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |f: &mut fmt::Formatter<'_>, p0: Option<f64>, e: &Exploration| {
            if let Some(p) = p0 {
                write!(f, ",p0={p}")?;
            }
            write!(f, ",eps0={},tau={})", e.eps0, e.tau)
        };
        match self {
            Self::Sapga { w0, alpha_pi, alpha_w, beta, p0, exploration } => {
                write!(f, "sapga(w0={w0},api={alpha_pi},aw={alpha_w},beta={beta}")?;
                tail(f, *p0, exploration)
            }
            Self::Phc { alpha, beta, p0, exploration } => {
                write!(f, "phc(alpha={alpha},beta={beta}")?;
                tail(f, *p0, exploration)
            }
            Self::WolfPhc { delta_win, delta_lose, beta, p0, exploration } => {
                write!(f, "wolfphc(dwin={delta_win},dlose={delta_lose},beta={beta}")?;
                tail(f, *p0, exploration)
            }
            Self::Cjal { warmup, exploration } => {
                write!(f, "cjal(warmup={warmup},eps0={},tau={})", exploration.eps0, exploration.tau)
            }
            Self::Fixed { p } => write!(f, "fixed(p={p})"),
        }
    }
}
