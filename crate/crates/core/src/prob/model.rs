//! Problem instances and the auxiliary channels optimized over.

use super::dist::{Alphabet, Channel, CostFunction, Distribution};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Source visibility and secret type. Doubles as the region identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Visible source, generated secret (`gs`).
    VisibleGenerated,
    /// Visible source, chosen secret (`cs`).
    VisibleChosen,
    /// Hidden source, generated secret (`hgs`).
    HiddenGenerated,
    /// Hidden source, chosen secret (`hcs`).
    HiddenChosen,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::VisibleGenerated,
        Mode::VisibleChosen,
        Mode::HiddenGenerated,
        Mode::HiddenChosen,
    ];

    pub fn is_hidden(self) -> bool {
        matches!(self, Mode::HiddenGenerated | Mode::HiddenChosen)
    }

    pub fn is_chosen(self) -> bool {
        matches!(self, Mode::VisibleChosen | Mode::HiddenChosen)
    }

    pub fn region_id(self) -> &'static str {
        match self {
            Mode::VisibleGenerated => "gs",
            Mode::VisibleChosen => "cs",
            Mode::HiddenGenerated => "hgs",
            Mode::HiddenChosen => "hcs",
        }
    }

    pub fn mode_name(self) -> &'static str {
        match self {
            Mode::VisibleGenerated => "visible-generated",
            Mode::VisibleChosen => "visible-chosen",
            Mode::HiddenGenerated => "hidden-generated",
            Mode::HiddenChosen => "hidden-chosen",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Mode::VisibleGenerated => "visible source, generated secret",
            Mode::VisibleChosen => "visible source, chosen secret",
            Mode::HiddenGenerated => "hidden source, generated secret",
            Mode::HiddenChosen => "hidden source, chosen secret",
        }
    }

    /// The mode with the same source visibility and the other secret type.
    pub fn counterpart(self) -> Mode {
        match self {
            Mode::VisibleGenerated => Mode::VisibleChosen,
            Mode::VisibleChosen => Mode::VisibleGenerated,
            Mode::HiddenGenerated => Mode::HiddenChosen,
            Mode::HiddenChosen => Mode::HiddenGenerated,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mode_name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.region_id() == s || m.mode_name() == s)
            .ok_or_else(|| Error::Structural(format!("unknown mode or region `{s}`")))
    }
}

/// `P_{YZ|XA}`: rows indexed by `(x, a)` with `x` major, columns by `(y, z)`
/// with `y` major.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementChannel {
    y: Alphabet,
    z: Alphabet,
    num_actions: usize,
    channel: Channel,
}

impl MeasurementChannel {
    pub fn new(
        x: &Alphabet,
        a: &Alphabet,
        y: Alphabet,
        z: Alphabet,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let input = Alphabet::product("XA", x, a);
        let output = Alphabet::product("YZ", &y, &z);
        let channel = Channel::new(input, output, rows)?;
        Ok(Self {
            y,
            z,
            num_actions: a.size(),
            channel,
        })
    }

    pub fn y(&self) -> &Alphabet {
        &self.y
    }

    pub fn z(&self) -> &Alphabet {
        &self.z
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    #[inline]
    pub fn prob(&self, x: usize, a: usize, y: usize, z: usize) -> f64 {
        self.channel
            .get(x * self.num_actions + a, y * self.z.size() + z)
    }
}

/// One problem instance: source, optional hidden-source channel,
/// measurement channel, cost function and mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    source: Distribution,
    hidden: Option<Channel>,
    measurement: MeasurementChannel,
    cost: CostFunction,
    mode: Mode,
}

impl SystemModel {
    pub fn new(
        source: Distribution,
        hidden: Option<Channel>,
        measurement: MeasurementChannel,
        cost: CostFunction,
        mode: Mode,
    ) -> Result<Self> {
        match (&hidden, mode.is_hidden()) {
            (Some(_), false) => {
                return Err(Error::Structural(format!(
                    "mode {mode} takes no hidden-source channel"
                )))
            }
            (None, true) => {
                return Err(Error::Structural(format!(
                    "mode {mode} needs a hidden-source channel"
                )))
            }
            _ => {}
        }
        let nx = source.alphabet().size();
        if let Some(h) = &hidden {
            if h.input().size() != nx {
                return Err(Error::Structural(format!(
                    "hidden channel has {} inputs for {} source symbols",
                    h.input().size(),
                    nx
                )));
            }
        }
        let na = cost.actions().size();
        if measurement.channel.input().size() != nx * na || measurement.num_actions != na {
            return Err(Error::Structural(format!(
                "measurement channel needs {} rows (|X|·|A|), has {}",
                nx * na,
                measurement.channel.input().size()
            )));
        }
        Ok(Self {
            source,
            hidden,
            measurement,
            cost,
            mode,
        })
    }

    pub fn source(&self) -> &Distribution {
        &self.source
    }

    pub fn hidden(&self) -> Option<&Channel> {
        self.hidden.as_ref()
    }

    pub fn measurement(&self) -> &MeasurementChannel {
        &self.measurement
    }

    pub fn cost(&self) -> &CostFunction {
        &self.cost
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Same physical model under the other secret type.
    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        if mode.is_hidden() != self.mode.is_hidden() {
            return Err(Error::Structural(format!(
                "cannot reinterpret a {} model as {}",
                self.mode, mode
            )));
        }
        let mut m = self.clone();
        m.mode = mode;
        Ok(m)
    }

    pub fn x_size(&self) -> usize {
        self.source.alphabet().size()
    }

    pub fn a_size(&self) -> usize {
        self.cost.actions().size()
    }

    /// Alphabet the encoder observes: `X` or `X̃`.
    pub fn encoder_alphabet(&self) -> &Alphabet {
        match &self.hidden {
            Some(h) => h.output(),
            None => self.source.alphabet(),
        }
    }

    pub fn encoder_size(&self) -> usize {
        self.encoder_alphabet().size()
    }

    /// Distribution of the encoder observation.
    pub fn encoder_marginal(&self) -> Vec<f64> {
        match &self.hidden {
            None => self.source.mass().to_vec(),
            Some(h) => {
                let mut out = vec![0.0; h.output().size()];
                for (x, &px) in self.source.mass().iter().enumerate() {
                    for (t, o) in out.iter_mut().enumerate() {
                        *o += px * h.get(x, t);
                    }
                }
                out
            }
        }
    }
}

/// The free channels: action `P_{A|X}` (or `P_{A|X̃}`), `P_{V|XA}` (or
/// `P_{V|X̃A}`, rows `(x, a)` with `x` major) and `P_{U|V}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryChoice {
    pub action: Channel,
    pub v_channel: Channel,
    pub u_channel: Channel,
    /// Permit `|U|`, `|V|` beyond the mode's cardinality bounds.
    pub allow_oversize: bool,
}

impl AuxiliaryChoice {
    pub fn new(action: Channel, v_channel: Channel, u_channel: Channel) -> Self {
        Self {
            action,
            v_channel,
            u_channel,
            allow_oversize: false,
        }
    }

    pub fn v_size(&self) -> usize {
        self.v_channel.output().size()
    }

    pub fn u_size(&self) -> usize {
        self.u_channel.output().size()
    }

    /// All channel entries in action, V, U order.
    pub fn flattened(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(
            self.action.matrix().len() + self.v_channel.matrix().len() + self.u_channel.matrix().len(),
        );
        out.extend_from_slice(self.action.matrix());
        out.extend_from_slice(self.v_channel.matrix());
        out.extend_from_slice(self.u_channel.matrix());
        out
    }

    /// Checks dimensions against the model and the cardinality bounds.
    pub fn check_against(&self, model: &SystemModel) -> Result<()> {
        let ne = model.encoder_size();
        let na = model.a_size();
        let side = if model.mode().is_hidden() { "X̃" } else { "X" };
        if self.action.input().size() != ne || self.action.output().size() != na {
            return Err(Error::Structural(format!(
                "action channel must be |{side}|×|A| = {ne}×{na}, got {}×{}",
                self.action.input().size(),
                self.action.output().size()
            )));
        }
        if self.v_channel.input().size() != ne * na {
            return Err(Error::Structural(format!(
                "V channel needs |{side}|·|A| = {} rows, got {}",
                ne * na,
                self.v_channel.input().size()
            )));
        }
        if self.u_channel.input().size() != self.v_size() {
            return Err(Error::Structural(format!(
                "U channel needs |V| = {} rows, got {}",
                self.v_size(),
                self.u_channel.input().size()
            )));
        }
        if !self.allow_oversize {
            let (bu, bv) = crate::frontier::cardinality_bounds(model, model.mode());
            if self.u_size() > bu || self.v_size() > bv {
                return Err(Error::Structural(format!(
                    "|U| = {}, |V| = {} exceed the bounds ({bu}, {bv}); set allow_oversize to override",
                    self.u_size(),
                    self.v_size()
                )));
            }
        }
        Ok(())
    }
}
