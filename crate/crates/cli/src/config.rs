//! TOML model and auxiliary-channel files.
//!
//! A model file names its `mode` and either spells out every distribution
//!
//! ```toml
//! mode = "gs"
//!
//! [source]
//! labels = ["0", "1"]
//! mass = [0.5, 0.5]
//!
//! [cost]
//! labels = ["0", "1"]
//! values = [0.5, 0.3]
//!
//! [measurement_channel]
//! y_labels = ["0", "1"]
//! z_labels = ["0", "1"]
//! # rows (x, a), x major; columns (y, z), y major
//! matrix = [[...], [...], [...], [...]]
//! ```
//!
//! or uses a `[binary_example]` block (`alpha`, `p0`, `p1`, `p`, `gamma0`,
//! `gamma1`) in place of `source`, `cost` and `measurement_channel`. Hidden
//! modes also need `[hidden_channel]` with `labels` for `X̃` and a
//! `|X| × |X̃|` `matrix`.

use crate::{CliError, CliResult};
use keyregion::binary::BinaryExampleParams;
use keyregion::prob::{
    Alphabet, AuxiliaryChoice, Channel, CostFunction, Distribution, MeasurementChannel, Mode,
    SystemModel,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_example: Option<BinaryBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden_channel: Option<HiddenSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement_channel: Option<MeasurementSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinaryBlock {
    pub alpha: f64,
    pub p0: f64,
    pub p1: f64,
    pub p: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl From<BinaryBlock> for BinaryExampleParams {
    fn from(b: BinaryBlock) -> Self {
        BinaryExampleParams {
            alpha: b.alpha,
            p0: b.p0,
            p1: b.p1,
            p: b.p,
            gamma0: b.gamma0,
            gamma1: b.gamma1,
        }
    }
}

impl From<BinaryExampleParams> for BinaryBlock {
    fn from(b: BinaryExampleParams) -> Self {
        BinaryBlock {
            alpha: b.alpha,
            p0: b.p0,
            p1: b.p1,
            p: b.p,
            gamma0: b.gamma0,
            gamma1: b.gamma1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub mass: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiddenSection {
    /// Labels of `X̃`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSection {
    pub y_labels: Vec<String>,
    pub z_labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

fn alphabet(name: &str, labels: Option<&Vec<String>>, size: usize) -> CliResult<Alphabet> {
    let a = match labels {
        Some(l) => {
            if l.len() != size {
                return Err(CliError::Config(format!(
                    "`{name}` has {} labels for {size} entries",
                    l.len()
                )));
            }
            Alphabet::new(name, l.clone())
        }
        None => Alphabet::indexed(name, size),
    };
    a.map_err(|e| CliError::Config(e.to_string()))
}

fn cfg<T>(r: keyregion::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Config(e.to_string()))
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

impl ModelConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        Self::parse(&read(path)?)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        parse(text, "model file")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model config serializes")
    }

    pub fn mode(&self) -> CliResult<Mode> {
        self.mode.parse().map_err(|e: keyregion::Error| CliError::Config(e.to_string()))
    }

    /// The validated system model.
    pub fn build(&self) -> CliResult<SystemModel> {
        let mode = self.mode()?;
        let (source, measurement, cost) = match &self.binary_example {
            Some(block) => {
                if self.source.is_some() || self.cost.is_some() || self.measurement_channel.is_some() {
                    return Err(CliError::Config(
                        "[binary_example] replaces [source], [cost] and [measurement_channel]".into(),
                    ));
                }
                let params: BinaryExampleParams = (*block).into();
                let m = cfg(params.model())?;
                (m.source().clone(), m.measurement().clone(), m.cost().clone())
            }
            None => self.explicit_parts()?,
        };
        let hidden = match &self.hidden_channel {
            Some(h) => {
                let width = h.matrix.first().map_or(0, Vec::len);
                let out = alphabet("Xt", h.labels.as_ref(), width)?;
                Some(cfg(Channel::new(source.alphabet().clone(), out, h.matrix.clone()))?)
            }
            None => None,
        };
        cfg(SystemModel::new(source, hidden, measurement, cost, mode))
    }

    fn explicit_parts(&self) -> CliResult<(Distribution, MeasurementChannel, CostFunction)> {
        let missing = |s: &str| CliError::Config(format!("missing [{s}] section"));
        let src = self.source.as_ref().ok_or_else(|| missing("source"))?;
        let cost = self.cost.as_ref().ok_or_else(|| missing("cost"))?;
        let meas = self.measurement_channel.as_ref().ok_or_else(|| missing("measurement_channel"))?;
        let x = alphabet("X", src.labels.as_ref(), src.mass.len())?;
        let a = alphabet("A", cost.labels.as_ref(), cost.values.len())?;
        let y = alphabet("Y", Some(&meas.y_labels), meas.y_labels.len())?;
        let z = alphabet("Z", Some(&meas.z_labels), meas.z_labels.len())?;
        Ok((
            cfg(Distribution::new(x.clone(), src.mass.clone()))?,
            cfg(MeasurementChannel::new(&x, &a, y, z, meas.matrix.clone()))?,
            cfg(CostFunction::new(a, cost.values.clone()))?,
        ))
    }

    /// Explicit form of a model; `build` on the result reproduces it.
    pub fn from_model(model: &SystemModel) -> Self {
        let labels = |a: &Alphabet| Some(a.labels().to_vec());
        let meas = model.measurement();
        let nyz = meas.channel().output().size();
        ModelConfig {
            mode: model.mode().region_id().to_string(),
            binary_example: None,
            source: Some(SourceSection {
                labels: labels(model.source().alphabet()),
                mass: model.source().mass().to_vec(),
            }),
            hidden_channel: model.hidden().map(|h| HiddenSection {
                labels: labels(h.output()),
                matrix: h.rows().map(<[f64]>::to_vec).collect(),
            }),
            cost: Some(CostSection {
                labels: labels(model.cost().actions()),
                values: model.cost().values().to_vec(),
            }),
            measurement_channel: Some(MeasurementSection {
                y_labels: meas.y().labels().to_vec(),
                z_labels: meas.z().labels().to_vec(),
                matrix: meas.channel().matrix().chunks(nyz).map(<[f64]>::to_vec).collect(),
            }),
        }
    }
}

/// Auxiliary channels in a file:
///
/// ```toml
/// mode = "gs"          # any mode with the model's source visibility
/// action = [[0.8, 0.2], [0.2, 0.8]]        # rows X (or X̃), columns A
/// v_channel = [[1, 0, 0, 0], ...]          # rows (x, a), columns V
/// u_channel = [[1], [1], [1], [1]]         # rows V, columns U
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxConfig {
    pub mode: String,
    pub action: Vec<Vec<f64>>,
    pub v_channel: Vec<Vec<f64>>,
    pub u_channel: Vec<Vec<f64>>,
    /// Permit `|U|`, `|V|` beyond the cardinality bounds.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_oversize: bool,
}

impl AuxConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        parse(&read(path)?, "auxiliary file")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("aux config serializes")
    }

    pub fn from_aux(aux: &AuxiliaryChoice, mode: Mode) -> Self {
        let rows = |c: &Channel| c.rows().map(<[f64]>::to_vec).collect();
        AuxConfig {
            mode: mode.region_id().to_string(),
            action: rows(&aux.action),
            v_channel: rows(&aux.v_channel),
            u_channel: rows(&aux.u_channel),
            allow_oversize: aux.allow_oversize,
        }
    }

    /// Channels for `model`. Shape or visibility disagreements are
    /// mismatches; bad rows are configuration errors.
    pub fn build(&self, model: &SystemModel) -> CliResult<AuxiliaryChoice> {
        let mode: Mode = self
            .mode
            .parse()
            .map_err(|e: keyregion::Error| CliError::Config(e.to_string()))?;
        if mode.is_hidden() != model.mode().is_hidden() {
            return Err(CliError::Mismatch(format!(
                "auxiliary file is for {mode} but the model is {}",
                model.mode()
            )));
        }
        let width = |m: &Vec<Vec<f64>>| m.first().map_or(0, Vec::len);
        let (ne, na) = (model.encoder_size(), model.a_size());
        let (nv, nu) = (width(&self.v_channel), width(&self.u_channel));
        let shapes = [
            ("action", &self.action, ne, na),
            ("v_channel", &self.v_channel, ne * na, nv),
            ("u_channel", &self.u_channel, nv, nu),
        ];
        for (name, m, rows, cols) in shapes {
            if m.len() != rows || m.iter().any(|r| r.len() != cols) || cols == 0 {
                return Err(CliError::Mismatch(format!(
                    "`{name}` must be {rows}×{cols} for this model"
                )));
            }
        }
        let e = model.encoder_alphabet().clone();
        let a = model.cost().actions().clone();
        let v = cfg(Alphabet::indexed("V", nv))?;
        let u = cfg(Alphabet::indexed("U", nu))?;
        let mut aux = AuxiliaryChoice::new(
            cfg(Channel::new(e.clone(), a.clone(), self.action.clone()))?,
            cfg(Channel::new(Alphabet::product("EA", &e, &a), v.clone(), self.v_channel.clone()))?,
            cfg(Channel::new(v, u, self.u_channel.clone()))?,
        );
        aux.allow_oversize = self.allow_oversize;
        aux.check_against(model)
            .map_err(|e| CliError::Mismatch(e.to_string()))?;
        Ok(aux)
    }
}
