//! System configs.
//!
//! ```toml
//! kind = "circle-affine"        # or interval-pw-linear, sft, or a preset
//! metric = "arc"                # optional; must match the kind
//!
//! [parameters]
//! factor = "2"
//! offset = "0"
//! ```
//!
//! Presets: `doubling`, `tent`, `identity`, `rotation` (`offset`),
//! `full-shift` and `golden-mean` (`depth`).

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use chaindyn::scalar::parse_rational;
use chaindyn::systems::{AffinePiece, CircleAffine, PiecewiseLinear, Subshift};
use chaindyn::{ExactSystem, Rational};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: String,
    metric: Option<String>,
    #[serde(default)]
    parameters: BTreeMap<String, toml::Value>,
}

fn rational(v: &toml::Value, what: &str) -> Result<Rational> {
    let text = match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        other => bail!("{what}: expected a \"p/q\" string, got {other}"),
    };
    parse_rational(&text).ok_or_else(|| anyhow!("{what}: cannot parse {text:?} as an exact number"))
}

struct Params(BTreeMap<String, toml::Value>);

impl Params {
    fn get(&self, key: &str) -> Result<&toml::Value> {
        self.0.get(key).ok_or_else(|| anyhow!("missing parameter `{key}`"))
    }

    fn rational(&self, key: &str) -> Result<Rational> {
        rational(self.get(key)?, key)
    }

    fn usize(&self, key: &str) -> Result<usize> {
        match self.get(key)? {
            toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            other => bail!("{key}: expected a non-negative integer, got {other}"),
        }
    }

    fn array(&self, key: &str) -> Result<&Vec<toml::Value>> {
        self.get(key)?.as_array().ok_or_else(|| anyhow!("{key}: expected an array"))
    }
}

pub fn parse_system(text: &str) -> Result<ExactSystem> {
    let raw: RawConfig = toml::from_str(text).context("malformed system config")?;
    let p = Params(raw.parameters);
    let spec = match raw.kind.as_str() {
        "doubling" => ExactSystem::doubling(),
        "tent" => ExactSystem::tent(),
        "identity" => ExactSystem::identity(),
        "rotation" => ExactSystem::Circle(CircleAffine::new(Rational::from_integer(1.into()), p.rational("offset")?)?),
        "full-shift" => ExactSystem::Shift(Subshift::full(2, p.usize("depth")?)?),
        "golden-mean" => ExactSystem::Shift(Subshift::golden_mean(p.usize("depth")?)?),
        "circle-affine" => ExactSystem::Circle(CircleAffine::new(p.rational("factor")?, p.rational("offset")?)?),
        "interval-pw-linear" => {
            let breakpoints = p
                .array("breakpoints")?
                .iter()
                .map(|v| rational(v, "breakpoints"))
                .collect::<Result<Vec<_>>>()?;
            let pieces = p
                .array("pieces")?
                .iter()
                .map(|v| match v.as_array().map(|a| a.as_slice()) {
                    Some([s, c]) => Ok(AffinePiece::new(rational(s, "slope")?, rational(c, "intercept")?)),
                    _ => bail!("pieces: each entry must be [slope, intercept]"),
                })
                .collect::<Result<Vec<_>>>()?;
            ExactSystem::Interval(PiecewiseLinear::new(breakpoints, pieces)?)
        }
        "sft" => {
            let alphabet = p.usize("alphabet")?;
            let rows = p.array("adjacency")?;
            let adjacency = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| anyhow!("adjacency rows must be arrays"))?
                        .iter()
                        .map(|x| match x {
                            toml::Value::Integer(0) | toml::Value::Boolean(false) => Ok(false),
                            toml::Value::Integer(1) | toml::Value::Boolean(true) => Ok(true),
                            other => bail!("adjacency entries must be 0 or 1, got {other}"),
                        })
                        .collect::<Result<Vec<bool>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if adjacency.len() != alphabet {
                bail!("adjacency has {} rows for alphabet {alphabet}", adjacency.len());
            }
            ExactSystem::Shift(Subshift::new(adjacency, p.usize("depth")?)?)
        }
        other => bail!("unknown system kind `{other}`"),
    };
    if let Some(m) = raw.metric {
        if m != spec.metric().name() {
            bail!("metric `{m}` does not match a {} system (expects `{}`)", spec.kind_name(), spec.metric().name());
        }
    }
    Ok(spec)
}
