//! Fully resolved run configuration, echoed into every artifact.

use std::path::PathBuf;

use hardy_core::criteria::AlphaGrid;
use hardy_core::hmeasure::WoSConfig;
use serde_json::{json, Map, Value};

use crate::output::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub map: Option<String>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub n_pairs: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<AlphaGrid>,
    pub harm_grid: Option<AlphaGrid>,
    pub wos: Option<WoSConfig>,
    pub criteria: Option<Vec<&'static str>>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format, out: Option<PathBuf>) -> Self {
        RunConfig {
            command,
            map: None,
            p: None,
            alpha: None,
            n_pairs: None,
            seed: None,
            grid: None,
            harm_grid: None,
            wos: None,
            criteria: None,
            format,
            out,
        }
    }

    /// Only the fields that apply to the command, in a fixed order.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.into());
        if let Some(s) = &self.map {
            m.insert("map".into(), s.as_str().into());
        }
        if let Some(p) = self.p {
            m.insert("p".into(), num(p));
        }
        if let Some(a) = self.alpha {
            m.insert("alpha".into(), num(a));
        }
        if let Some(n) = self.n_pairs {
            m.insert("n".into(), n.into());
        }
        if let Some(s) = self.seed {
            m.insert("seed".into(), s.into());
        }
        if let Some(g) = &self.grid {
            m.insert("grid".into(), grid_json(g));
        }
        if let Some(g) = &self.harm_grid {
            m.insert("harm_grid".into(), grid_json(g));
        }
        if let Some(w) = &self.wos {
            m.insert(
                "wos".into(),
                json!({
                    "walkers": w.n_walkers,
                    "epsilon": num(w.epsilon),
                    "max_steps": w.max_steps,
                    "seed": w.seed,
                    "model": w.model.as_str(),
                }),
            );
        }
        if let Some(c) = &self.criteria {
            m.insert("criteria".into(), c.clone().into());
        }
        m.insert("format".into(), self.format.as_str().into());
        m.insert("out".into(), self.out.as_ref().map_or(Value::Null, |p| p.display().to_string().into()));
        Value::Object(m)
    }
}

pub fn grid_json(g: &AlphaGrid) -> Value {
    json!({
        "alpha_min": num(g.alpha_min),
        "alpha_max": num(g.alpha_max),
        "per_decade": g.points_per_decade,
    })
}
