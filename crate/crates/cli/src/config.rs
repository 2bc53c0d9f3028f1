//! Run configurations. A config with a top-level `model` key selects one of
//! the symbolic models; anything else is a ball-model config with `context`,
//! `system` and optional `anchor`, `covering` and `options` sections.
//! Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;
use valued_ifs::discrete::{CofiniteCovering, RestSet, Word};
use valued_ifs::line::{Extended, Interval, IntervalUnion, LineCovering};
use valued_ifs::rational::parse_rational;
use valued_ifs::{Ball, Characteristic, ClopenSet, Covering, DvrContext, Element, Ifs, SystemKind};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextConfig {
    pub p: u32,
    pub mode: Characteristic,
    pub precision: u32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    // struct variants, so that stray keys such as `mu` are rejected
    DigitPrepend {},
    Window { mu: u32 },
    TailFixing {},
}

impl SystemConfig {
    pub fn kind(self) -> SystemKind {
        match self {
            SystemConfig::DigitPrepend {} => SystemKind::DigitPrepend,
            SystemConfig::Window { mu } => SystemKind::Window { mu },
            SystemConfig::TailFixing {} => SystemKind::TailFixing,
        }
    }
}

/// Exactly one of the three fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringConfig {
    /// All balls of this radius, one set each.
    #[serde(default)]
    pub uniform: Option<i32>,
    /// Each set is a list of balls in `B(<r>)@<digit-text>` form.
    #[serde(default)]
    pub sets: Option<Vec<Vec<String>>>,
    /// A file with one ball per line, one set per ball; relative to the config.
    #[serde(default)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Options {
    #[serde(default)]
    pub max_k: Option<usize>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallConfig {
    pub context: ContextConfig,
    pub system: SystemConfig,
    #[serde(default)]
    pub anchor: Option<String>,
    #[serde(default)]
    pub covering: Option<CoveringConfig>,
    #[serde(default)]
    pub options: Options,
}

/// `"rest"`, or an explicit list of cylinders.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RestConfig {
    Marker(String),
    Cylinders(Vec<Word>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    Baire {
        #[serde(rename = "maxK", default)]
        max_k: Option<usize>,
    },
    KappaOmega {
        kappa: u64,
        basics: Vec<Word>,
        #[serde(rename = "U", default)]
        u: Option<RestConfig>,
    },
    OmegaDiscrete {
        singletons: Vec<u64>,
    },
    Cofinite {
        complements: Vec<Vec<String>>,
        #[serde(rename = "maxK", default)]
        max_k: Option<usize>,
    },
    Line {
        #[serde(rename = "U")]
        u: Vec<[String; 2]>,
        basics: Vec<[String; 2]>,
        #[serde(default)]
        bound: Option<i64>,
        /// Largest denominator in the closure check.
        #[serde(rename = "maxDen", default)]
        max_den: Option<i128>,
        /// Certificate words use shifts in `[-shifts, shifts]`.
        #[serde(default)]
        shifts: Option<i64>,
    },
}

#[derive(Debug, Clone)]
pub enum RunConfig {
    Ball(BallConfig),
    Model(ModelConfig),
}

/// A parsed config and the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let is_model = value.get("model").is_some();
        let parsed = if is_model {
            serde_json::from_value(value).map(RunConfig::Model)
        } else {
            serde_json::from_value(value).map(RunConfig::Ball)
        };
        parsed.map_err(|e| CliError::Config(e.to_string()))
    }
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        Ok(Self {
            config: RunConfig::parse(&text)?,
            base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        })
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The pieces of a ball-model config, validated against the library.
pub struct BallSetup {
    pub ctx: DvrContext,
    pub ifs: Ifs,
    pub anchor: Element,
    pub universe: Ball,
}

impl BallConfig {
    pub fn setup(&self) -> Result<BallSetup, CliError> {
        let c = &self.context;
        let ctx = DvrContext::new(c.p, c.mode, c.precision)?;
        let ifs = Ifs::canonical(ctx, self.system.kind())?;
        let anchor = match &self.anchor {
            Some(text) => ctx.parse_element(text)?,
            None => ctx.zero(),
        };
        let universe = ifs.universe(&anchor)?;
        Ok(BallSetup { ctx, ifs, anchor, universe })
    }

    pub fn covering(&self, setup: &BallSetup, base_dir: &Path) -> Result<Option<Covering>, CliError> {
        let Some(cov) = &self.covering else {
            return Ok(None);
        };
        let given = [cov.uniform.is_some(), cov.sets.is_some(), cov.file.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::Config(
                "covering needs exactly one of `uniform`, `sets` or `file`".into(),
            ));
        }
        let ctx = &setup.ctx;
        let covering = if let Some(m) = cov.uniform {
            Covering::uniform(&setup.universe, m)?
        } else if let Some(sets) = &cov.sets {
            let sets = sets
                .iter()
                .map(|balls| {
                    balls
                        .iter()
                        .map(|b| Ball::parse(ctx, b))
                        .collect::<valued_ifs::Result<Vec<_>>>()
                        .map(ClopenSet::normalize)
                })
                .collect::<valued_ifs::Result<Vec<_>>>()?;
            Covering::new(setup.universe.clone(), sets)?
        } else {
            let path = base_dir.join(cov.file.as_ref().expect("counted above"));
            let text = read(&path)?;
            let sets = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(|l| Ball::parse(ctx, l).map(ClopenSet::from_ball))
                .collect::<valued_ifs::Result<Vec<_>>>()?;
            Covering::new(setup.universe.clone(), sets)?
        };
        Ok(Some(covering))
    }
}

pub fn rest_set(u: &Option<RestConfig>) -> Result<RestSet, CliError> {
    match u {
        None => Ok(RestSet::Complement),
        Some(RestConfig::Marker(m)) if m == "rest" => Ok(RestSet::Complement),
        Some(RestConfig::Marker(m)) => Err(CliError::Config(format!(
            "U must be \"rest\" or a list of cylinders, found {m:?}"
        ))),
        Some(RestConfig::Cylinders(c)) => Ok(RestSet::Cylinders(c.clone())),
    }
}

pub fn cofinite_covering(complements: &[Vec<String>]) -> Result<CofiniteCovering, CliError> {
    let sets = complements
        .iter()
        .map(|f| f.iter().map(|q| parse_rational(q)).collect())
        .collect::<valued_ifs::Result<Vec<_>>>()?;
    Ok(CofiniteCovering::new(sets)?)
}

pub fn line_covering(u: &[[String; 2]], basics: &[[String; 2]]) -> Result<LineCovering, CliError> {
    let u = u
        .iter()
        .map(|[lo, hi]| Interval::open(Extended::parse(lo)?, Extended::parse(hi)?))
        .collect::<valued_ifs::Result<Vec<_>>>()?;
    let basics = basics
        .iter()
        .map(|[a, b]| Ok((parse_rational(a)?, parse_rational(b)?)))
        .collect::<valued_ifs::Result<Vec<_>>>()?;
    Ok(LineCovering::new(IntervalUnion::new(u), basics)?)
}
