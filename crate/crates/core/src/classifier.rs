//! Linear max-margin classifier and the SVM-light sparse file format.
//!
//! Training minimizes `λ/2·‖w‖² + mean(max(0, 1 - y(w·x + b)))` with
//! seeded stochastic subgradient descent. The bias is not regularized.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::features::{FeatureVector, NUM_SLOTS, SCHEMA_VERSION};
use crate::lexicon::Polarity;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set contains only one class")]
    SingleClassTrainingSet,
    #[error("schema version mismatch: expected {expected}, got {got}")]
    SchemaMismatch { expected: u32, got: u32 },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

type Result<T> = std::result::Result<T, ClassifierError>;

/// Binary class label, rendered `+1` / `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Pos,
    Neg,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    /// NU has no binary label.
    pub fn from_polarity(p: Polarity) -> Option<Self> {
        match p {
            Polarity::Po => Some(Label::Pos),
            Polarity::Ng => Some(Label::Neg),
            Polarity::Nu => None,
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            Label::Pos => Polarity::Po,
            Label::Neg => Polarity::Ng,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+1" | "1" => Ok(Label::Pos),
            "-1" => Ok(Label::Neg),
            other => Err(format!("invalid label {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVector {
    pub label: Label,
    pub vector: FeatureVector,
    pub comment: Option<String>,
}

impl LabeledVector {
    pub fn new(label: Label, vector: FeatureVector) -> Self {
        LabeledVector {
            label,
            vector,
            comment: None,
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// L2 regularization strength.
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Divide each slot by its largest absolute training value.
    pub scaling: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 1e-2,
            epochs: 200,
            seed: 42,
            scaling: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(ClassifierError::InvalidConfig(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.epochs == 0 {
            return Err(ClassifierError::InvalidConfig(
                "epochs must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub schema_version: u32,
    pub config: TrainConfig,
    /// Per-slot divisors applied before the dot product, when scaling is on.
    pub scale: Option<Vec<f64>>,
}

impl Model {
    pub fn zero(config: TrainConfig) -> Self {
        Model {
            weights: vec![0.0; NUM_SLOTS],
            bias: 0.0,
            schema_version: SCHEMA_VERSION,
            config,
            scale: None,
        }
    }

    fn check_schema(&self, v: &FeatureVector) -> Result<()> {
        if v.schema_version != self.schema_version {
            return Err(ClassifierError::SchemaMismatch {
                expected: self.schema_version,
                got: v.schema_version,
            });
        }
        Ok(())
    }

    fn margin_unchecked(&self, v: &FeatureVector) -> f64 {
        let dot: f64 = v
            .iter()
            .map(|(slot, x)| {
                let i = slot as usize - 1;
                let x = match &self.scale {
                    Some(s) => x / s[i],
                    None => x,
                };
                self.weights[i] * x
            })
            .sum();
        dot + self.bias
    }

    /// Returns the predicted label and margin `w·x + b`. A zero margin is `+1`.
    pub fn predict(&self, v: &FeatureVector) -> Result<(Label, f64)> {
        self.check_schema(v)?;
        let m = self.margin_unchecked(v);
        Ok((if m >= 0.0 { Label::Pos } else { Label::Neg }, m))
    }

    /// Regularized hinge objective over `data`.
    pub fn objective(&self, data: &[LabeledVector]) -> f64 {
        let reg = 0.5 * self.config.lambda * self.weights.iter().map(|w| w * w).sum::<f64>();
        if data.is_empty() {
            return reg;
        }
        let loss: f64 = data
            .iter()
            .map(|d| (1.0 - d.label.sign() * self.margin_unchecked(&d.vector)).max(0.0))
            .sum();
        reg + loss / data.len() as f64
    }

    pub fn accuracy(&self, data: &[LabeledVector]) -> Result<f64> {
        if data.is_empty() {
            return Ok(0.0);
        }
        let mut correct = 0;
        for d in data {
            if self.predict(&d.vector)?.0 == d.label {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.len() as f64)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "# linear sentiment model");
        let _ = writeln!(out, "schema_version={}", self.schema_version);
        let _ = writeln!(out, "lambda={}", c.lambda);
        let _ = writeln!(out, "epochs={}", c.epochs);
        let _ = writeln!(out, "seed={}", c.seed);
        let _ = writeln!(out, "scaling={}", c.scaling);
        if let Some(scale) = &self.scale {
            let parts: Vec<String> = scale
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{}:{}", i + 1, s))
                .collect();
            let _ = writeln!(out, "scale={}", parts.join(" "));
        }
        for (i, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "{}:{}", i + 1, w);
        }
        let _ = writeln!(out, "bias:{}", self.bias);
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|source| ClassifierError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ClassifierError::Io {
            path: name.clone(),
            source,
        })?;
        Self::parse(&text, &name)
    }

    pub fn parse(text: &str, name: &str) -> Result<Self> {
        let err = |line: usize, reason: String| ClassifierError::Parse {
            path: name.to_owned(),
            line,
            reason,
        };
        fn num<T: FromStr>(s: &str) -> std::result::Result<T, String> {
            s.trim()
                .parse()
                .map_err(|_| format!("invalid number {:?}", s.trim()))
        }

        let mut model = Model::zero(TrainConfig::default());
        let mut seen_weights = [false; NUM_SLOTS];
        let mut seen_bias = false;
        for (idx, line) in text.lines().enumerate() {
            let n = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let c = &mut model.config;
                let r = match key.trim() {
                    "schema_version" => num(value).map(|v| model.schema_version = v),
                    "lambda" => num(value).map(|v| c.lambda = v),
                    "epochs" => num(value).map(|v| c.epochs = v),
                    "seed" => num(value).map(|v| c.seed = v),
                    "scaling" => num(value).map(|v| c.scaling = v),
                    "scale" => parse_scale(value).map(|s| model.scale = Some(s)),
                    other => Err(format!("unknown key {other:?}")),
                };
                r.map_err(|reason| err(n, reason))?;
            } else if let Some((key, value)) = line.split_once(':') {
                let value: f64 = num(value).map_err(|reason| err(n, reason))?;
                if key == "bias" {
                    model.bias = value;
                    seen_bias = true;
                } else {
                    let slot: usize = num(key).map_err(|reason| err(n, reason))?;
                    if !(1..=NUM_SLOTS).contains(&slot) {
                        return Err(err(n, format!("slot {slot} outside 1..={NUM_SLOTS}")));
                    }
                    model.weights[slot - 1] = value;
                    seen_weights[slot - 1] = true;
                }
            } else {
                return Err(err(n, format!("unrecognized line {line:?}")));
            }
        }
        if let Some(missing) = seen_weights.iter().position(|s| !s) {
            return Err(err(0, format!("missing weight for slot {}", missing + 1)));
        }
        if !seen_bias {
            return Err(err(0, "missing bias".into()));
        }
        if model.config.scaling != model.scale.is_some() {
            return Err(err(0, "scaling flag disagrees with scale line".into()));
        }
        Ok(model)
    }
}

fn parse_scale(value: &str) -> std::result::Result<Vec<f64>, String> {
    let mut scale = vec![1.0; NUM_SLOTS];
    for pair in value.split_whitespace() {
        let (slot, x) = pair
            .split_once(':')
            .ok_or_else(|| format!("invalid scale pair {pair:?}"))?;
        let slot: usize = slot.parse().map_err(|_| format!("invalid slot {slot:?}"))?;
        let x: f64 = x.parse().map_err(|_| format!("invalid scale {x:?}"))?;
        if !(1..=NUM_SLOTS).contains(&slot) || x.is_nan() || x <= 0.0 {
            return Err(format!("invalid scale pair {pair:?}"));
        }
        scale[slot - 1] = x;
    }
    Ok(scale)
}

fn fit_scale(data: &[LabeledVector]) -> Vec<f64> {
    let mut scale = vec![0.0f64; NUM_SLOTS];
    for d in data {
        for (slot, x) in d.vector.iter() {
            let s = &mut scale[slot as usize - 1];
            *s = s.max(x.abs());
        }
    }
    scale
        .into_iter()
        .map(|s| if s > 0.0 { s } else { 1.0 })
        .collect()
}

/// Trains a linear model.
///
/// The step size at update `t` is `1 / (λ(t + t0))` with `t0 = 1/λ`, so the
/// first step is close to 1. Examples are visited in a fresh seeded
/// permutation each epoch, which makes training bit-for-bit reproducible.
pub fn train(data: &[LabeledVector], config: &TrainConfig) -> Result<Model> {
    config.validate()?;
    let first = data.first().ok_or(ClassifierError::EmptyTrainingSet)?;
    let schema = first.vector.schema_version;
    if let Some(bad) = data.iter().find(|d| d.vector.schema_version != schema) {
        return Err(ClassifierError::SchemaMismatch {
            expected: schema,
            got: bad.vector.schema_version,
        });
    }
    if schema != SCHEMA_VERSION {
        return Err(ClassifierError::SchemaMismatch {
            expected: SCHEMA_VERSION,
            got: schema,
        });
    }
    if data.iter().all(|d| d.label == first.label) {
        return Err(ClassifierError::SingleClassTrainingSet);
    }

    let scale = config.scaling.then(|| fit_scale(data));
    let dense: Vec<[f64; NUM_SLOTS]> = data
        .iter()
        .map(|d| {
            let mut x = d.vector.to_dense();
            if let Some(s) = &scale {
                for (xi, si) in x.iter_mut().zip(s) {
                    *xi /= si;
                }
            }
            x
        })
        .collect();

    let lambda = config.lambda;
    let t0 = 1.0 / lambda;
    let mut w = [0.0f64; NUM_SLOTS];
    let mut b = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut t = 0u64;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * (t as f64 + t0));
            let x = &dense[i];
            let y = data[i].label.sign();
            let margin = y * (w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + b);
            let shrink = 1.0 - eta * lambda;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            if margin < 1.0 {
                for (wj, xj) in w.iter_mut().zip(x) {
                    *wj += eta * y * xj;
                }
                b += eta * y;
            }
        }
    }

    Ok(Model {
        weights: w.to_vec(),
        bias: b,
        schema_version: schema,
        config: *config,
        scale,
    })
}

/// Picks the (λ, epochs) pair with the best dev accuracy. Ties keep the
/// earlier candidate.
pub fn grid_search(
    train_set: &[LabeledVector],
    dev_set: &[LabeledVector],
    lambdas: &[f64],
    epochs: &[usize],
    base: &TrainConfig,
) -> Result<(TrainConfig, f64)> {
    let mut best: Option<(TrainConfig, f64)> = None;
    for &lambda in lambdas {
        for &e in epochs {
            let config = TrainConfig {
                lambda,
                epochs: e,
                ..*base
            };
            let acc = train(train_set, &config)?.accuracy(dev_set)?;
            if best.is_none_or(|(_, a)| acc > a) {
                best = Some((config, acc));
            }
        }
    }
    best.ok_or_else(|| ClassifierError::InvalidConfig("empty search grid".into()))
}

/// Renders a value with at most 6 significant digits. Integral values are
/// written without a decimal point.
pub fn format_value(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    if rounded.fract() == 0.0 && rounded.abs() < 1e15 {
        format!("{}", rounded as i64)
    } else {
        format!("{rounded}")
    }
}

/// The vector as it reads back from an SVM-light file.
pub fn quantize(v: &FeatureVector) -> FeatureVector {
    let mut out = FeatureVector::with_version(v.schema_version);
    for (slot, x) in v.iter() {
        out.set(slot, format_value(x).parse().unwrap_or(x));
    }
    out
}

/// One SVM-light line, without the trailing newline.
pub fn format_svmlight_line(d: &LabeledVector) -> String {
    let mut line = d.label.to_string();
    for (slot, x) in d.vector.iter() {
        let _ = write!(line, " {}:{}", slot, format_value(x));
    }
    if let Some(c) = &d.comment {
        let _ = write!(line, " # {}", c.replace(['\n', '\r'], " "));
    }
    line
}

/// Writes vectors in SVM-light format. A non-empty file starts with a
/// `# schema_version=N` comment; an empty list produces an empty file.
pub fn write_svmlight(data: &[LabeledVector], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    if let Some(first) = data.first() {
        let _ = writeln!(out, "# schema_version={}", first.vector.schema_version);
    }
    for d in data {
        out.push_str(&format_svmlight_line(d));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| ClassifierError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_svmlight(path: impl AsRef<Path>) -> Result<Vec<LabeledVector>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = fs::File::open(path).map_err(|source| ClassifierError::Io {
        path: name.clone(),
        source,
    })?;
    parse_svmlight(BufReader::new(file), &name)
}

pub fn parse_svmlight(reader: impl BufRead, name: &str) -> Result<Vec<LabeledVector>> {
    let err = |line: usize, reason: String| ClassifierError::Parse {
        path: name.to_owned(),
        line,
        reason,
    };
    let mut schema = SCHEMA_VERSION;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let n = idx + 1;
        let line = line.map_err(|source| ClassifierError::Io {
            path: name.to_owned(),
            source,
        })?;
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, Some(c.trim())),
            None => (line.as_str(), None),
        };
        let mut fields = body.split_whitespace();
        let Some(label) = fields.next() else {
            if let Some(v) = comment.and_then(|c| c.strip_prefix("schema_version=")) {
                schema = v
                    .trim()
                    .parse()
                    .map_err(|_| err(n, format!("invalid schema version {v:?}")))?;
            }
            continue;
        };
        let label: Label = label.parse().map_err(|reason| err(n, reason))?;
        let mut vector = FeatureVector::with_version(schema);
        let mut last = 0u32;
        for pair in fields {
            let (slot, value) = pair
                .split_once(':')
                .ok_or_else(|| err(n, format!("expected index:value, got {pair:?}")))?;
            let slot: u32 = slot
                .parse()
                .map_err(|_| err(n, format!("invalid index {slot:?}")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| err(n, format!("invalid value {value:?}")))?;
            if slot <= last {
                return Err(err(n, format!("index {slot} does not increase")));
            }
            if slot as usize > NUM_SLOTS {
                return Err(err(n, format!("index {slot} outside 1..={NUM_SLOTS}")));
            }
            last = slot;
            vector.set(slot, value);
        }
        out.push(LabeledVector {
            label,
            vector,
            comment: comment.filter(|c| !c.is_empty()).map(str::to_owned),
        });
    }
    Ok(out)
}
