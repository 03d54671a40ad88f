//! Run configuration: built-in defaults, then a TOML file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use arsent_core::classifier::TrainConfig;
use arsent_core::eval::SplitSpec;
use arsent_core::features::ShifterConfig;
use arsent_core::pipeline::ResourcePaths;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Directory holding resources under their conventional names.
    pub data_dir: Option<PathBuf>,
    #[serde(default)]
    pub resources: ResourceSection,
    #[serde(default)]
    pub split: SplitSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub shifters: ShifterSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSection {
    pub lexicon: Option<PathBuf>,
    pub idioms: Option<PathBuf>,
    pub negators: Option<PathBuf>,
    pub intensifiers: Option<PathBuf>,
    pub questions: Option<PathBuf>,
    pub wishful: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub tags: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub train: Option<f64>,
    pub dev: Option<f64>,
    pub test: Option<f64>,
    pub seed: Option<u64>,
    pub stratify: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub lambda: Option<f64>,
    pub epochs: Option<usize>,
    pub seed: Option<u64>,
    pub scaling: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShifterSection {
    pub negation_window: Option<usize>,
    pub intensifier_window: Option<usize>,
}

impl FileConfig {
    /// Relative paths inside the file are taken relative to its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let r = &mut cfg.resources;
        for p in [
            &mut cfg.data_dir,
            &mut r.lexicon,
            &mut r.idioms,
            &mut r.negators,
            &mut r.intensifiers,
            &mut r.questions,
            &mut r.wishful,
            &mut r.stopwords,
            &mut r.tags,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Command-line overrides. `None` leaves the lower layer untouched.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub data_dir: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub idioms: Option<PathBuf>,
    pub negators: Option<PathBuf>,
    pub intensifiers: Option<PathBuf>,
    pub questions: Option<PathBuf>,
    pub wishful: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub tags: Option<PathBuf>,
    pub split_seed: Option<u64>,
    pub no_stratify: bool,
    pub lambda: Option<f64>,
    pub epochs: Option<usize>,
    pub train_seed: Option<u64>,
    pub scaling: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub resources: ResourcePaths,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub shifters: ShifterConfig,
}

impl RunConfig {
    pub fn resolve(file: Option<FileConfig>, o: &Overrides) -> Self {
        let file = file.unwrap_or_default();
        let dir = o
            .data_dir
            .clone()
            .or(file.data_dir.clone())
            .unwrap_or_else(|| PathBuf::from("data"));
        let mut res = ResourcePaths::in_dir(&dir);
        let fr = file.resources;
        // a --data-dir flag outranks per-file paths from the config
        let from_file = |p: Option<PathBuf>| if o.data_dir.is_some() { None } else { p };
        let pick = |slot: &mut PathBuf, flag: &Option<PathBuf>, cfg: Option<PathBuf>| {
            if let Some(p) = flag.clone().or(from_file(cfg)) {
                *slot = p;
            }
        };
        pick(&mut res.lexicon, &o.lexicon, fr.lexicon);
        pick(&mut res.idioms, &o.idioms, fr.idioms);
        pick(&mut res.negators, &o.negators, fr.negators);
        pick(&mut res.intensifiers, &o.intensifiers, fr.intensifiers);
        pick(&mut res.questions, &o.questions, fr.questions);
        pick(&mut res.wishful, &o.wishful, fr.wishful);
        pick(&mut res.stopwords, &o.stopwords, fr.stopwords);
        pick(&mut res.tags, &o.tags, fr.tags);

        let d = SplitSpec::default();
        let s = file.split;
        let split = SplitSpec {
            train_frac: s.train.unwrap_or(d.train_frac),
            dev_frac: s.dev.unwrap_or(d.dev_frac),
            test_frac: s.test.unwrap_or(d.test_frac),
            seed: o.split_seed.or(s.seed).unwrap_or(d.seed),
            stratify: !o.no_stratify && s.stratify.unwrap_or(d.stratify),
        };

        let d = TrainConfig::default();
        let t = file.train;
        let train = TrainConfig {
            lambda: o.lambda.or(t.lambda).unwrap_or(d.lambda),
            epochs: o.epochs.or(t.epochs).unwrap_or(d.epochs),
            seed: o.train_seed.or(t.seed).unwrap_or(d.seed),
            scaling: o.scaling || t.scaling.unwrap_or(d.scaling),
        };

        let d = ShifterConfig::default();
        let shifters = ShifterConfig {
            negation_window: file.shifters.negation_window.unwrap_or(d.negation_window),
            intensifier_window: file
                .shifters
                .intensifier_window
                .unwrap_or(d.intensifier_window),
        };

        RunConfig {
            resources: res,
            split,
            train,
            shifters,
        }
    }

    /// Fails on the first resource file that does not exist, or on invalid
    /// split/training parameters.
    pub fn validate(&self) -> Result<()> {
        for p in self.resources.all() {
            if !p.is_file() {
                bail!("resource file not found: {}", p.display());
            }
        }
        self.split.validate()?;
        self.train.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flags_then_file_then_defaults() {
        let file: FileConfig = toml::from_str(
            "[resources]\nlexicon = \"lex.tsv\"\n[train]\nlambda = 0.5\nepochs = 7\n[split]\nseed = 9\n",
        )
        .unwrap();
        let o = Overrides {
            epochs: Some(3),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(file), &o);
        assert_eq!(cfg.resources.lexicon, PathBuf::from("lex.tsv"));
        assert_eq!(cfg.resources.idioms, PathBuf::from("data/idioms.tsv"));
        assert_eq!(
            (cfg.train.lambda, cfg.train.epochs, cfg.train.seed),
            (0.5, 3, 42)
        );
        assert_eq!(cfg.split.seed, 9);
        assert!(cfg.split.stratify);
    }

    #[test]
    fn data_dir_flag_outranks_file_paths() {
        let file: FileConfig = toml::from_str("[resources]\nlexicon = \"lex.tsv\"\n").unwrap();
        let o = Overrides {
            data_dir: Some("other".into()),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(file), &o);
        assert_eq!(cfg.resources.lexicon, PathBuf::from("other/lexicon.tsv"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[train]\nlamda = 1.0\n").is_err());
    }

    #[test]
    fn config_paths_are_relative_to_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "data_dir = \"d\"\n[resources]\ntags = \"t.tsv\"\n").unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.data_dir, Some(dir.path().join("d")));
        assert_eq!(cfg.resources.tags, Some(dir.path().join("t.tsv")));
    }
}
