//! Experiment configuration and validation.

use std::fmt;
use std::path::PathBuf;

use treeperc_core::generate::GenError;
use treeperc_core::percolation::{regime_p, RegimeError};
use treeperc_core::FamilySpec;

/// The named experiments, each verifying one family of statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Monte Carlo check of the exact moment identity at large n.
    Moments,
    /// Root-cluster proportion against its limiting constant.
    Giant,
    /// Ranked non-root cluster sizes against the Poisson limit law.
    AlmostGiant,
    /// Reduced tree lengths against their scaling limits.
    Hk,
    /// First frozen subtree size of root isolation against the eta law.
    Eta,
    /// Lowest removed-edge height on d-ary trees against its survival law.
    Kappa,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Moments => "moments",
            Experiment::Giant => "giant",
            Experiment::AlmostGiant => "almost_giant",
            Experiment::Hk => "hk",
            Experiment::Eta => "eta",
            Experiment::Kappa => "kappa",
        }
    }
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutFormat {
    #[default]
    Csv,
    Json,
}

/// Everything needed to reproduce one experiment run exactly.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub family: FamilySpec,
    /// Percolation constant of the regime `p = 1 - c / l(n)`; unused by
    /// `eta` and `hk`, which do not percolate.
    pub c: f64,
    /// Moment order (`moments`) or number of targets (`hk`).
    pub k: u32,
    /// How many ranked non-root clusters to record (`almost_giant`).
    pub j: u32,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker count; `None` consults `TREEPERC_THREADS`, then the number of
    /// available CPUs. Never affects report bytes.
    pub threads: Option<usize>,
    pub out_format: OutFormat,
    pub out_path: Option<PathBuf>,
}

/// Configuration rejections, each naming the violated constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Family(GenError),
    Regime(RegimeError),
    ZeroTrials,
    BadOrder { k: u32 },
    BadRank { j: u32 },
    FamilyNotSupported {
        experiment: &'static str,
        family: &'static str,
        allowed: &'static str,
    },
    EtaNeedsLargerTree { n: usize },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Family(e) => write!(f, "invalid family parameters: {e}"),
            ConfigError::Regime(e) => write!(f, "invalid percolation regime: {e}"),
            ConfigError::ZeroTrials => write!(f, "trials must be >= 1"),
            ConfigError::BadOrder { k } => write!(f, "k must be >= 1, got {k}"),
            ConfigError::BadRank { j } => write!(f, "j must be >= 1, got {j}"),
            ConfigError::FamilyNotSupported {
                experiment,
                family,
                allowed,
            } => write!(
                f,
                "experiment `{experiment}` does not support family `{family}` (allowed: {allowed})"
            ),
            ConfigError::EtaNeedsLargerTree { n } => {
                write!(f, "eta needs n >= 2 to form at least two buckets, got {n}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<GenError> for ConfigError {
    fn from(e: GenError) -> Self {
        ConfigError::Family(e)
    }
}

impl From<RegimeError> for ConfigError {
    fn from(e: RegimeError) -> Self {
        ConfigError::Regime(e)
    }
}

impl ExperimentConfig {
    /// Checks parameter ranges, experiment/family compatibility, and the
    /// percolation regime where one is used.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.family.validate()?;
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        let family = self.family.name();
        match self.experiment {
            Experiment::Moments | Experiment::Hk => {
                if self.k == 0 {
                    return Err(ConfigError::BadOrder { k: self.k });
                }
            }
            Experiment::AlmostGiant => {
                if self.j == 0 {
                    return Err(ConfigError::BadRank { j: self.j });
                }
                if !matches!(
                    self.family,
                    FamilySpec::Recursive { .. } | FamilySpec::ScaleFree { .. }
                ) {
                    return Err(ConfigError::FamilyNotSupported {
                        experiment: "almost_giant",
                        family,
                        allowed: "recursive, scalefree",
                    });
                }
            }
            Experiment::Giant => {
                if !matches!(
                    self.family,
                    FamilySpec::Recursive { .. } | FamilySpec::ScaleFree { .. }
                ) {
                    return Err(ConfigError::FamilyNotSupported {
                        experiment: "giant",
                        family,
                        allowed: "recursive, scalefree",
                    });
                }
            }
            Experiment::Eta => {
                if !matches!(self.family, FamilySpec::Recursive { .. }) {
                    return Err(ConfigError::FamilyNotSupported {
                        experiment: "eta",
                        family,
                        allowed: "recursive",
                    });
                }
                let n = self.family.edge_count()?;
                if n < 2 {
                    return Err(ConfigError::EtaNeedsLargerTree { n });
                }
            }
            Experiment::Kappa => {
                if !matches!(self.family, FamilySpec::Dary { .. }) {
                    return Err(ConfigError::FamilyNotSupported {
                        experiment: "kappa",
                        family,
                        allowed: "dary",
                    });
                }
            }
        }
        if self.uses_percolation() {
            let n = self.family.edge_count()?;
            regime_p(n, self.c, self.family.scale())?;
        }
        Ok(())
    }

    /// Whether the experiment percolates (and therefore needs a valid
    /// regime); `eta` and `hk` only inspect the tree itself.
    pub fn uses_percolation(&self) -> bool {
        matches!(
            self.experiment,
            Experiment::Moments | Experiment::Giant | Experiment::AlmostGiant | Experiment::Kappa
        )
    }
}
