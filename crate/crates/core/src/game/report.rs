use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Failure probability of the reported Hoeffding interval.
pub const CI_DELTA: f64 = 0.01;

/// Per-arm half-width of the two-sided 99% Hoeffding interval for a
/// frequency over `trials` independent samples.
pub fn hoeffding_half_width(trials: u64) -> f64 {
    ((2.0 / CI_DELTA).ln() / (2.0 * trials as f64)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameMode {
    Exhaustive,
    MonteCarlo { trials: u64 },
}

impl GameMode {
    pub fn name(&self) -> &'static str {
        match self {
            GameMode::Exhaustive => "exhaustive",
            GameMode::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub mode: GameMode,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl GameConfig {
    pub fn exhaustive() -> Self {
        GameConfig {
            mode: GameMode::Exhaustive,
            master_seed: 0,
            workers: None,
        }
    }

    pub fn monte_carlo(trials: u64, master_seed: u64) -> Self {
        GameConfig {
            mode: GameMode::MonteCarlo { trials },
            master_seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

/// Exact frequency `num / den`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frequency(Ratio<u128>);

impl Frequency {
    pub fn new(num: u128, den: u128) -> Self {
        Frequency(Ratio::new(num, den))
    }

    pub fn ratio(&self) -> Ratio<u128> {
        self.0
    }

    pub fn numer(&self) -> u128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u128 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn abs_diff(&self, other: &Frequency) -> Frequency {
        if self.0 >= other.0 {
            Frequency(self.0 - other.0)
        } else {
            Frequency(other.0 - self.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }
}

impl From<Ratio<u128>> for Frequency {
    fn from(r: Ratio<u128>) -> Self {
        Frequency(r)
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Frequency", 3)?;
        s.serialize_field("num", &self.numer())?;
        s.serialize_field("den", &self.denom())?;
        s.serialize_field("decimal", &self.to_f64())?;
        s.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    /// Arm A evaluates `G(k)`.
    Generator,
    /// Arm A evaluates stego contents.
    Stego,
}

/// Acceptance frequencies of a distinguisher on both arms of a game.
///
/// In exhaustive mode `trials` and `trials_uniform` count the enumerated
/// evaluations of each arm (inputs times coin tapes); in Monte-Carlo mode
/// both equal the per-arm sample count.
#[derive(Clone, Debug, PartialEq)]
pub struct AdvantageReport {
    pub kind: GameKind,
    pub mode: GameMode,
    pub arm_a: Frequency,
    pub arm_b: Frequency,
    pub advantage: Frequency,
    pub trials: u64,
    pub trials_uniform: u64,
    /// Half-width of the 99% interval on `advantage`; 0 when exact.
    pub ci_99: f64,
    pub master_seed: Option<u64>,
}

/// Accepted evaluations out of a total.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Tally {
    pub hits: u64,
    pub total: u64,
}

impl Tally {
    fn frequency(&self) -> Frequency {
        Frequency::new(u128::from(self.hits), u128::from(self.total))
    }
}

impl AdvantageReport {
    pub(crate) fn exhaustive(kind: GameKind, a: Tally, b: Tally) -> Self {
        let (arm_a, arm_b) = (a.frequency(), b.frequency());
        AdvantageReport {
            kind,
            mode: GameMode::Exhaustive,
            arm_a,
            arm_b,
            advantage: arm_a.abs_diff(&arm_b),
            trials: a.total,
            trials_uniform: b.total,
            ci_99: 0.0,
            master_seed: None,
        }
    }

    pub(crate) fn sampled(kind: GameKind, a: Tally, b: Tally, trials: u64, seed: u64) -> Self {
        let (arm_a, arm_b) = (a.frequency(), b.frequency());
        AdvantageReport {
            kind,
            mode: GameMode::MonteCarlo { trials },
            arm_a,
            arm_b,
            advantage: arm_a.abs_diff(&arm_b),
            trials,
            trials_uniform: trials,
            ci_99: 2.0 * hoeffding_half_width(trials),
            master_seed: Some(seed),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl Serialize for AdvantageReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (game, arm_a_name) = match self.kind {
            GameKind::Generator => ("generator", "arm_g_freq"),
            GameKind::Stego => ("stego", "arm_stego_freq"),
        };
        let mut s = serializer.serialize_struct("AdvantageReport", 9)?;
        s.serialize_field("game", game)?;
        s.serialize_field("mode", self.mode.name())?;
        s.serialize_field(arm_a_name, &self.arm_a)?;
        s.serialize_field("arm_uniform_freq", &self.arm_b)?;
        s.serialize_field("advantage", &self.advantage)?;
        s.serialize_field("trials", &self.trials)?;
        s.serialize_field("trials_uniform", &self.trials_uniform)?;
        s.serialize_field("ci_99", &self.ci_99)?;
        s.serialize_field("master_seed", &self.master_seed)?;
        s.end()
    }
}
