use crate::proto::DensityPrototype;

/// User preference: how aggressively low-density bins are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Cover every bin with any activity (`D* = 0`).
    Comfort,
    /// Trade a little coverage for savings (`D* = max(0, mu - sigma/2)`).
    Balance,
    /// Keep only above-average bins (`D* = mu`).
    Eco,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Comfort, Mode::Balance, Mode::Eco];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Comfort => "comfort",
            Mode::Balance => "balance",
            Mode::Eco => "eco",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "comfort" | "Comfort" => Ok(Mode::Comfort),
            "balance" | "Balance" => Ok(Mode::Balance),
            "eco" | "Eco" => Ok(Mode::Eco),
            _ => Err(()),
        }
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Maps a mode to its density threshold for the given prototype.
///
/// `mu` and `sigma` are the mean and population standard deviation over
/// all bins, zeros included. The balance threshold is clamped at zero;
/// a negative density threshold is meaningless.
pub fn select_threshold(mode: Mode, proto: &DensityPrototype) -> f64 {
    match mode {
        Mode::Comfort => 0.0,
        Mode::Balance => {
            let t = proto.mean() - proto.std_dev() / 2.0;
            if t > 0.0 {
                t
            } else {
                0.0
            }
        }
        Mode::Eco => proto.mean(),
    }
}
