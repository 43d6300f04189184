use std::fmt;

use chiptrans::calibration::CalError;
use chiptrans::linkbudget::LinkError;
use chiptrans::netcore::NetError;
use chiptrans::tline::TlineError;
use chiptrans::touchstone::TouchstoneError;
use chiptrans::transitions::TransitionError;

/// Command failure, split by who has to act: the user (bad input) or the
/// numerics (the data cannot be processed as asked).
#[derive(Debug)]
pub enum CliError {
    Input(anyhow::Error),
    Numerical(anyhow::Error),
}

impl CliError {
    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    /// Prefixes the message with where it happened.
    pub fn context(self, ctx: impl fmt::Display) -> Self {
        match self {
            CliError::Input(e) => CliError::Input(e.context(ctx.to_string())),
            CliError::Numerical(e) => CliError::Numerical(e.context(ctx.to_string())),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self {
            CliError::Input(e) | CliError::Numerical(e) => e,
        };
        write!(f, "{e:#}")
    }
}

impl std::error::Error for CliError {}

fn net_is_numerical(e: &NetError) -> bool {
    matches!(e, NetError::Degenerate { .. })
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        if net_is_numerical(&e) {
            CliError::Numerical(e.into())
        } else {
            CliError::Input(e.into())
        }
    }
}

impl From<TlineError> for CliError {
    fn from(e: TlineError) -> Self {
        match &e {
            TlineError::Net(n) if !net_is_numerical(n) => CliError::Input(e.into()),
            TlineError::InvalidParameter(_) => CliError::Input(e.into()),
            _ => CliError::Numerical(e.into()),
        }
    }
}

impl From<TransitionError> for CliError {
    fn from(e: TransitionError) -> Self {
        match e {
            TransitionError::Net(n) => n.into(),
            TransitionError::Line(l) => l.into(),
            other => CliError::Input(other.into()),
        }
    }
}

impl From<CalError> for CliError {
    fn from(e: CalError) -> Self {
        match e {
            CalError::Net(n) => n.into(),
            CalError::Line(l) => l.into(),
            e @ (CalError::IllConditioned { .. } | CalError::NoUsablePoint | CalError::NoPeriodicity(_)) => {
                CliError::Numerical(e.into())
            }
            other => CliError::Input(other.into()),
        }
    }
}

impl From<TouchstoneError> for CliError {
    fn from(e: TouchstoneError) -> Self {
        CliError::Input(e.into())
    }
}

impl From<LinkError> for CliError {
    fn from(e: LinkError) -> Self {
        CliError::Input(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.into())
    }
}
