//! The named q-series of the catalogue, as exact truncations and as
//! high-precision numerical values at a point of the unit disc.

mod exact;
mod numeric;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, QlabError, Result};
use crate::exactnum::{Cyclo, Rat};
use crate::series::Series;

pub use exact::*;
pub use numeric::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeriesTag {
    F,
    B,
    USmall,
    Psi,
    Phi,
    Rank,
    Crank,
    UBig,
    Appell1,
    Appell2,
    Qzeta,
    EisP,
    EisQ,
    EisR,
}

impl SeriesTag {
    pub const ALL: [SeriesTag; 14] = [
        SeriesTag::F,
        SeriesTag::B,
        SeriesTag::USmall,
        SeriesTag::Psi,
        SeriesTag::Phi,
        SeriesTag::Rank,
        SeriesTag::Crank,
        SeriesTag::UBig,
        SeriesTag::Appell1,
        SeriesTag::Appell2,
        SeriesTag::Qzeta,
        SeriesTag::EisP,
        SeriesTag::EisQ,
        SeriesTag::EisR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesTag::F => "F",
            SeriesTag::B => "B",
            SeriesTag::USmall => "U_SMALL",
            SeriesTag::Psi => "PSI",
            SeriesTag::Phi => "PHI",
            SeriesTag::Rank => "RANK",
            SeriesTag::Crank => "CRANK",
            SeriesTag::UBig => "U_BIG",
            SeriesTag::Appell1 => "APPELL1",
            SeriesTag::Appell2 => "APPELL2",
            SeriesTag::Qzeta => "QZETA",
            SeriesTag::EisP => "EIS_P",
            SeriesTag::EisQ => "EIS_Q",
            SeriesTag::EisR => "EIS_R",
        }
    }

    /// Tags that take the complex parameter `w`.
    pub fn takes_w(self) -> bool {
        matches!(
            self,
            SeriesTag::Rank | SeriesTag::Crank | SeriesTag::UBig | SeriesTag::Appell1 | SeriesTag::Appell2
        )
    }

    pub fn takes_s(self) -> bool {
        self == SeriesTag::Qzeta
    }
}

impl fmt::Display for SeriesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesTag {
    type Err = QlabError;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        SeriesTag::ALL
            .into_iter()
            .find(|t| t.name() == up)
            .ok_or_else(|| QlabError::InvalidParameter(format!("unknown series tag `{s}`")))
    }
}

/// A catalogue entry together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesId {
    tag: SeriesTag,
    w: Option<Cyclo>,
    s: Option<u32>,
}

impl SeriesId {
    /// Validates that exactly the parameters the tag needs are present.
    /// `w = 1` is a pole of the Appell–Lerch sums and is rejected there; the
    /// other parameterised series are polynomial in `w^{±1}` coefficientwise
    /// and accept it.
    pub fn new(tag: SeriesTag, w: Option<Cyclo>, s: Option<u32>) -> Result<Self> {
        match (tag.takes_w(), &w) {
            (true, None) => return invalid(format!("{tag} needs a parameter w")),
            (false, Some(_)) => return invalid(format!("{tag} takes no parameter w")),
            (true, Some(w)) => {
                if w.is_zero() {
                    return invalid("w must be nonzero");
                }
                if w.is_one() && matches!(tag, SeriesTag::Appell1 | SeriesTag::Appell2) {
                    return invalid(format!("{tag} has a pole at w = 1"));
                }
            }
            _ => {}
        }
        match (tag.takes_s(), s) {
            (true, None) => return invalid(format!("{tag} needs a weight s")),
            (true, Some(0)) => return invalid("weight s must be ≥ 1"),
            (false, Some(_)) => return invalid(format!("{tag} takes no weight s")),
            _ => {}
        }
        Ok(SeriesId { tag, w, s })
    }

    pub fn plain(tag: SeriesTag) -> Result<Self> {
        Self::new(tag, None, None)
    }

    pub fn with_w(tag: SeriesTag, w: Cyclo) -> Result<Self> {
        Self::new(tag, Some(w), None)
    }

    pub fn qzeta(s: u32) -> Result<Self> {
        Self::new(SeriesTag::Qzeta, None, Some(s))
    }

    pub fn tag(&self) -> SeriesTag {
        self.tag
    }

    pub fn w(&self) -> Option<&Cyclo> {
        self.w.as_ref()
    }

    pub fn s(&self) -> Option<u32> {
        self.s
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if let Some(w) = &self.w {
            write!(f, "(w={w})")?;
        }
        if let Some(s) = self.s {
            write!(f, "(s={s})")?;
        }
        Ok(())
    }
}

/// An exact truncation: rational for the parameter-free series, cyclotomic
/// when a parameter `w` is present.
#[derive(Debug, Clone, PartialEq)]
pub enum Expansion {
    Rational(Series<Rat>),
    Cyclotomic(Series<Cyclo>),
}

impl Expansion {
    pub fn order(&self) -> usize {
        match self {
            Expansion::Rational(s) => s.order(),
            Expansion::Cyclotomic(s) => s.order(),
        }
    }

    /// Coefficients as cyclotomic numbers of order `m` (`m` must be a
    /// multiple of the series' own order).
    pub fn to_cyclo(&self, m: u64) -> Result<Series<Cyclo>> {
        match self {
            Expansion::Rational(s) => Ok(s.to_cyclo(m)),
            Expansion::Cyclotomic(s) => s.lift(m),
        }
    }

    pub fn as_rational(&self) -> Option<Series<Rat>> {
        match self {
            Expansion::Rational(s) => Some(s.clone()),
            Expansion::Cyclotomic(s) => s.to_rational(),
        }
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        match self {
            Expansion::Rational(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
            Expansion::Cyclotomic(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// Exact truncation of a catalogue series at order `n`.
pub fn expand(id: &SeriesId, n: usize) -> Result<Expansion> {
    use SeriesTag::*;
    let w = || id.w.clone().expect("validated by SeriesId::new");
    Ok(match id.tag {
        F => Expansion::Rational(mock_f(n)),
        B => Expansion::Rational(b_series(n)),
        USmall => Expansion::Rational(u_small(n)),
        Psi => Expansion::Rational(psi(n)),
        Phi => Expansion::Rational(phi(n)),
        Rank => Expansion::Cyclotomic(rank(&w(), n)?),
        Crank => Expansion::Cyclotomic(crank(&w(), n)?),
        UBig => Expansion::Cyclotomic(u_big(&w(), n)?),
        Appell1 => Expansion::Cyclotomic(appell_lerch(AppellKind::First, &w(), n)?),
        Appell2 => Expansion::Cyclotomic(appell_lerch(AppellKind::Second, &w(), n)?),
        Qzeta => Expansion::Rational(qzeta(id.s.expect("validated"), n)),
        EisP => Expansion::Rational(eisenstein(Eisenstein::P, n)),
        EisQ => Expansion::Rational(eisenstein(Eisenstein::Q, n)),
        EisR => Expansion::Rational(eisenstein(Eisenstein::R, n)),
    })
}
