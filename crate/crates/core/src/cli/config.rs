//! Run configuration and check names.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::liegroups::ExampleId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckName {
    MomentIdentities,
    SectionOrthogonality,
    ProjectCovector,
    TotallyGeodesicTsigma,
    SymplecticSlice,
    PrincipalSplitting,
    WeylIntersection,
    SurjectivityCertificate,
    PoissonRestriction,
    ReducedAlgebra,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::MomentIdentities,
        CheckName::SectionOrthogonality,
        CheckName::ProjectCovector,
        CheckName::TotallyGeodesicTsigma,
        CheckName::SymplecticSlice,
        CheckName::PrincipalSplitting,
        CheckName::WeylIntersection,
        CheckName::SurjectivityCertificate,
        CheckName::PoissonRestriction,
        CheckName::ReducedAlgebra,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::MomentIdentities => "moment-identities",
            CheckName::SectionOrthogonality => "section-orthogonality",
            CheckName::ProjectCovector => "project-covector",
            CheckName::TotallyGeodesicTsigma => "totally-geodesic-tsigma",
            CheckName::SymplecticSlice => "symplectic-slice",
            CheckName::PrincipalSplitting => "principal-splitting",
            CheckName::WeylIntersection => "weyl-intersection",
            CheckName::SurjectivityCertificate => "surjectivity-certificate",
            CheckName::PoissonRestriction => "poisson-restriction",
            CheckName::ReducedAlgebra => "reduced-algebra",
        }
    }

    /// Residual bound for a pass. Zero means the residual must vanish exactly.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            CheckName::MomentIdentities => 1e-8,
            CheckName::SectionOrthogonality => 1e-8,
            CheckName::ProjectCovector => 1e-7,
            CheckName::TotallyGeodesicTsigma => 1e-5,
            CheckName::SymplecticSlice => 1e-8,
            CheckName::PrincipalSplitting => 1e-8,
            CheckName::WeylIntersection => 1e-6,
            CheckName::SurjectivityCertificate => 0.0,
            CheckName::PoissonRestriction => 1e-6,
            CheckName::ReducedAlgebra => 1e-6,
        }
    }

    /// Exact polynomial checks need a linear section.
    pub fn applies_to(&self, example: ExampleId) -> bool {
        !matches!(self, CheckName::SurjectivityCertificate) || example.is_flat()
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        CheckName::ALL.into_iter().find(|c| c.as_str() == key).ok_or_else(|| Error::Config(format!("unknown check `{s}`")))
    }
}

impl Serialize for CheckName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "md" => Ok(Format::Md),
            other => Err(Error::Config(format!("unknown format `{other}` (json|md)"))),
        }
    }
}

fn serialize_examples<S: Serializer>(ids: &[ExampleId], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ids.iter().map(ExampleId::name))
}

/// A fully resolved run: which checks on which examples, with what sampling.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "serialize_examples")]
    pub examples: Vec<ExampleId>,
    pub checks: Vec<CheckName>,
    pub samples: usize,
    pub seed: u64,
    /// Overrides of [`CheckName::default_tolerance`], keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Resolves names. `all` expands to every example, and to every check
    /// applicable to at least one requested example; an explicitly named
    /// check that applies to none of them is rejected.
    pub fn resolve(
        examples: &[String],
        checks: &[String],
        samples: usize,
        seed: u64,
        tolerance_overrides: &[String],
        out: Option<PathBuf>,
        format: &str,
    ) -> Result<Self> {
        let mut ids = Vec::new();
        for e in examples.iter().flat_map(|e| e.split(',')).map(str::trim).filter(|e| !e.is_empty()) {
            if e == "all" {
                ids.extend(ExampleId::ALL);
            } else {
                ids.push(e.parse::<ExampleId>()?);
            }
        }
        dedup(&mut ids);
        if ids.is_empty() {
            return Err(Error::Config("no example selected".into()));
        }
        let mut names = Vec::new();
        let mut explicit = Vec::new();
        for c in checks.iter().flat_map(|c| c.split(',')).map(str::trim).filter(|c| !c.is_empty()) {
            if c == "all" {
                names.extend(CheckName::ALL);
            } else {
                let name = c.parse::<CheckName>()?;
                names.push(name);
                explicit.push(name);
            }
        }
        dedup(&mut names);
        if names.is_empty() {
            return Err(Error::Config("no check selected".into()));
        }
        for c in &explicit {
            if !ids.iter().any(|id| c.applies_to(*id)) {
                return Err(Error::Config(format!("check `{c}` does not apply to the selected examples")));
            }
        }
        if samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        let mut tolerances = BTreeMap::new();
        for t in tolerance_overrides {
            let (k, v) = t.split_once('=').ok_or_else(|| Error::Config(format!("tolerance `{t}` is not KEY=VAL")))?;
            let check = k.trim().parse::<CheckName>()?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("tolerance value `{v}`")))?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerance {v} for {check} must be finite and non-negative")));
            }
            tolerances.insert(check.as_str().to_string(), v);
        }
        Ok(RunConfig { examples: ids, checks: names, samples, seed, tolerances, out, format: format.parse()? })
    }

    pub fn tolerance(&self, c: CheckName) -> f64 {
        self.tolerances.get(c.as_str()).copied().unwrap_or_else(|| c.default_tolerance())
    }

    /// `(example, check)` pairs in report order.
    pub fn jobs(&self) -> Vec<(ExampleId, CheckName)> {
        self.examples.iter().flat_map(|&e| self.checks.iter().filter(move |c| c.applies_to(e)).map(move |&c| (e, c))).collect()
    }
}

fn dedup<T: PartialEq + Copy>(v: &mut Vec<T>) {
    let mut seen = Vec::with_capacity(v.len());
    v.retain(|x| {
        if seen.contains(x) {
            false
        } else {
            seen.push(*x);
            true
        }
    });
}
