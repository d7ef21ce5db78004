use super::{verify_isomorphism, verify_peircean, AtomBijection, IsoConfig, IsoReport, PeirceanReport};
use crate::coset::{build_coset_algebra, build_group_algebra, CosetAlgebra, Relation};
use crate::frame::{build_semi_scaffold, extract_semi_frame, find_scaffold, Extraction, FrameRecord};
use crate::measure::Measured;
use crate::ra::{verify_ra_axioms, AtomStructure, CheckConfig};
use std::fmt;
use thiserror::Error;

/// Pipeline stage at which a round trip or decision stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Axioms,
    Measurability,
    Scaffold,
    Extraction,
    Build,
    Bijection,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Axioms => "axioms",
            Stage::Measurability => "measurability",
            Stage::Scaffold => "scaffold",
            Stage::Extraction => "extraction",
            Stage::Build => "build",
            Stage::Bijection => "bijection",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{stage}: {message}")]
pub struct RoundtripError {
    pub stage: Stage,
    pub message: String,
}

fn at<E: fmt::Display>(stage: Stage) -> impl Fn(E) -> RoundtripError {
    move |e| RoundtripError { stage, message: e.to_string() }
}

#[derive(Clone, Debug, Default)]
pub struct ReprConfig {
    /// Order of the measurable atoms; the natural order when absent.
    pub order: Option<Vec<usize>>,
    pub axioms: CheckConfig,
    pub iso: IsoConfig,
}

#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub extraction: Extraction,
    pub algebra: CosetAlgebra,
    pub bijection: AtomBijection,
    pub peircean: PeirceanReport,
    pub iso: IsoReport,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.peircean.passed() && self.iso.passed()
    }
}

fn require_axioms(a: &AtomStructure, config: &ReprConfig) -> Result<(), RoundtripError> {
    let report = verify_ra_axioms(a, &config.axioms);
    let Some(v) = report.failures().next() else {
        return Ok(());
    };
    let witness = v.witness.as_ref().map(|w| w.render(a)).unwrap_or_default();
    Err(RoundtripError { stage: Stage::Axioms, message: format!("{} fails {witness}", v.law.name()) })
}

fn measured<'a>(a: &'a AtomStructure) -> Result<Option<Measured<'a>>, RoundtripError> {
    let m = Measured::new(a).map_err(at(Stage::Measurability))?;
    Ok(m.is_measurable().then_some(m))
}

fn check_bijection(bijection: AtomBijection, config: &ReprConfig) -> (AtomBijection, PeirceanReport, IsoReport) {
    let peircean = verify_peircean(&bijection, config.iso.threads);
    let iso = verify_isomorphism(&bijection, &config.iso);
    (bijection, peircean, iso)
}

/// Semi-scaffold, semi-frame, coset algebra, `θ`, then the Peircean and
/// isomorphism checks. A failed check is reported, not raised; errors mean a
/// stage could not run.
pub fn roundtrip(a: &AtomStructure, config: &ReprConfig) -> Result<RoundtripReport, RoundtripError> {
    require_axioms(a, config)?;
    let m = measured(a)?.ok_or_else(|| RoundtripError { stage: Stage::Measurability, message: "not measurable".into() })?;
    let scaffold = build_semi_scaffold(&m, config.order.as_deref()).map_err(at(Stage::Scaffold))?;
    let extraction = extract_semi_frame(&m, &scaffold).map_err(at(Stage::Extraction))?;
    let algebra = build_coset_algebra(&extraction.triple).map_err(at(Stage::Build))?;
    let bijection = AtomBijection::from_extraction(a, &extraction, &algebra).map_err(at(Stage::Bijection))?;
    let (bijection, peircean, iso) = check_bijection(bijection, config);
    Ok(RoundtripReport { extraction, algebra, bijection, peircean, iso })
}

#[derive(Clone, Debug)]
pub struct GroupWitness {
    pub extraction: Extraction,
    /// The group relation algebra; its relations are the set representation.
    pub algebra: CosetAlgebra,
    pub bijection: AtomBijection,
    pub peircean: PeirceanReport,
    pub iso: IsoReport,
    pub nodes: u64,
    pub space: String,
    /// First source atom pair whose witness relations do not compose to the
    /// image of the source product.
    pub invalid_pair: Option<(usize, usize)>,
}

impl GroupWitness {
    pub fn validated(&self) -> bool {
        self.invalid_pair.is_none() && self.peircean.passed() && self.iso.passed()
    }
}

#[derive(Clone, Debug)]
pub struct CosetOnlyWitness {
    /// Nodes visited by the exhausted scaffold search.
    pub nodes: u64,
    /// Size of the search space, in decimal.
    pub space: String,
    pub roundtrip: RoundtripReport,
}

#[derive(Clone, Debug)]
pub enum RepresentabilityVerdict {
    GroupRepresentable(Box<GroupWitness>),
    CosetOnly(Box<CosetOnlyWitness>),
    NotMeasurable,
}

impl RepresentabilityVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            RepresentabilityVerdict::GroupRepresentable(_) => "group_representable",
            RepresentabilityVerdict::CosetOnly(_) => "coset_only",
            RepresentabilityVerdict::NotMeasurable => "not_measurable",
        }
    }
}

/// Composes the witness relation of every atom pair and compares with the
/// image of the source product. Returns the first mismatch.
pub fn validate_witness(t: &AtomBijection, witness: &CosetAlgebra) -> Option<(usize, usize)> {
    let s = &t.source;
    let n = s.atom_count();
    let images: Vec<&Relation> = (0..n).map(|a| &witness.relations[t.apply(a)]).collect();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| {
        images[a].compose(images[b]) != witness.realize(t.psi(s.compose_atoms(a, b)))
    })
}

/// The scaffold criterion. A finite measurable algebra is representable iff
/// it has a scaffold, and then the group algebra of its frame is a set
/// representation. When the complete search finds none the coset algebra
/// from the round trip is the only witness.
pub fn decide_representable(a: &AtomStructure, config: &ReprConfig) -> Result<RepresentabilityVerdict, RoundtripError> {
    let Some(m) = measured(a)? else {
        return Ok(RepresentabilityVerdict::NotMeasurable);
    };
    let search = find_scaffold(&m, config.order.as_deref()).map_err(at(Stage::Scaffold))?;
    let Some(scaffold) = search.scaffold else {
        let roundtrip = roundtrip(a, config)?;
        return Ok(RepresentabilityVerdict::CosetOnly(Box::new(CosetOnlyWitness {
            nodes: search.nodes,
            space: search.space,
            roundtrip,
        })));
    };
    let extraction = extract_semi_frame(&m, &scaffold).map_err(at(Stage::Extraction))?;
    let record = FrameRecord::new(extraction.triple.clone());
    let algebra = build_group_algebra(&record).map_err(at(Stage::Build))?;
    let bijection = AtomBijection::from_extraction(a, &extraction, &algebra).map_err(at(Stage::Bijection))?;
    let (bijection, peircean, iso) = check_bijection(bijection, config);
    let invalid_pair = validate_witness(&bijection, &algebra);
    Ok(RepresentabilityVerdict::GroupRepresentable(Box::new(GroupWitness {
        extraction,
        algebra,
        bijection,
        peircean,
        iso,
        nodes: search.nodes,
        space: search.space,
        invalid_pair,
    })))
}
