//! Subcommand dispatch: each command builds the requested objects, runs the
//! requested verifications, and returns one JSON document plus a pass flag.
//!
//! Exit codes: 0 when every requested check passes, 1 when a verification
//! or divergence witness was produced, 2 for parse/semantic errors, 3 when
//! a capacity guard refused the computation.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zariski_core::corpus::{chain_preset, constant_preset, locally_constant_preset};
use zariski_core::export::{
    presheaf_dto, presheaf_from_dto, ring_dto, space_dto, spec_dot, topology_from_dto,
    PresheafDto, TopologyDto,
};
use zariski_core::ideal::{classify_ideal, enumerate_ideals};
use zariski_core::localize::{localize_at_element, localize_at_prime, LocalizedRing};
use zariski_core::morphism::{induced_morphism, morphism_report, morphism_summary};
use zariski_core::presheaf::Presheaf;
use zariski_core::report::DivergenceReport;
use zariski_core::scheme::{
    affine_scheme, verify_basic_sections, verify_basis_limit, verify_stalk,
    verify_structure_sheaf, AffineScheme,
};
use zariski_core::sheaf_axioms::check_sheaf_axioms;
use zariski_core::sheafify::{
    compare_presheaves, sheafify_proper_limit, sheafify_standard, EmptySetConvention,
};
use zariski_core::spec_space::{basic_open, spec, SpecSpace};
use zariski_core::stalk::stalk;
use zariski_core::topology::{chain, discrete, sierpinski, FiniteTopology};
use zariski_core::{Error, FiniteRing, Limits};

use crate::lower::{lower_hom, lower_ring};
use crate::parse::{parse_hom, parse_ring, ParseError};

#[derive(Parser)]
#[command(
    name = "zariski",
    version,
    about = "Spectra, localizations, structure sheaves, and sheafification for finite commutative rings"
)]
pub struct Cli {
    /// Largest ring order any operation may materialize.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_order: usize,
    /// Largest number of ideals the lattice search will enumerate.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_ideals: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Prime spectrum: points (primes) and the open-set lattice.
    Spec {
        /// Ring expression, e.g. "Z/12", "Z/2[x]/(x^2+x)", "Z/4 x Z/3".
        ring: String,
    },
    /// Every ideal, classified as proper / prime / maximal.
    Ideals { ring: String },
    /// Localization at a prime (by point index) or at an element's powers.
    Localize {
        ring: String,
        /// Point index into the spectrum.
        #[arg(long, conflicts_with = "at_element")]
        at_prime: Option<usize>,
        /// Element index; inverts its powers.
        #[arg(long)]
        at_element: Option<usize>,
    },
    /// Sections of the structure sheaf over one open set.
    Sections {
        ring: String,
        /// Either comma-separated point indices ("0,1") or "f=<element>"
        /// for the basic open D(f).
        #[arg(long)]
        open: String,
    },
    /// The stalk at a point, compared against the localization at its prime.
    Stalk {
        ring: String,
        #[arg(long)]
        point: usize,
    },
    /// Structure-sheaf verification reports.
    Verify {
        ring: String,
        #[arg(long, value_enum, default_value_t = CheckKind::All)]
        check: CheckKind,
    },
    /// Scheme morphism induced by a ring homomorphism.
    Morphism {
        /// Homomorphism expression, e.g. "Z/12 -> Z/4" or
        /// "Z/2[x]/(x^2+x) -> Z/2 : x -> 0".
        hom: String,
    },
    /// Run a sheafification operator (or compare the two) on a presheaf.
    Sheafify {
        /// Builtin space (sierpinski, discrete2, discrete3, chain3) or a
        /// JSON file {"points": n, "opens": [[..], ..]}.
        #[arg(long)]
        space: String,
        /// Builtin preset (const-Z<n>, locally-const-Z<n>,
        /// const-chain-Z4-Z2) or a JSON presheaf file.
        #[arg(long)]
        presheaf: String,
        #[arg(long, value_enum)]
        operator: Operator,
    },
    /// Machine-readable exports of a ring's spectrum and structure sheaf.
    Export {
        ring: String,
        /// Write the spectrum's DOT rendering to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Emit the JSON object bundle on standard output (default when
        /// --dot is absent).
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Lemma31,
    Prop32,
    Corollary,
    All,
}

impl CheckKind {
    fn label(self) -> &'static str {
        match self {
            CheckKind::Lemma31 => "lemma31",
            CheckKind::Prop32 => "prop32",
            CheckKind::Corollary => "corollary",
            CheckKind::All => "all",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Paper,
    Standard,
    Both,
}

/// One executed command: the emitted document and whether every requested
/// check passed.
pub struct Outcome {
    pub document: Value,
    pub pass: bool,
}

impl Outcome {
    fn pass(document: Value) -> Outcome {
        Outcome {
            document,
            pass: true,
        }
    }
}

/// Anything a command can fail with: a parse error (exit 2) or an engine
/// error (exit 1, 2, or 3 by kind).
#[derive(Debug)]
pub enum CommandError {
    Parse(ParseError),
    Engine(Error),
}

impl From<ParseError> for CommandError {
    fn from(e: ParseError) -> Self {
        CommandError::Parse(e)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Engine(e)
    }
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Parse(_) => 2,
            CommandError::Engine(Error::Invalid(_)) | CommandError::Engine(Error::Axiom(_)) => 2,
            CommandError::Engine(Error::Verification(_)) => 1,
            CommandError::Engine(Error::Capacity(_)) => 3,
        }
    }

    pub fn document(&self) -> Value {
        match self {
            CommandError::Parse(e) => json!({
                "error": {
                    "kind": "parse",
                    "offset": e.offset,
                    "found": if e.found.is_empty() { Value::Null } else { Value::String(e.found.clone()) },
                    "expected": e.expected,
                    "message": e.to_string(),
                }
            }),
            CommandError::Engine(e) => {
                let kind = match e {
                    Error::Invalid(_) => "invalid",
                    Error::Axiom(_) => "axiom",
                    Error::Verification(_) => "verification",
                    Error::Capacity(_) => "capacity",
                };
                json!({ "error": { "kind": kind, "message": e.to_string() } })
            }
        }
    }
}

type CommandResult = Result<Outcome, CommandError>;

pub fn execute(command: &Command, limits: &Limits) -> CommandResult {
    match command {
        Command::Spec { ring } => run_spec(ring, limits),
        Command::Ideals { ring } => run_ideals(ring, limits),
        Command::Localize {
            ring,
            at_prime,
            at_element,
        } => run_localize(ring, *at_prime, *at_element, limits),
        Command::Sections { ring, open } => run_sections(ring, open, limits),
        Command::Stalk { ring, point } => run_stalk(ring, *point, limits),
        Command::Verify { ring, check } => run_verify(ring, *check, limits),
        Command::Morphism { hom } => run_morphism(hom, limits),
        Command::Sheafify {
            space,
            presheaf,
            operator,
        } => run_sheafify(space, presheaf, *operator, limits),
        Command::Export { ring, dot, json } => run_export(ring, dot.as_deref(), *json, limits),
    }
}

fn ring_from_text(text: &str, limits: &Limits) -> Result<Arc<FiniteRing>, CommandError> {
    let expr = parse_ring(text)?;
    Ok(lower_ring(&expr, limits)?)
}

fn run_spec(ring_text: &str, limits: &Limits) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let space = spec(&ring, limits)?;
    Ok(Outcome::pass(json!({
        "command": "spec",
        "ring": ring.presentation(),
        "order": ring.order(),
        "space": space_dto(&space),
    })))
}

fn run_ideals(ring_text: &str, limits: &Limits) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let all = enumerate_ideals(&ring, limits)?;
    let mut items = Vec::new();
    for ideal in &all {
        let class = classify_ideal(&ring, ideal, limits)?;
        items.push(json!({
            "members": ideal.members().iter().copied().collect::<Vec<_>>(),
            "is_proper": class.is_proper,
            "is_prime": class.is_prime,
            "is_maximal": class.is_maximal,
        }));
    }
    Ok(Outcome::pass(json!({
        "command": "ideals",
        "ring": ring.presentation(),
        "count": all.len(),
        "ideals": items,
    })))
}

fn localized_doc(local: &LocalizedRing) -> Value {
    let order = local.ring().order();
    let classes: Vec<Vec<(usize, usize)>> = (0..order)
        .map(|c| local.pairs_of_class(c).to_vec())
        .collect();
    json!({
        "denominators": local.denominators().iter().copied().collect::<Vec<_>>(),
        "ring": ring_dto(local.ring()),
        "map_table": local.map().image_table(),
        "classes": classes,
    })
}

fn run_localize(
    ring_text: &str,
    at_prime: Option<usize>,
    at_element: Option<usize>,
    limits: &Limits,
) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let (site, local) = match (at_prime, at_element) {
        (Some(point), None) => {
            let space = spec(&ring, limits)?;
            if point >= space.point_count() {
                return Err(Error::Invalid(format!(
                    "point {point} out of range; the spectrum has {} points",
                    space.point_count()
                ))
                .into());
            }
            let prime = space.point(point);
            let members: Vec<usize> = prime.members().iter().copied().collect();
            (
                json!({ "prime": { "index": point, "members": members } }),
                localize_at_prime(&ring, prime, limits)?,
            )
        }
        (None, Some(element)) => (
            json!({ "element": element }),
            localize_at_element(&ring, element, limits)?,
        ),
        _ => {
            return Err(Error::Invalid(
                "exactly one of --at-prime and --at-element is required".into(),
            )
            .into())
        }
    };
    Ok(Outcome::pass(json!({
        "command": "localize",
        "ring": ring.presentation(),
        "at": site,
        "localization": localized_doc(&local),
    })))
}

/// Resolves an `--open` argument: comma-separated point indices, or
/// "f=<element>" for a basic open.
fn resolve_open(space: &SpecSpace, text: &str) -> Result<usize, Error> {
    if let Some(element_text) = text.strip_prefix("f=") {
        let f: usize = element_text
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("'{element_text}' is not an element index")))?;
        return Ok(basic_open(space, f)?.index());
    }
    let mut members: Vec<usize> = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let point: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("'{part}' is not a point index")))?;
        members.push(point);
    }
    members.sort_unstable();
    members.dedup();
    let topology = space.topology();
    topology
        .opens()
        .iter()
        .position(|open| *open == members)
        .ok_or_else(|| Error::Invalid(format!("{members:?} is not an open set of this spectrum")))
}

fn run_sections(ring_text: &str, open_text: &str, limits: &Limits) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let scheme = affine_scheme(&ring, limits)?;
    let open = resolve_open(scheme.space(), open_text)?;
    let data = scheme.section_data(open);
    let members = scheme.space().topology().open(open).to_vec();
    Ok(Outcome::pass(json!({
        "command": "sections",
        "ring": ring.presentation(),
        "open": { "index": open, "members": members },
        "section": ring_dto(scheme.structure().section(open)),
        "local_points": data.points,
        "families": data.families,
        "ring_image_table": scheme.rho(open).image_table(),
    })))
}

fn run_stalk(ring_text: &str, point: usize, limits: &Limits) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let scheme = affine_scheme(&ring, limits)?;
    if point >= scheme.space().point_count() {
        return Err(Error::Invalid(format!(
            "point {point} out of range; the spectrum has {} points",
            scheme.space().point_count()
        ))
        .into());
    }
    let stalk_data = stalk(scheme.structure(), point, limits)?;
    let report = verify_stalk(&scheme, point, limits)?;
    let prime: Vec<usize> = scheme.space().point(point).members().iter().copied().collect();
    let minimal_open = scheme
        .space()
        .topology()
        .open(stalk_data.minimal_open)
        .to_vec();
    let pass = report.passed();
    Ok(Outcome {
        document: json!({
            "command": "stalk",
            "ring": ring.presentation(),
            "point": point,
            "prime": prime,
            "minimal_open": minimal_open,
            "stalk": ring_dto(&stalk_data.ring),
            "local_ring": ring_dto(scheme.local_at_prime(point).ring()),
            "report": report,
        }),
        pass,
    })
}

fn scheme_for(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<AffineScheme, Error> {
    affine_scheme(ring, limits)
}

fn run_verify(ring_text: &str, check: CheckKind, limits: &Limits) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let mut reports = Vec::new();

    if matches!(check, CheckKind::Lemma31 | CheckKind::All) {
        reports.push(verify_structure_sheaf(&ring, limits)?);
    }
    if matches!(check, CheckKind::Prop32 | CheckKind::All) {
        let scheme = scheme_for(&ring, limits)?;
        for f in ring.elements() {
            reports.push(verify_basic_sections(&scheme, f, limits)?);
        }
        for point in 0..scheme.space().point_count() {
            reports.push(verify_stalk(&scheme, point, limits)?);
        }
    }
    if matches!(check, CheckKind::Corollary | CheckKind::All) {
        let scheme = scheme_for(&ring, limits)?;
        for open in 0..scheme.space().topology().open_count() {
            reports.push(verify_basis_limit(&scheme, open, limits)?);
        }
    }

    let pass = reports.iter().all(|r| r.passed());
    Ok(Outcome {
        document: json!({
            "command": "verify",
            "ring": ring.presentation(),
            "check": check.label(),
            "pass": pass,
            "reports": reports,
        }),
        pass,
    })
}

fn run_morphism(hom_text: &str, limits: &Limits) -> CommandResult {
    let expr = parse_hom(hom_text)?;
    let phi = lower_hom(&expr, limits)?;
    let morphism = induced_morphism(&phi, limits)?;
    let report = morphism_report(&morphism);
    let pass = report.passed();
    Ok(Outcome {
        document: json!({
            "command": "morphism",
            "hom": expr.to_string(),
            "summary": morphism_summary(&morphism),
            "report": report,
        }),
        pass,
    })
}

fn builtin_space(name: &str) -> Option<FiniteTopology> {
    match name {
        "sierpinski" => Some(sierpinski()),
        "discrete2" => Some(discrete(2)),
        "discrete3" => Some(discrete(3)),
        "chain3" => Some(chain(3)),
        _ => None,
    }
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read '{path}': {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("'{path}' is not valid: {e}")))
}

fn resolve_space(name: &str) -> Result<Arc<FiniteTopology>, Error> {
    if let Some(space) = builtin_space(name) {
        return Ok(Arc::new(space));
    }
    let dto: TopologyDto = read_json_file(name)?;
    topology_from_dto(&dto)
}

fn resolve_presheaf(
    name: &str,
    space: &Arc<FiniteTopology>,
    limits: &Limits,
) -> Result<Presheaf, Error> {
    if name == "const-chain-Z4-Z2" {
        return chain_preset(space, limits);
    }
    if let Some(rest) = name.strip_prefix("locally-const-Z") {
        if let Ok(n) = rest.parse::<usize>() {
            return locally_constant_preset(space, n, limits);
        }
    }
    if let Some(rest) = name.strip_prefix("const-Z") {
        if let Ok(n) = rest.parse::<usize>() {
            return constant_preset(space, n, limits);
        }
    }
    let dto: PresheafDto = read_json_file(name)?;
    presheaf_from_dto(space, &dto, limits)
}

fn operator_output(
    presheaf: &Presheaf,
    operator: Operator,
    limits: &Limits,
) -> Result<(Presheaf, Vec<Vec<usize>>), Error> {
    let (output, theta) = match operator {
        Operator::Paper => sheafify_proper_limit(presheaf, EmptySetConvention::ExcludeEmpty, limits)?,
        Operator::Standard => sheafify_standard(presheaf, limits)?,
        Operator::Both => unreachable!("handled by the caller"),
    };
    let components = theta
        .components()
        .iter()
        .map(|c| c.image_table().to_vec())
        .collect();
    Ok((output, components))
}

fn run_sheafify(
    space_name: &str,
    presheaf_name: &str,
    operator: Operator,
    limits: &Limits,
) -> CommandResult {
    let space = resolve_space(space_name)?;
    let presheaf = resolve_presheaf(presheaf_name, &space, limits)?;

    if let Operator::Both = operator {
        let (standard_out, _) = sheafify_standard(&presheaf, limits)?;
        let (paper_out, _) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::ExcludeEmpty, limits)?;
        let comparison = compare_presheaves(&standard_out, &paper_out, limits)?;
        let report = DivergenceReport::from_comparison(
            space_name,
            presheaf_name,
            "standard",
            "paper",
            comparison,
        );
        let pass = report.agree;
        return Ok(Outcome {
            document: json!({
                "command": "sheafify",
                "space": space_name,
                "presheaf": presheaf_name,
                "operator": "both",
                "divergence": report,
                "outputs": {
                    "standard": presheaf_dto(&standard_out),
                    "paper": presheaf_dto(&paper_out),
                },
            }),
            pass,
        });
    }

    let label = match operator {
        Operator::Paper => "paper",
        Operator::Standard => "standard",
        Operator::Both => unreachable!(),
    };
    let (output, components) = operator_output(&presheaf, operator, limits)?;
    let output_is_sheaf = check_sheaf_axioms(&output, limits)?.passed();
    Ok(Outcome::pass(json!({
        "command": "sheafify",
        "space": space_name,
        "presheaf": presheaf_name,
        "operator": label,
        "input": presheaf_dto(&presheaf),
        "output": presheaf_dto(&output),
        "output_is_sheaf": output_is_sheaf,
        "comparison_components": components,
    })))
}

fn run_export(
    ring_text: &str,
    dot: Option<&std::path::Path>,
    json_flag: bool,
    limits: &Limits,
) -> CommandResult {
    let ring = ring_from_text(ring_text, limits)?;
    let scheme = affine_scheme(&ring, limits)?;
    let mut document = serde_json::Map::new();
    document.insert("command".into(), Value::String("export".into()));
    if let Some(path) = dot {
        let rendered = spec_dot(scheme.space());
        std::fs::write(path, rendered)
            .map_err(|e| Error::Invalid(format!("cannot write '{}': {e}", path.display())))?;
        document.insert(
            "dot_file".into(),
            Value::String(path.display().to_string()),
        );
    }
    if json_flag || dot.is_none() {
        document.insert("ring".into(), serde_json::to_value(ring_dto(&ring)).unwrap());
        document.insert(
            "space".into(),
            serde_json::to_value(space_dto(scheme.space())).unwrap(),
        );
        document.insert(
            "structure".into(),
            serde_json::to_value(presheaf_dto(scheme.structure())).unwrap(),
        );
    }
    Ok(Outcome::pass(Value::Object(document)))
}
