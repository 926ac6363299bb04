use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use nonabcoh::betti::{Reductivity, Representation, Word};
use nonabcoh::cech::{chern_class, cohomology, exp_lift, moduli_coordinates, CoefficientSystem, Coefficients, CohomologyClass, CoverNerve};
use nonabcoh::equivalences::{self, fingerprint, EquivalenceReport};
use nonabcoh::fuchsian::{
    eigenvalue_check, hypergeometric_residual, hypergeometric_to_system, monodromy, CheckStatus, EigenvalueReport, FuchsianSystem,
    LambdaSystem, MonodromyOptions, MonodromyResult,
};
use nonabcoh::io::{self, float_json, matrix_to_json, word_to_json, JsonScalar};
use nonabcoh::lattice::{self, TriangulatedSurface};
use nonabcoh::localsys::{self, pi1_presentation, validate_cocycle, GaugeCochain};
use nonabcoh::numkit::{multiset_distance, GaussianRational, C64};
use nonabcoh::Error;

use crate::{BettiCmd, CechCmd, Cli, CoefficientsArg, Command, EquivCmd, FuchsianCmd, LatticeCmd, LocalsysCmd, LoopArgs, ModeArg};

/// Threshold for the numerical self-checks of integrator-based commands.
pub const CHECK_THRESHOLD: f64 = 1e-6;

/// Integration tolerance for the hypergeometric residual.
const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// Error raised by a construction: exit 1.
    Domain(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(m) => Failure::Input(m),
            e => Failure::Domain(e),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub mode: &'static str,
    pub tolerance: f64,
    pub passed: bool,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "mode": self.mode,
            "tolerance": float_json(self.tolerance),
            "passed": self.passed,
            "result": self.result,
        })
    }
}

/// Reads inputs and remembers their fingerprints.
struct Inputs {
    seen: BTreeMap<String, String>,
}

impl Inputs {
    fn json(&mut self, path: &Path) -> Outcome<Value> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        self.seen.insert(path.display().to_string(), fingerprint(&bytes));
        let text = String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: not UTF-8: {e}", path.display())))?;
        io::parse_document(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    /// Parses a file with a schema reader, prefixing schema errors with the path.
    fn load<T>(&mut self, path: &Path, read: impl FnOnce(&Value) -> nonabcoh::Result<T>) -> Outcome<T> {
        let v = self.json(path)?;
        read(&v).map_err(|e| match e {
            Error::Schema(m) => Failure::Input(format!("{}: {m}", path.display())),
            e => Failure::Domain(e),
        })
    }
}

fn scalar_arg(text: &str, name: &str) -> Outcome<C64> {
    let v = io::parse_document(text).map_err(|e| Failure::Input(format!("--{name}: {e}")))?;
    C64::from_json(&v, "").map_err(|e| Failure::Input(format!("--{name}: {e}")))
}

fn options(loops: &LoopArgs, tol: f64) -> Outcome<MonodromyOptions> {
    Ok(MonodromyOptions { base: scalar_arg(&loops.base, "base")?, radius: loops.radius, tol })
}

fn scalars<T: JsonScalar>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(T::to_json).collect())
}

fn words_json(ws: &[Word]) -> Value {
    Value::Array(ws.iter().map(word_to_json).collect())
}

fn class_json(c: &CohomologyClass) -> Value {
    json!({
        "free": c.free,
        "torsion": c.torsion.iter().map(|t| json!({"order": t.order, "residue": t.residue})).collect::<Vec<_>>(),
        "isZero": c.is_zero(),
    })
}

fn monodromy_json(m: &MonodromyResult) -> Value {
    json!({
        "C0": matrix_to_json(&m.c0),
        "C1": matrix_to_json(&m.c1),
        "Cinf": matrix_to_json(&m.cinf),
        "productOrder": m.product_order,
        "residualIdentityError": float_json(m.residual_identity_error),
        "integrationTolerance": float_json(m.integration_tolerance),
        "liouvilleErrors": m.liouville_errors.iter().map(|&x| float_json(x)).collect::<Vec<_>>(),
    })
}

fn eigen_json(r: &EigenvalueReport) -> Value {
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "point": format!("{:?}", p.point),
                "residueEigenvalues": scalars(&p.residue_eigenvalues),
                "predicted": scalars(&p.predicted),
                "computed": scalars(&p.computed),
                "distance": float_json(p.distance),
                "status": match p.status {
                    CheckStatus::Passed => "passed",
                    CheckStatus::Failed => "failed",
                    CheckStatus::SkippedResonant => "skippedResonant",
                },
            })
        })
        .collect();
    json!({ "tolerance": float_json(r.tolerance), "passed": r.passed(), "points": points })
}

fn equivalence_json(r: &EquivalenceReport) -> Value {
    let intermediate: BTreeMap<&str, Value> = r.intermediate.iter().map(|n| (n.name.as_str(), scalars(&n.values))).collect();
    json!({
        "route": r.route,
        "fingerprint": r.fingerprint,
        "invariantsBefore": scalars(&r.invariants_before),
        "invariantsAfter": scalars(&r.invariants_after),
        "intermediate": intermediate,
        "exactEqual": r.exact_equal,
        "maxDiscrepancy": float_json(r.max_discrepancy),
        "tolerance": float_json(r.tolerance),
        "passed": r.passed(),
    })
}

/// `(passed, result)` of a command body.
type Body = Outcome<(bool, Value)>;

fn betti<T: JsonScalar>(cmd: &BettiCmd, tol: f64, inputs: &mut Inputs) -> Body {
    match cmd {
        BettiCmd::Check { rep } => {
            let r: Representation<T> = inputs.load(rep, io::representation_from_json)?;
            let holds = r.check_relations(tol);
            Ok((holds, json!({ "relationsHold": holds, "rank": r.rank(), "generators": r.group().generators() })))
        }
        BettiCmd::Traces { rep, words } => {
            let r: Representation<T> = inputs.load(rep, io::representation_from_json)?;
            let words = match words {
                Some(p) => inputs.load(p, |v| io::words_from_json(v, ""))?,
                None => r.group().standard_words(),
            };
            let traces = r.trace_invariants(&words)?;
            Ok((true, json!({ "words": words_json(&words), "traces": scalars(&traces) })))
        }
        BettiCmd::Reductivity { rep } => {
            let r: Representation<T> = inputs.load(rep, io::representation_from_json)?;
            let verdict = r.reductivity(tol);
            let verified = verdict.witness.as_ref().map(|w| r.is_invariant_line(w, tol));
            let status = match verdict.status {
                Reductivity::Reductive => "reductive",
                Reductivity::NonReductive => "nonReductive",
                Reductivity::Unknown => "unknown",
            };
            let result = json!({
                "status": status,
                "witness": verdict.witness.as_deref().map(scalars),
                "witnessVerified": verified,
            });
            Ok((verified.unwrap_or(true), result))
        }
    }
}

fn cech<T: JsonScalar>(cmd: &CechCmd, tol: f64, inputs: &mut Inputs) -> Body {
    match cmd {
        CechCmd::Cohomology { nerve, coefficients } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let coeffs = match coefficients {
                CoefficientsArg::Z => Coefficients::Z,
                CoefficientsArg::C => Coefficients::C,
            };
            let reports: Vec<_> = (0..=n.dimension()).map(|p| cohomology(&n, p, coeffs)).collect();
            let euler: i64 = reports.iter().map(|r| if r.degree % 2 == 0 { r.free_rank as i64 } else { -(r.free_rank as i64) }).sum();
            let degrees: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "degree": r.degree,
                        "freeRank": r.free_rank,
                        "torsion": r.torsion,
                        "representatives": r.representatives.iter().map(|c| io::integral_cochain_to_json(&n, c)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let consistent = euler == n.euler_characteristic();
            let result = json!({
                "coefficients": format!("{coeffs:?}"),
                "degrees": degrees,
                "eulerCharacteristic": n.euler_characteristic(),
                "eulerCharacteristicMatches": consistent,
                "declaredGoodCover": n.declared_good_cover(),
            });
            Ok((consistent, result))
        }
        CechCmd::Chern { nerve, cochain } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let u = inputs.load(cochain, |v| io::cochain_file_from_json(v)?.multiplicative(&n))?;
            let c = chern_class(&n, &u, tol)?;
            let lift = exp_lift(&n, &u, tol)?;
            let result = json!({
                "class": class_json(&c.class),
                "cocycle": io::integral_cochain_to_json(&n, &c.cocycle),
                "logarithm": io::additive_cochain_to_json(&n, &c.logarithm),
                "lift": lift.as_ref().map(|a| io::additive_cochain_to_json(&n, a)),
            });
            Ok((lift.is_some() == c.class.is_zero(), result))
        }
        CechCmd::Moduli { nerve, cochain } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let file = inputs.load(cochain, io::cochain_file_from_json)?;
            let coordinates = match file.coefficients {
                CoefficientSystem::Cx => {
                    let u = file.multiplicative(&n).map_err(|e| Failure::Input(format!("{}: {e}", cochain.display())))?;
                    let a = exp_lift(&n, &u, tol)?.ok_or_else(|| Failure::Domain(Error::NotCocycle("nonzero Chern class, no logarithm exists".into())))?;
                    let coordinates = moduli_coordinates(&n, &a, tol)?;
                    return Ok((true, json!({ "coordinates": scalars(&coordinates), "liftTolerance": float_json(tol) })));
                }
                _ => {
                    let a = file.additive::<T>(&n).map_err(|e| Failure::Input(format!("{}: {e}", cochain.display())))?;
                    moduli_coordinates(&n, &a, tol)?
                }
            };
            Ok((true, json!({ "coordinates": scalars(&coordinates) })))
        }
    }
}

fn localsys<T: JsonScalar>(cmd: &LocalsysCmd, tol: f64, inputs: &mut Inputs) -> Body {
    match cmd {
        LocalsysCmd::Validate { nerve, cocycle } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let c = inputs.load(cocycle, |v| io::gcocycle_from_json::<T>(v, &n))?;
            let valid = validate_cocycle(&n, &c, tol)?;
            Ok((valid, json!({ "valid": valid })))
        }
        LocalsysCmd::Gauge { nerve, cocycle, gauge } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let c = inputs.load(cocycle, |v| io::gcocycle_from_json::<T>(v, &n))?;
            let g = inputs.load(gauge, |v| io::gauge_from_json::<T>(v, n.vertex_count()))?;
            let out = localsys::gauge_act(&GaugeCochain::new(g)?, &c)?;
            let valid = validate_cocycle(&n, &out, tol)?;
            Ok((valid, json!({ "cocycle": io::gcocycle_to_json(&out), "valid": valid })))
        }
        LocalsysCmd::Monodromy { nerve, cocycle, basepoint, words } => {
            let n = inputs.load(nerve, io::nerve_from_json)?;
            let c = inputs.load(cocycle, |v| io::gcocycle_from_json::<T>(v, &n))?;
            let p = pi1_presentation(&n, *basepoint)?;
            let rep = localsys::monodromy(&c, &n, &p, tol)?;
            let words = match words {
                Some(path) => inputs.load(path, |v| io::words_from_json(v, ""))?,
                None => rep.group().standard_words(),
            };
            let loops: Vec<Vec<usize>> = (0..p.group().generators()).map(|g| p.generator_loop(g)).collect();
            let result = json!({
                "basepoint": p.basepoint(),
                "representation": io::representation_to_json(&rep),
                "generatorLoops": loops,
                "words": words_json(&words),
                "traces": scalars(&rep.trace_invariants(&words)?),
                "relationsHold": rep.check_relations(tol),
            });
            Ok((rep.check_relations(tol), result))
        }
    }
}

fn lattice<T: JsonScalar>(cmd: &LatticeCmd, tol: f64, inputs: &mut Inputs) -> Body {
    let (surface, connection) = match cmd {
        LatticeCmd::Curvature { surface, connection } | LatticeCmd::Holonomy { surface, connection, .. } | LatticeCmd::Moduli { surface, connection } => {
            (surface, connection)
        }
    };
    let s: TriangulatedSurface = inputs.load(surface, io::surface_from_json)?;
    let conn = inputs.load(connection, |v| io::connection_from_json::<T>(v, &s))?;
    match cmd {
        LatticeCmd::Curvature { .. } => {
            let faces: Vec<Value> = lattice::curvature(&s, &conn)
                .iter()
                .enumerate()
                .map(|(f, m)| json!({ "face": s.based_face(f), "curvature": matrix_to_json(m) }))
                .collect();
            let first = lattice::first_non_flat_face(&s, &conn, tol);
            Ok((true, json!({ "faces": faces, "flat": first.is_none(), "firstNonFlatFace": first })))
        }
        LatticeCmd::Holonomy { path, .. } => {
            let h = lattice::holonomy_vertices(&conn, path)?;
            Ok((true, json!({ "path": path, "holonomy": matrix_to_json(&h) })))
        }
        LatticeCmd::Moduli { .. } => {
            let coordinates = lattice::abelian_moduli(&s, &conn, tol)?;
            Ok((true, json!({ "genus": s.genus(), "coordinates": scalars(&coordinates) })))
        }
    }
}

fn lambdas(texts: &[String]) -> Outcome<Vec<C64>> {
    texts.iter().map(|t| scalar_arg(t, "lambda")).collect()
}

fn fuchsian(cmd: &FuchsianCmd, tol: f64, inputs: &mut Inputs) -> Body {
    match cmd {
        FuchsianCmd::Monodromy { system, loops } => {
            let sys = inputs.load(system, io::system_from_json)?;
            let m = monodromy(&sys, &options(loops, tol)?)?;
            let eig = eigenvalue_check(&sys, &m, CHECK_THRESHOLD)?;
            let residual_ok = m.residual_identity_error < CHECK_THRESHOLD;
            let result = json!({
                "system": io::system_to_json(&sys),
                "monodromy": monodromy_json(&m),
                "residualThreshold": float_json(CHECK_THRESHOLD),
                "residualPassed": residual_ok,
                "eigenvalueCheck": eigen_json(&eig),
            });
            Ok((residual_ok && eig.passed(), result))
        }
        FuchsianCmd::Hypergeometric { params, loops } => {
            let p = inputs.load(params, io::hypergeometric_from_json)?;
            let sys = hypergeometric_to_system(&p);
            let (from, to) = (C64::new(0.0, 0.5), C64::new(0.5, 0.5));
            let residual = hypergeometric_residual(&p, &sys, from, to, 4, RESIDUAL_TOL)?;
            let m = monodromy(&sys, &options(loops, tol)?)?;
            let flags = p.resonance();
            let (at0, at1) = p.predicted_eigenvalues();
            let d0 = multiset_distance(&at0, &nonabcoh::numkit::eigenvalues(&m.c0, 1e-13)?);
            let d1 = multiset_distance(&at1, &nonabcoh::numkit::eigenvalues(&m.c1, 1e-13)?);
            let eig_ok = flags.any() || (d0 < CHECK_THRESHOLD && d1 < CHECK_THRESHOLD);
            let result = json!({
                "system": io::system_to_json(&sys),
                "residual": float_json(residual),
                "residualPath": [from.to_json(), to.to_json()],
                "residualIntegrationTolerance": float_json(RESIDUAL_TOL),
                "monodromy": monodromy_json(&m),
                "predictedEigenvalues": { "at0": scalars(&at0), "at1": scalars(&at1) },
                "eigenvalueDistance": { "at0": float_json(d0), "at1": float_json(d1) },
                "resonance": {
                    "cInteger": flags.c_integer,
                    "cMinusAMinusBInteger": flags.c_minus_a_minus_b_integer,
                    "aMinusBInteger": flags.a_minus_b_integer,
                },
                "threshold": float_json(CHECK_THRESHOLD),
            });
            Ok((residual < CHECK_THRESHOLD && eig_ok, result))
        }
        FuchsianCmd::Lambda { system, lambdas: texts, loops } => {
            let sys: FuchsianSystem = inputs.load(system, io::system_from_json)?;
            let opts = options(loops, tol)?;
            let ls = lambdas(texts)?;
            let per: Vec<Value> = ls
                .iter()
                .map(|&l| Ok(json!({ "lambda": l.to_json(), "monodromy": monodromy_json(&monodromy(&LambdaSystem::new(sys.clone(), l)?, &opts)?) })))
                .collect::<Outcome<_>>()?;
            let r = equivalences::lambda_equivalence(&sys, &ls, &opts, CHECK_THRESHOLD)?;
            Ok((r.passed(), json!({ "monodromies": per, "equivalence": equivalence_json(&r) })))
        }
    }
}

fn equiv<T: JsonScalar>(cmd: &EquivCmd, tol: f64, inputs: &mut Inputs) -> Body {
    let r = match cmd {
        EquivCmd::BettiCech { nerve, rep } => {
            let n: CoverNerve = inputs.load(nerve, io::nerve_from_json)?;
            let r: Representation<T> = inputs.load(rep, io::representation_from_json)?;
            equivalences::roundtrip_betti_cech(&r, &n, tol)?
        }
        EquivCmd::CechLattice { surface, cochain } => {
            let s = inputs.load(surface, io::surface_from_json)?;
            let n = s.nerve();
            let u = inputs.load(cochain, |v| io::cochain_file_from_json(v)?.multiplicative(&n))?;
            equivalences::roundtrip_cech_lattice(&u, &n, &s, tol.max(1e-10))?
        }
        EquivCmd::Lambda { system, lambdas: texts, loops } => {
            let sys = inputs.load(system, io::system_from_json)?;
            equivalences::lambda_equivalence(&sys, &lambdas(texts)?, &options(loops, tol)?, CHECK_THRESHOLD)?
        }
    };
    Ok((r.passed(), equivalence_json(&r)))
}

macro_rules! by_mode {
    ($mode:expr, $f:ident($($arg:expr),*)) => {
        match $mode {
            ModeArg::Exact => $f::<GaussianRational>($($arg),*),
            ModeArg::Float => $f::<C64>($($arg),*),
        }
    };
}

fn command_name(cmd: &Command) -> String {
    let full = format!("{cmd:?}");
    // `Betti(Check { .. })` → `betti check`
    full.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .take(2)
        .map(|s| {
            let mut out = String::new();
            for (i, ch) in s.chars().enumerate() {
                if ch.is_uppercase() && i > 0 {
                    out.push('-');
                }
                out.extend(ch.to_lowercase());
            }
            out
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cli: &Cli) -> Outcome<Report> {
    let g = &cli.global;
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(Failure::Input(format!("--tol must be positive (got {})", g.tol)));
    }
    let mut inputs = Inputs { seen: BTreeMap::new() };
    let exact = g.mode == ModeArg::Exact;
    let (float_only, (passed, result)) = match &cli.command {
        Command::Betti(c) => (false, by_mode!(g.mode, betti(c, g.tol, &mut inputs))?),
        Command::Cech(c @ CechCmd::Cohomology { .. }) => (false, cech::<GaussianRational>(c, g.tol, &mut inputs)?),
        Command::Cech(c @ CechCmd::Chern { .. }) => (true, cech::<C64>(c, g.tol, &mut inputs)?),
        Command::Cech(c) => (false, by_mode!(g.mode, cech(c, g.tol, &mut inputs))?),
        Command::Localsys(c) => (false, by_mode!(g.mode, localsys(c, g.tol, &mut inputs))?),
        Command::Lattice(c) => (false, by_mode!(g.mode, lattice(c, g.tol, &mut inputs))?),
        Command::Fuchsian(c) => (true, fuchsian(c, g.tol, &mut inputs)?),
        Command::Equiv(c @ EquivCmd::BettiCech { .. }) => (false, by_mode!(g.mode, equiv(c, g.tol, &mut inputs))?),
        Command::Equiv(c) => (true, equiv::<C64>(c, g.tol, &mut inputs)?),
    };
    let cohomology = matches!(cli.command, Command::Cech(CechCmd::Cohomology { .. }));
    // exact arithmetic does not use the tolerance
    let (mode, tolerance) = if !float_only && (exact || cohomology) { ("exact", 0.0) } else { ("float", g.tol) };
    Ok(Report { command: command_name(&cli.command), inputs: inputs.seen, mode, tolerance, passed, result })
}
