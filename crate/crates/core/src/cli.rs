//! The `equik` command line: group/action parsing, subcommands, and report emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{cocycle_representatives, invariant_cohomology, t_cohomology};
use crate::complexes::{delta_k, total_differential, Cochain, CochainFile, ComplexSpec, Shape, TotalCochain};
use crate::error::{Error, Limits, Result};
use crate::fusion::{
    coquasi_bialgebra, fusion_ring, verify_coquasi_axioms, AssociatorOrientation, CoquasiBialgebra, Twist,
};
use crate::groups::{
    action_from_generators, conjugation_action, cyclic, dihedral, direct_product, inversion_action, quaternion8,
    symmetric, trivial_action, FiniteGroup, GroupAction,
};
use crate::shuffle::{dpr_cocycle, tau1_dual, tau_commutes};
use crate::structures::{h1_mult, mult_class_of_dpr, multiplicative_structures, phi_map, psdmn_moduli};

pub const TOOL: &str = "equik";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "equik", version, about = "Double bar complexes of K ⋊ G, multiplicative structures, and fusion rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Group K as a JSON definition file.
    #[arg(long, global = true, conflicts_with = "builder")]
    pub group: Option<PathBuf>,
    /// Group K inline: cyclic:n, dihedral:n, quaternion8, symmetric:n, or A*B for a direct product.
    #[arg(long, global = true)]
    pub builder: Option<String>,
    /// conjugation | inversion | trivial | trivial:<builder> | path to a JSON action file.
    #[arg(long, global = true, default_value = "conjugation")]
    pub action: String,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_nnz: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Invariant factors of H^n of a complex with circle coefficients.
    Cohomology {
        /// full, a, b, atrunc:r, row:q or single.
        #[arg(long, default_value = "a")]
        complex: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// MS_G(K), the map φ, H¹_mult, and optionally the pseudomonoid moduli.
    Ms {
        #[arg(long)]
        psdmn: bool,
    },
    /// DPR cocycle of a 3-cocycle on G and its class in MS_G(G).
    Dpr {
        /// Coordinates of w in H³(G, T), comma separated.
        #[arg(long, default_value = "1", conflicts_with = "w_file")]
        class: String,
        /// A cochain file on the bar complex of G at bidegree (0,3).
        #[arg(long)]
        w_file: Option<PathBuf>,
    },
    /// Fusion ring of Bun_G(K) under a twist, optionally with the coquasi-bialgebra.
    Fusion {
        /// trivial, or dpr:<coordinates> for the DPR triple of a class in H³(G, T).
        #[arg(long, default_value = "trivial")]
        twist: String,
        #[arg(long)]
        coquasi: bool,
    },
    /// Property suite: differentials, shuffle/DPR identities, splitting, coquasi axioms.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random cochains per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Complexes,
    Shuffle,
    Fusion,
}

/// Group definition file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupFile {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Quaternion8,
    Symmetric { n: usize },
    Table { mul: Vec<Vec<usize>>, #[serde(default)] labels: Option<Vec<String>> },
}

impl GroupFile {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupFile::Cyclic { n } if *n >= 1 => Ok(cyclic(*n)),
            GroupFile::Dihedral { n } if *n >= 1 => Ok(dihedral(*n)),
            GroupFile::Quaternion8 => Ok(quaternion8()),
            GroupFile::Symmetric { n } => symmetric(*n),
            GroupFile::Table { mul, labels } => FiniteGroup::from_table("table", mul.clone(), labels.clone()),
            _ => Err(Error::Usage("group parameter must be positive".into())),
        }
    }
}

/// Action file. `acting` names G where it differs from K.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionFile {
    Conjugation,
    Trivial {
        #[serde(default)]
        acting: Option<GroupFile>,
    },
    Inversion,
    Explicit {
        acting: GroupFile,
        #[serde(default)]
        generators: Option<Vec<usize>>,
        perm_per_generator: Vec<Vec<usize>>,
    },
}

impl ActionFile {
    pub fn build(&self, k: &FiniteGroup) -> Result<GroupAction> {
        match self {
            ActionFile::Conjugation => Ok(conjugation_action(k)),
            ActionFile::Trivial { acting } => {
                let g = match acting {
                    Some(f) => f.build()?,
                    None => k.clone(),
                };
                Ok(trivial_action(&g, k))
            }
            ActionFile::Inversion => inversion_action(k),
            ActionFile::Explicit { acting, generators, perm_per_generator } => {
                let g = acting.build()?;
                let gens = generators.clone().unwrap_or_else(|| g.generating_set());
                action_from_generators(&g, k, &gens, perm_per_generator)
            }
        }
    }
}

/// `cyclic:4`, `dihedral:5`, `quaternion8`, `symmetric:3`, `cyclic:2*cyclic:2`.
pub fn parse_builder(s: &str) -> Result<FiniteGroup> {
    if let Some((a, b)) = s.split_once('*') {
        return Ok(direct_product(&parse_builder(a)?, &parse_builder(b)?));
    }
    let bad = || Error::Usage(format!("unknown builder {s:?} (cyclic:n, dihedral:n, quaternion8, symmetric:n, A*B)"));
    let (head, arg) = match s.split_once(':') {
        Some((h, a)) => (h, Some(a.trim().parse::<usize>().map_err(|_| bad())?)),
        None => (s, None),
    };
    let file = match (head.trim().to_ascii_lowercase().as_str(), arg) {
        ("cyclic", Some(n)) => GroupFile::Cyclic { n },
        ("dihedral", Some(n)) => GroupFile::Dihedral { n },
        ("quaternion8" | "q8", None) => GroupFile::Quaternion8,
        ("symmetric", Some(n)) => GroupFile::Symmetric { n },
        _ => return Err(bad()),
    };
    file.build()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl Common {
    pub fn limits(&self) -> Result<Limits> {
        if self.max_nnz == 0 {
            return Err(Error::Usage("--max-nnz must be positive".into()));
        }
        Ok(Limits { max_nnz: self.max_nnz, ..Limits::default() })
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        match (&self.group, &self.builder) {
            (Some(p), _) => read_json::<GroupFile>(p)?.build(),
            (None, Some(b)) => parse_builder(b),
            (None, None) => Err(Error::Usage("one of --group or --builder is required".into())),
        }
    }

    pub fn action(&self) -> Result<GroupAction> {
        let k = self.group()?;
        let a = self.action.as_str();
        let file = match a {
            "conjugation" => ActionFile::Conjugation,
            "inversion" => ActionFile::Inversion,
            "trivial" => ActionFile::Trivial { acting: None },
            _ if a.starts_with("trivial:") => {
                let g = parse_builder(&a["trivial:".len()..])?;
                return Ok(trivial_action(&g, &k));
            }
            _ if Path::new(a).exists() => read_json(Path::new(a))?,
            _ => return Err(Error::Usage(format!("unknown action {a:?} and no such file"))),
        };
        file.build(&k)
    }
}

fn parse_coords(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Usage(format!("bad coordinate list {s:?}"))))
        .collect()
}

fn require_conjugation(action: &GroupAction) -> Result<()> {
    if action.group != action.target || *action != conjugation_action(&action.target) {
        return Err(Error::Usage("this command needs --action conjugation".into()));
    }
    Ok(())
}

/// A 3-cocycle on G from coordinates in `H³(G, T)`.
pub fn cocycle_from_coordinates(g: &FiniteGroup, coords: &[i64], limits: &Limits) -> Result<(Vec<u64>, Cochain)> {
    let bar = ComplexSpec::single_group(g);
    let pres = t_cohomology(&bar, 3, limits)?;
    if coords.len() != pres.invariant_factors.len() {
        return Err(Error::Usage(format!(
            "H³({}, T) has invariant factors {:?}; give {} coordinate(s)",
            g.name(),
            pres.invariant_factors,
            pres.invariant_factors.len()
        )));
    }
    let values = pres.cocycle_with_coordinates(coords);
    let w = TotalCochain::from_flat(&bar, 3, &values);
    Ok((pres.invariant_factors.clone(), w.component(0, 3).unwrap().clone()))
}

fn twist_from_arg(action: &GroupAction, arg: &str, limits: &Limits) -> Result<Twist> {
    if arg == "trivial" {
        return Ok(Twist::trivial(action));
    }
    let coords = arg.strip_prefix("dpr:").ok_or_else(|| Error::Usage(format!("unknown twist {arg:?}")))?;
    require_conjugation(action)?;
    let (_, w) = cocycle_from_coordinates(&action.group, &parse_coords(coords)?, limits)?;
    Twist::dpr(action, &w)
}

fn coquasi_report(h: &CoquasiBialgebra) -> Value {
    let c = |z: num_complex::Complex64| [z.re, z.im];
    let n = h.dim();
    let mut product = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some((k, z)) = h.product[i][j] {
                product.push(json!([i, j, k, c(z)]));
            }
        }
    }
    let coproduct: Vec<Value> = (0..n)
        .flat_map(|i| h.coproduct[i].iter().map(move |&(a, b, z)| json!([i, a, b, c(z)])))
        .collect();
    let associator: Vec<Value> = (0..n * n * n)
        .filter(|&t| h.associator[t].norm() > 0.0)
        .map(|t| json!([t / (n * n), (t / n) % n, t % n, c(h.associator[t])]))
        .collect();
    json!({
        "labels": h.labels,
        "product": product,
        "coproduct": coproduct,
        "associator": associator,
        "counit": h.counit,
        "unit": h.unit,
    })
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn run_verify(action: &GroupAction, suite: Suite, samples: usize, seed: u64, limits: &Limits) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conj = require_conjugation(action).is_ok();
    if matches!(suite, Suite::All | Suite::Complexes) {
        for shape in [Shape::Full, Shape::A, Shape::B] {
            let spec = ComplexSpec::new(action, shape);
            let mut ok = true;
            for n in 1..=3 {
                for _ in 0..samples {
                    let x = TotalCochain::random(&spec, n, 60, &mut rng);
                    ok &= total_differential(&spec, &total_differential(&spec, &x)).is_zero();
                }
            }
            checks.push(Check { name: format!("d∘d = 0 on Tot {shape}"), passed: ok, detail: format!("{samples} samples per degree 1..3") });
        }
    }
    if matches!(suite, Suite::All | Suite::Shuffle) && conj {
        let g = &action.group;
        let full = ComplexSpec::new(action, Shape::Full);
        let a = ComplexSpec::new(action, Shape::A);
        let bar = ComplexSpec::single_group(g);
        let mut ok = true;
        for n in 1..=3 {
            for _ in 0..samples {
                ok &= tau_commutes(&full, &Cochain::random(&bar, 0, n, 12, &mut rng))?;
            }
        }
        checks.push(Check { name: "τ^∨ is a chain map".into(), passed: ok, detail: format!("{samples} samples per degree 1..3") });
        let mut ok = true;
        let reps = cocycle_representatives(&bar, 3, limits)?;
        for w in &reps {
            let w = w.component(0, 3).unwrap();
            let d = dpr_cocycle(&a, w)?;
            ok &= d == tau1_dual(&a, w)? && total_differential(&a, &d).is_zero();
        }
        checks.push(Check { name: "DPR = τ₁^∨ w and closed".into(), passed: ok, detail: format!("{} representatives", reps.len()) });
        let mut ok = true;
        for w in &reps {
            let w = w.component(0, 3).unwrap();
            ok &= delta_k(&bar, w)?.is_zero();
        }
        checks.push(Check { name: "H³ representatives are cocycles".into(), passed: ok, detail: String::new() });
    }
    if matches!(suite, Suite::All | Suite::Fusion) {
        let mut twists = vec![("trivial".to_string(), Twist::trivial(action))];
        if conj {
            for w in cocycle_representatives(&ComplexSpec::single_group(&action.group), 3, limits)? {
                twists.push(("DPR".to_string(), Twist::dpr(action, w.component(0, 3).unwrap())?));
            }
        }
        for (name, t) in twists {
            let ring = fusion_ring(&t, seed, limits);
            let (passed, detail) = match &ring {
                Ok(r) => (r.max_residual < 1e-6, format!("rank {}, rounding residual {:.1e}", r.rank, r.max_residual)),
                Err(e) => (false, e.to_string()),
            };
            checks.push(Check { name: format!("fusion ring invariants ({name} twist)"), passed, detail });
            let rep = verify_coquasi_axioms(&coquasi_bialgebra(&t, AssociatorOrientation::ThetaInverse)?, 1e-9);
            checks.push(Check {
                name: format!("coquasi axioms ({name} twist)"),
                passed: rep.passes(),
                detail: format!("q1 {:.1e}, q2 {:.1e}, q3 {:.1e}", rep.q1, rep.q2, rep.q3),
            });
        }
    }
    Ok(checks)
}

/// Runs one command; the boolean is false when a verification suite failed.
pub fn run(cli: &Cli) -> Result<(Value, bool)> {
    let limits = cli.common.limits()?;
    let action = cli.common.action()?;
    let seed = cli.common.seed;
    let mut ok = true;
    let result = match &cli.command {
        Command::Cohomology { complex, degree } => {
            let shape: Shape = complex.parse()?;
            let spec = match shape {
                Shape::SingleGroup => ComplexSpec::single_group(&action.target),
                s => ComplexSpec::new(&action, s),
            };
            let p = t_cohomology(&spec, *degree, &limits)?;
            json!({
                "complex": spec.describe(),
                "degree": degree,
                "invariant_factors": p.invariant_factors,
                "free_rank": p.free_rank,
                "order": p.order().to_string(),
            })
        }
        Command::Ms { psdmn } => {
            let ms = multiplicative_structures(&action, &limits)?;
            let (phi, _) = phi_map(&action, &limits)?;
            let h1 = h1_mult(&action, &limits)?;
            let inv = invariant_cohomology(&action, 3, &limits)?;
            let mut r = json!({
                "ms": ms.invariant_factors(),
                "ambient": ms.ambient.invariant_factors,
                "phi": phi,
                "h3_invariant": inv.invariant_factors,
                "h1_mult": h1.invariant_factors,
            });
            if *psdmn {
                let m = psdmn_moduli(&action, &limits)?;
                r["psdmn"] = json!({
                    "invariant_factors": m.invariant_factors,
                    "automorphisms": m.automorphisms,
                    "orbits": m.orbit_count(),
                    "action_matrices": m.action_matrices,
                });
            }
            r
        }
        Command::Dpr { class, w_file } => {
            require_conjugation(&action)?;
            let g = &action.group;
            let bar = ComplexSpec::single_group(g);
            let (coords, w) = match w_file {
                Some(p) => {
                    let w = read_json::<CochainFile>(p)?.to_cochain(&bar)?;
                    (None, w)
                }
                None => {
                    let c = parse_coords(class)?;
                    let (_, w) = cocycle_from_coordinates(g, &c, &limits)?;
                    (Some(c), w)
                }
            };
            let a = ComplexSpec::new(&action, Shape::A);
            let t = dpr_cocycle(&a, &w)?;
            let ms = multiplicative_structures(&action, &limits)?;
            let class_ms = mult_class_of_dpr(&action, &w, &limits)?;
            let file = |p, q| CochainFile::from_cochain(&a, t.component(p, q).unwrap());
            json!({
                "w_coordinates": coords,
                "w": CochainFile::from_cochain(&bar, &w),
                "alpha": file(2, 1),
                "beta": file(1, 2),
                "theta": file(0, 3),
                "ms": ms.invariant_factors(),
                "ms_class": class_ms,
            })
        }
        Command::Fusion { twist, coquasi } => {
            let t = twist_from_arg(&action, twist, &limits)?;
            let ring = fusion_ring(&t, seed, &limits)?;
            let mut r = json!({ "twist": twist, "ring": ring.report() });
            if *coquasi {
                let h = coquasi_bialgebra(&t, AssociatorOrientation::ThetaInverse)?;
                let rep = verify_coquasi_axioms(&h, 1e-9);
                ok &= rep.passes();
                r["coquasi"] = coquasi_report(&h);
                r["coquasi_axioms"] = serde_json::to_value(&rep)?;
            }
            r
        }
        Command::Verify { suite, samples } => {
            let checks = run_verify(&action, *suite, *samples, seed, &limits)?;
            let passed = checks.iter().all(|c| c.passed);
            ok &= passed;
            json!({ "passed": passed, "checks": checks })
        }
    };
    Ok((result, ok))
}

pub fn envelope(cli: &Cli, result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli,
        "seed": cli.common.seed,
        "result": result,
    })
}

/// Key/value table of the top-level result fields.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let result = &v["result"];
    let _ = writeln!(out, "{} {}", TOOL, v["version"].as_str().unwrap_or(""));
    if let Some(obj) = result.as_object() {
        let width = obj.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        for (k, val) in obj {
            match val {
                Value::Array(items) if items.iter().all(|i| i.is_object()) && !items.is_empty() => {
                    let _ = writeln!(out, "{k:width$}");
                    for i in items {
                        let _ = writeln!(out, "  {}", serde_json::to_string(i).unwrap());
                    }
                }
                _ => {
                    let _ = writeln!(out, "{k:width$}  {}", serde_json::to_string(val).unwrap());
                }
            }
        }
    }
    out
}

/// Parses arguments, runs, writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok((result, ok)) => {
            let report = envelope(&cli, result);
            let text = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Text => render_text(&report),
            };
            let written = match &cli.common.out {
                Some(p) => std::fs::write(p, &text).map_err(Error::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                return report_error(&e);
            }
            if ok {
                0
            } else {
                Error::Verification(String::new()).exit_code()
            }
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    let obj = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "error": { "kind": e.kind(), "message": e.to_string() },
    });
    eprintln!("{}", serde_json::to_string(&obj).unwrap());
    e.exit_code()
}
