use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use finclone::catalog::{builtin_catalog, lookup};
use finclone::chi::{characteristic, chi_equal, classify_case};
use finclone::clone::{min_nonprojection_arity, slice, symmetric_closure, FunctionSet};
use finclone::conditions::{delta_2, delta_partial, delta_s};
use finclone::decomp::{decomposition_apply, index_families, is_decomposable, SubsetFamily};
use finclone::galois::{enumerate_inv, in_inv, invariant_closure, pol_bounded, preserves};
use finclone::io::{self, function_set_to_value, function_to_value, load_function, load_generators, load_qset};
use finclone::post::{identify_generated, pi_family, pi_zero};
use finclone::verify::{
    chi_injectivity_check, verify_decomposition_theorem, verify_lemma_suite, verify_main, verify_oracle_agreement,
    Scope, VerificationReport, Which,
};
use finclone::{Error, DEFAULT_CAP};

#[derive(Parser)]
#[command(name = "finclone", version, about = "Exact computation with clones of finite functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Table-entry budget for closures.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a single function.
    #[command(subcommand, name = "fn")]
    Func(FnCmd),
    #[command(subcommand)]
    Clone(CloneCmd),
    #[command(subcommand)]
    Galois(GaloisCmd),
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Check a Δ-condition.
    Delta {
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum)]
        cond: Cond,
        /// Arity for `s`.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    #[command(subcommand)]
    Post(PostCmd),
    #[command(subcommand)]
    Chi(ChiCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// List the built-in catalog for a carrier.
    Catalog {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum FnCmd {
    /// Echo the function with its shape flags.
    Inspect {
        #[arg(long = "f")]
        f: PathBuf,
    },
    Classify {
        #[arg(long = "f")]
        f: PathBuf,
    },
}

#[derive(Subcommand)]
enum CloneCmd {
    /// All functions of one arity in the generated clone.
    Slice {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        arity: usize,
    },
    /// Least arity of a non-projection.
    R {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Generators restricted to a subset of the carrier.
    Restrict {
        #[arg(long)]
        gens: String,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<u8>,
    },
    Symmetrize {
        #[arg(long)]
        gens: String,
    },
}

#[derive(Subcommand)]
enum GaloisCmd {
    Preserves {
        #[arg(long = "f")]
        f: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// Whether `H` is invariant under the clone.
    Inv {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        h: PathBuf,
    },
    /// Every invariant nonempty subset of `A^m`.
    Enumerate {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 16)]
        cell_cap: usize,
    },
    Pol {
        #[arg(long, required = true, num_args = 1..)]
        h: Vec<PathBuf>,
        #[arg(long)]
        max_arity: usize,
    },
    Closure {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        h: PathBuf,
    },
}

#[derive(Subcommand)]
enum DecompCmd {
    /// `H_(𝓡)` and its parts.
    Apply {
        #[arg(long)]
        h: PathBuf,
        /// Index sets separated by `;`, entries by `,`, e.g. `0,1;1,2`.
        #[arg(long)]
        family: String,
    },
    Check {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        family: String,
    },
    Families {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<u8>>,
    },
}

#[derive(Subcommand)]
enum PostCmd {
    Identify {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    Pi {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum ChiCmd {
    Compute {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Exit 0 when the characteristics agree.
    Compare {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    Classify {
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Args)]
struct ScopeArgs {
    /// Every nonempty `H ⊆ A^m`.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long)]
    samples: Option<usize>,
    /// Required with `--samples`.
    #[arg(long)]
    seed: Option<u64>,
}

impl ScopeArgs {
    fn scope(&self) -> Result<Scope, Error> {
        match (self.exhaustive, self.samples, self.seed) {
            (true, None, None) => Ok(Scope::Exhaustive),
            (false, Some(samples), Some(seed)) => Ok(Scope::Sampled { seed, samples }),
            (false, Some(_), None) => Err(Error::Input("--samples needs --seed".into())),
            (_, _, Some(_)) if self.samples.is_none() => Err(Error::Input("--seed needs --samples".into())),
            _ => Err(Error::Input("give --exhaustive or --samples with --seed".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Cond {
    S,
    Partial,
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Partial,
    PartialWeak,
    S,
    D2,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Which {
        match w {
            WhichArg::Partial => Which::Partial,
            WhichArg::PartialWeak => Which::PartialWeak,
            WhichArg::S => Which::S,
            WhichArg::D2 => Which::D2,
        }
    }
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// A decomposition theorem on one clone.
    Theorem {
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// The case-split decomposition on a catalog entry (`<k>/<name>`).
    Main {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Property suites over the catalogs for the listed carriers.
    Lemmas {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        k: Vec<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    ChiInjectivity {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Invariance decided by the closure engine against full tables.
    Oracle {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        scope: ScopeArgs,
    },
}

/// A JSON result plus whether the asked-for property holds.
struct Outcome {
    value: Value,
    holds: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, holds: true }
    }

    fn verdict(value: Value, holds: bool) -> Self {
        Outcome { value, holds }
    }

    fn report(r: VerificationReport) -> Result<Self, Error> {
        let holds = r.passed();
        Ok(Outcome { value: to_value(&r)?, holds })
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Input(format!("serialize: {e}")))
}

fn parse_family(m: usize, spec: &str) -> Result<SubsetFamily, Error> {
    let sets = spec
        .split(';')
        .map(|part| {
            part.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad index {s:?} in family"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SubsetFamily::new(m, sets)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cap = cli.cap;
    Ok(match &cli.command {
        Command::Func(FnCmd::Inspect { f }) => {
            let f = load_function(f)?;
            Outcome::ok(json!({ "function": function_to_value(&f), "shape": to_value(&f.classify())? }))
        }
        Command::Func(FnCmd::Classify { f }) => Outcome::ok(to_value(&load_function(f)?.classify())?),
        Command::Clone(CloneCmd::Slice { gens, arity }) => {
            let (g, _) = load_generators(gens)?;
            let s = slice(&g, *arity, None, cap)?;
            Outcome::ok(function_set_to_value(&FunctionSet::new(g.k(), None, s.functions()?)?))
        }
        Command::Clone(CloneCmd::R { gens, bound }) => {
            let (g, _) = load_generators(gens)?;
            Outcome::ok(json!({ "r": to_value(&min_nonprojection_arity(&g, *bound)?)? }))
        }
        Command::Clone(CloneCmd::Restrict { gens, subset }) => {
            let (g, _) = load_generators(gens)?;
            let r = g.restrict(subset)?;
            Outcome::ok(function_set_to_value(&FunctionSet::new(r.k(), None, r.functions().to_vec())?))
        }
        Command::Clone(CloneCmd::Symmetrize { gens }) => {
            let (g, _) = load_generators(gens)?;
            let s = symmetric_closure(&g);
            Outcome::ok(function_set_to_value(&FunctionSet::new(s.k(), None, s.functions().to_vec())?))
        }
        Command::Galois(GaloisCmd::Preserves { f, h }) => {
            let holds = preserves(&load_function(f)?, &load_qset(h)?)?;
            Outcome::verdict(json!({ "preserves": holds }), holds)
        }
        Command::Galois(GaloisCmd::Inv { gens, h }) => {
            let (g, _) = load_generators(gens)?;
            let holds = in_inv(&g, &load_qset(h)?)?;
            Outcome::verdict(json!({ "invariant": holds }), holds)
        }
        Command::Galois(GaloisCmd::Enumerate { gens, m, cell_cap }) => {
            let (g, _) = load_generators(gens)?;
            let hs = enumerate_inv(&g, *m, *cell_cap)?;
            Outcome::ok(json!({ "count": hs.len(), "sets": to_value(&hs)? }))
        }
        Command::Galois(GaloisCmd::Pol { h, max_arity }) => {
            let hs = h.iter().map(|p| load_qset(p)).collect::<Result<Vec<_>, _>>()?;
            let k = hs[0].k();
            Outcome::ok(function_set_to_value(&pol_bounded(k, &hs, *max_arity, cap)?))
        }
        Command::Galois(GaloisCmd::Closure { gens, h }) => {
            let (g, _) = load_generators(gens)?;
            Outcome::ok(to_value(&invariant_closure(&g, &load_qset(h)?)?)?)
        }
        Command::Decomp(DecompCmd::Apply { h, family }) => {
            let h = load_qset(h)?;
            let fam = parse_family(h.m(), family)?;
            let (parts, joined) = decomposition_apply(&h, &fam)?;
            Outcome::ok(json!({
                "family": to_value(&fam.sets())?,
                "parts": to_value(&parts)?,
                "decomposition": to_value(&joined)?,
                "decomposable": joined == h,
            }))
        }
        Command::Decomp(DecompCmd::Check { h, family }) => {
            let h = load_qset(h)?;
            let holds = is_decomposable(&h, &parse_family(h.m(), family)?)?;
            Outcome::verdict(json!({ "decomposable": holds }), holds)
        }
        Command::Decomp(DecompCmd::Families { h, n, b }) => {
            let h = load_qset(h)?;
            Outcome::ok(to_value(&index_families(&h, *n, b.as_deref())?)?)
        }
        Command::Delta { gens, cond, n } => {
            let (g, _) = load_generators(gens)?;
            let r = match cond {
                Cond::S => delta_s(&g, *n, cap)?,
                Cond::Partial => delta_partial(&g, cap)?,
                Cond::Two => delta_2(&g, cap)?,
            };
            let holds = r.holds;
            Outcome::verdict(to_value(&r)?, holds)
        }
        Command::Post(PostCmd::Identify { gens, bound }) => {
            let (g, _) = load_generators(gens)?;
            Outcome::ok(to_value(&identify_generated(&g, *bound)?)?)
        }
        Command::Post(PostCmd::Pi { gens, bound }) => {
            let (g, _) = load_generators(gens)?;
            let fam = pi_family(&g, *bound)?;
            let constant = pi_zero(&fam).ok();
            Outcome::ok(json!({ "family": to_value(&fam)?, "pi0": to_value(&constant)? }))
        }
        Command::Chi(ChiCmd::Compute { gens, bound }) => {
            let (g, _) = load_generators(gens)?;
            Outcome::ok(to_value(&characteristic(&g, *bound)?)?)
        }
        Command::Chi(ChiCmd::Compare { gens, other, bound }) => {
            let (a, _) = load_generators(gens)?;
            let (b, _) = load_generators(other)?;
            let equal = chi_equal(&characteristic(&a, *bound)?, &characteristic(&b, *bound)?)?;
            Outcome::verdict(json!({ "equal": equal }), equal)
        }
        Command::Chi(ChiCmd::Classify { gens, bound }) => {
            let (g, _) = load_generators(gens)?;
            let chi = characteristic(&g, *bound)?;
            Outcome::ok(json!({ "case": classify_case(&chi)?, "characteristic": to_value(&chi)? }))
        }
        Command::Verify(v) => verify(v, cap)?,
        Command::Catalog { k } => {
            let entries: Vec<_> = builtin_catalog(*k)?.iter().map(|e| e.summary()).collect();
            Outcome::ok(to_value(&entries)?)
        }
    })
}

fn verify(cmd: &VerifyCmd, cap: usize) -> Result<Outcome, Error> {
    match cmd {
        VerifyCmd::Theorem { which, gens, m, scope } => {
            let (g, name) = load_generators(gens)?;
            Outcome::report(verify_decomposition_theorem((*which).into(), &g, &name, *m, scope.scope()?, cap)?)
        }
        VerifyCmd::Main { entry, m, scope } => Outcome::report(verify_main(&lookup(entry)?, *m, scope.scope()?, cap)?),
        VerifyCmd::Lemmas { k, seed, samples } => {
            let mut catalog = Vec::new();
            for &k in k {
                catalog.extend(builtin_catalog(k)?);
            }
            Outcome::report(verify_lemma_suite(&catalog, *seed, *samples))
        }
        VerifyCmd::ChiInjectivity { k, bound } => {
            Outcome::report(chi_injectivity_check(&builtin_catalog(*k)?, *bound)?)
        }
        VerifyCmd::Oracle { gens, m, scope } => {
            let (g, name) = load_generators(gens)?;
            Outcome::report(verify_oracle_agreement(&g, &name, *m, scope.scope()?, cap)?)
        }
    }
}

fn emit(out: Option<&PathBuf>, value: &Value) -> Result<(), Error> {
    let text = io::to_json(value)?;
    match out {
        Some(path) => io::write_text(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Input(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|o| emit(cli.out.as_ref(), &o.value).map(|()| o.holds));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Premise(_)) => {
            eprintln!("finclone: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("finclone: {e}");
            ExitCode::from(2)
        }
    }
}
