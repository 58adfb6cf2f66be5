use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ifg_core::algebra::laws::{check_law, law, laws, Law};
use ifg_core::algebra::{cyls_of, AlgebraContext, AlgebraError, Element, DEFAULT_CAP, DEFAULT_TERM_DEPTH};
use ifg_core::finlat::{embed_monadic_kleene, FinAlgebra, FinError};
use ifg_core::games::{has_winning_strategy, Game, GameError};
use ifg_core::model::{ModelError, Space, Structure, Team, TeamSet};
use ifg_core::par::Exec;
use ifg_core::selftest;
use ifg_core::syntax::Formula;
use ifg_core::trump::{meaning, satisfies, truth_value, Sign, TrumpError};

#[derive(Parser)]
#[command(name = "ifg", version, about = "Independence-friendly logic over finite structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArgs {
    /// Structure file.
    #[arg(short = 's', long = "structure")]
    structure: PathBuf,
    #[arg(short = 'f', long = "formula")]
    formula: String,
    /// Number of variables.
    #[arg(short = 'n', long = "nvars")]
    nvars: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Does the team satisfy the formula, positively and negatively?
    Eval {
        #[command(flatten)]
        f: FormulaArgs,
        /// Comma-separated valuations; all valuations when omitted.
        #[arg(long)]
        team: Option<String>,
    },
    /// Truth value of a sentence.
    Truth {
        #[command(flatten)]
        f: FormulaArgs,
    },
    /// Winning strategy for one player of the semantic game.
    Game {
        #[command(flatten)]
        f: FormulaArgs,
        #[arg(long)]
        team: Option<String>,
        /// Player 1 verifies at the root, player 0 falsifies.
        #[arg(long, default_value_t = 1)]
        player: u8,
    },
    /// Trumps and cotrumps as an algebra dump.
    Meaning {
        #[command(flatten)]
        f: FormulaArgs,
    },
    /// The algebra generated by the atomic meanings of a structure.
    AlgebraGen {
        #[arg(short = 's', long = "structure")]
        structure: PathBuf,
        #[arg(short = 'n', long = "nvars")]
        nvars: usize,
        /// Term depth for the atomic seeds.
        #[arg(long, default_value_t = DEFAULT_TERM_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Check algebraic laws over a dump, a generated algebra or random rooted elements.
    Laws {
        /// Algebra dump to check.
        dump: Option<PathBuf>,
        #[arg(short = 's', long = "structure")]
        structure: Option<PathBuf>,
        #[arg(short = 'n', long = "nvars")]
        nvars: Option<usize>,
        /// Law id; every law when omitted.
        #[arg(long)]
        law: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TERM_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Check this many random rooted elements instead of the generated algebra.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List law ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Finite monadic algebras.
    Monadic {
        #[command(subcommand)]
        action: Monadic,
    },
    /// Embed a monadic Kleene algebra into a rooted algebra of dimension one.
    Embed { file: PathBuf },
    /// Recompute the worked examples.
    Selftest,
}

#[derive(Subcommand)]
enum Monadic {
    /// Quantifier laws, type, range facts and variety markers
    Classify { file: PathBuf },
    /// Congruence lattice, simplicity and subdirect irreducibility
    Congruences { file: PathBuf },
}

/// What went wrong, sorted by exit code.
enum Failure {
    Input(String),
    Guard(String),
    Expectation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Guard(_) => 2,
            Failure::Expectation(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::TooManyValuations { .. } | ModelError::TooManyVariables(_) => Failure::Guard(e.to_string()),
            _ => input(e),
        }
    }
}

impl From<TrumpError> for Failure {
    fn from(e: TrumpError) -> Self {
        match e {
            TrumpError::Model(m) => m.into(),
            TrumpError::TooLarge { .. } => Failure::Guard(e.to_string()),
            _ => input(e),
        }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Model(m) => m.into(),
            GameError::TooLarge { .. } => Failure::Guard(e.to_string()),
            _ => input(e),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Model(m) => m.into(),
            AlgebraError::TooLarge { .. } | AlgebraError::CapExceeded { .. } => Failure::Guard(e.to_string()),
            _ => input(e),
        }
    }
}

impl From<FinError> for Failure {
    fn from(e: FinError) -> Self {
        match e {
            FinError::TooLarge { .. } => Failure::Guard(e.to_string()),
            FinError::Verification(_) => Failure::Expectation(e.to_string()),
            _ => input(e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(f: &FormulaArgs) -> Result<(Structure, Formula), Failure> {
    let s = Structure::parse(&read(&f.structure)?)?;
    let phi = Formula::parse(&f.formula, f.nvars).map_err(input)?;
    Ok((s, phi))
}

fn parse_team(structure: &Structure, nvars: usize, text: Option<&str>) -> Result<Team, Failure> {
    let space = Space::new(structure.size(), nvars)?;
    match text {
        None => Ok(space.full_team()),
        Some(t) if t.trim().is_empty() => Ok(Team::EMPTY),
        Some(t) => Ok(space.parse_team(t)?),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let exec = Exec::default();
    let mut out = String::new();
    match cli.command {
        Command::Eval { f, team } => {
            let (s, phi) = load(&f)?;
            let v = parse_team(&s, f.nvars, team.as_deref())?;
            let plus = satisfies(&s, &phi, v, Sign::Plus)?;
            let minus = satisfies(&s, &phi, v, Sign::Minus)?;
            writeln!(out, "+ {} / - {}", yes(plus), yes(minus)).unwrap();
        }
        Command::Truth { f } => {
            let (s, phi) = load(&f)?;
            writeln!(out, "{}", truth_value(&s, &phi)?).unwrap();
        }
        Command::Game { f, team, player } => {
            let (s, phi) = load(&f)?;
            let v = parse_team(&s, f.nvars, team.as_deref())?;
            match has_winning_strategy(&s, &phi, v, player)? {
                (true, Some(strategy)) => {
                    let game = Game::new(&s, &phi)?;
                    writeln!(out, "player {player} wins").unwrap();
                    out.push_str(&strategy.render(&game));
                }
                _ => writeln!(out, "player {player} has no winning strategy").unwrap(),
            }
        }
        Command::Meaning { f } => {
            let (s, phi) = load(&f)?;
            let m = meaning(&s, &phi)?;
            let ctx = AlgebraContext::from_space(Space::new(s.size(), f.nvars)?)?;
            out.push_str(&ctx.dump(&[m.to_element()]));
        }
        Command::AlgebraGen { structure, nvars, depth, cap } => {
            let s = Structure::parse(&read(&structure)?)?;
            let (ctx, elements) = cyls_of(&s, nvars, depth, cap, exec)?;
            out.push_str(&ctx.dump(&elements));
        }
        Command::Laws { dump, structure, nvars, law: id, depth, cap, sample, seed, list } => {
            if list {
                for l in laws() {
                    writeln!(out, "{:24} {}", l.id, l.summary).unwrap();
                }
                return Ok(out);
            }
            let selected: Vec<Law> = match &id {
                Some(id) => vec![law(id).ok_or_else(|| input(format!("unknown law {id}")))?],
                None => laws(),
            };
            let (ctx, elements) = law_elements(dump, structure, nvars, depth, cap, sample, seed, exec)?;
            let mut bad = 0;
            for l in &selected {
                let r = check_law(&ctx, &elements, l, exec);
                bad += usize::from(!r.as_expected());
                writeln!(out, "{r}").unwrap();
            }
            if bad > 0 {
                print!("{out}");
                return Err(Failure::Expectation(format!("{bad} law(s) not as expected")));
            }
        }
        Command::Monadic { action } => match action {
            Monadic::Classify { file } => {
                let a = FinAlgebra::parse(&read(&file)?)?;
                out.push_str(&classify(&a)?);
            }
            Monadic::Congruences { file } => {
                let a = FinAlgebra::parse(&read(&file)?)?;
                let cs = a.congruences_with(exec)?;
                writeln!(out, "{} congruences", cs.len()).unwrap();
                for c in &cs {
                    writeln!(out, "{}", c.render(&a)).unwrap();
                }
                writeln!(out, "simple {}", a.is_simple()?).unwrap();
                writeln!(out, "subdirectly irreducible {}", a.is_subdirectly_irreducible()?).unwrap();
            }
        },
        Command::Embed { file } => {
            let a = FinAlgebra::parse(&read(&file)?)?;
            let e = embed_monadic_kleene(&a)?;
            out.push_str(&e.render(&a));
        }
        Command::Selftest => {
            let entries = selftest::run(exec);
            out.push_str(&selftest::render(&entries));
            if entries.iter().any(|e| e.result.is_err()) {
                print!("{out}");
                return Err(Failure::Expectation("selftest failed".into()));
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn law_elements(
    dump: Option<PathBuf>,
    structure: Option<PathBuf>,
    nvars: Option<usize>,
    depth: usize,
    cap: usize,
    sample: Option<usize>,
    seed: u64,
    exec: Exec,
) -> Result<(AlgebraContext, Vec<Element>), Failure> {
    if let Some(path) = dump {
        return Ok(AlgebraContext::parse_dump(&read(&path)?)?);
    }
    let structure = structure.ok_or_else(|| input("need a dump file or -s"))?;
    let nvars = nvars.ok_or_else(|| input("need -n"))?;
    let s = Structure::parse(&read(&structure)?)?;
    match sample {
        None => Ok(cyls_of(&s, nvars, depth, cap, exec)?),
        Some(k) => {
            let ctx = AlgebraContext::from_space(Space::new(s.size(), nvars)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let elements = (0..k).map(|_| random_rooted(&ctx, &mut rng)).collect();
            Ok((ctx, elements))
        }
    }
}

fn random_rooted(ctx: &AlgebraContext, rng: &mut impl Rng) -> Element {
    let teams = 1u64 << ctx.count();
    let mut side = || {
        let mut s = TeamSet::bottom(ctx.count());
        for t in 1..teams {
            if rng.gen_bool(0.5) {
                s.insert(Team(t));
            }
        }
        s
    };
    let plus = side();
    Element::new(plus, side())
}

fn classify(a: &FinAlgebra) -> Result<String, Failure> {
    let mut out = String::new();
    writeln!(out, "size {}", a.size()).unwrap();
    writeln!(out, "kleene {}", a.is_kleene()).unwrap();
    writeln!(out, "boolean {}", a.is_boolean()).unwrap();
    let r = a.check_quantifier()?;
    write!(out, "{r}").unwrap();
    writeln!(out, "quantifier {}", r.is_quantifier()).unwrap();
    let ty = a.classify_quantifier_type()?;
    let detail = match ty {
        ifg_core::finlat::QuantifierType::Type1 { a: c } => format!(" a={}", a.name(c)),
        ifg_core::finlat::QuantifierType::Type2 { a: x, b: y } => format!(" a={} b={}", a.name(x), a.name(y)),
        _ => String::new(),
    };
    writeln!(out, "shape {}{detail}", ty.label()).unwrap();
    let m = a.check_variety_markers()?;
    writeln!(out, "kleene-range {}", m.kleene_range).unwrap();
    writeln!(out, "boolean-range {}", m.boolean_range).unwrap();
    let witness = m.fix_witness.map(|x| format!(" (fails at {})", a.name(x))).unwrap_or_default();
    writeln!(out, "fix-marker {}{witness}", m.fix_marker).unwrap();
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let msg = match &f {
                Failure::Input(m) | Failure::Guard(m) | Failure::Expectation(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
