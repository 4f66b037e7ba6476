use std::fs;
use std::path::{Path, PathBuf};

use suebk::construct::{plan_type1, plan_type2, Generator, PlanFile, PlacementPlan};
use suebk::frobenius::SplitPolicy;
use suebk::order::{render_diagram, DiagramFormat};
use suebk::state_file::StateSetFile;
use suebk::verify::{check_unextendible, Verdict};
use suebk::weighing::{
    exact_gram_is_scalar, parse_records, record_text, search, validate, Catalog, SearchBudget,
    SearchOutcome, WeighingMatrix,
};
use suebk::{Coord, Error, OrderedGrid, Tolerance};

use crate::{CatalogCommand, Cli, Command, Format, GenerateArgs, OrderArgs, Recipe, VerifyArgs, WeighingCommand};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::IngredientMissing(_) => 3,
            Error::SelfCheck(_) | Error::Computation(_) => 1,
            Error::Domain(_)
            | Error::NotRepresentable { .. }
            | Error::UnsupportedParameters(_)
            | Error::PlanInvalid { .. }
            | Error::Parse(_)
            | Error::Io(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    invalid(format!("{}: {e}", path.display()))
}

/// `N` or `a..b` (inclusive).
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a count: {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => num(s).map(|n| (n, n)),
    }
}

/// `i,j`.
pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `i,j`, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a count: {t:?}"));
    Ok((num(a)?, num(b)?))
}

pub fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = Tolerance::new(cli.tol)?;
    match cli.command {
        Command::Generate(args) => generate(args, tol),
        Command::Verify(args) => verify(args, tol),
        Command::Weighing { command } => weighing(command, tol),
        Command::Order(args) => order(args),
    }
}

fn load_catalog(extra: Option<&Path>) -> Result<Catalog, Failure> {
    let mut catalog = Catalog::builtin();
    if let Some(path) = extra {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        catalog.merge(Catalog::parse(&text)?);
    }
    Ok(catalog)
}

fn write_set(gen: &Generator, out_dir: &Path, plan: &PlacementPlan, a: &WeighingMatrix, b: &WeighingMatrix) -> Result<(), Failure> {
    let set = gen.build_checked(plan, a, b)?;
    let file = StateSetFile::from_set(&set);
    let path = out_dir.join(format!(
        "suebk_d{}_p{}_k{}_N{}.json",
        set.d(),
        set.dprime(),
        set.k(),
        set.len()
    ));
    fs::write(&path, file.to_text()).map_err(|e| io_failure(&path, e))?;
    println!(
        "{}\tN = {}\t{}\t{} + {}\tunextendible",
        path.display(),
        set.len(),
        file.metadata.construction,
        a.label(),
        b.label()
    );
    Ok(())
}

fn generate(args: GenerateArgs, tol: Tolerance) -> Result<u8, Failure> {
    let mut gen = Generator {
        catalog: load_catalog(args.catalog.as_deref())?,
        tol,
        ..Generator::default()
    };
    if let Some(nodes) = args.budget {
        gen.budget = SearchBudget::nodes(nodes);
    }
    if let Some((s, t)) = args.split {
        gen.policy = SplitPolicy::Fixed {
            a_count: s as u64,
            b_count: t as u64,
        };
    }
    fs::create_dir_all(&args.out_dir).map_err(|e| io_failure(&args.out_dir, e))?;

    if let Some(path) = &args.plan {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let mut file = PlanFile::parse(&text)?;
        if let Some((s, t)) = args.split {
            file.blocks = None;
            file.split = Some((s as u64, t as u64));
        }
        let (plan, a, b) = file.resolve(&gen.catalog)?;
        write_set(&gen, &args.out_dir, &plan, &a, &b)?;
        return Ok(0);
    }

    let (d, dprime, k) = match (args.d, args.dprime, args.k) {
        (Some(d), Some(p), Some(k)) => (d, p, k),
        _ => return Err(invalid("-d, -p and -k are required without --plan")),
    };
    let (lo, hi) = args.cardinality.ok_or_else(|| invalid("-N is required without --plan"))?;
    if args.m1.is_some() && args.recipe != Recipe::Two {
        return Err(invalid("--m1/--m2 need --type 2"));
    }
    for n in lo..=hi {
        let (plan, a, b) = match args.recipe {
            Recipe::Auto => gen.plan(d, dprime, k, n)?,
            Recipe::One => {
                let (a, b) = gen.ingredients(k)?;
                (plan_type1(d, dprime, k, &a, &b, n, gen.policy)?, a, b)
            }
            Recipe::Two => {
                let (a, b) = gen.ingredients(k)?;
                let (m1, m2) = match (args.m1, args.m2) {
                    (Some(m1), Some(m2)) => (m1, m2),
                    _ => Generator::type2_splits(d, dprime, k, b.order(), n)
                        .first()
                        .copied()
                        .ok_or_else(|| {
                            Failure::from(Error::UnsupportedParameters(format!(
                                "no Type 2 split (m1, m2) admits N = {n} in C^{d} x C^{dprime} with k = {k}"
                            )))
                        })?,
                };
                (plan_type2(d, dprime, k, &a, &b, m1, m2, n, gen.policy)?, a, b)
            }
        };
        write_set(&gen, &args.out_dir, &plan, &a, &b)?;
    }
    Ok(0)
}

fn verify(args: VerifyArgs, tol: Tolerance) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.file).map_err(|e| io_failure(&args.file, e))?;
    let file = StateSetFile::parse(&text)?;
    let set = file.to_set(args.k)?;
    let report = check_unextendible(&set, set.k(), tol)?;
    if args.json {
        println!("{:#}", report.to_json());
    } else {
        println!("{report}");
    }
    Ok(match report.verdict {
        Verdict::Unextendible => 0,
        Verdict::Extendible { .. } | Verdict::Invalid { .. } => 1,
        Verdict::Undecided { .. } => 3,
    })
}

fn weighing(command: WeighingCommand, tol: Tolerance) -> Result<u8, Failure> {
    match command {
        WeighingCommand::Validate { file } => {
            let text = fs::read_to_string(&file).map_err(|e| io_failure(&file, e))?;
            let records = parse_records(&text)?;
            if records.is_empty() {
                return Err(invalid(format!("{}: no records", file.display())));
            }
            let mut all_ok = true;
            for rec in &records {
                let report = validate(&rec.matrix, tol);
                let exact = exact_gram_is_scalar(&rec.matrix);
                let ok = report.valid && report.weight == Some(rec.weight) && exact != Some(false);
                all_ok &= ok;
                let exact = match exact {
                    Some(true) => "exact check passed",
                    Some(false) => "exact check failed",
                    None => "no exact check",
                };
                println!(
                    "line {}: W({},{},{}) {} (weight {}, max deviation {:e}, {exact})",
                    rec.line,
                    rec.matrix.root_order(),
                    rec.weight,
                    rec.matrix.order(),
                    if ok { "valid" } else { "invalid" },
                    report.weight.map_or("non-uniform".to_string(), |w| w.to_string()),
                    report.max_deviation,
                );
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        WeighingCommand::Search {
            n,
            k,
            a,
            budget,
            exhaustive,
            catalog,
        } => {
            let budget = match (budget, exhaustive) {
                (_, true) => SearchBudget::exhaustive(),
                (Some(nodes), false) => SearchBudget::nodes(nodes),
                (None, false) => SearchBudget::default(),
            };
            match search(n, k, a, budget)? {
                SearchOutcome::Found(w) => {
                    print!("{}", record_text(&w));
                    if let Some(path) = catalog {
                        persist(&path, w)?;
                    }
                    Ok(0)
                }
                SearchOutcome::Nonexistent => {
                    println!("nonexistent");
                    Ok(1)
                }
                SearchOutcome::Unknown { nodes } => {
                    println!("unknown (budget exhausted after {nodes} nodes)");
                    Ok(3)
                }
            }
        }
        WeighingCommand::Catalog {
            command: CatalogCommand::List { catalog },
        } => {
            for w in load_catalog(catalog.as_deref())?.iter() {
                println!(
                    "W({},{},{})\t{}",
                    w.root_order(),
                    w.weight(),
                    w.order(),
                    w.label()
                );
            }
            Ok(0)
        }
    }
}

fn persist(path: &PathBuf, w: WeighingMatrix) -> Result<(), Failure> {
    let mut catalog = if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        Catalog::parse(&text)?
    } else {
        Catalog::empty()
    };
    catalog.insert(w);
    fs::write(path, catalog.to_text()).map_err(|e| io_failure(path, e))?;
    Ok(())
}

fn order(args: OrderArgs) -> Result<u8, Failure> {
    let grid = OrderedGrid::new(args.d, args.dprime)?;
    let deleted: Vec<Coord> = args.delete.iter().map(|&(i, j)| Coord::new(i, j)).collect();
    let format = match args.format {
        Format::Csv => DiagramFormat::Csv,
        Format::Ascii => DiagramFormat::Ascii,
    };
    print!("{}", render_diagram(&grid, &deleted, format)?);
    Ok(0)
}
