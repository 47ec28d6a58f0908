use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use posetmod::blocks::{barcode_1d, enumerate_blocks, gbcd_vector, tame_cover, PiecePolicy};
use posetmod::cmod::{random_module_over, CModule};
use posetmod::io::{matrix_to_rows, Document};
use posetmod::ip::{check_ipc, construct_ip_persistence, obstruction_scan, IpVerdict, WipStructure};
use posetmod::linalg::Field;
use posetmod::local::{compute, LocalConfig, LocalStructure};
use posetmod::poset::{to_dot, PosetCategory, Subcategory};
use posetmod::report::{analyze, verdict_row};
use posetmod::simplicial::{gallery_d7, homology_functor, ipc_presentation};
use posetmod::{gallery, Error};

#[derive(Parser)]
#[command(name = "posetmod", version, about = "Local structure, blocks and inner products of poset modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// JSON input file, `-` for stdin.
    file: PathBuf,
    #[arg(long, default_value_t = LocalConfig::default().max_iters)]
    max_iters: usize,
    /// Member cap per multi-flag.
    #[arg(long, default_value_t = LocalConfig::default().flag_cap)]
    max_flag: usize,
    /// Also write a Graphviz rendering here.
    #[arg(long)]
    dot: Option<PathBuf>,
}

impl Input {
    fn config(&self) -> LocalConfig {
        LocalConfig { max_iters: self.max_iters, flag_cap: self.max_flag }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check functoriality.
    Validate(Input),
    /// Full report.
    Analyze(Input),
    /// Blocks with their graded pieces.
    Blocks(Input),
    /// Block dimension per support.
    Gbcd(Input),
    /// Tame cover against the Grams in the file.
    TameCover(Input),
    /// Intervals of a module over a chain.
    Barcode(Input),
    /// Check the Grams in the file.
    IpCheck(Input),
    /// Build Grams for a persistence module.
    IpConstruct(Input),
    /// Holonomy scan of the blocks.
    Obstruction(Input),
    /// Homology module of a complex diagram.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Cycles and boundaries of an injective complex diagram.
    Present {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Print a named example.
    Gallery {
        name: String,
        /// For `d7-geometric`, print the complex diagram instead of its homology.
        #[arg(long)]
        diagram: bool,
    },
    /// Print a random module on a grid such as `3x3`, `2x2x2` or `5`.
    Random {
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Prime for a finite field; rational when absent.
        #[arg(long)]
        prime: Option<u64>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::PathConflict { .. } | Error::DiagramConflict(..) => 2,
            Error::NotStabilized | Error::FlagCapExceeded { .. } => 3,
            Error::NoVerifiedIpc(_) => 4,
            _ => 1,
        };
        Failure { code, message: e.to_string(), report: None }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn read_doc(input: &Input) -> Result<Document, Failure> {
    let mut text = String::new();
    let res = if input.file.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(&input.file).map(|t| text = t)
    };
    res.map_err(|e| Failure { code: 1, message: format!("{}: {e}", input.file.display()), report: None })?;
    Ok(Document::parse(&text)?)
}

fn read_module(input: &Input) -> Result<(CModule, Option<WipStructure>), Failure> {
    let doc = read_doc(input)?;
    let m = doc.module()?;
    m.validate()?;
    let w = doc.wip(&m)?;
    Ok((m, w))
}

fn write_dot(input: &Input, cat: &PosetCategory, highlights: &[(String, Subcategory)]) -> Result<(), Failure> {
    if let Some(path) = &input.dot {
        std::fs::write(path, to_dot(cat, highlights))
            .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()), report: None })?;
    }
    Ok(())
}

fn stable(m: &CModule, input: &Input) -> Result<LocalStructure, Failure> {
    let t = m.validate()?;
    let ls = compute(m, &t, input.config());
    if !ls.is_stabilized() {
        return Err(Failure {
            code: 3,
            message: "local structure did not stabilize".into(),
            report: Some(json!({ "stabilized": false, "trace": ls.trace })),
        });
    }
    Ok(ls)
}

fn no_ipc(message: String, report: Value) -> Failure {
    Failure { code: 4, message, report: Some(report) }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate(input) => {
            let (m, w) = read_module(&input)?;
            write_dot(&input, m.category(), &[])?;
            let cat = m.category();
            let v = json!({
                "valid": true,
                "field": m.field().to_string(),
                "objects": cat.len(),
                "edges": cat.edges().len(),
                "dims": m.dims(),
                "grams": w.is_some(),
            });
            Ok((v, format!("valid module over {} on {} objects", m.field(), cat.len())))
        }
        Command::Analyze(input) => {
            let (m, w) = read_module(&input)?;
            let (r, _) = analyze(&m, input.config(), w.as_ref())?;
            let highlights: Vec<(String, Subcategory)> = r
                .blocks
                .iter()
                .enumerate()
                .map(|(i, b)| Ok((format!("B{i}"), m.category().subcategory_by_names(&b.support)?)))
                .collect::<Result<_, Error>>()?;
            write_dot(&input, m.category(), &highlights)?;
            let summary = r.summary();
            let value = serde_json::to_value(&r).expect("report");
            if !r.stabilization.stabilized {
                return Err(Failure { code: 3, message: summary, report: Some(value) });
            }
            Ok((value, summary))
        }
        Command::Blocks(input) => {
            let (m, _) = read_module(&input)?;
            let ls = stable(&m, &input)?;
            let cat = m.category();
            let blocks = enumerate_blocks(&m, &ls, PiecePolicy::Complement)?;
            let highlights: Vec<_> = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| (format!("B{i}"), b.support().clone()))
                .collect();
            write_dot(&input, cat, &highlights)?;
            let rows: Vec<Value> = blocks
                .iter()
                .map(|b| {
                    let pieces: Vec<Value> = b
                        .elements()
                        .iter()
                        .map(|el| {
                            json!({
                                "object": cat.name(el.object),
                                "member_dim": el.member.dim(),
                                "piece": matrix_to_rows(el.piece.basis()),
                            })
                        })
                        .collect();
                    json!({ "support": b.key(cat), "dim": b.dim(), "pieces": pieces })
                })
                .collect();
            let n = rows.len();
            Ok((json!({ "blocks": rows }), format!("{n} blocks")))
        }
        Command::Gbcd(input) => {
            let (m, _) = read_module(&input)?;
            let ls = stable(&m, &input)?;
            let v = gbcd_vector(&m, &ls)?;
            let entries: Vec<Value> = v.entries.iter().map(|(s, d)| json!({ "support": s, "dim": d })).collect();
            Ok((json!({ "gbcd": entries, "total": v.total() }), format!("total block dim {}", v.total())))
        }
        Command::TameCover(input) => {
            let (m, w) = read_module(&input)?;
            let w = w.ok_or_else(|| no_ipc("tame-cover needs `grams` in the input".into(), json!({ "grams": false })))?;
            let ls = stable(&m, &input)?;
            let t = m.validate()?;
            let verdict = check_ipc(&m, &t, &w)?.verdict;
            if verdict != IpVerdict::Verified {
                let row = verdict_row(&verdict, &m);
                return Err(no_ipc(row.detail.clone(), serde_json::to_value(row).expect("row")));
            }
            let cover = tame_cover(&m, &t, &ls, &w)?;
            let cat = m.category();
            let v = json!({
                "blocks": cover.blocks.iter().map(|b| json!({ "support": b.key(cat), "dim": b.dim() })).collect::<Vec<_>>(),
                "cover_dims": cover.cover.dims(),
                "kernel_dims": cover.kernel_dims,
                "isomorphism": cover.is_isomorphism(),
            });
            let k: usize = cover.kernel_dims.iter().sum();
            Ok((v, format!("tame cover with total kernel dim {k}")))
        }
        Command::Barcode(input) => {
            let (m, _) = read_module(&input)?;
            let b = barcode_1d(&m)?;
            Ok((json!({ "bars": b.bars }), format!("barcode {b}")))
        }
        Command::IpCheck(input) => {
            let (m, w) = read_module(&input)?;
            let w = w.ok_or_else(|| no_ipc("ip-check needs `grams` in the input".into(), json!({ "grams": false })))?;
            let t = m.validate()?;
            let verdict = check_ipc(&m, &t, &w)?.verdict;
            let row = verdict_row(&verdict, &m);
            let value = serde_json::to_value(&row).expect("row");
            if verdict != IpVerdict::Verified {
                return Err(no_ipc(row.detail, value));
            }
            Ok((value, "every edge is a partial isometry".into()))
        }
        Command::IpConstruct(input) => {
            let (m, _) = read_module(&input)?;
            let t = m.validate()?;
            let w = construct_ip_persistence(&m, &t)?;
            let doc = Document::from_module(&m, Some(&w));
            Ok((serde_json::to_value(doc).expect("doc"), "constructed and verified".into()))
        }
        Command::Obstruction(input) => {
            let (m, _) = read_module(&input)?;
            let ls = stable(&m, &input)?;
            let verdict = obstruction_scan(&m, &ls)?.verdict;
            let mut value = serde_json::to_value(verdict_row(&verdict, &m)).expect("row");
            if let IpVerdict::Obstructed { support, operator, .. } = &verdict {
                value["support"] = json!(support);
                value["operator"] = json!(matrix_to_rows(operator));
            }
            Ok((value, verdict.describe(m.category())))
        }
        Command::Homology { input, degree } => {
            let doc = read_doc(&input)?;
            let field = doc.field.to_field()?;
            let m = homology_functor(&doc.diagram()?, degree, field)?;
            write_dot(&input, m.category(), &[])?;
            let out = serde_json::to_value(Document::from_module(&m, None)).expect("doc");
            Ok((out, format!("H_{degree} dims {:?}", m.dims())))
        }
        Command::Present { input, degree } => {
            let doc = read_doc(&input)?;
            let field = doc.field.to_field()?;
            let p = ipc_presentation(&doc.diagram()?, degree, field)?;
            let out = json!({
                "cycles": Document::from_module(&p.cycles, Some(&p.cycle_grams)),
                "boundaries": Document::from_module(&p.boundaries, Some(&p.boundary_grams)),
                "inclusion": p.inclusion.iter().map(matrix_to_rows).collect::<Vec<_>>(),
                "cokernel_dims": p.cokernel_dims,
            });
            Ok((out, format!("cokernel dims {:?}", p.cokernel_dims)))
        }
        Command::Gallery { name, diagram } => {
            if diagram {
                if name != "d7-geometric" {
                    return Err(Failure { code: 1, message: format!("`{name}` has no diagram"), report: None });
                }
                let doc = Document::from_diagram(&gallery_d7(), Field::Rational);
                return Ok((serde_json::to_value(doc).expect("doc"), "complex diagram".into()));
            }
            let m = gallery::by_name(&name)?;
            let doc = Document::from_module(&m, None);
            Ok((serde_json::to_value(doc).expect("doc"), format!("gallery {name}")))
        }
        Command::Random { shape, seed, max_dim, prime } => {
            let dims: Vec<usize> = shape
                .split('x')
                .map(|s| s.trim().parse::<usize>().ok().filter(|&n| n > 0))
                .collect::<Option<_>>()
                .ok_or_else(|| Failure { code: 1, message: format!("bad shape `{shape}`"), report: None })?;
            let field = match prime {
                Some(p) => Field::prime(p)?,
                None => Field::Rational,
            };
            let cat = if dims.len() == 1 { PosetCategory::chain(dims[0]) } else { PosetCategory::grid(&dims) };
            let m = random_module_over(&cat, field, max_dim, seed);
            let doc = Document::from_module(&m, None);
            Ok((serde_json::to_value(doc).expect("doc"), format!("random {shape} module, seed {seed}")))
        }
    }
}

/// Ignores a closed stdout.
fn emit(value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("json");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, summary)) => {
            emit(&value);
            eprintln!("{}", summary.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            let value = f.report.unwrap_or_else(|| json!({ "error": f.message }));
            emit(&value);
            eprintln!("error: {}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}
