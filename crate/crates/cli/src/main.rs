use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ghat_cli::suites::{self, SuiteConfig, DEFAULT_RADII, SHIFT_CONJUGATORS};
use ghat_core::baumslag_solitar::BS23;
use ghat_core::completion::{check_laws, invertibility_scan, MultiplicationTable, DEFAULT_CEILING};
use ghat_core::ends::{coset_graph_ball, ends_estimate};
use ghat_core::families::{check_admissible, check_stable, h0_s, h1_derivations, named_family, parse_nodes};
use ghat_core::groups::{load_group, serialize_presentation};
use ghat_core::subgroups::is_commensurable;
use ghat_core::thompson::{
    am_in_conjugate_intersection, generators_commute, verify_conjugation_identity, verify_shift,
};
use ghat_core::{
    Error, FamilyTruncation, FiniteModule, GroupContext, Oracle, Result, SubgroupHandle, TruncatedCompletion,
};

#[derive(Parser)]
#[command(name = "ghat", version, about = "Experiments with truncated completions of discrete groups")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Load a preset or presentation file and describe it.
    Group {
        /// Preset name (sym3, klein4, cyclic(n), zn(k), free(k), bs(m,n), thompson-f) or a file path.
        group: String,
    },
    #[command(subcommand)]
    Subgroup(SubgroupCommand),
    #[command(subcommand)]
    Family(FamilyCommand),
    #[command(subcommand)]
    Completion(CompletionCommand),
    #[command(subcommand)]
    Ends(EndsCommand),
    #[command(subcommand)]
    Thompson(ThompsonCommand),
    #[command(subcommand)]
    Bs(BsCommand),
    /// Run a verification suite.
    Suite {
        /// words, groups, subgroups, families, completion, ends, thompson, bs or all.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per randomized check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum SubgroupCommand {
    /// Decide whether two subgroups are commensurable.
    Commensurable {
        #[arg(long)]
        group: String,
        /// Comma-separated generators of H.
        #[arg(long)]
        h: String,
        /// Comma-separated generators of K.
        #[arg(long)]
        k: String,
        /// Largest index to enumerate.
        #[arg(long, default_value_t = 50)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Admissibility, stability and degree-0/1 invariants of a family.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        /// Module file: header `p dim`, then one matrix per generator.
        #[arg(long)]
        module: Option<String>,
        /// Prime for the trivial one-dimensional module when no file is given.
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    group: String,
    /// Named family: all, whole, trivial-whole, or a group-specific name.
    #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
    family: Option<String>,
    /// Nodes separated by `;`, each a comma-separated generator list.
    #[arg(long)]
    nodes: Option<String>,
}

#[derive(Subcommand)]
enum CompletionCommand {
    /// Enumerate the truncated completion.
    Build(CompletionArgs),
    /// Check the group laws exhaustively.
    Laws(CompletionArgs),
    /// Search an inverse for every element.
    Scan(CompletionArgs),
}

#[derive(Args)]
struct CompletionArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Refuse to enumerate more compatible assignments than this.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Subcommand)]
enum EndsCommand {
    /// Count components outside growing balls of the coset graph.
    Estimate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RADII)]
        radii: Vec<usize>,
    },
    /// Emit one ball of the coset graph.
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Write DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    group: String,
    /// Comma-separated generators of L; empty for the trivial subgroup.
    #[arg(long, default_value = "")]
    l: String,
    /// Generator names spanning the graph; defaults to all generators.
    #[arg(long)]
    gens: Option<String>,
}

#[derive(Subcommand)]
enum ThompsonCommand {
    /// Run the identity grids.
    Verify {
        #[arg(long, default_value = "lemma")]
        suite: String,
        /// Largest index in the conjugation grid.
        #[arg(long, default_value_t = 10)]
        conjugation_max: u32,
        /// Largest index in the commutation grid.
        #[arg(long, default_value_t = 12)]
        commute_max: u32,
        /// Largest n for the shift property.
        #[arg(long, default_value_t = 20)]
        shift_max: u32,
        #[arg(long, default_value_t = 32)]
        m_bound: u32,
    },
}

#[derive(Subcommand)]
enum BsCommand {
    /// Check the family of conjugated cyclic subgroups.
    Verify {
        #[arg(long, default_value = "family")]
        suite: String,
        #[arg(long, default_value = "bs(2,3)")]
        group: String,
        /// Largest power of x searched in each member.
        #[arg(long, default_value_t = 12)]
        bound: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, text, ok)) => {
            let rendered = match cli.format {
                // DOT and other plain payloads go out verbatim.
                Format::Json if value.is_string() => text,
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Text => text,
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(rendered.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type Output = (Value, String, bool);

fn emit(value: impl Serialize, ok: bool) -> Output {
    let value = serde_json::to_value(value).expect("serializable");
    let text = text_table(&value, 0);
    (value, text, ok)
}

/// Indented `key: value` lines.
fn text_table(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() || v.as_array().is_some_and(|a| a.iter().any(|x| x.is_object() || x.is_array())) {
                    out.push_str(&format!("{pad}{k}:\n{}", text_table(v, indent + 1)));
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&format!("{pad}-\n{}", text_table(item, indent + 1)));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn subgroup(ctx: &Arc<GroupContext>, list: &str) -> Result<SubgroupHandle> {
    let gens = list
        .split(',')
        .map(str::trim)
        .filter(|g| !g.is_empty() && *g != "1")
        .map(|g| ctx.parse_word(g))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubgroupHandle::new(ctx, gens))
}

fn family(args: &FamilyArgs) -> Result<FamilyTruncation> {
    let ctx = load_group(&args.group)?;
    match (&args.family, &args.nodes) {
        (Some(name), _) => named_family(&ctx, name),
        (None, Some(nodes)) => FamilyTruncation::new(&ctx, parse_nodes(&ctx, nodes)?),
        (None, None) => Err(Error::Precondition("need --family or --nodes".into())),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Group { group } => {
            let ctx = load_group(group)?;
            let order = ctx.elements().map(|e| e.len());
            let abelian = ctx.presentation.abelian_invariants().ok();
            Ok(emit(
                json!({
                    "name": ctx.name,
                    "generators": ctx.names(),
                    "relators": ctx.presentation.relators.iter().map(|r| ctx.show(r)).collect::<Vec<_>>(),
                    "oracle": ctx.oracle.to_string(),
                    "order": order,
                    "abelian_invariants": abelian,
                    "presentation": serialize_presentation(&ctx.presentation, &ctx.oracle),
                }),
                true,
            ))
        }
        Command::Subgroup(SubgroupCommand::Commensurable { group, h, k, bound }) => {
            let ctx = load_group(group)?;
            let r = is_commensurable(&subgroup(&ctx, h)?, &subgroup(&ctx, k)?, *bound)?;
            Ok(emit(r, true))
        }
        Command::Family(FamilyCommand::Check { family: args, module, p }) => {
            let fam = family(args)?;
            let ctx = fam.context().clone();
            let m = match module {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                        line: 0,
                        column: 0,
                        message: e.to_string(),
                    })?;
                    FiniteModule::parse(&ctx, &text)?
                }
                None => FiniteModule::trivial(&ctx, *p, 1)?,
            };
            let admissible = check_admissible(&fam);
            let stable = check_stable(&fam);
            let h0 = h0_s(&m, &fam).map(|(_, r)| r);
            let h1 = h1_derivations(&ctx, &m);
            let ok = admissible.admissible() && h0.as_ref().map_or(true, |r| r.invariant);
            let nodes: Vec<String> = fam.nodes().iter().map(|n| n.describe()).collect();
            Ok(emit(
                json!({
                    "group": ctx.name,
                    "nodes": nodes,
                    "admissibility": admissible,
                    "admissible": admissible.admissible(),
                    "stability": stable,
                    "h0": h0.map_err(|e| e.to_string()),
                    "h1": h1.map_err(|e| e.to_string()),
                }),
                ok,
            ))
        }
        Command::Completion(cmd) => completion(cmd),
        Command::Ends(EndsCommand::Estimate { graph, radii }) => {
            let (l, gens) = graph_inputs(graph)?;
            let report = ends_estimate(&l, &gens, radii)?;
            let text = ghat_core::ends::format_ends(&report);
            let (value, _, _) = emit(&report, true);
            Ok((value, text, true))
        }
        Command::Ends(EndsCommand::Graph { graph, radius, dot }) => {
            let (l, gens) = graph_inputs(graph)?;
            let ball = coset_graph_ball(&l, &gens, *radius)?;
            if *dot {
                let dot = ball.to_dot();
                return Ok((Value::String(dot.clone()), dot, true));
            }
            let ctx = l.context();
            let vertices: Vec<String> = ball.vertices.iter().map(|v| ctx.show(v)).collect();
            Ok(emit(
                json!({
                    "radius": radius,
                    "subgroup": l.describe(),
                    "vertices": vertices,
                    "vertex_depths": ball.depth,
                    "edges": ball.edges,
                    "connected": ball.is_connected(),
                }),
                true,
            ))
        }
        Command::Thompson(ThompsonCommand::Verify { suite, conjugation_max, commute_max, shift_max, m_bound }) => {
            if suite != "lemma" {
                return Err(Error::UnknownSuite(suite.clone()));
            }
            thompson_grids(*conjugation_max, *commute_max, *shift_max, *m_bound)
        }
        Command::Bs(BsCommand::Verify { suite, group, bound }) => {
            if suite != "family" {
                return Err(Error::UnknownSuite(suite.clone()));
            }
            let ctx = load_group(group)?;
            let Oracle::Britton(bs) = ctx.oracle else {
                return Err(Error::Precondition(format!("{group} is not a Baumslag-Solitar preset")));
            };
            let report = suites::family_report(bs, *bound)?;
            let ok = report.pass;
            let mut value = serde_json::to_value(&report).expect("serializable");
            value["group"] = json!(ctx.name);
            value["bound"] = json!(bound);
            if bs == BS23 {
                value["fixture"] = json!(true);
            }
            Ok(emit(value, ok))
        }
        Command::Suite { name, seed, samples } => {
            let report = suites::run_suite(name, &SuiteConfig { seed: *seed, samples: *samples })?;
            let ok = report.ok();
            let value = serde_json::to_value(&report).expect("serializable");
            Ok((value, report.to_text(), ok))
        }
    }
}

fn graph_inputs(args: &GraphArgs) -> Result<(SubgroupHandle, Vec<u32>)> {
    let ctx = load_group(&args.group)?;
    let l = subgroup(&ctx, &args.l)?;
    let gens = match &args.gens {
        None => ctx.search_generators(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .map(|name| {
                ctx.names().iter().position(|n| n == name).map(|i| i as u32).ok_or_else(|| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("unknown generator `{name}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok((l, gens))
}

fn completion(cmd: &CompletionCommand) -> Result<Output> {
    let args = match cmd {
        CompletionCommand::Build(a) | CompletionCommand::Laws(a) | CompletionCommand::Scan(a) => a,
    };
    let fam = Arc::new(family(&args.family)?);
    let ctx = fam.context().clone();
    let tc = TruncatedCompletion::new(fam.clone())?;
    let elements = tc.enumerate(args.ceiling)?;
    match cmd {
        CompletionCommand::Build(_) => {
            let shown: Vec<Vec<String>> = elements
                .iter()
                .map(|f| (0..tc.node_count()).map(|n| ctx.show(tc.representative(f, n))).collect())
                .collect();
            Ok(emit(json!({ "element_count": elements.len(), "nodes": tc.node_count(), "elements": shown }), true))
        }
        CompletionCommand::Laws(_) => {
            let table = MultiplicationTable::build(&tc, elements)?;
            let group_elements = ctx.elements().ok_or(Error::NeedsFinitePresentation)?;
            let stable = check_stable(&fam).stable;
            let laws = check_laws(&tc, &table, &group_elements, stable)?;
            let outcome = |b: Option<bool>| match b {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "unknown",
            };
            let ok = laws.pass();
            Ok(emit(
                json!({
                    "element_count": laws.element_count,
                    "stable": stable,
                    "laws": {
                        "associativity": outcome(Some(laws.associativity)),
                        "identity": outcome(Some(laws.identity)),
                        "homomorphism": outcome(Some(laws.homomorphism)),
                        "conjugation_cocycle": outcome(Some(laws.conjugation_cocycle)),
                        "inverses": outcome(laws.inverses),
                        "inverse_condition": outcome(laws.inverse_condition),
                        "inverse_antihomomorphism": outcome(laws.inverse_antihomomorphism),
                    },
                    "witnesses": laws.failures,
                }),
                ok,
            ))
        }
        CompletionCommand::Scan(_) => {
            let table = MultiplicationTable::build(&tc, elements)?;
            let scan = invertibility_scan(&table);
            let ok = scan.invertible == scan.total;
            Ok(emit(scan, ok))
        }
    }
}

fn thompson_grids(conjugation_max: u32, commute_max: u32, shift_max: u32, m_bound: u32) -> Result<Output> {
    let grid = |max: u32, f: &dyn Fn(u32, u32) -> bool| -> Vec<Vec<Option<bool>>> {
        (0..=max).map(|m| (0..=max).map(|n| (m < n).then(|| f(m, n))).collect()).collect()
    };
    let conjugation = grid(conjugation_max, &verify_conjugation_identity);
    let commutation = grid(commute_max, &generators_commute);
    let f = load_group("thompson-f")?;
    let mut shifts = Vec::new();
    let mut am = Vec::new();
    for g in SHIFT_CONJUGATORS {
        let w = f.parse_word(g)?;
        let r = verify_shift(&w, 0..=shift_max);
        shifts.push(json!({ "g": g, "j": r.j, "threshold": r.threshold, "pass": r.all_pass }));
        am.push(match am_in_conjugate_intersection(&[w], m_bound) {
            Ok(rep) => json!({ "g": g, "m": rep.m, "pass": true }),
            Err(e) => json!({ "g": g, "pass": false, "error": e.to_string() }),
        });
    }
    let all = |g: &[Vec<Option<bool>>]| g.iter().flatten().all(|c| c.unwrap_or(true));
    let ok = all(&conjugation) && all(&commutation) && shifts.iter().chain(&am).all(|v| v["pass"] == json!(true));
    Ok(emit(
        json!({
            "conjugation": conjugation,
            "commutation": commutation,
            "shift": shifts,
            "am_intersection": am,
            "pass": ok,
        }),
        ok,
    ))
}
