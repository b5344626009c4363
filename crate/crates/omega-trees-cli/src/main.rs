//! `omega-trees`: command-line front end over JSON tree, automaton and
//! order files.
//!
//! Results are single-line JSON on stdout (DOT when `--dot` is given);
//! errors are JSON objects `{"code", "message"}` on stderr. Exit status 1
//! means malformed input, 2 a violated operation contract (for example
//! requesting a splitting witness on a zero-measure cone). Outputs are
//! byte-identical across runs for the same inputs.

mod builtins;
mod dot;
mod formats;

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use omega_trees::cbmeasure::{self, CbError};
use omega_trees::kborder::{self, KbError};
use omega_trees::linorders::{self, OrderError};
use omega_trees::seqcode::{self, FinSeq, SeqError};
use omega_trees::space::{self, SpaceError, SumSide};
use omega_trees::trees::{TreeError, TreeSpec};

use formats::{AutomatonFile, OrderFile, PointFile, TreeFile};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit status 1.
    Input(String),
    /// Violated operation contract: exit status 2.
    Domain { code: String, message: String },
}

impl CliError {
    pub fn input(message: impl Into<String>) -> CliError {
        CliError::Input(message.into())
    }

    pub fn domain(code: &str, message: impl Into<String>) -> CliError {
        CliError::Domain {
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<SeqError> for CliError {
    fn from(e: SeqError) -> Self {
        let code = match e {
            SeqError::NotASequenceCode => "not-a-sequence-code",
            SeqError::CodeOverflow => "code-overflow",
            SeqError::MalformedPadding => "malformed-padding",
            SeqError::OracleError => "oracle",
        };
        CliError::domain(code, e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        let code = match &e {
            TreeError::EmptyTree => "empty-tree",
            TreeError::NotPrefixClosed(_) => "not-prefix-closed",
            TreeError::PrefixClosureViolation(_) => "prefix-closure-violation",
            TreeError::OracleError => "oracle",
            TreeError::NonFiniteTree => "non-finite-tree",
            TreeError::InvalidAutomaton(_) => "invalid-automaton",
            TreeError::Seq(_) => "coding",
        };
        CliError::domain(code, e.to_string())
    }
}

impl From<KbError> for CliError {
    fn from(e: KbError) -> Self {
        let code = match &e {
            KbError::NonFiniteTree => "non-finite-tree",
            KbError::StreamExhausted => "stream-exhausted",
            KbError::NotDescending { .. } => "not-descending",
            KbError::NotOrderPreserving { .. } => "not-order-preserving",
            KbError::MapUndefined(_) => "map-undefined",
            KbError::ImageOutsideTarget(_) => "image-outside-target",
            KbError::NotInTree(_) => "not-in-tree",
            KbError::Tree(_) => "tree",
            KbError::Seq(_) => "coding",
        };
        CliError::domain(code, e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        let code = match &e {
            SpaceError::InvalidPoint => "invalid-point",
            SpaceError::OracleError => "oracle",
            SpaceError::BudgetExceeded => "budget-exceeded",
            SpaceError::Tree(_) => "tree",
            SpaceError::Seq(_) => "coding",
        };
        CliError::domain(code, e.to_string())
    }
}

impl From<CbError> for CliError {
    fn from(e: CbError) -> Self {
        let code = match &e {
            CbError::NotAMember(_) => "not-a-member",
            CbError::NonBinaryAlphabet => "non-binary-alphabet",
            CbError::NoPositiveMeasure => "no-positive-measure",
            CbError::Tree(_) => "tree",
        };
        CliError::domain(code, e.to_string())
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        let code = match &e {
            OrderError::NotALinearOrder => "not-a-linear-order",
            OrderError::NotInField(_) => "not-in-field",
            OrderError::NotFunctional(_) => "not-functional",
            OrderError::FieldTooLarge => "field-too-large",
        };
        CliError::domain(code, e.to_string())
    }
}

/// A comma-separated sequence of naturals; empty for the empty sequence.
#[derive(Clone, Debug)]
struct SeqArg(Vec<u64>);

impl std::str::FromStr for SeqArg {
    type Err = String;

    fn from_str(s: &str) -> Result<SeqArg, String> {
        if s.is_empty() {
            return Ok(SeqArg(Vec::new()));
        }
        s.split(',')
            .map(|part| part.trim().parse::<u64>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()
            .map(SeqArg)
    }
}

impl SeqArg {
    fn into_seq(self) -> FinSeq {
        FinSeq::new(self.0)
    }
}

#[derive(Parser)]
#[command(
    name = "omega-trees",
    version,
    about = "Trees on the naturals: coding, KB order, combinators, exact point spaces, CB decomposition and measure, admissible maps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sequence coding: encode, decode, pairings, zips, branch sections
    Seq {
        #[command(subcommand)]
        cmd: SeqCmd,
    },
    /// Kleene-Brouwer ordering and descent machinery
    Kb {
        #[command(subcommand)]
        cmd: KbCmd,
    },
    /// Tree membership, combinators and exploration
    Tree {
        #[command(subcommand)]
        cmd: TreeCmd,
    },
    /// The ultrametric point space of a tree
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Cantor-Bendixson decomposition and body measure of automaton trees
    Cb {
        #[command(subcommand)]
        cmd: CbCmd,
    },
    /// Admissible and strongly admissible partial maps between orders
    Adm {
        #[command(subcommand)]
        cmd: AdmCmd,
    },
    /// Emit builtin lazy tree families as JSON
    Build {
        #[command(subcommand)]
        cmd: BuildCmd,
    },
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Encode a finite sequence as its code
    Encode {
        #[arg(long)]
        seq: SeqArg,
    },
    /// Decode a code (any natural >= 1) back to its sequence
    Decode {
        #[arg(long)]
        code: u64,
    },
    /// The Cantor pairing p(a,b)
    Pair {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Inverse of the Cantor pairing
    Unpair {
        #[arg(long)]
        p: u64,
    },
    /// The extended pairing on values >= -1
    Pairext {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Inverse of the extended pairing
    Unpairext {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
    },
    /// Zip two sequences through the extended pairing with -1 padding
    Zip {
        #[arg(long)]
        u: SeqArg,
        #[arg(long)]
        v: SeqArg,
    },
    /// Code of the length-n prefix of a branch
    Prefix {
        #[arg(long)]
        branch: String,
        #[arg(long)]
        n: u64,
    },
    /// Diagonal section value: alpha at the code of (i,n)
    Diag {
        #[arg(long)]
        branch: String,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum KbCmd {
    /// Compare two sequences under the KB ordering
    Cmp {
        #[arg(long)]
        u: SeqArg,
        #[arg(long)]
        v: SeqArg,
    },
    /// The KB order of a finite tree, as an order on node codes
    Sort {
        /// Tree file (JSON inline, path, or - for stdin)
        tree: Option<String>,
    },
    /// Search for a strictly descending chain of a comparator order
    Descend {
        /// "usual", "reverse", or an order file
        #[arg(long, default_value = "usual")]
        order: String,
        #[arg(long, default_value_t = 10)]
        budget: u64,
    },
    /// Extract the limit branch of a strictly KB-descending chain
    Limit {
        /// JSON array of sequences (inline, path, or - for stdin)
        chain: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = kborder::DEFAULT_STABILITY_WINDOW)]
        window: usize,
    },
    /// Push a branch prefix through a KB-preserving code map
    Induce {
        /// JSON array of [code, code] pairs (inline, path, or stdin)
        #[arg(long)]
        map: String,
        #[arg(long)]
        tree: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        alpha: SeqArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Extra nodes on which order preservation is checked
        #[arg(long)]
        probe: Vec<SeqArg>,
        #[arg(long, default_value_t = kborder::DEFAULT_STABILITY_WINDOW)]
        window: usize,
    },
}

#[derive(Args)]
struct TwoTrees {
    left: String,
    right: String,
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Membership of a node in a tree
    Member {
        tree: Option<String>,
        #[arg(long)]
        node: SeqArg,
    },
    /// The sum of two trees
    Sum(TwoTrees),
    /// The product of two trees
    Product(TwoTrees),
    /// The tree of attempted binary-tree embeddings
    Att { tree: Option<String> },
    /// The subtree of nodes compatible with a node
    Subtree {
        tree: Option<String>,
        #[arg(long)]
        at: SeqArg,
    },
    /// The shift/closure tree
    Shift { tree: Option<String> },
    /// Explore nodes breadth-first (JSON, or DOT with --dot)
    Show {
        tree: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = builtins::DEFAULT_BOUND)]
        max_label: u64,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Exact distance between two points, up to a query budget
    Dist {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 32)]
        budget: u64,
    },
    /// The standard presentation point of a code
    Presentation {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        s: u64,
    },
    /// The isometry onto the body of the shift/closure tree
    Rho {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
    /// Inverse of rho
    Rhoinv {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 32)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
    /// The product isomorphism
    Prodiso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
    /// Inverse of the product isomorphism
    Prodisoinv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 32)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
    /// The sum embedding of a summand point
    Sumiso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        side: u8,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
    },
}

#[derive(Subcommand)]
enum CbCmd {
    /// The perfect-kernel automaton (DOT with --dot, colored by class)
    Kernel {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long)]
        dot: bool,
    },
    /// Classify the decomposition above a node
    Classify {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value = "")]
        node: SeqArg,
        #[arg(long)]
        dot: bool,
    },
    /// Exact upper-bound iteration for the body measure
    Measure {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value_t = 20)]
        depth: u64,
        /// Also report the full bound sequence
        #[arg(long)]
        full: bool,
    },
    /// Decide positivity of the cone measure above a node
    Positive {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value = "")]
        node: SeqArg,
    },
    /// Two incompatible positive-measure extensions of a node
    Split {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value = "")]
        node: SeqArg,
    },
    /// The binary-tree embedding built from splitting witnesses
    Embed {
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: u64,
    },
    /// Per-state liveness / uncountability / positivity flags
    States {
        #[arg(long)]
        automaton: Option<String>,
    },
}

#[derive(Subcommand)]
enum AdmCmd {
    /// The unique strongly admissible map
    Solve {
        #[arg(long)]
        lin: String,
        #[arg(long)]
        wo: String,
    },
    /// Check admissibility and strong admissibility of a map
    Check {
        #[arg(long)]
        lin: String,
        #[arg(long)]
        wo: String,
        #[arg(long)]
        map: String,
    },
    /// Enumerate all strongly admissible maps by brute force
    Brute {
        #[arg(long)]
        lin: String,
        #[arg(long)]
        wo: String,
    },
    /// Check that a map is an initial similarity
    Similar {
        #[arg(long)]
        o1: String,
        #[arg(long)]
        o2: String,
        #[arg(long)]
        map: String,
    },
    /// The order successor of an element
    Suc {
        #[arg(long)]
        order: String,
        #[arg(long)]
        n: u64,
    },
    /// The rank of an element's initial segment
    Rank {
        #[arg(long)]
        order: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Entrywise-predicate trees
    Elementwise {
        #[arg(long)]
        pred: String,
        #[arg(long)]
        value: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Strictly-descending-tuple trees of an order
    Chain {
        #[arg(long, default_value = "usual")]
        order: String,
        #[arg(long)]
        field: Option<SeqArg>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// The documented toy section tree
    Sg {
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Bar trees over prefix codes
    Bar {
        #[arg(long)]
        pred: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Interleaved unfoldings
    Unfold {
        #[arg(long)]
        pred: String,
        #[arg(long)]
        bound: Option<u64>,
    },
}

/// Reads an argument that may be inline JSON, a file path, `-`/absent for
/// stdin.
fn read_source(arg: Option<&str>) -> Result<String, CliError> {
    match arg {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::input(format!("reading stdin: {e}")))?;
            Ok(buf)
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("reading {path}: {e}"))),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("parsing {what}: {e}")))
}

fn load_tree_file(arg: Option<&str>) -> Result<TreeFile, CliError> {
    parse_json(&read_source(arg)?, "tree file")
}

fn load_tree(arg: Option<&str>) -> Result<TreeSpec, CliError> {
    formats::tree_from_file(&load_tree_file(arg)?)
}

fn load_automaton(arg: Option<&str>) -> Result<omega_trees::trees::Automaton, CliError> {
    let f: AutomatonFile = parse_json(&read_source(arg)?, "automaton file")?;
    formats::automaton_from_file(&f)
}

fn load_point(arg: &str) -> Result<omega_trees::space::Point, CliError> {
    let f: PointFile = parse_json(&read_source(Some(arg))?, "point")?;
    formats::point_from_file(&f)
}

fn load_order(arg: &str) -> Result<linorders::LinOrder, CliError> {
    let f: OrderFile = parse_json(&read_source(Some(arg))?, "order file")?;
    formats::order_from_file(&f)
}

fn load_map(arg: &str) -> Result<linorders::PartialMap, CliError> {
    let pairs: Vec<(u64, u64)> = parse_json(&read_source(Some(arg))?, "map")?;
    formats::map_from_pairs(&pairs)
}

fn load_branch(arg: &str) -> Result<seqcode::BranchOracle, CliError> {
    let f: builtins::BranchFile = parse_json(&read_source(Some(arg))?, "branch")?;
    match builtins::branch(&f)? {
        omega_trees::space::Point::Branch(alpha) => Ok(alpha),
        omega_trees::space::Point::Node(_) => unreachable!(),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let out = match cli.cmd {
        Cmd::Seq { cmd } => run_seq(cmd)?,
        Cmd::Kb { cmd } => run_kb(cmd)?,
        Cmd::Tree { cmd } => run_tree(cmd)?,
        Cmd::Space { cmd } => run_space(cmd)?,
        Cmd::Cb { cmd } => run_cb(cmd)?,
        Cmd::Adm { cmd } => run_adm(cmd)?,
        Cmd::Build { cmd } => run_build(cmd)?,
    };
    Ok(out)
}

fn ext(v: i64) -> Result<seqcode::ExtVal, CliError> {
    seqcode::ExtVal::new(v).ok_or_else(|| CliError::input(format!("{v} is below -1")))
}

fn run_seq(cmd: SeqCmd) -> Result<String, CliError> {
    let value = match cmd {
        SeqCmd::Encode { seq } => {
            json!({"code": seqcode::encode(&seq.into_seq())?.value()})
        }
        SeqCmd::Decode { code } => json!({"seq": seqcode::decode(code)?.as_slice()}),
        SeqCmd::Pair { a, b } => json!({"value": seqcode::checked_pair(a, b)
            .ok_or(SeqError::CodeOverflow)?}),
        SeqCmd::Unpair { p } => {
            let (a, b) = seqcode::unpair(p);
            json!({"a": a, "b": b})
        }
        SeqCmd::Pairext { a, b } => {
            json!({"value": seqcode::pair_ext(ext(a)?, ext(b)?).value()})
        }
        SeqCmd::Unpairext { e } => {
            let (a, b) = seqcode::unpair_ext(ext(e)?);
            json!({"a": a.value(), "b": b.value()})
        }
        SeqCmd::Zip { u, v } => {
            json!({"seq": seqcode::zip_pad(&u.into_seq(), &v.into_seq()).as_slice()})
        }
        SeqCmd::Prefix { branch, n } => {
            let alpha = load_branch(&branch)?;
            json!({"code": seqcode::prefix_code(&alpha, n)?.value()})
        }
        SeqCmd::Diag { branch, i, n } => {
            let alpha = load_branch(&branch)?;
            json!({"value": seqcode::diag_section(&alpha, i, n)?})
        }
    };
    Ok(value.to_string())
}

fn run_kb(cmd: KbCmd) -> Result<String, CliError> {
    let value = match cmd {
        KbCmd::Cmp { u, v } => {
            json!({"leq": kborder::kb_leq(&u.into_seq(), &v.into_seq())})
        }
        KbCmd::Sort { tree } => {
            let order = kborder::kb_order_of(&load_tree(tree.as_deref())?)?;
            serde_json::to_value(formats::order_to_file(&order)).unwrap()
        }
        KbCmd::Descend { order, budget } => {
            let chain = match order.as_str() {
                "usual" => kborder::descending_chain_search(|a, b| a < b, budget),
                "reverse" => kborder::descending_chain_search(|a, b| a > b, budget),
                other => {
                    let ord = load_order(other)?;
                    kborder::descending_chain_search(
                        move |a, b| ord.contains(a) && ord.contains(b) && ord.lt(a, b).unwrap(),
                        budget,
                    )
                }
            };
            json!({ "chain": chain })
        }
        KbCmd::Limit {
            chain,
            depth,
            window,
        } => {
            let raw: Vec<Vec<u64>> = parse_json(&read_source(chain.as_deref())?, "chain")?;
            let stream = raw.into_iter().map(FinSeq::new);
            let branch = kborder::branch_from_kb_descending(stream, depth, window)?;
            json!({"branch": branch.as_slice()})
        }
        KbCmd::Induce {
            map,
            tree,
            target,
            alpha,
            depth,
            probe,
            window,
        } => {
            let pairs: Vec<(u64, u64)> = parse_json(&read_source(Some(&map))?, "code map")?;
            let table: std::collections::BTreeMap<u64, u64> = pairs.into_iter().collect();
            let t = load_tree(Some(&tree))?;
            let s = load_tree(Some(&target))?;
            let probes: Vec<FinSeq> = probe.into_iter().map(SeqArg::into_seq).collect();
            let f = move |c: seqcode::SeqCode| {
                table
                    .get(&c.value())
                    .and_then(|&v| seqcode::SeqCode::new(v).ok())
            };
            let out =
                kborder::kb_induced_map(f, &t, &s, &alpha.into_seq(), depth, &probes, window)?;
            json!({"branch": out.as_slice()})
        }
    };
    Ok(value.to_string())
}

fn run_tree(cmd: TreeCmd) -> Result<String, CliError> {
    let combined =
        |op: &str, args: Vec<TreeFile>, at: Option<Vec<u64>>| -> Result<String, CliError> {
            let file = TreeFile::Derived {
                op: op.into(),
                args,
                at,
            };
            // Validate operands and the combinator shape before emitting.
            formats::tree_from_file(&file)?;
            Ok(serde_json::to_string(&file).unwrap())
        };
    match cmd {
        TreeCmd::Member { tree, node } => {
            let t = load_tree(tree.as_deref())?;
            Ok(json!({"member": t.member(&node.into_seq())?}).to_string())
        }
        TreeCmd::Sum(two) => combined(
            "sum",
            vec![
                load_tree_file(Some(&two.left))?,
                load_tree_file(Some(&two.right))?,
            ],
            None,
        ),
        TreeCmd::Product(two) => combined(
            "product",
            vec![
                load_tree_file(Some(&two.left))?,
                load_tree_file(Some(&two.right))?,
            ],
            None,
        ),
        TreeCmd::Att { tree } => combined("att", vec![load_tree_file(tree.as_deref())?], None),
        TreeCmd::Subtree { tree, at } => combined(
            "subtree",
            vec![load_tree_file(tree.as_deref())?],
            Some(at.0),
        ),
        TreeCmd::Shift { tree } => combined(
            "shift_closure",
            vec![load_tree_file(tree.as_deref())?],
            None,
        ),
        TreeCmd::Show {
            tree,
            depth,
            max_label,
            dot,
        } => {
            let t = load_tree(tree.as_deref())?;
            let nodes = t.explore(depth, max_label)?;
            if dot {
                Ok(dot::tree_dot(&nodes))
            } else {
                let items: Vec<&[u64]> = nodes.iter().map(|u| u.as_slice()).collect();
                Ok(json!({"nodes": items}).to_string())
            }
        }
    }
}

fn run_space(cmd: SpaceCmd) -> Result<String, CliError> {
    let value = match cmd {
        SpaceCmd::Dist { tree, x, y, budget } => {
            let t = load_tree(Some(&tree))?;
            let d = space::dist(&t, &load_point(&x)?, &load_point(&y)?, budget)?;
            formats::dist_to_json(&d)
        }
        SpaceCmd::Presentation { tree, s } => {
            let t = load_tree(Some(&tree))?;
            formats::point_to_json(&space::presentation(&t, s)?, 0)?
        }
        SpaceCmd::Rho { tree, x, depth } => {
            let t = load_tree(Some(&tree))?;
            formats::point_to_json(&space::rho(&t, &load_point(&x)?)?, depth)?
        }
        SpaceCmd::Rhoinv {
            tree,
            y,
            budget,
            depth,
        } => {
            let t = load_tree(Some(&tree))?;
            formats::point_to_json(&space::rho_inv(&t, &load_point(&y)?, budget)?, depth)?
        }
        SpaceCmd::Prodiso {
            left,
            right,
            x,
            y,
            depth,
        } => {
            let t = load_tree(Some(&left))?;
            let s = load_tree(Some(&right))?;
            let z = space::prod_iso(&t, &s, &load_point(&x)?, &load_point(&y)?)?;
            formats::point_to_json(&z, depth)?
        }
        SpaceCmd::Prodisoinv {
            left,
            right,
            z,
            budget,
            depth,
        } => {
            let t = load_tree(Some(&left))?;
            let s = load_tree(Some(&right))?;
            let (x, y) = space::prod_iso_inv(&t, &s, &load_point(&z)?, budget)?;
            json!({
                "x": formats::point_to_json(&x, depth)?,
                "y": formats::point_to_json(&y, depth)?,
            })
        }
        SpaceCmd::Sumiso {
            left,
            right,
            side,
            x,
            depth,
        } => {
            let t = load_tree(Some(&left))?;
            let s = load_tree(Some(&right))?;
            let side = match side {
                0 => SumSide::Left,
                1 => SumSide::Right,
                other => return Err(CliError::input(format!("side must be 0 or 1, got {other}"))),
            };
            formats::point_to_json(&space::sum_iso(&t, &s, side, &load_point(&x)?)?, depth)?
        }
    };
    Ok(value.to_string())
}

fn run_cb(cmd: CbCmd) -> Result<String, CliError> {
    match cmd {
        CbCmd::Kernel { automaton, dot } => {
            let a = load_automaton(automaton.as_deref())?;
            let kernel = cbmeasure::perfect_kernel(&a);
            if dot {
                let classes = cbmeasure::classify_states(&kernel);
                Ok(dot::automaton_dot(&kernel, &classes))
            } else {
                Ok(serde_json::to_string(&formats::automaton_to_file(&kernel)).unwrap())
            }
        }
        CbCmd::Classify {
            automaton,
            node,
            dot,
        } => {
            let a = load_automaton(automaton.as_deref())?;
            if dot {
                let classes = cbmeasure::classify_states(&a);
                return Ok(dot::automaton_dot(&a, &classes));
            }
            let class = cbmeasure::scat_member(&a, &node.into_seq())?;
            Ok(json!({"class": format!("{class:?}")}).to_string())
        }
        CbCmd::Measure {
            automaton,
            depth,
            full,
        } => {
            let a = load_automaton(automaton.as_deref())?;
            let report = cbmeasure::measure_body(&a, depth)?;
            let last = formats::measure_to_json(report.upper_bounds.last().unwrap());
            let value = if full {
                let bounds: Vec<_> = report
                    .upper_bounds
                    .iter()
                    .map(formats::measure_to_json)
                    .collect();
                json!({"upper": last, "positive": report.positive, "bounds": bounds})
            } else {
                json!({"upper": last, "positive": report.positive})
            };
            Ok(value.to_string())
        }
        CbCmd::Positive { automaton, node } => {
            let a = load_automaton(automaton.as_deref())?;
            let positive = cbmeasure::positive_measure(&a, &node.into_seq())?;
            Ok(json!({ "positive": positive }).to_string())
        }
        CbCmd::Split { automaton, node } => {
            let a = load_automaton(automaton.as_deref())?;
            let (v, w) = cbmeasure::splitting_witness(&a, &node.into_seq())?;
            Ok(json!({"v": v.as_slice(), "w": w.as_slice()}).to_string())
        }
        CbCmd::Embed { automaton, depth } => {
            let a = load_automaton(automaton.as_deref())?;
            let map = cbmeasure::binary_embedding(&a, depth)?;
            let items: Vec<_> = map
                .iter()
                .map(|(s, t)| json!([s.as_slice(), t.as_slice()]))
                .collect();
            Ok(json!({ "map": items }).to_string())
        }
        CbCmd::States { automaton } => {
            let a = load_automaton(automaton.as_deref())?;
            let classes = cbmeasure::classify_states(&a);
            let items: Vec<_> = a
                .state_names()
                .iter()
                .zip(&classes)
                .map(|(name, c)| {
                    json!({
                        "state": name,
                        "live": c.live,
                        "uncountable": c.uncountable,
                        "positive": c.positive,
                    })
                })
                .collect();
            Ok(json!({ "states": items }).to_string())
        }
    }
}

fn run_adm(cmd: AdmCmd) -> Result<String, CliError> {
    let value = match cmd {
        AdmCmd::Solve { lin, wo } => {
            let solved =
                linorders::solve_strongly_admissible(&load_order(&lin)?, &load_order(&wo)?);
            json!({"map": formats::map_to_json(&solved)})
        }
        AdmCmd::Check { lin, wo, map } => {
            let lin = load_order(&lin)?;
            let wo = load_order(&wo)?;
            let f = load_map(&map)?;
            let violation = linorders::admissible_violation(&f, &lin, &wo);
            json!({
                "admissible": violation.is_none(),
                "strongly": linorders::strongly_admissible_check(&f, &lin, &wo),
                "violation": violation.map(|v| format!("{v:?}")),
            })
        }
        AdmCmd::Brute { lin, wo } => {
            let found =
                linorders::brute_force_strongly_admissible(&load_order(&lin)?, &load_order(&wo)?)?;
            json!({"maps": found.iter().map(formats::map_to_json).collect::<Vec<_>>()})
        }
        AdmCmd::Similar { o1, o2, map } => {
            let sim = linorders::initial_similarity_check(
                &load_map(&map)?,
                &load_order(&o1)?,
                &load_order(&o2)?,
            );
            json!({ "initialSimilarity": sim })
        }
        AdmCmd::Suc { order, n } => {
            json!({"suc": load_order(&order)?.suc(n)?})
        }
        AdmCmd::Rank { order, n } => {
            json!({"rank": load_order(&order)?.initial_segment_rank(n)?})
        }
    };
    Ok(value.to_string())
}

fn run_build(cmd: BuildCmd) -> Result<String, CliError> {
    let file = match cmd {
        BuildCmd::Elementwise { pred, value, bound } => {
            let name = match pred.as_str() {
                "even" => "elementwise_even",
                "odd" => "elementwise_odd",
                "none" => "elementwise_none",
                "all" => "full",
                "singleton" => "elementwise_singleton",
                "leq" => "elementwise_leq",
                other => return Err(CliError::input(format!("unknown predicate {other:?}"))),
            };
            let mut b = builtins::BuiltinFile::named(name);
            b.bound = bound;
            b.value = value;
            b
        }
        BuildCmd::Chain {
            order,
            field,
            bound,
        } => {
            let mut b = match (order.as_str(), &field) {
                (_, Some(_)) => builtins::BuiltinFile::named("chain_finite"),
                ("usual", None) => builtins::BuiltinFile::named("chain_usual"),
                ("reverse", None) => builtins::BuiltinFile::named("chain_reverse"),
                (other, None) => {
                    return Err(CliError::input(format!("unknown chain order {other:?}")))
                }
            };
            b.field = field.map(|f| f.0);
            b.bound = bound;
            b
        }
        BuildCmd::Sg { bound } => {
            let mut b = builtins::BuiltinFile::named("sg_toy");
            b.bound = bound;
            b
        }
        BuildCmd::Bar { pred, k, bound } => {
            let name = match pred.as_str() {
                "len-ge" => "bar_len_ge",
                "never" => "bar_never",
                "code-even" => "bar_code_even",
                other => return Err(CliError::input(format!("unknown bar predicate {other:?}"))),
            };
            let mut b = builtins::BuiltinFile::named(name);
            b.k = k;
            b.bound = bound;
            b
        }
        BuildCmd::Unfold { pred, bound } => {
            let name = match pred.as_str() {
                "always" => "unfold_always",
                "u-zero" => "unfold_u_zero",
                other => {
                    return Err(CliError::input(format!(
                        "unknown unfold predicate {other:?}"
                    )))
                }
            };
            let mut b = builtins::BuiltinFile::named(name);
            b.bound = bound;
            b
        }
    };
    // Reject unusable parameter combinations up front.
    builtins::tree(&file)?;
    Ok(serde_json::to_string(&TreeFile::Builtin(file)).unwrap())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let payload = json!({"code": "input", "message": e.to_string()});
            eprintln!("{payload}");
            std::process::exit(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(out) => {
            // Tolerate closed pipes on the consumer side.
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{out}");
        }
        Err(CliError::Input(message)) => {
            eprintln!("{}", json!({"code": "input", "message": message}));
            std::process::exit(1);
        }
        Err(CliError::Domain { code, message }) => {
            eprintln!("{}", json!({"code": code, "message": message}));
            std::process::exit(2);
        }
    }
}
