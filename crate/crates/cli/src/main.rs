//! `weyldl`: class tables, certificates, table replay and shift graphs.
//! Exit codes: 0 on full pass, 1 on any failure, 2 on usage errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use weyldl::classes::{
    cache_dir, cached_class_rows, enumerate_class_table, shift_closure, CLOSURE_BUDGET, ENUMERATION_BUDGET,
};
use weyldl::criterion::certify_min_element;
use weyldl::reduce::Reducer;
use weyldl::{
    check_certificate, Certificate, Direction, Family, GroupDesc, QuadExt, Verdict, Verifier, VerifyOptions, WeylGroup,
};

#[derive(Parser)]
#[command(name = "weyldl", version, about = "Twisted Weyl group classes and exact affineness certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the twisted conjugacy classes of a group and write the cache.
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = DirArg::Delta)]
        direction: DirArg,
        /// Also write the rows as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the class containing `--class-rep`.
    Certify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: Option<String>,
        /// Word in simple reflections, e.g. "1,2,1"; empty for the identity.
        #[arg(long, allow_hyphen_values = true)]
        class_rep: String,
        /// `lp` solves the strict system; `reduce` builds the point by
        /// lifting and extension.
        #[arg(long, value_enum, default_value_t = PathArg::Lp)]
        path: PathArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a certificate file.
    Check { file: PathBuf },
    /// Replay the case tables.
    VerifyPaper {
        /// "all", a group name such as "F4" or "2E6", or a prefix such as "E".
        #[arg(long, default_value = "all")]
        filter: String,
        #[arg(long)]
        q: Option<String>,
        /// Include the closure minimality checks for E7 and E8.
        #[arg(long)]
        slow: bool,
        /// Write the aggregate report JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DOT digraph of the non-increasing cyclic-shift closure of an element.
    ShiftGraph {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        class_rep: String,
        #[arg(long, value_enum, default_value_t = DirArg::Delta)]
        direction: DirArg,
        /// Output path; stdout when absent.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank: usize,
    /// Order of the diagram twist (1, 2 or 3).
    #[arg(long, default_value_t = 1)]
    twist: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    Delta,
    DeltaInv,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::Delta => Direction::Delta,
            DirArg::DeltaInv => Direction::DeltaInv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Lp,
    Reduce,
}

/// A failure attributable to the invocation rather than the mathematics.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

impl GroupArgs {
    fn desc(&self) -> Result<GroupDesc> {
        let family: Family = self.family.parse().map_err(|e| usage(format!("{e}")))?;
        let desc = GroupDesc::new(family, self.rank, self.twist);
        desc.validate().map_err(|e| usage(format!("{e}")))?;
        Ok(desc)
    }
}

fn parse_q(q: Option<&str>, desc: Option<&GroupDesc>) -> Result<Option<QuadExt>> {
    let Some(q) = q else { return Ok(desc.map(GroupDesc::min_q)) };
    let v: QuadExt = q.parse().map_err(|e| usage(format!("bad --q {q:?}: {e}")))?;
    if !v.is_positive() {
        return Err(usage(format!("--q must be positive, got {q}")));
    }
    Ok(Some(v))
}

fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| usage(format!("bad letter {t:?} in word {s:?}"))))
        .collect()
}

fn element(g: &WeylGroup, word: &str) -> Result<weyldl::WeylElt> {
    let w = parse_word(word)?;
    g.from_word(&w).map_err(|e| usage(format!("{e}")))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn word_str(w: &[usize]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

fn cmd_enumerate(group: &GroupArgs, direction: Direction, out: Option<&Path>) -> Result<bool> {
    let desc = group.desc()?;
    let rows = cached_class_rows(&cache_dir(), &desc, direction)?;
    let cuspidal = rows.iter().filter(|r| r.cuspidal).count();
    println!("{desc} {}-classes: {} ({} cuspidal)", direction.as_str(), rows.len(), cuspidal);
    println!("index\trep\tmin_length\tcuspidal\tsize");
    for (i, r) in rows.iter().enumerate() {
        println!("{i}\t{}\t{}\t{}\t{}", word_str(&r.rep), r.min_length, r.cuspidal, r.size);
    }
    if let Some(path) = out {
        write_text(path, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
    }
    Ok(true)
}

fn cmd_certify(group: &GroupArgs, q: Option<&str>, rep: &str, path: PathArg, out: Option<&Path>) -> Result<bool> {
    let desc = group.desc()?;
    let q = parse_q(q, Some(&desc))?.expect("default q");
    let g = WeylGroup::new(desc.root_system()?);
    let delta = desc.twist()?;
    let w = element(&g, rep)?;
    let cert = match path {
        PathArg::Lp => {
            let table = enumerate_class_table(&g, &delta, Direction::Delta, ENUMERATION_BUDGET)?;
            let class = table.class_of(&g, &w);
            let wit = certify_min_element(&g, &delta, class, &q)?;
            Certificate::from_witness(desc, &g, &q, &wit)
        }
        PathArg::Reduce => {
            // The delta-class of w corresponds to the delta^{-1}-class of w^{-1}.
            let table = enumerate_class_table(&g, &delta.inverse(), Direction::DeltaInv, ENUMERATION_BUDGET)?;
            let class = table.class_of(&g, &g.inverse(&w)).clone();
            let (cert, route) = Reducer::new(desc, q.clone())?.certify_class(&class)?;
            for step in route {
                eprintln!("route: {step}");
            }
            cert
        }
    };
    let verdict = check_certificate(&cert)?;
    let json = cert.to_json()? + "\n";
    match out {
        Some(p) => write_text(p, &json)?,
        None => print!("{json}"),
    }
    if let Verdict::Reject(reason) = &verdict {
        eprintln!("certificate rejected: {reason}");
    }
    Ok(verdict.is_accept())
}

fn cmd_check(file: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let verdict = Certificate::from_json(&text).and_then(|c| check_certificate(&c));
    match verdict {
        Ok(Verdict::Accept) => {
            println!("accept");
            Ok(true)
        }
        Ok(Verdict::Reject(reason)) => {
            println!("reject: {reason}");
            Ok(false)
        }
        Err(e) => {
            println!("reject: {e}");
            Ok(false)
        }
    }
}

fn cmd_verify_paper(filter: &str, q: Option<&str>, slow: bool, out: Option<&Path>) -> Result<bool> {
    let q_override = parse_q(q, None)?;
    let mut verifier = Verifier::new(VerifyOptions { q_override, slow, ..Default::default() });
    let report = verifier.verify_all(filter)?;
    if report.total == 0 {
        return Err(usage(format!("filter {filter:?} matches no case")));
    }
    print!("{}", report.summary());
    if let Some(p) = out {
        write_text(p, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(report.all_passed())
}

/// DOT text: nodes labelled by canonical word and length, one edge per
/// ordered pair of distinct nodes carrying every shift label `j`.
fn shift_graph_dot(desc: &GroupDesc, direction: Direction, rep: &str) -> Result<String> {
    let g = WeylGroup::new(desc.root_system()?);
    let twist = direction.twist(&desc.twist()?);
    let w = element(&g, rep)?;
    let closure = shift_closure(&g, &w, &twist, CLOSURE_BUDGET, true)?;
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &(from, to, j) in &closure.edges {
        if from != to {
            edges.entry((from, to)).or_default().push(g.system().label(j));
        }
    }
    let mut s = String::new();
    writeln!(s, "digraph shift_closure {{")?;
    writeln!(s, "  // {desc}, {} shifts from {}", direction.as_str(), word_str(&g.canonical_word(&w)))?;
    for (i, key) in closure.keys.iter().enumerate() {
        let e = g.from_key(*key);
        writeln!(s, "  n{i} [label=\"{} (l={})\"];", word_str(&g.canonical_word(&e)), closure.lengths[i])?;
    }
    for ((from, to), mut js) in edges {
        js.sort_unstable();
        js.dedup();
        writeln!(s, "  n{from} -> n{to} [label=\"{}\"];", word_str(&js))?;
    }
    writeln!(s, "}}")?;
    Ok(s)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate { group, direction, out } => cmd_enumerate(&group, direction.into(), out.as_deref()),
        Command::Certify { group, q, class_rep, path, out } => {
            cmd_certify(&group, q.as_deref(), &class_rep, path, out.as_deref())
        }
        Command::Check { file } => cmd_check(&file),
        Command::VerifyPaper { filter, q, slow, out } => cmd_verify_paper(&filter, q.as_deref(), slow, out.as_deref()),
        Command::ShiftGraph { group, class_rep, direction, dot } => {
            let text = shift_graph_dot(&group.desc()?, direction.into(), &class_rep)?;
            match dot {
                Some(p) => write_text(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse() {
        assert_eq!(parse_word("1, 2,1").unwrap(), vec![1, 2, 1]);
        assert!(parse_word("").unwrap().is_empty());
        assert!(parse_word("1,x").is_err());
    }

    #[test]
    fn q_literals() {
        for s in ["2", "3/2", "sqrt2", "2*sqrt2", "sqrt3"] {
            assert!(parse_q(Some(s), None).unwrap().unwrap().is_positive(), "{s}");
        }
        assert!(parse_q(Some("-1"), None).is_err());
        assert!(parse_q(Some("abc"), None).is_err());
    }

    #[test]
    fn a2_coxeter_shift_graph() {
        let dot = shift_graph_dot(&"A2".parse().unwrap(), Direction::Delta, "1,2").unwrap();
        assert_eq!(dot.matches("[label=\"1,2\"]").count() + dot.matches("(l=").count(), 4, "{dot}");
        assert_eq!(dot.matches("->").count(), 2);
    }
}
