//! Command-line front end: every library operation behind one binary, with
//! deterministic sorted-key JSON on stdout and SVG renderings on request.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, unreadable
//! files, malformed words), 3 on domain errors (excluded foldings,
//! insufficiently general sections, and the like).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use weylflop_core::artin::{normal_form, words_equal, ArtinWord};
use weylflop_core::diagram::{DynkinDiagram, TypeTag};
use weylflop_core::family::{
    braid_flop_trace, curve_configuration, flop, generic_section, is_sufficiently_general,
    BaseModel, Section,
};
use weylflop_core::folding::{FoldError, Folding};
use weylflop_core::mckay::{
    build_group, character_table, classify_affine, mckay_graph, mckay_json, GroupKind,
};
use weylflop_core::roots::RootSystem;
use weylflop_core::seed::child_seed;

#[derive(Parser)]
#[command(
    name = "weylflop",
    version,
    about = "Root systems, Dynkin foldings, McKay quivers, braid normal forms, and flop families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a Dynkin diagram (nodes, labels, Gram matrix).
    Diagram { family: String, rank: usize },
    /// Generate a root system (positive roots, Cartan data).
    Roots { family: String, rank: usize },
    /// Fold a simply-laced diagram by an automorphism subgroup.
    Fold {
        family: String,
        rank: usize,
        /// Generators in cycle notation, ';'-separated: "(1 4)(2 3)".
        #[arg(long)]
        auto: String,
    },
    /// Build a finite SL(2,C) subgroup, its characters, and McKay quiver.
    Mckay { kind: String, n: Option<usize> },
    /// Artin-word computations.
    Braid {
        #[command(subcommand)]
        cmd: BraidCmd,
    },
    /// Deformation-family computations over a section file.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// SVG renderings.
    Render {
        #[command(subcommand)]
        cmd: RenderCmd,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Decide equality of two words (signed 1-based letters, e.g. "1 2 -1").
    Eq {
        /// Diagram as TYPE RANK, e.g. --diagram A 2.
        #[arg(long, num_args = 2, value_names = ["TYPE", "RANK"])]
        diagram: Vec<String>,
        #[arg(allow_hyphen_values = true)]
        word1: String,
        #[arg(allow_hyphen_values = true)]
        word2: String,
    },
    /// Print the left-greedy normal form of a word.
    Nf {
        #[arg(long, num_args = 2, value_names = ["TYPE", "RANK"])]
        diagram: Vec<String>,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Factor every curve locus of the section.
    Curves {
        #[arg(long)]
        section: PathBuf,
    },
    /// Report whether the section is sufficiently general.
    General {
        #[arg(long)]
        section: PathBuf,
    },
    /// Flop the simple reflection at a folded node (1-based).
    Flop {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        node: usize,
    },
    /// Run the two braid chains of flops from seeded generic sections.
    Braidcheck {
        /// Folding descriptor: "trivial:A2", "A3/(1 3)", "D4/(1 3 4)".
        #[arg(long)]
        fold: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Defaults to $WEYLFLOP_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum RenderCmd {
    /// Draw a curve configuration: base line with root-labeled zero markers.
    Config {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a folded diagram: one surface box per folded node.
    Diagram {
        #[arg(long)]
        fold: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

type CmdResult = Result<Value, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let started = Instant::now();
    match run(cli.cmd) {
        Ok(payload) => {
            let out = json!({
                "status": "ok",
                "timing_ms": started.elapsed().as_millis() as u64,
                "payload": payload,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            let out = json!({
                "status": "error",
                "timing_ms": started.elapsed().as_millis() as u64,
                "error": msg,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Diagram { family, rank } => {
            let d = parse_diagram(&family, rank)?;
            Ok(d.json())
        }
        Cmd::Roots { family, rank } => {
            let d = parse_diagram(&family, rank)?;
            Ok(RootSystem::new(d).roots_json())
        }
        Cmd::Fold { family, rank, auto } => {
            let d = parse_diagram(&family, rank)?;
            let folding = Folding::parse_desc(&format!("{}/{}", d.tag(), auto))
                .map_err(fold_failure)?;
            Ok(folding.json())
        }
        Cmd::Mckay { kind, n } => run_mckay(&kind, n),
        Cmd::Braid { cmd } => run_braid(cmd),
        Cmd::Family { cmd } => run_family(cmd),
        Cmd::Render { cmd } => run_render(cmd),
    }
}

fn parse_diagram(family: &str, rank: usize) -> Result<DynkinDiagram, Failure> {
    let tag = TypeTag::parse(family, rank).map_err(usage)?;
    DynkinDiagram::new(tag).map_err(usage)
}

/// Cycle-syntax mistakes are usage errors; everything else a fold can
/// reject (non-closure, the excluded even-A cases, no valid realization)
/// is a domain error.
fn fold_failure(e: FoldError) -> Failure {
    match e {
        FoldError::BadCycles(_) | FoldError::BadPermutation(_) | FoldError::BadDescriptor(_) => {
            usage(e)
        }
        other => domain(other),
    }
}

fn run_mckay(kind_str: &str, n: Option<usize>) -> CmdResult {
    let kind = GroupKind::parse(kind_str).map_err(usage)?;
    let n = match (kind.needs_parameter(), n) {
        (true, Some(n)) => n,
        (true, None) => {
            return Err(Failure::Usage(format!(
                "{kind_str} needs the order parameter N"
            )))
        }
        (false, _) => 0,
    };
    let group = build_group(kind, n).map_err(domain)?;
    let chars = character_table(&group).map_err(domain)?;
    let graph = mckay_graph(&group, &chars).map_err(domain)?;
    let class = classify_affine(&graph).map_err(domain)?;
    Ok(mckay_json(&group, &chars, &graph, &class))
}

fn parse_braid_diagram(diagram: &[String]) -> Result<RootSystem, Failure> {
    let rank: usize = diagram[1]
        .parse()
        .map_err(|_| Failure::Usage(format!("--diagram RANK {:?} is not a number", diagram[1])))?;
    Ok(RootSystem::new(parse_diagram(&diagram[0], rank)?))
}

fn parse_word(sys: &RootSystem, text: &str) -> Result<ArtinWord, Failure> {
    let letters: Vec<i64> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Failure::Usage(format!("word letter {t:?} is not an integer")))
        })
        .collect::<Result<_, _>>()?;
    ArtinWord::new(sys.rank(), &letters).map_err(domain)
}

fn run_braid(cmd: BraidCmd) -> CmdResult {
    match cmd {
        BraidCmd::Eq {
            diagram,
            word1,
            word2,
        } => {
            let sys = parse_braid_diagram(&diagram)?;
            let u = parse_word(&sys, &word1)?;
            let v = parse_word(&sys, &word2)?;
            let equal = words_equal(&sys, &u, &v).map_err(domain)?;
            Ok(json!({
                "diagram": sys.diagram().tag().to_string(),
                "word1": u.signed(),
                "word2": v.signed(),
                "equal": equal,
            }))
        }
        BraidCmd::Nf { diagram, word } => {
            let sys = parse_braid_diagram(&diagram)?;
            let w = parse_word(&sys, &word)?;
            let nf = normal_form(&sys, &w).map_err(domain)?;
            Ok(json!({
                "diagram": sys.diagram().tag().to_string(),
                "word": w.signed(),
                "normal_form": nf.json(&sys),
            }))
        }
    }
}

fn load_section(path: &PathBuf) -> Result<Section, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--section {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Domain(format!("section file is not JSON: {e}")))?;
    Section::from_json(&value).map_err(domain)
}

fn default_seed() -> u64 {
    std::env::var("WEYLFLOP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn run_family(cmd: FamilyCmd) -> CmdResult {
    match cmd {
        FamilyCmd::Curves { section } => {
            let s = load_section(&section)?;
            Ok(curve_configuration(&s).json())
        }
        FamilyCmd::General { section } => {
            let s = load_section(&section)?;
            Ok(json!({ "sufficiently_general": is_sufficiently_general(&s) }))
        }
        FamilyCmd::Flop { section, node } => {
            let s = load_section(&section)?;
            let rank = s.folding().xi().rank();
            if node == 0 || node > rank {
                return Err(Failure::Usage(format!(
                    "--node must be in 1..={rank}, got {node}"
                )));
            }
            let record = flop(&[node - 1], &s).map_err(domain)?;
            Ok(record.json())
        }
        FamilyCmd::Braidcheck {
            fold,
            i,
            j,
            seed,
            trials,
        } => {
            let folding = Folding::parse_desc(&fold).map_err(fold_failure)?;
            let rank = folding.xi().rank();
            for (flag, v) in [("--i", i), ("--j", j)] {
                if v == 0 || v > rank {
                    return Err(Failure::Usage(format!(
                        "{flag} must be in 1..={rank}, got {v}"
                    )));
                }
            }
            if i == j {
                return Err(Failure::Usage("--i and --j must differ".to_string()));
            }
            let base = BaseModel::default_for(&folding);
            let seed = seed.unwrap_or_else(default_seed);
            let mut verdicts = Vec::new();
            let mut passes = 0u64;
            let mut first_failure: Option<Value> = None;
            let mut detail: Option<Value> = None;
            for trial in 0..trials {
                let (section, retries) =
                    generic_section(&folding, &base, child_seed(seed, trial)).map_err(domain)?;
                let report = braid_flop_trace(i - 1, j - 1, &section).map_err(domain)?;
                let ok = report.all_ok();
                if ok {
                    passes += 1;
                } else if first_failure.is_none() {
                    first_failure = Some(report.json());
                }
                if trials == 1 {
                    detail = Some(report.json());
                }
                verdicts.push(json!({ "trial": trial, "retries": retries, "ok": ok }));
            }
            let mut payload = json!({
                "fold": folding.descriptor(),
                "base": base.json(),
                "i": i,
                "j": j,
                "seed": seed,
                "trials": trials,
                "passes": passes,
                "ok": passes == trials,
                "verdicts": verdicts,
            });
            if let Some(d) = detail {
                payload["report"] = d;
            }
            if let Some(f) = first_failure {
                payload["first_failure"] = f;
            }
            Ok(payload)
        }
    }
}

fn run_render(cmd: RenderCmd) -> CmdResult {
    match cmd {
        RenderCmd::Config { section, out } => {
            let s = load_section(&section)?;
            let svg = render_config_svg(&s);
            std::fs::write(&out, &svg)
                .map_err(|e| Failure::Usage(format!("--out {}: {e}", out.display())))?;
            Ok(json!({
                "out": out.display().to_string(),
                "bytes": svg.len(),
            }))
        }
        RenderCmd::Diagram { fold, out } => {
            let folding = Folding::parse_desc(&fold).map_err(fold_failure)?;
            let svg = render_diagram_svg(&folding);
            std::fs::write(&out, &svg)
                .map_err(|e| Failure::Usage(format!("--out {}: {e}", out.display())))?;
            Ok(json!({
                "out": out.display().to_string(),
                "nodes": folding.xi().rank(),
                "bytes": svg.len(),
            }))
        }
    }
}

// --- SVG rendering -------------------------------------------------------

fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">\n"
    )
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One box per folded node (the surface chain picture): shared edges where
/// nodes interact, bond labels above higher-order edges, and a double base
/// underline below nodes whose orbit comes from a cover.
fn render_diagram_svg(folding: &Folding) -> String {
    let xi = folding.xi();
    let m = xi.rank();
    let (bw, bh, gap, x0, y0) = (120.0, 70.0, 60.0, 30.0, 40.0);
    let width = x0 * 2.0 + m as f64 * bw + (m.saturating_sub(1)) as f64 * gap;
    let height = 210.0;
    let mut svg = svg_header(width.max(360.0), height);
    let _ = write!(
        svg,
        "<text x=\"{x0}\" y=\"24\" font-size=\"15\">{}</text>\n",
        escape(&format!(
            "{} — one surface per folded node",
            folding.descriptor()
        ))
    );
    let bx = |k: usize| x0 + k as f64 * (bw + gap);
    for k in 0..m {
        let x = bx(k);
        let _ = write!(
            svg,
            "<rect x=\"{x:.1}\" y=\"{y0}\" width=\"{bw}\" height=\"{bh}\" fill=\"#eef\" \
             stroke=\"#335\" stroke-width=\"1.5\"/>\n"
        );
        let orbit: Vec<String> = folding.node_orbits()[k]
            .iter()
            .map(|j| (j + 1).to_string())
            .collect();
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">S{}</text>\n",
            x + bw / 2.0,
            y0 + 28.0,
            k + 1
        );
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">orbit {{{}}}</text>\n",
            x + bw / 2.0,
            y0 + 48.0,
            escape(&orbit.join(" "))
        );
        // Base curve under each surface; doubled when the node's orbit is
        // larger than one (the surface lives over the covering curve).
        let uy = y0 + bh + 18.0;
        let _ = write!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{uy:.1}\" x2=\"{:.1}\" y2=\"{uy:.1}\" stroke=\"#333\" \
             stroke-width=\"2\"/>\n",
            x + bw
        );
        if folding.node_orbits()[k].len() > 1 {
            let _ = write!(
                svg,
                "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#333\" \
                 stroke-width=\"2\"/>\n",
                uy + 5.0,
                x + bw,
                uy + 5.0
            );
        }
    }
    for k in 0..m {
        for l in k + 1..m {
            let label = xi.label(k, l);
            if label < 3 {
                continue;
            }
            let (xa, xb) = (bx(k) + bw, bx(l));
            let y = y0 + bh / 2.0;
            let _ = write!(
                svg,
                "<line x1=\"{xa:.1}\" y1=\"{y:.1}\" x2=\"{xb:.1}\" y2=\"{y:.1}\" \
                 stroke=\"#933\" stroke-width=\"2\"/>\n"
            );
            if label > 3 {
                let _ = write!(
                    svg,
                    "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\" \
                     fill=\"#933\">m={label}</text>\n",
                    (xa + xb) / 2.0,
                    y - 8.0
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Base line with one marker per numeric zero (Durand-Kerner on the factored
/// loci, display only): marker radius grows with multiplicity, labels carry
/// the indexing root, divisor entries render as a full-width band.
fn render_config_svg(s: &Section) -> String {
    let config = curve_configuration(s);
    let mut zeros: Vec<(Vec<i64>, f64, f64, u32)> = Vec::new(); // root, re, im, mult
    let mut divisors: Vec<Vec<i64>> = Vec::new();
    for entry in &config.entries {
        if entry.divisor {
            divisors.push(entry.root.coords().to_vec());
            continue;
        }
        for factor in &entry.factors {
            for (re, im) in poly_roots_f64(&factor.poly) {
                zeros.push((entry.root.coords().to_vec(), re, im, factor.multiplicity));
            }
        }
    }
    let (width, height) = (720.0, 320.0);
    let axis_y = height / 2.0;
    let mut svg = svg_header(width, height);
    let _ = write!(
        svg,
        "<text x=\"20\" y=\"24\" font-size=\"15\">{}</text>\n",
        escape(&format!(
            "curves over the base — {} ({})",
            s.folding().descriptor(),
            if config.general_flag {
                "sufficiently general"
            } else {
                "not sufficiently general"
            }
        ))
    );
    let _ = write!(
        svg,
        "<line x1=\"40\" y1=\"{axis_y}\" x2=\"{:.1}\" y2=\"{axis_y}\" stroke=\"#333\" \
         stroke-width=\"1.5\"/>\n",
        width - 40.0
    );
    // Scale real parts into the plot range.
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for (_, re, _, _) in &zeros {
        lo = lo.min(*re);
        hi = hi.max(*re);
    }
    let pad = 0.1 * (hi - lo).max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let sx = |re: f64| 40.0 + (re - lo) / (hi - lo) * (width - 80.0);
    let sy = |im: f64| axis_y - im * 40.0;
    for (root, re, im, mult) in &zeros {
        let (cx, cy) = (sx(*re), sy(*im));
        let r = 4.0 + 3.0 * (*mult as f64 - 1.0);
        let color = if *mult == 1 { "#283" } else { "#c60" };
        let _ = write!(
            svg,
            "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{r:.1}\" fill=\"{color}\" \
             fill-opacity=\"0.8\"/>\n"
        );
        let label: Vec<String> = root.iter().map(|c| c.to_string()).collect();
        let _ = write!(
            svg,
            "<text x=\"{cx:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">({})</text>\n",
            cy - r - 4.0,
            escape(&label.join(","))
        );
    }
    for (k, root) in divisors.iter().enumerate() {
        let y = 40.0 + k as f64 * 18.0;
        let label: Vec<String> = root.iter().map(|c| c.to_string()).collect();
        let _ = write!(
            svg,
            "<rect x=\"40\" y=\"{y:.1}\" width=\"{:.1}\" height=\"12\" fill=\"#a33\" \
             fill-opacity=\"0.25\"/>\n<text x=\"46\" y=\"{:.1}\" font-size=\"10\">divisor ({})</text>\n",
            width - 80.0,
            y + 10.0,
            escape(&label.join(","))
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Durand-Kerner root finding on the f64 shadow of a polynomial; good
/// enough for marker placement, never used for exact decisions.
fn poly_roots_f64(p: &weylflop_core::RatPoly) -> Vec<(f64, f64)> {
    let (ord, coeffs) = p.window_f64();
    // Zeros at the origin from a positive-ord window (affine-line loci).
    let mut roots: Vec<(f64, f64)> = (0..ord.max(0)).map(|_| (0.0, 0.0)).collect();
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return roots;
    }
    let lead = coeffs[deg];
    let monic: Vec<(f64, f64)> = coeffs.iter().map(|c| (c / lead, 0.0)).collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let sub = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0, a.1 - b.1);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let eval = |x: (f64, f64)| {
        let mut acc = (0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = mul(acc, x);
            acc = (acc.0 + c.0, acc.1 + c.1);
        }
        acc
    };
    let mut guesses: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let mut acc = (1.0, 0.0);
            for _ in 0..=k {
                acc = mul(acc, (0.4, 0.9));
            }
            acc
        })
        .collect();
    for _ in 0..200 {
        let mut shift = 0.0f64;
        for k in 0..deg {
            let mut denom = (1.0, 0.0);
            for l in 0..deg {
                if l != k {
                    denom = mul(denom, sub(guesses[k], guesses[l]));
                }
            }
            let delta = div(eval(guesses[k]), denom);
            guesses[k] = sub(guesses[k], delta);
            shift = shift.max(delta.0.abs() + delta.1.abs());
        }
        if shift < 1e-12 {
            break;
        }
    }
    roots.extend(guesses);
    roots
}
