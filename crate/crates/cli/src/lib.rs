//! Command dispatch for the `lspace` binary. Every command reads one
//! `.lgr` file and writes a deterministic listing.
//!
//! Exit codes: 0 success, 1 the input is well formed but a condition
//! fails, 2 the input or the command line could not be parsed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lspace::{
    boundary_paths, format_boundary_path, format_family, format_finite_type, format_transition_graph, isolated_points,
    parse_family, Error, GraphFile, LabelledSpace, PrincipalFilter,
};

#[derive(Debug, Parser)]
#[command(
    name = "lspace",
    about = "Inverse semigroups, filters and tight spectra of finite labelled spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Accommodating, weakly left resolving and complement-closed flags.
    Validate {
        file: PathBuf,
        /// Exit 1 unless all three flags hold.
        #[arg(long)]
        require: bool,
    },
    /// The restricted algebra of a word.
    Balgebra {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Product of two semigroup elements.
    Mul { file: PathBuf, left: String, right: String },
    /// Inverse of a semigroup element.
    Inv { file: PathBuf, element: String },
    /// Order between two idempotents.
    Leq { file: PathBuf, left: String, right: String },
    /// Ultrafilters of the restricted algebra of a word.
    Ultrafilters {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Also print the restriction of each ultrafilter at WORD.EXTEND
        /// back to WORD.
        #[arg(long)]
        extend: Option<String>,
    },
    /// Transition graph of infinite-type ultrafilters.
    Ufgraph { file: PathBuf },
    /// Tight spectrum up to the given bounds.
    Tight {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_word: usize,
        #[arg(long, default_value_t = 3)]
        max_cycle: usize,
    },
    /// Boundary paths of the underlying graph.
    Boundary {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_cycle: usize,
    },
    /// Matches boundary paths with tight filters (left-resolving graph,
    /// power set family).
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_cycle: usize,
    },
    /// Searches for a union cover showing a filter is not tight.
    Refute {
        file: PathBuf,
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Isolated points of the boundary path space.
    Isolated {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

/// Result of one command: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Semantic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_syntax() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Semantic(e.to_string())
        }
    }
}

fn load(path: &PathBuf) -> Result<GraphFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    GraphFile::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn space(path: &PathBuf) -> Result<LabelledSpace, Failure> {
    Ok(load(path)?.space()?)
}

/// Runs `lspace` with `argv` (including the program name).
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(code) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: out,
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Semantic(m)) => Outcome {
            code: 1,
            stdout: out,
            stderr: format!("error: {m}\n"),
        },
    }
}

fn dispatch(command: Command, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Validate { file, require } => {
            let f = load(&file)?;
            let r = f.report()?;
            writeln!(
                out,
                "accommodating={} wlr={} complements={}",
                r.accommodating, r.weakly_left_resolving, r.complement_closed
            )
            .ok();
            for (name, w) in [
                ("accommodating", &r.accommodating_witness),
                ("wlr", &r.wlr_witness),
                ("complements", &r.complement_witness),
            ] {
                if let Some(w) = w {
                    writeln!(out, "witness {name}: {}", w.describe(&f.graph)).ok();
                }
            }
            let all = r.accommodating && r.weakly_left_resolving && r.complement_closed;
            Ok(if require && !all { 1 } else { 0 })
        }
        Command::Balgebra { file, word } => {
            let s = space(&file)?;
            let g = s.graph();
            let w = g.parse_word(&word).map_err(Error::from)?;
            let alg = s.restricted_algebra(&w)?;
            let sets = |v: &[lspace::VertexSet]| v.iter().map(|x| g.format_set(x)).collect::<Vec<_>>().join(" ");
            writeln!(out, "word {}", g.format_word(&w)).ok();
            writeln!(
                out,
                "top {}",
                alg.top.as_ref().map_or("none".into(), |t| g.format_set(t))
            )
            .ok();
            writeln!(out, "elements {}", sets(&alg.elements)).ok();
            writeln!(out, "atoms {}", sets(&alg.atoms)).ok();
            Ok(0)
        }
        Command::Mul { file, left, right } => {
            let s = space(&file)?;
            let p = s.multiply(&s.parse_element(&left)?, &s.parse_element(&right)?);
            writeln!(out, "{}", s.format_element(&p)).ok();
            Ok(0)
        }
        Command::Inv { file, element } => {
            let s = space(&file)?;
            writeln!(out, "{}", s.format_element(&s.parse_element(&element)?.inverse())).ok();
            Ok(0)
        }
        Command::Leq { file, left, right } => {
            let s = space(&file)?;
            let r = s.leq(&s.parse_element(&left)?, &s.parse_element(&right)?)?;
            writeln!(out, "{r}").ok();
            Ok(0)
        }
        Command::Ultrafilters { file, word, extend } => {
            let s = space(&file)?;
            let g = s.graph();
            let w = g.parse_word(&word).map_err(Error::from)?;
            for f in s.ultrafilters_at(&w)? {
                writeln!(out, "{} ; gen={}", g.format_word(&f.word), g.format_set(&f.generator)).ok();
            }
            if let Some(b) = extend {
                let b = g.parse_word(&b).map_err(Error::from)?;
                let wb = w.concat(&b);
                for f in s.ultrafilters_at(&wb)? {
                    let image = s.f_map(&w, &b, &f)?;
                    let shown = image
                        .as_ref()
                        .map_or("0".to_string(), |p: &PrincipalFilter| g.format_set(&p.generator));
                    writeln!(
                        out,
                        "f {}[{}] {} -> {}",
                        g.format_word(&w),
                        g.format_word(&b),
                        g.format_set(&f.generator),
                        shown
                    )
                    .ok();
                }
            }
            Ok(0)
        }
        Command::Ufgraph { file } => {
            let s = space(&file)?;
            let tg = s.transition_graph()?;
            out.push_str(&format_transition_graph(s.graph(), &tg));
            writeln!(out, "branching={}", tg.is_branching()).ok();
            Ok(0)
        }
        Command::Tight {
            file,
            max_word,
            max_cycle,
        } => {
            let s = space(&file)?;
            let g = s.graph();
            let t = s.tight_spectrum(max_word, max_cycle)?;
            for f in &t.finite {
                writeln!(out, "finite {}", format_finite_type(g, f)).ok();
            }
            for f in &t.infinite {
                writeln!(out, "infinite {}", format_family(g, f)).ok();
            }
            writeln!(
                out,
                "total={} finite={} infinite={} branching={} exhaustive={}",
                t.finite.len() + t.infinite.len(),
                t.finite.len(),
                t.infinite.len(),
                t.branching,
                t.exhaustive
            )
            .ok();
            Ok(0)
        }
        Command::Boundary {
            file,
            max_len,
            max_cycle,
        } => {
            let g = load(&file)?.graph;
            let b = boundary_paths(&g, max_len, max_cycle);
            for p in &b.paths {
                writeln!(out, "{}", format_boundary_path(&g, p)).ok();
            }
            writeln!(out, "total={} branching={}", b.paths.len(), b.branching).ok();
            Ok(0)
        }
        Command::Compare {
            file,
            max_len,
            max_cycle,
        } => {
            let s = space(&file)?;
            let g = s.graph();
            let r = s.check_phi_bijection(max_len, max_cycle)?;
            for p in &r.images_outside {
                writeln!(out, "image outside spectrum: {}", format_boundary_path(g, p)).ok();
            }
            for t in &r.preimages_outside {
                writeln!(out, "no listed preimage: {}", format_family(g, t.family())).ok();
            }
            writeln!(
                out,
                "boundary={} spectrum={} injective={} bijection={}",
                r.boundary_count,
                r.spectrum_count,
                r.injective,
                r.is_bijection()
            )
            .ok();
            Ok(if r.is_bijection() { 0 } else { 1 })
        }
        Command::Refute { file, filter, depth } => {
            let s = space(&file)?;
            let g = s.graph();
            let fam = parse_family(&s, &filter)?;
            match s.refute_tight(&fam, depth)? {
                Some(r) => {
                    writeln!(
                        out,
                        "refuted level={} x={}",
                        r.level,
                        s.format_element(&r.certificate.x)
                    )
                    .ok();
                    for d in &r.certificate.parts {
                        writeln!(out, "part {}", g.format_set(d)).ok();
                    }
                }
                None => {
                    writeln!(out, "no union cover found up to depth {depth}").ok();
                }
            }
            Ok(0)
        }
        Command::Isolated { file, max_len } => {
            let g = load(&file)?.graph;
            let iso = isolated_points(&g, max_len);
            for p in &iso {
                writeln!(out, "{}", format_boundary_path(&g, p)).ok();
            }
            writeln!(out, "total={}", iso.len()).ok();
            Ok(0)
        }
    }
}
