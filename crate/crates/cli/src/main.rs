use std::error::Error;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use braidlift::contact_lift::convergence_order;
use braidlift::{
  compose_lifts, cocycle_residual, front_dga, hf_matrix, intersection_matrix, is_trivial_criterion, mixed_differential, primitive, BraidWord, Dga, FrontWord,
  LagrangianDiagram, LiftConfig, PlanarHamiltonian, StackedLinkDiagram,
};
use clap::{Parser, Subcommand};

mod crosscheck;

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "braidlift", version, about = "Braid triviality, Legendrian dgas and contact lifts")]
struct Cli {
  #[command(subcommand)]
  command: Command,
}

#[derive(Subcommand)]
enum Command {
  /// Braid words: triviality criterion and intersection matrices.
  #[command(subcommand)]
  Braid(BraidCmd),
  /// Zigzag-algebra Floer dimensions.
  #[command(subcommand)]
  Zigzag(ZigzagCmd),
  /// Contact homology dgas of Legendrian fronts.
  #[command(subcommand)]
  Lch(LchCmd),
  /// Mixed-chord bimodules of stacked links.
  #[command(subcommand)]
  Bimodule(BimoduleCmd),
  /// Contact lifts of planar Hamiltonian flows.
  #[command(subcommand)]
  Lift(LiftCmd),
  /// Run the built-in consistency checks.
  #[command(subcommand)]
  Crosscheck(CrosscheckCmd),
}

#[derive(Subcommand)]
enum BraidCmd {
  /// Compare the arc criterion with the Artin oracle.
  Check { file: PathBuf },
  /// Print the intersection matrix I(b_i, w(b_j)).
  Matrix { file: PathBuf },
}

#[derive(Subcommand)]
enum ZigzagCmd {
  /// Print dim HF(b_i, w(b_j)) and check it equals twice the intersection number.
  Hf { file: PathBuf },
}

#[derive(Subcommand)]
enum LchCmd {
  /// Print the dga of a front, diagram dump or dga file and check it.
  Dga { file: PathBuf },
  /// List the graded augmentations.
  Augment { file: PathBuf },
  /// Linearized homology for every augmentation.
  Linearize { file: PathBuf },
}

#[derive(Subcommand)]
enum BimoduleCmd {
  /// Print the bimodule of a stacked link and its bilinearized homology set.
  Compute { file: PathBuf },
}

#[derive(Subcommand)]
enum LiftCmd {
  /// Lift the time-one flow of a Hamiltonian and print its residuals.
  Verify {
    /// Hamiltonian, e.g. "0.5 * bump(0.8) * x * y".
    #[arg(long = "h")]
    hamiltonian: String,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Also estimate the convergence order of the integrator.
    #[arg(long)]
    order: bool,
  },
}

#[derive(Subcommand)]
enum CrosscheckCmd {
  /// Sweep short braids, the front corpus, the stacked links and a lift.
  All {
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
  },
}

fn read_input(path: &PathBuf) -> Res<String> {
  if path.as_os_str() == "-" {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s)?;
    return Ok(s);
  }
  std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn status(ok: bool) -> &'static str {
  if ok {
    "ok"
  } else {
    "FAIL"
  }
}

/// Accepts dga text, a front, or a diagram dump that remembers its front.
fn load_dga(text: &str) -> Res<Dga> {
  let is_dga = text.lines().any(|l| {
    let t = l.trim_start();
    t.starts_with("gen ") || t.starts_with("d ")
  });
  if is_dga {
    return Ok(text.parse()?);
  }
  match text.parse::<FrontWord>() {
    Ok(front) => Ok(front_dga(&front)?),
    Err(front_err) => {
      let d: LagrangianDiagram = text.parse().map_err(|e| format!("neither a front ({front_err}) nor a diagram ({e})"))?;
      Ok(braidlift::differential(&d)?)
    }
  }
}

fn augmentation_text(dga: &Dga, values: &[bool]) -> String {
  let parts: Vec<String> = dga.names().iter().zip(values).map(|(n, &v)| format!("{n}={}", v as u8)).collect();
  if parts.is_empty() {
    "(no generators)".into()
  } else {
    parts.join(" ")
  }
}

fn braid_check(w: &BraidWord, out: &mut String) -> Res<bool> {
  let criterion = is_trivial_criterion(w)?;
  let oracle = w.is_trivial_oracle();
  let first = intersection_matrix(w)?.is_base();
  let hf = hf_matrix(w).map(|_| ()).map_err(|e| e.to_string());
  writeln!(out, "braid\tB {}\t{}", w.strands(), if w.is_empty() { "(empty)".to_string() } else { w.to_string() })?;
  writeln!(out, "arcs_fixed\t{first}")?;
  writeln!(out, "criterion\t{}", if criterion { "trivial" } else { "nontrivial" })?;
  writeln!(out, "oracle\t{}", if oracle { "trivial" } else { "nontrivial" })?;
  writeln!(out, "hf_equals_twice_intersection\t{}", status(hf.is_ok()))?;
  if first && !criterion {
    writeln!(out, "note\tarcs fixed by w but not by w^2")?;
  }
  writeln!(out, "agreement\t{}", status(criterion == oracle))?;
  Ok(criterion == oracle && hf.is_ok())
}

fn lift_verify(spec: &str, steps: usize, grid: usize, order: bool, out: &mut String) -> Res<bool> {
  let h: PlanarHamiltonian<f64> = spec.parse()?;
  let config = LiftConfig::new(steps, grid)?;
  let phi = primitive(&h, &config)?;
  let twice = compose_lifts(&phi, &phi)?;
  let mut rows: Vec<(&str, f64, &str, bool)> = Vec::new();
  let exact = phi.exactness_residual()?;
  rows.push(("exactness", exact, "< 1e-5", exact < 1e-5));
  let cocycle = cocycle_residual(&phi, &phi, &twice)?;
  rows.push(("cocycle_self", cocycle, "< 1e-6", cocycle < 1e-6));
  let leak = phi.support_leak(0.05)?;
  rows.push(("support_leak", leak, "< 1e-9", leak < 1e-9));
  let gap = phi.reconstruction_gap(10)?;
  rows.push(("reconstruction_gap", gap, "< 1e-5", gap < 1e-5));
  let order_value = if order && !h.is_zero() {
    let pts: Vec<(f64, f64)> = (0..5).flat_map(|i| (0..5).map(move |j| (-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64))).collect();
    Some(convergence_order(&h, &pts, 50)?)
  } else {
    None
  };
  writeln!(out, "# H = {h}")?;
  writeln!(out, "# steps {steps} grid {grid}")?;
  writeln!(out, "check\tvalue\tbound\tstatus")?;
  for (name, v, bound, ok) in &rows {
    writeln!(out, "{name}\t{v:.3e}\t{bound}\t{}", status(*ok))?;
  }
  let mut all = rows.iter().all(|r| r.3);
  if let Some(p) = order_value {
    let ok = p >= 3.8;
    writeln!(out, "order\t{p:.3}\t>= 3.8\t{}", status(ok))?;
    all &= ok;
  }
  Ok(all)
}

fn run(cli: Cli, out: &mut String) -> Res<bool> {
  match cli.command {
    Command::Braid(BraidCmd::Check { file }) => braid_check(&read_input(&file)?.parse()?, out),
    Command::Braid(BraidCmd::Matrix { file }) => {
      let w: BraidWord = read_input(&file)?.parse()?;
      write!(out, "{}", intersection_matrix(&w)?)?;
      Ok(true)
    }
    Command::Zigzag(ZigzagCmd::Hf { file }) => {
      let w: BraidWord = read_input(&file)?.parse()?;
      match hf_matrix(&w) {
        Ok(m) => {
          write!(out, "{m}")?;
          Ok(true)
        }
        Err(e @ braidlift::PipelineError::Mismatch { .. }) => {
          writeln!(out, "# {e}")?;
          Ok(false)
        }
        Err(e) => Err(e.into()),
      }
    }
    Command::Lch(cmd) => {
      let (LchCmd::Dga { file } | LchCmd::Augment { file } | LchCmd::Linearize { file }) = &cmd;
      let dga = load_dga(&read_input(file)?)?;
      let report = dga.check();
      match cmd {
        LchCmd::Dga { .. } => {
          write!(out, "{dga}")?;
          for v in &report.violations {
            writeln!(out, "# violation: {v}")?;
          }
          writeln!(out, "# d^2 = 0 and degree -1: {}", status(report.passed()))?;
        }
        LchCmd::Augment { .. } => {
          let augs = dga.augmentations()?;
          writeln!(out, "augmentations\t{}", augs.len())?;
          for a in &augs {
            writeln!(out, "{}", augmentation_text(&dga, &a.values))?;
          }
        }
        LchCmd::Linearize { .. } => {
          let augs = dga.augmentations()?;
          writeln!(out, "augmentation\tpoincare")?;
          for a in &augs {
            let h = dga.linearize(a)?.homology_by_degree();
            writeln!(out, "{}\t{}", augmentation_text(&dga, &a.values), braidlift::PoincarePolynomial::from_dims(h))?;
          }
          let set: Vec<String> = dga.linearized_homology_set()?.iter().map(|p| p.to_string()).collect();
          writeln!(out, "set\t{{{}}}", set.join(", "))?;
        }
      }
      Ok(report.passed())
    }
    Command::Bimodule(BimoduleCmd::Compute { file }) => {
      let d: StackedLinkDiagram = read_input(&file)?.parse()?;
      let b = mixed_differential(&d)?;
      write!(out, "{b}")?;
      let report = b.check();
      for v in &report.violations {
        writeln!(out, "# violation: {v}")?;
      }
      let set: Vec<String> = b.bilinearized_homology_set()?.iter().map(|p| p.to_string()).collect();
      writeln!(out, "# bilinearized homology set: {{{}}}", set.join(", "))?;
      writeln!(out, "# d^2 = 0 and degree -1: {}", status(report.passed()))?;
      Ok(report.passed())
    }
    Command::Lift(LiftCmd::Verify { hamiltonian, steps, grid, order }) => lift_verify(&hamiltonian, steps, grid, order, out),
    Command::Crosscheck(CrosscheckCmd::All { samples, seed }) => crosscheck::all(samples, seed, out),
  }
}

fn main() -> ExitCode {
  let cli = Cli::parse();
  let mut out = String::new();
  let result = run(cli, &mut out);
  print!("{out}");
  match result {
    Ok(true) => ExitCode::SUCCESS,
    Ok(false) => ExitCode::from(1),
    Err(e) => {
      eprintln!("error: {e}");
      ExitCode::from(2)
    }
  }
}
