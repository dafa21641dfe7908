use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainsurg::catalog::{self, SubcodeSpec};
use chainsurg::chaincomplex::homology;
use chainsurg::csscode::{distance_bruteforce, encoder_isometry, CssCode, DEFAULT_DISTANCE_CAP};
use chainsurg::io;
use chainsurg::protocols::{self, AncillaStrategy, Corrections, PlanStep, StepKind};
use chainsurg::report;
use chainsurg::simverify::{
    extract_logical_channel, physical_op_sequence, x_map_interpretation, z_map_interpretation,
};
use chainsurg::surgery::{
    analyze_merge, canonical_target_basis, induced_logical_matrix, quotient_merge, MergeResult,
    Orientation, Subcode,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

/// Code surgery on CSS codes.
#[derive(Parser)]
#[command(name = "chainsurg", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a code file and print its parameters.
    Validate {
        code: PathBuf,
        /// Also compute the distance by enumeration.
        #[arg(long)]
        distance: bool,
    },
    /// Homology and cohomology dimensions with representatives.
    Homology { file: PathBuf },
    /// Quotient-merge a code by a subcode.
    Merge {
        code: PathBuf,
        #[arg(long)]
        subcode: PathBuf,
        /// Include the exact-sequence analysis.
        #[arg(long)]
        analyze: bool,
        /// Write the merged code here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact-sequence analysis of a merge.
    Analyze {
        code: PathBuf,
        #[arg(long)]
        subcode: PathBuf,
    },
    /// Matrix of the induced map on logical operators.
    LogicalMap {
        code: PathBuf,
        #[arg(long)]
        subcode: PathBuf,
    },
    /// Build the merge/split CNOT plan.
    Cnot {
        code: PathBuf,
        #[arg(long)]
        control: usize,
        /// Defaults to another logical of the code, or an appended trivial qubit.
        #[arg(long)]
        target: Option<usize>,
        /// `trivial`, `embedded:<index>` or a code file.
        #[arg(long, default_value = "trivial")]
        ancilla: String,
        /// Cap on merge generator weight.
        #[arg(long)]
        locality: Option<usize>,
        /// Simulate every outcome branch and compare with CNOT.
        #[arg(long)]
        simulate: bool,
        /// Write the full plan as JSON.
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Steane to Reed-Muller code switch.
    Switch {
        /// Check stabilisers and the round trip.
        #[arg(long)]
        verify: bool,
    },
    /// Logical channel of a merge's physical interpretation.
    Simulate {
        code: PathBuf,
        #[arg(long)]
        subcode: PathBuf,
    },
    /// Built-in codes and worked examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Push a Pauli through a merge.
    Propagate {
        code: PathBuf,
        #[arg(long)]
        subcode: PathBuf,
        /// Pauli string, qubit 0 first, e.g. `IIZIIII`.
        #[arg(long)]
        pauli: String,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List codes with their expected parameters.
    List,
    /// Write a code file.
    Export {
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a worked example as `<name>.code` and `<name>.sub`.
    Example {
        name: String,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

/// Failure with a machine-readable kind.
struct Failure {
    kind: String,
    message: String,
}

impl From<chainsurg::Error> for Failure {
    fn from(e: chainsurg::Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: &std::io::Error) -> Failure {
    Failure {
        kind: "Io".into(),
        message: format!("{}: {e}", path.display()),
    }
}

type Outcome = Result<(String, Value), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, &e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, &e))
}

fn load_code(path: &Path) -> Result<CssCode, Failure> {
    Ok(io::read_code_or_complex(&read(path)?)?)
}

fn load_merge(code: &Path, subcode: &Path) -> Result<(CssCode, Subcode, MergeResult), Failure> {
    let code = load_code(code)?;
    let spec = io::read_subcode(&read(subcode)?)?;
    let v = spec.build(code.complex())?;
    let m = quotient_merge(&v)?;
    Ok((code, v, m))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::Validate { code, distance } => ("validate", validate(code, *distance)),
        Command::Homology { file } => ("homology", homology_cmd(file)),
        Command::Merge {
            code,
            subcode,
            analyze,
            output,
        } => ("merge", merge(code, subcode, *analyze, output.as_deref())),
        Command::Analyze { code, subcode } => ("analyze", analyze(code, subcode)),
        Command::LogicalMap { code, subcode } => ("logical-map", logical_map(code, subcode)),
        Command::Cnot {
            code,
            control,
            target,
            ancilla,
            locality,
            simulate,
            plan_out,
        } => (
            "cnot",
            cnot(
                code,
                *control,
                *target,
                ancilla,
                *locality,
                *simulate,
                plan_out.as_deref(),
            ),
        ),
        Command::Switch { verify } => ("switch", switch(*verify)),
        Command::Simulate { code, subcode } => ("simulate", simulate(code, subcode)),
        Command::Catalog { action } => ("catalog", catalog_cmd(action)),
        Command::Propagate {
            code,
            subcode,
            pauli,
        } => ("propagate", propagate(code, subcode, pauli)),
    };
    match result {
        Ok((text, value)) => {
            if cli.json {
                println!("{}", report::envelope(name, value));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", report::error_report(&f.kind, &f.message));
            ExitCode::from(if f.kind == "Usage" { 2 } else { 1 })
        }
    }
}

fn params(code: &CssCode) -> String {
    code.parameters()
}

fn validate(path: &Path, distance: bool) -> Outcome {
    let mut code = load_code(path)?;
    if distance && code.distance().is_none() {
        code = code.with_distance();
    }
    Ok((
        format!("valid CSS code {}\n", params(&code)),
        report::code_summary(&code),
    ))
}

fn homology_cmd(path: &Path) -> Outcome {
    let code = load_code(path)?;
    let c = code.complex();
    let t = c.transposed();
    let dims: Vec<usize> = (0..3).map(|d| homology(c, d).dim()).collect();
    let codims: Vec<usize> = (0..3).map(|d| homology(&t, 2 - d).dim()).collect();
    let mut text = String::new();
    for d in 0..3 {
        let _ = writeln!(text, "H{d}: {}  H^{d}: {}", dims[d], codims[d]);
    }
    for (i, z) in code.z_logicals().representatives().iter().enumerate() {
        let _ = writeln!(text, "z{i}: {z}");
    }
    for (i, x) in code.x_logicals().representatives().iter().enumerate() {
        let _ = writeln!(text, "x{i}: {x}");
    }
    Ok((
        text,
        json!({ "homology": dims, "cohomology": codims, "code": report::code_summary(&code) }),
    ))
}

fn analysis_text(r: &chainsurg::surgery::ExactSequenceReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "H1(V) = {}, H0(V) = {}", r.h1_sub_dim, r.h0_sub_dim);
    let _ = writeln!(t, "logicals: {} -> {}", r.h1_source_dim, r.h1_quotient_dim);
    let _ = writeln!(
        t,
        "surjective: {}, injective: {}",
        r.surjective, r.injective
    );
    let _ = writeln!(
        t,
        "by dimension: surjective {}, injective {}",
        r.surjective_by_dimension, r.injective_by_dimension
    );
    let killed: Vec<String> = r.killed.iter().map(ToString::to_string).collect();
    let _ = writeln!(t, "killed: {{{}}}", killed.join(", "));
    let _ = writeln!(t, "created: {}", r.created.len());
    t
}

fn merge(code: &Path, subcode: &Path, with_analysis: bool, output: Option<&Path>) -> Outcome {
    let (code, v, m) = load_merge(code, subcode)?;
    let merged = m.merged_code();
    let mut text = format!(
        "{} merge {} -> {}\n",
        m.orientation(),
        params(&code),
        params(&merged)
    );
    let mut value = report::merge_summary(&m);
    if with_analysis {
        let r = analyze_merge(&m, &v)?;
        text.push_str(&analysis_text(&r));
        value["analysis"] = report::analysis(&r);
    }
    if let Some(path) = output {
        write(path, &io::write_code(&merged))?;
        let _ = writeln!(text, "wrote {}", path.display());
    }
    Ok((text, value))
}

fn analyze(code: &Path, subcode: &Path) -> Outcome {
    let (_, v, m) = load_merge(code, subcode)?;
    let r = analyze_merge(&m, &v)?;
    Ok((analysis_text(&r), report::analysis(&r)))
}

fn logical_map(code: &Path, subcode: &Path) -> Outcome {
    let (code, v, m) = load_merge(code, subcode)?;
    let src = match m.orientation() {
        Orientation::Z => code.z_logicals().clone(),
        Orientation::X => chainsurg::chaincomplex::HomologyBasis::from_representatives(
            &code.complex().transposed(),
            1,
            code.x_logicals().representatives().to_vec(),
        )?,
    };
    let tgt = canonical_target_basis(&m, &v, &src)?;
    let p = induced_logical_matrix(&m, &src, &tgt)?;
    Ok((
        format!("{} logical matrix:\n{p}", m.orientation()),
        json!({ "orientation": m.orientation().to_string(), "matrix": report::matrix(&p) }),
    ))
}

fn parse_ancilla(spec: &str) -> Result<AncillaStrategy, Failure> {
    if spec == "trivial" {
        return Ok(AncillaStrategy::TrivialQubit);
    }
    if let Some(i) = spec.strip_prefix("embedded:") {
        let i = i.parse().map_err(|_| Failure {
            kind: "Usage".into(),
            message: format!("bad embedded index {i:?}"),
        })?;
        return Ok(AncillaStrategy::EmbeddedLogical(i));
    }
    Ok(AncillaStrategy::ProvidedCode(Box::new(load_code(
        Path::new(spec),
    )?)))
}

fn cnot(
    path: &Path,
    control: usize,
    target: Option<usize>,
    ancilla: &str,
    locality: Option<usize>,
    simulate: bool,
    plan_out: Option<&Path>,
) -> Outcome {
    let mut code = load_code(path)?;
    let ancilla = parse_ancilla(ancilla)?;
    let reserved = match ancilla {
        AncillaStrategy::EmbeddedLogical(i) => Some(i),
        _ => None,
    };
    let target = match target {
        Some(t) => t,
        None => match (0..code.k()).find(|&i| i != control && Some(i) != reserved) {
            Some(t) => t,
            None => {
                code = code.direct_sum(&catalog::trivial_qubit());
                code.k() - 1
            }
        },
    };
    let plan = protocols::build_cnot_plan(&code, control, target, &ancilla, locality)?;
    let mut text = format!(
        "CNOT plan on {} (control {control}, target {target}), {} qubits, {} measurements\n",
        params(&code),
        plan.working_code().n(),
        plan.measurement_count()
    );
    for (i, s) in plan.steps.iter().enumerate() {
        let kind = match &s.kind {
            StepKind::InitAncillaPlus => "init ancilla |+>",
            StepKind::ZMerge { .. } => "Z merge",
            StepKind::XSplit => "X split",
            StepKind::XMerge { .. } => "X merge",
            StepKind::ZSplit => "Z split",
            StepKind::MeasureAncillaZ => "measure ancilla Z",
            StepKind::MeasureAncillaX => "measure ancilla X",
        };
        let _ = writeln!(
            text,
            "  {i}: {kind}: {} -> {}",
            params(&s.before),
            params(&s.after)
        );
    }
    let mut value = report::plan_summary(&plan);
    if simulate {
        let k = plan.data_qubits();
        let want = protocols::cnot_matrix(k, plan.data_index(control), plan.data_index(target));
        let m = plan.measurement_count();
        let branches: Vec<Vec<bool>> = if plan.locality {
            vec![vec![false; m]]
        } else {
            (0..1u64 << m)
                .map(|b| (0..m).map(|i| b >> i & 1 == 1).collect())
                .collect()
        };
        let mut worst = 0.0_f64;
        for b in &branches {
            let got = protocols::plan_channel(&plan, b, Corrections::Full)?;
            worst = worst.max(got.max_deviation(&want));
        }
        let ok = worst < 1e-9;
        let _ = writeln!(
            text,
            "logical channel {} CNOT (max deviation {worst:.1e} {} 1e-9 over {} branches)",
            if ok { "=" } else { "!=" },
            if ok { "<" } else { ">=" },
            branches.len()
        );
        value["simulation"] =
            json!({ "branches": branches.len(), "max_deviation": worst, "matches_cnot": ok });
    }
    if let Some(p) = plan_out {
        let full = serde_json::to_string_pretty(&plan).expect("plans serialize");
        write(p, &full)?;
        let _ = writeln!(text, "wrote {}", p.display());
    }
    Ok((text, value))
}

fn switch(verify: bool) -> Outcome {
    let plan = protocols::code_switch_plan()?;
    let merge_step = &plan.steps[1];
    let mut text = format!(
        "switch {} -> {}\n",
        params(&plan.steps[0].before),
        params(&merge_step.after)
    );
    let mut value = report::plan_summary(&plan);
    if verify {
        let p1 = protocols::step_merge_map(merge_step)?
            .expect("merge step")
            .component(1)
            .clone();
        let check = protocols::check_merge_stabilisers(plan.working_code(), &merge_step.after, &p1);
        let d = distance_bruteforce(&merge_step.after, DEFAULT_DISTANCE_CAP);
        let round = protocols::compose_logical(&plan, &[false])?;
        let dev = round.max_deviation(&chainsurg::simverify::ComplexMatrix::identity(2));
        let _ = writeln!(text, "merged distance: {d:?}");
        let _ = writeln!(
            text,
            "Z stabilisers preserved: {}, X checks pulled back: {}",
            check.z_stabilisers_preserved, check.x_checks_pulled_back
        );
        let _ = writeln!(text, "round trip = identity (max deviation {dev:.1e})");
        value["verification"] = json!({
            "merged_distance": d,
            "z_stabilisers_preserved": check.z_stabilisers_preserved,
            "x_checks_pulled_back": check.x_checks_pulled_back,
            "round_trip_deviation": dev,
        });
    }
    Ok((text, value))
}

fn simulate(code: &Path, subcode: &Path) -> Outcome {
    let (code, _, m) = load_merge(code, subcode)?;
    let merged = m.merged_code();
    let ops = physical_op_sequence(m.p(), m.orientation());
    let e_in = encoder_isometry(&code)?;
    let e_out = encoder_isometry(&merged)?;
    let got = extract_logical_channel(&ops, &e_in, &e_out)?;
    let want = match m.orientation() {
        Orientation::Z => z_map_interpretation(&chainsurg::chaincomplex::induced_on_homology(
            m.p(),
            1,
            code.z_logicals(),
            merged.z_logicals(),
        )?),
        Orientation::X => {
            let xb = |c: &CssCode| {
                chainsurg::chaincomplex::HomologyBasis::from_representatives(
                    &c.complex().transposed(),
                    1,
                    c.x_logicals().representatives().to_vec(),
                )
            };
            x_map_interpretation(&chainsurg::chaincomplex::induced_on_homology(
                m.p(),
                1,
                &xb(&code)?,
                &xb(&merged)?,
            )?)
        }
    };
    let dev = got.max_deviation(&want);
    Ok((
        format!("logical channel:\n{got}deviation from induced map: {dev:.1e}\n"),
        json!({ "channel": report::channel(&got), "deviation_from_induced": dev }),
    ))
}

fn catalog_cmd(action: &CatalogAction) -> Outcome {
    match action {
        CatalogAction::List => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for e in catalog::entries() {
                let (n, k, d) = e.expected;
                let d_text = d.map_or("?".to_string(), |d| d.to_string());
                let _ = writeln!(text, "{:<16} [[{n},{k},{d_text}]]", e.name);
                rows.push(json!({ "name": e.name, "n": n, "k": k, "d": d }));
            }
            let _ = writeln!(text, "examples: {}", catalog::EXAMPLE_NAMES.join(", "));
            Ok((
                text,
                json!({ "codes": rows, "examples": catalog::EXAMPLE_NAMES }),
            ))
        }
        CatalogAction::Export { name, output } => {
            let code = catalog::code_by_name(name)?;
            let body = io::write_code(&code);
            let value = json!({ "name": name, "code": report::code_summary(&code) });
            match output {
                Some(p) => {
                    write(p, &body)?;
                    Ok((format!("wrote {}\n", p.display()), value))
                }
                None => Ok((body, value)),
            }
        }
        CatalogAction::Example { name, dir } => {
            let ex = catalog::paper_example(name)?;
            let code_path = dir.join(format!("{name}.code"));
            let sub_path = dir.join(format!("{name}.sub"));
            write(&code_path, &io::write_code(&ex.code))?;
            write(&sub_path, &subcode_text(&ex.subcode, &ex.code))?;
            Ok((
                format!("wrote {} and {}\n", code_path.display(), sub_path.display()),
                json!({
                    "name": name,
                    "expected": serde_json::to_value(&ex.expected).expect("expectations serialize"),
                }),
            ))
        }
    }
}

/// Subcode file text; invalid examples are written from raw generators.
fn subcode_text(spec: &SubcodeSpec, code: &CssCode) -> String {
    match spec.build(code.complex()) {
        Ok(v) => io::write_subcode(&v),
        Err(_) => {
            let dims = code.complex().dims();
            let section = |key: &str, len: usize, vs: &[chainsurg::f2linalg::BitVec]| {
                let m = chainsurg::f2linalg::F2Matrix::from_rows(len, vs.to_vec())
                    .expect("generator lengths");
                format!("{key}:\n{m}")
            };
            format!(
                "orientation: {}\n{}{}{}",
                spec.orientation,
                section("v2", dims[2], &spec.v2),
                section("v1", dims[1], &spec.v1),
                section("v0", dims[0], &spec.v0)
            )
        }
    }
}

fn propagate(code: &Path, subcode: &Path, pauli: &str) -> Outcome {
    let (code, v, m) = load_merge(code, subcode)?;
    let p = io::parse_pauli(pauli)?;
    let spec = SubcodeSpec::of(&v);
    let kind = match m.orientation() {
        Orientation::Z => StepKind::ZMerge { subcode: spec },
        Orientation::X => StepKind::XMerge { subcode: spec },
    };
    let logical = protocols::LogicalAction::ZType(chainsurg::f2linalg::F2Matrix::zeros(0, 0));
    let step = PlanStep {
        kind,
        before: code,
        after: m.merged_code(),
        logical,
        ops: physical_op_sequence(m.p(), m.orientation()),
    };
    let (out, flips) = protocols::propagate_pauli(&step, &p)?;
    let flips_text: String = flips.iter().map(|&f| if f { '1' } else { '0' }).collect();
    Ok((
        format!("{p} -> {out}\nflipped outcomes: {flips_text}\n"),
        json!({ "input": p.to_string(), "output": out.to_string(), "flips": flips }),
    ))
}
