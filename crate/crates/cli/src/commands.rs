use crate::{Cli, Command, GenArgs};
use cosetra::coset::{
    build_coset_algebra, build_group_algebra, compare_otimes_composition, generate_triples, write_rel, GenBounds, GenOutcome,
};
use cosetra::frame::{
    build_semi_scaffold, extract_semi_frame, find_scaffold, parse_gtr, shifting_coset_well_defined, verify_semi_frame, write_gtr,
    FrameRecord, GroupTriple,
};
use cosetra::group::{parse_grp, FiniteGroup};
use cosetra::measure::lemmas::{run_suite, SuiteConfig};
use cosetra::measure::{census_report, Measured};
use cosetra::parallel::default_threads;
use cosetra::ra::{load_ra, load_ra_unchecked, verify_ra_axioms, write_ra, AtomStructure, CheckConfig};
use cosetra::repr::{decide_representable, render_roundtrip, render_verdict, roundtrip, IsoConfig, ReprConfig, RepresentabilityVerdict};
use sha2::{Digest, Sha256};
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

/// A finished command: the report text, whether every check passed, and any
/// files to place in the output directory.
struct Outcome {
    report: String,
    passed: bool,
    files: Vec<(String, String)>,
}

impl Outcome {
    fn new(report: String, passed: bool) -> Self {
        Outcome { report, passed, files: Vec::new() }
    }
}

struct Input {
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(path: &Path) -> Result<Input, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Input { path: path.to_path_buf(), text })
    }

    fn name(&self) -> String {
        self.path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    }

    fn stem(&self) -> String {
        self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
    }

    fn algebra(&self) -> Result<AtomStructure, String> {
        load_ra(&self.text).map_err(|e| format!("{}: {e}", self.path.display()))
    }

    /// Shape checks only, so that broken tables reach the axiom verifier.
    fn table(&self) -> Result<AtomStructure, String> {
        load_ra_unchecked(&self.text).map_err(|e| format!("{}: {e}", self.path.display()))
    }

    fn triple(&self) -> Result<GroupTriple, String> {
        let dir = self.path.parent().map(Path::to_path_buf).unwrap_or_default();
        let resolve = move |file: &str| -> Result<FiniteGroup, String> {
            let p = dir.join(file);
            let text = fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_grp(&text).map_err(|e| format!("{}: {e}", p.display()))
        };
        parse_gtr(&self.text, &resolve).map_err(|e| format!("{}: {e}", self.path.display()))
    }
}

fn header(command: &str, seed: u64, input: &str, digest_of: &[u8]) -> String {
    let digest = Sha256::digest(digest_of);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("cosetra {}\ncommand: {command}\nseed: {seed}\ninput: {input}\nsha256: {hex}\n\n", env!("CARGO_PKG_VERSION"))
}

fn check_config(cli: &Cli) -> CheckConfig {
    let threshold = cli.threshold as usize;
    let base = CheckConfig { seed: cli.seed, threads: default_threads(), ..CheckConfig::default() };
    if cli.sample {
        CheckConfig { threshold: 0, ternary_limit: 0, ..base }
    } else if cli.exhaustive {
        CheckConfig { threshold, ternary_limit: threshold, ..base }
    } else {
        CheckConfig { threshold, ternary_limit: base.ternary_limit.min(threshold), ..base }
    }
}

fn repr_config(cli: &Cli, a: &AtomStructure) -> Result<ReprConfig, String> {
    let threshold = if cli.sample { 0 } else { cli.threshold as usize };
    Ok(ReprConfig {
        order: order(cli, a)?,
        axioms: check_config(cli),
        iso: IsoConfig { threshold, seed: cli.seed, threads: default_threads(), ..IsoConfig::default() },
    })
}

fn order(cli: &Cli, a: &AtomStructure) -> Result<Option<Vec<usize>>, String> {
    let Some(items) = &cli.order else { return Ok(None) };
    items
        .iter()
        .map(|s| {
            a.atom_by_name(s)
                .or_else(|| s.parse::<usize>().ok().filter(|&i| i < a.atom_count()))
                .ok_or_else(|| format!("--order: unknown atom `{s}`"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

pub fn run(cli: &Cli) -> Result<bool, String> {
    let (name, head, outcome) = match &cli.command {
        Command::Gen(args) => {
            let bounds = bounds_line(args, cli.seed);
            ("gen".to_string(), header("gen", cli.seed, &bounds, bounds.as_bytes()), gen(cli, args)?)
        }
        command => {
            let (label, file) = match command {
                Command::Check { file } => ("check", file),
                Command::Measure { file } => ("measure", file),
                Command::Extract { file } => ("extract", file),
                Command::Build { file } => ("build", file),
                Command::Roundtrip { file } => ("roundtrip", file),
                Command::Represent { file } => ("represent", file),
                Command::Scaffold { file } => ("scaffold", file),
                Command::Gen(_) => unreachable!(),
            };
            let input = Input::read(file)?;
            let outcome = match label {
                "check" => check(cli, &input)?,
                "measure" => measure(cli, &input)?,
                "extract" => extract(cli, &input)?,
                "build" => build(cli, &input)?,
                "roundtrip" => round(cli, &input)?,
                "represent" => represent(cli, &input)?,
                _ => scaffold(cli, &input)?,
            };
            let head = header(label, cli.seed, &input.name(), input.text.as_bytes());
            (format!("{}.{label}", input.stem()), head, outcome)
        }
    };
    let report = format!("{head}{}", outcome.report);
    print!("{report}");
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let write = |file: &str, text: &str| {
            let p = dir.join(file);
            fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))
        };
        write(&format!("{name}.txt"), &report)?;
        for (file, text) in &outcome.files {
            write(file, text)?;
        }
    }
    Ok(outcome.passed)
}

fn check(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.table()?;
    let report = verify_ra_axioms(&a, &check_config(cli));
    let mut out = format!("atoms: {}\n", a.atom_count());
    for v in &report.verdicts {
        match &v.witness {
            None => writeln!(out, "{}: pass ({})", v.law.name(), v.coverage).unwrap(),
            Some(w) => writeln!(out, "{}: fail {} ({})", v.law.name(), w.render(&a), v.coverage).unwrap(),
        }
    }
    writeln!(out, "result: {}", pass(report.passed())).unwrap();
    Ok(Outcome::new(out, report.passed()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn measured<'a>(a: &'a AtomStructure) -> Result<Measured<'a>, String> {
    Measured::new(a).map_err(|e| e.to_string())
}

fn measure(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.algebra()?;
    let m = measured(&a)?;
    let suite = SuiteConfig { exhaustive_limit: cli.threshold as usize, seed: cli.seed, ..SuiteConfig::default() };
    let mut out = census_report(&m, &suite).map_err(|e| e.to_string())?;
    if !m.is_measurable() {
        writeln!(out, "\nresult: not-measurable").unwrap();
        return Ok(Outcome::new(out, false));
    }
    let report = run_suite(&m, &suite).map_err(|e| e.to_string())?;
    writeln!(out).unwrap();
    for o in &report.outcomes {
        match &o.failure {
            None => writeln!(out, "lemma: {} pass ({} cases)", o.name, o.cases).unwrap(),
            Some(f) => writeln!(out, "lemma: {} fail {f}", o.name).unwrap(),
        }
    }
    writeln!(out, "lemma-scope: {}", if report.exhaustive { "exhaustive" } else { "sampled" }).unwrap();
    writeln!(out, "result: {}", pass(report.passed())).unwrap();
    Ok(Outcome::new(out, report.passed()))
}

fn extract(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.algebra()?;
    let m = measured(&a)?;
    if !m.is_measurable() {
        return Ok(Outcome::new("result: not-measurable\n".into(), false));
    }
    let order = order(cli, &a)?;
    let s = build_semi_scaffold(&m, order.as_deref()).map_err(|e| e.to_string())?;
    let ext = extract_semi_frame(&m, &s).map_err(|e| e.to_string())?;
    let report = verify_semi_frame(&ext.triple);
    let mut out = report.render();
    let mut well_defined = true;
    for (x, y, z) in m.equivalence().map_err(|e| e.to_string())?.triples() {
        well_defined &= shifting_coset_well_defined(&m, &s, x, y, z).map_err(|e| e.to_string())?;
    }
    writeln!(out, "shifting-cosets: {}", if well_defined { "well-defined" } else { "ambiguous" }).unwrap();
    writeln!(out, "frame: {}", FrameRecord::new(ext.triple.clone()).frame).unwrap();
    let gtr = write_gtr(&ext.triple);
    let ok = report.passed() && well_defined;
    writeln!(out, "result: {}", pass(ok)).unwrap();
    out.push('\n');
    out.push_str(&gtr);
    let mut outcome = Outcome::new(out, ok);
    outcome.files.push((format!("{}.gtr", input.stem()), gtr));
    Ok(outcome)
}

fn build(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let f = input.triple()?;
    let record = FrameRecord::new(f.clone());
    let alg = if record.frame { build_group_algebra(&record) } else { build_coset_algebra(&f) };
    let alg = alg.map_err(|e| e.to_string())?;
    let mut out = String::new();
    writeln!(out, "frame: {}", record.frame).unwrap();
    writeln!(out, "atoms: {}", alg.atoms.len()).unwrap();
    writeln!(out, "base: {}", alg.base.len()).unwrap();
    let axioms = verify_ra_axioms(&alg.structure, &check_config(cli));
    for v in axioms.failures() {
        let w = v.witness.as_ref().map(|w| w.render(&alg.structure)).unwrap_or_default();
        writeln!(out, "{}: fail {w}", v.law.name()).unwrap();
    }
    writeln!(out, "axioms: {}", pass(axioms.passed())).unwrap();
    if record.frame {
        let diffs = compare_otimes_composition(&build_coset_algebra(&f).map_err(|e| e.to_string())?);
        writeln!(out, "otimes-vs-composition: {} discrepancies", diffs.len()).unwrap();
    }
    writeln!(out, "result: {}", pass(axioms.passed())).unwrap();
    let mut outcome = Outcome::new(out, axioms.passed());
    outcome.files.push((format!("{}.ra", input.stem()), write_ra(&alg.structure)));
    outcome.files.push((format!("{}.rel", input.stem()), write_rel(&alg)));
    Ok(outcome)
}

fn round(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.algebra()?;
    let r = roundtrip(&a, &repr_config(cli, &a)?).map_err(|e| e.to_string())?;
    let mut outcome = Outcome::new(render_roundtrip(&a, &r), r.passed());
    outcome.files.push((format!("{}.gtr", input.stem()), write_gtr(&r.extraction.triple)));
    Ok(outcome)
}

fn represent(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.algebra()?;
    let v = decide_representable(&a, &repr_config(cli, &a)?).map_err(|e| e.to_string())?;
    let rel_name = format!("{}.rel", input.stem());
    let (witness, ok) = match &v {
        RepresentabilityVerdict::GroupRepresentable(w) => (Some(write_rel(&w.algebra)), w.validated()),
        RepresentabilityVerdict::CosetOnly(w) => (Some(write_rel(&w.roundtrip.algebra)), false),
        RepresentabilityVerdict::NotMeasurable => (None, false),
    };
    let named = witness.as_ref().and(cli.out.as_ref()).map(|_| rel_name.as_str());
    let mut outcome = Outcome::new(render_verdict(&a, &v, named), ok);
    if let Some(text) = witness {
        outcome.files.push((rel_name, text));
    }
    Ok(outcome)
}

fn scaffold(cli: &Cli, input: &Input) -> Result<Outcome, String> {
    let a = input.algebra()?;
    let m = measured(&a)?;
    if !m.is_measurable() {
        return Ok(Outcome::new("result: not-measurable\n".into(), false));
    }
    let search = find_scaffold(&m, order(cli, &a)?.as_deref()).map_err(|e| e.to_string())?;
    let mut out = String::new();
    writeln!(out, "search-nodes: {}", search.nodes).unwrap();
    writeln!(out, "search-space: {}", search.space).unwrap();
    match &search.scaffold {
        Some(s) => {
            for (&(x, y), &atom) in &s.entries {
                if s.position(x) < s.position(y) {
                    writeln!(out, "scaffold: {} {} {}", a.name(x), a.name(y), a.name(atom)).unwrap();
                }
            }
            writeln!(out, "result: found").unwrap();
        }
        None => writeln!(out, "result: none").unwrap(),
    }
    Ok(Outcome::new(out, search.scaffold.is_some()))
}

fn bounds_line(args: &GenArgs, seed: u64) -> String {
    let groups = args.groups.as_ref().map(|g| g.join(",")).unwrap_or_else(|| "all".into());
    let limit = args.limit.map(|l| l.to_string()).unwrap_or_else(|| "none".into());
    let mode = match args.attempts {
        Some(n) => format!("sample {n} seed {seed}"),
        None => "exhaustive".into(),
    };
    format!("indices {} max-order {} groups {groups} limit {limit} {mode}", args.indices, args.max_order)
}

fn gen(cli: &Cli, args: &GenArgs) -> Result<Outcome, String> {
    let bounds = GenBounds {
        indices: args.indices,
        max_order: args.max_order,
        groups: args.groups.clone(),
        check_axioms: true,
        limit: args.limit,
        sample: args.attempts.map(|n| (cli.seed, n)),
    };
    let mut out = String::new();
    let mut files = Vec::new();
    let (mut ra, mut group, mut coset, mut failed) = (0u64, 0u64, 0u64, 0u64);
    let mut error = None;
    let stats = generate_triples(&bounds, &mut |g| {
        let i = ra;
        let label = match &g.outcome {
            GenOutcome::Ra => "ra".to_string(),
            GenOutcome::NotRa(law) => format!("not-ra {law}"),
            GenOutcome::Unchecked => "unchecked".to_string(),
        };
        if g.outcome != GenOutcome::Ra {
            return true;
        }
        ra += 1;
        let a = &g.algebra.structure;
        let verdict = match repr_config(cli, a).and_then(|c| decide_representable(a, &c).map_err(|e| e.to_string())) {
            Ok(v) => v,
            Err(e) => {
                error = Some(e);
                return false;
            }
        };
        match &verdict {
            RepresentabilityVerdict::GroupRepresentable(w) => {
                group += 1;
                failed += !w.validated() as u64;
            }
            RepresentabilityVerdict::CosetOnly(w) => {
                coset += 1;
                failed += !w.roundtrip.passed() as u64;
            }
            RepresentabilityVerdict::NotMeasurable => failed += 1,
        }
        let shifts = g.triple.nontrivial_shifts().len();
        writeln!(out, "triple {i}: group {} atoms {} shifts {shifts} {label} {}", g.group, a.atom_count(), verdict.kind())
            .unwrap();
        files.push((format!("gen_{i}.gtr"), write_gtr(&g.triple)));
        files.push((format!("gen_{i}.ra"), write_ra(a)));
        true
    });
    if let Some(e) = error {
        return Err(e);
    }
    writeln!(out, "candidates: {}", stats.candidates).unwrap();
    writeln!(out, "semi-frames: {}", stats.semi_frames).unwrap();
    writeln!(out, "relation-algebras: {ra}").unwrap();
    writeln!(out, "group_representable: {group}").unwrap();
    writeln!(out, "coset_only: {coset}").unwrap();
    writeln!(out, "inconsistent: {}", stats.inconsistent).unwrap();
    let ok = failed == 0 && stats.inconsistent == 0;
    writeln!(out, "result: {}", pass(ok)).unwrap();
    Ok(Outcome { report: out, passed: ok, files })
}
