use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use windtree::action::{
    cohomology_action, find_veech_generators, homology_action_of, restrict, smallest_invariant_subspace,
};
use windtree::group::{classify, ElementTag, GroupWord, PlanarMatrix};
use windtree::kernel::{
    build_chain, eigen_directions, enumerate_kernel, limit_set_sample, nontrivial_commutator, KernelWord,
};
use windtree::setup::WindTreeSetup;
use windtree::sim::{
    control_runs, generic_scan, median, percentile, random_start, rank2_check, run_direction, CoverSpec, DirectionRun,
    WindTreeTable,
};
use windtree::surface::{build_windtree_surface, homology, CohomologyClass, SurfaceFile, TranslationSurface};

use crate::artifact::*;
use crate::error::{CliError, CliResult};
use crate::manifest::Run;
use crate::{Cli, Command, DiffuseArgs, KernelCommand, RepArgs, RepCommand, ReportArgs, ScanArgs, SurfaceCommand};

pub fn run(cli: &Cli) -> CliResult<()> {
    let config = format!("{:?}", cli.command);
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Surface(SurfaceCommand::Validate { file }) => {
            let mut run = Run::start("surface validate", &config, cli.seed, out)?;
            surface_validate(&mut run, file)?;
            run.finish()?;
        }
        Command::Surface(SurfaceCommand::Build(t)) => {
            let mut run = Run::start("surface build", &config, cli.seed, out)?;
            let table = parse_table(&t.table)?;
            let wt = build_windtree_surface(table.a, table.b)?;
            run.write("surface.json", &to_json(&wt.surface().to_file()))?;
            run.finish()?;
        }
        Command::Rep(RepCommand::Compute(args)) => {
            let mut run = Run::start("rep compute", &config, cli.seed, out)?;
            let rep = rep_compute(args)?;
            run.write(REP_FILE, &to_json(&rep))?;
            run.finish()?;
        }
        Command::Kernel(KernelCommand::Search { rep, max_len, subspace }) => {
            let mut run = Run::start("kernel search", &config, cli.seed, out)?;
            let rep: RepArtifact = read_artifact(&input(rep, out, REP_FILE), "rep compute")?;
            let representation = rep.representation(*subspace)?;
            let sample = enumerate_kernel(&representation, &rep.planar()?, *max_len, *subspace);
            let artifact = KernelArtifact {
                version: SCHEMA_VERSION,
                subspace: *subspace,
                max_word_length: *max_len,
                words: sample.words.iter().map(KernelEntry::of).collect(),
            };
            run.write(KERNEL_FILE, &to_json(&artifact))?;
            run.finish()?;
        }
        Command::Kernel(KernelCommand::Chain { rep, sample_len, depth, stage_limit }) => {
            let mut run = Run::start("kernel chain", &config, cli.seed, out)?;
            let rep: RepArtifact = read_artifact(&input(rep, out, REP_FILE), "rep compute")?;
            let artifact = kernel_chain(&rep, *sample_len, *depth, *stage_limit)?;
            run.write(CHAIN_FILE, &to_json(&artifact))?;
            run.finish()?;
        }
        Command::Kernel(KernelCommand::Gaps { rep, kernel, budget }) => {
            let mut run = Run::start("kernel gaps", &config, cli.seed, out)?;
            let rep: RepArtifact = read_artifact(&input(rep, out, REP_FILE), "rep compute")?;
            let kernel: KernelArtifact = read_artifact(&input(kernel, out, KERNEL_FILE), "kernel search")?;
            let budgets = budget
                .split(',')
                .map(|b| b.trim().parse::<usize>().map_err(|_| CliError::Validation(format!("bad budget `{b}`"))))
                .collect::<CliResult<Vec<_>>>()?;
            let planar = rep.planar()?;
            let words =
                kernel.words.iter().map(|e| Ok(e.kernel_word(&planar)?.word)).collect::<CliResult<Vec<GroupWord>>>()?;
            let entries: Vec<GapEntry> = budgets
                .iter()
                .map(|&b| {
                    let s = limit_set_sample(&words, &planar, b);
                    GapEntry { budget: b, directions: s.len(), max_gap: num(s.max_gap), vacuous: s.vacuous }
                })
                .collect();
            let gaps: Vec<f64> = entries.iter().map(|e| parse_num(&e.max_gap)).collect::<CliResult<_>>()?;
            let artifact = GapsArtifact {
                version: SCHEMA_VERSION,
                non_increasing: gaps.windows(2).all(|p| p[1] <= p[0]),
                budgets: entries,
            };
            run.write(GAPS_FILE, &to_json(&artifact))?;
            run.finish()?;
        }
        Command::Diffuse(args) => {
            let mut run = Run::start("diffuse", &config, cli.seed, out)?;
            diffuse(&mut run, args, cli.seed, out)?;
            run.finish()?;
        }
        Command::Scan(args) => {
            let mut run = Run::start("scan", &config, cli.seed, out)?;
            scan(&mut run, args, cli.seed)?;
            run.finish()?;
        }
        Command::RankCheck(t) => {
            let mut run = Run::start("rank-check", &config, cli.seed, out)?;
            let table = parse_table(&t.table)?;
            let wt = build_windtree_surface(table.a, table.b)?;
            let lattice = homology(wt.surface());
            let spec = CoverSpec::windtree(&wt, &lattice)?;
            let (gh, gv) = (wt.horizontal_strip(), wt.vertical_strip());
            let r = rank2_check(&spec, [&gh, &gv], &lattice)?;
            let artifact = RankArtifact {
                version: SCHEMA_VERSION,
                table: TableEntry::of(&table),
                matrix: r.matrix.map(|row| row.map(|x| x.to_string())),
                determinant: r.determinant.to_string(),
                rank_two: r.rank_two,
            };
            run.write(RANK_FILE, &to_json(&artifact))?;
            run.finish()?;
        }
        Command::Report(args) => {
            let mut run = Run::start("report", &config, cli.seed, out)?;
            report(&mut run, args, out)?;
            run.finish()?;
        }
    }
    Ok(())
}

fn input(explicit: &Option<PathBuf>, out: &Path, default: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| out.join(default))
}

fn parse_table(s: &str) -> CliResult<WindTreeTable> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts[..] else {
        return Err(CliError::Validation(format!("table `{s}` is not `a,b`")));
    };
    Ok(WindTreeTable::new(parse_ratio(a)?, parse_ratio(b)?)?)
}

fn parse_pair(s: &str) -> CliResult<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y] = parts[..] else {
        return Err(CliError::Validation(format!("`{s}` is not `x,y`")));
    };
    Ok([parse_num(x)?, parse_num(y)?])
}

#[derive(Serialize)]
struct SurfaceCheck {
    version: u32,
    n_squares: usize,
    genus: usize,
    euler_characteristic: i64,
    cone_angle_multiples: Vec<usize>,
    homology_rank: usize,
}

fn surface_validate(run: &mut Run, file: &Path) -> CliResult<()> {
    let sf: SurfaceFile = read_input(file)?;
    let surface = TranslationSurface::from_file(&sf)?;
    let lattice = homology(&surface);
    let check = SurfaceCheck {
        version: SCHEMA_VERSION,
        n_squares: surface.n_squares(),
        genus: surface.genus(),
        euler_characteristic: surface.euler_characteristic(),
        cone_angle_multiples: surface.singularities().iter().map(|v| v.angle_multiple()).collect(),
        homology_rank: lattice.rank(),
    };
    let text = to_json(&check);
    print!("{text}");
    run.write("surface_check.json", &text)
}

fn rep_compute(args: &RepArgs) -> CliResult<RepArtifact> {
    let (surface, table, classes) = match (&args.surface, &args.seeds) {
        (Some(sp), Some(cp)) => {
            let surface = TranslationSurface::from_file(&read_input::<SurfaceFile>(sp)?)?;
            let seeds: SeedsFile = read_input(cp)?;
            if seeds.version != SCHEMA_VERSION {
                return Err(CliError::Validation(format!("seeds schema version {}", seeds.version)));
            }
            let classes = seeds
                .classes
                .iter()
                .map(|c| Ok(CohomologyClass::new(parse_int_vec(c)?)))
                .collect::<CliResult<Vec<_>>>()?;
            (surface, None, classes)
        }
        _ => {
            let table = parse_table(&args.table.table)?;
            let setup = WindTreeSetup::build(table.a, table.b, args.search_bound)?;
            (setup.windtree.surface().clone(), Some(TableEntry::of(&table)), setup.classes)
        }
    };
    let lattice = homology(&surface);
    if let Some(c) = classes.iter().find(|c| c.coefficients.len() != lattice.rank()) {
        return Err(CliError::Validation(format!(
            "class has {} coordinates, homology rank is {}",
            c.coefficients.len(),
            lattice.rank()
        )));
    }
    let generators = find_veech_generators(&surface, args.search_bound)?;
    let homology_matrices = generators
        .pair()
        .iter()
        .map(|g| homology_action_of(g, &surface, &lattice))
        .collect::<windtree::Result<Vec<_>>>()?;
    let cohomology_matrices = homology_matrices.iter().map(cohomology_action).collect::<windtree::Result<Vec<_>>>()?;
    let mut subspaces = Vec::new();
    for f in &classes {
        let sub = smallest_invariant_subspace(std::slice::from_ref(f), &cohomology_matrices)?;
        let rep = restrict(&cohomology_matrices, &sub)?;
        subspaces.push(SubspaceEntry {
            rank: sub.rank(),
            basis: sub.columns().iter().map(|c| int_vec(c)).collect(),
            saturated: sub.check_saturated(),
            images: rep.generator_images.iter().map(int_rows).collect(),
        });
    }
    let names = [("horizontal", generators.n), ("vertical", generators.m)];
    let to_matrix2 = |m: &PlanarMatrix| -> CliResult<Matrix2> {
        Ok(matrix2(&m.to_i64().ok_or_else(|| CliError::Validation("non-integral derivative".into()))?))
    };
    Ok(RepArtifact {
        version: SCHEMA_VERSION,
        table,
        search_bound: args.search_bound,
        surface: surface.to_file(),
        homology_rank: lattice.rank(),
        generators: generators
            .pair()
            .iter()
            .zip(names)
            .zip(homology_matrices.iter().zip(&cohomology_matrices))
            .map(|((g, (name, power)), (h, c))| {
                Ok(GeneratorEntry {
                    name: name.to_string(),
                    power: power as u64,
                    derivative: to_matrix2(&g.derivative)?,
                    homology: int_rows(h),
                    cohomology: int_rows(c),
                })
            })
            .collect::<CliResult<Vec<_>>>()?,
        extra: generators.extra.iter().map(|g| to_matrix2(&g.derivative)).collect::<CliResult<Vec<_>>>()?,
        classes: classes.iter().map(|c| int_vec(&c.coefficients)).collect(),
        subspaces,
    })
}

fn kernel_chain(rep: &RepArtifact, sample_len: usize, depth: usize, stage_limit: usize) -> CliResult<ChainArtifact> {
    let planar = rep.planar()?;
    let reps = rep.representations()?;
    let refs: Vec<_> = reps.iter().collect();
    let samples: Vec<_> =
        reps.iter().enumerate().map(|(i, r)| enumerate_kernel(r, &planar, sample_len, i + 1)).collect();
    let chain = build_chain(&samples, &refs, &planar, depth, stage_limit)?;
    let hyperbolic: Vec<&KernelWord> = chain[0]
        .generating_set
        .iter()
        .filter(|w| classify(&w.planar()).tag == ElementTag::Hyperbolic)
        .take(8)
        .collect();
    let mut commutator = None;
    'search: for h in &hyperbolic {
        for k in &hyperbolic {
            if let Ok((w, _)) = nontrivial_commutator(&h.word, &k.word, &planar) {
                let kw = KernelWord::from_word(w, &planar)
                    .ok_or_else(|| CliError::Validation("commutator entries out of range".into()))?;
                commutator = Some(CommutatorEntry {
                    h: h.word.to_string(),
                    k: k.word.to_string(),
                    commutator: KernelEntry::of(&kw),
                });
                break 'search;
            }
        }
    }
    Ok(ChainArtifact {
        version: SCHEMA_VERSION,
        sample_word_length: sample_len,
        conjugator_depth: depth,
        stage_limit,
        stages: chain
            .iter()
            .map(|c| StageEntry { stage: c.stage, words: c.generating_set.iter().map(KernelEntry::of).collect() })
            .collect(),
        commutator,
    })
}

fn summary(run: &DirectionRun) -> RunSummary {
    let last = run.series.checkpoints.last().map_or(0.0, |c| c.1);
    RunSummary {
        theta: num(run.theta),
        start: run.start.map(num),
        slope: num(run.estimate.slope),
        final_displacement: num(last),
        reflections: run.series.reflections,
        retries: run.retries,
    }
}

fn series_csv(run: &DirectionRun) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Validation(e.to_string());
    w.write_record(["t", "displacement", "max_displacement"]).map_err(csv_err)?;
    for (c, e) in run.series.checkpoints.iter().zip(&run.series.envelope) {
        w.write_record([num(c.0), num(c.1), num(e.1)]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write_rows(rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Validation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn start_point(args: &DiffuseArgs, table: &WindTreeTable, seed: u64) -> CliResult<[f64; 2]> {
    match &args.start {
        Some(s) => {
            let p = parse_pair(s)?;
            if !(0.0..=1.0).contains(&p[0]) || !(0.0..=1.0).contains(&p[1]) || !table.is_free(p[0], p[1]) {
                return Err(CliError::Validation(format!("start {s} is not a free point of cell (0, 0)")));
            }
            Ok(p)
        }
        None => Ok(random_start(table, &mut ChaCha8Rng::seed_from_u64(seed))),
    }
}

fn diffuse(run: &mut Run, args: &DiffuseArgs, seed: u64, out: &Path) -> CliResult<()> {
    let table = parse_table(&args.table.table)?;
    if !(args.horizon > 0.0) {
        return Err(CliError::Validation("horizon must be positive".into()));
    }
    let start = start_point(args, &table, seed)?;
    if let Some(theta) = args.direction {
        let t = windtree::sim::BilliardState::at_angle((0, 0), start, theta);
        let r = run_direction(&table, start, t.direction, args.horizon)?;
        run.write("diffuse.csv", &series_csv(&r)?)?;
        let artifact = DiffuseArtifact {
            version: SCHEMA_VERSION,
            table: TableEntry::of(&table),
            horizon: num(args.horizon),
            run: summary(&r),
            csv: "diffuse.csv".into(),
        };
        return run.write("diffuse.json", &to_json(&artifact));
    }
    let kernel_path = args.kernel.clone().expect("clap requires --kernel without --direction");
    let kernel: KernelArtifact = read_artifact(&kernel_path, "kernel search")?;
    let rep: RepArtifact = read_artifact(&input(&args.rep, out, REP_FILE), "rep compute")?;
    let planar = rep.planar()?;
    let words = kernel.words.iter().map(|e| e.kernel_word(&planar)).collect::<CliResult<Vec<_>>>()?;
    let directions = eigen_directions(&words);
    let runs = directions
        .par_iter()
        .map(|(_, w)| windtree::sim::kernel_direction_diffusion(&table, &w.planar(), start, args.horizon))
        .collect::<windtree::Result<Vec<_>>>()?;
    let entries: Vec<KernelRunEntry> = directions
        .iter()
        .zip(&runs)
        .map(|((_, w), r)| KernelRunEntry { word: KernelEntry::of(w), run: summary(r) })
        .collect();
    let mut rows =
        vec![vec!["word".to_string(), "expanding_direction".into(), "slope".into(), "final_displacement".into()]];
    for e in &entries {
        rows.push(vec![
            e.word.display.clone(),
            e.word.expanding_direction.clone().unwrap_or_default(),
            e.run.slope.clone(),
            e.run.final_displacement.clone(),
        ]);
    }
    run.write("kernel_diffusion.csv", &write_rows(&rows)?)?;
    let artifact = KernelDiffusionArtifact {
        version: SCHEMA_VERSION,
        table: TableEntry::of(&table),
        horizon: num(args.horizon),
        runs: entries,
    };
    run.write(KERNEL_DIFFUSION_FILE, &to_json(&artifact))
}

fn scan(run: &mut Run, args: &ScanArgs, seed: u64) -> CliResult<()> {
    let table = parse_table(&args.table.table)?;
    if !(args.horizon > 0.0) || args.count == 0 {
        return Err(CliError::Validation("horizon and count must be positive".into()));
    }
    let runs = generic_scan(&table, args.count, seed, args.horizon)?;
    let c = control_runs(&table, args.horizon)?;
    let controls = ScanControls {
        corridor: summary(&c.corridor),
        bounded_start: c.bounded_start.map(num),
        bounded_extent: num(c.bounded_extent()),
        bounded_reflections: c.bounded.reflections,
    };
    let slopes: Vec<f64> = runs.iter().map(|r| r.estimate.slope).collect();
    let mut rows = vec![vec!["theta".to_string(), "slope".into(), "final_displacement".into()]];
    let summaries: Vec<RunSummary> = runs.iter().map(summary).collect();
    for s in &summaries {
        rows.push(vec![s.theta.clone(), s.slope.clone(), s.final_displacement.clone()]);
    }
    run.write("scan.csv", &write_rows(&rows)?)?;
    let artifact = ScanArtifact {
        version: SCHEMA_VERSION,
        table: TableEntry::of(&table),
        seed,
        horizon: num(args.horizon),
        runs: summaries,
        median: num(median(&slopes)),
        percentile_5: num(percentile(&slopes, 5.0)),
        controls,
    };
    run.write(SCAN_FILE, &to_json(&artifact))
}

fn report(run: &mut Run, args: &ReportArgs, out: &Path) -> CliResult<()> {
    let dir = args.artifacts.clone().unwrap_or_else(|| out.to_path_buf());
    let rep: RepArtifact = read_artifact(&dir.join(REP_FILE), "rep compute")?;
    let kernel: KernelArtifact = read_artifact(&dir.join(KERNEL_FILE), "kernel search")?;
    let kd: KernelDiffusionArtifact = read_artifact(&dir.join(KERNEL_DIFFUSION_FILE), "diffuse --kernel")?;
    let scan: ScanArtifact = read_artifact(&dir.join(SCAN_FILE), "scan")?;
    let rank: RankArtifact = read_artifact(&dir.join(RANK_FILE), "rank-check")?;
    if kd.table != scan.table || rank.table != scan.table {
        return Err(CliError::Validation("artifacts disagree on the table".into()));
    }

    let generic: Vec<f64> = scan.runs.iter().map(|r| parse_num(&r.slope)).collect::<CliResult<_>>()?;
    let p5 = percentile(&generic, 5.0);
    let kernel_slopes: Vec<f64> = kd.runs.iter().map(|r| parse_num(&r.run.slope)).collect::<CliResult<_>>()?;
    let kernel_max = kernel_slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rows: Vec<ReportRow> = kd
        .runs
        .iter()
        .map(|r| ReportRow {
            word: r.word.display.clone(),
            matrix: r.word.matrix.clone(),
            expanding_direction: r.word.expanding_direction.clone().unwrap_or_default(),
            slope: r.run.slope.clone(),
        })
        .collect();
    let artifact = ReportArtifact {
        version: SCHEMA_VERSION,
        table: TableEntry::of(&scan.table.table()?),
        generators: rep.generators.iter().map(|g| g.derivative.clone()).collect(),
        kernel_words_searched: kernel.words.len(),
        kernel_max_slope: num(kernel_max),
        kernel: rows,
        generic_slopes: generic.iter().map(|&s| num(s)).collect(),
        generic_median: num(median(&generic)),
        generic_percentile_5: num(p5),
        kernel_below_generic: !kernel_slopes.is_empty() && kernel_max < p5,
        rank_matrix: rank.matrix.clone(),
        rank_two: rank.rank_two,
    };
    let mut csv_rows = vec![vec!["kind".to_string(), "word".into(), "direction".into(), "slope".into()]];
    for r in &artifact.kernel {
        csv_rows.push(vec!["kernel".into(), r.word.clone(), r.expanding_direction.clone(), r.slope.clone()]);
    }
    for r in &scan.runs {
        csv_rows.push(vec!["generic".into(), String::new(), r.theta.clone(), r.slope.clone()]);
    }
    run.write("report.csv", &write_rows(&csv_rows)?)?;
    run.write(REPORT_FILE, &to_json(&artifact))
}
