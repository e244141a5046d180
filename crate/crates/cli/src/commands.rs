//! Command implementations.

use std::path::{Path, PathBuf};

use mfe_core::analysis::{self, fields};
use mfe_core::basis::{gram_hs, BasisFamily, BasisSpec};
use mfe_core::decoder;
use mfe_core::encoder::{
    self, encode_joint, encode_measured, encode_pointcloud, Block, JointManifoldFunction,
};
use mfe_core::geometry::ManifoldFunction;
use mfe_core::io;
use mfe_core::neuralop::{
    self,
    poisson::{poisson_net_spec, preset_train_config, Preset},
    MioNetParams, TrainMode,
};

use crate::errors::CliError;
use crate::{
    ConsistencyArgs, EncodeArgs, EvaluateArgs, GenDataArgs, McStudyArgs, ReconstructArgs,
    ReportArgs, StudyArgs, TrainArgs,
};

fn parse_family(name: &str) -> BasisFamily {
    match name {
        "legendre" => BasisFamily::LegendreTensor,
        _ => BasisFamily::FourierTensor,
    }
}

fn load_mesh(path: &Path) -> Result<ManifoldFunction, CliError> {
    let loaded = io::load_manifold(path)?;
    if !loaded.report.is_clean() {
        eprintln!(
            "note: {} has advisory findings: {}",
            path.display(),
            loaded.report.summary()
        );
    }
    Ok(loaded.mf)
}

pub fn encode(args: EncodeArgs) -> Result<(), CliError> {
    let encoded = if let Some(cloud_path) = &args.pointcloud {
        let loaded = io::load_point_cloud_csv(cloud_path, args.dim)?;
        let spec = BasisSpec::new(
            parse_family(&args.family),
            args.n,
            loaded.mf.manifold.ambient_dim(),
        )?;
        let man = &loaded.mf.manifold;
        let mut points = Vec::with_capacity(man.vertex_count() * man.ambient_dim());
        for i in 0..man.vertex_count() {
            points.extend_from_slice(man.vertex(i));
        }
        encode_pointcloud(&points, &loaded.mf.values, &spec, args.seed.unwrap())?
    } else {
        let mesh_path = args.mesh.as_ref().expect("clap group guarantees a source");
        let mf = load_mesh(mesh_path)?;
        let spec = BasisSpec::new(
            parse_family(&args.family),
            args.n,
            mf.manifold.ambient_dim(),
        )?;
        if !args.joint.is_empty() {
            let mut jmf = JointManifoldFunction::new(mf.manifold.ambient_dim());
            let mut seen = vec![false; mf.manifold.ambient_dim() + 1];
            for part in std::iter::once(Ok(mf)).chain(args.joint.iter().map(|p| load_mesh(p))) {
                let part = part?;
                let k = part.manifold.intrinsic_dim();
                if seen[k] {
                    return Err(CliError::data(format!(
                        "joint encoding already has a part of dimension {k}"
                    )));
                }
                seen[k] = true;
                jmf = jmf.with_part(part)?;
            }
            encode_joint(&jmf, &spec, args.degree)?
        } else if args.measured {
            let masses = lumped_masses(&mf)?;
            encode_measured(&mf, &masses, &spec, args.degree)?
        } else {
            encoder::encode(&mf, &spec, args.degree)?
        }
    };
    io::save_encoded(&encoded, &args.out)?;
    let blocks: Vec<&str> = encoded.blocks().map(|(b, _)| b.name()).collect();
    println!(
        "encoded family={} n={} d={} kappa={} blocks={}",
        encoded.spec().family().name(),
        encoded.spec().order(),
        encoded.spec().dimension(),
        encoded.spec().len(),
        blocks.join("+")
    );
    Ok(())
}

/// Per-vertex masses proportional to the lumped Hausdorff measure of the
/// adjacent simplices (uniform for point sets), normalized to sum to 1.
fn lumped_masses(mf: &ManifoldFunction) -> Result<Vec<f64>, CliError> {
    let man = &mf.manifold;
    let mut masses = vec![0.0; man.vertex_count()];
    for s in 0..man.simplices().len() {
        let share = man.simplex_measure_at(s)? / man.simplices()[s].len() as f64;
        for &v in &man.simplices()[s] {
            masses[v] += share;
        }
    }
    let total: f64 = masses.iter().sum();
    for m in masses.iter_mut() {
        *m /= total;
    }
    Ok(masses)
}

pub fn reconstruct(args: ReconstructArgs) -> Result<(), CliError> {
    let encoded = io::load_encoded(&args.encoded)?;
    let gram = match args.s {
        Some(s) if s > 0 => Some(gram_hs(encoded.spec(), s)?),
        _ => None,
    };
    for (block, _) in encoded.blocks() {
        let grid = match &gram {
            Some(g) => decoder::reconstruct_field_premultiplied(&encoded, block, args.grid, g)?,
            None => decoder::reconstruct_field(&encoded, block, args.grid)?,
        };
        let grid = if args.log_transform {
            decoder::visual_transform(&grid)
        } else {
            grid
        };
        let csv = suffixed(&args.out, block, "csv");
        let pgm = suffixed(&args.out, block, "pgm");
        io::write_grid_csv(&grid, &csv)?;
        io::write_pgm(&grid, &pgm)?;
        println!("{} {}", csv.display(), pgm.display());
    }
    Ok(())
}

fn suffixed(base: &Path, block: Block, ext: &str) -> PathBuf {
    let mut name = base.as_os_str().to_os_string();
    name.push(".");
    name.push(block.name());
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

pub fn study(args: StudyArgs) -> Result<(), CliError> {
    let mf = load_mesh(&args.mesh)?;
    let d = mf.manifold.ambient_dim();
    let phi = fields::parse_test_function(&args.test_fn, d).map_err(CliError::data)?;
    let study = analysis::convergence_study(
        &mf,
        parse_family(&args.family),
        args.s,
        &[(args.test_fn.as_str(), phi.as_ref())],
        &args.n_list,
    )?;
    io::write_rate_csv(&study, &args.out)?;
    for slope in &study.slopes {
        match slope.slope {
            Some(v) => println!(
                "slope block={} test_fn={} slope={v}",
                slope.block.name(),
                slope.test_fn
            ),
            None => println!(
                "slope block={} test_fn={} at-floor ({} points above floor)",
                slope.block.name(),
                slope.test_fn,
                slope.points_used
            ),
        }
    }
    Ok(())
}

pub fn consistency(args: ConsistencyArgs) -> Result<(), CliError> {
    let d = args.point.len();
    let spec = BasisSpec::new(parse_family(&args.family), args.n, d)?;
    let deviations = analysis::consistency_check(&args.point, &args.radii, &spec)?;
    io::write_consistency_csv(&args.radii, &deviations, &args.out)?;
    for (r, dev) in args.radii.iter().zip(&deviations) {
        println!("radius={r} deviation={dev}");
    }
    Ok(())
}

pub fn mc_study(args: McStudyArgs) -> Result<(), CliError> {
    let mf = load_mesh(&args.mesh)?;
    let spec = BasisSpec::new(
        parse_family(&args.family),
        args.n,
        mf.manifold.ambient_dim(),
    )?;
    let study = analysis::mc_vs_quadrature(&mf, &spec, &args.n_list, args.seeds, args.seed)?;
    io::write_mc_csv(&study, &args.out)?;
    println!("slope={}", study.slope);
    Ok(())
}

pub fn gen_data(args: GenDataArgs) -> Result<(), CliError> {
    let dataset = match args.problem.as_str() {
        "poisson1d" => neuralop::gen_poisson1d_dataset(args.count, args.n, args.seed)?,
        other => return Err(CliError::data(format!("unknown problem '{other}'"))),
    };
    io::save_dataset(&dataset, &args.out)?;
    println!(
        "generated {} samples (problem={}, n={}, seed={})",
        dataset.samples.len(),
        args.problem,
        args.n,
        args.seed
    );
    Ok(())
}

pub fn train(args: TrainArgs) -> Result<(), CliError> {
    let dataset = io::load_dataset(&args.data)?;
    let preset = Preset::parse(&args.preset).map_err(CliError::data)?;
    let net_spec = match dataset.meta.generator.as_str() {
        "poisson1d" => {
            let n = dataset
                .meta
                .basis
                .as_ref()
                .map(|b| b.len())
                .or_else(|| dataset.samples.first().map(|s| s.branch_inputs[0].len()))
                .ok_or_else(|| CliError::data("dataset is empty"))?;
            poisson_net_spec(preset, n)
        }
        other => {
            return Err(CliError::data(format!(
                "no network blueprint for generator '{other}'"
            )))
        }
    };
    let mut cfg = preset_train_config(preset, args.seed);
    cfg.mode = match args.mode.as_str() {
        "fast" => TrainMode::Fast,
        _ => TrainMode::Deterministic,
    };
    let mut params = MioNetParams::init(&net_spec, args.seed)?;
    let report = neuralop::train(&mut params, &dataset, &cfg)?;
    let final_loss = report.loss_history.last().copied().unwrap_or(0.0);
    let checkpoint = io::Checkpoint::new(
        io::CheckpointMeta {
            preset: preset.name().to_string(),
            seed: args.seed,
            generator: dataset.meta.generator.clone(),
            iterations: report.loss_history.len(),
            final_loss,
        },
        params,
    );
    io::save_checkpoint(&checkpoint, &args.out)?;
    println!(
        "trained {} iterations, final loss {final_loss}",
        report.loss_history.len()
    );
    Ok(())
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let checkpoint = io::load_checkpoint(&args.model)?;
    let dataset = io::load_dataset(&args.data)?;
    let report = neuralop::evaluate_relative_l2(&checkpoint.params, &dataset)?;
    println!(
        "mean relative L2 error: {} ({} samples, {} excluded)",
        report.mean,
        report.per_sample.len(),
        report.excluded
    );
    Ok(())
}

pub fn report(args: ReportArgs) -> Result<(), CliError> {
    let rows = io::read_rate_csv(&args.csv)?;
    if rows.is_empty() {
        return Err(CliError::data("rate CSV has no data rows"));
    }
    let mut series: Vec<(String, String)> = Vec::new();
    for row in &rows {
        let key = (row.block.clone(), row.test_fn.clone());
        if !series.contains(&key) {
            series.push(key);
        }
    }
    for (block, test_fn) in series {
        let mut pairs: Vec<(usize, f64)> = rows
            .iter()
            .filter(|r| r.block == block && r.test_fn == test_fn)
            .map(|r| (r.n, r.error))
            .collect();
        pairs.sort_by_key(|p| p.0);
        let ns: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let errors: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        match analysis::estimate_rate(&errors, &ns) {
            Ok(slope) => println!("block={block} test_fn={test_fn} slope={slope}"),
            Err(e) => println!("block={block} test_fn={test_fn} no-fit ({e})"),
        }
    }
    Ok(())
}
