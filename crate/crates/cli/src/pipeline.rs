use std::path::{Path, PathBuf};

use nldiff_core::baselines::{linear_diffusion_1d, linear_diffusion_2d, run_pm_1d, run_pm_2d};
use nldiff_core::config::RunConfig;
use nldiff_core::io::{read_image, read_signal_csv, snapshot_path, write_image, write_metrics_csv, write_signal_csv};
use nldiff_core::metrics::image_stats;
use nldiff_core::synth::{piecewise, step_edge, SpikeTrain, SynthKind, TestCard};
use nldiff_core::{
    mse, psnr, run_1d, run_2d, Config2D, EdgeStopSpec, Error, Image2D, Result, Signal1D,
    SolverParams, StepStats, Window1D, Window2D,
};

const DEFAULT_SEED: u64 = 1;

pub fn run(cfg: &RunConfig) -> Result<()> {
    configure_threads(cfg.threads.unwrap_or(0))?;
    match cfg.mode.as_deref().unwrap_or_default() {
        "denoise1d" => denoise_1d(cfg),
        "denoise2d" => denoise_2d(cfg),
        "pm1d" => pm_1d(cfg),
        "pm2d" => pm_2d(cfg),
        "linear" => linear(cfg),
        "synth" => synth(cfg),
        "metrics" => metrics(cfg),
        other => Err(Error::Argument(format!("unknown mode {other:?}"))),
    }
}

fn configure_threads(n: usize) -> Result<()> {
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Argument(format!("--{flag} is required")))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn range(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let r = hi - lo;
    if r > 0.0 {
        r
    } else {
        1.0
    }
}

fn edge_stop(cfg: &RunConfig) -> Result<EdgeStopSpec> {
    let base = EdgeStopSpec::default();
    let eps_g = cfg.eps_g.unwrap_or(base.eps_g);
    match cfg.edge_stop.as_deref().unwrap_or("poly") {
        "poly" => Ok(EdgeStopSpec::polynomial(eps_g)),
        "pm" => Ok(EdgeStopSpec::perona_malik(eps_g, cfg.lambda.unwrap_or(base.lambda))),
        other => Err(Error::Argument(format!(
            "unknown edge-stop form {other:?} (expected poly or pm)"
        ))),
    }
}

/// Step size and count default to the 2D stability bound when `explicit`.
fn params(cfg: &RunConfig, data: &[f64], sigma0: f64, explicit: bool) -> Result<SolverParams> {
    Ok(SolverParams {
        tau: cfg.tau.unwrap_or(if explicit { 0.2 } else { 0.1 }),
        steps: cfg.steps.unwrap_or(300),
        eps_tv: cfg.eps_tv.unwrap_or(1e-4 * range(data)),
        edge_stop: edge_stop(cfg)?,
        sigma0,
    })
}

fn report(label: &str, stats: &[StepStats], extra: &str, truth: Option<(&[f64], &[f64])>) -> Result<()> {
    let last = stats.last().expect("stats include step 0");
    let mut line = format!(
        "{label} steps={} mean={:.12} l2={:.6} tv={:.6}{extra}",
        last.step, last.mean, last.l2, last.tv
    );
    if let Some((reference, output)) = truth {
        line += &format!(
            " mse={:.6e} psnr={:.4}",
            mse(reference, output)?,
            psnr(reference, output)?
        );
    }
    println!("{line}");
    Ok(())
}

fn finish_1d(
    cfg: &RunConfig,
    label: &str,
    output: &Signal1D,
    snapshots: &[(usize, Signal1D)],
    stats: &[StepStats],
) -> Result<()> {
    let out = required(&cfg.output, "out")?;
    write_signal_csv(out, output)?;
    for (k, s) in snapshots {
        write_signal_csv(&snapshot_path(out, *k), s)?;
    }
    if let Some(path) = &cfg.metrics {
        write_metrics_csv(path, stats)?;
    }
    let truth = cfg.truth.as_deref().map(read_signal_csv).transpose()?;
    report(label, stats, "", truth.as_ref().map(|t| (t.values(), output.values())))
}

fn finish_2d(
    cfg: &RunConfig,
    label: &str,
    output: &Image2D,
    snapshots: &[(usize, Image2D)],
    stats: &[StepStats],
    extra: &str,
) -> Result<()> {
    let out = required(&cfg.output, "out")?;
    write_image(out, output)?;
    for (k, img) in snapshots {
        write_image(&snapshot_path(out, *k), img)?;
    }
    if let Some(path) = &cfg.metrics {
        write_metrics_csv(path, stats)?;
    }
    let truth = cfg.truth.as_deref().map(read_image).transpose()?;
    report(label, stats, extra, truth.as_ref().map(|t| (t.pixels(), output.pixels())))
}

fn read_signal(cfg: &RunConfig) -> Result<Signal1D> {
    read_signal_csv(required(&cfg.input, "in")?)
}

fn read_img(cfg: &RunConfig) -> Result<Image2D> {
    read_image(required(&cfg.input, "in")?)
}

fn denoise_1d(cfg: &RunConfig) -> Result<()> {
    let u = read_signal(cfg)?;
    let w = Window1D::new(cfg.l.unwrap_or(20))?;
    let p = params(cfg, u.values(), cfg.sigma0.unwrap_or(0.0) / u.h(), false)?;
    let run = run_1d(&u, &p, w, cfg.snapshot_stride.unwrap_or(0))?;
    finish_1d(cfg, "denoise1d", &run.output, &run.snapshots, &run.stats)
}

fn window_2d(cfg: &RunConfig) -> Result<Window2D> {
    Window2D::new(cfg.q1.unwrap_or(2), cfg.q2.unwrap_or(2))
}

fn denoise_2d(cfg: &RunConfig) -> Result<()> {
    let img = read_img(cfg)?;
    let p = params(cfg, img.pixels(), cfg.sigma0.unwrap_or(0.5), true)?;
    let base = Config2D::default();
    let c = Config2D {
        window: window_2d(cfg)?,
        modes: cfg.modes.unwrap_or(base.modes),
        boundary_mesh: cfg.bmesh.unwrap_or(base.boundary_mesh),
        refresh_every: cfg.refresh_every.unwrap_or(base.refresh_every),
    };
    let run = run_2d(&img, &p, &c, cfg.snapshot_stride.unwrap_or(0))?;
    let extra = format!(" clamps={} pivots={}", run.clamp_events, run.pivots);
    finish_2d(cfg, "denoise2d", &run.output, &run.snapshots, &run.stats, &extra)
}

fn pm_1d(cfg: &RunConfig) -> Result<()> {
    let u = read_signal(cfg)?;
    let p = params(cfg, u.values(), cfg.sigma0.unwrap_or(0.0) / u.h(), false)?;
    let lambda = cfg.lambda.unwrap_or(0.1 * range(u.values()) / u.h());
    let run = run_pm_1d(&u, &p, lambda, cfg.snapshot_stride.unwrap_or(0))?;
    finish_1d(cfg, "pm1d", &run.output, &run.snapshots, &run.stats)
}

fn pm_2d(cfg: &RunConfig) -> Result<()> {
    let img = read_img(cfg)?;
    let p = params(cfg, img.pixels(), cfg.sigma0.unwrap_or(0.0), true)?;
    let lambda = cfg.lambda.unwrap_or(0.1 * range(img.pixels()));
    let run = run_pm_2d(&img, &p, lambda, cfg.snapshot_stride.unwrap_or(0))?;
    finish_2d(cfg, "pm2d", &run.output, &run.snapshots, &run.stats, "")
}

fn linear(cfg: &RunConfig) -> Result<()> {
    let input = required(&cfg.input, "in")?;
    let t = cfg.time.unwrap_or(1.0);
    if is_csv(input) {
        let u = read_signal_csv(input)?;
        let out = linear_diffusion_1d(&u, t)?;
        let stats = [nldiff_core::metrics::signal_stats(0, out.values())];
        finish_1d(cfg, "linear", &out, &[], &stats)
    } else {
        let img = read_image(input)?;
        let out = linear_diffusion_2d(&img, t)?;
        let stats = [image_stats(0, out.pixels(), out.width())];
        finish_2d(cfg, "linear", &out, &[], &stats, "")
    }
}

/// `dir/name_truth.ext` for `dir/name.ext`.
fn truth_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_truth.{}", ext.to_string_lossy()),
        None => format!("{stem}_truth"),
    };
    out.with_file_name(name)
}

fn synth(cfg: &RunConfig) -> Result<()> {
    let name = cfg.kind.as_deref().unwrap_or("spiketrain");
    let kind: SynthKind = name.parse()?;
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let out = cfg.output.clone().unwrap_or_else(|| {
        PathBuf::from(format!("{name}.{}", if kind.is_image() { "pgm" } else { "csv" }))
    });
    let truth = cfg.truth.clone().unwrap_or_else(|| truth_path(&out));
    match kind {
        SynthKind::Piecewise => {
            let n = cfg.size.unwrap_or(300);
            let s = piecewise(n, &[0.2, 0.8, 0.4], cfg.h.unwrap_or(1.0), cfg.noise.unwrap_or(0.1), seed)?;
            write_signal_csv(&out, &s.noisy)?;
            write_signal_csv(&truth, &s.truth)?;
        }
        SynthKind::SpikeTrain => {
            let base = SpikeTrain::default();
            let train = SpikeTrain {
                len: cfg.size.unwrap_or(base.len),
                h: cfg.h.unwrap_or(base.h),
                noise: cfg.noise.unwrap_or(base.noise),
                ..base
            };
            let s = train.generate(seed)?;
            write_signal_csv(&out, &s.noisy)?;
            write_signal_csv(&truth, &s.truth)?;
        }
        SynthKind::StepEdge => {
            let n = cfg.size.unwrap_or(64);
            let s = step_edge(n, n, 0.2, 0.8, cfg.noise.unwrap_or(0.05), seed)?;
            write_image(&out, &s.noisy)?;
            write_image(&truth, &s.truth)?;
        }
        SynthKind::TestCard => {
            let s = TestCard::new(cfg.size.unwrap_or(126))?.generate(cfg.noise.unwrap_or(0.05), seed)?;
            write_image(&out, &s.noisy)?;
            write_image(&truth, &s.truth)?;
        }
    }
    println!("synth kind={name} seed={seed} out={} truth={}", out.display(), truth.display());
    Ok(())
}

fn metrics(cfg: &RunConfig) -> Result<()> {
    let input = required(&cfg.input, "in")?;
    let truth = required(&cfg.truth, "truth")?;
    let (a, b) = if is_csv(input) {
        (read_signal_csv(truth)?.into_values(), read_signal_csv(input)?.into_values())
    } else {
        (read_image(truth)?.into_pixels(), read_image(input)?.into_pixels())
    };
    println!("metrics mse={:.6e} psnr={:.4}", mse(&a, &b)?, psnr(&a, &b)?);
    Ok(())
}
