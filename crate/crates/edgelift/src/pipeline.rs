//! End-to-end runs: decompose with every requested method, verify the
//! reconstruction from the stored artifacts, and write reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use edgelift_core::lifting::{compose_pair, decompose_pair};
use edgelift_core::metrics::{entropy_bits, lp_quality, mean_energy};
use edgelift_core::phantom::{generate_phantom, BENCHMARK_NOISE_SIGMA};
use edgelift_core::{Axis, Compensation, Frame, Method, PairMotion, PhantomSpec, RadialMotion, SubbandPair, Volume};

use crate::config::{Config, PHANTOM_INPUT};
use crate::format::{decode_mvf, encode_mvf, load_volume, save_volume, write_triplets, Payload};
use crate::report::{Report, Row, PSNR_REFERENCE};
use crate::{Error, Result};

pub const REPORT_FILE: &str = "report.csv";
pub const CONFIG_FILE: &str = "run.cfg";
pub const LP_FILE: &str = "lp.mcwl";
pub const HP_FILE: &str = "hp.mcwl";

pub fn mvf_file_name(pair: usize) -> String {
    format!("pair_{pair:03}.mvf")
}

pub fn matrix_file_name(pair: usize) -> String {
    format!("pair_{pair:03}_jp.txt")
}

/// Benchmark phantom used when the configured input is `phantom`.
pub fn phantom_spec_for_seed(seed: u64) -> PhantomSpec {
    PhantomSpec {
        rng_seed: seed,
        noise_sigma: BENCHMARK_NOISE_SIGMA,
        ..PhantomSpec::default()
    }
}

/// Loads the configured input volume.
pub fn load_input(config: &Config) -> Result<Volume> {
    match config.input.as_deref() {
        None => Err(Error::Config("no input given".into())),
        Some(PHANTOM_INPUT) => Ok(generate_phantom(&phantom_spec_for_seed(config.seed))?.0),
        Some(path) => Ok(load_volume(path)?.volume),
    }
}

/// One lifted pair together with its stored motion.
#[derive(Debug, Clone)]
pub struct PairResult {
    pub subbands: SubbandPair,
    pub motion: PairMotion,
    /// Encoded MVF; empty for `none`.
    pub mvf: Vec<u8>,
    /// Prediction matrix in triplet form, when requested for `graph`.
    pub matrix: Option<String>,
}

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub pairs: Vec<PairResult>,
}

impl MethodRun {
    pub fn lp(&self, axis: Axis) -> Result<Volume> {
        Ok(Volume::new(self.pairs.iter().map(|p| p.subbands.lp.clone()).collect(), axis)?)
    }

    pub fn hp(&self, axis: Axis) -> Result<Volume> {
        Ok(Volume::new(self.pairs.iter().map(|p| p.subbands.hp.clone()).collect(), axis)?)
    }
}

fn lift_and_verify(
    config: &Config,
    method: Method,
    pair: usize,
    odd: &Frame,
    even: &Frame,
    dump_matrix: bool,
) -> Result<PairResult> {
    let params = config.params_for(method);
    let (subbands, motion) = decompose_pair(odd, even, &params)?;
    let (mvf, stored) = match motion {
        PairMotion::None => (Vec::new(), PairMotion::None),
        ref m => {
            let bytes = encode_mvf(m)?;
            let decoded = decode_mvf(&bytes)?;
            (bytes, decoded)
        }
    };
    let (odd_r, even_r) = compose_pair(&subbands, &stored, &params)?;
    if &odd_r != odd || &even_r != even {
        return Err(Error::Reconstruction {
            method: method.name(),
            pair,
        });
    }
    let matrix = if dump_matrix && method == Method::Graph {
        match Compensation::for_motion(&stored, odd.width(), odd.height(), &params)? {
            Compensation::Graph { prediction, .. } => {
                let mut text = Vec::new();
                write_triplets(&prediction, &mut text).expect("writing to memory");
                Some(String::from_utf8(text).expect("triplets are ASCII"))
            }
            _ => None,
        }
    } else {
        None
    };
    Ok(PairResult {
        subbands,
        motion: stored,
        mvf,
        matrix,
    })
}

/// Decomposes `volume` with every configured method. Jobs run in parallel
/// over `(method, pair)`; results are ordered by method, then pair.
pub fn decompose_all(volume: &Volume, config: &Config, dump_matrices: bool) -> Result<Vec<MethodRun>> {
    volume.ensure_pairable()?;
    let pairs: Vec<(&Frame, &Frame)> = volume.pairs().collect();
    let jobs: Vec<(Method, usize)> = config
        .methods
        .iter()
        .flat_map(|&m| (0..pairs.len()).map(move |k| (m, k)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(m, k)| lift_and_verify(config, m, k, pairs[k].0, pairs[k].1, dump_matrices))
        .collect::<Result<Vec<_>>>()?;
    let mut results = results.into_iter();
    Ok(config
        .methods
        .iter()
        .map(|&method| MethodRun {
            method,
            pairs: results.by_ref().take(pairs.len()).collect(),
        })
        .collect())
}

/// Metrics report of a set of runs.
pub fn build_report(volume: &Volume, config: &Config, runs: &[MethodRun]) -> Result<Report> {
    let mut notes = vec![PSNR_REFERENCE.to_string()];
    notes.extend(
        config
            .to_text()
            .lines()
            .filter(|l| !l.starts_with("output_dir"))
            .map(|l| format!("config: {l}")),
    );
    let mut rows = Vec::new();
    for run in runs {
        let lp = run.lp(volume.axis())?;
        let hp = run.hp(volume.axis())?;
        let quality = lp_quality(&lp, volume)?;
        for (k, pair) in run.pairs.iter().enumerate() {
            rows.push(Row {
                method: run.method.name().to_string(),
                pair: Some(k),
                psnr_lp_db: quality.per_pair[k],
                hp_mean_energy: mean_energy(core::slice::from_ref(&pair.subbands.hp))?,
                lp_entropy_bytes: entropy_bits(core::slice::from_ref(&pair.subbands.lp)).bytes(),
                hp_entropy_bytes: entropy_bits(core::slice::from_ref(&pair.subbands.hp)).bytes(),
                mvf_bytes: pair.mvf.len() as u64,
            });
        }
        rows.push(Row {
            method: run.method.name().to_string(),
            pair: None,
            psnr_lp_db: quality.mean,
            hp_mean_energy: mean_energy(hp.frames())?,
            lp_entropy_bytes: entropy_bits(lp.frames()).bytes(),
            hp_entropy_bytes: entropy_bits(hp.frames()).bytes(),
            mvf_bytes: run.pairs.iter().map(|p| p.mvf.len() as u64).sum(),
        });
    }
    Ok(Report { notes, rows })
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(Error::io(path))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).map_err(Error::io(path))
}

/// Runs the full decomposition and writes, under `config.output_dir`:
/// `run.cfg`, `report.csv` and per method `lp.mcwl`, `hp.mcwl` and one
/// `pair_NNN.mvf` per pair (methods with motion). With `dump_matrices`,
/// `graph/pair_NNN_jp.txt` holds each prediction matrix.
///
/// The report is written last, only after every pair reconstructed exactly.
pub fn run_decompose(config: &Config, dump_matrices: bool) -> Result<Report> {
    let volume = load_input(config)?;
    let runs = decompose_all(&volume, config, dump_matrices)?;
    let report = build_report(&volume, config, &runs)?;

    let out = &config.output_dir;
    create_dir(out)?;
    for run in &runs {
        let dir = out.join(run.method.name());
        create_dir(&dir)?;
        save_volume(&run.lp(volume.axis())?, Payload::Signed, dir.join(LP_FILE))?;
        save_volume(&run.hp(volume.axis())?, Payload::Signed, dir.join(HP_FILE))?;
        for (k, pair) in run.pairs.iter().enumerate() {
            if !pair.mvf.is_empty() {
                write_file(&dir.join(mvf_file_name(k)), &pair.mvf)?;
            }
            if let Some(text) = &pair.matrix {
                write_file(&dir.join(matrix_file_name(k)), text)?;
            }
        }
    }
    write_file(&out.join(CONFIG_FILE), config.to_text())?;
    write_file(&out.join(REPORT_FILE), report.to_csv())?;
    Ok(report)
}

/// Rebuilds the original volume of `method` from the artifacts in `dir`,
/// and checks it against the configured input when that is available.
pub fn run_reconstruct(dir: &Path, method: Method, output: Option<&Path>) -> Result<Volume> {
    let config = Config::load(dir.join(CONFIG_FILE))?;
    let params = config.params_for(method);
    let method_dir = dir.join(method.name());
    let lp = load_volume(method_dir.join(LP_FILE))?.volume;
    let hp = load_volume(method_dir.join(HP_FILE))?.volume;
    if lp.len() != hp.len() {
        return Err(Error::Core(edgelift_core::Error::MotionCount {
            expected: lp.len(),
            got: hp.len(),
        }));
    }
    let mut frames = Vec::with_capacity(2 * lp.len());
    for (k, (l, h)) in lp.frames().iter().zip(hp.frames()).enumerate() {
        let motion = if method.has_motion() {
            let path = method_dir.join(mvf_file_name(k));
            decode_mvf(&fs::read(&path).map_err(Error::io(&path))?)?
        } else {
            PairMotion::None
        };
        let sb = SubbandPair {
            lp: l.clone(),
            hp: h.clone(),
            method,
        };
        let (odd, even) = compose_pair(&sb, &motion, &params)?;
        frames.push(odd);
        frames.push(even);
    }
    let volume = Volume::new(frames, Axis::Temporal)?;
    if config.input.is_some() {
        let original = load_input(&config)?;
        if let Some(pair) = first_mismatch(&original, &volume) {
            return Err(Error::Reconstruction {
                method: method.name(),
                pair,
            });
        }
    }
    if let Some(path) = output {
        save_volume(&volume, Payload::Unsigned, path)?;
    }
    Ok(volume)
}

fn first_mismatch(a: &Volume, b: &Volume) -> Option<usize> {
    if a.len() != b.len() {
        return Some(0);
    }
    a.frames()
        .iter()
        .zip(b.frames())
        .position(|(x, y)| x != y)
        .map(|i| i / 2)
}

/// Path of the ground-truth sidecar written next to a phantom volume.
pub fn truth_path(volume_path: &Path) -> PathBuf {
    let mut name = volume_path.as_os_str().to_owned();
    name.push(".truth");
    PathBuf::from(name)
}

/// Ground truth as `key = value` lines. Frame `t` equals frame 0 sampled
/// at `p + scale_t * (p - center)`.
pub fn truth_text(spec: &PhantomSpec, motion: &RadialMotion) -> String {
    let mut out = String::new();
    writeln!(out, "width = {}", spec.width).unwrap();
    writeln!(out, "height = {}", spec.height).unwrap();
    writeln!(out, "frames = {}", spec.frame_count).unwrap();
    writeln!(out, "amplitude = {:?}", spec.contraction_amplitude).unwrap();
    writeln!(out, "noise_sigma = {:?}", spec.noise_sigma).unwrap();
    writeln!(out, "seed = {}", spec.rng_seed).unwrap();
    writeln!(out, "center_x = {:?}", motion.center.0).unwrap();
    writeln!(out, "center_y = {:?}", motion.center.1).unwrap();
    writeln!(out, "r_max = {:?}", motion.r_max).unwrap();
    for (t, s) in motion.scales.iter().enumerate() {
        writeln!(out, "scale_{t} = {s:?}").unwrap();
    }
    out
}

/// Generates a phantom, writes it to `path` and its ground truth to
/// [`truth_path`].
pub fn run_phantom(spec: &PhantomSpec, path: &Path) -> Result<(Volume, RadialMotion)> {
    let (volume, motion) = generate_phantom(spec)?;
    save_volume(&volume, Payload::Unsigned, path)?;
    write_file(&truth_path(path), truth_text(spec, &motion))?;
    Ok((volume, motion))
}
