use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    AttackArgs, Command, DetectorArg, EmbedArgs, ExtractArgs, FamilyArgs, FamilyInitArgs, FormatArg, GameArgs,
    GenArg, KeyArgs, ModeArg, TargetArg, VerifyArgs,
};
use crate::analysis::{
    chi_square_lsb_distinguisher, constant_distinguisher, replay_distinguisher, Distinguisher, MAX_REPLAY_KEYS,
};
use crate::container::{ContainerFormat, Content, NBitString, PositionMap, PositionPolicy};
use crate::error::{Error, Result};
use crate::game::{
    generator_game, pad_imbalance, reduce, stego_game, verify_stego_security, AdvantageReport, Frequency,
    GameConfig, MessageDivergence, RelativeEntropy,
};
use crate::generator::{Generator, GeneratorKind};
use crate::manifest::{load_family, FamilyManifest};
use crate::stegosystem::{synthetic_family, Stegosystem, SupportFamily};

pub(super) fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::FamilyInit(args) => family_init(args, out),
        Command::Embed(args) => embed(args, out),
        Command::Extract(args) => extract(args, out),
        Command::Attack(args) => attack(args, out),
        Command::Game(args) => game(args, out),
        Command::Verify(args) => verify(args, out),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn detect_format(arg: FormatArg, bytes: &[u8]) -> ContainerFormat {
    match arg {
        FormatArg::Raw => ContainerFormat::Raw,
        FormatArg::Graymap => ContainerFormat::Graymap,
        FormatArg::Auto if bytes.starts_with(b"P5") => ContainerFormat::Graymap,
        FormatArg::Auto => ContainerFormat::Raw,
    }
}

fn load_any(path: &Path, format: FormatArg) -> Result<Content> {
    let bytes = fs::read(path)?;
    Content::from_bytes(&bytes, detect_format(format, &bytes))
}

fn generator_kind(arg: GenArg) -> GeneratorKind {
    match arg {
        GenArg::Otp => GeneratorKind::OneTimePad,
        GenArg::Counter => GeneratorKind::CounterStream,
        GenArg::Zero => GeneratorKind::ConstantZero,
        GenArg::ShortCycle => GeneratorKind::ShortCycle,
    }
}

fn build_generator(gen: GenArg, key_bits: Option<usize>, n: usize) -> Result<Generator> {
    let key_len = key_bits.unwrap_or(match gen {
        GenArg::Otp | GenArg::Zero => n,
        GenArg::Counter => 128,
        GenArg::ShortCycle => 16,
    });
    Generator::new(generator_kind(gen), key_len, n)
}

fn system(family: SupportFamily, key_args: &KeyArgs) -> Result<Stegosystem> {
    let g = build_generator(key_args.gen, key_args.key_bits, family.n_bits())?;
    Stegosystem::new(Arc::new(family), g)
}

fn family_from(args: &FamilyArgs) -> Result<SupportFamily> {
    match &args.manifest {
        Some(path) => Ok(load_family(path)?.1),
        None => synthetic_family(args.bases, args.n, args.payload, args.family_seed),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn extension(format: ContainerFormat) -> &'static str {
    match format {
        ContainerFormat::Raw => "bin",
        ContainerFormat::Graymap => "pgm",
    }
}

#[derive(Serialize)]
struct FamilyInitReport {
    manifest: String,
    bases: usize,
    n_bits: usize,
    policy: PositionPolicy,
    format: ContainerFormat,
}

fn family_init(args: FamilyInitArgs, out: &mut dyn Write) -> Result<()> {
    let policy: PositionPolicy = args.policy.parse()?;
    let bases = args
        .bases
        .iter()
        .map(|p| load_any(p, args.format))
        .collect::<Result<Vec<_>>>()?;
    let family = SupportFamily::new(bases, args.n, policy)?;
    let format = family.bases()[0].kind().format();

    let dir_name = format!("{}.bases", args.out.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default());
    let dir = args.out.with_file_name(&dir_name);
    fs::create_dir_all(&dir)?;
    let mut paths = Vec::with_capacity(family.len());
    for (i, base) in family.bases().iter().enumerate() {
        let name = format!("base-{i}.{}", extension(format));
        base.store(dir.join(&name))?;
        paths.push(PathBuf::from(&dir_name).join(name));
    }
    let manifest = FamilyManifest {
        n_bits: args.n,
        policy,
        format,
        bases: paths,
        support_cost: None,
    };
    manifest.store(&args.out)?;
    emit(
        out,
        &FamilyInitReport {
            manifest: args.out.display().to_string(),
            bases: family.len(),
            n_bits: args.n,
            policy,
            format,
        },
    )
}

/// Sidecar describing a message split across several contents.
#[derive(Debug, Serialize, Deserialize)]
struct ChunkSidecar {
    bit_length: usize,
    n_bits: usize,
    base: usize,
    files: Vec<String>,
}

#[derive(Serialize)]
struct EmbedReport {
    out: String,
    base: usize,
    n_bits: usize,
}

fn message_bytes(args: &EmbedArgs) -> Result<Vec<u8>> {
    match (&args.msg, &args.msg_file) {
        (Some(hex_text), _) => hex::decode(hex_text.trim()).map_err(|e| Error::Hex(e.to_string())),
        (None, Some(path)) => Ok(fs::read(path)?),
        (None, None) => Err(Error::Config("either --msg or --msg-file is required".into())),
    }
}

fn embed(args: EmbedArgs, out: &mut dyn Write) -> Result<()> {
    let (manifest, family) = load_family(&args.manifest)?;
    let sys = system(family, &args.key_args)?;
    let n = sys.n_bits();
    let key = NBitString::from_hex(&args.key, sys.key_len())?;
    let bytes = message_bytes(&args)?;

    if !args.chunk {
        let m = match &args.msg {
            Some(text) => NBitString::from_hex(text, n)?,
            None => NBitString::from_bytes(bytes, n)?,
        };
        sys.embed(args.base, &m, &key)?.store(&args.out)?;
        return emit(
            out,
            &EmbedReport {
                out: args.out.display().to_string(),
                base: args.base,
                n_bits: n,
            },
        );
    }

    let bit_length = 8 * bytes.len();
    let message = NBitString::from_bytes(bytes, bit_length)?;
    let ext = args
        .out
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| extension(manifest.format).to_string());
    let mut files = Vec::new();
    for (b, start) in (0..bit_length).step_by(n.max(1)).enumerate() {
        let block = message.slice(start, n);
        let path = with_suffix(&args.out, &format!(".{b}.{ext}"));
        sys.embed(args.base, &block, &key)?.store(&path)?;
        files.push(file_name(&path));
    }
    let sidecar = ChunkSidecar {
        bit_length,
        n_bits: n,
        base: args.base,
        files,
    };
    fs::write(with_suffix(&args.out, ".chunks.json"), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    emit(out, &sidecar)
}

fn extract(args: ExtractArgs, out: &mut dyn Write) -> Result<()> {
    let (manifest, family) = load_family(&args.manifest)?;
    let sys = system(family, &args.key_args)?;
    let key = NBitString::from_hex(&args.key, sys.key_len())?;
    let k = sys.inv(&key);

    let message = match (&args.input, &args.chunks) {
        (Some(path), _) => sys.extract(&Content::load(path, manifest.format)?, &k)?,
        (None, Some(sidecar_path)) => {
            let sidecar: ChunkSidecar = serde_json::from_slice(&fs::read(sidecar_path)?)?;
            if sidecar.n_bits != sys.n_bits() {
                return Err(Error::structural(format!(
                    "sidecar blocks hold {} bits, the family plane holds {}",
                    sidecar.n_bits,
                    sys.n_bits()
                )));
            }
            let dir = sidecar_path.parent().unwrap_or_else(|| Path::new("."));
            let mut bits = Vec::with_capacity(sidecar.files.len() * sidecar.n_bits);
            for name in &sidecar.files {
                let block = sys.extract(&Content::load(dir.join(name), manifest.format)?, &k)?;
                bits.extend(block.bits());
            }
            if bits.len() < sidecar.bit_length {
                return Err(Error::structural(format!(
                    "{} blocks carry {} bits, sidecar records {}",
                    sidecar.files.len(),
                    bits.len(),
                    sidecar.bit_length
                )));
            }
            bits.truncate(sidecar.bit_length);
            NBitString::from_bits(&bits)
        }
        (None, None) => return Err(Error::Config("either --in or --chunks is required".into())),
    };
    writeln!(out, "{}", message.to_hex())?;
    Ok(())
}

#[derive(Serialize)]
struct AttackLine {
    path: String,
    decision: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_value: Option<f64>,
    diagnostics: serde_json::Value,
}

fn replay_for(
    pmap: &PositionMap,
    gen: Option<GenArg>,
    key_bits: Option<usize>,
    msg: Option<&str>,
    key_space: Option<u64>,
) -> Result<Arc<dyn Distinguisher<Content>>> {
    let gen = gen.ok_or_else(|| Error::config("the replay detector needs --gen"))?;
    let msg = msg.ok_or_else(|| Error::config("the replay detector needs --msg"))?;
    let g = build_generator(gen, key_bits, pmap.len())?;
    let m0 = NBitString::from_hex(msg, pmap.len())?;
    let limit = key_space.unwrap_or(if g.key_len() < 16 { 1 << g.key_len() } else { MAX_REPLAY_KEYS });
    Ok(Arc::new(replay_distinguisher(&m0, &g, limit, pmap)?))
}

fn attack(args: AttackArgs, out: &mut dyn Write) -> Result<()> {
    let chi2 = chi_square_lsb_distinguisher(args.threshold)?;
    let replay = match args.detector {
        DetectorArg::Replay => {
            let path = args
                .manifest
                .as_ref()
                .ok_or_else(|| Error::config("the replay detector needs --manifest"))?;
            let (_, family) = load_family(path)?;
            Some(replay_for(family.pmap(), args.gen, args.key_bits, args.msg.as_deref(), args.key_space)?)
        }
        _ => None,
    };

    for path in &args.inputs {
        let content = load_any(path, args.format)?;
        let mut tape = crate::analysis::CoinTape::empty();
        let line = match args.detector {
            DetectorArg::Chi2 => {
                let report = chi2.analyze(&content);
                AttackLine {
                    path: path.display().to_string(),
                    decision: u8::from(report.decision),
                    statistic: report.result.map(|r| r.statistic),
                    p_value: report.result.map(|r| r.p_value),
                    diagnostics: serde_json::json!({
                        "dof": report.result.map(|r| r.dof),
                        "nonempty_pairs": report.nonempty_pairs,
                        "undecidable": report.undecidable,
                    }),
                }
            }
            DetectorArg::Replay => {
                let d = replay.as_ref().expect("built above");
                AttackLine {
                    path: path.display().to_string(),
                    decision: u8::from(d.decide(&content, &mut tape)),
                    statistic: None,
                    p_value: None,
                    diagnostics: serde_json::json!({ "detector": d.description() }),
                }
            }
            DetectorArg::Const0 | DetectorArg::Const1 => {
                let d = constant_distinguisher(args.detector == DetectorArg::Const1);
                AttackLine {
                    path: path.display().to_string(),
                    decision: u8::from(d.decide(&content, &mut tape)),
                    statistic: None,
                    p_value: None,
                    diagnostics: serde_json::json!({ "detector": Distinguisher::<Content>::description(&d) }),
                }
            }
        };
        emit(out, &line)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GameOutput {
    target: &'static str,
    detector: String,
    detector_budget: u64,
    generator: GeneratorKind,
    key_bits: usize,
    n_bits: usize,
    bases: usize,
    message: String,
    #[serde(flatten)]
    report: AdvantageReport,
}

fn game(args: GameArgs, out: &mut dyn Write) -> Result<()> {
    let family = Arc::new(family_from(&args.family)?);
    let n = family.n_bits();
    let g = build_generator(args.key_args.gen, args.key_args.key_bits, n)?;
    let sys = Stegosystem::new(family.clone(), g.clone())?;
    let m0 = NBitString::from_hex(&args.msg, n)?;

    let detector: Arc<dyn Distinguisher<Content>> = match args.detector {
        DetectorArg::Chi2 => Arc::new(chi_square_lsb_distinguisher(args.threshold)?),
        DetectorArg::Replay => replay_for(
            family.pmap(),
            Some(args.key_args.gen),
            args.key_args.key_bits,
            Some(&args.msg),
            args.key_space,
        )?,
        DetectorArg::Const0 => Arc::new(constant_distinguisher(false)),
        DetectorArg::Const1 => Arc::new(constant_distinguisher(true)),
    };

    let mut config = match args.mode {
        ModeArg::Exhaustive => GameConfig::exhaustive(),
        ModeArg::MonteCarlo => {
            let seed = args
                .seed
                .ok_or_else(|| Error::config("--seed is required in monte-carlo mode"))?;
            GameConfig::monte_carlo(args.trials, seed)
        }
    };
    config.workers = args.workers;

    let (target, description, budget, report) = match args.target {
        TargetArg::Stego => (
            "stego",
            detector.description(),
            detector.time_budget(),
            stego_game(detector.as_ref(), &sys, &m0, &config)?,
        ),
        TargetArg::Generator => {
            let wrapper = reduce(detector, family.clone(), m0.clone())?;
            (
                "generator",
                wrapper.description(),
                wrapper.declared_cost(),
                generator_game(&wrapper, &g, &config)?,
            )
        }
    };
    emit(
        out,
        &GameOutput {
            target,
            detector: description,
            detector_budget: budget,
            generator: g.kind(),
            key_bits: g.key_len(),
            n_bits: n,
            bases: family.len(),
            message: m0.to_hex(),
            report,
        },
    )
}

#[derive(Serialize)]
struct VerifyOutput {
    generator: GeneratorKind,
    key_bits: usize,
    n_bits: usize,
    bases: usize,
    messages: u64,
    tv_distance: Frequency,
    worst_message: String,
    relative_entropy: RelativeEntropy,
    pad_imbalance: Frequency,
    stego_secure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_message: Option<Vec<MessageDivergence>>,
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<()> {
    if args.mode != ModeArg::Exhaustive {
        return Err(Error::config("verify only runs in exhaustive mode"));
    }
    let sys = system(family_from(&args.family)?, &args.key_args)?;
    let report = verify_stego_security(&sys)?;
    let worst = report
        .per_message
        .iter()
        .find(|d| d.message == report.worst_message)
        .expect("worst message is listed");
    emit(
        out,
        &VerifyOutput {
            generator: sys.generator().kind(),
            key_bits: sys.key_len(),
            n_bits: sys.n_bits(),
            bases: sys.family().len(),
            messages: 1u64 << sys.n_bits(),
            tv_distance: report.max_tv,
            worst_message: report.worst_message.to_hex(),
            relative_entropy: worst.relative_entropy,
            pad_imbalance: pad_imbalance(&sys)?.into(),
            stego_secure: report.is_stego_secure(),
            per_message: args.per_message.then(|| report.per_message.clone()),
        },
    )
}
