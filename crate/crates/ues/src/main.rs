use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use ues::pipeline::{score_session, session_trace};
use ues::{report, Session, Store};
use ues_core::evaluation::{gen_ground_truth, DEFAULT_SIMULATIONS};
use ues_core::planner::trace;
use ues_core::{Action, GroundTruth, Scene};

#[derive(Parser)]
#[command(name = "ues", version, about = "Object-location insight elicitation and plan-quality scoring")]
struct Cli {
    /// Store directory holding scenes, sessions, truths and reports.
    #[arg(long, global = true, env = "UES_STORE", default_value = "ues-store")]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "UES_PORT", default_value_t = 8080)]
        port: u16,
        /// Directory of UI assets to serve at `/`.
        #[arg(long = "static", env = "UES_STATIC")]
        static_dir: Option<PathBuf>,
        /// Scene bundle to add to the store, keyed by file stem; repeatable.
        #[arg(long = "scene")]
        scenes: Vec<PathBuf>,
    },
    /// Check a scene bundle and print a summary.
    ValidateMap { bundle: PathBuf },
    /// Sample a ground-truth location distribution.
    GenTruth(GenTruth),
    /// Score one submitted session against a ground truth.
    Simulate(Simulate),
    /// Score sessions and write a CSV report plus a JSON aggregate.
    Score(Score),
    /// Check a JSONL action trace and print it.
    Replay {
        trace: PathBuf,
        /// Scene (file or store id) to check moves against.
        #[arg(long)]
        scene: Option<String>,
    },
}

#[derive(Args)]
struct GenTruth {
    /// Scene bundle file or store scene id.
    scene: String,
    /// Support points per object.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "umbrella,bag")]
    objects: Vec<String>,
    /// Waypoints to draw from; all waypoints when omitted.
    #[arg(long, value_delimiter = ',')]
    candidates: Option<Vec<String>>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also save into the store under this truth id.
    #[arg(long)]
    save: Option<String>,
}

#[derive(Args)]
struct Simulate {
    /// Session file or store session id.
    session: String,
    /// Ground-truth file or store truth id.
    truth: String,
    #[arg(long, default_value_t = DEFAULT_SIMULATIONS)]
    sims: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the trace of one simulation as JSON lines.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Which simulation `--trace-out` records.
    #[arg(long, default_value_t = 0)]
    trace_index: usize,
}

#[derive(Args)]
struct Score {
    /// Score every submitted session in the store.
    #[arg(long, conflicts_with = "sessions")]
    all: bool,
    /// Session ids to score.
    sessions: Vec<String>,
    /// Truth for sessions that do not name one.
    #[arg(long)]
    truth: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SIMULATIONS)]
    sims: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON aggregate output file; `<store>/aggregate.json` when omitted.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Serve { port, static_dir, scenes } => serve(&cli.store, port, static_dir, &scenes),
        Command::ValidateMap { bundle } => validate_map(&bundle),
        Command::GenTruth(args) => gen_truth(&cli.store, args),
        Command::Simulate(args) => simulate(&cli.store, args),
        Command::Score(args) => score(&cli.store, args),
        Command::Replay { trace, scene } => replay(&cli.store, &trace, scene.as_deref()),
    }
}

fn serve(store: &Path, port: u16, static_dir: Option<PathBuf>, scenes: &[PathBuf]) -> anyhow::Result<()> {
    let store = Store::open(store).with_context(|| format!("opening store {}", store.display()))?;
    for path in scenes {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .with_context(|| format!("no scene id in {}", path.display()))?;
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        store.put_scene(id, &bytes).with_context(|| format!("loading {}", path.display()))?;
    }
    let app = ues::api::router(ues::api::AppState::new(store), static_dir);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", port))
            .await
            .with_context(|| format!("binding port {port}"))?;
        eprintln!("listening on {}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

/// A scene from a bundle file, or from the store when no such file exists.
fn load_scene(store: &Path, spec: &str) -> anyhow::Result<Scene> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes = std::fs::read(path).with_context(|| format!("reading {spec}"))?;
        return Scene::from_json(&bytes).with_context(|| format!("loading {spec}"));
    }
    let store = Store::open(store)?;
    Ok(store.scene(spec)?.scene.clone())
}

fn validate_map(bundle: &Path) -> anyhow::Result<()> {
    let bytes = std::fs::read(bundle).with_context(|| format!("reading {}", bundle.display()))?;
    let scene = Scene::from_json(&bytes)?;
    let map = scene.map();
    println!(
        "ok: {}x{} map, {} areas, {} waypoints, {} edges, start {}",
        map.width,
        map.height,
        scene.areas().len(),
        scene.waypoints().len(),
        scene.edges().len(),
        scene.upper_right_waypoint()
    );
    Ok(())
}

fn gen_truth(store_dir: &Path, args: GenTruth) -> anyhow::Result<()> {
    let scene = load_scene(store_dir, &args.scene)?;
    let candidates = args
        .candidates
        .unwrap_or_else(|| scene.waypoint_ids().map(str::to_string).collect());
    let objects: Vec<&str> = args.objects.iter().map(String::as_str).collect();
    let truth = gen_ground_truth(&scene, &objects, &candidates, args.n, args.seed)?;
    let mut text = truth.to_json_pretty();
    text.push('\n');
    match &args.out {
        Some(path) => ues::store::write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(id) = &args.save {
        Store::open(store_dir)?.save_truth(id, &truth)?;
    }
    Ok(())
}

fn load_session(store: &Store, spec: &str) -> anyhow::Result<Session> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes = std::fs::read(path)?;
        return serde_json::from_slice(&bytes).with_context(|| format!("parsing session {spec}"));
    }
    Ok(store.load_session(spec)?)
}

fn load_truth(store: &Store, spec: &str) -> anyhow::Result<GroundTruth> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(GroundTruth::from_json(&std::fs::read(path)?)?);
    }
    Ok(store.load_truth(spec)?)
}

fn simulate(store_dir: &Path, args: Simulate) -> anyhow::Result<()> {
    let store = Store::open(store_dir)?;
    let session = load_session(&store, &args.session)?;
    let truth = load_truth(&store, &args.truth)?;
    let loaded = store.scene(&session.scene_id)?;
    let row = score_session(&loaded, &session, &truth, args.sims, args.seed)?;
    if let Some(path) = &args.trace_out {
        let t = session_trace(&loaded, &session, &truth, args.seed, args.trace_index)?;
        ues::store::write_atomic(path, trace::to_jsonl(&t).as_bytes())?;
    }
    println!("{}", serde_json::to_string_pretty(&row)?);
    Ok(())
}

fn score(store_dir: &Path, args: Score) -> anyhow::Result<()> {
    let store = Store::open(store_dir)?;
    let ids = if args.all {
        store.session_ids()?
    } else if args.sessions.is_empty() {
        bail!("name sessions to score or pass --all");
    } else {
        args.sessions.clone()
    };
    let mut rows = Vec::new();
    for id in ids {
        let session = store.load_session(&id)?;
        if !session.is_submitted() {
            if args.all {
                eprintln!("skipping open session {id}");
                continue;
            }
            bail!("session {id} has not been submitted");
        }
        let Some(truth_id) = session.truth_id.clone().or_else(|| args.truth.clone()) else {
            if args.all {
                eprintln!("skipping session {id}: no ground truth");
                continue;
            }
            bail!("session {id} names no ground truth; pass --truth");
        };
        let truth = store.load_truth(&truth_id)?;
        let loaded = store.scene(&session.scene_id)?;
        rows.push(score_session(&loaded, &session, &truth, args.sims, args.seed).with_context(|| format!("session {id}"))?);
    }
    let csv = report::to_csv(&rows);
    match &args.csv {
        Some(path) => ues::store::write_atomic(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    let json_path = args.json.unwrap_or_else(|| store.root().join("aggregate.json"));
    let mut json = serde_json::to_string_pretty(&report::report(&rows))?;
    json.push('\n');
    ues::store::write_atomic(&json_path, json.as_bytes())?;
    Ok(())
}

fn replay(store_dir: &Path, path: &Path, scene: Option<&str>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let t = trace::from_jsonl(&text)?;
    if let Some(spec) = scene {
        let scene = load_scene(store_dir, spec)?;
        let mut pos: Option<&str> = None;
        for (k, a) in t.actions.iter().enumerate() {
            let at = match a {
                Action::Move { from, to } => {
                    let (a, b) = (scene.waypoint_index(from)?, scene.waypoint_index(to)?);
                    if !scene.adjacency()[a].iter().any(|&(v, _)| v == b) {
                        bail!("step {k}: no edge between {from} and {to}");
                    }
                    if pos.is_some_and(|p| p != from) {
                        bail!("step {k}: move starts at {from} but the robot is at {}", pos.unwrap_or_default());
                    }
                    pos = Some(to);
                    continue;
                }
                Action::Observe { at } | Action::Pick { at, .. } | Action::Place { at, .. } => at,
            };
            scene.waypoint_index(at)?;
            if pos.is_some_and(|p| p != at) {
                bail!("step {k}: action at {at} but the robot is at {}", pos.unwrap_or_default());
            }
            pos = Some(at);
        }
    }
    for (k, a) in t.actions.iter().enumerate() {
        let line = match a {
            Action::Move { from, to } => format!("move {from} -> {to}"),
            Action::Observe { at } => format!("observe {at}"),
            Action::Pick { object, at } => format!("pick {object} at {at}"),
            Action::Place { object, container, at } => format!("place {object} in {container} at {at}"),
        };
        println!("{k:>4}  {line}");
    }
    println!("length {}", t.length);
    Ok(())
}
