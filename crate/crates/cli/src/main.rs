use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use duoret::engine::sentences_path;
use duoret::eval::{evaluate, parse_judgments, parse_queries};
use duoret::{ingest, CorpusKind, Engine, EngineConfig, Error, InvertedIndex};

#[derive(Parser)]
#[command(
    name = "duoret",
    version,
    about = "Dual-path tweet and document retrieval"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tweets,
    Documents,
}

impl From<Kind> for CorpusKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Tweets => CorpusKind::Tweets,
            Kind::Documents => CorpusKind::Documents,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build and save an index from a line-delimited corpus
    Index {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        input: PathBuf,
        /// topic definitions for sentence labels (documents only)
        #[arg(long)]
        topics: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run one query; short queries go to tweets, long ones to documents
    Query {
        /// may be given twice, once for tweets and once for documents
        #[arg(long, required = true)]
        index: Vec<PathBuf>,
        /// reference time in epoch seconds (defaults to the wall clock)
        #[arg(long)]
        now: Option<i64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(required = true, num_args = 1..)]
        text: Vec<String>,
    },
    /// Precision at 1/5/10 and MRR for judged queries under every scheme
    Eval {
        #[arg(long, required = true)]
        index: Vec<PathBuf>,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        judgments: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        now: Option<i64>,
    },
    /// Print the postings of one stem
    Dump {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        term: String,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::Config { .. } | Error::EmptyQuery => EXIT_USAGE,
        Error::Invariant(_) | Error::UnnormalizedPosterior(_) | Error::UnknownItem(_) => {
            EXIT_INVARIANT
        }
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load_config(path: Option<&Path>) -> duoret::Result<EngineConfig> {
    path.map_or_else(|| Ok(EngineConfig::default()), EngineConfig::from_file)
}

fn wall_clock() -> i64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs() as i64)
}

fn open_engine(config: Option<&Path>, indexes: &[PathBuf]) -> duoret::Result<Engine> {
    let mut engine = Engine::new(load_config(config)?)?;
    for path in indexes {
        engine.load_index(path)?;
    }
    Ok(engine)
}

fn read(path: &Path) -> duoret::Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

fn run(command: Command) -> duoret::Result<()> {
    match command {
        Command::Index {
            kind,
            input,
            topics,
            out,
            config,
        } => {
            let stops = load_config(config.as_deref())?.stopwords()?;
            let built = ingest(&input, kind.into(), topics.as_deref(), &stops)?;
            built.index.save(&out)?;
            if let Some(sentences) = &built.sentences {
                sentences.save(&sentences_path(&out))?;
            }
            print!("{}", built.report);
        }
        Command::Query {
            index,
            now,
            config,
            text,
        } => {
            let engine = open_engine(config.as_deref(), &index)?;
            let outcome = engine.search(&text.join(" "), now.unwrap_or_else(wall_clock))?;
            print!("{outcome}");
        }
        Command::Eval {
            index,
            queries,
            judgments,
            config,
            now,
        } => {
            let engine = open_engine(config.as_deref(), &index)?;
            let queries = parse_queries(&read(&queries)?)?;
            let judgments = parse_judgments(&read(&judgments)?)?;
            let report = evaluate(
                &engine,
                &queries,
                &judgments,
                now.unwrap_or_else(wall_clock),
            )?;
            print!("{report}");
        }
        Command::Dump { index, term } => {
            let idx = InvertedIndex::load(&index)?;
            let term = term.to_lowercase();
            let postings = idx.postings(&term);
            println!("term: {term}");
            println!("df: {}", postings.len());
            let cf: u64 = postings.iter().map(|p| u64::from(p.term_frequency())).sum();
            println!("cf: {cf}");
            for p in postings {
                let item = idx.item(p.item_id)?;
                let pos: Vec<String> = p.positions.iter().map(u32::to_string).collect();
                println!(
                    "{}\ttf={}\tpositions={}",
                    item.external_id,
                    p.term_frequency(),
                    pos.join(",")
                );
            }
        }
    }
    Ok(())
}
