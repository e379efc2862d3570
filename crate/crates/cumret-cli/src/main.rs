//! `cumret` — cost-aware backtesting of simple trading rules and
//! verification of the cumulative-return upper bound.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cumret::backtest::{run_backtest, BacktestResult, DEFAULT_BARS_PER_YEAR};
use cumret::boundcheck::{decay_curve, stress_theorem1};
use cumret::bootstrap::{market_benchmark, run_bootstrap, BootstrapConfig};
use cumret::indicators::{self, DmiConvention, EmaAlpha, IndicatorSeries, MomentumKind};
use cumret::marketdata::{emit_ohlcv, parse_ohlcv, validate, PriceSeries};
use cumret::reference::{RefTable, ReferenceTables};
use cumret::report::{summarize_tables, ReportMeta, TablesReport};
use cumret::rng::keyed_rng;
use cumret::signals::{generate_signals, Rule, RuleOptions, RuleSpec, SignalKind};
use cumret::sweep::{render_sweep_k_csv, render_sweep_n_csv, sweep_k, sweep_n};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

const DATA_DIR_ENV: &str = "CUMRET_DATA_DIR";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "cumret",
    version,
    about = "Technical trading rules under transaction costs: backtests, bootstrap \
             resampling, and cumulative-return bound verification"
)]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Transaction cost rate per round trip.
    #[arg(long, global = true, default_value_t = 0.003)]
    k: f64,

    /// Output directory; most commands print to stdout without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format where a command supports both (backtest defaults to
    /// json, plot-data commands to csv).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone, Copy)]
struct RuleFlags {
    /// EMA smoothing factor: 1/(n+1) (table default) or 2/(n+1).
    #[arg(long, value_enum, default_value_t = AlphaFlag::OneOverN1)]
    ema_alpha: AlphaFlag,

    /// Directional-movement convention.
    #[arg(long, value_enum, default_value_t = DmiFlag::Wilder)]
    dmi_convention: DmiFlag,

    /// Put the MOM cross level at 0 instead of 100. The ratio form of MOM is
    /// always positive, so the rule then never fires.
    #[arg(long)]
    mom_zero_level: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphaFlag {
    /// alpha = 1/(n+1)
    #[value(name = "one-over-n1")]
    OneOverN1,
    /// alpha = 2/(n+1)
    #[value(name = "two-over-n1")]
    TwoOverN1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DmiFlag {
    Wilder,
    Literal,
}

impl RuleFlags {
    fn options(&self) -> RuleOptions {
        RuleOptions {
            ema_alpha: match self.ema_alpha {
                AlphaFlag::OneOverN1 => EmaAlpha::OneOverNPlusOne,
                AlphaFlag::TwoOverN1 => EmaAlpha::TwoOverNPlusOne,
            },
            dmi_convention: match self.dmi_convention {
                DmiFlag::Wilder => DmiConvention::Wilder,
                DmiFlag::Literal => DmiConvention::Literal,
            },
            mom_zero_level: self.mom_zero_level,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a CSV; emit canonical CSV plus a JSON-lines report.
    Ingest {
        #[arg(long)]
        data: PathBuf,
    },

    /// Emit indicator series as `date,value,defined` CSV.
    Indicators {
        #[arg(long)]
        data: PathBuf,
        /// One of: sma5 sma20 ema5 ema20 mom roc k d macd rsi psy cci bias
        /// di_plus di_minus. Omit to emit all (requires --out).
        #[arg(long)]
        indicator: Option<String>,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Emit one rule's Buy/Sell events as `date,kind` CSV.
    Signals {
        #[arg(long)]
        data: PathBuf,
        /// SMA EMA MOM KD MACD RSI PSY CCI MA BIAS ROC DMI RND
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Backtest one rule over one window.
    Backtest {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        rule: String,
        /// Window as `enter:exit` bar indices; defaults to the full series.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BARS_PER_YEAR)]
        bars_per_year: usize,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Verify the cumulative-return bound: randomized stress or a decay curve.
    Bound {
        /// Number of randomized stress cases.
        #[arg(long)]
        stress: Option<usize>,
        /// Emit an `n,R,bound,envelope` decay curve instead.
        #[arg(long)]
        curve: bool,
        /// Mean return the simulated curve tracks.
        #[arg(long, default_value_t = 0.0048)]
        rbar: f64,
        #[arg(long, default_value_t = 2000)]
        nmax: usize,
    },

    /// Bootstrap rules over resampled windows; writes table2.csv, table3.csv,
    /// fig5_boxdata.csv, and summary.json into --out.
    Bootstrap {
        /// `ALL` or a comma list of rule names.
        #[arg(long, default_value = "ALL")]
        rules: String,
        /// One or more index CSV files.
        #[arg(long, required = true, num_args = 1..)]
        data: Vec<PathBuf>,
        /// Replicas per (rule, index).
        #[arg(long, alias = "M", default_value_t = 1000)]
        m: usize,
        /// Minimum window span in bars.
        #[arg(long, default_value_t = 260)]
        min_window: usize,
        #[arg(long, default_value_t = DEFAULT_BARS_PER_YEAR)]
        bars_per_year: usize,
        /// Also write comparison.txt against the bundled reference tables.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Sweep the cost rate over a grid; emits `rule,k,mean_R`.
    SweepK {
        #[arg(long, default_value = "ALL")]
        rules: String,
        #[arg(long)]
        data: PathBuf,
        /// Grid as `lo:hi:step`, inclusive.
        #[arg(long, default_value = "0.001:0.01:0.001")]
        k_grid: String,
        #[arg(long, alias = "M", default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 260)]
        min_window: usize,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Running cumulative return and bound as trades accumulate; emits
    /// `k,n,R,bound`.
    SweepN {
        #[arg(long, default_value = "RND")]
        rule: String,
        #[arg(long)]
        data: PathBuf,
        /// Comma list of cost rates.
        #[arg(long, default_value = "0.001,0.003,0.005,0.007")]
        k_list: String,
        #[arg(long, default_value_t = 2000)]
        nmax: usize,
        #[command(flatten)]
        flags: RuleFlags,
    },

    /// Print the bundled reference tables, or one cell of them.
    Reference {
        /// r_bar, cagr, or cmv (with --rule and --index).
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        rule: Option<String>,
        #[arg(long)]
        index: Option<String>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.workers {
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .context("building worker pool")?
            .install(|| run(&cli)),
        None => run(&cli),
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest { data } => cmd_ingest(cli, data),
        Command::Indicators {
            data,
            indicator,
            flags,
        } => cmd_indicators(cli, data, indicator.as_deref(), flags.options()),
        Command::Signals { data, rule, flags } => cmd_signals(cli, data, rule, flags.options()),
        Command::Backtest {
            data,
            rule,
            window,
            bars_per_year,
            flags,
        } => cmd_backtest(cli, data, rule, window.as_deref(), *bars_per_year, flags.options()),
        Command::Bound {
            stress,
            curve,
            rbar,
            nmax,
        } => cmd_bound(cli, *stress, *curve, *rbar, *nmax),
        Command::Bootstrap {
            rules,
            data,
            m,
            min_window,
            bars_per_year,
            compare,
            flags,
        } => cmd_bootstrap(
            cli,
            rules,
            data,
            *m,
            *min_window,
            *bars_per_year,
            *compare,
            flags.options(),
        ),
        Command::SweepK {
            rules,
            data,
            k_grid,
            m,
            min_window,
            flags,
        } => cmd_sweep_k(cli, rules, data, k_grid, *m, *min_window, flags.options()),
        Command::SweepN {
            rule,
            data,
            k_list,
            nmax,
            flags,
        } => cmd_sweep_n(cli, rule, data, k_list, *nmax, flags.options()),
        Command::Reference { table, rule, index } => {
            cmd_reference(table.as_deref(), rule.as_deref(), index.as_deref())
        }
    }
}

/// A path as given, or relative to $CUMRET_DATA_DIR.
fn resolve_data_path(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if let Ok(root) = std::env::var(DATA_DIR_ENV) {
        let candidate = Path::new(&root).join(path);
        if candidate.exists() {
            return Ok(candidate);
        }
    }
    bail!(
        "data file `{}` not found (also tried under ${DATA_DIR_ENV})",
        path.display()
    )
}

fn load_series(path: &Path) -> Result<(PriceSeries, Vec<String>)> {
    let resolved = resolve_data_path(path)?;
    let text = fs::read_to_string(&resolved)
        .with_context(|| format!("reading {}", resolved.display()))?;
    let symbol = resolved
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("SERIES")
        .to_uppercase();
    let parsed = parse_ohlcv(&text, symbol).with_context(|| format!("parsing {}", resolved.display()))?;
    Ok((parsed.series, parsed.warnings))
}

/// Load, validate, and refuse fatally broken series.
fn load_validated(path: &Path) -> Result<PriceSeries> {
    let (series, warnings) = load_series(path)?;
    for w in &warnings {
        eprintln!("warning: {}: {w}", series.symbol);
    }
    let report = validate(&series);
    for w in &report.warnings {
        eprintln!("warning: {}: {w}", series.symbol);
    }
    if report.is_fatal() {
        for e in &report.fatal_errors {
            eprintln!("fatal: {}: {e}", series.symbol);
        }
        bail!("{} failed validation", series.symbol);
    }
    Ok(series)
}

/// Write to `<out>/<filename>` when --out was given, else to stdout.
fn write_output(out: &Option<PathBuf>, filename: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(filename);
            fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn meta_line(table: &str, seed: u64, k: f64, m: usize) -> String {
    format!("# cumret={VERSION} table={table} seed={seed} k={k} M={m}\n")
}

fn parse_rule(name: &str) -> Result<Rule> {
    Rule::from_str(name).map_err(|e| anyhow!(e))
}

fn parse_rules(list: &str) -> Result<Vec<Rule>> {
    if list.eq_ignore_ascii_case("all") {
        return Ok(Rule::ALL.to_vec());
    }
    list.split(',').map(|s| parse_rule(s.trim())).collect()
}

fn parse_window(spec: Option<&str>, series_len: usize) -> Result<(usize, usize)> {
    match spec {
        None => Ok((0, series_len - 1)),
        Some(text) => {
            let (a, b) = text
                .split_once(':')
                .ok_or_else(|| anyhow!("window must be `enter:exit`, got `{text}`"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        }
    }
}

fn cmd_ingest(cli: &Cli, data: &Path) -> Result<()> {
    let (series, parse_warnings) = load_series(data)?;
    let mut report = validate(&series);
    for w in parse_warnings {
        report.warnings.insert(0, w);
    }
    let jsonl = report.to_json_lines();
    let canonical = emit_ohlcv(&series);
    match &cli.out {
        Some(_) => {
            write_output(&cli.out, &format!("{}.csv", series.symbol.to_lowercase()), &canonical)?;
            write_output(
                &cli.out,
                &format!("{}.report.jsonl", series.symbol.to_lowercase()),
                &jsonl,
            )?;
        }
        None => {
            eprint!("{jsonl}");
            print!("{canonical}");
        }
    }
    if report.is_fatal() {
        bail!("{} failed validation", series.symbol);
    }
    Ok(())
}

/// The indicator series behind the thirteen rules, by short name.
fn named_indicators(
    series: &PriceSeries,
    options: RuleOptions,
) -> Result<Vec<(&'static str, IndicatorSeries)>> {
    let closes = series.closes();
    let alpha = options.ema_alpha;
    let (k, d) = indicators::stochastic_kd(series, 12, 12)?;
    let (di_plus, di_minus) = indicators::dmi(series, 14, options.dmi_convention)?;
    Ok(vec![
        ("sma5", indicators::sma(&closes, 5)?),
        ("sma20", indicators::sma(&closes, 20)?),
        ("ema5", indicators::ema(&closes, 5, alpha)?),
        ("ema20", indicators::ema(&closes, 20, alpha)?),
        ("mom", indicators::momentum_family(&closes, 10, MomentumKind::Mom)?),
        ("roc", indicators::momentum_family(&closes, 13, MomentumKind::Roc)?),
        ("k", k),
        ("d", d),
        ("macd", indicators::macd_line(&closes, 12, 26, alpha)?),
        ("rsi", indicators::rsi(&closes, 14)?),
        ("psy", indicators::psy(&closes, 10)?),
        ("cci", indicators::cci(series, 9)?),
        ("bias", indicators::bias(&closes, 10)?),
        ("di_plus", di_plus),
        ("di_minus", di_minus),
    ])
}

fn indicator_csv(series: &PriceSeries, indicator: &IndicatorSeries) -> String {
    let mut out = String::from("date,value,defined\n");
    for (t, bar) in series.bars().iter().enumerate() {
        match indicator.get(t) {
            Some(v) => {
                let _ = writeln!(out, "{},{v},true", bar.date);
            }
            None => {
                let _ = writeln!(out, "{},,false", bar.date);
            }
        }
    }
    out
}

fn cmd_indicators(
    cli: &Cli,
    data: &Path,
    which: Option<&str>,
    options: RuleOptions,
) -> Result<()> {
    let series = load_validated(data)?;
    let all = named_indicators(&series, options)?;
    match which {
        Some(name) => {
            let (_, indicator) = all
                .iter()
                .find(|(n, _)| n.eq_ignore_ascii_case(name))
                .ok_or_else(|| anyhow!("unknown indicator `{name}`"))?;
            write_output(&cli.out, &format!("{name}.csv"), &indicator_csv(&series, indicator))
        }
        None => {
            if cli.out.is_none() {
                bail!("emitting all indicators needs --out <dir>");
            }
            for (name, indicator) in &all {
                write_output(&cli.out, &format!("{name}.csv"), &indicator_csv(&series, indicator))?;
            }
            Ok(())
        }
    }
}

fn cmd_signals(cli: &Cli, data: &Path, rule: &str, options: RuleOptions) -> Result<()> {
    let series = load_validated(data)?;
    let rule = parse_rule(rule)?;
    let spec = RuleSpec::with_options(rule, options);
    let signals = match rule {
        Rule::Rnd => {
            let mut rng = keyed_rng(cli.seed, "cli-rnd", 0);
            cumret::backtest::rnd_signals_in_window(&mut rng, 0, series.len() - 1)?
        }
        _ => generate_signals(&spec, &series)?,
    };
    let mut out = String::from("date,kind\n");
    for event in signals.events() {
        let kind = match event.kind {
            SignalKind::Buy => "buy",
            SignalKind::Sell => "sell",
        };
        let _ = writeln!(out, "{},{kind}", series.bars()[event.index].date);
    }
    write_output(
        &cli.out,
        &format!("signals_{}_{}.csv", rule.name().to_lowercase(), series.symbol.to_lowercase()),
        &out,
    )
}

fn trades_csv(series: &PriceSeries, result: &BacktestResult) -> String {
    let mut out =
        String::from("buy_date,sell_date,buy_index,sell_index,buy_price,sell_price,return,forced\n");
    for (trade, r) in result.trades.iter().zip(&result.returns) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            series.bars()[trade.buy_index].date,
            series.bars()[trade.sell_index].date,
            trade.buy_index,
            trade.sell_index,
            trade.buy_price,
            trade.sell_price,
            r,
            trade.forced
        );
    }
    out
}

fn cmd_backtest(
    cli: &Cli,
    data: &Path,
    rule: &str,
    window: Option<&str>,
    bars_per_year: usize,
    options: RuleOptions,
) -> Result<()> {
    let series = load_validated(data)?;
    let rule = parse_rule(rule)?;
    let spec = RuleSpec::with_options(rule, options);
    let window = parse_window(window, series.len())?;
    let mut rng = keyed_rng(cli.seed, "cli-backtest", 0);
    let result = run_backtest(&spec, &series, window, cli.k, bars_per_year, &mut rng)?;
    let stem = format!(
        "backtest_{}_{}",
        rule.name().to_lowercase(),
        series.symbol.to_lowercase()
    );
    match (cli.format.unwrap_or(Format::Json), &cli.out) {
        (Format::Csv, None) => print!("{}", trades_csv(&series, &result)),
        (Format::Json, None) => println!("{}", serde_json::to_string_pretty(&result)?),
        (_, Some(_)) => {
            write_output(
                &cli.out,
                &format!("{stem}.json"),
                &format!("{}\n", serde_json::to_string_pretty(&result)?),
            )?;
            write_output(&cli.out, &format!("{stem}_trades.csv"), &trades_csv(&series, &result))?;
        }
    }
    Ok(())
}

fn cmd_bound(cli: &Cli, stress: Option<usize>, curve: bool, rbar: f64, nmax: usize) -> Result<()> {
    match (stress, curve) {
        (Some(cases), false) => {
            let outcome = stress_theorem1(cases, cli.seed);
            println!("{}", serde_json::to_string_pretty(&outcome)?);
            if !outcome.passed() {
                bail!("{} bound violations in {cases} cases", outcome.violations);
            }
            Ok(())
        }
        (None, true) => {
            let mut rng = keyed_rng(cli.seed, "cli-curve", 0);
            let points = decay_curve(cli.k, rbar, nmax, &mut rng)?;
            let mut out = meta_line("bound_curve", cli.seed, cli.k, nmax);
            out.push_str("n,R,bound,envelope\n");
            for p in &points {
                let _ = writeln!(out, "{},{},{},{}", p.n, p.r, p.bound, p.envelope);
            }
            write_output(&cli.out, "bound_curve.csv", &out)
        }
        _ => bail!("bound needs exactly one of --stress <cases> or --curve"),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bootstrap(
    cli: &Cli,
    rules: &str,
    data: &[PathBuf],
    m: usize,
    min_window: usize,
    bars_per_year: usize,
    compare: bool,
    options: RuleOptions,
) -> Result<()> {
    if cli.out.is_none() {
        bail!("bootstrap writes several files; pass --out <dir>");
    }
    let rules = parse_rules(rules)?;
    let config = BootstrapConfig {
        replicas: m,
        min_window,
        k: cli.k,
        seed: cli.seed,
        bars_per_year,
    };
    let mut summaries = Vec::new();
    let mut benchmarks = Vec::new();
    for path in data {
        let series = load_validated(path)?;
        for &rule in &rules {
            let spec = RuleSpec::with_options(rule, options);
            summaries.push(run_bootstrap(&config, &series, &spec)?);
        }
        benchmarks.push(market_benchmark(&config, &series)?);
    }
    let report = summarize_tables(
        &summaries,
        &benchmarks,
        ReportMeta {
            version: VERSION.to_string(),
            seed: cli.seed,
            k: cli.k,
            replicas: m,
        },
    )?;
    write_report_files(cli, &report, compare)?;
    if report.bound_audit_failures > 0 {
        bail!(
            "internal bound audit failed on {} replicas",
            report.bound_audit_failures
        );
    }
    Ok(())
}

fn write_report_files(cli: &Cli, report: &TablesReport, compare: bool) -> Result<()> {
    write_output(&cli.out, "table2.csv", &report.render_table2_csv())?;
    write_output(&cli.out, "table3.csv", &report.render_table3_csv())?;
    write_output(&cli.out, "fig5_boxdata.csv", &report.render_boxdata_csv())?;
    write_output(&cli.out, "summary.json", &format!("{}\n", report.render_json()))?;
    if compare {
        let reference = ReferenceTables::load()?;
        write_output(&cli.out, "comparison.txt", &report.render_comparison(&reference))?;
    }
    Ok(())
}

fn parse_k_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        bail!("k grid must be `lo:hi:step`, got `{text}`");
    };
    let (lo, hi, step): (f64, f64, f64) = (lo.parse()?, hi.parse()?, step.parse()?);
    if step <= 0.0 || hi < lo {
        bail!("k grid must have step > 0 and hi >= lo");
    }
    let count = ((hi - lo) / step).round() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn parse_k_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

fn cmd_sweep_k(
    cli: &Cli,
    rules: &str,
    data: &Path,
    k_grid: &str,
    m: usize,
    min_window: usize,
    options: RuleOptions,
) -> Result<()> {
    let series = load_validated(data)?;
    let rules = parse_rules(rules)?;
    let specs: Vec<RuleSpec> = rules
        .iter()
        .map(|&r| RuleSpec::with_options(r, options))
        .collect();
    let grid = parse_k_grid(k_grid)?;
    let base = BootstrapConfig {
        replicas: m,
        min_window,
        k: cli.k,
        seed: cli.seed,
        bars_per_year: DEFAULT_BARS_PER_YEAR,
    };
    let rows = sweep_k(&specs, &series, &grid, &base)?;
    let csv = render_sweep_k_csv(&rows, &meta_line("sweep_k", cli.seed, cli.k, m));
    write_output(&cli.out, "sweep_k.csv", &csv)
}

fn cmd_sweep_n(
    cli: &Cli,
    rule: &str,
    data: &Path,
    k_list: &str,
    nmax: usize,
    options: RuleOptions,
) -> Result<()> {
    let series = load_validated(data)?;
    let rule = parse_rule(rule)?;
    let spec = RuleSpec::with_options(rule, options);
    let k_list = parse_k_list(k_list)?;
    let rows = sweep_n(&spec, &series, &k_list, nmax, cli.seed)?;
    let csv = render_sweep_n_csv(&rows, &meta_line("sweep_n", cli.seed, cli.k, nmax));
    write_output(&cli.out, "sweep_n.csv", &csv)
}

fn cmd_reference(table: Option<&str>, rule: Option<&str>, index: Option<&str>) -> Result<()> {
    let tables = ReferenceTables::load()?;
    match (table, rule, index) {
        (None, None, None) => {
            print!("{}", tables.render());
            Ok(())
        }
        (Some(table), rule, Some(index)) => {
            let table = RefTable::parse(table)?;
            let rule = match table {
                RefTable::Cmv => "CMV",
                _ => rule.ok_or_else(|| anyhow!("lookup needs --rule"))?,
            };
            println!("{}", tables.lookup(table, rule, index)?);
            Ok(())
        }
        _ => bail!("reference takes either no flags (full tables) or --table/--rule/--index"),
    }
}
