use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use insdel::bounds::{
    appendix_report, canonical_supersequence, equal_radius_bound, figure_csv, johnson_bound, lemma1_bound,
    plotkin_bound, summary_bound, BoundQuery, BoundResult, Figure,
};
use insdel::channel::corrupt;
use insdel::concat::{
    concat_encode, derive_insertion_params, derive_insertion_params_with_rate, derive_params, derive_params_with_rate,
    list_decode, ConcatParams, DecodeMode, DecodeOptions, Message, OuterRecovery, DEFAULT_BRUTE_FORCE_CAP,
};
use insdel::inner::{search_inner_code, InnerCode, DEFAULT_SEARCH_BUDGET};
use insdel::metric::{CodeBook, Word};
use insdel::oracle::{
    brute_force_list, max_code_search, max_list_size, DEFAULT_CODE_SEARCH_CAP, DEFAULT_ENUMERATION_CAP,
};
use insdel::rational::{format_decimal, format_exact, int, parse_rational, Rational};
use insdel::reed_solomon::smallest_prime_at_least;

#[derive(Parser)]
#[command(name = "insdel", version, about = "List decoding of insertions and deletions")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List-size and code-size bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Inner code construction and distance checks.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Insertion/deletion channel simulator.
    #[command(subcommand)]
    Channel(ChannelCmd),
    /// Concatenated code.
    #[command(subcommand)]
    Codec(CodecCmd),
    /// Exhaustive oracles.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Recompute published worked examples.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    #[arg(long, default_value_t = 0)]
    tins: u64,
    #[arg(long, default_value_t = 0)]
    tdel: u64,
    /// Received word length.
    #[arg(long = "N")]
    big_n: Option<u64>,
}

impl BoundArgs {
    fn query(&self) -> BoundQuery {
        BoundQuery {
            n: self.n,
            d: self.d,
            t_ins: self.tins,
            t_del: self.tdel,
            received_len: self.big_n,
        }
    }
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Bound for arbitrary insertion and deletion budgets.
    Johnson(BoundArgs),
    /// Bound for received words of one fixed length.
    Lemma1(BoundArgs),
    /// Equal insertion and deletion radius.
    Equal {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        /// Radius to evaluate (default: largest feasible).
        #[arg(long)]
        t: Option<u64>,
    },
    /// Normalized bound, from `--n --d --tins --tdel` or from fractions.
    Summary {
        #[arg(long, required_unless_present = "delta")]
        n: Option<u64>,
        #[arg(long, required_unless_present = "delta")]
        d: Option<u64>,
        #[arg(long, default_value_t = 0)]
        tins: u64,
        #[arg(long, default_value_t = 0)]
        tdel: u64,
        #[arg(long, value_parser = rational, conflicts_with_all = ["n", "d"])]
        delta: Option<Rational>,
        #[arg(long = "tau-ins", value_parser = rational, requires = "delta")]
        tau_ins: Option<Rational>,
        #[arg(long = "tau-del", value_parser = rational, requires = "delta")]
        tau_del: Option<Rational>,
    },
    /// Code-size bound given a common supersequence of length N.
    Plotkin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        /// Supersequence length (default: q n).
        #[arg(long = "N")]
        big_n: Option<u64>,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Radius curves as CSV.
    Curves {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        figure: u8,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = rational, default_value = "1/100")]
        step: Rational,
        /// Comma-separated curve parameters (rho, or tau_ins for figure 3).
        #[arg(long, value_parser = rational, value_delimiter = ',')]
        params: Vec<Rational>,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Randomized greedy search for an inner code of p^2 words.
    SearchInner {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum Levenshtein distance of a codebook or inner code file.
    MinDistance {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Apply exactly `tins` insertions and `tdel` deletions.
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        tins: usize,
        #[arg(long)]
        tdel: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block length for per-block counts in the ledger.
        #[arg(long)]
        block: Option<usize>,
        /// Write the corrupted word here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the ledger JSON here instead of stdout.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum CodecCmd {
    /// Derive a parameter file.
    Params {
        #[arg(long, default_value = "insdel")]
        mode: String,
        #[arg(long = "tau-i", value_parser = rational)]
        tau_i: Rational,
        #[arg(long = "tau-d", value_parser = rational, default_value = "0")]
        tau_d: Rational,
        #[arg(long = "ell-prime", default_value_t = 1)]
        ell_prime: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Field size (default: smallest prime >= n).
        #[arg(long)]
        p: Option<u64>,
        /// Window divisor, insertion mode.
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, value_parser = rational, default_value = "1/2")]
        gamma: Rational,
        /// Replace the derived outer rate. Voids the list-size guarantee.
        #[arg(long = "override-rate", value_parser = rational)]
        override_rate: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message given as a hex index.
    Encode {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        msg: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List decode a received word.
    Decode {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Must match the parameter file when given.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long = "brute-force-cap", default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        brute_force_cap: u64,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Codewords within the budgets of a received word.
    List {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        tins: usize,
        #[arg(long)]
        tdel: usize,
    },
    /// Worst-case list size over every received word.
    MaxList {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tins: usize,
        #[arg(long)]
        tdel: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Largest code with a given minimum distance.
    MaxCode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_CODE_SEARCH_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Counterexample distances and u-values.
    Appendix,
}

enum Failure {
    Usage(String),
    Compute(String),
    Verify(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exact(r: &Rational) -> Value {
    json!({ "exact": format_exact(r), "decimal": format_decimal(r, 10) })
}

fn show(r: &Rational) -> String {
    if r.is_integer() {
        format_exact(r)
    } else {
        format!("{} (~{})", format_exact(r), format_decimal(r, 6))
    }
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, human: impl FnOnce() -> String, value: Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            println!("{}", human());
        }
    }
}

fn bound_json(b: &BoundResult) -> Value {
    serde_json::to_value(b).expect("bound serializes")
}

fn run_bounds(cmd: BoundsCmd, out: &Out) -> Outcome {
    match cmd {
        BoundsCmd::Johnson(a) => {
            let b = if a.big_n.is_some() {
                a.query().johnson()?
            } else {
                johnson_bound(a.n, a.d, a.tins, a.tdel)?
            };
            out.emit(|| b.describe(), bound_json(&b));
        }
        BoundsCmd::Lemma1(a) => {
            let b = if a.big_n.is_some() {
                a.query().lemma1()?
            } else {
                lemma1_bound(a.n, a.d, a.tins, a.tdel)?
            };
            out.emit(|| b.describe(), bound_json(&b));
        }
        BoundsCmd::Equal { n, d, t } => {
            let eq = equal_radius_bound(n, d)?;
            let t = t.or_else(|| eq.max_radius());
            let at = t.map(|t| eq.bound_at(t)).transpose()?;
            out.emit(
                || {
                    let mut s = format!("equal radius threshold {:.6}", eq.t_equal);
                    match (t, &at) {
                        (Some(t), Some(b)) => s.push_str(&format!("\nt = {t}: {}", b.describe())),
                        _ => s.push_str("\nno feasible integer radius"),
                    }
                    s
                },
                json!({ "n": n, "d": d, "t_equal": eq.t_equal, "t": t, "bound": at.as_ref().map(bound_json) }),
            );
        }
        BoundsCmd::Summary {
            n,
            d,
            tins,
            tdel,
            delta,
            tau_ins,
            tau_del,
        } => {
            let (tau_ins, tau_del, delta) = match delta {
                Some(delta) => (
                    tau_ins.unwrap_or_else(|| int(0)),
                    tau_del.unwrap_or_else(|| int(0)),
                    delta,
                ),
                None => {
                    let (n, d) = (n.expect("required"), d.expect("required"));
                    if n == 0 {
                        return Err(Failure::Usage("n must be positive".into()));
                    }
                    let nr = int(n as i64);
                    (
                        int(tins as i64) / &nr,
                        int(tdel as i64) / &nr,
                        int(d as i64) / (int(2) * &nr),
                    )
                }
            };
            let s = summary_bound(&tau_ins, &tau_del, &delta)?;
            out.emit(
                || {
                    let mut text = format!("delta_ID {}", show(&s.delta_id));
                    if let Some(g) = &s.gamma {
                        text.push_str(&format!("\ngamma {}", show(g)));
                    }
                    text.push('\n');
                    text.push_str(&s.result.describe());
                    text
                },
                json!({
                    "tau_ins": exact(&tau_ins),
                    "tau_del": exact(&tau_del),
                    "delta": exact(&delta),
                    "delta_id": exact(&s.delta_id),
                    "gamma": s.gamma.as_ref().map(exact),
                    "bound": bound_json(&s.result),
                }),
            );
        }
        BoundsCmd::Plotkin { n, d, big_n, q } => {
            let len = big_n.unwrap_or_else(|| canonical_supersequence(q, n as usize).len() as u64);
            let b = plotkin_bound(n, d, len)?;
            out.emit(
                || format!("N = {len}: {}", b.describe()),
                json!({ "n": n, "d": d, "N": len, "bound": bound_json(&b) }),
            );
        }
        BoundsCmd::Curves {
            figure,
            out: path,
            step,
            params,
        } => {
            let fig = Figure::from_number(figure).expect("range checked by clap");
            let params = if params.is_empty() {
                fig.default_params()
            } else {
                params
            };
            let csv = figure_csv(fig, &step, &params)?;
            write_or_print(path.as_deref(), &csv)?;
        }
    }
    Ok(())
}

fn load_inner(path: &Path) -> Result<InnerCode, Failure> {
    InnerCode::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_codebook(path: &Path) -> Result<CodeBook, Failure> {
    CodeBook::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_word(path: &Path, q: u32) -> Result<Word, Failure> {
    let text = read(path)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    Word::parse(line, q).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run_code(cmd: CodeCmd, out: &Out) -> Outcome {
    match cmd {
        CodeCmd::SearchInner {
            q,
            m,
            p,
            delta,
            seed,
            budget,
            out: path,
        } => {
            let code = search_inner_code(q, m, p, &delta, seed, budget)?;
            let summary = json!({
                "q": q, "m": m, "p": p, "seed": seed,
                "codewords": code.codewords().len(),
                "min_distance": code.min_distance(),
                "delta_in": exact(&code.delta_in()),
            });
            match path {
                Some(path) => {
                    write_or_print(Some(&path), &code.to_text())?;
                    out.emit(
                        || {
                            format!(
                                "{} codewords, min distance {}, delta_in {}",
                                code.codewords().len(),
                                code.min_distance(),
                                show(&code.delta_in())
                            )
                        },
                        summary,
                    );
                }
                None if out.json => out.emit(String::new, json!({ "summary": summary, "code": code.to_text() })),
                None => print!("{}", code.to_text()),
            }
        }
        CodeCmd::MinDistance { input } => {
            let text = read(&input)?;
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'));
            let (d, n) = if first.is_some_and(|l| l.starts_with("q=")) {
                let book = CodeBook::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                (book.min_dist(), book.n())
            } else {
                let code = load_inner(&input)?;
                (Some(code.min_distance()), code.m())
            };
            match d {
                Some(d) => {
                    let delta = int(d as i64) / int(2 * n as i64);
                    out.emit(
                        || format!("min distance {d}, normalized {}", show(&delta)),
                        json!({ "min_distance": d, "n": n, "delta": exact(&delta) }),
                    );
                }
                None => out.emit(|| "fewer than two codewords".into(), json!({ "min_distance": null })),
            }
        }
    }
    Ok(())
}

fn run_channel(cmd: ChannelCmd, out: &Out) -> Outcome {
    let ChannelCmd::Corrupt {
        input,
        q,
        tins,
        tdel,
        seed,
        block,
        out: word_path,
        ledger: ledger_path,
    } = cmd;
    let x = load_word(&input, q)?;
    let (v, ledger) = corrupt(&x, tins, tdel, seed)?;
    let ledger_json = ledger.to_json(block)?;
    if let Some(p) = &ledger_path {
        write_or_print(
            Some(p),
            &format!("{}\n", serde_json::to_string_pretty(&ledger_json).expect("json")),
        )?;
    }
    if let Some(p) = &word_path {
        write_or_print(Some(p), &format!("{v}\n"))?;
    }
    if out.json {
        out.emit(String::new, json!({ "word": v.to_string(), "ledger": ledger_json }));
    } else {
        if word_path.is_none() {
            println!("{v}");
        }
        if ledger_path.is_none() {
            println!("{}", serde_json::to_string_pretty(&ledger_json).expect("json"));
        }
    }
    Ok(())
}

fn params_json(p: &ConcatParams) -> Value {
    let (ti, td) = p.inner_budgets();
    let (oi, od) = p.outer_budgets();
    let (lo, hi) = p.length_range();
    json!({
        "mode": p.mode.to_string(),
        "tau_I": exact(&p.tau_i),
        "tau_D": exact(&p.tau_d),
        "tau_D_prime": exact(&p.tau_d_prime),
        "tau_I_prime": exact(&p.tau_i_prime),
        "r": exact(&p.r),
        "ell_prime": p.ell_prime,
        "ell": exact(&p.ell),
        "n": p.n, "m": p.m, "p": p.p,
        "k_ins": p.k_ins,
        "gamma": p.gamma.as_ref().map(exact),
        "b": p.b,
        "rate_override": p.rate_override,
        "k_outer": p.k_outer(),
        "stride": p.stride(),
        "window_grid": p.window_grid(),
        "window_lengths": [p.window_lengths().0, p.window_lengths().1],
        "inner_budgets": [ti, td],
        "outer_budgets": [oi, od],
        "threshold": p.threshold(),
        "pair_cap": p.pair_cap(),
        "length_range": [lo, hi],
    })
}

fn parse_mode(s: &str) -> Result<DecodeMode, Failure> {
    s.parse()
        .map_err(|e: insdel::concat::ConcatError| Failure::Usage(e.to_string()))
}

fn run_codec(cmd: CodecCmd, out: &Out) -> Outcome {
    match cmd {
        CodecCmd::Params {
            mode,
            tau_i,
            tau_d,
            ell_prime,
            n,
            m,
            p,
            k,
            gamma,
            override_rate,
            out: path,
        } => {
            let p = p.unwrap_or_else(|| smallest_prime_at_least(n as u64));
            let params = match (parse_mode(&mode)?, override_rate) {
                (DecodeMode::InsDel, None) => derive_params(&tau_i, &tau_d, ell_prime, n, m, p)?,
                (DecodeMode::InsDel, Some(r)) => derive_params_with_rate(&tau_i, &tau_d, ell_prime, n, m, p, &r)?,
                (DecodeMode::Insertions, None) => derive_insertion_params(&tau_i, &gamma, k, ell_prime, n, m, p)?,
                (DecodeMode::Insertions, Some(r)) => {
                    derive_insertion_params_with_rate(&tau_i, &gamma, k, ell_prime, n, m, p, &r)?
                }
            };
            match path {
                Some(path) => {
                    write_or_print(Some(&path), &params.to_text())?;
                    out.emit(|| params.to_text().trim_end().to_string(), params_json(&params));
                }
                None => out.emit(|| params.to_text().trim_end().to_string(), params_json(&params)),
            }
            if params.rate_override {
                eprintln!("note: outer rate overridden; the list-size bound ell is not guaranteed");
            }
        }
        CodecCmd::Encode {
            params,
            inner,
            msg,
            out: path,
        } => {
            let params = ConcatParams::parse(&read(&params)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let inner = load_inner(&inner)?;
            let msg = Message::from_hex(&msg, &params).map_err(|e| Failure::Usage(e.to_string()))?;
            let word = concat_encode(&params, &inner, &msg)?;
            if let Some(path) = &path {
                write_or_print(Some(path), &format!("{word}\n"))?;
            }
            if out.json {
                out.emit(
                    String::new,
                    json!({ "message": msg.to_hex(), "symbols": msg.to_string(), "word": word.to_string() }),
                );
            } else if path.is_none() {
                println!("{word}");
            }
        }
        CodecCmd::Decode {
            params,
            inner,
            input,
            mode,
            brute_force_cap,
        } => {
            let params = ConcatParams::parse(&read(&params)?).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(mode) = mode {
                let mode = parse_mode(&mode)?;
                if mode != params.mode {
                    return Err(Failure::Usage(format!(
                        "--mode {mode} does not match the parameter file ({})",
                        params.mode
                    )));
                }
            }
            let inner = load_inner(&inner)?;
            let v = load_word(&input, inner.q())?;
            let result = list_decode(&params, &inner, &v, &DecodeOptions { brute_force_cap })?;
            let d = &result.diagnostics;
            let recovery = match d.recovery {
                OuterRecovery::Sudan => "sudan",
                OuterRecovery::BruteForce => "brute-force",
            };
            out.emit(
                || {
                    let mut s = String::new();
                    for m in &result.messages {
                        s.push_str(&format!("{} [{m}]\n", m.to_hex()));
                    }
                    s.push_str(&format!(
                        "{} message(s); windows {}, |J| {}, outer list {}, recovery {recovery}",
                        result.messages.len(),
                        d.windows,
                        d.pairs,
                        d.outer_list
                    ));
                    if !d.regime_ok {
                        s.push_str(" (threshold^2 <= 2k|J|)");
                    }
                    s
                },
                json!({
                    "messages": result.messages.iter().map(Message::to_hex).collect::<Vec<_>>(),
                    "diagnostics": {
                        "windows": d.windows,
                        "pairs": d.pairs,
                        "max_window_list": d.max_window_list,
                        "outer_list": d.outer_list,
                        "recovery": recovery,
                        "regime_ok": d.regime_ok,
                        "pair_cap": d.pair_cap,
                        "threshold": d.threshold,
                    },
                }),
            );
        }
    }
    Ok(())
}

fn run_oracle(cmd: OracleCmd, out: &Out) -> Outcome {
    match cmd {
        OracleCmd::List {
            input,
            word,
            tins,
            tdel,
        } => {
            let code = load_codebook(&input)?;
            let v = Word::parse(&word, code.q()).map_err(|e| Failure::Usage(e.to_string()))?;
            let list = brute_force_list(&code, &v, tins, tdel)?;
            let words: Vec<String> = list.iter().map(Word::to_string).collect();
            out.emit(
                || {
                    format!("{} codeword(s)\n{}", words.len(), words.join("\n"))
                        .trim_end()
                        .to_string()
                },
                json!({ "size": words.len(), "codewords": words }),
            );
        }
        OracleCmd::MaxList { input, tins, tdel, cap } => {
            let code = load_codebook(&input)?;
            let best = max_list_size(&code, tins, tdel, cap)?;
            out.emit(
                || format!("max list size {}, witness {}", best.max, best.witness),
                json!({ "max": best.max, "witness": best.witness.to_string() }),
            );
        }
        OracleCmd::MaxCode { q, n, d, cap } => {
            let code = max_code_search(q, n, d, cap)?;
            let words: Vec<String> = code.words().iter().map(Word::to_string).collect();
            out.emit(
                || format!("max code size {}\n{}", words.len(), words.join("\n")),
                json!({ "size": words.len(), "codewords": words }),
            );
        }
    }
    Ok(())
}

fn run_verify(cmd: VerifyCmd, out: &Out) -> Outcome {
    let VerifyCmd::Appendix = cmd;
    let report = appendix_report()?;
    out.emit(
        || {
            let mut s = String::new();
            for p in &report.pairs {
                s.push_str(&format!(
                    "u({},{})={} d_L(c{},c{})={} {}\n",
                    p.i,
                    p.j,
                    p.u,
                    p.i,
                    p.j,
                    p.distance,
                    if p.refutes() { "d_L > u" } else { "NOT REFUTED" }
                ));
            }
            s.push_str(if report.all_refuted() { "ok" } else { "failed" });
            s
        },
        json!({ "pairs": report.pairs, "all_refuted": report.all_refuted() }),
    );
    if report.all_refuted() {
        Ok(())
    } else {
        Err(Failure::Verify("a pair has d_L <= u".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = Out { json: cli.json };
    let result = match cli.command {
        Command::Bounds(c) => run_bounds(c, &out),
        Command::Code(c) => run_code(c, &out),
        Command::Channel(c) => run_channel(c, &out),
        Command::Codec(c) => run_codec(c, &out),
        Command::Oracle(c) => run_oracle(c, &out),
        Command::Verify(c) => run_verify(c, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
