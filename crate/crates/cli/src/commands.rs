//! Command implementations. Each returns a JSON payload plus its human
//! rendering; errors carry a kind that selects the exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use schubert_core::{
    ModPWitness, Monomial, Permutation, PermutationError, PolySystem, Scanner, SchubertEngine,
    SchubertError, WitnessError,
};

/// Answer was "no": zero coefficient, rejected certificate, no witness.
pub const EXIT_NEGATIVE: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    RankBound,
    BudgetExceeded,
    Io,
    InvalidCertificate,
}

impl ErrorKind {
    pub fn exit_code(self) -> u8 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::RankBound => 3,
            ErrorKind::BudgetExceeded => 4,
            ErrorKind::Io => 5,
            ErrorKind::InvalidCertificate => 6,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::RankBound => "rank-bound",
            ErrorKind::BudgetExceeded => "budget-exceeded",
            ErrorKind::Io => "io",
            ErrorKind::InvalidCertificate => "invalid-certificate",
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: ErrorKind,
    pub message: String,
}

impl Failure {
    fn new(kind: ErrorKind, message: impl ToString) -> Self {
        Self {
            kind,
            message: message.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"status": "error", "kind": self.kind.name(), "message": self.message})
    }
}

impl From<PermutationError> for Failure {
    fn from(e: PermutationError) -> Self {
        let kind = match e {
            PermutationError::RankBound { .. } => ErrorKind::RankBound,
            _ => ErrorKind::Parse,
        };
        Self::new(kind, e)
    }
}

impl From<SchubertError> for Failure {
    fn from(e: SchubertError) -> Self {
        match e {
            SchubertError::Permutation(p) => p.into(),
            SchubertError::AmbientRankExceeded { .. } => Self::new(ErrorKind::RankBound, e),
            other => Self::new(ErrorKind::Parse, other),
        }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        let kind = match e {
            WitnessError::BudgetExceeded { .. } => ErrorKind::BudgetExceeded,
            WitnessError::NotPrime(_)
            | WitnessError::DimensionMismatch { .. }
            | WitnessError::ResidueOutOfRange { .. } => ErrorKind::InvalidCertificate,
            WitnessError::EmptySystem | WitnessError::VariableOutOfRange { .. } => ErrorKind::Parse,
        };
        Self::new(kind, e)
    }
}

pub struct CommandResult {
    pub payload: Value,
    pub human: String,
    pub exit_code: u8,
}

impl CommandResult {
    fn ok(payload: Value, human: impl Into<String>) -> Self {
        Self {
            payload,
            human: human.into(),
            exit_code: 0,
        }
    }

    fn with_exit(mut self, code: u8) -> Self {
        self.exit_code = code;
        self
    }
}

type CmdResult = Result<CommandResult, Failure>;

pub struct Context {
    engine: SchubertEngine,
    scanner: Scanner,
}

fn perm(s: &str) -> Result<Permutation, Failure> {
    Ok(s.parse::<Permutation>()?)
}

fn window(w: &Permutation) -> Value {
    json!(w.trimmed_window())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(ErrorKind::Parse, format!("{}: {e}", path.display())))
}

impl Context {
    pub fn new(rank_bound: usize, budget: u64) -> Self {
        Self {
            engine: SchubertEngine::with_rank_bound(rank_bound),
            scanner: Scanner::new(budget),
        }
    }

    pub fn poly(&self, w: &str) -> CmdResult {
        let sch = self.engine.schubert_polynomial(&perm(w)?)?;
        Ok(CommandResult::ok(to_value(&*sch), sch.to_string()))
    }

    pub fn kostka(&self, w: &str, alpha: &str) -> CmdResult {
        let w = perm(w)?;
        let exps = alpha
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| {
                Failure::new(ErrorKind::Parse, format!("bad exponent vector {alpha:?}"))
            })?;
        let m = Monomial::new(exps);
        let c = self.engine.schubert_kostka(&w, &m)?;
        Ok(CommandResult::ok(
            json!({"w": window(&w), "alpha": m.exponents(), "coeff": c.to_string()}),
            c.to_string(),
        ))
    }

    pub fn pipedreams(&self, w: &str, count_only: bool) -> CmdResult {
        let w = perm(w)?;
        let dreams = self.engine.pipe_dreams(&w)?;
        let count = dreams.len().to_string();
        if count_only {
            return Ok(CommandResult::ok(
                json!({"w": window(&w), "count": count}),
                count,
            ));
        }
        let mut human = String::new();
        for d in &dreams {
            let cells: Vec<String> = d
                .crossings
                .iter()
                .map(|(i, j)| format!("({i},{j})"))
                .collect();
            writeln!(human, "{{{}}}  weight {}", cells.join(","), d.weight()).unwrap();
            human.push_str(&d.render());
        }
        write!(human, "count: {count}").unwrap();
        Ok(CommandResult::ok(
            json!({"w": window(&w), "count": count, "pipe_dreams": to_value(&dreams)}),
            human,
        ))
    }

    pub fn coeff(&self, u: &str, v: &str, w: &str) -> CmdResult {
        let (u, v, w) = (perm(u)?, perm(v)?, perm(w)?);
        let c = self.engine.schubert_coefficient(&u, &v, &w)?;
        Ok(CommandResult::ok(
            json!({"u": window(&u), "v": window(&v), "w": window(&w), "coeff": c.to_string()}),
            c.to_string(),
        ))
    }

    pub fn expand(&self, u: &str, v: &str) -> CmdResult {
        let e = self.engine.expand_product(&perm(u)?, &perm(v)?)?;
        let payload = to_value(&*e);
        let human = payload.to_string();
        Ok(CommandResult::ok(payload, human))
    }

    pub fn positive(&self, u: &str, v: &str, w: &str, quiet: bool) -> CmdResult {
        let cert = self.engine.is_positive(&perm(u)?, &perm(v)?, &perm(w)?)?;
        let positive = cert.is_positive();
        let res = CommandResult::ok(
            json!({
                "u": window(&cert.u),
                "v": window(&cert.v),
                "w": window(&cert.w),
                "positive": positive,
                "coeff": cert.coefficient.to_string(),
                "evidence": to_value(&*cert.expansion),
            }),
            positive.to_string(),
        );
        Ok(if quiet && !positive {
            res.with_exit(EXIT_NEGATIVE)
        } else {
            res
        })
    }

    /// Rows `(u, v, w, c^w_{u,v})` for all `u, v ∈ S_n` and `w` in the support,
    /// in lexicographic order of `u`, then `v`, then `w`.
    pub fn table_rows(&self, n: usize) -> Result<Vec<[String; 4]>, Failure> {
        let perms = Permutation::all(n);
        let shards: Vec<Result<Vec<[String; 4]>, Failure>> = perms
            .par_iter()
            .map(|u| {
                let mut rows = Vec::new();
                for v in &perms {
                    let e = self.engine.expand_product(u, v)?;
                    for (w, c) in e.terms() {
                        rows.push([
                            u.to_one_line(),
                            v.to_one_line(),
                            w.to_one_line(),
                            c.to_string(),
                        ]);
                    }
                }
                Ok(rows)
            })
            .collect();
        let mut rows = Vec::new();
        for shard in shards {
            rows.extend(shard?);
        }
        Ok(rows)
    }

    pub fn table(&self, n: usize, max_n: usize, output: Option<&Path>) -> CmdResult {
        if n > max_n {
            return Err(Failure::new(
                ErrorKind::RankBound,
                format!("table rank {n} exceeds the limit {max_n} (raise it with --max-n)"),
            ));
        }
        self.engine.rank_bound().check_rank(n)?;
        let rows = self.table_rows(n)?;
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| Failure::new(ErrorKind::Io, e);
        writer
            .write_record(["u", "v", "w", "coeff"])
            .map_err(io_err)?;
        for row in &rows {
            writer.write_record(row).map_err(io_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Failure::new(ErrorKind::Io, e))?;
        match output {
            Some(path) => {
                fs::write(path, &bytes)
                    .map_err(|e| Failure::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
                Ok(CommandResult::ok(
                    json!({"rows": rows.len().to_string(), "path": path.display().to_string()}),
                    format!("wrote {} rows to {}", rows.len(), path.display()),
                ))
            }
            None => {
                io::stdout()
                    .write_all(&bytes)
                    .map_err(|e| Failure::new(ErrorKind::Io, e))?;
                Ok(CommandResult::ok(
                    json!({"rows": rows.len().to_string()}),
                    String::new(),
                ))
            }
        }
    }

    pub fn witness_verify(&self, system: &Path, certificate: &Path) -> CmdResult {
        let sys: PolySystem = read_json(system)?;
        let cert: ModPWitness = read_json(certificate)?;
        let accept = sys.verify(&cert)?;
        let res = CommandResult::ok(
            json!({"accept": accept}),
            if accept { "accept" } else { "reject" },
        );
        Ok(if accept {
            res
        } else {
            res.with_exit(EXIT_NEGATIVE)
        })
    }

    pub fn witness_search(&self, system: &Path, primes: &[u64]) -> CmdResult {
        let sys: PolySystem = read_json(system)?;
        Ok(match self.scanner.search(&sys, primes)? {
            Some(cert) => {
                let payload = to_value(&cert);
                let human = payload.to_string();
                CommandResult::ok(payload, human)
            }
            None => CommandResult::ok(Value::Null, "none").with_exit(EXIT_NEGATIVE),
        })
    }

    pub fn witness_count(&self, system: &Path, prime: u64) -> CmdResult {
        let sys: PolySystem = read_json(system)?;
        let count = self.scanner.count(&sys, prime)?;
        Ok(CommandResult::ok(
            json!({"count": count.to_string()}),
            count.to_string(),
        ))
    }
}
