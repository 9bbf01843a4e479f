//! Commit-reveal game sessions.
//!
//! Each round the machine commits to a hidden prediction first; the player
//! then reveals an outcome and only that response unveils the prediction.
//! The store is safe to share between threads: lookups take a read lock on
//! the index and every session carries its own mutex.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use seqpred::phispec::{GraphSpec, SetSource};
use seqpred::transcript::{Protocol, RoundRecord, Transcript, TranscriptSummary};
use seqpred::{Outcome, PhiSpec, PlayoutConfig, PlayoutMode};

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(3600);
pub const MAX_SESSION_HORIZON: usize = 100_000;
pub const MAX_SESSION_PLAYOUTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub phi: PhiSpec,
    #[serde(default)]
    pub horizon: Option<usize>,
    /// Fixing the seed makes the session reproducible, including by the
    /// player; leave it out for fair play.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub playout: Option<PlayoutMode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitAck {
    pub session_id: String,
    pub round: usize,
    pub token: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevealResult {
    pub round: usize,
    pub prediction: Outcome,
    pub outcome: Outcome,
    pub machine_correct: bool,
    pub machine_win_rate: f64,
    pub rounds_left: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub round: usize,
    pub prediction: Outcome,
    pub outcome: Outcome,
    pub machine_correct: bool,
}

/// Public state of a session. The pending prediction is never included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub phi: PhiSpec,
    pub horizon: usize,
    pub round: usize,
    pub rounds_left: usize,
    pub committed: bool,
    pub finished: bool,
    pub machine_wins: usize,
    pub machine_win_rate: f64,
    pub history: Vec<HistoryEntry>,
    pub created_at: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<TranscriptSummary>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SessionError {
    #[error("unknown session")]
    NotFound,
    #[error("round {round} is already committed")]
    AlreadyCommitted { round: usize },
    #[error("the horizon is exhausted")]
    Exhausted,
    #[error("no committed prediction for the current round")]
    NoPendingCommit,
    #[error("invalid outcome: {0}")]
    InvalidOutcome(String),
    #[error("invalid session request: {0}")]
    InvalidRequest(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SessionError {
    /// The HTTP status code for this error.
    pub fn status(&self) -> u16 {
        match self {
            SessionError::NotFound => 404,
            SessionError::AlreadyCommitted { .. } | SessionError::NoPendingCommit => 409,
            SessionError::Exhausted => 410,
            SessionError::InvalidOutcome(_) | SessionError::InvalidRequest(_) => 422,
            SessionError::Internal(_) => 500,
        }
    }
}

pub type SessionResult<T> = std::result::Result<T, SessionError>;

pub struct Session {
    id: String,
    spec: PhiSpec,
    protocol: Protocol,
    token: Option<String>,
    wins: usize,
    created_at: SystemTime,
    last_active: Instant,
    log: Option<File>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a TranscriptSummary,
}

impl Session {
    fn view(&self) -> SessionView {
        let history = self
            .protocol
            .transcript()
            .rounds
            .iter()
            .map(|r| HistoryEntry {
                round: r.t,
                prediction: r.prediction,
                outcome: r.outcome,
                machine_correct: r.prediction == r.outcome,
            })
            .collect();
        SessionView {
            id: self.id.clone(),
            phi: self.spec.clone(),
            horizon: self.protocol.horizon(),
            round: self.protocol.round().min(self.protocol.horizon()),
            rounds_left: self.protocol.rounds_left(),
            committed: self.protocol.has_pending(),
            finished: self.protocol.is_finished(),
            machine_wins: self.wins,
            machine_win_rate: self.win_rate(),
            history,
            created_at: self
                .created_at
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            summary: self.protocol.transcript().summary.clone(),
        }
    }

    fn win_rate(&self) -> f64 {
        let played = self.protocol.outcomes().len();
        if played == 0 {
            0.0
        } else {
            self.wins as f64 / played as f64
        }
    }

    fn commit(&mut self, token: Option<String>) -> SessionResult<CommitAck> {
        if let Some(pending) = &self.token {
            if token.as_deref() == Some(pending.as_str()) {
                return Ok(self.ack(pending.clone()));
            }
            return Err(SessionError::AlreadyCommitted {
                round: self.protocol.round(),
            });
        }
        if self.protocol.is_finished() {
            return Err(SessionError::Exhausted);
        }
        self.protocol
            .commit()
            .map_err(|e| SessionError::Internal(e.to_string()))?;
        let token = token.unwrap_or_else(|| Uuid::new_v4().simple().to_string());
        self.token = Some(token.clone());
        Ok(self.ack(token))
    }

    fn ack(&self, token: String) -> CommitAck {
        CommitAck {
            session_id: self.id.clone(),
            round: self.protocol.round(),
            token,
        }
    }

    fn reveal(&mut self, outcome: i64) -> SessionResult<RevealResult> {
        if self.protocol.is_finished() {
            return Err(SessionError::Exhausted);
        }
        if !self.protocol.has_pending() {
            return Err(SessionError::NoPendingCommit);
        }
        let y = Outcome::try_from(outcome).map_err(|_| {
            SessionError::InvalidOutcome(format!("{outcome} is not a valid outcome"))
        })?;
        let record = self
            .protocol
            .reveal(y)
            .map_err(|e| SessionError::InvalidOutcome(e.to_string()))?;
        self.token = None;
        let correct = record.prediction == record.outcome;
        self.wins += usize::from(correct);
        self.persist(&record);
        Ok(RevealResult {
            round: record.t,
            prediction: record.prediction,
            outcome: record.outcome,
            machine_correct: correct,
            machine_win_rate: self.win_rate(),
            rounds_left: self.protocol.rounds_left(),
        })
    }

    fn persist(&mut self, record: &RoundRecord) {
        let Some(file) = self.log.as_mut() else {
            return;
        };
        let mut lines = serde_json::to_string(record).expect("records serialize");
        lines.push('\n');
        if let Some(summary) = &self.protocol.transcript().summary {
            lines.push_str(
                &serde_json::to_string(&SummaryLine { summary }).expect("summary serializes"),
            );
            lines.push('\n');
        }
        if let Err(e) = file.write_all(lines.as_bytes()).and_then(|()| file.flush()) {
            log::warn!(
                "session {}: could not append to its transcript log: {e}",
                self.id
            );
        }
    }
}

#[derive(Clone, Debug)]
pub struct StoreOptions {
    pub idle_timeout: Duration,
    /// Directory receiving one `<id>.jsonl` transcript per session.
    pub persist_dir: Option<PathBuf>,
}

impl Default for StoreOptions {
    fn default() -> Self {
        Self {
            idle_timeout: DEFAULT_IDLE_TIMEOUT,
            persist_dir: None,
        }
    }
}

#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    options: StoreOptions,
}

fn graph_is_inline(g: &GraphSpec) -> bool {
    matches!(g, GraphSpec::Inline { .. })
}

/// Sessions only accept self-contained specs; graph files would be read
/// from the server's file system.
fn self_contained(spec: &PhiSpec) -> bool {
    match spec {
        PhiSpec::Imbalance { .. } | PhiSpec::Projection { .. } => true,
        PhiSpec::FiniteSet { source, .. } => match source {
            SetSource::Ball { graph, .. } => graph_is_inline(graph),
            _ => true,
        },
        PhiSpec::Aggregate { members, .. } => members.iter().all(self_contained),
        PhiSpec::GraphRelaxed { graph, .. } => graph_is_inline(graph),
    }
}

fn random_seed() -> u64 {
    let (hi, lo) = Uuid::new_v4().as_u64_pair();
    hi ^ lo.rotate_left(32)
}

impl SessionStore {
    pub fn new(options: StoreOptions) -> Self {
        Self {
            sessions: RwLock::default(),
            options,
        }
    }

    pub fn options(&self) -> &StoreOptions {
        &self.options
    }

    pub fn len(&self) -> usize {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, request: CreateSession) -> SessionResult<SessionView> {
        let invalid = |m: String| SessionError::InvalidRequest(m);
        if !self_contained(&request.phi) {
            return Err(invalid(
                "graph files are not accepted; give the edges inline".into(),
            ));
        }
        if request.phi.is_covariate() {
            return Err(invalid(
                "projection potentials need covariates and cannot be played".into(),
            ));
        }
        let n = request
            .phi
            .horizon(None)
            .map_err(|e| invalid(e.to_string()))?;
        if n == 0 || n > MAX_SESSION_HORIZON {
            return Err(invalid(format!(
                "horizon must lie in 1..={MAX_SESSION_HORIZON}, got {n}"
            )));
        }
        if let Some(h) = request.horizon {
            if h != n {
                return Err(invalid(format!(
                    "horizon {h} does not match the potential's horizon {n}"
                )));
            }
        }
        let seed = request.seed.unwrap_or_else(random_seed);
        let cfg = match request.playout.unwrap_or(PlayoutMode::SinglePlayout) {
            PlayoutMode::SinglePlayout => PlayoutConfig::single_playout(seed),
            PlayoutMode::MonteCarlo(m) if (1..=MAX_SESSION_PLAYOUTS).contains(&m) => {
                PlayoutConfig::monte_carlo(m, seed)
            }
            PlayoutMode::MonteCarlo(m) => {
                return Err(invalid(format!(
                    "playouts must lie in 1..={MAX_SESSION_PLAYOUTS}, got {m}"
                )))
            }
            PlayoutMode::Exhaustive => PlayoutConfig::exhaustive().with_seed(seed),
        };
        let phi = request
            .phi
            .build(None)
            .map_err(|e| invalid(e.to_string()))?;
        if cfg.mode == PlayoutMode::Exhaustive {
            phi.alphabet()
                .tail_count(n - 1)
                .map_err(|e| invalid(e.to_string()))?;
        }

        let id = Uuid::new_v4().simple().to_string();
        let log = match &self.options.persist_dir {
            Some(dir) => {
                Some(open_log(dir, &id).map_err(|e| SessionError::Internal(e.to_string()))?)
            }
            None => None,
        };
        let now = Instant::now();
        let session = Session {
            id: id.clone(),
            spec: request.phi,
            protocol: Protocol::new(phi, cfg, seed),
            token: None,
            wins: 0,
            created_at: SystemTime::now(),
            last_active: now,
            log,
        };
        let view = session.view();
        self.purge_expired();
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn with_session<T>(
        &self,
        id: &str,
        op: impl FnOnce(&mut Session) -> SessionResult<T>,
    ) -> SessionResult<T> {
        let entry = self
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or(SessionError::NotFound)?;
        let mut session = entry.lock().unwrap_or_else(|e| e.into_inner());
        if session.last_active.elapsed() > self.options.idle_timeout {
            drop(session);
            self.remove(id);
            return Err(SessionError::NotFound);
        }
        session.last_active = Instant::now();
        op(&mut session)
    }

    pub fn get(&self, id: &str) -> SessionResult<SessionView> {
        self.with_session(id, |s| Ok(s.view()))
    }

    /// Draws the hidden prediction for the open round. Retrying with the
    /// token of the pending commit returns the same acknowledgment.
    pub fn commit(&self, id: &str, token: Option<String>) -> SessionResult<CommitAck> {
        self.with_session(id, |s| s.commit(token))
    }

    pub fn reveal(&self, id: &str, outcome: i64) -> SessionResult<RevealResult> {
        self.with_session(id, |s| s.reveal(outcome))
    }

    pub fn transcript(&self, id: &str) -> SessionResult<Transcript> {
        self.with_session(id, |s| Ok(s.protocol.transcript().clone()))
    }

    pub fn remove(&self, id: &str) -> bool {
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .remove(id)
            .is_some()
    }

    /// Drops every session idle for longer than the timeout and returns
    /// how many were removed.
    pub fn purge_expired(&self) -> usize {
        let timeout = self.options.idle_timeout;
        let mut sessions = self.sessions.write().unwrap_or_else(|e| e.into_inner());
        let before = sessions.len();
        sessions.retain(|_, s| match s.try_lock() {
            Ok(s) => s.last_active.elapsed() <= timeout,
            Err(_) => true,
        });
        before - sessions.len()
    }
}

fn open_log(dir: &Path, id: &str) -> std::io::Result<File> {
    std::fs::create_dir_all(dir)?;
    OpenOptions::new()
        .create_new(true)
        .append(true)
        .open(dir.join(format!("{id}.jsonl")))
}
