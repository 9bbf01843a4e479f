//! Matching pennies in the terminal: the machine locks in a guess, the
//! player picks a side, and the guess is revealed afterwards.

use std::io::{BufRead, Write};

use seqpred::philib::{finite_set_phi, pattern_family, PenaltyConstant};
use seqpred::transcript::{Protocol, TranscriptSummary};
use seqpred::PlayoutConfig;

use crate::error::{HarnessError, HarnessResult};

#[derive(Clone, Copy, Debug)]
pub struct GameOptions {
    pub rounds: usize,
    /// Longest period of the repeating patterns the machine tracks.
    pub max_period: usize,
    pub seed: u64,
}

impl Default for GameOptions {
    fn default() -> Self {
        Self {
            rounds: 30,
            max_period: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameResult {
    pub played: usize,
    pub machine_wins: usize,
    pub summary: Option<TranscriptSummary>,
}

fn parse_move(line: &str) -> Option<i8> {
    match line.trim() {
        "+" | "+1" | "1" | "h" | "H" => Some(1),
        "-" | "-1" | "t" | "T" => Some(-1),
        _ => None,
    }
}

fn sign(y: i8) -> &'static str {
    if y > 0 {
        "+1"
    } else {
        "-1"
    }
}

/// Plays until the horizon, end of input, or `q`.
pub fn play<R: BufRead, W: Write>(
    opts: GameOptions,
    mut input: R,
    mut out: W,
) -> HarnessResult<GameResult> {
    let family = pattern_family(opts.rounds, opts.max_period)?;
    let penalty = PenaltyConstant::finite_class_bound(opts.rounds, family.len())?;
    let phi = finite_set_phi(&family, penalty)?;
    let mut protocol = Protocol::new(phi, PlayoutConfig::single_playout(opts.seed), opts.seed);
    let mut wins = 0;
    writeln!(
        out,
        "Matching pennies, {} rounds. The machine wins a round when it guesses your move.",
        opts.rounds
    )?;
    writeln!(out, "Enter +1 (or h) and -1 (or t); q quits.")?;
    let mut line = String::new();
    'rounds: while !protocol.is_finished() {
        let round = protocol.commit()?;
        let y = loop {
            write!(
                out,
                "round {round}: the machine has locked in its guess. Your move: "
            )?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 || line.trim() == "q" {
                writeln!(out)?;
                break 'rounds;
            }
            match parse_move(&line) {
                Some(y) => break y,
                None => writeln!(out, "  `{}` is not a move", line.trim())?,
            }
        };
        let record = protocol.reveal(y).map_err(HarnessError::from)?;
        let won = record.prediction == record.outcome;
        wins += usize::from(won);
        writeln!(
            out,
            "  machine guessed {}, you played {}: {}. machine {wins} / you {}",
            sign(record.prediction),
            sign(record.outcome),
            if won { "machine wins" } else { "you win" },
            record.t - wins
        )?;
    }
    let played = protocol.outcomes().len();
    let summary = protocol.transcript().summary.clone();
    if played > 0 {
        writeln!(
            out,
            "final: machine won {wins} of {played} rounds ({:.1}%)",
            100.0 * wins as f64 / played as f64
        )?;
    }
    if let Some(s) = &summary {
        writeln!(
            out,
            "expected machine error rate {:.3}, guaranteed at most {:.3} for this sequence",
            s.mu_hat, s.phi
        )?;
    }
    Ok(GameResult {
        played,
        machine_wins: wins,
        summary,
    })
}
