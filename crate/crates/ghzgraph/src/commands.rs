//! Command implementations. Each returns its full output as a string so the
//! binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::Path;

use ghzgraph_core::concat::{Blocking, ChannelEvent, ConcatScheme, NoiseModel};
use ghzgraph_core::ghz::{Corruption, GhzLayout};
use ghzgraph_core::graph_code::{
    operator_label, reference_state, single_qudit_errors, AdmissibilityReport, CodeGraph,
};
use ghzgraph_core::{PauliError, Prime, StateVector};
use thiserror::Error;

use crate::graph_file::{self, GraphFileError};
use crate::program_text::program_to_text;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] GraphFileError),
    #[error("{0}")]
    Usage(String),
    #[error("{stage}: {source}")]
    Domain {
        stage: &'static str,
        source: ghzgraph_core::Error,
    },
}

impl CliError {
    /// 1 for failures of the simulated code, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 1,
            CliError::File(_) | CliError::Usage(_) => 2,
        }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T> Stage<T> for ghzgraph_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Domain { stage, source })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Records,
}

/// Output plus whether the command's check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// Loads `path`, or the shipped five-qubit graph with syndrome vertices.
/// `p`, when given, must agree with the file.
pub fn load_graph(path: Option<&Path>, p: Option<u32>) -> Result<CodeGraph, CliError> {
    let g = match path {
        Some(path) => graph_file::read_graph(path)?,
        None => graph_file::parse_graph(graph_file::FIVE_QUBIT_DECODING)?,
    };
    if let Some(p) = p {
        if g.modulus().get() != p {
            return Err(CliError::Usage(format!(
                "--p {p} disagrees with the graph's modulus {}",
                g.modulus()
            )));
        }
    }
    Ok(g)
}

pub fn verify_graph(g: &CodeGraph, e: usize, format: Format) -> Result<Output, CliError> {
    let report = g.check_admissibility(e).stage("admissibility")?;
    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(
                out,
                "graph p={} X={} Y={} L={} e={e}",
                g.modulus(),
                g.input_count(),
                g.output_count(),
                g.syndrome_count()
            );
            for (name, pass) in report.conditions() {
                let _ = writeln!(out, "{name} {}", if pass { "pass" } else { "FAIL" });
            }
            if let Some(w) = witness_fields(g, &report) {
                let _ = writeln!(out, "C5 witness: E={{{}}} d^X={} d^E={}", w.0, w.1, w.2);
            }
            let _ = writeln!(
                out,
                "admissible: {}",
                if report.all_pass() { "yes" } else { "no" }
            );
        }
        Format::Records => {
            for (name, pass) in report.conditions() {
                let _ = writeln!(out, "condition={name} pass={pass}");
            }
            if let Some(w) = witness_fields(g, &report) {
                let _ = writeln!(out, "witness erased={} dx={} de={}", w.0, w.1, w.2);
            }
            let _ = writeln!(out, "admissible={}", report.all_pass());
        }
    }
    Ok(Output {
        text: out,
        ok: report.all_pass(),
    })
}

fn witness_fields(g: &CodeGraph, report: &AdmissibilityReport) -> Option<(String, String, String)> {
    report.witness.as_ref().map(|w| {
        let names: Vec<String> = w
            .erased
            .iter()
            .map(|&v| graph_file::vertex_name(g, v))
            .collect();
        (names.join(","), w.dx.to_string(), w.de.to_string())
    })
}

pub fn syndrome_table(g: &CodeGraph, no_errors: bool, format: Format) -> Result<Output, CliError> {
    if g.output_count() <= ghzgraph_core::graph_code::MAX_ADMISSIBILITY_OUTPUTS {
        let report = g.check_admissibility(1).stage("admissibility")?;
        if let Some((name, _)) = report.conditions().into_iter().find(|(_, pass)| !pass) {
            return Err(CliError::Domain {
                stage: "admissibility",
                source: ghzgraph_core::Error::Inadmissible(name),
            });
        }
    }
    let errors = if no_errors {
        Vec::new()
    } else {
        single_qudit_errors(g.modulus(), g.output_count())
    };
    let table = g.build_syndrome_table(&errors).stage("syndrome table")?;
    let mut out = String::new();
    if format == Format::Text {
        let _ = writeln!(
            out,
            "{:<10}{:<8}{:<24}correction",
            "syndrome", "error", "state"
        );
    }
    for row in table.rows() {
        let state = table.residual_label(row);
        let correction = table.correction_label(row);
        let _ = match format {
            Format::Text => writeln!(
                out,
                "{:<10}{:<8}{:<24}{}",
                row.syndrome.to_string(),
                row.error_label,
                state,
                correction
            ),
            Format::Records => writeln!(
                out,
                "syndrome={} error={} state={} correction={}",
                row.syndrome,
                row.error_label,
                state.replace(' ', ""),
                correction
            ),
        };
    }
    Ok(Output::ok(out))
}

/// Parses `none` or `<B/S word><GHZ label>`, e.g. `B1'`, into an error on the
/// physical register.
pub fn parse_physical_error(
    layout: &GhzLayout,
    label: &str,
) -> Result<Option<PauliError>, CliError> {
    if label.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    let bad = || CliError::Usage(format!("invalid error label `{label}`"));
    let split = label.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (word, position) = label.split_at(split);
    let address = layout.address(position).map_err(|_| bad())?;
    let one = PauliError::from_word(Prime::TWO, word).map_err(|_| bad())?;
    let e = PauliError::single(
        Prime::TWO,
        layout.qubits(),
        address,
        one.shifts().digits()[0],
        one.clocks().digits()[0],
    )
    .stage("error label")?;
    let e = PauliError::new(one.phase(), &e.shifts(), &e.clocks()).stage("error label")?;
    Ok(Some(e))
}

/// Lowest-weight phase-free Pauli relating `from` to `to` up to global
/// phase, if there is one. Qubits only.
fn pauli_relation(from: &StateVector, to: &StateVector) -> Option<PauliError> {
    let n = from.qudits();
    let bits = |v: usize| -> Vec<u32> { (0..n).map(|i| ((v >> (n - 1 - i)) & 1) as u32).collect() };
    (0..1usize << (2 * n))
        .filter_map(|code| {
            let b = ghzgraph_core::FpVector::new(Prime::TWO, bits(code >> n)).ok()?;
            let s = ghzgraph_core::FpVector::new(Prime::TWO, bits(code & ((1 << n) - 1))).ok()?;
            let e = PauliError::new(0, &b, &s).ok()?;
            let mut image = from.clone();
            e.apply(&mut image).ok()?;
            (image.fidelity_up_to_phase(to).ok()? > 1.0 - 1e-9).then_some(e)
        })
        .min_by_key(|e| {
            (
                e.support().len(),
                core::cmp::Reverse(e.shifts().digits().to_vec()),
            )
        })
}

fn format_amplitudes(s: &StateVector) -> String {
    s.amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| format!("c({i})={:.6}{:+.6}i", a.re, a.im))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The full pipeline: outer encode, GHZ encode, erasure plus optional error,
/// inner decode and recovery, outer decode and correction.
///
/// The erased qubit gets a Haar-random disturbance drawn from `seed`; nothing
/// printed depends on it.
pub fn worked_example(
    g: &CodeGraph,
    erasure: &str,
    error: &str,
    seed: u64,
    format: Format,
) -> Result<Output, CliError> {
    let scheme = ConcatScheme::new(g.clone(), Blocking::WholeRegister).stage("scheme")?;
    let layout = *scheme.inner();
    let erased = layout
        .address(erasure)
        .map_err(|_| CliError::Usage(format!("invalid erasure position `{erasure}`")))?;
    let physical = parse_physical_error(&layout, error)?;
    let logical = reference_state(g.modulus(), g.input_count()).stage("input")?;
    let codeword = g.encode(&logical).stage("outer encoding")?;
    let mut state = scheme.encode_inner(&codeword).stage("inner encoding")?;
    let event = ChannelEvent {
        erasure: Some((erased, Corruption::RandomUnitary { seed })),
        physical,
        outer: None,
    };
    scheme.apply_channel(&mut state, &event).stage("channel")?;
    let trace = scheme.decode(&state, &event).stage("decoding")?;
    let fidelity = trace
        .logical
        .fidelity_up_to_phase(&logical)
        .stage("fidelity")?;
    let relation = match pauli_relation(&codeword, &trace.recovered_outer) {
        Some(e) => operator_label(&e, 0),
        None => "not-a-Pauli-image".into(),
    };
    let survivors: String = match layout.side(erased) {
        ghzgraph_core::Side::Message => layout.ancilla_addresses(),
        ghzgraph_core::Side::Ancilla => layout.message_addresses(),
    }
    .into_iter()
    .map(|a| layout.label(a))
    .collect();
    let correction = if trace.correction.is_identity() {
        "None".to_string()
    } else {
        let word = trace
            .correction_label
            .trim_end_matches(|c: char| c.is_ascii_digit());
        format!("{word} on logical qubit ({})", trace.correction_label)
    };
    let syndrome = trace.syndrome.to_string();
    let error_label = if physical_is_none(error) {
        "none"
    } else {
        error
    };

    let mut out = String::new();
    match format {
        Format::Text => {
            let rows = [
                ("input", format_amplitudes(&logical)),
                (
                    "outer codeword",
                    format!(
                        "{} qubits, {} amplitudes",
                        codeword.qudits(),
                        codeword.dim()
                    ),
                ),
                ("encoder U_e", layout.build_encoder().notation(&layout)),
                (
                    "channel",
                    format!("erasure at {erasure} (random unitary), error {error_label}"),
                ),
                (
                    "decoder U_d",
                    layout
                        .build_decoder(erased)
                        .stage("decoder")?
                        .notation(&layout),
                ),
                (
                    "recovery U_r",
                    layout
                        .build_recovery(erased)
                        .stage("recovery")?
                        .notation(&layout),
                ),
                ("recovered", format!("psi' on {survivors} = {relation} psi")),
                ("syndrome", syndrome),
                ("correction", correction),
                ("fidelity", format!("{fidelity:.6}")),
            ];
            for (k, v) in rows {
                let _ = writeln!(out, "{k:<16}{v}");
            }
        }
        Format::Records => {
            let _ = writeln!(
                out,
                "erasure={erasure} error={error_label} recovered={relation} syndrome={syndrome} correction={} fidelity={fidelity:.6}",
                trace.correction_label
            );
        }
    }
    Ok(Output {
        text: out,
        ok: fidelity > 1.0 - 1e-9,
    })
}

fn physical_is_none(label: &str) -> bool {
    label.eq_ignore_ascii_case("none")
}

pub fn parse_noise(name: &str) -> Result<NoiseModel, CliError> {
    match name {
        "identity" => Ok(NoiseModel::Identity),
        "correctable" => Ok(NoiseModel::ErasurePlusPauli),
        "two-pauli" => Ok(NoiseModel::TwoPaulis),
        other => Err(CliError::Usage(format!("unknown noise model `{other}`"))),
    }
}

pub fn monte_carlo(
    g: &CodeGraph,
    noise: NoiseModel,
    blocking: Blocking,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<Output, CliError> {
    let scheme = ConcatScheme::new(g.clone(), blocking).stage("scheme")?;
    let est = scheme
        .effective_channel(noise, trials, seed)
        .stage("monte carlo")?;
    let blocking = match blocking {
        Blocking::WholeRegister => "whole".to_string(),
        Blocking::PerQubit { n } => format!("per-qubit-{n}"),
    };
    let mut out = String::new();
    match format {
        Format::Text => {
            let rows = [
                ("noise", noise.name().to_string()),
                ("blocking", blocking),
                ("trials", est.trials.to_string()),
                ("seed", seed.to_string()),
                ("mean fidelity", format!("{:.6}", est.mean_fidelity)),
                ("min fidelity", format!("{:.6}", est.min_fidelity)),
                ("failures", est.failures.to_string()),
            ];
            for (k, v) in rows {
                let _ = writeln!(out, "{k:<16}{v}");
            }
            for c in &est.classes {
                let _ = writeln!(
                    out,
                    "class {:<12}trials {:<8}failures {}",
                    c.class, c.trials, c.failures
                );
            }
        }
        Format::Records => {
            let _ = writeln!(
                out,
                "noise={} blocking={blocking} trials={} seed={seed} mean_fidelity={:.9} min_fidelity={:.9} failures={}",
                noise.name(),
                est.trials,
                est.mean_fidelity,
                est.min_fidelity,
                est.failures
            );
            for c in &est.classes {
                let _ = writeln!(
                    out,
                    "class={} trials={} failures={}",
                    c.class, c.trials, c.failures
                );
            }
        }
    }
    Ok(Output::ok(out))
}

/// Encoder, decoders and recovery programs for an `n`-qubit GHZ block, either
/// in operator notation or, with `gates`, in the line format.
pub fn dump_programs(
    n: usize,
    erasure: Option<&str>,
    gates: bool,
    format: Format,
) -> Result<Output, CliError> {
    let layout = GhzLayout::new(n).stage("layout")?;
    let positions: Vec<usize> = match erasure {
        Some(label) => vec![layout
            .address(label)
            .map_err(|_| CliError::Usage(format!("invalid erasure position `{label}`")))?],
        None => (0..layout.qubits()).collect(),
    };
    let mut programs = vec![("encoder", None, layout.build_encoder())];
    for &a in &positions {
        programs.push((
            "decoder",
            Some(a),
            layout.build_decoder(a).stage("decoder")?,
        ));
        programs.push((
            "recovery",
            Some(a),
            layout.build_recovery(a).stage("recovery")?,
        ));
    }
    let mut out = String::new();
    for (name, pos, program) in programs {
        let pos = pos.map_or_else(|| "-".to_string(), |a| layout.label(a));
        if gates {
            let _ = writeln!(out, "# {name} {pos}");
            out.push_str(&program_to_text(&program));
            continue;
        }
        let _ = match format {
            Format::Text => writeln!(out, "{name:<10}{pos:<4}{}", program.notation(&layout)),
            Format::Records => writeln!(
                out,
                "program={name} erased={pos} notation={}",
                program.notation(&layout)
            ),
        };
    }
    Ok(Output::ok(out))
}
