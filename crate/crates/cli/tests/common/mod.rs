#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Files the command writes, included in the transcript.
    pub files: &'static [&'static str],
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case {
        name,
        args,
        exit,
        files: &[],
    }
}

pub const CASES: &[Case] = &[
    case("space_check", &["space", "check", "--space", "three.json", "--require", "t0"], 0),
    case("space_check_requirement_fails", &["space", "check", "--space", "sierpinski.json", "--require", "t2"], 1),
    case("space_missing_whole_set", &["space", "check", "--space", "bad_opens.json"], 2),
    case("space_unknown_field", &["space", "check", "--space", "unknown_field.json"], 2),
    case("functor_parse", &["functor", "parse", "--expr", "V+ * Id + C(two) . Vl"], 0),
    case("functor_parse_error", &["functor", "parse", "--expr", "C(two *"], 2),
    case("functor_apply", &["functor", "apply", "--expr", "Vl", "--space", "three.json", "--map", "incl.json"], 0),
    case("functor_apply_const", &["functor", "apply", "--expr", "C(s) + Id", "--space", "discrete2.json", "--const", "s=sierpinski.json"], 0),
    case("vietoris_build", &["vietoris", "build", "--space", "sierpinski.json", "--variant", "v", "--oracle"], 0),
    case("vietoris_build_connected", &["vietoris", "build", "--space", "chain3.json", "--variant", "vc", "--oracle"], 0),
    case("witness_classic_vietoris", &["witness", "classic-vietoris"], 0),
    case("witness_monocone", &["witness", "monocone"], 0),
    case("witness_monocone_too_small", &["witness", "monocone", "--space", "point.json"], 2),
    case("terminal_seq_streams", &["terminal-seq", "--functor", "C(two)*Id", "--steps", "3"], 0),
    case("terminal_seq_constant", &["terminal-seq", "--functor", "C(two)", "--steps", "3", "--labels"], 0),
    case("terminal_seq_lower", &["terminal-seq", "--functor", "Vl", "--steps", "5", "--labels"], 0),
    case("terminal_seq_cap", &["terminal-seq", "--functor", "V", "--steps", "6", "--max-points", "64"], 2),
    case("behaviour", &["behaviour", "--coalg", "stream.json", "--depth", "3", "--labels"], 0),
    case("behaviour_discontinuous", &["behaviour", "--coalg", "discontinuous.json", "--depth", "2"], 2),
    case("equalizer", &["equalizer", "--h1", "h_identify.json", "--h2", "h_other.json"], 0),
    case("equalizer_not_a_hom", &["equalizer", "--h1", "h_identify.json", "--h2", "h_bad.json"], 1),
    case("coreflect_nonempty", &["coreflect", "--sigma", "v+", "--coalg", "xyz.json"], 0),
    case("coreflect_connected", &["coreflect", "--sigma", "vc", "--coalg", "xyz.json"], 0),
    Case {
        name: "ball_simulate_csv",
        args: &["ball", "simulate", "--p", "0", "--v", "5", "--bounces", "3", "--step", "0.1", "--out", "traj.csv"],
        exit: 0,
        files: &["traj.csv"],
    },
    Case {
        name: "ball_simulate_svg",
        args: &["ball", "simulate", "--p", "5", "--v", "0", "--bounces", "2", "--step", "0.1", "--out", "traj.svg"],
        exit: 0,
        files: &["traj.svg"],
    },
    case("ball_simulate_bad_format", &["ball", "simulate", "--p", "5", "--v", "0", "--bounces", "2", "--out", "traj.png"], 2),
    case("ball_simulate_below_ground", &["ball", "simulate", "--p", "-1", "--v", "0", "--bounces", "2"], 2),
    Case {
        name: "ball_nondet",
        args: &["ball", "nondet", "--p", "5", "--v", "0", "--depth", "2", "--samples", "1", "--branch", "high", "--step", "0.1", "--out", "high.csv"],
        exit: 0,
        files: &["high.csv"],
    },
    case("ball_stability", &["ball", "stability", "--p", "5", "--v", "0", "--delta", "1e-3", "--horizon", "3", "--n", "32", "--bound", "2e-4", "--seed", "3"], 0),
    case("ball_stability_jump", &["ball", "stability", "--p", "5", "--v", "0", "--delta", "1e-3", "--horizon", "3", "--n", "32", "--system", "jump", "--bound", "0.1", "--seed", "3"], 1),
    case("show_config", &["--show-config"], 0),
    case("show_config_from_file", &["--config", "small.toml", "--max-points", "100", "--show-config"], 0),
    case("version", &["--version"], 0),
    case("no_command", &[], 2),
    case("usage_error", &["terminal-seq", "--functor", "V"], 2),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub exit: i32,
    pub transcript: Vec<u8>,
}

/// Runs the binary in a fresh copy of the fixtures directory.
pub fn run(case: &Case) -> Run {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let out = Command::new(env!("CARGO_BIN_EXE_vcoalg"))
        .args(case.args)
        .current_dir(dir.path())
        .output()
        .unwrap();
    let exit = out.status.code().unwrap_or(-1);
    let mut t = format!("exit: {exit}\n--- stdout\n").into_bytes();
    t.extend_from_slice(&out.stdout);
    t.extend_from_slice(b"--- stderr\n");
    t.extend_from_slice(&out.stderr);
    for f in case.files {
        t.extend_from_slice(format!("--- file {f}\n").as_bytes());
        t.extend_from_slice(&std::fs::read(dir.path().join(f)).unwrap_or_default());
    }
    Run { exit, transcript: t }
}
