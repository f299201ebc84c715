use std::time::Instant;

use serde_json::{json, Value};
use vcoalg::hybrid::round_sig;

use crate::commands::{self, Outcome};
use crate::config::Config;
use crate::error::CliError;
use crate::load::Loader;
use crate::{BallCmd, Cli, Command};

/// Rounds every non-integer number to 9 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Runs the command and writes the report; `Ok(false)` means exit code 1.
pub fn run(cli: &Cli, command: &Command, config: &Config, argv: Vec<String>) -> Result<bool, CliError> {
    let started = Instant::now();
    let mut loader = Loader::new(config.limits);
    // the trajectory commands use --out for the data file
    let out_is_data = matches!(command, Command::Ball(BallCmd::Simulate { .. } | BallCmd::Nondet { .. }));
    let data_out = if out_is_data { cli.out.as_deref() } else { None };
    let Outcome { ok, mut result } = commands::dispatch(command, config, &mut loader, data_out)?;
    round_floats(&mut result);
    let mut report = json!({
        "command": argv,
        "version": env!("CARGO_PKG_VERSION"),
        "config_digest": config.digest(),
        "inputs_digest": loader.digest(&config.digest()),
        "ok": ok,
        "result": result,
    });
    if cli.timing {
        report["timing_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match (&cli.out, out_is_data) {
        (Some(path), false) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        _ => print!("{text}"),
    }
    Ok(ok)
}
