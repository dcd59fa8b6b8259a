//! Browser bindings: model checking, DOT rendering and an action protocol
//! stepper. Every function takes and returns plain strings so the page needs
//! no glue beyond the generated module.

use meros::protocol::{simulate, Event, Verdict};
use meros::render::{render, Level, Mode, RenderError, RenderOptions};
use meros::text::parse_model;
use meros::validate::has_errors;
use meros::{compute_stats, validate, RosSystem, ValidateOptions};
use wasm_bindgen::prelude::*;

fn parse(text: &str) -> Result<RosSystem, String> {
    parse_model(text).map_err(|diags| diags.iter().map(|d| format!("{d}\n")).collect())
}

/// Diagnostics followed by element counts, or the parse errors.
#[wasm_bindgen]
pub fn check_model(text: &str) -> String {
    let model = match parse(text) {
        Ok(m) => m,
        Err(e) => return e,
    };
    let diags = validate(&model, ValidateOptions::default());
    let mut out = String::new();
    if diags.is_empty() {
        out.push_str("no diagnostics\n");
    }
    for d in &diags {
        out.push_str(&format!("{d}\n"));
    }
    out.push_str(if has_errors(&diags) {
        "\nINVALID\n\n"
    } else {
        "\nVALID\n\n"
    });
    out.push_str(&compute_stats(&model).to_text());
    out
}

/// DOT for the named running system, or the first one when `system` is empty.
#[wasm_bindgen]
pub fn render_model(
    text: &str,
    system: &str,
    mode: &str,
    level: &str,
    expand_actions: bool,
    infrastructure: bool,
) -> Result<String, String> {
    let model = parse(text)?;
    let rs = if system.is_empty() {
        model.running_systems.first().ok_or("model has no running system")?
    } else {
        model
            .running_system(system)
            .ok_or_else(|| format!("no running system named `{system}`"))?
    };
    let options = RenderOptions {
        mode: mode.parse::<Mode>()?,
        level: level.parse::<Level>()?,
        show_infrastructure: infrastructure,
        expand_actions,
    };
    render(rs, &options).map_err(|e| match e {
        RenderError::Invalid(diags) => diags.iter().map(|d| format!("{d}\n")).collect(),
        other => other.to_string(),
    })
}

/// One goal stepped event by event. Events that have no transition are
/// refused and leave the session unchanged.
#[wasm_bindgen]
#[derive(Default)]
pub struct ProtocolSession {
    events: Vec<Event>,
}

#[wasm_bindgen]
impl ProtocolSession {
    #[wasm_bindgen(constructor)]
    pub fn new() -> ProtocolSession {
        ProtocolSession::default()
    }

    /// Appends `event` (for example `SendGoal` or `StatusUpdate:Active`).
    /// Returns an error naming the undefined transition on refusal.
    pub fn push(&mut self, event: &str) -> Result<(), String> {
        let event: Event = event
            .parse()
            .map_err(|e: meros::protocol::ProtocolError| e.to_string())?;
        let mut next = self.events.clone();
        next.push(event);
        let report = simulate(&next);
        if !report.defined {
            if let Verdict::Rejected { reason, .. } = report.verdict {
                return Err(reason);
            }
        }
        self.events = next;
        Ok(())
    }

    pub fn undo(&mut self) {
        self.events.pop();
    }

    pub fn reset(&mut self) {
        self.events.clear();
    }

    /// Step log plus a final status line.
    pub fn log(&self) -> String {
        let report = simulate(&self.events);
        let mut out: String = report.steps.iter().map(|s| format!("{s}\n")).collect();
        out.push_str(&match report.verdict {
            Verdict::Accepted => "goal finished: trace accepted\n".to_string(),
            Verdict::Rejected { reason, .. } => format!("in progress: {reason}\n"),
        });
        out
    }

    pub fn server_state(&self) -> String {
        simulate(&self.events).server.map_or("-".into(), |s| s.to_string())
    }

    pub fn client_state(&self) -> String {
        simulate(&self.events).client.map_or("-".into(), |s| s.to_string())
    }
}
