//! Script and REPL drivers behind the `mathpar` binary.

use std::io::{self, BufRead, Write};
use std::time::Duration;

use clap::ValueEnum;
use mathpar::cancel::CancelToken;
use mathpar::lang::{LangError, Outcome, Session, Span};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Latex,
    Json,
}

/// Options shared by every mode.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub format: Format,
    pub floatpos: Option<u32>,
    /// Initial domain, such as `Z[x]`.
    pub space: Option<String>,
    pub timeout: Option<Duration>,
}

#[derive(Serialize)]
struct JsonOutcome<'a> {
    statement: &'a str,
    ok: bool,
    output: &'a str,
    latex: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Config {
    /// A session with the configured prelude already applied.
    pub fn session(&self) -> Result<Session, String> {
        let cancel = self
            .timeout
            .map_or_else(CancelToken::never, CancelToken::with_timeout);
        let mut s = Session::with_cancel(cancel);
        let mut prelude = String::new();
        if let Some(fp) = self.floatpos {
            prelude.push_str(&format!("FLOATPOS = {fp};"));
        }
        if let Some(sp) = &self.space {
            prelude.push_str(&format!("SPACE = {sp};"));
        }
        for o in s.run(&prelude) {
            if let Some(e) = o.error {
                return Err(format!("invalid option `{}`: {e}", o.statement));
            }
        }
        Ok(s)
    }
}

/// The source line holding `span` with a caret under its start.
pub fn caret(source: &str, span: Span) -> String {
    let start = span.start.min(source.len());
    let line_start = source[..start].rfind('\n').map_or(0, |i| i + 1);
    let line_end = source[start..]
        .find('\n')
        .map_or(source.len(), |i| start + i);
    let col = source[line_start..start].chars().count();
    format!("{}\n{}^", &source[line_start..line_end], " ".repeat(col))
}

/// Writes one outcome; returns whether it succeeded.
pub fn report(
    source: &str,
    o: &Outcome,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<bool> {
    if format == Format::Json {
        let j = JsonOutcome {
            statement: &o.statement,
            ok: o.ok(),
            output: &o.output,
            latex: &o.latex,
            error: o.error.as_ref().map(|e| e.to_string()),
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&j).expect("plain strings serialize")
        )?;
        return Ok(o.ok());
    }
    match &o.error {
        None => {
            let text = if format == Format::Latex {
                &o.latex
            } else {
                &o.output
            };
            if !text.is_empty() {
                writeln!(out, "{text}")?;
            }
            Ok(true)
        }
        Some(e @ LangError::Syntax(s)) => {
            writeln!(err, "error: {e}")?;
            writeln!(err, "{}", caret(source, s.span))?;
            Ok(false)
        }
        Some(e) => {
            writeln!(err, "error in `{}`: {e}", o.statement)?;
            Ok(false)
        }
    }
}

/// Runs a whole script and reports every statement; returns whether all
/// statements succeeded.
pub fn run_script(
    session: &mut Session,
    source: &str,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<bool> {
    let mut all_ok = true;
    for o in session.run(source) {
        all_ok &= report(source, &o, format, out, err)?;
    }
    Ok(all_ok)
}

fn print_env(session: &Session, out: &mut dyn Write) -> io::Result<()> {
    let env = session.env();
    match env.domain() {
        Some(d) => writeln!(out, "SPACE = {d}")?,
        None => writeln!(out, "SPACE not declared")?,
    }
    writeln!(out, "FLOATPOS = {}", env.floatpos())?;
    writeln!(out, "MOD = {}", env.modulus())?;
    writeln!(out, "MOD32 = {}", env.modulus32())?;
    let st = env.style();
    for (name, v) in env.bindings() {
        writeln!(out, "{name} = {}", v.text(&st))?;
    }
    Ok(())
}

/// Line-oriented REPL. Each input line is run as a script against one
/// persistent session.
pub fn run_repl(
    config: &Config,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    prompt: bool,
) -> io::Result<()> {
    let mut session = match config.session() {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(());
        }
    };
    let mut line = String::new();
    loop {
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        match line.trim() {
            ":quit" | ":q" => break,
            ":env" => print_env(&session, out)?,
            ":reset" => {
                session = match config.session() {
                    Ok(s) => s,
                    Err(e) => {
                        writeln!(err, "{e}")?;
                        return Ok(());
                    }
                };
                writeln!(out, "environment cleared")?;
            }
            "" => {}
            cmd if cmd.starts_with(':') => {
                writeln!(err, "unknown command `{cmd}`; try :env, :reset or :quit")?
            }
            _ => {
                run_script(&mut session, &line, config.format, out, err)?;
            }
        }
        out.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repl(input: &str) -> (String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        run_repl(
            &Config::default(),
            &mut input.as_bytes(),
            &mut out,
            &mut err,
            false,
        )
        .unwrap();
        (
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn repl_keeps_state_between_lines() {
        let (out, err) = repl("SPACE=Z[x];\n\\GCD(9*x,6*x+6);\n:quit\n1;\n");
        assert_eq!(out, "3\n");
        assert!(err.is_empty());
    }

    #[test]
    fn repl_meta_commands() {
        let (out, _) = repl("SPACE=Z[x]; f = x;\n:env\n:reset\n:env\n");
        assert!(out.contains("SPACE = Z[x]\n"));
        assert!(out.contains("f = x\n"));
        assert!(out.contains("environment cleared\n"));
        assert!(
            out.ends_with("SPACE not declared\nFLOATPOS = 2\nMOD = 268435399\nMOD32 = 268435399\n")
        );
    }

    #[test]
    fn syntax_error_shows_caret_and_continues() {
        let (out, err) = repl("SPACE=Z[];\n1+\n2;\n");
        assert_eq!(out, "2\n");
        assert!(err.contains("1+\n  ^"), "{err}");
    }

    #[test]
    fn caret_on_later_line() {
        assert_eq!(caret("a;\nb + #", Span::new(7, 8)), "b + #\n    ^");
    }

    #[test]
    fn json_lines() {
        let mut s = Config::default().session().unwrap();
        let mut out = Vec::new();
        let ok = run_script(
            &mut s,
            "SPACE=Q[]; 1/2; \\foo(1);",
            Format::Json,
            &mut out,
            &mut io::sink(),
        )
        .unwrap();
        assert!(!ok);
        let lines: Vec<serde_json::Value> = String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1]["output"], "1/2");
        assert_eq!(lines[1]["latex"], "\\frac{1}{2}");
        assert!(lines[1].get("error").is_none());
        assert_eq!(lines[2]["ok"], false);
        assert_eq!(lines[2]["error"], "unknown function \\foo");
    }

    #[test]
    fn prelude_options() {
        let cfg = Config {
            floatpos: Some(4),
            space: Some("R64[]".into()),
            ..Config::default()
        };
        let mut s = cfg.session().unwrap();
        let mut out = Vec::new();
        run_script(&mut s, "1/3;", Format::Text, &mut out, &mut io::sink()).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0.3333\n");
        let bad = Config {
            space: Some("W[]".into()),
            ..Config::default()
        };
        assert!(bad.session().is_err());
    }
}
