//! Comparison-rate plug-ins: a text file holding one expression in `q` and
//! `delta`, evaluated in floating point.
//!
//! ```text
//! # comment lines start with '#'
//! 1 - delta - 1 / (math::sqrt(q) - 1)
//! ```

use std::fs;
use std::path::Path;

use evalexpr::{build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};

use crate::CliError;

pub struct Plugin {
    expr: Node<DefaultNumericTypes>,
}

impl Plugin {
    pub fn parse(text: &str) -> Result<Plugin, quenta::Error> {
        let body: String = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join(" ");
        let expr = build_operator_tree::<DefaultNumericTypes>(body.trim())
            .map_err(|e| quenta::Error::Parse(format!("comparison expression: {e}")))?;
        Ok(Plugin { expr })
    }

    pub fn load(path: &Path) -> Result<Plugin, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(Plugin::parse(&text)?)
    }

    pub fn rate(&self, q: u32, delta: f64) -> Result<f64, quenta::Error> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let err = |e: evalexpr::EvalexprError<DefaultNumericTypes>| quenta::Error::Parse(format!("comparison expression: {e}"));
        ctx.set_value("q".into(), Value::Float(q as f64)).map_err(err)?;
        ctx.set_value("delta".into(), Value::Float(delta)).map_err(err)?;
        self.expr.eval_number_with_context(&ctx).map_err(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_with_comments() {
        let p = Plugin::parse("# family rate\n1 - delta - 1 / (math::sqrt(q) - 1)\n").unwrap();
        assert!((p.rate(64, 0.3).unwrap() - (0.7 - 1.0 / 7.0)).abs() < 1e-12);
        let zero = Plugin::parse("0").unwrap();
        assert_eq!(zero.rate(64, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Plugin::parse("(1").is_err() || Plugin::parse("(1").unwrap().rate(4, 0.1).is_err());
        assert!(Plugin::parse("unknown_var * 2").unwrap().rate(4, 0.1).is_err());
    }
}
