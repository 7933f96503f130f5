//! Problem files.
//!
//! A spec is a TOML document with exactly three keys:
//!
//! ```toml
//! d = "power(1,-3/2)"   # conductivity d(u)
//! q = "const(-1)"       # surface flux q(t)
//! u_inf = 0             # value at infinity
//! ```

use std::ops::Range;
use std::path::Path;

use heatsym_core::bvp::BvpSpec;
use heatsym_core::symfun::FuncForm;
use serde::Deserialize;
use toml::Spanned;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    d: Spanned<String>,
    q: Spanned<String>,
    u_inf: Spanned<f64>,
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn load_spec(path: &Path) -> Result<BvpSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text, &path.display().to_string())
}

/// Parse a spec document; `origin` names it in error messages.
pub fn parse_spec(text: &str, origin: &str) -> Result<BvpSpec, CliError> {
    let err = |span: Option<Range<usize>>, message: String| CliError::Spec {
        path: origin.to_string(),
        line: span.map_or(1, |s| line_of(text, s.start)),
        message,
    };
    let raw: RawSpec = toml::from_str(text).map_err(|e| err(e.span(), e.message().to_string()))?;
    let form = |v: &Spanned<String>, key: &str| {
        v.get_ref()
            .parse::<FuncForm>()
            .map_err(|e| err(Some(v.span()), format!("{key}: {e}")))
    };
    let d = form(&raw.d, "d")?;
    let q = form(&raw.q, "q")?;
    let u_inf = *raw.u_inf.get_ref();
    if !u_inf.is_finite() {
        return Err(err(Some(raw.u_inf.span()), format!("u_inf = {u_inf} is not finite")));
    }
    // the class constraints only concern d
    BvpSpec::new(d, q, u_inf).map_err(|e| err(Some(raw.d.span()), e.to_string()))
}
