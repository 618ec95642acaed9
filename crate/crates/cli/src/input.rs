use anyhow::{Context, Result};
use warrow::expand::{full_expand, surgery};
use warrow::{canonical_arrow_presentation, GaussCode, Presentation};

/// A parsed input: a w-tree presentation or a Gauss code.
#[derive(Clone, Debug)]
pub enum Input {
    Presentation(Presentation),
    Gauss(GaussCode),
}

impl Input {
    pub fn presentation(&self) -> Result<Presentation> {
        match self {
            Input::Presentation(p) => Ok(p.clone()),
            Input::Gauss(g) => Ok(canonical_arrow_presentation(g)?),
        }
    }

    pub fn gauss(&self) -> GaussCode {
        match self {
            Input::Presentation(p) => surgery(&full_expand(p)),
            Input::Gauss(g) => g.clone(),
        }
    }
}

/// JSON objects with a `trees` field are presentations, other JSON objects
/// are Gauss codes, and anything else is read as a signed Gauss-code string.
pub fn parse_input(text: &str) -> Result<Input> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        anyhow::bail!("empty input");
    }
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(trimmed).context("input is not valid JSON")?;
        if value.get("trees").is_some() {
            return Ok(Input::Presentation(Presentation::from_json(trimmed).context("invalid presentation")?));
        }
        let g: GaussCode = serde_json::from_value(value).context("invalid Gauss code JSON")?;
        g.check().context("invalid Gauss code")?;
        return Ok(Input::Gauss(g));
    }
    if trimmed.starts_with('"') {
        let s: String = serde_json::from_str(trimmed).context("input is not a valid JSON string")?;
        return Ok(Input::Gauss(GaussCode::parse(&s)?));
    }
    Ok(Input::Gauss(GaussCode::parse(trimmed).context("invalid Gauss code")?))
}
