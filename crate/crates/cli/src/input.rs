//! Turning command-line inputs into decorated diagrams.

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use khss_core::cube::braid_decoration;
use khss_core::{corpus, parse_braid, parse_pd, Decoration, DiagramError, LinkDiagram};

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
    #[arg(long)]
    pub pd: Option<String>,
    /// Braid word, e.g. "3: 1 2 1 2"
    #[arg(long)]
    pub braid: Option<String>,
    /// Built-in diagram by name
    #[arg(long)]
    pub corpus: Option<String>,
    /// The crossingless unknot
    #[arg(long)]
    pub unknot: bool,
    /// Edge label carrying the basepoint of the reduced theory
    #[arg(long)]
    pub basepoint: Option<u32>,
}

/// Where a diagram came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Pd(String),
    Braid(String),
    Corpus(String),
    Unknot,
}

#[derive(Debug)]
pub enum InputError {
    Usage(String),
    Diagram(DiagramError),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Usage(m) => write!(f, "{m}"),
            InputError::Diagram(e) => write!(f, "{e}"),
        }
    }
}

impl From<DiagramError> for InputError {
    fn from(e: DiagramError) -> Self {
        InputError::Diagram(e)
    }
}

impl InputArgs {
    /// The single input source, or `None` when nothing was given.
    pub fn source(&self) -> Result<Option<Source>, InputError> {
        let mut found = Vec::new();
        match &self.pd {
            // an empty PD next to --unknot names the same diagram
            Some(p) if p.trim().is_empty() && self.unknot => {}
            Some(p) => found.push(Source::Pd(p.clone())),
            None => {}
        }
        if let Some(b) = &self.braid {
            found.push(Source::Braid(b.clone()));
        }
        if let Some(c) = &self.corpus {
            found.push(Source::Corpus(c.clone()));
        }
        if self.unknot {
            found.push(Source::Unknot);
        }
        match found.len() {
            0 => Ok(None),
            1 => Ok(found.pop()),
            _ => Err(InputError::Usage("give exactly one of --pd, --braid, --corpus, --unknot".into())),
        }
    }

    pub fn require(&self) -> Result<Source, InputError> {
        self.source()?.ok_or_else(|| InputError::Usage("no input diagram; use --pd, --braid, --corpus or --unknot".into()))
    }
}

impl Source {
    /// `pd:...`, `braid:...`, `corpus:...` or `unknot`.
    pub fn parse_spec(text: &str) -> Result<Source, InputError> {
        if text.trim() == "unknot" {
            return Ok(Source::Unknot);
        }
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| InputError::Usage(format!("expected pd:, braid:, corpus: or unknot, got `{text}`")))?;
        match kind.trim() {
            "pd" => Ok(Source::Pd(rest.into())),
            "braid" => Ok(Source::Braid(rest.into())),
            "corpus" => Ok(Source::Corpus(rest.trim().into())),
            other => Err(InputError::Usage(format!("unknown input kind `{other}`"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::Pd(p) => format!("pd:{}", p.trim()),
            Source::Braid(b) => format!("braid:{}", b.trim()),
            Source::Corpus(c) => format!("corpus:{c}"),
            Source::Unknot => "unknot".into(),
        }
    }

    pub fn diagram(&self, basepoint: Option<u32>) -> Result<LinkDiagram, InputError> {
        let mut d = match self {
            Source::Pd(p) if p.trim().is_empty() => return Err(DiagramError::Empty.into()),
            Source::Pd(p) => parse_pd(p)?,
            Source::Braid(b) => parse_braid(b)?,
            Source::Corpus(name) => corpus::get(name)
                .ok_or_else(|| InputError::Usage(format!("no corpus entry `{name}`")))?
                .diagram()?,
            Source::Unknot => LinkDiagram::unknot(),
        };
        if let Some(b) = basepoint {
            d.set_basepoint(b)?;
        }
        Ok(d.with_default_basepoint())
    }
}

/// Decoration selector: `auto`, `braid`, `random`, `zeros` or a bit string.
pub fn decoration(d: &LinkDiagram, selector: &str, seed: u64) -> Result<Decoration, InputError> {
    let n = d.len();
    match selector {
        "auto" => Ok(braid_decoration(d).unwrap_or_else(|_| Decoration::zeros(n))),
        "braid" => Ok(braid_decoration(d)?),
        "zeros" => Ok(Decoration::zeros(n)),
        "random" => Ok(Decoration::random(n, &mut ChaCha8Rng::seed_from_u64(seed))),
        bits => Ok(Decoration::parse(bits, n)?),
    }
}

pub fn check_size(d: &LinkDiagram, max: usize) -> Result<(), InputError> {
    if d.len() > max {
        return Err(InputError::Usage(format!(
            "diagram has {} crossings, above the limit of {max}; raise it with --max-crossings",
            d.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(Source::parse_spec("unknot").unwrap(), Source::Unknot);
        assert_eq!(Source::parse_spec("corpus: hopf").unwrap(), Source::Corpus("hopf".into()));
        assert_eq!(Source::parse_spec("braid:2: 1 1").unwrap(), Source::Braid("2: 1 1".into()));
        assert!(Source::parse_spec("hopf").is_err());
    }

    #[test]
    fn one_source() {
        let both = InputArgs { braid: Some("2: 1".into()), unknot: true, ..Default::default() };
        assert!(both.source().is_err());
        let empty_pd = InputArgs { pd: Some(String::new()), unknot: true, ..Default::default() };
        assert_eq!(empty_pd.source().unwrap(), Some(Source::Unknot));
        assert_eq!(InputArgs::default().source().unwrap(), None);
    }
}
