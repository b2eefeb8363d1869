use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("size {size} exceeds the enumeration limit {limit}")]
    Size { size: usize, limit: usize },
    #[error("{what} did not converge after {} iterates", trace.len())]
    Convergence { what: &'static str, trace: Vec<f64> },
    #[error("invalid distribution: {0}")]
    InvalidDist(String),
    #[error("support is not on an affine lattice: {0}")]
    Lattice(String),
    #[error("index {0} is not in 1..=4")]
    Index(usize),
    #[error("condition violated: {0}")]
    Condition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Root(String),
}

pub(crate) fn check_domain(
    ok: bool,
    name: &'static str,
    value: f64,
    domain: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}

pub(crate) fn check_prob_open(p: f64) -> Result<()> {
    check_domain(p > 0.0 && p < 1.0, "p", p, "(0, 1)")
}
