//! Text formats: systems, terms, certificates, pattern files and reports.

pub mod certificate;
pub mod report;
pub mod syntax;

pub use certificate::{parse_certificate, render_certificate};
pub use report::{render_decision, Format};
pub use syntax::{
    parse_context, parse_patterns, parse_replacement_map, parse_term, parse_term_with_vars,
    parse_trs, render_patterns, render_trs,
};

/// Reads a file, mapping failures to [`crate::Error::Io`].
pub fn read_file(path: &std::path::Path) -> crate::Result<String> {
    std::fs::read_to_string(path).map_err(|e| crate::Error::Io(format!("{}: {e}", path.display())))
}
