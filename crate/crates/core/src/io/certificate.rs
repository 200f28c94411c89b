//! JSON loop certificates.
//!
//! ```json
//! {"start": "fact(x,y)",
//!  "steps": [[{"pos": [], "rule": 1}], [{"pos": [1], "rule": 8}]],
//!  "context": "times([],s(x))",
//!  "subst": {"x": "s(x)"}}
//! ```
//!
//! Rule indices are 0-based, positions are lists of 1-based argument indices.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::syntax::{parse_context, parse_term};
use crate::loops::{LoopCertificate, RedexRef};
use crate::rewrite::Trs;
use crate::term::{Position, Substitution};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertFile {
    start: String,
    steps: Vec<Vec<RedexFile>>,
    context: String,
    #[serde(default)]
    subst: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RedexFile {
    pos: Vec<usize>,
    rule: usize,
}

pub fn parse_certificate(text: &str, trs: &Trs) -> Result<LoopCertificate> {
    let file: CertFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    let start = parse_term(&file.start, trs)?;
    let context = parse_context(&file.context, trs)?;
    let mut subst = Substitution::new();
    for (x, t) in &file.subst {
        if !trs.is_variable(x) {
            return Err(Error::UnknownSymbol(format!("{x} (not a declared variable)")));
        }
        subst.insert(Arc::from(x.as_str()), parse_term(t, trs)?);
    }
    let count = trs.rules().len();
    let steps = file
        .steps
        .into_iter()
        .map(|step| {
            step.into_iter()
                .map(|r| {
                    if r.rule >= count {
                        return Err(Error::RuleIndexOutOfRange { index: r.rule, count });
                    }
                    let pos = Position::new(r.pos).ok_or_else(|| Error::Syntax {
                        line: 0,
                        col: 0,
                        msg: "position indices are 1-based".into(),
                    })?;
                    Ok(RedexRef { pos, rule: r.rule })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoopCertificate {
        start,
        steps,
        context,
        subst,
    })
}

pub fn render_certificate(cert: &LoopCertificate) -> String {
    let file = CertFile {
        start: cert.start.to_string(),
        steps: cert
            .steps
            .iter()
            .map(|s| {
                s.iter()
                    .map(|r| RedexFile {
                        pos: r.pos.indices().to_vec(),
                        rule: r.rule,
                    })
                    .collect()
            })
            .collect(),
        context: cert.context.to_string(),
        subst: cert
            .subst
            .iter()
            .map(|(x, t)| (x.to_string(), t.to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}
