//! The example systems and loops under `tests/data`.

use crate::io::{parse_certificate, parse_trs};
use crate::loops::LoopCertificate;
use crate::rewrite::Trs;

macro_rules! data {
    ($f:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/", $f))
    };
}

pub fn ex1_trs() -> Trs {
    parse_trs(data!("ex1.trs")).unwrap()
}

pub fn inf_trs() -> Trs {
    parse_trs(data!("inf.trs")).unwrap()
}

pub fn ex7_trs() -> Trs {
    parse_trs(data!("ex7.trs")).unwrap()
}

pub fn ex8_trs() -> Trs {
    parse_trs(data!("ex8.trs")).unwrap()
}

pub fn ex1_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex1-loop.json"), trs).unwrap()
}

pub fn ex6_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex6-loop.json"), trs).unwrap()
}

pub fn ex7_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex7-loop.json"), trs).unwrap()
}

pub fn ex8_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex8-loop.json"), trs).unwrap()
}

pub fn inf_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("inf-loop.json"), trs).unwrap()
}

pub fn ex9_one_step_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex9-one-step.json"), trs).unwrap()
}

pub fn ex9_two_step_loop(trs: &Trs) -> LoopCertificate {
    parse_certificate(data!("ex9-two-step.json"), trs).unwrap()
}
