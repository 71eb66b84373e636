#![allow(dead_code)]

pub mod audit;
pub mod javagen;
pub mod oracles;
pub mod tables;
pub mod ted;
pub mod trees;

use patchguard::ast::{parse_source, NormalizedAst};

pub fn java(src: &str) -> NormalizedAst {
    parse_source(src, "java").unwrap_or_else(|e| panic!("{e}\n{src}"))
}
