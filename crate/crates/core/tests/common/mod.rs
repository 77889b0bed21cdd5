#![allow(dead_code)]

pub mod gen;
pub mod oracles;

use hdts::homsearch::is_isomorphic;
use hdts::Hdts;

pub fn iso(a: &Hdts, b: &Hdts) -> bool {
    is_isomorphic(a, b).expect("isomorphism search").is_some()
}
