#![allow(dead_code)]

pub mod matchings;
pub mod oracles;
pub mod trees;
