pub mod algebra;
pub mod binding;
pub mod chain;
pub mod hurewicz;
pub mod polygroupoid;
pub mod report;
pub mod selftest;
pub mod tower;
