pub mod numerics;
pub mod liealg;
pub mod exterior;
pub mod hermitian;
pub mod dolbeault;
pub mod genkahler;
pub mod flow;
pub mod catalog;
pub mod tables;
