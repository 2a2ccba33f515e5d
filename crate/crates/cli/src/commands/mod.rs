pub mod gallery;
pub mod lab;
pub mod prescribe;
pub mod surface;
