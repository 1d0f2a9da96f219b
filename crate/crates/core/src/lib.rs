//! Bond scattering matrices of graphs weighted by a Hermitian matrix.
//!
//! The crate builds the vertex scattering blocks and the bond scattering
//! matrix `U(λ)` of a finite connected graph whose edges carry Hermitian
//! data `(h, γ)`, and checks the determinant identities that tie `U(λ)` to
//! the spectrum of the Hermitian matrix:
//!
//! * the secular formula `det(I − U(λ)) ∝ det(λI − H) / ∏(H_uu − λ − iΓ_u)`
//!   ([`scattering`]);
//! * the Euler product of `det(I − uU(λ))` over prime cycle classes
//!   ([`euler`]);
//! * the factorization of the secular determinant of a regular covering
//!   over the irreducible representations of its voltage group
//!   ([`covering`], [`lfunction`]).
//!
//! [`example`] reproduces the K3 / Z3 worked case in closed form.

pub mod covering;
pub mod error;
pub mod euler;
pub mod example;
pub mod graph;
pub mod hermitian;
pub mod instance;
pub mod lfunction;
pub mod linalg;
pub mod random;
pub mod report;
pub mod scattering;

pub use error::{Error, Result};
pub use num_complex::Complex64;
