//! Extra-special `p`-groups `ES_1(p, n)` (exponent `p`) and `ES_2(p, n)`
//! (exponent `p^2`): element arithmetic, endomorphisms and automorphisms from
//! block-matrix parameters, automorphism orbits, closed-form counts, and
//! brute-force oracles that check all of it at small `(p, n)`.
//!
//! ```
//! use extraspecial::{GroupElement, Morphism};
//!
//! let x: GroupElement = "es1(3,1):[1|0|0]".parse().unwrap();
//! let y: GroupElement = "es1(3,1):[0|1|0]".parse().unwrap();
//! assert_eq!(x.multiply(&y).unwrap().to_string(), "es1(3,1):[1|1|1]");
//!
//! let m: Morphism = "es1(3,1) A=[2] B=[1] C=[0] D=[0]".parse().unwrap();
//! assert_eq!(m.scalar().value(), 2);
//! ```

pub mod counting;
pub mod error;
pub mod exec;
pub mod group;
pub mod modular;
pub mod morphism;
pub mod oracle;
pub mod orbits;
pub mod symplectic;
pub mod verify;

pub use counting::{CountReport, Poly, Quantity};
pub use error::{BlockIdentity, Error, Result, ValidationError};
pub use exec::{Caps, Execution, CAP_ENV_VARS};
pub use group::{
    Es1Element, Es2Element, GroupElement, GroupId, GroupKind, Payload, QuotientVector,
};
pub use modular::{fp_inv, half, p_binomial, BigCount, FpMatrix, FpScalar, FpVector, Zp2Scalar};
pub use morphism::{
    build_endo, build_endo_es1, build_endo_es2, Endo1Params, Endo2Params, EndoParams, Morphism,
    MorphismKind, MorphismSpace, MorphismSpec,
};
pub use orbits::{classify, DegenerationReport, ImageClass, OrbitLabel, Verdict};
pub use symplectic::{pairing, symp_scalar_test, Subspace, SympScalarMatrix};
