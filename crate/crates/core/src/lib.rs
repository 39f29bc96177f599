//! Turaev-Viro and Reshetikhin-Turaev invariants of closed 3-manifolds for
//! SU_q(2) at roots of unity, in exact cyclotomic arithmetic.

pub mod cyclotomic;
pub mod error;
pub mod identities;
pub mod modular;
pub mod report;
pub mod rt;
pub mod selftest;
pub mod smith;
pub mod triangulation;
pub mod tv;
pub mod verification;

pub use cyclotomic::{CycField, CycNumber};
pub use error::{Error, Result};
pub use modular::{Color, Level, ModularData, SixJ};
pub use rt::{
    colored_link_value, parse_link, rt_invariant, FramedLink, InvariantValue, LinkingData, RtOptions,
};
pub use smith::AbelianGroup;
pub use triangulation::{census, homology_h1, parse_triangulation, PachnerMove, Triangulation};
pub use tv::{tetra_weight, tv_state_sum, Method, StateSumResult, TvOptions};
pub use verification::{bundled_pairs, verify_pair, verify_suite, ManifoldPair, VerificationReport};
