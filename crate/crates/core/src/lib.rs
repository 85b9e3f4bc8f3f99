//! Orbits of Morse maps on surfaces under the diffeomorphism group: from a
//! decorated Kronrod-Reeb tree to a free finite group action on a torus whose
//! quotient models the orbit up to homotopy.

pub mod corpus;
pub mod engine;
pub mod groups;
pub mod model;
pub mod oracle;
pub mod torus;
