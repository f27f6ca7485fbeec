//! Finite generalized quadrangles built from Kantor families, their
//! elation groups, and the verification battery around skew translation
//! quadrangles: coset geometries, classical coordinate models, Benson
//! congruences, fixed-point taxonomies, local Moufang conditions, dual
//! nets and subquadrangle planes, the twisting construction, Frattini
//! geometries, and partial congruence partitions.

pub mod autm;
pub mod classical;
pub mod ff;
pub mod gq;
pub mod grp;
pub mod io;
pub mod kantor;
pub mod report;
pub mod subgeo;
pub mod util;
