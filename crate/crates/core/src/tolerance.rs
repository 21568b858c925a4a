//! Acceptance thresholds for every verified identity.
//!
//! Truncation artifacts are excluded through sector margins and guard levels,
//! never through these numbers.

/// Oscillator algebra relations and the `[a_i, a†_i]` scale-product form.
pub const ALGEBRA: f64 = 1e-12;
/// `a†_i a_i = q^{N_{i+1}+...+N_n} [N_i]` on the full basis.
pub const NUMBER_RELATION: f64 = 1e-14;
/// Ordinary boson relations at q = 1 - 1e-8.
pub const BOSON_LIMIT: f64 = 1e-6;
/// Generic identity acceptance.
pub const IDENTITY: f64 = 1e-10;
/// Resolved identity from coherent states.
pub const COMPLETENESS: f64 = 1e-8;
/// Off-diagonal resolved-identity entries.
pub const COMPLETENESS_OFF_DIAGONAL: f64 = 1e-10;
/// Series/product and recurrence agreement of the q-exponential.
pub const Q_EXP: f64 = 1e-12;
/// Shift identity for polynomial `f`.
pub const SHIFT: f64 = 1e-12;
/// `a_i^m exp_q(t a†_i)` identities.
pub const POWER: f64 = 1e-10;
/// Weyl-Heisenberg reordering identities.
pub const WEYL: f64 = 1e-9;
/// `[a_i, Q_i]_q = 0`.
pub const Q_COMMUTATION: f64 = 1e-15;
/// Equality of the two Hamiltonian forms and diagonality of H.
pub const HAMILTONIAN_FORMS: f64 = 1e-13;
/// q-canonical commutator.
pub const CANONICAL: f64 = 1e-11;
/// Scale-operator form of the Hamiltonian and the unrolled commutator.
pub const SCALE_FORM: f64 = 1e-12;
/// Closed-form spectrum against the numeric diagonal.
pub const SPECTRUM: f64 = 1e-11;
/// Energies closer than this share a degeneracy group.
pub const DEGENERACY: f64 = 1e-9;
/// Classical limit of the spectrum at q = 1 - 1e-6.
pub const CLASSICAL_SPECTRUM: f64 = 1e-4;
/// Canonical commutator against i times the identity near q = 1.
pub const CLASSICAL_COMMUTATOR: f64 = 1e-6;
/// Dropped coherent-state tail, norm squared.
pub const COHERENT_TAIL: f64 = 1e-12;
