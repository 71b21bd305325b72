//! Splitting coefficients taken from the literature.
//!
//! Kinetic stages advance `-d^2/dx^2` (and the clock in non-autonomous
//! problems); potential stages apply the multiplication operator.

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stage {
    Kinetic(f64),
    Potential(f64),
}

use Stage::{Kinetic as K, Potential as P};

pub const STRANG: [Stage; 3] = [K(0.5), P(1.0), K(0.5)];

// Blanes & Moan (2002), J. Comput. Appl. Math. 142, SRKN_6^b: fourth
// order, six potential stages, valid when [V, [V, [V, T]]] = 0.
const BM_B1: f64 = 0.082_984_406_417_405_2;
const BM_B2: f64 = 0.396_309_801_498_368;
const BM_B3: f64 = -0.039_056_304_922_348_6;
const BM_B4: f64 = 1.0 - 2.0 * (BM_B1 + BM_B2 + BM_B3);
const BM_A1: f64 = 0.245_298_957_184_271;
const BM_A2: f64 = 0.604_872_665_711_080;
const BM_A3: f64 = 0.5 - (BM_A1 + BM_A2);

pub const BLANES_MOAN_RKN: [Stage; 13] = [
    P(BM_B1),
    K(BM_A1),
    P(BM_B2),
    K(BM_A2),
    P(BM_B3),
    K(BM_A3),
    P(BM_B4),
    K(BM_A3),
    P(BM_B3),
    K(BM_A2),
    P(BM_B2),
    K(BM_A1),
    P(BM_B1),
];

// Blanes & Moan (2002), S_6: fourth order, six kinetic stages, general
// separable splitting.
const S6_A1: f64 = 0.079_203_696_431_195_7;
const S6_A2: f64 = 0.353_172_906_049_774;
const S6_A3: f64 = -0.042_065_080_357_719_5;
const S6_A4: f64 = 1.0 - 2.0 * (S6_A1 + S6_A2 + S6_A3);
const S6_B1: f64 = 0.209_515_106_613_362;
const S6_B2: f64 = -0.143_851_773_179_818;
const S6_B3: f64 = 0.5 - (S6_B1 + S6_B2);

pub const BLANES_MOAN_S6: [Stage; 13] = [
    K(S6_A1),
    P(S6_B1),
    K(S6_A2),
    P(S6_B2),
    K(S6_A3),
    P(S6_B3),
    K(S6_A4),
    P(S6_B3),
    K(S6_A3),
    P(S6_B2),
    K(S6_A2),
    P(S6_B1),
    K(S6_A1),
];

// Chin & Chen (2005), forward algorithm 4A:
// e^{V/6} e^{T/2} e^{2 V~/3} e^{T/2} e^{V/6},
// V~ = V + (eps^2 / 48) [V, [T, V]].
pub const CHIN_CHEN_OUTER: f64 = 1.0 / 6.0;
pub const CHIN_CHEN_KINETIC: f64 = 0.5;
pub const CHIN_CHEN_MIDDLE: f64 = 2.0 / 3.0;
/// With `T = -d^2/dx^2` and `eps = -i h`, `[V, [T, V]] = 2 |V'|^2` and the
/// middle potential becomes `V - (h^2 / 24) |V'|^2`.
pub const CHIN_CHEN_GRADIENT: f64 = -1.0 / 24.0;
