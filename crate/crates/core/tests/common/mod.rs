#![allow(dead_code)]

use proptest::prelude::*;
use zitterkit_core::{Momentum, RepSpec, SpinRep};

/// Momenta with components in [-3, 3] and norm at least 0.1.
pub fn momentum() -> impl Strategy<Value = Momentum> {
    prop::array::uniform3(-3.0f64..3.0)
        .prop_filter("away from zero", |c| c.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(Momentum)
}

pub fn mass() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(0.5), Just(1.0), Just(2.0)]
}

pub fn spin() -> impl Strategy<Value = SpinRep> {
    (0u32..=3).prop_map(SpinRep::from_twice)
}

/// Nonzero N of either sign, |N| in [0.2, 10].
pub fn gfv_n() -> impl Strategy<Value = f64> {
    (0.2f64..10.0, any::<bool>()).prop_map(|(n, neg)| if neg { -n } else { n })
}

/// Any representation instance together with a momentum valid for it.
pub fn rep_and_momentum() -> impl Strategy<Value = (RepSpec, Momentum)> {
    let rep = prop_oneof![
        mass().prop_map(|m| RepSpec::dirac(m).unwrap()),
        prop_oneof![Just(0.5), Just(1.0), Just(2.0)].prop_map(|m| RepSpec::feshbach_villars(m).unwrap()),
        (mass(), spin(), prop::option::of(gfv_n()))
            .prop_map(|(m, s, n)| RepSpec::gfv(m, s, n).unwrap()),
        Just(RepSpec::photon()),
        (mass(), spin()).prop_map(|(m, s)| RepSpec::foldy_wouthuysen(m, s).unwrap()),
    ];
    (rep, momentum())
}

