mod common;

use common::*;
use gravshift::spectra::{
    effective_mass, level_energy, transition_frequency, EffectiveMass, Emitter, HalfInteger,
    QuantumState,
};
use gravshift::units::Potential;
use proptest::prelude::*;

fn state() -> impl Strategy<Value = QuantumState> {
    (1u32..=60, 0u32..20, 0u32..20).prop_map(|(z, np, k)| {
        QuantumState::new(z, np, HalfInteger::from_twice(2 * k + 1).unwrap()).unwrap()
    })
}

#[test]
fn level_energy_matches_direct_formula() {
    let free = EffectiveMass::free(&Emitter::electron());
    for z in [1u32, 2, 26, 92] {
        for n in 1..=5 {
            for s in QuantumState::shell(z, n).unwrap() {
                let e = level_energy(&s, &free).unwrap().value();
                let oracle = binding_energy(M_E, z as f64, n as f64, s.j().plus_half() as f64);
                assert!((e / oracle - 1.0).abs() < 1e-14, "{s}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Every line of every state shifts by φ/c², whatever the state.
    #[test]
    fn transition_shift_is_state_independent(
        a in state(),
        extra_n in 1u32..10,
        x in -0.5f64..-1e-3,
    ) {
        let lower = a;
        let upper = QuantumState::with_principal(
            lower.z(),
            lower.n() + extra_n,
            lower.j(),
        ).unwrap();
        let e = Emitter::electron();
        let free = effective_mass(&e, Potential::ZERO).unwrap();
        let bound = effective_mass(&e, Potential::new(x * C2).unwrap()).unwrap();
        let nu0 = transition_frequency(&upper, &lower, &free).unwrap().value();
        let nu = transition_frequency(&upper, &lower, &bound).unwrap().value();
        let shift = (nu - nu0) / nu0;
        prop_assert!((shift / x - 1.0).abs() <= 1e-12, "{} vs {}", shift, x);
    }

    /// In weak fields the same identity holds up to the cancellation in ν − ν₀.
    #[test]
    fn weak_field_shift(s in state(), x in -1e-5f64..-1e-11) {
        let e = Emitter::electron();
        let free = effective_mass(&e, Potential::ZERO).unwrap();
        let bound = effective_mass(&e, Potential::new(x * C2).unwrap()).unwrap();
        let e0 = level_energy(&s, &free).unwrap().value();
        let e1 = level_energy(&s, &bound).unwrap().value();
        let shift = (e1 - e0) / e0;
        prop_assert!((shift - x).abs() <= 8.0 * f64::EPSILON, "{} vs {}", shift, x);
    }
}
