use platoon_core::channel::ChannelConfig;
use platoon_core::emissions::{EmissionCoeffs, Quantity};
use platoon_core::platoon::cacc_raw;
use platoon_core::route::{ContainerStop, Route, Segment, SignalHead};
use platoon_core::scenario::{generate_demand, BackgroundSpec, VanRole};
use platoon_core::{
    compare, run, Beacon, Mode, PlatoonConfig, ScenarioConfig, SplitMix64, VehicleState,
};
use proptest::prelude::*;

fn coeffs() -> EmissionCoeffs {
    EmissionCoeffs::zero("TEST/POLY")
        .with(Quantity::Co2, [600.0, 500.0, 0.0, 40.0, 0.5, 0.02])
        .with(Quantity::Fuel, [0.2, 0.18, 0.0, 0.015, 0.0002, 0.000_008])
}

fn stop(id: &str, position_m: f64, dwell_s: f64) -> ContainerStop {
    ContainerStop {
        id: id.into(),
        position_m,
        dwell_s,
    }
}

/// Three kilometres of mixed limits with two signals and a delivery stop.
fn town_route() -> Route {
    let seg = |start_m, end_m, kmh: f64| Segment {
        start_m,
        end_m,
        limit_mps: kmh / 3.6,
    };
    Route::new(
        3000.0,
        vec![
            seg(0.0, 1000.0, 50.0),
            seg(1000.0, 2200.0, 70.0),
            seg(2200.0, 3000.0, 50.0),
        ],
        vec![
            stop("a", 100.0, 0.0),
            stop("mid", 1600.0, 20.0),
            stop("b", 2900.0, 0.0),
        ],
        vec![
            SignalHead {
                position_m: 700.0,
                cycle_s: 90.0,
                green_s: 45.0,
                offset_s: 10.0,
            },
            SignalHead {
                position_m: 2500.0,
                cycle_s: 60.0,
                green_s: 30.0,
                offset_s: 40.0,
            },
        ],
    )
    .unwrap()
}

fn cruise_route() -> Route {
    Route::new(
        4000.0,
        vec![Segment {
            start_m: 0.0,
            end_m: 4000.0,
            limit_mps: 25.0,
        }],
        vec![stop("a", 150.0, 0.0), stop("b", 3900.0, 0.0)],
        Vec::new(),
    )
    .unwrap()
}

fn config(mode: Mode, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        mode,
        seed,
        max_sim_time: 900.0,
        background: BackgroundSpec {
            spawn_prob: 0.01,
            max_vehicles: 8,
        },
        ..ScenarioConfig::default()
    }
}

fn arb_mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Connected), Just(Mode::NotConnected)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_reproducible(seed in any::<u64>(), mode in arb_mode()) {
        let cfg = config(mode, seed);
        let route = town_route();
        prop_assert_eq!(run(&cfg, &route, &coeffs()).unwrap(), run(&cfg, &route, &coeffs()).unwrap());
    }

    #[test]
    fn background_vehicles_are_conserved(seed in any::<u64>(), p in 0.0..0.05f64, cap in 0..20usize, horizon in 60.0..900.0f64) {
        let cfg = ScenarioConfig {
            max_sim_time: horizon,
            background: BackgroundSpec { spawn_prob: p, max_vehicles: cap },
            ..config(Mode::NotConnected, seed)
        };
        let r = run(&cfg, &town_route(), &coeffs()).unwrap();
        let b = r.background;
        prop_assert!(b.admitted <= b.scheduled);
        prop_assert!(b.admitted <= cap);
        prop_assert_eq!(b.admitted, b.inserted + b.waiting);
        prop_assert_eq!(b.inserted, b.finished + b.running);
    }

    #[test]
    fn comparing_a_run_with_itself_is_neutral(seed in any::<u64>(), mode in arb_mode()) {
        let r = run(&config(mode, seed), &town_route(), &coeffs()).unwrap();
        prop_assume!(r.all_finished());
        let report = compare(&r, &r).unwrap();
        prop_assert_eq!(report.travel_time_reduction_pct, 0.0);
        prop_assert!(report.reduction_pct.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn connected_vans_never_collide(seed in any::<u64>(), loss in 0.0..=0.2f64, latency in 0.0..0.3f64) {
        let cfg = ScenarioConfig {
            channel: ChannelConfig { loss_prob: loss, latency_s: latency, seed, ..ChannelConfig::default() },
            ..config(Mode::Connected, seed)
        };
        let r = run(&cfg, &town_route(), &coeffs()).unwrap();
        prop_assert!(r.min_gap_m >= 0.0, "min gap {}", r.min_gap_m);
    }

    #[test]
    fn gap_error_settles(seed in any::<u64>(), spawn_gap in 1.0..15.0f64) {
        let cfg = ScenarioConfig {
            spawn_gap_m: spawn_gap,
            max_sim_time: 240.0,
            background: BackgroundSpec::default(),
            ..config(Mode::Connected, seed)
        };
        let r = run(&cfg, &cruise_route(), &coeffs()).unwrap();
        let gap_des = PlatoonConfig::default().gap_des;
        let settled = r.series.iter().filter(|s| s.t > 60.0 && s.on_trip && r.vans[s.van].role == VanRole::Follower);
        // the gap is undefined once the vehicle ahead has left the road
        for (s, gap) in settled.filter_map(|s| Some((s, s.gap_m?))) {
            let e = gap - gap_des;
            prop_assert!(e.abs() < 0.5, "t={} van={} e={e}", s.t, s.van);
        }
    }

    #[test]
    fn demand_replays_from_the_seed(seed in any::<u64>(), p in 0.0..=1.0f64, n in 0..2000usize, types in 1..4usize) {
        let schedule = generate_demand(seed, n, p, types);
        let mut rng = SplitMix64::new(seed);
        let steps: Vec<usize> = (0..n).filter(|_| rng.uniform() < p).collect();
        prop_assert_eq!(schedule.iter().map(|s| s.depart_step).collect::<Vec<_>>(), steps);
        for (i, s) in schedule.iter().enumerate() {
            prop_assert_eq!((s.id, s.type_index), (i, i % types));
        }
    }

    #[test]
    fn equilibrium_is_a_fixed_point(v in 0.0..30.0f64, len_q in 8..40u32, gap_q in 4..80u32, s0 in -1000..1000i32) {
        // quarter-metre lengths keep the gap error exactly zero
        let (len, gap) = (f64::from(len_q) / 4.0, f64::from(gap_q) / 4.0);
        let cfg = PlatoonConfig { gap_des: gap, ..PlatoonConfig::default() };
        let ego = VehicleState::new("e", f64::from(s0), v);
        let beacon = |s| Beacon { sender: 0, s, v, a: 0.0, t_sent: 0.0, seq: 0 };
        let pred = beacon(ego.s + len + gap);
        let lead = beacon(ego.s + 3.0 * (len + gap));
        prop_assert_eq!(cacc_raw(&ego, &pred, &lead, &cfg, len), 0.0);
    }
}

#[test]
fn demand_for_seed_7() {
    let schedule = generate_demand(7, 100, 0.3, 1);
    let mut rng = SplitMix64::new(7);
    let expected = (0..100).filter(|_| rng.uniform() < 0.3).count();
    assert_eq!(schedule.len(), expected);
    assert!(schedule
        .windows(2)
        .all(|w| w[0].depart_step < w[1].depart_step));
}

#[test]
fn total_beacon_loss_degrades_followers() {
    let cfg = ScenarioConfig {
        channel: ChannelConfig {
            loss_prob: 1.0,
            ..ChannelConfig::default()
        },
        max_sim_time: 120.0,
        ..config(Mode::Connected, 3)
    };
    let r = run(&cfg, &cruise_route(), &coeffs()).unwrap();
    let bound = cfg.channel.staleness_bound();
    let followers: Vec<_> = r
        .series
        .iter()
        .filter(|s| r.vans[s.van].role == VanRole::Follower && s.t > bound + cfg.dt)
        .collect();
    assert!(!followers.is_empty());
    assert!(followers.iter().all(|s| s.degraded));
    assert!(r
        .series
        .iter()
        .filter(|s| r.vans[s.van].role == VanRole::Follower && s.t < bound)
        .all(|s| !s.degraded));
    assert!(r.min_gap_m >= 0.0);
}
