//! Periodic V2V beaconing inside a platoon with i.i.d. loss and a fixed
//! latency. Stands in for the 802.11p network layer.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dynamics::VehicleState;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel parameter `{0}` is out of range")]
    OutOfRange(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beacon {
    /// Dense member index of the sender.
    pub sender: usize,
    pub s: f64,
    pub v: f64,
    pub a: f64,
    pub t_sent: f64,
    pub seq: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub interval_s: f64,
    pub latency_s: f64,
    pub loss_prob: f64,
    pub seed: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            interval_s: 0.1,
            latency_s: 0.0,
            loss_prob: 0.0,
            seed: 1,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.interval_s > 0.0) {
            return Err(ChannelError::OutOfRange("interval_s"));
        }
        if !(self.latency_s >= 0.0) {
            return Err(ChannelError::OutOfRange("latency_s"));
        }
        if !(0.0..=1.0).contains(&self.loss_prob) {
            return Err(ChannelError::OutOfRange("loss_prob"));
        }
        Ok(())
    }

    /// Oldest beacon a controller may consume without going degraded.
    pub fn staleness_bound(&self) -> f64 {
        3.0 * self.interval_s
    }
}

/// True when a beacon is due in the step starting at `t`, i.e. when
/// `t mod interval < dt`. Evaluated on step boundaries so that float
/// rounding of `t` cannot fire an extra beacon.
pub fn beacon_due(t: f64, dt: f64, interval: f64) -> bool {
    const EPS: f64 = 1e-9;
    if t < dt - EPS {
        return true;
    }
    let now = libm::floor(t / interval + EPS);
    let before = libm::floor((t - dt) / interval + EPS);
    now > before
}

/// Beacons emitted at `t` by `members`, in the given (vehicle) order.
/// `next_seq` holds the per-sender counters and is advanced.
pub fn schedule_beacons(
    t: f64,
    dt: f64,
    members: &[(usize, &VehicleState)],
    cfg: &ChannelConfig,
    next_seq: &mut [u64],
) -> Vec<Beacon> {
    if !beacon_due(t, dt, cfg.interval_s) {
        return Vec::new();
    }
    members
        .iter()
        .map(|&(sender, st)| {
            let seq = next_seq[sender];
            next_seq[sender] += 1;
            Beacon {
                sender,
                s: st.s,
                v: st.v,
                a: st.a,
                t_sent: t,
                seq,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct InFlight {
    beacon: Beacon,
    receiver: usize,
    visible_at: f64,
}

/// What happened to one emitted beacon.
#[derive(Debug, Clone, PartialEq)]
pub struct BeaconFate {
    pub beacon: Beacon,
    pub delivered_to: Vec<usize>,
}

/// Channel state for one scenario: counters, in-flight copies and each
/// receiver's newest beacon per sender.
#[derive(Debug, Clone)]
pub struct Channel {
    cfg: ChannelConfig,
    rng: SplitMix64,
    groups: Vec<usize>,
    next_seq: Vec<u64>,
    in_flight: Vec<InFlight>,
    /// `tables[receiver][sender]`
    tables: Vec<Vec<Option<Beacon>>>,
}

impl Channel {
    /// `groups[i]` is the platoon of member `i`; beacons only reach members
    /// of the sender's platoon.
    pub fn new(groups: Vec<usize>, cfg: ChannelConfig) -> Self {
        let n = groups.len();
        Self {
            rng: SplitMix64::new(cfg.seed),
            cfg,
            groups,
            next_seq: vec![0; n],
            in_flight: Vec::new(),
            tables: vec![vec![None; n]; n],
        }
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.cfg
    }

    /// Seeds every table with ground truth, as if the members had exchanged
    /// beacons before departure.
    pub fn initialize(&mut self, t: f64, members: &[(usize, &VehicleState)]) {
        for &(sender, st) in members {
            let b = Beacon {
                sender,
                s: st.s,
                v: st.v,
                a: st.a,
                t_sent: t,
                seq: 0,
            };
            self.next_seq[sender] = 1;
            for receiver in 0..self.groups.len() {
                if receiver != sender && self.groups[receiver] == self.groups[sender] {
                    self.tables[receiver][sender] = Some(b);
                }
            }
        }
    }

    /// Emits due beacons at `t` and delivers them.
    pub fn step(&mut self, t: f64, dt: f64, members: &[(usize, &VehicleState)]) -> Vec<BeaconFate> {
        let cfg = self.cfg;
        let beacons = schedule_beacons(t, dt, members, &cfg, &mut self.next_seq);
        self.deliver(&beacons, t)
    }

    /// One uniform draw per beacon and receiver (beacon order, then receiver
    /// index): the copy survives when the draw is below `1 - loss_prob` and
    /// becomes visible at `t_sent + latency`. Then every copy visible by `t`
    /// is applied, keeping the highest sequence number per sender.
    pub fn deliver(&mut self, beacons: &[Beacon], t: f64) -> Vec<BeaconFate> {
        let keep_below = 1.0 - self.cfg.loss_prob;
        let mut fates = Vec::with_capacity(beacons.len());
        for b in beacons {
            let mut delivered_to = Vec::new();
            for receiver in 0..self.groups.len() {
                if receiver == b.sender || self.groups[receiver] != self.groups[b.sender] {
                    continue;
                }
                if self.rng.uniform() < keep_below {
                    delivered_to.push(receiver);
                    self.in_flight.push(InFlight {
                        beacon: *b,
                        receiver,
                        visible_at: b.t_sent + self.cfg.latency_s,
                    });
                }
            }
            fates.push(BeaconFate {
                beacon: *b,
                delivered_to,
            });
        }

        let tables = &mut self.tables;
        self.in_flight.retain(|f| {
            if f.visible_at > t + 1e-9 {
                return true;
            }
            let slot = &mut tables[f.receiver][f.beacon.sender];
            if slot.is_none_or(|old| old.seq < f.beacon.seq) {
                *slot = Some(f.beacon);
            }
            false
        });
        fates
    }

    /// Newest beacon `receiver` holds from `sender`.
    pub fn latest(&self, receiver: usize, sender: usize) -> Option<&Beacon> {
        self.tables.get(receiver)?.get(sender)?.as_ref()
    }

    pub fn table(&self, receiver: usize) -> &[Option<Beacon>] {
        &self.tables[receiver]
    }
}
