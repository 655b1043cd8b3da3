use alloc::vec::Vec;

/// Semantic name of a model column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    Commit { unit: usize, period: usize },
    StartCost { unit: usize, period: usize },
    StopCost { unit: usize, period: usize },
    Thermal { scenario: usize, unit: usize, period: usize },
    Weight { scenario: usize, unit: usize, period: usize, breakpoint: usize },
    Wind { scenario: usize, period: usize },
    Solar { scenario: usize, period: usize },
    Hydro { scenario: usize, period: usize },
    Charge { scenario: usize, period: usize },
    Release { scenario: usize, period: usize },
    Energy { scenario: usize, period: usize },
    ChargeMode { scenario: usize, period: usize },
    Shed { scenario: usize, period: usize },
    Spill { scenario: usize, period: usize },
}

const TAIL: usize = 7;

/// Column positions of every decision variable.
///
/// The layout is: `u`, start cost, stop cost (each `unit × period`), then for
/// every scenario and period a block holding each unit's output followed by
/// its breakpoint weights, and finally wind, solar, hydro, charge, release,
/// energy, charge mode and (optionally) shed and spill.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableIndex {
    pub units: usize,
    pub periods: usize,
    pub scenarios: usize,
    /// Breakpoints per unit.
    pub breakpoints: Vec<usize>,
    /// Price of the shed and spill slacks, present only when they exist.
    pub shed_penalty: Option<f64>,
    unit_offset: Vec<usize>,
    block: usize,
    second_stage: usize,
}

impl VariableIndex {
    pub fn new(units: usize, periods: usize, scenarios: usize, breakpoints: Vec<usize>, shed_penalty: Option<f64>) -> Self {
        assert_eq!(breakpoints.len(), units);
        let mut unit_offset = Vec::with_capacity(units);
        let mut acc = 0;
        for &k in &breakpoints {
            unit_offset.push(acc);
            acc += 1 + k;
        }
        let block = acc + TAIL + if shed_penalty.is_some() { 2 } else { 0 };
        Self { units, periods, scenarios, breakpoints, shed_penalty, unit_offset, block, second_stage: 3 * units * periods }
    }

    pub fn len(&self) -> usize {
        self.second_stage + self.scenarios * self.periods * self.block
    }

    pub fn has_slack(&self) -> bool {
        self.shed_penalty.is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u(&self, unit: usize, period: usize) -> usize {
        unit * self.periods + period
    }

    pub fn start_cost(&self, unit: usize, period: usize) -> usize {
        self.units * self.periods + self.u(unit, period)
    }

    pub fn stop_cost(&self, unit: usize, period: usize) -> usize {
        2 * self.units * self.periods + self.u(unit, period)
    }

    fn base(&self, scenario: usize, period: usize) -> usize {
        self.second_stage + (scenario * self.periods + period) * self.block
    }

    fn tail(&self, scenario: usize, period: usize, slot: usize) -> usize {
        let units_end = self.unit_offset.last().map_or(0, |o| o + 1 + self.breakpoints[self.units - 1]);
        self.base(scenario, period) + units_end + slot
    }

    pub fn thermal(&self, scenario: usize, unit: usize, period: usize) -> usize {
        self.base(scenario, period) + self.unit_offset[unit]
    }

    pub fn weight(&self, scenario: usize, unit: usize, period: usize, breakpoint: usize) -> usize {
        debug_assert!(breakpoint < self.breakpoints[unit]);
        self.thermal(scenario, unit, period) + 1 + breakpoint
    }

    pub fn wind(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 0)
    }

    pub fn solar(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 1)
    }

    pub fn hydro(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 2)
    }

    pub fn charge(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 3)
    }

    pub fn release(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 4)
    }

    pub fn energy(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 5)
    }

    pub fn charge_mode(&self, scenario: usize, period: usize) -> usize {
        self.tail(scenario, period, 6)
    }

    pub fn shed(&self, scenario: usize, period: usize) -> Option<usize> {
        self.has_slack().then(|| self.tail(scenario, period, 7))
    }

    pub fn spill(&self, scenario: usize, period: usize) -> Option<usize> {
        self.has_slack().then(|| self.tail(scenario, period, 8))
    }

    pub fn position(&self, key: VarKey) -> Option<usize> {
        use VarKey::*;
        let (n, t, s) = (self.units, self.periods, self.scenarios);
        let pos = match key {
            Commit { unit, period } if unit < n && period < t => self.u(unit, period),
            StartCost { unit, period } if unit < n && period < t => self.start_cost(unit, period),
            StopCost { unit, period } if unit < n && period < t => self.stop_cost(unit, period),
            Thermal { scenario, unit, period } if scenario < s && unit < n && period < t => {
                self.thermal(scenario, unit, period)
            }
            Weight { scenario, unit, period, breakpoint }
                if scenario < s && unit < n && period < t && breakpoint < self.breakpoints[unit] =>
            {
                self.weight(scenario, unit, period, breakpoint)
            }
            Wind { scenario, period } if scenario < s && period < t => self.wind(scenario, period),
            Solar { scenario, period } if scenario < s && period < t => self.solar(scenario, period),
            Hydro { scenario, period } if scenario < s && period < t => self.hydro(scenario, period),
            Charge { scenario, period } if scenario < s && period < t => self.charge(scenario, period),
            Release { scenario, period } if scenario < s && period < t => self.release(scenario, period),
            Energy { scenario, period } if scenario < s && period < t => self.energy(scenario, period),
            ChargeMode { scenario, period } if scenario < s && period < t => self.charge_mode(scenario, period),
            Shed { scenario, period } if scenario < s && period < t => return self.shed(scenario, period),
            Spill { scenario, period } if scenario < s && period < t => return self.spill(scenario, period),
            _ => return None,
        };
        Some(pos)
    }

    pub fn key(&self, pos: usize) -> Option<VarKey> {
        use VarKey::*;
        let nt = self.units * self.periods;
        if pos < 3 * nt {
            let (unit, period) = ((pos % nt) / self.periods, pos % self.periods);
            return Some(match pos / nt {
                0 => Commit { unit, period },
                1 => StartCost { unit, period },
                _ => StopCost { unit, period },
            });
        }
        if pos >= self.len() {
            return None;
        }
        let rel = pos - self.second_stage;
        let (blk, off) = (rel / self.block, rel % self.block);
        let (scenario, period) = (blk / self.periods, blk % self.periods);
        for unit in 0..self.units {
            let start = self.unit_offset[unit];
            if off == start {
                return Some(Thermal { scenario, unit, period });
            }
            if off > start && off <= start + self.breakpoints[unit] {
                return Some(Weight { scenario, unit, period, breakpoint: off - start - 1 });
            }
        }
        let slot = pos - self.tail(scenario, period, 0);
        Some(match slot {
            0 => Wind { scenario, period },
            1 => Solar { scenario, period },
            2 => Hydro { scenario, period },
            3 => Charge { scenario, period },
            4 => Release { scenario, period },
            5 => Energy { scenario, period },
            6 => ChargeMode { scenario, period },
            7 => Shed { scenario, period },
            _ => Spill { scenario, period },
        })
    }
}
