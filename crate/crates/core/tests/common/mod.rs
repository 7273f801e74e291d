//! Shared test data: the three rule tables, points that isolate single
//! terms, and a brute-force Mamdani oracle that does not touch the engine.

#![allow(dead_code)]

/// `(name, [a, b, c, d])` trapezoid breakpoints; triangles have `b == c`.
pub type Shape = (&'static str, [f64; 4]);

pub const TEMPERATURE: [Shape; 4] = [
    ("low", [0.0, 0.0, 18.5, 20.0]),
    ("medium", [18.5, 20.0, 20.0, 21.5]),
    ("high", [20.0, 21.5, 21.5, 23.0]),
    ("v.high", [21.5, 23.0, 100.0, 100.0]),
];
pub const HUMIDITY: [Shape; 4] = [
    ("dry", [0.0, 0.0, 0.3, 0.35]),
    ("comfortable", [0.3, 0.35, 0.35, 0.4]),
    ("humid", [0.35, 0.4, 0.4, 0.45]),
    ("stiki", [0.4, 0.45, 1.0, 1.0]),
];
pub const ENERGY: [Shape; 4] = [
    ("low", [0.0, 0.0, 50.0, 100.0]),
    ("normal", [50.0, 100.0, 100.0, 150.0]),
    ("high", [100.0, 150.0, 150.0, 200.0]),
    ("extreme", [150.0, 200.0, 1000.0, 1000.0]),
];
pub const TIME: [Shape; 5] = [
    ("offpeak-am", [0.0, 0.0, 6.0, 7.0]),
    ("peak-am", [6.0, 9.5, 9.5, 13.0]),
    ("offpeak-mo", [12.0, 15.0, 15.0, 18.0]),
    ("peak-pm", [17.0, 19.0, 19.0, 21.0]),
    ("offpeak-pm", [20.0, 21.0, 24.0, 24.0]),
];
pub const APPARENT: [Shape; 4] = [
    ("cool", [0.0, 0.0, 40.0, 55.0]),
    ("medium", [40.0, 55.0, 55.0, 70.0]),
    ("warm", [55.0, 67.5, 67.5, 80.0]),
    ("hot", [70.0, 80.0, 100.0, 100.0]),
];
pub const USAGE: [Shape; 4] = [
    ("low", [0.0, 0.0, 20.0, 40.0]),
    ("medium", [20.0, 40.0, 40.0, 60.0]),
    ("high", [40.0, 60.0, 60.0, 80.0]),
    ("v.high", [60.0, 80.0, 100.0, 100.0]),
];
pub const DECISION: [Shape; 2] = [
    ("send", [0.0, 0.0, 25.0, 75.0]),
    ("not_send", [25.0, 75.0, 100.0, 100.0]),
];

/// Rows: humidity. Columns: temperature.
pub const FS1_TABLE: [[&str; 4]; 4] = [
    ["cool", "cool", "medium", "warm"],
    ["cool", "cool", "warm", "hot"],
    ["cool", "medium", "hot", "hot"],
    ["medium", "warm", "hot", "hot"],
];
/// Rows: time of reading. Columns: appliance energy.
pub const FS2_TABLE: [[&str; 4]; 5] = [
    ["low", "low", "medium", "high"],
    ["medium", "high", "v.high", "v.high"],
    ["low", "low", "medium", "high"],
    ["medium", "high", "v.high", "v.high"],
    ["low", "low", "medium", "high"],
];
/// Rows: apparent temperature. Columns: usage time.
pub const FS3_TABLE: [[&str; 4]; 4] = [
    ["send", "not_send", "not_send", "not_send"],
    ["send", "send", "not_send", "not_send"],
    ["send", "send", "send", "not_send"],
    ["send", "send", "send", "send"],
];

/// For each term, a point where that term is the only one with positive
/// degree. Warm has no such point with degree one, so 70 (degree 0.8).
pub const TEMPERATURE_AT: [f64; 4] = [10.0, 20.0, 21.5, 50.0];
pub const HUMIDITY_AT: [f64; 4] = [0.15, 0.35, 0.4, 0.7];
pub const ENERGY_AT: [f64; 4] = [25.0, 100.0, 150.0, 500.0];
pub const TIME_AT: [f64; 5] = [3.0, 9.5, 15.0, 19.0, 22.5];
pub const APPARENT_AT: [f64; 4] = [20.0, 55.0, 70.0, 90.0];
pub const USAGE_AT: [f64; 4] = [10.0, 40.0, 60.0, 90.0];

pub fn degree(p: &[f64; 4], x: f64) -> f64 {
    let [a, b, c, d] = *p;
    if x < a || x > d {
        0.0
    } else if x >= b && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

/// Two-input Mamdani system described by literal shapes and a table.
pub struct Oracle {
    /// Input variable names of the table rows and columns.
    pub inputs: (&'static str, &'static str),
    pub rows: &'static [Shape],
    pub cols: &'static [Shape],
    pub out: &'static [Shape],
    pub table: Vec<Vec<&'static str>>,
    pub universe: (f64, f64),
}

impl Oracle {
    pub fn fs1() -> Self {
        Self {
            inputs: ("humidity", "temperature"),
            rows: &HUMIDITY,
            cols: &TEMPERATURE,
            out: &APPARENT,
            table: FS1_TABLE.iter().map(|r| r.to_vec()).collect(),
            universe: (0.0, 100.0),
        }
    }

    pub fn fs2() -> Self {
        Self {
            inputs: ("time_of_read", "appliance_energy"),
            rows: &TIME,
            cols: &ENERGY,
            out: &USAGE,
            table: FS2_TABLE.iter().map(|r| r.to_vec()).collect(),
            universe: (0.0, 100.0),
        }
    }

    pub fn fs3() -> Self {
        Self {
            inputs: ("apparent_temperature", "usage_time"),
            rows: &APPARENT,
            cols: &USAGE,
            out: &DECISION,
            table: FS3_TABLE.iter().map(|r| r.to_vec()).collect(),
            universe: (0.0, 100.0),
        }
    }

    /// Clip levels per output term after min/max over the table.
    pub fn levels(&self, row_x: f64, col_x: f64) -> Vec<f64> {
        let mut lv = vec![0.0f64; self.out.len()];
        for (i, (_, rp)) in self.rows.iter().enumerate() {
            for (j, (_, cp)) in self.cols.iter().enumerate() {
                let w = degree(rp, row_x).min(degree(cp, col_x));
                let k = self.out.iter().position(|(n, _)| *n == self.table[i][j]).unwrap();
                lv[k] = lv[k].max(w);
            }
        }
        lv
    }

    /// Centroid on `n` uniform samples, or `None` when nothing fires.
    pub fn crisp(&self, row_x: f64, col_x: f64, n: usize) -> Option<f64> {
        let lv = self.levels(row_x, col_x);
        let (lo, hi) = self.universe;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let mu = self
                .out
                .iter()
                .zip(&lv)
                .map(|((_, p), &l)| degree(p, x).min(l))
                .fold(0.0, f64::max);
            num += x * mu;
            den += mu;
        }
        (den > 0.0).then(|| num / den)
    }
}

pub fn argmax(shapes: &[Shape], x: f64) -> &'static str {
    let mut best = (shapes[0].0, -1.0);
    for (name, p) in shapes {
        let d = degree(p, x);
        if d > best.1 {
            best = (name, d);
        }
    }
    best.0
}
