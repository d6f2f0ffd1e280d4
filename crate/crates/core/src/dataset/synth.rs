//! Synthetic advertising data with a known labeling rule.
//!
//! The four quantitative columns are uniform on the ranges of the public
//! advertising data; the clean label thresholds a nonlinear score with one
//! pairwise interaction and a time-of-day term. Each label is then flipped
//! independently with probability `noise`, so the Bayes-optimal accuracy is
//! exactly `1 - noise`.

use chrono::{Duration, NaiveDate, Timelike};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Cell, DataError, RawTable, Result, Schema};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_rows: usize,
    /// Label flip probability in `[0, 0.5)`.
    pub noise: f64,
    /// Fraction of positive clean labels.
    #[serde(default = "default_balance")]
    pub balance: f64,
}

fn default_balance() -> f64 {
    0.5
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_rows: 1000,
            noise: 0.1,
            balance: 0.5,
        }
    }
}

/// Uniform column distribution and its exact moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDistribution {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub integer: bool,
    pub mean: f64,
    pub variance: f64,
}

impl ColumnDistribution {
    fn continuous(name: &str, low: f64, high: f64) -> Self {
        Self {
            name: name.into(),
            low,
            high,
            integer: false,
            mean: (low + high) / 2.0,
            variance: (high - low).powi(2) / 12.0,
        }
    }

    fn integer(name: &str, low: i64, high: i64) -> Self {
        let k = (high - low + 1) as f64;
        Self {
            name: name.into(),
            low: low as f64,
            high: high as f64,
            integer: true,
            mean: (low + high) as f64 / 2.0,
            variance: (k * k - 1.0) / 12.0,
        }
    }

    fn z(&self, x: f64) -> f64 {
        (x - self.mean) / self.variance.sqrt()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.integer {
            rng.gen_range(self.low as i64..=self.high as i64) as f64
        } else {
            let v = rng.gen_range(self.low..self.high);
            (v * 100.0).round() / 100.0
        }
    }
}

/// The labeling function, recorded alongside generated data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingRule {
    pub description: String,
    /// Time on site, age, area income, internet usage.
    pub columns: Vec<ColumnDistribution>,
    /// Linear coefficients on the z-scored columns, in `columns` order.
    pub linear: [f64; 4],
    /// Coefficient on z(time on site) * z(internet usage).
    pub interaction: f64,
    /// Coefficient on sin(2 pi hour / 24).
    pub hour_amplitude: f64,
    pub threshold: f64,
    pub noise: f64,
    pub balance: f64,
    pub bayes_accuracy: f64,
}

impl GeneratingRule {
    pub fn score(&self, quantitative: [f64; 4], hour: u32) -> f64 {
        let z: Vec<f64> = self
            .columns
            .iter()
            .zip(quantitative)
            .map(|(c, x)| c.z(x))
            .collect();
        let lin: f64 = self.linear.iter().zip(&z).map(|(a, b)| a * b).sum();
        lin + self.interaction * z[0] * z[3]
            + self.hour_amplitude * (std::f64::consts::TAU * hour as f64 / 24.0).sin()
    }

    /// Clean label of a row in the full advertising schema.
    pub fn clean_label(&self, row: &[Cell]) -> u8 {
        let num = |j: usize| row[j].as_number().expect("numeric cell");
        let hour = match &row[8] {
            Cell::Time(t) => t.hour(),
            _ => panic!("timestamp cell expected"),
        };
        u8::from(self.score([num(0), num(1), num(2), num(3)], hour) > self.threshold)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule serializes") + "\n"
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub table: RawTable,
    pub rule: GeneratingRule,
    pub clean_labels: Vec<u8>,
    pub flipped: Vec<bool>,
}

const CITIES: [&str; 30] = [
    "Wrightburgh",
    "West Jodi",
    "Davidton",
    "West Terrifurt",
    "South Manuel",
    "Jamieberg",
    "Brandonstad",
    "Port Jefferybury",
    "West Colin",
    "Ramirezton",
    "West Brandonton",
    "East Theresashire",
    "West Katiefurt",
    "North Tara",
    "West William",
    "New Travistown",
    "West Dylanberg",
    "Pruittmouth",
    "Jessicastad",
    "Millertown",
    "Port Jacqueline",
    "Lake Nicole",
    "South John",
    "Pamelamouth",
    "Harperborough",
    "Port Danielleberg",
    "West Jeremyside",
    "South Cathyfurt",
    "Palmerside",
    "West Guybury",
];

const COUNTRIES: [&str; 15] = [
    "Tunisia",
    "Nauru",
    "San Marino",
    "Italy",
    "Iceland",
    "Norway",
    "Myanmar",
    "Australia",
    "Grenada",
    "Ghana",
    "Qatar",
    "Burundi",
    "Egypt",
    "Bosnia and Herzegovina",
    "Barbados",
];

const TOPIC_WORDS: [&str; 12] = [
    "Cloned",
    "Monitored",
    "Organic",
    "Triple-buffered",
    "Robust",
    "Sharable",
    "Enhanced",
    "Reactive",
    "Configurable",
    "Mandatory",
    "Centralized",
    "Team-oriented",
];

const TOPIC_NOUNS: [&str; 8] = [
    "orchestration",
    "moratorium",
    "encoding",
    "framework",
    "toolset",
    "hierarchy",
    "interface",
    "projection",
];

/// Generates `config.n_rows` rows in the full advertising schema.
pub fn synthesize(config: &SynthConfig, seed: u64) -> Result<Synthetic> {
    let n = config.n_rows;
    if n < 2 {
        return Err(DataError::InvalidSynth(format!(
            "n_rows must be >= 2, got {n}"
        )));
    }
    if !(0.0..0.5).contains(&config.noise) {
        return Err(DataError::InvalidSynth(format!(
            "noise {} outside [0, 0.5)",
            config.noise
        )));
    }
    let positives = (config.balance * n as f64).round() as usize;
    if !(config.balance > 0.0 && config.balance < 1.0) || positives == 0 || positives >= n {
        return Err(DataError::InvalidSynth(format!(
            "balance {} leaves one class empty at n = {n}",
            config.balance
        )));
    }

    let columns = vec![
        ColumnDistribution::continuous("Daily Time Spent on Site", 32.6, 90.97),
        ColumnDistribution::integer("Age", 19, 60),
        ColumnDistribution::continuous("Area Income", 13996.5, 79332.33),
        ColumnDistribution::continuous("Daily Internet Usage", 105.22, 269.96),
    ];
    let mut rule = GeneratingRule {
        description: "label = 1 iff -1.0*z(time) + 0.6*z(age) - 0.4*z(income) - 1.0*z(usage) \
                      + 0.5*z(time)*z(usage) + 0.3*sin(2*pi*hour/24) > threshold, \
                      then flipped with probability noise"
            .into(),
        columns,
        linear: [-1.0, 0.6, -0.4, -1.0],
        interaction: 0.5,
        hour_amplitude: 0.3,
        threshold: 0.0,
        noise: config.noise,
        balance: config.balance,
        bayes_accuracy: 1.0 - config.noise,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(2016, 1, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let span_secs = 190 * 24 * 3600;
    let mut rows = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    let mut flip_draws = Vec::with_capacity(n);
    for _ in 0..n {
        let q: Vec<f64> = rule.columns.iter().map(|c| c.sample(&mut rng)).collect();
        let topic = format!(
            "{} {}",
            TOPIC_WORDS[rng.gen_range(0..TOPIC_WORDS.len())],
            TOPIC_NOUNS[rng.gen_range(0..TOPIC_NOUNS.len())]
        );
        let city = CITIES[rng.gen_range(0..CITIES.len())];
        let male = if rng.gen_bool(0.5) { "1" } else { "0" };
        let country = COUNTRIES[rng.gen_range(0..COUNTRIES.len())];
        let ts = start + Duration::seconds(rng.gen_range(0..span_secs));
        flip_draws.push(rng.gen::<f64>() < config.noise);
        scores.push(rule.score([q[0], q[1], q[2], q[3]], ts.hour()));
        rows.push(vec![
            Cell::Number(q[0]),
            Cell::Number(q[1]),
            Cell::Number(q[2]),
            Cell::Number(q[3]),
            Cell::Text(topic),
            Cell::Text(city.into()),
            Cell::Text(male.into()),
            Cell::Text(country.into()),
            Cell::Time(ts),
            Cell::Label(0),
        ]);
    }

    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    rule.threshold = (sorted[n - positives - 1] + sorted[n - positives]) / 2.0;

    let mut clean_labels = Vec::with_capacity(n);
    for (row, &flip) in rows.iter_mut().zip(&flip_draws) {
        let clean = rule.clean_label(row);
        clean_labels.push(clean);
        row[9] = Cell::Label(if flip { 1 - clean } else { clean });
    }
    let table = RawTable::new(Schema::advertising(), rows)?;
    Ok(Synthetic {
        table,
        rule,
        clean_labels,
        flipped: flip_draws,
    })
}
