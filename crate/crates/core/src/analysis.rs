//! Per-window K0 / TE / LC series over an encoded bit stream, and a
//! median/MAD anomaly flagger for that series.

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{linguistic_complexity, topological_entropy};
use crate::complexity::{k0_of_window, ConvergenceParams, KMode};
use crate::encoding::{BitString, EncodingTag};
use crate::error::{Error, Result};
use crate::grammar::DEFAULT_ISO_DEPTH;
use crate::scalar::Scalar;

/// Window length and stride, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowPlan {
    pub window_bits: usize,
    pub stride_bits: usize,
}

impl Default for WindowPlan {
    fn default() -> Self {
        WindowPlan {
            window_bits: 512,
            stride_bits: 512,
        }
    }
}

impl WindowPlan {
    /// Non-overlapping windows of `window_bits`.
    pub fn new(window_bits: usize) -> WindowPlan {
        WindowPlan {
            window_bits,
            stride_bits: window_bits,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_bits < 2 || !self.window_bits.is_power_of_two() {
            return Err(Error::InvalidPlan(
                "window_bits must be a power of two >= 2",
            ));
        }
        if self.stride_bits == 0 {
            return Err(Error::InvalidPlan("stride_bits must be positive"));
        }
        Ok(())
    }

    /// Number of full windows that fit in `len` bits.
    pub fn window_count(&self, len: usize) -> usize {
        if len < self.window_bits {
            0
        } else {
            (len - self.window_bits) / self.stride_bits + 1
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    pub windows: Vec<BitString>,
    /// Trailing bits past the end of the last full window.
    pub dropped_tail_bits: usize,
}

/// Cuts `bits` into windows `[i * stride, i * stride + window)`; a partial
/// window at the end is dropped, never padded.
pub fn segment(bits: &BitString, plan: &WindowPlan) -> Result<Segmentation> {
    plan.validate()?;
    let count = plan.window_count(bits.len());
    let windows = (0..count)
        .map(|i| {
            let start = i * plan.stride_bits;
            bits.slice(start, start + plan.window_bits)
                .expect("window lies inside the input")
        })
        .collect();
    let covered = match count {
        0 => 0,
        n => (n - 1) * plan.stride_bits + plan.window_bits,
    };
    Ok(Segmentation {
        windows,
        dropped_tail_bits: bits.len() - covered,
    })
}

/// Which measures to compute per window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measures {
    pub k0: bool,
    pub te: bool,
    pub lc: bool,
}

impl Measures {
    pub const ALL: Measures = Measures {
        k0: true,
        te: true,
        lc: true,
    };
    pub const K0: Measures = Measures {
        k0: true,
        te: false,
        lc: false,
    };

    pub fn is_empty(&self) -> bool {
        !(self.k0 || self.te || self.lc)
    }
}

impl Default for Measures {
    fn default() -> Self {
        Measures::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisConfig<T> {
    pub plan: WindowPlan,
    pub measures: Measures,
    pub iso_depth: u32,
    pub k_mode: KMode,
    pub params: ConvergenceParams<T>,
}

impl<T: Scalar> Default for AnalysisConfig<T> {
    fn default() -> Self {
        AnalysisConfig {
            plan: WindowPlan::default(),
            measures: Measures::ALL,
            iso_depth: DEFAULT_ISO_DEPTH,
            k_mode: KMode::Unit,
            params: ConvergenceParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowRecord<T> {
    pub index: usize,
    pub start_bit: usize,
    pub k0: Option<T>,
    pub te: Option<T>,
    pub lc: Option<T>,
    pub anomaly: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowSeries<T> {
    pub plan: WindowPlan,
    pub dropped_tail_bits: usize,
    pub encoding: EncodingTag,
    pub records: Vec<WindowRecord<T>>,
}

fn measure_window<T: Scalar>(
    index: usize,
    window: &BitString,
    config: &AnalysisConfig<T>,
) -> Result<WindowRecord<T>> {
    let k0 = if config.measures.k0 {
        Some(k0_of_window(window, config.iso_depth, config.k_mode, &config.params)?.k0)
    } else {
        None
    };
    let symbols = window.as_slice();
    let te = if config.measures.te {
        Some(topological_entropy(symbols, 2)?)
    } else {
        None
    };
    let lc = if config.measures.lc {
        Some(linguistic_complexity(symbols, 2)?.lc)
    } else {
        None
    };
    Ok(WindowRecord {
        index,
        start_bit: index * config.plan.stride_bits,
        k0,
        te,
        lc,
        anomaly: false,
    })
}

/// Computes the requested measures for every window. Windows are processed
/// in parallel; records come back in window order.
pub fn analyze<T: Scalar>(
    bits: &BitString,
    encoding: EncodingTag,
    config: &AnalysisConfig<T>,
) -> Result<WindowSeries<T>> {
    config.params.validate()?;
    if config.measures.is_empty() {
        return Err(Error::InvalidPlan("at least one measure must be selected"));
    }
    let segmentation = segment(bits, &config.plan)?;
    let records = segmentation
        .windows
        .par_iter()
        .enumerate()
        .map(|(i, w)| measure_window(i, w, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(WindowSeries {
        plan: config.plan,
        dropped_tail_bits: segmentation.dropped_tail_bits,
        encoding,
        records,
    })
}

/// Scale that turns the MAD into a consistent estimate of a normal
/// standard deviation.
pub const MAD_SCALE: f64 = 1.4826;

/// Default robust z-score threshold.
pub const DEFAULT_TAU: f64 = 3.5;

fn median<T: Scalar>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("measures are never NaN"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / (T::one() + T::one())
    }
}

/// Flags of `values` under the rule `|x - median| > tau * 1.4826 * MAD`;
/// with `MAD = 0` only values different from the median are flagged.
pub fn robust_outliers<T: Scalar>(values: &[T], tau: T) -> Vec<bool> {
    if values.is_empty() {
        return Vec::new();
    }
    let center = median(&mut values.to_vec());
    let mut deviations: Vec<T> = values.iter().map(|&v| (v - center).abs()).collect();
    let mad = median(&mut deviations) * T::from_f64_lossy(MAD_SCALE);
    values
        .iter()
        .map(|&v| (v - center).abs() > tau * mad)
        .collect()
}

type Column<T> = fn(&WindowRecord<T>) -> Option<T>;

/// Marks every record that is a robust outlier in at least one computed
/// measure.
pub fn flag_anomalies<T: Scalar>(mut series: WindowSeries<T>, tau: T) -> Result<WindowSeries<T>> {
    if series.records.is_empty() {
        return Err(Error::EmptySeries);
    }
    if tau.is_nan() || tau <= T::zero() {
        return Err(Error::InvalidThreshold(tau.to_f64().unwrap_or(f64::NAN)));
    }
    series.records.iter_mut().for_each(|r| r.anomaly = false);
    let columns: [Column<T>; 3] = [|r| r.k0, |r| r.te, |r| r.lc];
    for column in columns {
        let Some(values) = series
            .records
            .iter()
            .map(column)
            .collect::<Option<Vec<T>>>()
        else {
            continue;
        };
        for (record, flagged) in series.records.iter_mut().zip(robust_outliers(&values, tau)) {
            record.anomaly |= flagged;
        }
    }
    Ok(series)
}
