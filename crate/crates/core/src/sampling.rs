//! Running maxima over sampled residuals, remembering the worst input.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Worst {
    pub index: usize,
    pub input: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampledMax {
    pub max: f64,
    pub count: usize,
    pub worst: Option<Worst>,
}

impl SampledMax {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one residual. `input` is only serialized when it becomes the worst case.
    pub fn observe(&mut self, index: usize, residual: f64, input: impl FnOnce() -> Value) {
        self.count += 1;
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if self.worst.is_none() || r > self.max {
            self.max = r;
            self.worst = Some(Worst { index, input: input() });
        }
    }

    pub fn merge(&mut self, other: SampledMax) {
        self.count += other.count;
        if let Some(w) = other.worst {
            if self.worst.is_none() || other.max > self.max {
                self.max = other.max;
                self.worst = Some(w);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_the_largest() {
        let mut m = SampledMax::new();
        m.observe(0, 1e-12, || Value::from(0));
        m.observe(1, 3e-9, || Value::from(1));
        m.observe(2, 1e-10, || Value::from(2));
        assert_eq!(m.count, 3);
        assert_eq!(m.max, 3e-9);
        assert_eq!(m.worst.unwrap().index, 1);
    }
}
