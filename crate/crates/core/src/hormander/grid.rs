use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::Complex64;

/// What is known about the support of a grid function in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSupport {
    /// The samples vanish for `t < 0`.
    NonNegativeTime,
    Unknown,
}

/// Complex samples of `w(x, t)` on a uniform grid in `R^k x R`.
///
/// Axes are ordered `x_1, ..., x_k, t`; samples are stored row-major with
/// `t` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisoGridFunction {
    spatial_dim: usize,
    spacing: Vec<f64>,
    extents: Vec<usize>,
    origin: Vec<f64>,
    support: TimeSupport,
    samples: Vec<Complex64>,
}

impl AnisoGridFunction {
    pub fn new(
        spatial_dim: usize,
        spacing: Vec<f64>,
        extents: Vec<usize>,
        origin: Vec<f64>,
        support: TimeSupport,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        let d = spatial_dim + 1;
        if spacing.len() != d || extents.len() != d || origin.len() != d {
            return Err(Error::input(format!(
                "grid with {spatial_dim} spatial axes needs {d} spacings, extents and origins"
            )));
        }
        if let Some(h) = spacing.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            return Err(Error::input(format!("grid spacing {h} is not positive")));
        }
        if extents.contains(&0) {
            return Err(Error::input("grid extents must be positive"));
        }
        let count: usize = extents.iter().product();
        if samples.len() != count {
            return Err(Error::input(format!(
                "grid of shape {extents:?} needs {count} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::input("grid samples must be finite"));
        }
        let grid = AnisoGridFunction { spatial_dim, spacing, extents, origin, support, samples };
        if support == TimeSupport::NonNegativeTime {
            if let Some(i) = (0..count).find(|&i| grid.coordinates(i)[d - 1] < 0.0 && grid.samples[i] != Complex64::new(0.0, 0.0)) {
                return Err(Error::input(format!(
                    "grid declares support in t >= 0 but has a nonzero sample at {:?}",
                    grid.coordinates(i)
                )));
            }
        }
        Ok(grid)
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(
        spatial_dim: usize,
        spacing: Vec<f64>,
        extents: Vec<usize>,
        origin: Vec<f64>,
        support: TimeSupport,
        f: impl Fn(&[f64]) -> Complex64,
    ) -> Result<Self> {
        let count: usize = extents.iter().product();
        let probe = AnisoGridFunction {
            spatial_dim,
            spacing: spacing.clone(),
            extents: extents.clone(),
            origin: origin.clone(),
            support,
            samples: Vec::new(),
        };
        if spacing.len() != extents.len() || origin.len() != extents.len() {
            return Err(Error::input("spacing, extents and origin must have the same length"));
        }
        let samples = (0..count).map(|i| f(&probe.coordinates(i))).collect();
        AnisoGridFunction::new(spatial_dim, spacing, extents, origin, support, samples)
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn support(&self) -> TimeSupport {
        self.support
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Multi-index of the sample at flat position `flat`.
    pub fn index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.extents.len()];
        for a in (0..self.extents.len()).rev() {
            idx[a] = flat % self.extents[a];
            flat /= self.extents[a];
        }
        idx
    }

    pub fn coordinates(&self, flat: usize) -> Vec<f64> {
        self.index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.origin[a] + i as f64 * self.spacing[a])
            .collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Parses the text grid format.
    ///
    /// ```text
    /// dims 1
    /// spacing 0.1 0.1
    /// extents 64 64
    /// origin -3.2 -3.2
    /// support t>=0
    /// data
    /// 0.0 0.0
    /// ...
    /// ```
    ///
    /// `origin` defaults to zeros and `support` to `unknown`. Each data line
    /// holds a real part and an optional imaginary part. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dims = None;
        let mut spacing = None;
        let mut extents = None;
        let mut origin = None;
        let mut support = TimeSupport::Unknown;
        let mut samples = Vec::new();
        let mut in_data = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::input(format!("grid line {}: {msg}", lineno + 1));
            let mut words = line.split_whitespace();
            if in_data {
                let nums: Vec<f64> = words
                    .map(|w| w.parse::<f64>().map_err(|_| at(format!("bad number `{w}`"))))
                    .collect::<Result<_>>()?;
                match nums.as_slice() {
                    [re] => samples.push(Complex64::new(*re, 0.0)),
                    [re, im] => samples.push(Complex64::new(*re, *im)),
                    _ => return Err(at("expected `re` or `re im`".into())),
                }
                continue;
            }
            let key = words.next().expect("non-empty line");
            let rest: Vec<&str> = words.collect();
            let floats = || -> Result<Vec<f64>> {
                rest.iter()
                    .map(|w| w.parse::<f64>().map_err(|_| at(format!("bad number `{w}`"))))
                    .collect()
            };
            match key {
                "dims" => {
                    let [w] = rest.as_slice() else {
                        return Err(at("`dims` takes one integer".into()));
                    };
                    dims = Some(w.parse::<usize>().map_err(|_| at(format!("bad dimension `{w}`")))?);
                }
                "spacing" => spacing = Some(floats()?),
                "origin" => origin = Some(floats()?),
                "extents" => {
                    extents = Some(
                        rest.iter()
                            .map(|w| w.parse::<usize>().map_err(|_| at(format!("bad extent `{w}`"))))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "support" => {
                    support = match rest.as_slice() {
                        ["t>=0"] => TimeSupport::NonNegativeTime,
                        ["unknown"] => TimeSupport::Unknown,
                        _ => return Err(at("`support` is `t>=0` or `unknown`".into())),
                    }
                }
                "data" => in_data = true,
                other => return Err(at(format!("unknown header `{other}`"))),
            }
        }
        let dims = dims.ok_or_else(|| Error::input("grid is missing `dims`"))?;
        let spacing = spacing.ok_or_else(|| Error::input("grid is missing `spacing`"))?;
        let extents = extents.ok_or_else(|| Error::input("grid is missing `extents`"))?;
        let origin = origin.unwrap_or_else(|| vec![0.0; dims + 1]);
        AnisoGridFunction::new(dims, spacing, extents, origin, support, samples)
    }

    /// Writes the text grid format; values are printed so that they parse
    /// back exactly.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "dims {}", self.spatial_dim);
        let _ = writeln!(out, "spacing {}", join(&self.spacing));
        let extents: Vec<String> = self.extents.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "extents {}", extents.join(" "));
        let _ = writeln!(out, "origin {}", join(&self.origin));
        let support = match self.support {
            TimeSupport::NonNegativeTime => "t>=0",
            TimeSupport::Unknown => "unknown",
        };
        let _ = writeln!(out, "support {support}");
        out.push_str("data\n");
        for s in &self.samples {
            let _ = writeln!(out, "{:?} {:?}", s.re, s.im);
        }
        out
    }
}
