//! Log-space least-squares fits for the two empirical laws reported on
//! sociograms: a degree power law `y = a x^-beta` and an exponential
//! betweenness-PageRank relation `y = k e^(alpha x)`.
//!
//! Both are ordinary least squares after a log transform, and R² is
//! measured in that transformed space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Undefined};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = a * x^(-beta)`, fitted on `(ln x, ln y)`.
    PowerLaw,
    /// `y = a * x^(-beta * x)`, fitted on `(x ln x, ln y)`.
    StretchedPowerLaw,
    /// `y = k * e^(alpha * x)`, fitted on `(x, ln y)`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    /// `a` for the power laws, `k` for the exponential.
    pub scale: f64,
    /// `beta` for the power laws, `alpha` for the exponential.
    pub exponent: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub log_space: bool,
    /// Set when the transformed target has zero variance; R² is then 1 by
    /// convention.
    pub flat: bool,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::PowerLaw => self.scale * x.powf(-self.exponent),
            FitModel::StretchedPowerLaw => self.scale * x.powf(-self.exponent * x),
            FitModel::Exponential => self.scale * (self.exponent * x).exp(),
        }
    }
}

struct Line {
    intercept: f64,
    slope: f64,
    r_squared: f64,
    flat: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<Line> {
    let mx = mean(xs);
    let my = mean(ys);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let scale = xs.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    if sxx <= f64::EPSILON * scale * scale * xs.len() as f64 {
        return Err(Error::SingularFit("abscissa has no spread".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let predicted: Vec<f64> = xs.iter().map(|x| intercept + slope * x).collect();
    let (r_squared, flat) = match r_squared(ys, &predicted) {
        Ok(r) => (r, false),
        Err(Error::Undefined(Undefined::ZeroVariance)) => (1.0, true),
        Err(e) => return Err(e),
    };
    Ok(Line {
        intercept,
        slope,
        r_squared,
        flat,
    })
}

fn check_len(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::Contract(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Contract("non-finite coordinate".into()));
    }
    Ok(())
}

/// Fits `y = a x^-beta` by OLS on `ln y = ln a - beta ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    check_len(points)?;
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Contract(
            "power-law fit needs strictly positive coordinates".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::PowerLaw,
        scale: line.intercept.exp(),
        exponent: -line.slope,
        r_squared: line.r_squared,
        n_points: points.len(),
        log_space: true,
        flat: line.flat,
    })
}

/// Fits `y = a x^(-beta x)` by OLS on `ln y = ln a - beta (x ln x)`.
pub fn fit_stretched_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    check_len(points)?;
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Contract(
            "power-law fit needs strictly positive coordinates".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0 * p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::StretchedPowerLaw,
        scale: line.intercept.exp(),
        exponent: -line.slope,
        r_squared: line.r_squared,
        n_points: points.len(),
        log_space: true,
        flat: line.flat,
    })
}

/// Fits `y = k e^(alpha x)` by OLS on `ln y = ln k + alpha x`.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<FitResult> {
    check_len(points)?;
    if points.iter().any(|&(_, y)| y <= 0.0) {
        return Err(Error::Contract(
            "exponential fit needs strictly positive y".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::Exponential,
        scale: line.intercept.exp(),
        exponent: line.slope,
        r_squared: line.r_squared,
        n_points: points.len(),
        log_space: true,
        flat: line.flat,
    })
}

pub fn fit(model: FitModel, points: &[(f64, f64)]) -> Result<FitResult> {
    match model {
        FitModel::PowerLaw => fit_power_law(points),
        FitModel::StretchedPowerLaw => fit_stretched_power_law(points),
        FitModel::Exponential => fit_exponential(points),
    }
}

/// `1 - SS_res / SS_tot`.
pub fn r_squared(observed: &[f64], predicted: &[f64]) -> Result<f64> {
    if observed.len() != predicted.len() {
        return Err(Error::Contract(format!(
            "length mismatch: {} observed vs {} predicted",
            observed.len(),
            predicted.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::Contract("need at least 2 observations".into()));
    }
    let m = mean(observed);
    let ss_tot: f64 = observed.iter().map(|y| (y - m).powi(2)).sum();
    let scale = observed
        .iter()
        .map(|y| y.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    if ss_tot <= (f64::EPSILON * scale).powi(2) * observed.len() as f64 {
        return Err(Undefined::ZeroVariance.into());
    }
    let ss_res: f64 = observed
        .iter()
        .zip(predicted)
        .map(|(y, p)| (y - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}
