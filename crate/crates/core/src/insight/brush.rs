use crate::error::Result;
use crate::geometry::{Pixel, Point};
use crate::scalar::Scalar;

use super::PaintField;

/// Fixed-size round brush with linear falloff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrushConfig<T> {
    /// Pixels whose center is at least this far from the stroke center are untouched.
    pub radius: T,
    /// Brightness added per tick at the stroke center.
    pub increment: T,
}

impl<T: Scalar> Default for BrushConfig<T> {
    fn default() -> Self {
        Self {
            radius: T::lit(12.0),
            increment: T::lit(0.08),
        }
    }
}

impl<T: Scalar> PaintField<T> {
    /// Holds the brush at `center` for `ticks` ticks. Each pixel within the
    /// radius gains `ticks * increment * (1 - d / radius)`, clamped to 1.
    pub fn apply_brush(&mut self, center: Point<T>, ticks: u32, brush: &BrushConfig<T>) -> Result<()> {
        let bounds = crate::scene::GridMap {
            width: self.width(),
            height: self.height(),
            resolution: T::one(),
        };
        bounds.check_bounds(&center)?;
        if ticks == 0 {
            return Ok(());
        }
        let r = brush.radius;
        let lo = |c: T| (c - r).floor().max(T::zero()).to_f64_lossy() as u32;
        let hi = |c: T, n: u32| ((c + r).ceil().to_f64_lossy() as u32).min(n.saturating_sub(1));
        let gain = T::lit(ticks as f64) * brush.increment;
        for j in lo(center.y)..=hi(center.y, self.height()) {
            for i in lo(center.x)..=hi(center.x, self.width()) {
                let px = Pixel::new(i, j);
                let d = px.center().distance(&center);
                let falloff = T::one() - d / r;
                if falloff <= T::zero() {
                    continue;
                }
                let b = self.entry_mut(px);
                *b = (*b + gain * falloff).min(T::one());
            }
        }
        Ok(())
    }
}

/// Functional form of [`PaintField::apply_brush`] with the default brush.
pub fn apply_brush<T: Scalar>(field: &PaintField<T>, center: Point<T>, ticks: u32) -> Result<PaintField<T>> {
    let mut out = field.clone();
    out.apply_brush(center, ticks, &BrushConfig::default())?;
    Ok(out)
}
