//! Numeric sampling at random integer points, for pointwise claims the
//! symbolic layer can only decide generically.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;
use rand::Rng;

use crate::error::Error;
use crate::scalar::{Rational, ScalarExpr};

pub const DEFAULT_SAMPLES: usize = 32;
pub const RANGE: i64 = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleReport {
    pub samples: usize,
    /// Points discarded because some expression had a pole there.
    pub rejected: usize,
    /// First point where every expression vanished.
    pub common_zero: Option<Vec<Rational>>,
    /// Sign counts `[negative, zero, positive]` of the first expression.
    pub signs: [usize; 3],
}

/// Evaluates `exprs` at `k` points of `[−10, 10]^nvars`, redrawing at poles.
pub fn sample<R: Rng + ?Sized>(exprs: &[ScalarExpr], nvars: usize, k: usize, rng: &mut R) -> SampleReport {
    let mut report = SampleReport::default();
    let budget = k.saturating_mul(64).max(64);
    let mut attempts = 0;
    while report.samples < k && attempts < budget {
        attempts += 1;
        let point: Vec<Rational> =
            (0..nvars).map(|_| Rational::from_integer(rng.gen_range(-RANGE..=RANGE).into())).collect();
        let values = match exprs.iter().map(|e| e.eval(&point)).collect::<Result<Vec<_>, Error>>() {
            Ok(v) => v,
            Err(_) => {
                report.rejected += 1;
                continue;
            }
        };
        report.samples += 1;
        if let Some(first) = values.first() {
            let slot = match first.cmp(&Rational::zero()) {
                Ordering::Less => 0,
                Ordering::Equal => 1,
                Ordering::Greater => 2,
            };
            report.signs[slot] += 1;
        }
        if report.common_zero.is_none() && values.iter().all(Zero::is_zero) {
            report.common_zero = Some(point);
        }
    }
    report
}

impl SampleReport {
    pub fn found_zero(&self) -> bool {
        self.common_zero.is_some()
    }

    pub fn sign_changes(&self) -> bool {
        self.signs[0] > 0 && self.signs[2] > 0
    }
}
