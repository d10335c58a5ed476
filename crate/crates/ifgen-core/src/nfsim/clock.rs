//! An injectable clock so that time-dependent behavior (freshness guards,
//! timestamp enrichment, uptime queries) is reproducible in tests and
//! benchmarks.

use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

/// A clock handle shared between an NF's behaviors and its test harness.
#[derive(Debug, Clone)]
pub struct SimClock {
    inner: Arc<ClockInner>,
}

#[derive(Debug)]
enum ClockInner {
    /// Reads the real system clock.
    Real,
    /// Reads a manually advanced value, in milliseconds since the epoch.
    Manual(AtomicI64),
}

impl SimClock {
    /// A clock following real wall-clock time.
    pub fn real() -> Self {
        SimClock {
            inner: Arc::new(ClockInner::Real),
        }
    }

    /// A manual clock starting at the given epoch-milliseconds value.
    pub fn manual(start_ms: i64) -> Self {
        SimClock {
            inner: Arc::new(ClockInner::Manual(AtomicI64::new(start_ms))),
        }
    }

    /// Current time in milliseconds since the Unix epoch.
    pub fn now_ms(&self) -> i64 {
        match &*self.inner {
            ClockInner::Real => SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .expect("system clock after 1970")
                .as_millis() as i64,
            ClockInner::Manual(ms) => ms.load(Ordering::SeqCst),
        }
    }

    /// Advance a manual clock. Panics on a real clock — tests that advance
    /// time must construct the clock themselves, so this is a harness bug.
    pub fn advance_ms(&self, delta_ms: i64) {
        assert!(delta_ms >= 0, "clock only moves forward");
        match &*self.inner {
            ClockInner::Real => panic!("cannot advance a real clock"),
            ClockInner::Manual(ms) => {
                ms.fetch_add(delta_ms, Ordering::SeqCst);
            }
        }
    }

    /// Jump a manual clock to an absolute value; used when replaying a
    /// recorded event log at the original timestamps.
    pub fn set_ms(&self, now_ms: i64) {
        match &*self.inner {
            ClockInner::Real => panic!("cannot set a real clock"),
            ClockInner::Manual(ms) => ms.store(now_ms, Ordering::SeqCst),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manual_clock_is_deterministic() {
        let clock = SimClock::manual(1_000);
        assert_eq!(clock.now_ms(), 1_000);
        clock.advance_ms(250);
        assert_eq!(clock.now_ms(), 1_250);
        // Clones observe the same underlying time.
        let other = clock.clone();
        other.advance_ms(50);
        assert_eq!(clock.now_ms(), 1_300);
    }

    #[test]
    fn real_clock_moves_forward() {
        let clock = SimClock::real();
        let a = clock.now_ms();
        let b = clock.now_ms();
        assert!(b >= a);
        assert!(a > 1_600_000_000_000, "expected a post-2020 wall clock");
    }
}
