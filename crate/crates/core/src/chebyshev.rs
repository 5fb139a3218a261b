//! Chebyshev polynomials of the first and second kind by three-term
//! recurrence.
//!
//! The exact few-qubit solutions only ever need the pair `(T_n(x), U_{n-1}(x))`
//! for `|x| <= 1/2`, where the recurrence is stable. [`Chebyshev`] walks the
//! pair forward one degree at a time so that long time series cost O(1) per
//! step.

/// `(T_n(x), U_{n-1}(x))`, with `U_{-1} = 0`.
pub fn chebyshev_pair(x: f64, n: u64) -> (f64, f64) {
    let mut walker = Chebyshev::new(x);
    for _ in 0..n {
        walker.advance();
    }
    (walker.t(), walker.u_prev())
}

/// Incremental evaluator of `T_n(x)` and `U_{n-1}(x)`.
#[derive(Debug, Clone, Copy)]
pub struct Chebyshev {
    x: f64,
    n: u64,
    t_prev: f64, // T_{n-1}
    t: f64,      // T_n
    u_prev2: f64, // U_{n-2}
    u_prev: f64, // U_{n-1}
}

impl Chebyshev {
    /// Starts at degree 0: `T_0 = 1`, `U_{-1} = 0`.
    pub fn new(x: f64) -> Self {
        // T_{-1} = T_1 = x keeps the recurrence uniform; U_{-2} = -1.
        Self { x, n: 0, t_prev: x, t: 1.0, u_prev2: -1.0, u_prev: 0.0 }
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    /// `T_n(x)` at the current degree.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `U_{n-1}(x)` at the current degree.
    pub fn u_prev(&self) -> f64 {
        self.u_prev
    }

    /// `U_n(x)` without advancing.
    pub fn u(&self) -> f64 {
        2.0 * self.x * self.u_prev - self.u_prev2
    }

    pub fn advance(&mut self) {
        let t_next = 2.0 * self.x * self.t - self.t_prev;
        let u_next = self.u();
        self.t_prev = self.t;
        self.t = t_next;
        self.u_prev2 = self.u_prev;
        self.u_prev = u_next;
        self.n += 1;
    }
}
