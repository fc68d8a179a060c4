use crate::real::Real;

/// Running trapezoid approximation of `∫₀ᵗ∫|u|¹⁰ dx ds`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct L10Accumulator<T> {
    total: T,
    last: Option<(T, T)>,
    history: Vec<(T, T)>,
}

impl<T: Real> L10Accumulator<T> {
    pub fn new() -> Self {
        Self { total: T::zero(), last: None, history: Vec::new() }
    }

    /// Adds the sample `∫|u(t)|¹⁰ dx`; times must be nondecreasing.
    pub fn push(&mut self, t: T, integrand: T) {
        if let Some((t0, f0)) = self.last {
            self.total = self.total + (t - t0) * (f0 + integrand) * T::lit(0.5);
        }
        self.last = Some((t, integrand));
        self.history.push((t, self.total));
    }

    pub fn total(&self) -> T {
        self.total
    }

    /// `(t, accumulated value)` after each sample.
    pub fn history(&self) -> &[(T, T)] {
        &self.history
    }

    /// Accumulated value at time `t`, linearly interpolated between samples.
    pub fn value_at(&self, t: T) -> T {
        let h = &self.history;
        match h.iter().position(|&(s, _)| s >= t) {
            None => self.total,
            Some(0) => h[0].1,
            Some(k) => {
                let (t0, a0) = h[k - 1];
                let (t1, a1) = h[k];
                if t1 == t0 {
                    a1
                } else {
                    a0 + (a1 - a0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }

    /// Share of the total gained over the second half of the run,
    /// `(A(T) − A(T/2)) / A(T)`; zero for an empty integral.
    pub fn late_growth(&self) -> T {
        let Some(&(t_end, _)) = self.history.last() else {
            return T::zero();
        };
        if self.total == T::zero() {
            return T::zero();
        }
        (self.total - self.value_at(t_end * T::lit(0.5))) / self.total
    }

    /// True when the late growth is below `limit`.
    pub fn saturated(&self, limit: T) -> bool {
        self.late_growth() < limit
    }
}
