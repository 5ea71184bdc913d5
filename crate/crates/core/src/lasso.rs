//! Eventually periodic sequences `prefix · cycle^∞`.

/// An eventually periodic sequence in canonical form: the cycle is
/// primitive and the prefix is as short as possible. Two lassos are equal
/// exactly when they denote the same infinite sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone + Eq> Lasso<T> {
    /// Returns `None` when `cycle` is empty.
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Option<Self> {
        if cycle.is_empty() {
            return None;
        }
        let mut l = Self { prefix, cycle };
        l.canonicalize();
        Some(l)
    }

    fn canonicalize(&mut self) {
        let n = self.cycle.len();
        if let Some(p) = (1..n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.cycle[i] == self.cycle[i - p])) {
            self.cycle.truncate(p);
        }
        while self.prefix.last().is_some() && self.prefix.last() == self.cycle.last() {
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// Element at 0-based position `i` of the infinite sequence.
    pub fn at(&self, i: usize) -> &T {
        match self.prefix.get(i) {
            Some(x) => x,
            None => &self.cycle[(i - self.prefix.len()) % self.cycle.len()],
        }
    }

    /// The first `n` elements.
    pub fn unroll(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    pub fn map<U: Clone + Eq>(&self, mut f: impl FnMut(&T) -> U) -> Lasso<U> {
        Lasso::new(
            self.prefix.iter().map(&mut f).collect(),
            self.cycle.iter().map(&mut f).collect(),
        )
        .expect("cycle stays nonempty")
    }
}
