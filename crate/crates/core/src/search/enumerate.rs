use num_integer::Integer;

/// Primitive integer vectors with `‖x‖∞ ≤ N` and first nonzero entry
/// positive, one per `±x` class.
///
/// Order: by the position `k` of the first nonzero entry, then its value
/// `x_k = 1..=N`, then the remaining entries lexicographically from `−N`.
#[derive(Debug, Clone)]
pub struct PrimitiveVectors {
    n: i64,
    x: Vec<i64>,
    lead: usize,
    done: bool,
}

/// Iterator over the representatives of primitive vectors in the box.
pub fn enumerate_primitive(d: usize, n: i64) -> PrimitiveVectors {
    assert!(n >= 1, "bound must be at least 1");
    let mut x = vec![-n; d];
    if d > 0 {
        x[0] = 1;
    }
    PrimitiveVectors { n, x, lead: 0, done: d == 0 }
}

impl PrimitiveVectors {
    fn advance(&mut self) {
        let d = self.x.len();
        let mut i = d;
        while i > self.lead + 1 {
            i -= 1;
            if self.x[i] < self.n {
                self.x[i] += 1;
                return;
            }
            self.x[i] = -self.n;
        }
        if self.x[self.lead] < self.n {
            self.x[self.lead] += 1;
            return;
        }
        self.x[self.lead] = 0;
        self.lead += 1;
        if self.lead == d {
            self.done = true;
            return;
        }
        self.x[self.lead] = 1;
    }
}

impl Iterator for PrimitiveVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while !self.done {
            let out = self.x.clone();
            self.advance();
            if out.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1 {
                return Some(out);
            }
        }
        None
    }
}

/// A slab of the enumeration: every vector whose first nonzero entry is at
/// `lead` and equals `value`. Slabs partition the box and are the unit of
/// sharding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slab {
    pub lead: usize,
    pub value: i64,
}

pub(crate) fn slabs(d: usize, n: i64) -> Vec<Slab> {
    (0..d).flat_map(|lead| (1..=n).map(move |value| Slab { lead, value })).collect()
}
