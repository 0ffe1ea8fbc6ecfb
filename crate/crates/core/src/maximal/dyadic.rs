use serde::{Serialize, Serializer};

/// Shift of a dyadic grid: 0 or 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Beta {
    Zero,
    Third,
}

impl Beta {
    /// 3β as an integer.
    fn b3(self) -> i64 {
        match self {
            Beta::Zero => 0,
            Beta::Third => 1,
        }
    }

    pub fn value(self) -> f64 {
        self.b3() as f64 / 3.0
    }

    pub fn parse(s: &str) -> Option<Beta> {
        match s.trim() {
            "0" => Some(Beta::Zero),
            "1/3" | "0.3333333333333333" => Some(Beta::Third),
            _ => None,
        }
    }

    pub const BOTH: [Beta; 2] = [Beta::Zero, Beta::Third];
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Beta::Zero => "0",
            Beta::Third => "1/3",
        })
    }
}

fn sign(j: i32) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// 2^{−j}([0,1) + k + (−1)^j β). Endpoints are (3k + (−1)^j·3β)/(3·2^j),
/// so parent/child relations are computed in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicInterval {
    pub beta: Beta,
    pub j: i32,
    pub k: i64,
}

impl DyadicInterval {
    pub fn new(beta: Beta, j: i32, k: i64) -> Self {
        DyadicInterval { beta, j, k }
    }

    /// The interval of level j in grid β containing x.
    pub fn containing(x: f64, beta: Beta, j: i32) -> Self {
        let scaled = x * 2f64.powi(j);
        let shift = sign(j) as f64 * beta.value();
        let mut k = (scaled - shift).floor() as i64;
        // guard the rounding of the 1/3 shift at endpoints
        let probe = DyadicInterval { beta, j, k };
        if x < probe.left() {
            k -= 1;
        } else if x >= probe.right() {
            k += 1;
        }
        DyadicInterval { beta, j, k }
    }

    pub fn len(&self) -> f64 {
        2f64.powi(-self.j)
    }

    pub fn left(&self) -> f64 {
        (3 * self.k + sign(self.j) * self.beta.b3()) as f64 / 3.0 * 2f64.powi(-self.j)
    }

    pub fn right(&self) -> f64 {
        (3 * (self.k + 1) + sign(self.j) * self.beta.b3()) as f64 / 3.0 * 2f64.powi(-self.j)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left() <= x && x < self.right()
    }

    pub fn parent(&self) -> Self {
        let m = self.k + sign(self.j) * self.beta.b3();
        DyadicInterval { beta: self.beta, j: self.j - 1, k: m.div_euclid(2) }
    }

    pub fn children(&self) -> [Self; 2] {
        let k0 = 2 * self.k + sign(self.j) * self.beta.b3();
        [
            DyadicInterval { beta: self.beta, j: self.j + 1, k: k0 },
            DyadicInterval { beta: self.beta, j: self.j + 1, k: k0 + 1 },
        ]
    }
}

/// Smallest interval across both grids containing [a, b), with |J|/|I|.
/// Ties prefer β = 0, then the smaller k.
pub fn dyadic_cover(a: f64, b: f64) -> (DyadicInterval, f64) {
    assert!(a < b, "dyadic_cover needs a < b");
    let len = b - a;
    let mut best: Option<DyadicInterval> = None;
    for beta in Beta::BOTH {
        let mut j = (-len.log2()).floor() as i32;
        while 2f64.powi(-j) < len {
            j -= 1;
        }
        loop {
            let c = DyadicInterval::containing(a, beta, j);
            if b <= c.right() {
                let better = match best {
                    None => true,
                    Some(o) => c.j > o.j || (c.j == o.j && (c.beta, c.k) < (o.beta, o.k)),
                };
                if better {
                    best = Some(c);
                }
                break;
            }
            j -= 1;
            if j < -1100 {
                break;
            }
        }
    }
    let j = best.expect("some grid always covers");
    (j, j.len() / len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_examples() {
        let (j, r) = dyadic_cover(0.0, 1.0);
        assert_eq!((j, r), (DyadicInterval::new(Beta::Zero, 0, 0), 1.0));
        let (j, r) = dyadic_cover(0.4, 0.6);
        assert_eq!(j.beta, Beta::Third);
        assert_eq!(j.j, 1);
        assert!((j.left() - 1.0 / 3.0).abs() < 1e-15 && (j.right() - 5.0 / 6.0).abs() < 1e-15);
        assert!((r - 2.5).abs() < 1e-12);
    }

    #[test]
    fn nesting() {
        for beta in Beta::BOTH {
            for j in -5..6 {
                for k in -20..20 {
                    let i = DyadicInterval::new(beta, j, k);
                    let p = i.parent();
                    assert!(p.left() <= i.left() && i.right() <= p.right() + 1e-12);
                    let [c0, c1] = p.children();
                    assert!(c0 == i || c1 == i);
                    assert_eq!(c0.right(), c1.left());
                    assert_eq!(c0.left(), p.left());
                    assert!((c1.right() - p.right()).abs() < 1e-12 * p.len());
                }
            }
        }
    }
}
