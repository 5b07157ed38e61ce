//! Enumeration of rational points of projective space.

/// Iterator over `P^{n-1}(F_p)`, each point normalized so that its first
/// nonzero coordinate is 1. Yields `(p^n - 1)/(p - 1)` points.
pub struct ProjectivePoints {
    p: u64,
    cur: Vec<u64>,
    lead: usize,
    done: bool,
}

impl ProjectivePoints {
    pub fn new(n: usize, p: u64) -> Self {
        assert!(n >= 1);
        let mut cur = vec![0; n];
        cur[0] = 1;
        ProjectivePoints {
            p,
            cur,
            lead: 0,
            done: false,
        }
    }

    pub fn count(n: usize, p: u64) -> u128 {
        ((p as u128).pow(n as u32) - 1) / (p as u128 - 1)
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        // advance the free coordinates after the leading 1
        let n = self.cur.len();
        let mut i = n;
        loop {
            if i == self.lead + 1 {
                // free part exhausted: move the leading 1 right
                self.lead += 1;
                if self.lead == n {
                    self.done = true;
                } else {
                    self.cur.iter_mut().for_each(|x| *x = 0);
                    self.cur[self.lead] = 1;
                }
                break;
            }
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] < self.p {
                break;
            }
            self.cur[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match() {
        assert_eq!(ProjectivePoints::new(3, 5).count(), 31);
        assert_eq!(ProjectivePoints::new(1, 7).count(), 1);
        assert_eq!(ProjectivePoints::count(4, 5), 156);
        assert_eq!(ProjectivePoints::new(4, 5).count(), 156);
    }
}
