//! Combinatorial maps: a rotation `sigma` (next dart counterclockwise around
//! the same vertex) and a fixed-point-free involution `alpha` (the other half
//! of the same edge). Faces are the orbits of `sigma ∘ alpha`.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
}

fn orbits(n: usize, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            orbit.push(d);
            d = step(d);
        }
        out.push(orbit);
    }
    out
}

impl PlanarMap {
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>) -> Self {
        assert_eq!(sigma.len(), alpha.len());
        debug_assert!(is_permutation(&sigma), "rotation is not a permutation");
        debug_assert!(alpha.iter().enumerate().all(|(d, &a)| a != d && alpha[a] == d));
        PlanarMap { sigma, alpha }
    }

    pub fn darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        orbits(self.darts(), |d| self.sigma[d])
    }

    pub fn edges(&self) -> Vec<Vec<usize>> {
        orbits(self.darts(), |d| self.alpha[d])
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        orbits(self.darts(), |d| self.sigma[self.alpha[d]])
    }

    /// Connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let n = self.darts();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for d in 0..n {
            for e in [self.sigma[d], self.alpha[d]] {
                let (a, b) = (find(&mut parent, d), find(&mut parent, e));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..n).filter(|&d| find(&mut parent, d) == d).count()
    }

    /// `V - E + F = 2` on every component. On failure returns
    /// `(faces found, faces required)`.
    pub fn check_sphere(&self) -> Result<(), (usize, usize)> {
        if self.darts() == 0 {
            return Ok(());
        }
        let v = self.vertices().len();
        let e = self.edges().len();
        let f = self.faces().len();
        let expected = 2 * self.components() + e - v;
        if f == expected {
            Ok(())
        } else {
            Err((f, expected))
        }
    }

    /// The same map on the oppositely oriented sphere.
    pub fn mirror(&self) -> Self {
        let mut inv = vec![0; self.darts()];
        for (d, &s) in self.sigma.iter().enumerate() {
            inv[s] = d;
        }
        PlanarMap { sigma: inv, alpha: self.alpha.clone() }
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}
