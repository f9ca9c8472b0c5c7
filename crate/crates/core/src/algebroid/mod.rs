//! Trivialized Lie algebroids over a polynomial chart.

pub mod forms;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::Report;

pub use forms::{Mask, PolyMatrix, VField, VForm};

/// A section `α = α^i e_i` of the algebroid (or of any trivial bundle).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section(pub Vec<Poly>);

impl Section {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        Section(vec![Poly::zero(nvars); rank])
    }

    pub fn basis(nvars: usize, rank: usize, i: usize) -> Self {
        let mut s = Self::zero(nvars, rank);
        s.0[i] = Poly::one(nvars);
        s
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// If this is exactly a frame element `e_i`, return `i`.
    pub fn as_basis(&self) -> Option<usize> {
        let mut found = None;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if found.is_some() || c.as_constant() != Some(crate::poly::int(1)) {
                return None;
            }
            found = Some(i);
        }
        found
    }

    pub fn add(&self, other: &Section) -> Section {
        assert_eq!(self.rank(), other.rank(), "section rank mismatch");
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Section) -> Section {
        assert_eq!(self.rank(), other.rank(), "section rank mismatch");
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale_poly(&self, f: &Poly) -> Section {
        Section(self.0.iter().map(|a| a * f).collect())
    }
}

/// Lie algebroid `A → Q^n` of rank `r` presented in a global frame `e_1..e_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidPresentation {
    n: usize,
    r: usize,
    /// `c^k_{ij}` at `(i*r + j)*r + k`
    structure: Vec<Poly>,
    /// `ρ^a_i` at `i*n + a`
    anchor: Vec<Poly>,
}

impl AlgebroidPresentation {
    /// Build from the full structure table `c[i][j][k]` and anchor `rho[i][a]`.
    /// The table must be antisymmetric in `(i, j)`.
    pub fn new(n: usize, r: usize, structure: Vec<Poly>, anchor: Vec<Poly>) -> Result<Self> {
        if structure.len() != r * r * r {
            return Err(Error::structural("structure table has wrong size"));
        }
        if anchor.len() != r * n {
            return Err(Error::structural("anchor table has wrong size"));
        }
        if structure.iter().chain(&anchor).any(|p| p.nvars() != n) {
            return Err(Error::structural("structure data uses a different chart"));
        }
        let alg = AlgebroidPresentation {
            n,
            r,
            structure,
            anchor,
        };
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let s = alg.c(i, j, k) + alg.c(j, i, k);
                    if !s.is_zero() {
                        return Err(Error::structural(format!(
                            "structure table not antisymmetric at ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Build from entries `c^k_{ij}` with `i < j`; the rest is filled in by antisymmetry.
    pub fn from_upper(
        n: usize,
        r: usize,
        upper: impl IntoIterator<Item = ((usize, usize, usize), Poly)>,
        anchor: Vec<Poly>,
    ) -> Result<Self> {
        let mut structure = vec![Poly::zero(n); r * r * r];
        for ((i, j, k), p) in upper {
            if i >= r || j >= r || k >= r {
                return Err(Error::structural(format!(
                    "structure index ({}, {}, {}) out of range for rank {r}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if i >= j {
                return Err(Error::structural(format!(
                    "structure entry ({}, {}, {}) must have i < j",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            structure[(i * r + j) * r + k] = p.clone();
            structure[(j * r + i) * r + k] = -p;
        }
        Self::new(n, r, structure, anchor)
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `c^k_{ij}`, 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.structure[(i * self.r + j) * self.r + k]
    }

    /// `ρ^a_i`, 0-based.
    pub fn rho(&self, i: usize, a: usize) -> &Poly {
        &self.anchor[i * self.n + a]
    }

    pub fn zero_section(&self) -> Section {
        Section::zero(self.n, self.r)
    }

    pub fn basis(&self, i: usize) -> Section {
        Section::basis(self.n, self.r, i)
    }

    pub fn zero_poly(&self) -> Poly {
        Poly::zero(self.n)
    }

    /// `[e_i, e_j]`
    pub fn basis_bracket(&self, i: usize, j: usize) -> Section {
        Section((0..self.r).map(|k| self.c(i, j, k).clone()).collect())
    }

    pub fn anchor_basis(&self, i: usize) -> VField {
        VField((0..self.n).map(|a| self.rho(i, a).clone()).collect())
    }

    fn check_section(&self, s: &Section) -> Result<()> {
        if s.rank() != self.r {
            return Err(Error::structural(format!(
                "section has {} components, algebroid rank is {}",
                s.rank(),
                self.r
            )));
        }
        Ok(())
    }

    pub fn anchor(&self, s: &Section) -> Result<VField> {
        self.check_section(s)?;
        let mut x = VField::zero(self.n);
        for (i, si) in s.0.iter().enumerate() {
            if si.is_zero() {
                continue;
            }
            for a in 0..self.n {
                let r = self.rho(i, a);
                if !r.is_zero() {
                    x.0[a].add_assign_ref(&(si * r));
                }
            }
        }
        Ok(x)
    }

    /// `[α,β]^k = α^i β^j c^k_{ij} + ρ(α)(β^k) − ρ(β)(α^k)`
    pub fn bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        self.check_section(a)?;
        self.check_section(b)?;
        let ra = self.anchor(a)?;
        let rb = self.anchor(b)?;
        let mut out: Vec<Poly> = (0..self.r)
            .map(|k| &ra.apply(&b.0[k]) - &rb.apply(&a.0[k]))
            .collect();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() || i == j {
                    continue;
                }
                let f = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        o.add_assign_ref(&(&f * c));
                    }
                }
            }
        }
        Ok(Section(out))
    }

    pub fn jacobiator(&self, a: &Section, b: &Section, c: &Section) -> Result<Section> {
        let t1 = self.bracket(&self.bracket(a, b)?, c)?;
        let t2 = self.bracket(&self.bracket(b, c)?, a)?;
        let t3 = self.bracket(&self.bracket(c, a)?, b)?;
        Ok(t1.add(&t2).add(&t3))
    }

    /// Antisymmetry, Jacobi on basis triples, anchor morphism on basis pairs.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new();
        let mut bad = Vec::new();
        for i in 0..self.r {
            for j in 0..self.r {
                if (0..self.r).any(|k| !(self.c(i, j, k) + self.c(j, i, k)).is_zero()) {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
        rep.push("antisymmetry", bad.is_empty(), bad.join(" "));

        let mut bad = Vec::new();
        for i in 0..self.r {
            for j in i + 1..self.r {
                for k in j + 1..self.r {
                    let jac = self
                        .jacobiator(&self.basis(i), &self.basis(j), &self.basis(k))
                        .expect("basis sections have the right rank");
                    if !jac.is_zero() {
                        bad.push(format!("(e{},e{},e{})", i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!("Jacobi identity fails on {}", bad.join(", "))
        };
        rep.push("jacobi", bad.is_empty(), detail);

        let mut bad = Vec::new();
        for i in 0..self.r {
            for j in i + 1..self.r {
                let lhs = self
                    .anchor(&self.basis_bracket(i, j))
                    .expect("bracket has the right rank");
                let rhs = self.anchor_basis(i).bracket(&self.anchor_basis(j));
                if lhs != rhs {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!("anchor is not a bracket morphism on {}", bad.join(", "))
        };
        rep.push("anchor_morphism", bad.is_empty(), detail);
        rep
    }

    /// The tangent algebroid `TQ^n` with frame `∂_1..∂_n`.
    pub fn tangent(n: usize) -> Self {
        let mut anchor = vec![Poly::zero(n); n * n];
        for a in 0..n {
            anchor[a * n + a] = Poly::one(n);
        }
        Self::new(n, n, vec![Poly::zero(n); n * n * n], anchor).expect("tangent algebroid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn so3() -> AlgebroidPresentation {
        let c = |v| Poly::constant(0, int(v));
        AlgebroidPresentation::from_upper(
            0,
            3,
            vec![((0, 1, 2), c(1)), ((1, 2, 0), c(1)), ((0, 2, 1), c(-1))],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn so3_bracket_readoff() {
        let a = so3();
        assert_eq!(a.bracket(&a.basis(0), &a.basis(1)).unwrap(), a.basis(2));
        assert!(a.validate().all_passed());
    }

    #[test]
    fn tampered_so3_fails_jacobi() {
        let c = |v| Poly::constant(0, int(v));
        let a = AlgebroidPresentation::from_upper(
            0,
            3,
            vec![
                ((0, 1, 2), c(1)),
                ((0, 1, 0), c(1)),
                ((1, 2, 0), c(1)),
                ((0, 2, 1), c(-1)),
            ],
            vec![],
        )
        .unwrap();
        let rep = a.validate();
        assert!(!rep.passed("jacobi"));
        assert!(rep.get("jacobi").unwrap().detail.contains("(e1,e2,e3)"));
    }

    #[test]
    fn rank_mismatch_is_structural() {
        let a = so3();
        let bad = Section(vec![Poly::zero(0); 2]);
        assert!(matches!(a.bracket(&bad, &a.basis(0)), Err(Error::Structural(_))));
    }
}
