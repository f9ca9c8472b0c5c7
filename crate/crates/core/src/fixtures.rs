//! Worked examples and seeded random data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::algebroid::forms::masks_of_degree;
use crate::algebroid::{AlgebroidPresentation, Section, VField, VForm};
use crate::connections::{multisets, unit, LinearConnection, SymForm};
use crate::error::{Error, Result};
use crate::ideals::{
    build_coupled, connection_from_entries, Coupled, CouplingTriple, FibreBracket, IMConnection,
    IdealBundle,
};
use crate::poly::{int, Monomial, Poly};
use crate::weil::{delta, WeilCochain};

pub const FIXTURE_NAMES: [&str; 4] = [
    "F0_so3",
    "F1_abelian_2d",
    "F2_semisimple_2d",
    "F3_foliation_4d",
];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub variables: Vec<String>,
    pub coupled: Coupled,
}

/// so(3): `[u1,u2] = u3`, `[u2,u3] = u1`, `[u3,u1] = u2`.
pub fn so3(n: usize) -> FibreBracket {
    let one = || Poly::one(n);
    FibreBracket::from_upper(
        n,
        3,
        [
            ((0, 1, 2), one()),
            ((1, 2, 0), one()),
            ((0, 2, 1), -one()),
        ],
    )
    .expect("so(3) table")
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn p(src: &str, vars: &[String]) -> Poly {
    Poly::parse(src, vars).expect("fixture polynomial")
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (variables, coupled) = match name {
        "F0_so3" => {
            let b = AlgebroidPresentation::new(0, 0, vec![], vec![])?;
            let conn = LinearConnection::trivial(0, 3);
            let coupled = build_coupled(&b, &so3(0), &conn, &VForm::zero(0, 3, 2))?;
            (Vec::new(), coupled)
        }
        "F1_abelian_2d" => {
            let vars = names(&["x", "y"]);
            let f = VForm::basic(p("x", &vars), &[0, 1], 1, 0);
            let coupled = build_coupled(
                &AlgebroidPresentation::tangent(2),
                &FibreBracket::abelian(2, 1),
                &LinearConnection::trivial(2, 1),
                &f,
            )?;
            (vars, coupled)
        }
        "F2_semisimple_2d" => {
            let vars = names(&["x", "y"]);
            // Γ_y = x·ad(u3): u1 ↦ x u2, u2 ↦ −x u1
            let conn = connection_from_entries(
                2,
                3,
                [((1, 1, 0), p("x", &vars)), ((1, 0, 1), p("-x", &vars))],
            )?;
            let f = VForm::basic(p("-1", &vars), &[0, 1], 3, 2);
            let coupled = build_coupled(&AlgebroidPresentation::tangent(2), &so3(2), &conn, &f)?;
            (vars, coupled)
        }
        "F3_foliation_4d" => {
            let vars = names(&["x1", "x2", "x3", "x4"]);
            let b = AlgebroidPresentation::from_upper(
                4,
                1,
                std::iter::empty(),
                vec![p("1", &vars), Poly::zero(4), Poly::zero(4), Poly::zero(4)],
            )?;
            let f = VForm::basic(p("x2", &vars), &[2, 3], 1, 0);
            let coupled = build_coupled(
                &b,
                &FibreBracket::abelian(4, 1),
                &LinearConnection::trivial(4, 1),
                &f,
            )?;
            (vars, coupled)
        }
        other => {
            return Err(Error::contract(format!(
                "unknown fixture {other}; expected one of {}",
                FIXTURE_NAMES.join(", ")
            )))
        }
    };
    Ok(Fixture {
        name: name.to_string(),
        variables,
        coupled,
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| fixture(n).expect("built-in fixture"))
        .collect()
}

/// Seeded generator of small random polynomial data.
pub struct RandomData {
    rng: ChaCha8Rng,
    pub bound: u32,
    pub max_terms: usize,
    pub density: f64,
}

impl RandomData {
    pub fn new(seed: u64) -> Self {
        RandomData {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: 2,
            max_terms: 2,
            density: 0.5,
        }
    }

    pub fn with_bound(mut self, bound: u32) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn coefficient(&mut self) -> i64 {
        loop {
            let c = self.rng.gen_range(-3..=3);
            if c != 0 {
                return c;
            }
        }
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn poly(&mut self, n: usize) -> Poly {
        let monos = Monomial::up_to_degree(n, self.bound);
        let mut out = Poly::zero(n);
        let terms = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..terms {
            let m = monos[self.rng.gen_range(0..monos.len())].clone();
            let c = int(self.coefficient());
            out = out + Poly::monomial(m, c);
        }
        out
    }

    fn sparse_poly(&mut self, n: usize) -> Poly {
        if self.rng.gen_bool(self.density) {
            self.poly(n)
        } else {
            Poly::zero(n)
        }
    }

    pub fn section(&mut self, n: usize, rank: usize) -> Section {
        Section((0..rank).map(|_| self.sparse_poly(n)).collect())
    }

    pub fn form(&mut self, n: usize, rank: usize, degree: usize) -> VForm {
        let mut out = VForm::zero(n, rank, degree);
        if degree > n {
            return out;
        }
        for b in 0..rank {
            for mask in masks_of_degree(n, degree) {
                let f = self.sparse_poly(n);
                if !f.is_zero() {
                    out.add_component(b, mask, &f);
                }
            }
        }
        out
    }

    pub fn cochain(
        &mut self,
        alg: &AlgebroidPresentation,
        m: usize,
        p: usize,
        q: usize,
    ) -> WeilCochain {
        let n = alg.chart_dim();
        let mut c = WeilCochain::zero(n, alg.rank(), m, p, q);
        for k in c.valid_components() {
            for (i, j) in c.slots(k) {
                let w = self.form(n, m, q - k);
                c.set(k, &i, &j, w);
            }
        }
        c
    }

    /// A cochain whose correction terms vanish on the given frame sections.
    pub fn horizontal_cochain(
        &mut self,
        alg: &AlgebroidPresentation,
        m: usize,
        p: usize,
        q: usize,
        ideal: &[usize],
    ) -> WeilCochain {
        let mut c = self.cochain(alg, m, p, q);
        for k in 1..=p {
            if !c.has_component(k) {
                continue;
            }
            for (i, j) in c.slots(k) {
                if j.iter().any(|x| ideal.contains(x)) {
                    c.set(k, &i, &j, VForm::zero(alg.chart_dim(), m, q - k));
                }
            }
        }
        c
    }
}

impl RandomData {
    pub fn vfield(&mut self, n: usize) -> VField {
        VField((0..n).map(|_| self.sparse_poly(n)).collect())
    }

    /// A form with values in `S^slots(A^*) ⊗ V`.
    pub fn sym_form(
        &mut self,
        n: usize,
        alg_rank: usize,
        rank: usize,
        degree: usize,
        slots: usize,
    ) -> SymForm {
        let mut out = SymForm::zero(n, alg_rank, rank, degree, slots);
        for ms in multisets(alg_rank, slots) {
            let w = self.form(n, rank, degree);
            out.add(ms, &w);
        }
        out
    }

    /// A random 𝔨-valued 1-form `γ` and the horizontal IM form `δ⁰γ`.
    pub fn coboundary_im_form(&mut self, ideal: &IdealBundle) -> (VForm, WeilCochain) {
        let alg = ideal.algebroid();
        let gamma = self.form(alg.chart_dim(), ideal.rank(), 1);
        let l = delta(
            alg,
            &ideal.adjoint_rep(),
            &WeilCochain::from_form(alg.rank(), &gamma),
        )
        .expect("shapes match");
        (gamma, l)
    }

    /// The IM connection shifted by `δ⁰γ` for a random 𝔨-valued 1-form `γ`;
    /// both `C` and the symbol move.
    pub fn perturbed_imc(&mut self, imc: &IMConnection) -> IMConnection {
        let (_, l) = self.coboundary_im_form(imc.ideal());
        imc.shifted(&l, &int(1)).expect("shapes match")
    }

    /// An arbitrary splitting triple `(v, ∇, U)` for the ideal.
    pub fn triple(&mut self, ideal: &IdealBundle) -> CouplingTriple {
        let alg = ideal.algebroid();
        let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
        let symbol = (0..r)
            .map(|i| match ideal.position(i) {
                Some(b) => unit(n, m, b),
                None => (0..m).map(|_| self.sparse_poly(n)).collect(),
            })
            .collect();
        let gamma = self.form(n, m * m, 1);
        let conn = LinearConnection::trivial(n, m)
            .shifted(&gamma)
            .expect("rank matches");
        let u: BTreeMap<usize, VForm> = ideal
            .complement()
            .into_iter()
            .map(|i| (i, self.form(n, m, 1)))
            .collect();
        CouplingTriple { symbol, conn, u }
    }
}

/// A random cochain in `W^{p,q}(A; V)` with `rank V = m`.
pub fn random_cochain(
    alg: &AlgebroidPresentation,
    m: usize,
    p: usize,
    q: usize,
    seed: u64,
) -> WeilCochain {
    RandomData::new(seed).cochain(alg, m, p, q)
}
