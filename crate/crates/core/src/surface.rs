//! Surface input data: Betti numbers, numerical invariants, and a finite
//! Frobenius-algebra model of the cohomology ring.
//!
//! Every identity computed downstream depends only on the degrees, the
//! integration pairing and the Euler class of the model, never on a
//! particular intersection lattice; `validate` checks exactly the axioms
//! the other modules rely on.

use serde::Deserialize;

use crate::linalg;
use crate::rat::Rat;

/// Betti numbers and optional numerical invariants of a surface.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceTopology {
    pub name: String,
    /// `(b0, b1, b2, b3, b4)`.
    pub betti: [u32; 5],
    pub chi_o: Option<i64>,
    pub k2: Option<i64>,
    /// Records the trivial-canonical-class hypothesis where it holds; only
    /// documentation, no computation branches on it.
    pub ks_zero: bool,
}

impl SurfaceTopology {
    pub fn new(name: &str, betti: [u32; 5]) -> Self {
        let s = SurfaceTopology { name: name.into(), betti, chi_o: None, k2: None, ks_zero: false };
        s.assert_poincare_duality();
        s
    }

    fn assert_poincare_duality(&self) {
        assert_eq!(self.betti[0], self.betti[4], "b0 must equal b4");
        assert_eq!(self.betti[1], self.betti[3], "b1 must equal b3");
    }

    /// Alternating sum of the Betti numbers.
    pub fn euler_number(&self) -> i64 {
        let b = &self.betti;
        b[0] as i64 - b[1] as i64 + b[2] as i64 - b[3] as i64 + b[4] as i64
    }

    pub fn has_odd_cohomology(&self) -> bool {
        self.betti[1] > 0
    }
}

/// Numerical data of a line bundle on a surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineBundleData {
    pub chi_l: i64,
    pub lk: i64,
    pub l2: Option<i64>,
}

impl LineBundleData {
    /// Riemann-Roch consistency `chi(L) = chi(O) + (L^2 - L.K)/2`, checkable
    /// only when `L^2` is supplied.
    pub fn riemann_roch_consistent(&self, chi_o: i64) -> Option<bool> {
        let l2 = self.l2?;
        Some(2 * self.chi_l == 2 * chi_o + l2 - self.lk)
    }
}

/// Finite graded-commutative algebra with a nondegenerate integration
/// pairing and a distinguished Euler class, modeling the cohomology of a
/// surface. Elements are dense coefficient vectors over the basis.
#[derive(Clone, Debug)]
pub struct FrobeniusModel {
    /// Cohomological degree of each basis element, in `0..=4`.
    degrees: Vec<u8>,
    unit: usize,
    /// `table[i][j]` = coefficient vector of `e_i * e_j`.
    table: Vec<Vec<Vec<Rat>>>,
    /// Linear functional: `integral[i]` is the integral of `e_i`.
    integral: Vec<Rat>,
    euler_class: Vec<Rat>,
}

pub type Elem = Vec<Rat>;

impl FrobeniusModel {
    pub fn new(
        degrees: Vec<u8>,
        unit: usize,
        table: Vec<Vec<Vec<Rat>>>,
        integral: Vec<Rat>,
        euler_class: Vec<Rat>,
    ) -> Self {
        let dim = degrees.len();
        assert!(unit < dim);
        assert_eq!(table.len(), dim);
        assert!(table.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim)));
        assert_eq!(integral.len(), dim);
        assert_eq!(euler_class.len(), dim);
        FrobeniusModel { degrees, unit, table, integral, euler_class }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> u8 {
        self.degrees[i]
    }

    /// Parity of the basis class; odd classes generate the exterior part of
    /// the Fock space.
    pub fn is_odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    pub fn has_odd_classes(&self) -> bool {
        (0..self.dim()).any(|i| self.is_odd(i))
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = Rat::one();
        v
    }

    pub fn zero_elem(&self) -> Elem {
        vec![Rat::zero(); self.dim()]
    }

    pub fn euler_class(&self) -> &Elem {
        &self.euler_class
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Elem {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = self.zero_elem();
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca * cb;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &(&c * t);
                    }
                }
            }
        }
        out
    }

    pub fn integral_of(&self, a: &Elem) -> Rat {
        let mut acc = Rat::zero();
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * &self.integral[i]);
            }
        }
        acc
    }

    /// `integral(e_i e_j)` for all basis pairs.
    pub fn pairing_matrix(&self) -> linalg::Mat {
        let dim = self.dim();
        (0..dim)
            .map(|i| (0..dim).map(|j| self.integral_of(&self.table[i][j])).collect())
            .collect()
    }

    pub fn pairing(&self, i: usize, j: usize) -> Rat {
        self.integral_of(&self.table[i][j])
    }

    /// Checks every Frobenius axiom; failures are reported with witnesses
    /// rather than raised. Passing `topology` additionally checks that the
    /// Euler class integrates to the Euler number.
    pub fn validate(&self, topology: Option<&SurfaceTopology>) -> FrobeniusReport {
        let mut failures = Vec::new();
        let dim = self.dim();

        if self.degrees[self.unit] != 0 {
            failures.push("unit is not in degree 0".to_string());
        }
        for i in 0..dim {
            if self.table[self.unit][i] != self.basis_elem(i) {
                failures.push(format!("unit law fails on basis element {i}"));
            }
            if self.table[i][self.unit] != self.basis_elem(i) {
                failures.push(format!("unit law fails on basis element {i} (right)"));
            }
        }

        // Multiplication must respect the grading.
        for i in 0..dim {
            for j in 0..dim {
                let d = self.degrees[i] as usize + self.degrees[j] as usize;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() && self.degrees[k] as usize != d {
                        failures.push(format!("product e{i}*e{j} not homogeneous of degree {d}"));
                    }
                }
            }
        }

        // Graded commutativity with the Koszul sign.
        for i in 0..dim {
            for j in 0..=i {
                let mut ji = self.table[j][i].clone();
                if self.is_odd(i) && self.is_odd(j) {
                    for c in &mut ji {
                        *c = -c.clone();
                    }
                }
                if self.table[i][j] != ji {
                    failures.push(format!("graded commutativity fails at ({i},{j})"));
                }
            }
        }

        // Associativity, with the offending triple as witness.
        'assoc: for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = self.mul(&self.table[i][j].clone(), &self.basis_elem(k));
                    let right = self.mul(&self.basis_elem(i), &self.table[j][k].clone());
                    if left != right {
                        failures.push(format!("associativity fails at triple ({i},{j},{k})"));
                        break 'assoc;
                    }
                }
            }
        }

        // The integral must be supported in top degree.
        for i in 0..dim {
            if !self.integral[i].is_zero() && self.degrees[i] != 4 {
                failures.push(format!("integral supported in degree {} at {i}", self.degrees[i]));
            }
        }

        // Invariance integral((ab)c) = integral(a(bc)) follows from
        // associativity; spot-check it directly anyway.
        if failures.is_empty() {
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        let lhs = self.integral_of(&self.mul(&self.table[i][j], &self.basis_elem(k)));
                        let rhs = self.integral_of(&self.mul(&self.basis_elem(i), &self.table[j][k]));
                        if lhs != rhs {
                            failures.push(format!("integral invariance fails at ({i},{j},{k})"));
                        }
                    }
                }
            }
        }

        // Nondegeneracy of the pairing.
        let det = linalg::determinant(&self.pairing_matrix());
        if det.is_zero() {
            failures.push("integration pairing is degenerate".to_string());
        }

        if let Some(top) = topology {
            let e = self.integral_of(&self.euler_class);
            if e != Rat::from_int(top.euler_number()) {
                failures.push(format!(
                    "euler class integrates to {e}, expected {}",
                    top.euler_number()
                ));
            }
            let mut counts = [0u32; 5];
            for &d in &self.degrees {
                counts[d as usize] += 1;
            }
            if counts != top.betti {
                failures.push(format!(
                    "basis degree counts {counts:?} do not match betti {:?}",
                    top.betti
                ));
            }
        }

        FrobeniusReport { failures }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FrobeniusReport {
    pub failures: Vec<String>,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A named surface with its topology and cohomology model.
#[derive(Clone, Debug)]
pub struct SurfaceFixture {
    pub topology: SurfaceTopology,
    pub frobenius: FrobeniusModel,
}

/// K3 surface: b = (1, 0, 22, 0, 1), chi(O) = 2, K^2 = 0. Twenty of the
/// middle classes are self-dual under the pairing and the last two form a
/// hyperbolic pair; only nondegeneracy matters for the identities tested.
pub fn k3() -> SurfaceFixture {
    let mut topology = SurfaceTopology::new("k3", [1, 0, 22, 0, 1]);
    topology.chi_o = Some(2);
    topology.k2 = Some(0);
    topology.ks_zero = true;

    let dim = 24;
    let unit = 0;
    let pt = 23;
    let mut degrees = vec![2u8; dim];
    degrees[unit] = 0;
    degrees[pt] = 4;

    // Middle pairing: identity on classes 1..=20, hyperbolic on (21, 22).
    let middle_pairing = |i: usize, j: usize| -> Rat {
        debug_assert!((1..=22).contains(&i) && (1..=22).contains(&j));
        let hit = if i <= 20 { i == j } else { i + j == 43 };
        if hit {
            Rat::one()
        } else {
            Rat::zero()
        }
    };

    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let d = degrees[i] as usize + degrees[j] as usize;
            if d > 4 {
                continue;
            }
            if i == unit {
                table[i][j][j] = Rat::one();
            } else if j == unit {
                table[i][j][i] = Rat::one();
            } else if degrees[i] == 2 && degrees[j] == 2 {
                table[i][j][pt] = middle_pairing(i, j);
            }
        }
    }

    let mut integral = vec![Rat::zero(); dim];
    integral[pt] = Rat::one();
    let mut euler_class = vec![Rat::zero(); dim];
    euler_class[pt] = Rat::from_int(24);

    SurfaceFixture {
        topology,
        frobenius: FrobeniusModel::new(degrees, unit, table, integral, euler_class),
    }
}

/// Projective plane: b = (1, 0, 1, 0, 1), chi(O) = 1, K^2 = 9.
pub fn p2() -> SurfaceFixture {
    let mut topology = SurfaceTopology::new("p2", [1, 0, 1, 0, 1]);
    topology.chi_o = Some(1);
    topology.k2 = Some(9);
    topology.ks_zero = false;

    let degrees = vec![0u8, 2, 4];
    let (unit, h, pt) = (0usize, 1usize, 2usize);
    let mut table = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
    for j in 0..3 {
        table[unit][j][j] = Rat::one();
        table[j][unit][j] = Rat::one();
    }
    table[h][h][pt] = Rat::one();

    let mut integral = vec![Rat::zero(); 3];
    integral[pt] = Rat::one();
    let mut euler_class = vec![Rat::zero(); 3];
    euler_class[pt] = Rat::from_int(3);

    SurfaceFixture {
        topology,
        frobenius: FrobeniusModel::new(degrees, unit, table, integral, euler_class),
    }
}

/// Abelian surface: the exterior algebra on four degree-one generators,
/// b = (1, 4, 6, 4, 1), Euler number zero. The odd classes exercise every
/// Koszul sign path.
pub fn abelian() -> SurfaceFixture {
    let mut topology = SurfaceTopology::new("abelian", [1, 4, 6, 4, 1]);
    topology.chi_o = Some(0);
    topology.k2 = Some(0);
    topology.ks_zero = true;

    // Basis: subsets of {0,1,2,3} ordered by (popcount, numeric value).
    let mut subsets: Vec<u8> = (0u8..16).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let index_of = |s: u8| subsets.iter().position(|&t| t == s).unwrap();

    let degrees: Vec<u8> = subsets.iter().map(|s| s.count_ones() as u8).collect();
    let dim = 16;
    let unit = index_of(0);
    let top = index_of(0b1111);

    // Wedge product sign: (-1)^{#inversions interleaving sorted A and B}.
    let wedge = |a: u8, b: u8| -> Option<(u8, i64)> {
        if a & b != 0 {
            return None;
        }
        let mut sign = 1i64;
        for i in 0..4 {
            if b & (1 << i) != 0 {
                let higher_in_a = (a >> (i + 1)).count_ones();
                if higher_in_a % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        Some((a | b, sign))
    };

    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for (i, &a) in subsets.iter().enumerate() {
        for (j, &b) in subsets.iter().enumerate() {
            if let Some((c, sign)) = wedge(a, b) {
                table[i][j][index_of(c)] = Rat::from_int(sign);
            }
        }
    }

    let mut integral = vec![Rat::zero(); dim];
    integral[top] = Rat::one();
    let euler_class = vec![Rat::zero(); dim];

    SurfaceFixture {
        topology,
        frobenius: FrobeniusModel::new(degrees, unit, table, integral, euler_class),
    }
}

pub fn preset(name: &str) -> Option<SurfaceFixture> {
    match name {
        "k3" => Some(k3()),
        "p2" => Some(p2()),
        "abelian" => Some(abelian()),
        _ => None,
    }
}

pub fn all_fixtures() -> Vec<SurfaceFixture> {
    vec![k3(), p2(), abelian()]
}

#[derive(Debug, Deserialize)]
struct SurfaceFile {
    name: String,
    betti: [u32; 5],
    #[serde(default)]
    chi_o: Option<i64>,
    #[serde(default, rename = "K2")]
    k2: Option<i64>,
    #[serde(default)]
    ks_zero: bool,
    #[serde(default)]
    frobenius: Option<FrobeniusFile>,
}

#[derive(Debug, Deserialize)]
struct FrobeniusFile {
    degrees: Vec<u8>,
    unit: usize,
    /// `mult[i][j]` = dense coefficient vector, entries integers or "num/den".
    mult: Vec<Vec<Vec<serde_json::Value>>>,
    integral: Vec<serde_json::Value>,
    euler_class: Vec<serde_json::Value>,
}

fn rat_from_value(v: &serde_json::Value) -> Result<Rat, String> {
    match v {
        serde_json::Value::Number(n) => n
            .to_string()
            .parse::<Rat>()
            .map_err(|e| format!("bad number {n}: {e}")),
        serde_json::Value::String(s) => s.parse::<Rat>(),
        other => Err(format!("expected number or \"num/den\" string, got {other}")),
    }
}

/// Parses a surface fixture file. Without an explicit `frobenius` block only
/// the topology is usable; a placeholder model on the right Betti numbers is
/// built with the diagonal pairing in that case.
pub fn parse_surface_json(text: &str) -> Result<SurfaceFixture, String> {
    let file: SurfaceFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.betti[0] != file.betti[4] || file.betti[1] != file.betti[3] {
        return Err("betti numbers violate Poincare duality".into());
    }
    let mut topology = SurfaceTopology::new(&file.name, file.betti);
    topology.chi_o = file.chi_o;
    topology.k2 = file.k2;
    topology.ks_zero = file.ks_zero;

    let frobenius = match file.frobenius {
        Some(f) => {
            let dim = f.degrees.len();
            if f.mult.len() != dim || f.integral.len() != dim || f.euler_class.len() != dim {
                return Err("frobenius block has inconsistent dimensions".into());
            }
            let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
            for i in 0..dim {
                if f.mult[i].len() != dim {
                    return Err("frobenius block has inconsistent dimensions".into());
                }
                for j in 0..dim {
                    if f.mult[i][j].len() != dim {
                        return Err("frobenius block has inconsistent dimensions".into());
                    }
                    for k in 0..dim {
                        table[i][j][k] = rat_from_value(&f.mult[i][j][k])?;
                    }
                }
            }
            let integral = f.integral.iter().map(rat_from_value).collect::<Result<_, _>>()?;
            let euler_class =
                f.euler_class.iter().map(rat_from_value).collect::<Result<_, _>>()?;
            FrobeniusModel::new(f.degrees, f.unit, table, integral, euler_class)
        }
        None => default_model_for(&topology),
    };
    Ok(SurfaceFixture { topology, frobenius })
}

/// Diagonal-pairing model matching the given Betti numbers, with middle
/// classes squaring to the point class. Odd Betti numbers are not supported
/// here (no canonical sign choice); fixture files with odd cohomology must
/// supply an explicit model.
fn default_model_for(topology: &SurfaceTopology) -> FrobeniusModel {
    assert!(
        !topology.has_odd_cohomology(),
        "surfaces with odd cohomology need an explicit frobenius block"
    );
    let b2 = topology.betti[2] as usize;
    let dim = 2 + b2;
    let unit = 0;
    let pt = dim - 1;
    let mut degrees = vec![2u8; dim];
    degrees[unit] = 0;
    degrees[pt] = 4;
    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for j in 0..dim {
        table[unit][j][j] = Rat::one();
        table[j][unit][j] = Rat::one();
    }
    for i in 1..=b2 {
        table[i][i][pt] = Rat::one();
    }
    let mut integral = vec![Rat::zero(); dim];
    integral[pt] = Rat::one();
    let mut euler_class = vec![Rat::zero(); dim];
    euler_class[pt] = Rat::from_int(topology.euler_number());
    FrobeniusModel::new(degrees, unit, table, integral, euler_class)
}
