use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::{kernel_basis, span_basis, unimodular_inverse, Solver};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::AlgebraError;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
///
/// Generators are ordered free part first, then the torsion summands.
#[derive(Clone, Debug, Default)]
pub struct FGAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
    names: Vec<String>,
}

impl PartialEq for FGAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl Eq for FGAbelianGroup {}

impl FGAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, AlgebraError> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(AlgebraError::InvalidGroup(format!("invariant factor {d} < 2")));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(AlgebraError::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FGAbelianGroup {
            free_rank,
            torsion,
            names: Vec::new(),
        })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn z() -> Self {
        Self::free(1)
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            free_rank: rank,
            ..Default::default()
        }
    }

    /// `Z/n`; `n = 1` gives the zero group and `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::z(),
            1 => Self::zero(),
            _ => FGAbelianGroup {
                torsion: vec![BigInt::from(n)],
                ..Default::default()
            },
        }
    }

    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert_eq!(names.len(), self.ngens(), "one name per generator");
        self.names = names;
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |a, d| a * d))
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Order of generator `i`, `None` for free generators.
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        if i < self.free_rank {
            None
        } else {
            self.torsion.get(i - self.free_rank)
        }
    }

    /// Canonical representative of a coordinate vector.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "coordinate length mismatch");
        v.iter()
            .enumerate()
            .map(|(i, x)| match self.generator_order(i) {
                Some(d) => x.mod_floor(d),
                None => x.clone(),
            })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Relation columns: `d_i` times each torsion generator.
    pub fn relations(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (k, d) in self.torsion.iter().enumerate() {
            m.set(self.free_rank + k, k, d.clone());
        }
        m
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == *d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl FromStr for FGAbelianGroup {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || AlgebraError::Parse(s.to_string());
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for part in s.split('⊕').map(str::trim) {
            let (base, mult) = match part.rsplit_once('^') {
                Some((b, m)) => (b.trim_start_matches('(').trim_end_matches(')'), m.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "Z" {
                free += mult;
            } else if let Some(d) = base.strip_prefix("Z/") {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                torsion.extend(std::iter::repeat_n(d, mult));
            } else {
                return Err(bad());
            }
        }
        Self::new(free, torsion)
    }
}

/// `L / K` for a lattice `L ⊆ Z^n` with independent basis columns and a
/// sublattice `K` given by generating columns.
///
/// Keeps generator lifts in `Z^n` and a coordinate map back, so induced maps
/// need no further reduction work.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FGAbelianGroup,
    lifts: IntMatrix,
    solver: Solver,
    coord_rows: IntMatrix,
}

impl Subquotient {
    pub fn new(lattice: IntMatrix, killed: &IntMatrix) -> Result<Self, AlgebraError> {
        let l = lattice.cols();
        let solver = Solver::new(lattice.clone());
        let mut y = IntMatrix::zeros(l, killed.cols());
        for j in 0..killed.cols() {
            let c = solver.solve(&killed.column(j)).ok_or(AlgebraError::NotInLattice)?;
            for (i, v) in c.into_iter().enumerate() {
                y.set(i, j, v);
            }
        }
        let snf = smith_normal_form(&y);
        let diag = snf.diagonal();
        let r = diag.len();
        let mut selected: Vec<usize> = (r..l).collect();
        let mut torsion = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_one() {
                selected.push(i);
                torsion.push(d.clone());
            }
        }
        let uinv = unimodular_inverse(&snf.u);
        let lifts = &lattice * &uinv.select_cols(&selected);
        let coord_rows = snf.u.select_rows(&selected);
        Ok(Subquotient {
            group: FGAbelianGroup {
                free_rank: l - r,
                torsion,
                names: Vec::new(),
            },
            lifts,
            solver,
            coord_rows,
        })
    }

    /// Flips generators so each lift has a positive leading entry.
    pub fn normalize_signs(&mut self) {
        for i in 0..self.lifts.cols() {
            let lead = self.lifts.column(i).into_iter().find(|v| !v.is_zero());
            if lead.is_some_and(|v| v.is_negative()) {
                for r in 0..self.lifts.rows() {
                    let v = self.lifts.get(r, i);
                    self.lifts.set(r, i, -v);
                }
                for c in 0..self.coord_rows.cols() {
                    let v = self.coord_rows.get(i, c);
                    self.coord_rows.set(i, c, -v);
                }
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.lifts.rows()
    }

    /// Lifts of the canonical generators as columns in the ambient lattice.
    pub fn lifts(&self) -> &IntMatrix {
        &self.lifts
    }

    pub fn lift(&self, i: usize) -> Vec<BigInt> {
        self.lifts.column(i)
    }

    pub fn lattice(&self) -> &IntMatrix {
        self.solver.basis()
    }

    /// Canonical coordinates of an ambient vector lying in the lattice.
    pub fn coords(&self, z: &[BigInt]) -> Result<Vec<BigInt>, AlgebraError> {
        let y = self.solver.solve(z).ok_or(AlgebraError::NotInLattice)?;
        Ok(self.group.reduce(&self.coord_rows.apply(&y)))
    }

    pub fn contains(&self, z: &[BigInt]) -> bool {
        self.solver.solve(z).is_some()
    }
}

/// Cokernel of a relation matrix whose rows index generators.
pub fn group_from_presentation(relations: &IntMatrix) -> FGAbelianGroup {
    cokernel_presentation(relations).group
}

/// As [`group_from_presentation`], keeping the quotient data.
pub fn cokernel_presentation(relations: &IntMatrix) -> Subquotient {
    Subquotient::new(IntMatrix::identity(relations.rows()), relations).expect("relations lie in Z^n")
}

/// A homomorphism given on canonical generators: column `j` is the image of
/// generator `j` of the domain.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub domain: FGAbelianGroup,
    pub codomain: FGAbelianGroup,
    pub matrix: IntMatrix,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.matrix == other.matrix
    }
}

impl GroupHom {
    /// Validates shape and that torsion generators map to elements of
    /// compatible order. Entries are reduced into canonical range.
    pub fn new(domain: FGAbelianGroup, codomain: FGAbelianGroup, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(AlgebraError::ShapeMismatch {
                expected: (codomain.ngens(), domain.ngens()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let mut reduced = IntMatrix::zeros(matrix.rows(), matrix.cols());
        for j in 0..matrix.cols() {
            let col = matrix.column(j);
            if let Some(d) = domain.generator_order(j) {
                let scaled: Vec<BigInt> = col.iter().map(|x| x * d).collect();
                if !codomain.is_zero_element(&scaled) {
                    return Err(AlgebraError::NotWellDefined { generator: j });
                }
            }
            for (i, v) in codomain.reduce(&col).into_iter().enumerate() {
                reduced.set(i, j, v);
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix: reduced,
        })
    }

    pub fn identity(g: &FGAbelianGroup) -> Self {
        Self::scalar(g, &BigInt::one())
    }

    pub fn zero(domain: &FGAbelianGroup, codomain: &FGAbelianGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.ngens(), domain.ngens()),
        }
    }

    pub fn scalar(g: &FGAbelianGroup, c: &BigInt) -> Self {
        Self::new(g.clone(), g.clone(), IntMatrix::scalar(g.ngens(), c)).expect("scalars are well defined")
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.codomain.reduce(&self.matrix.apply(&self.domain.reduce(v)))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom, AlgebraError> {
        if other.codomain != self.domain {
            return Err(AlgebraError::ShapeMismatch {
                expected: (self.domain.ngens(), 0),
                found: (other.codomain.ngens(), 0),
            });
        }
        GroupHom::new(other.domain.clone(), self.codomain.clone(), &self.matrix * &other.matrix)
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom, AlgebraError> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(AlgebraError::ShapeMismatch {
                expected: (self.codomain.ngens(), self.domain.ngens()),
                found: (other.codomain.ngens(), other.domain.ngens()),
            });
        }
        GroupHom::new(self.domain.clone(), self.codomain.clone(), self.matrix.add(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn with_codomain_relations(&self) -> IntMatrix {
        self.matrix.hstack(&self.codomain.relations())
    }

    /// `ker(self)` as a subquotient of the domain's coordinate lattice.
    pub fn kernel(&self) -> Subquotient {
        let n = self.domain.ngens();
        let k = kernel_basis(&self.with_codomain_relations());
        let gens = k.select_rows(&(0..n).collect::<Vec<_>>());
        let lattice = span_basis(&gens);
        Subquotient::new(lattice, &self.domain.relations()).expect("domain relations lie in the kernel")
    }

    /// `im(self)` as a subquotient of the codomain's coordinate lattice.
    pub fn image(&self) -> Subquotient {
        let lattice = span_basis(&self.with_codomain_relations());
        Subquotient::new(lattice, &self.codomain.relations()).expect("relations lie in the image lattice")
    }

    pub fn cokernel(&self) -> Subquotient {
        Subquotient::new(IntMatrix::identity(self.codomain.ngens()), &self.with_codomain_relations())
            .expect("full lattice")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Some preimage of `target`, if one exists.
    pub fn solve(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let sol = Solver::new(self.with_codomain_relations()).solve(target)?;
        Some(self.domain.reduce(&sol[..self.domain.ngens()]))
    }

    /// For a hom `Z → Z`, `Z/n → Z/m` and similar one-generator cases, the
    /// single matrix entry.
    pub fn as_scalar(&self) -> Option<BigInt> {
        if self.matrix.rows() == 1 && self.matrix.cols() == 1 {
            Some(self.matrix.get(0, 0))
        } else {
            None
        }
    }

    /// Multiplication by an integer on a cyclic group, read up to sign.
    pub fn is_multiplication_by(&self, c: i64) -> bool {
        let expect = GroupHom::scalar(&self.domain, &BigInt::from(c));
        let neg = GroupHom::scalar(&self.domain, &BigInt::from(-c));
        self.domain == self.codomain && (self.matrix == expect.matrix || self.matrix == neg.matrix)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.matrix.max_abs_entry().abs()
    }
}
