use crate::echelon::Reducer;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::matrix::Matrix;

/// A linear subspace of GF(p)^n, stored as the canonical rref of a basis.
///
/// Because the basis is canonical, two subspaces are equal exactly when the
/// structs compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(p, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: Prime, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(p, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors (reduced mod p on the way in).
    pub fn from_vectors<I, V>(p: Prime, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u8]>,
    {
        let mut red = Reducer::new(p, ambient);
        for v in vectors {
            let v = v.as_ref();
            if v.len() != ambient {
                return Err(Error::shape("subspace vector", ambient, v.len()));
            }
            if red.rank() < ambient {
                red.push(v.iter().map(|&x| x % p.get()).collect());
            }
        }
        Ok(Self::from_reducer(p, ambient, red))
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Self::from_vectors(m.modulus(), m.cols(), m.row_iter()).expect("rows have matrix width")
    }

    pub(crate) fn from_reducer(p: Prime, ambient: usize, red: Reducer) -> Self {
        let (rows, pivots) = red.into_rref();
        Subspace {
            basis: Matrix::from_vecs(p, ambient, rows),
            pivots,
        }
    }

    pub fn modulus(&self) -> Prime {
        self.basis.modulus()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis rows in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.basis.row_iter()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_vec(&self, v: &[u8]) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(Error::shape("subspace membership", self.ambient_dim(), v.len()));
        }
        Ok(())
    }

    /// Coordinates of `v` in the rref basis, or `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[u8]) -> Result<Option<Vec<u8>>> {
        self.check_vec(v)?;
        let p = self.modulus();
        let coords: Vec<u8> = self.pivots.iter().map(|&pc| v[pc] % p.get()).collect();
        let mut residual: Vec<u8> = v.iter().map(|&x| x % p.get()).collect();
        for (row, &c) in self.vectors().zip(&coords) {
            p.axpy(&mut residual, p.neg(c), row);
        }
        Ok(residual.iter().all(|&x| x == 0).then_some(coords))
    }

    pub fn contains(&self, v: &[u8]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus().get(),
                right: other.modulus().get(),
            });
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::shape(
                "subspace ambient dimension",
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for v in self.vectors() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Subspace::from_vectors(
            self.modulus(),
            self.ambient_dim(),
            self.vectors().chain(other.vectors()),
        )
    }

    /// Basis vectors of `self` whose classes form a basis of `self / sub`.
    pub fn quotient_representatives(&self, sub: &Subspace) -> Result<Vec<Vec<u8>>> {
        self.check_compatible(sub)?;
        let mut red = Reducer::new(self.modulus(), self.ambient_dim());
        for v in sub.vectors() {
            red.push(v.to_vec());
        }
        Ok(self
            .vectors()
            .filter(|v| red.push(v.to_vec()).is_some())
            .map(<[u8]>::to_vec)
            .collect())
    }

    /// `{w : <v, w> = 0 for every v in self}`, under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        self.basis.nullspace()
    }

    /// `U ∩ V = ann(ann U + ann V)`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }
}
