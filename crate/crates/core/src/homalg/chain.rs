use serde::{Deserialize, Serialize};

use super::HomalgError;
use crate::complex::CellComplex;
use crate::scalar::{fmt_rat, parse_rat, Ring, RingTag};
use crate::{Int, Rat};

/// Serialized (co)chain: only nonzero entries, values as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub k: usize,
    pub ring: RingTag,
    pub entries: Vec<(usize, String)>,
}

macro_rules! cell_vector {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<R> {
            pub k: usize,
            pub values: Vec<R>,
        }

        impl<R: Ring> $name<R> {
            pub fn zero(k: usize, len: usize) -> Self {
                Self { k, values: vec![R::zero(); len] }
            }

            pub fn new(k: usize, values: Vec<R>) -> Self {
                Self { k, values }
            }

            pub fn from_entries(
                k: usize,
                len: usize,
                entries: impl IntoIterator<Item = (usize, R)>,
            ) -> Result<Self, HomalgError> {
                let mut out = Self::zero(k, len);
                for (i, v) in entries {
                    if i >= len {
                        return Err(HomalgError::BadIndex { index: i, count: len });
                    }
                    out.values[i] = out.values[i].clone() + v;
                }
                Ok(out)
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.values.iter().all(|v| v.is_zero())
            }

            /// Nonzero entries in index order.
            pub fn support(&self) -> impl Iterator<Item = (usize, &R)> {
                self.values.iter().enumerate().filter(|(_, v)| !v.is_zero())
            }

            /// Largest absolute entry; 0 for the zero vector.
            pub fn norm_inf(&self) -> Rat {
                self.values.iter().map(|v| v.abs().to_rat()).max().unwrap_or_default()
            }

            /// Sum of absolute entries.
            pub fn volume_norm(&self) -> Rat {
                self.values.iter().map(|v| v.abs().to_rat()).sum()
            }

            pub fn to_rat(&self) -> $name<Rat> {
                $name { k: self.k, values: self.values.iter().map(Ring::to_rat).collect() }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!((self.k, self.len()), (other.k, other.len()));
                let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
                Self { k: self.k, values }
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!((self.k, self.len()), (other.k, other.len()));
                let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() - b.clone()).collect();
                Self { k: self.k, values }
            }

            pub fn scale(&self, c: &R) -> Self {
                Self { k: self.k, values: self.values.iter().map(|v| v.clone() * c.clone()).collect() }
            }

            pub fn to_json(&self) -> CochainJson {
                CochainJson {
                    k: self.k,
                    ring: R::TAG,
                    entries: self.support().map(|(i, v)| (i, fmt_rat(&v.to_rat()))).collect(),
                }
            }

            /// Parses `json` into a vector over `len` cells. Rational entries
            /// are rejected when `R` is the integers.
            pub fn from_json(json: &CochainJson, len: usize) -> Result<Self, HomalgError> {
                let mut entries = Vec::with_capacity(json.entries.len());
                for (i, s) in &json.entries {
                    let q = parse_rat(s).map_err(HomalgError::Parse)?;
                    let v = R::try_from_rat(&q).ok_or_else(|| HomalgError::NotIntegral(s.clone()))?;
                    entries.push((*i, v));
                }
                Self::from_entries(json.k, len, entries)
            }
        }

        impl $name<Rat> {
            /// `Some` when every entry is an integer.
            pub fn to_int(&self) -> Option<$name<Int>> {
                let values = self.values.iter().map(Int::try_from_rat).collect::<Option<Vec<_>>>()?;
                Some($name { k: self.k, values })
            }
        }
    };
}

cell_vector!(Cochain, "A k-cochain: one coefficient per k-cell, in canonical cell order.");
cell_vector!(Chain, "A k-chain: one coefficient per k-cell, in canonical cell order.");

impl<R: Ring> Cochain<R> {
    /// `δ` of this cochain, a (k+1)-cochain.
    pub fn coboundary<X: CellComplex + ?Sized>(&self, x: &X) -> Cochain<R> {
        let k = self.k;
        let values = (0..x.num_cells(k + 1))
            .map(|s| {
                x.facets(k + 1, s)
                    .into_iter()
                    .fold(R::zero(), |acc, (t, sign)| acc + R::from_i64(sign.into()) * self.values[t].clone())
            })
            .collect();
        Cochain { k: k + 1, values }
    }

    /// `⟨ω, c⟩ = Σ ω(i) c(i)`.
    pub fn pair(&self, c: &Chain<R>) -> R {
        assert_eq!((self.k, self.len()), (c.k, c.len()), "pairing across degrees");
        self.values.iter().zip(&c.values).fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl<R: Ring> Chain<R> {
    /// `∂` of this chain, a (k-1)-chain. Vertices have zero boundary.
    pub fn boundary<X: CellComplex + ?Sized>(&self, x: &X) -> Chain<R> {
        if self.k == 0 {
            return Chain::zero(0, 0);
        }
        let mut out: Chain<R> = Chain::zero(self.k - 1, x.num_cells(self.k - 1));
        for (s, v) in self.support() {
            for (t, sign) in x.facets(self.k, s) {
                out.values[t] = out.values[t].clone() + R::from_i64(sign.into()) * v.clone();
            }
        }
        out
    }
}
