use crate::graph::Color;

/// One monochromatic copy: `pairs` maps family vertices (`0..n`) to host
/// vertices. Kept as raw pairs so malformed certificates can be represented
/// and rejected by the verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificatePiece {
    pub color: Color,
    pub family: String,
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl CertificatePiece {
    /// Piece from a well-formed map `family vertex i -> map[i]`.
    pub fn from_map(color: Color, family: impl Into<String>, map: &[usize]) -> Self {
        CertificatePiece {
            color,
            family: family.into(),
            n: map.len(),
            pairs: map.iter().copied().enumerate().collect(),
        }
    }

    pub fn host_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(_, h)| h)
    }
}

/// A claimed partition of `0..host_n` into monochromatic family copies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub host_n: usize,
    pub pieces: Vec<CertificatePiece>,
}

impl PartitionCertificate {
    pub fn new(host_n: usize) -> Self {
        PartitionCertificate {
            host_n,
            pieces: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Piece sizes, sorted.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.pieces.iter().map(|p| p.n).collect();
        s.sort_unstable();
        s
    }
}
