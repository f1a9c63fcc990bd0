//! Independent certificate checking. Uses only the host coloring and the
//! family members, never pipeline state.

use std::fmt;

use crate::certificate::PartitionCertificate;
use crate::families::GraphFamily;
use crate::graph::{Color, ColoredCompleteGraph};

/// One reason to reject. Piece ids are 1-based, vertices 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertViolation {
    HostSize { claimed: usize, actual: usize },
    OutOfRange { piece: usize, vertex: usize },
    Overlap { vertex: usize, first: usize, second: usize },
    Uncovered { vertices: Vec<usize> },
    Bijection { piece: usize, detail: String },
    Family { piece: usize, found: String, expected: String },
    Member { piece: usize, detail: String },
    Color { piece: usize, u: usize, v: usize, claimed: Color },
}

impl fmt::Display for CertViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertViolation::HostSize { claimed, actual } => {
                write!(f, "coverage: certificate is for n={claimed}, coloring has n={actual}")
            }
            CertViolation::OutOfRange { piece, vertex } => {
                write!(f, "coverage: piece {piece} uses vertex {} outside the host", vertex + 1)
            }
            CertViolation::Overlap { vertex, first, second } => {
                write!(f, "disjointness: pieces {first} and {second} share vertex {}", vertex + 1)
            }
            CertViolation::Uncovered { vertices } => {
                let shown: Vec<String> = vertices.iter().take(10).map(|v| (v + 1).to_string()).collect();
                let more = if vertices.len() > 10 { ", ..." } else { "" };
                write!(f, "coverage: {} vertices uncovered ({}{more})", vertices.len(), shown.join(", "))
            }
            CertViolation::Bijection { piece, detail } => write!(f, "bijection: piece {piece}: {detail}"),
            CertViolation::Family { piece, found, expected } => {
                write!(f, "family: piece {piece} claims `{found}`, its color requires `{expected}`")
            }
            CertViolation::Member { piece, detail } => write!(f, "family: piece {piece}: {detail}"),
            CertViolation::Color { piece, u, v, claimed } => write!(
                f,
                "color: piece {piece} maps family edge {}-{} to a host edge that is not {claimed}",
                u + 1,
                v + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<CertViolation>,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Accepts iff the pieces partition the host's vertices, each piece's map is
/// a bijection from the family member's vertices onto its vertex set, and
/// every member edge lands on a host edge of the claimed color. Red pieces
/// come from `fam1`, blue ones from `fam2`; a 1-vertex piece may name either.
pub fn verify_certificate(
    g: &ColoredCompleteGraph,
    fam1: &GraphFamily,
    fam2: &GraphFamily,
    cert: &PartitionCertificate,
) -> VerifyReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    if cert.host_n != n {
        violations.push(CertViolation::HostSize {
            claimed: cert.host_n,
            actual: n,
        });
    }
    let mut owner: Vec<usize> = vec![0; n];
    for (idx, piece) in cert.pieces.iter().enumerate() {
        let id = idx + 1;
        // vertex sets: range and disjointness
        for h in piece.host_vertices() {
            if h >= n {
                violations.push(CertViolation::OutOfRange { piece: id, vertex: h });
            } else if owner[h] != 0 && owner[h] != id {
                violations.push(CertViolation::Overlap {
                    vertex: h,
                    first: owner[h],
                    second: id,
                });
            } else if owner[h] == id {
                violations.push(CertViolation::Bijection {
                    piece: id,
                    detail: format!("host vertex {} is used twice", h + 1),
                });
            } else {
                owner[h] = id;
            }
        }
        // family vertices: each of 1..m exactly once
        let m = piece.n;
        let mut image = vec![usize::MAX; m];
        let mut ok = piece.pairs.len() == m;
        if !ok {
            violations.push(CertViolation::Bijection {
                piece: id,
                detail: format!("{} pairs for a {m}-vertex member", piece.pairs.len()),
            });
        }
        for &(f, h) in &piece.pairs {
            if f >= m {
                ok = false;
                violations.push(CertViolation::Bijection {
                    piece: id,
                    detail: format!("family vertex {} is outside 1..{m}", f + 1),
                });
            } else if image[f] != usize::MAX {
                ok = false;
                violations.push(CertViolation::Bijection {
                    piece: id,
                    detail: format!("family vertex {} is mapped twice", f + 1),
                });
            } else {
                image[f] = h;
            }
        }
        let (expected, other) = match piece.color {
            Color::Red => (fam1, fam2),
            Color::Blue => (fam2, fam1),
        };
        let fam = if piece.family == expected.name() {
            expected
        } else if m == 1 && piece.family == other.name() {
            other
        } else {
            violations.push(CertViolation::Family {
                piece: id,
                found: piece.family.clone(),
                expected: expected.name().to_string(),
            });
            continue;
        };
        if !ok || image.iter().any(|&h| h >= n) {
            continue;
        }
        let member = match fam.member(m) {
            Ok(f) => f,
            Err(e) => {
                violations.push(CertViolation::Member {
                    piece: id,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let bad = member.edges().find(|&(u, v)| g.color(image[u], image[v]) != piece.color);
        if let Some((u, v)) = bad {
            violations.push(CertViolation::Color {
                piece: id,
                u,
                v,
                claimed: piece.color,
            });
        }
    }
    let uncovered: Vec<usize> = (0..n).filter(|&v| owner[v] == 0).collect();
    if !uncovered.is_empty() {
        violations.push(CertViolation::Uncovered { vertices: uncovered });
    }
    VerifyReport { violations }
}
