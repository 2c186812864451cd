use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mediated::RationalPoint;
use crate::poly::{Exponent, SparsePoly};
use crate::rat::{self, Rational};
use crate::socp::{ConeTriplePlan, SocpProblem};

/// Which polynomial the triples reconstruct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMode {
    /// f̃ − ξ, the positive-orthant reduction with rational exponents.
    PnReduced,
    /// f − ξ itself; exponents stay real-valued on ℝⁿ.
    Direct,
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertMode::PnReduced => "pn-reduced",
            CertMode::Direct => "direct",
        })
    }
}

/// `2a·x^v + b·x^w − 2c·x^u` with 2ab ≥ c².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTriple {
    pub u: RationalPoint,
    pub v: RationalPoint,
    pub w: RationalPoint,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SobsCertificate {
    pub n: usize,
    pub xi: Rational,
    pub poly_sha256: String,
    pub mode: CertMode,
    pub circuits: Vec<Vec<ExactTriple>>,
    pub passthrough: Vec<(Exponent, Rational)>,
}

impl SobsCertificate {
    pub(crate) fn assemble(
        f: &SparsePoly,
        xi: &Rational,
        mode: CertMode,
        plan: &ConeTriplePlan,
        problem: &SocpProblem,
        values: &[[Rational; 3]],
    ) -> SobsCertificate {
        let mut circuits = vec![Vec::new(); plan.circuits.len()];
        for (t, [a, b, c]) in plan.triples.iter().zip(values) {
            circuits[t.circuit].push(ExactTriple {
                u: plan.points[t.u].clone(),
                v: plan.points[t.v].clone(),
                w: plan.points[t.w].clone(),
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
            });
        }
        SobsCertificate {
            n: f.n(),
            xi: xi.clone(),
            poly_sha256: f.sha256_hex(),
            mode,
            circuits,
            passthrough: problem.passthrough.clone(),
        }
    }

    pub fn num_triples(&self) -> usize {
        self.circuits.iter().map(Vec::len).sum()
    }

    pub fn triples(&self) -> impl Iterator<Item = &ExactTriple> {
        self.circuits.iter().flatten()
    }

    /// Total numerator and denominator bits over every serialized rational.
    pub fn bit_size(&self) -> u64 {
        let point = |p: &RationalPoint| p.coords().iter().map(rat::bit_size).sum::<u64>();
        let triples: u64 = self
            .triples()
            .map(|t| point(&t.u) + point(&t.v) + point(&t.w) + rat::bit_size(&t.a) + rat::bit_size(&t.b) + rat::bit_size(&t.c))
            .sum();
        let pass: u64 = self
            .passthrough
            .iter()
            .map(|(e, c)| e.to_rationals().iter().map(rat::bit_size).sum::<u64>() + rat::bit_size(c))
            .sum();
        triples + pass + rat::bit_size(&self.xi)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(Wire::from(self)).expect("certificate serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&Wire::from(self)).expect("certificate serializes")
    }

    pub fn from_json_str(s: &str) -> Result<SobsCertificate> {
        let wire: Wire = serde_json::from_str(s)?;
        wire.try_into()
    }
}

type WirePoint = Vec<[String; 2]>;

#[derive(Serialize, Deserialize)]
struct WireTriple {
    u: WirePoint,
    v: WirePoint,
    w: WirePoint,
    a: String,
    b: String,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct WireCircuit {
    triples: Vec<WireTriple>,
}

#[derive(Serialize, Deserialize)]
struct WirePass {
    exponent: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    n: usize,
    xi: String,
    poly_sha256: String,
    #[serde(default = "default_mode")]
    mode: CertMode,
    circuits: Vec<WireCircuit>,
    passthrough: Vec<WirePass>,
}

fn default_mode() -> CertMode {
    CertMode::PnReduced
}

fn point_out(p: &RationalPoint) -> WirePoint {
    p.coords().iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect()
}

fn point_in(p: &WirePoint) -> Result<RationalPoint> {
    p.iter()
        .map(|[num, den]| {
            let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad numerator {num:?}")))?;
            let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad denominator {den:?}")))?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rational::new(num, den))
        })
        .collect::<Result<_>>()
        .map(RationalPoint)
}

impl From<&SobsCertificate> for Wire {
    fn from(c: &SobsCertificate) -> Wire {
        Wire {
            n: c.n,
            xi: rat::to_pq(&c.xi),
            poly_sha256: c.poly_sha256.clone(),
            mode: c.mode,
            circuits: c
                .circuits
                .iter()
                .map(|ts| WireCircuit {
                    triples: ts
                        .iter()
                        .map(|t| WireTriple {
                            u: point_out(&t.u),
                            v: point_out(&t.v),
                            w: point_out(&t.w),
                            a: rat::to_pq(&t.a),
                            b: rat::to_pq(&t.b),
                            c: rat::to_pq(&t.c),
                        })
                        .collect(),
                })
                .collect(),
            passthrough: c
                .passthrough
                .iter()
                .map(|(e, v)| WirePass { exponent: e.entries().to_vec(), coef: rat::to_pq(v) })
                .collect(),
        }
    }
}

impl TryFrom<Wire> for SobsCertificate {
    type Error = Error;

    fn try_from(w: Wire) -> Result<SobsCertificate> {
        let circuits = w
            .circuits
            .iter()
            .map(|c| {
                c.triples
                    .iter()
                    .map(|t| {
                        Ok(ExactTriple {
                            u: point_in(&t.u)?,
                            v: point_in(&t.v)?,
                            w: point_in(&t.w)?,
                            a: rat::parse_rational(&t.a)?,
                            b: rat::parse_rational(&t.b)?,
                            c: rat::parse_rational(&t.c)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let passthrough = w
            .passthrough
            .into_iter()
            .map(|p| Ok((Exponent::new(p.exponent), rat::parse_rational(&p.coef)?)))
            .collect::<Result<_>>()?;
        Ok(SobsCertificate {
            n: w.n,
            xi: rat::parse_rational(&w.xi)?,
            poly_sha256: w.poly_sha256,
            mode: w.mode,
            circuits,
            passthrough,
        })
    }
}
