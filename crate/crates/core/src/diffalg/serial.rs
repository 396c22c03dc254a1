//! Lossless JSON form shared by every exported object.
//!
//! A scalar is `{"re": "p/q"}` with an optional `"im"`. A differential
//! polynomial is
//! `{"dim": N, "terms": [{"h": i, "e": j, "jets": [[color, order], ...], "coeff": scalar}]}`
//! with one-based colors and terms in canonical order, so serializing is
//! deterministic and `from_json(to_json(p)) == p`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::jet::{JetVar, Monomial, TermKey};
use super::poly::DiffPoly;
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Serialize, Deserialize)]
struct ScalarDoc {
    re: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<String>,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarDoc {
            re: format_rational(self.re()),
            im: (!self.is_real()).then(|| format_rational(self.im())),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ScalarDoc::deserialize(d)?;
        let re = parse_rational(&doc.re).map_err(serde::de::Error::custom)?;
        let im = match doc.im {
            Some(s) => parse_rational(&s).map_err(serde::de::Error::custom)?,
            None => num_traits::Zero::zero(),
        };
        Ok(Scalar::new(re, im))
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    h: u32,
    e: u32,
    jets: Vec<(usize, u32)>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct DiffPolyDoc {
    dim: usize,
    terms: Vec<TermDoc>,
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiffPolyDoc {
            dim: self.dim(),
            terms: self
                .terms()
                .iter()
                .map(|(k, c)| TermDoc {
                    h: k.hpow,
                    e: k.epow,
                    jets: k.mono.vars().iter().map(|v| (v.color + 1, v.order)).collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = DiffPolyDoc::deserialize(d)?;
        if doc.dim == 0 {
            return Err(D::Error::custom("dimension must be positive"));
        }
        let mut out = DiffPoly::zero(doc.dim);
        for t in doc.terms {
            let mut vars = Vec::with_capacity(t.jets.len());
            for (c, o) in t.jets {
                if c == 0 || c > doc.dim {
                    return Err(D::Error::custom(format!(
                        "color {c} outside 1..={}",
                        doc.dim
                    )));
                }
                vars.push(JetVar::new(c - 1, o));
            }
            out.add_term(TermKey::new(t.h, t.e, Monomial::from_vars(vars)), t.coeff);
        }
        Ok(out)
    }
}
