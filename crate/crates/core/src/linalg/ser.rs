//! `serialize_with` helpers: integers as JSON numbers when they fit in i64,
//! decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

struct Num<'a>(&'a BigInt);

impl Serialize for Num<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct Nums<'a>(&'a [BigInt]);

impl Serialize for Nums<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Num(x))?;
        }
        seq.end()
    }
}

pub fn int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    Num(x).serialize(s)
}

pub fn ints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    Nums(xs).serialize(s)
}

pub fn int_rows<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&Nums(r))?;
    }
    seq.end()
}
