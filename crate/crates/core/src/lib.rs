//! Linear uniform hypergraphs and Turán-type extremal problems for linear
//! paths, stars and star-path forests.

pub mod bounds;
pub mod construction;
pub mod design;
pub mod detect;
pub mod endsets;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod pattern;

pub use hypergraph::{EdgeLabel, Hypergraph, HypergraphError, LabeledHypergraph, Uniformity};
pub use pattern::{Component, ForbiddenPattern};

use num_rational::BigRational;

/// Exact rational used for every bound value.
pub type Exact = BigRational;

/// Serializes an [`Exact`] as its `p/q` string.
pub mod exact_serde {
    use super::Exact;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Exact, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Exact, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::Exact;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<Exact>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Exact>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| t.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// `value` as an exact integer rational.
pub fn exact(value: i64) -> Exact {
    Exact::from_integer(value.into())
}

/// `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Exact {
    Exact::new(num.into(), den.into())
}
