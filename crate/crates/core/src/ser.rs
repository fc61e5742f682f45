//! Serialization helpers: JSON artifacts carry 1-based vertex and color
//! indices (matching the text formats), while the Rust API is 0-based.

use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn one_based<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

pub(crate) fn one_based_vec<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for &x in v {
        seq.serialize_element(&(x + 1))?;
    }
    seq.end()
}

pub(crate) fn one_based_vec_opt<S: Serializer>(
    v: &Option<Vec<usize>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => one_based_vec(v, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn one_based_nested<S: Serializer>(
    v: &[Vec<usize>],
    s: S,
) -> Result<S::Ok, S::Error> {
    struct OneBased<'a>(&'a [usize]);
    impl serde::Serialize for OneBased<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            one_based_vec(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&OneBased(row))?;
    }
    seq.end()
}
