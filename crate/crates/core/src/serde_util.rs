//! Serialization helpers for report types: complex values as explicit
//! {"re", "im"} objects and non-finite floats as strings (JSON has no
//! infinity literal).

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub fn complex<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &v.re)?;
    st.serialize_field("im", &v.im)?;
    st.end()
}

pub fn complex_opt<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(z) => complex(z, s),
        None => s.serialize_none(),
    }
}

pub fn finite_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("infinity")
    } else {
        s.serialize_str("-infinity")
    }
}
