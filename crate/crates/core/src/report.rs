//! Serialization helpers shared by the JSON reports.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serializer;

/// A complex number as `{"re": …, "im": …}`.
pub fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &clean(z.re))?;
    st.serialize_field("im", &clean(z.im))?;
    st.end()
}

/// Rounds away float noise so reports are stable across platforms.
pub fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
