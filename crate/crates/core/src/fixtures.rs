//! Small named categories used throughout tests, examples and the corpus.
//!
//! The same presentations ship as `.cat` files under `fixtures/`.

use crate::cat::{CategoryBuilder, FiniteCategory};

/// One object, identity only.
pub fn terminal() -> FiniteCategory {
    CategoryBuilder::new().object("0").build().unwrap()
}

/// Objects `0`, `1` and a single arrow `f: 0 -> 1`.
pub fn walking_arrow() -> FiniteCategory {
    CategoryBuilder::new()
        .object("0")
        .object("1")
        .morphism("f", "0", "1")
        .build()
        .unwrap()
}

/// Objects `0`, `1` joined by an isomorphism `f` with inverse `g`.
pub fn walking_iso() -> FiniteCategory {
    CategoryBuilder::new()
        .object("0")
        .object("1")
        .morphism("f", "0", "1")
        .morphism("g", "1", "0")
        .compose("g", "f", "1_0")
        .compose("f", "g", "1_1")
        .build()
        .unwrap()
}

/// `X, Y, Z`; `f, g: X -> Y`, `t: Y -> Z`, `h: X -> Z` with `t∘f = t∘g = h`.
pub fn parallel_pair() -> FiniteCategory {
    CategoryBuilder::new()
        .object("X")
        .object("Y")
        .object("Z")
        .morphism("f", "X", "Y")
        .morphism("g", "X", "Y")
        .morphism("t", "Y", "Z")
        .morphism("h", "X", "Z")
        .compose("t", "f", "h")
        .compose("t", "g", "h")
        .build()
        .unwrap()
}

/// The cyclic group of order two as a one-object category.
pub fn z2() -> FiniteCategory {
    CategoryBuilder::new()
        .object("0")
        .morphism("s", "0", "0")
        .compose("s", "s", "1_0")
        .build()
        .unwrap()
}

/// The monoid `{1, e}` with `e∘e = e`.
pub fn idempotent() -> FiniteCategory {
    CategoryBuilder::new()
        .object("0")
        .morphism("e", "0", "0")
        .compose("e", "e", "e")
        .build()
        .unwrap()
}

/// Two objects with no morphisms between them.
pub fn discrete_pair() -> FiniteCategory {
    CategoryBuilder::new().object("0").object("1").build().unwrap()
}

/// The linear order `0 < 1 < ... < n-1` as a thin category. Arrows are named
/// `a<i><j>`.
pub fn chain(n: usize) -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(&i.to_string());
    }
    let arrow = |i: usize, j: usize| {
        if i == j {
            format!("1_{i}")
        } else {
            format!("a{i}{j}")
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            b.morphism(&arrow(i, j), &i.to_string(), &j.to_string());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                b.compose(&arrow(j, k), &arrow(i, j), &arrow(i, k));
            }
        }
    }
    b.build().unwrap()
}

/// `X, Y`; `f, g: X -> Y` and an involution `w` of `Y` swapping them.
///
/// With `Σ = {1_X, 1_Y, f, g}` the left fraction conditions hold, the
/// three-for-two property fails, and `(f, f)` and `(g, g)` are equivalent
/// symbols with no common symbol under both.
pub fn swapped_pair() -> FiniteCategory {
    CategoryBuilder::new()
        .object("X")
        .object("Y")
        .morphism("f", "X", "Y")
        .morphism("g", "X", "Y")
        .morphism("w", "Y", "Y")
        .compose("w", "w", "1_Y")
        .compose("w", "f", "g")
        .compose("w", "g", "f")
        .build()
        .unwrap()
}
