//! The `.mag` files shipped in `examples/`, available by name.

pub const BUILTIN: [(&str, &str); 6] = [
    ("counterexample.mag", include_str!("../examples/counterexample.mag")),
    ("homogeneous.mag", include_str!("../examples/homogeneous.mag")),
    ("wave.mag", include_str!("../examples/wave.mag")),
    ("heatlike.mag", include_str!("../examples/heatlike.mag")),
    ("laplace.mag", include_str!("../examples/laplace.mag")),
    ("remark-transport.mag", include_str!("../examples/remark-transport.mag")),
];

/// Looks up a shipped example by file name, with or without `.mag`.
pub fn builtin(name: &str) -> Option<&'static str> {
    let name = name.rsplit('/').next().unwrap_or(name);
    BUILTIN.iter().find(|(n, _)| *n == name || n.strip_suffix(".mag") == Some(name)).map(|(_, text)| *text)
}
