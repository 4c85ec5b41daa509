//! Per-experiment setting schemas. Defaults are written in scenario syntax so
//! `--list` can print them verbatim.

use crate::scenario::{mismatch, parse_angle, range, ErrorKind, Value};

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Integer { min: i64, max: i64 },
    /// Integers are accepted and widened.
    Real { min: f64, max: f64, open_min: bool },
    Bool,
    Angle,
    Choice(&'static [&'static str]),
    /// `none`, `hwp_upper`, `hwp_lower`, `qwp_pair` or `polarizer:<angle>`.
    Eraser,
    /// An angle, or `none` for no marker.
    Marker,
}

const POSITIVE: Kind = Kind::Real { min: 0.0, max: f64::INFINITY, open_min: true };
const NON_NEGATIVE: Kind = Kind::Real { min: 0.0, max: f64::INFINITY, open_min: false };
const REAL: Kind = Kind::Real { min: f64::NEG_INFINITY, max: f64::INFINITY, open_min: false };

impl Kind {
    pub fn describe(&self) -> String {
        match self {
            Kind::Integer { min, max } => format!("integer in [{min}, {max}]"),
            Kind::Real { min, max, open_min } => match (min.is_finite(), max.is_finite()) {
                (false, false) => "real".into(),
                (true, false) if *open_min => format!("real > {min}"),
                (true, false) => format!("real >= {min}"),
                _ => format!("real in [{min}, {max}]"),
            },
            Kind::Bool => "boolean".into(),
            Kind::Angle => "angle (deg|rad)".into(),
            Kind::Choice(c) => c.join(" | "),
            Kind::Eraser => "none | hwp_upper | hwp_lower | qwp_pair | polarizer:<angle>".into(),
            Kind::Marker => "none | angle (deg|rad)".into(),
        }
    }

    pub fn check(&self, key: &str, v: &Value) -> Result<(), ErrorKind> {
        let expected = || mismatch(key, &self.describe(), v);
        match *self {
            Kind::Integer { min, max } => match v {
                Value::Integer(n) if (min..=max).contains(n) => Ok(()),
                Value::Integer(_) => Err(range(key, &format!("expected {}", self.describe()))),
                _ => Err(expected()),
            },
            Kind::Real { min, max, open_min } => {
                let x = v.as_real().ok_or_else(expected)?;
                let above = if open_min { x > min } else { x >= min };
                if above && x <= max {
                    Ok(())
                } else {
                    Err(range(key, &format!("expected {}", self.describe())))
                }
            }
            Kind::Bool => matches!(v, Value::Bool(_)).then_some(()).ok_or_else(expected),
            Kind::Angle => v.radians().map(|_| ()).ok_or_else(|| match v {
                Value::Integer(_) | Value::Real(_) => {
                    mismatch(key, "an angle with a `deg` or `rad` suffix", v)
                }
                _ => expected(),
            }),
            Kind::Choice(options) => match v {
                Value::Word(w) if options.contains(&w.as_str()) => Ok(()),
                _ => Err(expected()),
            },
            Kind::Eraser => match v {
                Value::Word(w) if eraser_angle(w).is_some() => Ok(()),
                Value::Word(w) if ["none", "hwp_upper", "hwp_lower", "qwp_pair"].contains(&w.as_str()) => Ok(()),
                _ => Err(expected()),
            },
            Kind::Marker => match v {
                Value::Angle { .. } => Ok(()),
                Value::Word(w) if w == "none" => Ok(()),
                _ => Err(expected()),
            },
        }
    }
}

/// Polarizer angle in radians for `polarizer:<angle>`.
pub fn eraser_angle(word: &str) -> Option<f64> {
    parse_angle(word.strip_prefix("polarizer:")?)?.radians()
}

#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub key: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct Schema {
    pub name: &'static str,
    pub about: &'static str,
    pub uses_seed: bool,
    pub uses_screen: bool,
    pub fields: &'static [Field],
}

const fn field(key: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Field {
    Field { key, kind, default, help }
}

pub const SCREEN_FIELDS: &[Field] = &[
    field("x_min", REAL, "-10.0", "left edge of the screen"),
    field("x_max", REAL, "10.0", "right edge of the screen"),
    field("points", Kind::Integer { min: 3, max: 1_000_000 }, "401", "screen samples"),
    field("a", POSITIVE, "2.5", "half the slit separation"),
    field("sigma", POSITIVE, "2.5", "envelope width"),
    field("kappa", NON_NEGATIVE, "6.283185307179586", "fringe wavenumber"),
    field("center_phase", Kind::Angle, "90 deg", "phase offset; 90 deg puts a dark fringe at x = 0"),
];

pub const SCHEMAS: &[Schema] = &[
    Schema {
        name: "wheeler",
        about: "delayed choice between a screen and two which-path detectors",
        uses_seed: false,
        uses_screen: true,
        fields: &[field("choice", Kind::Choice(&["interference", "which_path"]), "interference", "what the photon meets")],
    },
    Schema {
        name: "double_slit_eraser",
        about: "polarization-marked double slit with an optional eraser",
        uses_seed: false,
        uses_screen: true,
        fields: &[
            field("marker", Kind::Marker, "none", "polarization rotation of the lower slit"),
            field("eraser", Kind::Eraser, "none", "eraser placed after the slits"),
        ],
    },
    Schema {
        name: "herzog",
        about: "two-crystal coincidence interference with quarter-wave marker and filter",
        uses_seed: false,
        uses_screen: false,
        fields: &[
            field("qwp", Kind::Bool, "false", "quarter-wave plates mark the idler path"),
            field("filter", Kind::Bool, "false", "45 deg polarizer on the signal photon"),
            field("phase_step", Kind::Angle, "5 deg", "spacing of the phase scan"),
            field("phase_span", Kind::Angle, "360 deg", "extent of the phase scan"),
        ],
    },
    Schema {
        name: "free_will",
        about: "entangled-pair eraser; the second photon's detector choice is delayed",
        uses_seed: false,
        uses_screen: true,
        fields: &[field("choice", Kind::Choice(&["push", "not_push"]), "push", "push keeps which-path information")],
    },
    Schema {
        name: "entanglement_swapping",
        about: "Victor's delayed Bell or separable measurement on photons 2 and 3",
        uses_seed: true,
        uses_screen: false,
        fields: &[field("victor", Kind::Choice(&["bell", "separable"]), "bell", "Victor's measurement")],
    },
    Schema {
        name: "tradeoff",
        about: "interference/correlation trade-off and the mapping unitary",
        uses_seed: false,
        uses_screen: false,
        fields: &[],
    },
    Schema {
        name: "brainwash",
        about: "observation followed by its undoing",
        uses_seed: false,
        uses_screen: false,
        fields: &[field(
            "variant",
            Kind::Choice(&["inverse", "alt_unitary", "beamsplitter_double_pass", "switching_unit"]),
            "inverse",
            "how the observation is reversed",
        )],
    },
    Schema {
        name: "nocomm",
        about: "seeded sweep of Bob-confined operations against Alice's reduced state",
        uses_seed: true,
        uses_screen: false,
        fields: &[
            field("cases", Kind::Integer { min: 1, max: 1_000_000 }, "1000", "random operations to try"),
            field("tol", POSITIVE, "1e-10", "allowed deviation of Alice's state"),
        ],
    },
    Schema {
        name: "temporal",
        about: "detection-time densities and their conditionals",
        uses_seed: false,
        uses_screen: false,
        fields: &[
            field("scenario", Kind::Choice(&["decay", "cat", "passive_zeno"]), "decay", "evolving state"),
            field("lambda", POSITIVE, "1.0", "decay rate"),
            field("total", POSITIVE, "1.0", "passive Zeno flight time T"),
            field("t0", NON_NEGATIVE, "0.2", "conditioning time"),
            field("t", NON_NEGATIVE, "0.6", "evaluation time, after t0"),
            field("dt", POSITIVE, "0.001", "next-interval width"),
            field("step", POSITIVE, "0.0001", "finite-difference step"),
            field("points", Kind::Integer { min: 2, max: 100_000 }, "201", "samples of the CDF curve"),
        ],
    },
    Schema {
        name: "zeno",
        about: "survival under n equally spaced measurements",
        uses_seed: false,
        uses_screen: false,
        fields: &[
            field("total", POSITIVE, "1.5707963267948966", "total evolution time"),
            field("max_n", Kind::Integer { min: 1, max: 1 << 20 }, "128", "largest measurement count (powers of two)"),
        ],
    },
    Schema {
        name: "histories",
        about: "consistency of the two-slit history family",
        uses_seed: false,
        uses_screen: false,
        fields: &[field("marked", Kind::Bool, "false", "record the path in a marker qubit")],
    },
    Schema {
        name: "time_ordering",
        about: "seeded check that spacelike measurement order is irrelevant",
        uses_seed: true,
        uses_screen: false,
        fields: &[field("cases", Kind::Integer { min: 1, max: 1_000_000 }, "20", "random cases")],
    },
];

pub fn schema_for(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

/// Text printed by `--list`.
pub fn listing() -> String {
    let mut out = String::new();
    let line = |out: &mut String, f: &Field| {
        out.push_str(&format!("  {} = {}    # {}; {}\n", f.key, f.default, f.kind.describe(), f.help));
    };
    for s in SCHEMAS {
        out.push_str(&format!("{}: {}\n", s.name, s.about));
        for f in s.fields {
            line(&mut out, f);
        }
        if s.uses_seed {
            out.push_str("  (uses seed and shots)\n");
        }
        if s.uses_screen {
            out.push_str("  (uses [screen])\n");
        }
        out.push('\n');
    }
    out.push_str("[screen]\n");
    for f in SCREEN_FIELDS {
        line(&mut out, f);
    }
    out.push_str("\ncommon: seed = 0, shots = 10000, csv = true, ascii = false\n");
    out
}
