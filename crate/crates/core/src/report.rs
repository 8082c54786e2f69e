//! Report values shared by the Ext engine and the command line.

use serde::{Serialize, Serializer};

use crate::zm::{ModuleShape, Order};

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// How a reported number was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Fixed points of the filtered Hom space.
    HomDirect,
    /// Strictly-triangular cocycles modulo filtered coboundaries.
    Ext1Cocycle,
    /// Long exact sequences over weight truncations.
    LesReduction,
    /// Cobar complex of the big graded ring (conditional on Koszulity).
    Cobar,
    /// Truncated group cohomology, certified by the low-degree comparison theorem.
    #[serde(rename = "paper_theorem_base")]
    TheoremBase,
    /// Weight vanishing: no nonzero filtered maps in the obstructing direction.
    WeightVanishing,
    /// Per-level values along a tower of finite quotients.
    Tower,
    /// Group cohomology through the bar complex.
    BarComplex,
}

/// Comparison verdict for `θ: Ext^i(1, 1(j)) → τ H^i(G, μ^{⊗j})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Iso,
    Mono,
    Mismatch,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Iso => "ISO",
            Verdict::Mono => "MONO",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

/// An exact module, or bounds on its order: `lower` divides the order and,
/// when present, the order divides `upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtValue {
    Exact { shape: ModuleShape, order: Order },
    Interval { lower: Order, upper: Option<Order> },
}

impl ExtValue {
    pub fn exact(shape: ModuleShape) -> Self {
        let order = shape.order();
        ExtValue::Exact { shape, order }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::exact(ModuleShape::zero(modulus))
    }

    pub fn shape(&self) -> Option<&ModuleShape> {
        match self {
            ExtValue::Exact { shape, .. } => Some(shape),
            ExtValue::Interval { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExtValue::Exact { .. })
    }

    pub fn lower(&self) -> Order {
        match self {
            ExtValue::Exact { order, .. } => order.clone(),
            ExtValue::Interval { lower, .. } => lower.clone(),
        }
    }

    pub fn upper(&self) -> Option<Order> {
        match self {
            ExtValue::Exact { order, .. } => Some(order.clone()),
            ExtValue::Interval { upper, .. } => upper.clone(),
        }
    }

    /// Whether a known order is compatible with these bounds.
    pub fn admits(&self, order: &Order) -> bool {
        self.lower().divides(order) && self.upper().is_none_or(|u| order.divides(&u))
    }

    /// Interval from bounds, upgraded to an exact value when the bounds force
    /// the isomorphism type (equal orders that are squarefree, or trivial).
    pub fn from_bounds(modulus: u64, lower: Order, upper: Option<Order>) -> Self {
        if let Some(u) = &upper {
            if *u == lower {
                if let Some(shape) = forced_shape(modulus, &lower) {
                    return Self::exact(shape);
                }
            }
        }
        ExtValue::Interval { lower, upper }
    }
}

/// A module of the given order over Z/m whose isomorphism type is forced.
fn forced_shape(modulus: u64, order: &Order) -> Option<ModuleShape> {
    let n = order.as_u128()?;
    if n == 1 {
        return Some(ModuleShape::zero(modulus));
    }
    let squarefree = crate::zm::arith::factorize(n as u64)
        .iter()
        .all(|&(_, e)| e == 1);
    (squarefree && (modulus as u128).is_multiple_of(n))
        .then(|| ModuleShape::from_factors(modulus, &[n as u64]))
}

impl std::fmt::Display for ExtValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtValue::Exact { shape, .. } => write!(f, "{shape}"),
            ExtValue::Interval { lower, upper } => match upper {
                Some(u) => write!(f, "order in [{lower}, {u}]"),
                None => write!(f, "order >= {lower}"),
            },
        }
    }
}

/// One computed Ext group with its provenance and comparison data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtReport {
    pub source: String,
    pub target: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    pub value: ExtValue,
    pub method: Method,
    /// False for values that rest on the open Koszulity question or on
    /// finitely many tower levels.
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<ModuleShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated_target: Option<ModuleShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExtReport {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        degree: usize,
        value: ExtValue,
        method: Method,
    ) -> Self {
        ExtReport {
            source: source.into(),
            target: target.into(),
            degree,
            twist: None,
            value,
            method,
            certified: true,
            cohomology: None,
            truncated_target: None,
            verdict: None,
            notes: Vec::new(),
        }
    }
}
