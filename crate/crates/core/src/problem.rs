//! Problem files: a group, a character, named objects and a list of queries,
//! answered in parallel into an ordered report bundle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::ext::{ext1, hom_f};
use crate::filtered::{FilteredObject, Mode, Piece};
use crate::gmodule::{GModule, TwistCharacter};
use crate::group::{FiniteGroup, GSet, Group, GroupDescriptor, GroupHom, Perm, Subgroup};
use crate::report::{ExtReport, ExtValue, Method};
use crate::resolution::{check_complex, corpus, ComplexDescriptor, FiniteComplex};
use crate::ring::{big_ring, koszulity_probe, CONJECTURE_FACING};
use crate::theta::{describe, ext_bounds, theta_report, tower_colimit};
use crate::zm::ZmMatrix;

/// Seed used for sampled checks when the problem file does not set one.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub modulus: u64,
    pub group: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistDescriptor>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectDescriptor>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

fn default_mode() -> Mode {
    Mode::F
}

/// Character values, one per group element or one per generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDescriptor {
    pub character: Vec<u64>,
}

/// `{"rank": r, "action": {"0": [[..]], ...}}`, keyed by generator index.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDescriptor {
    pub rank: usize,
    pub action: BTreeMap<String, Vec<Vec<u64>>>,
}

/// A finite G-set by its generator action, 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDescriptor {
    pub size: usize,
    pub generators: Vec<Vec<usize>>,
}

/// The graded piece of one weight. Without `gset`, `cosets` or `module` it
/// is a single point.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gset: Option<GSetDescriptor>,
    /// Generators (1-based permutations) of `H`; the piece is `Z/m[G/H]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosets: Option<Vec<Vec<usize>>>,
    /// A general module; rejected in mode F.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDescriptor>,
    /// Must equal the weight when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
}

/// `{"mode": .., "weights": {"w": piece}, "u": {"generator_index": matrix}}`.
///
/// Each `u` matrix is the strictly weight-raising part of the generator's
/// action, in the basis that lists the pieces by descending weight.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilteredDescriptor {
    /// Must equal the problem's mode when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub weights: BTreeMap<String, PieceDescriptor>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub u: BTreeMap<String, Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectDescriptor {
    /// `Z/m(j)`.
    Tate {
        tate: i64,
    },
    Filtered(FilteredDescriptor),
}

/// One level of a tower above the problem group: a group and the images of
/// its generators in the previous level (1-based permutations).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerStep {
    pub group: GroupDescriptor,
    pub map: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    /// `H^degree(G, M)` for the underlying module of `object`, or `μ^{⊗twist}`.
    Cohomology {
        degree: usize,
        #[serde(default)]
        object: Option<String>,
        #[serde(default)]
        twist: Option<i64>,
    },
    /// `Ext^degree_F(source, target)`; degree 0 is Hom.
    Ext {
        source: String,
        target: String,
        degree: usize,
    },
    /// `θ` comparison in bidegree `(degree, twist)`.
    Theta { degree: usize, twist: i64 },
    /// Koszulity probe up to internal degree `degree`.
    Koszul { degree: usize },
    /// `H^i(G_k, μ^{⊗j})` along a tower ending at the problem group.
    Tower {
        degree: usize,
        twist: i64,
        levels: Vec<TowerStep>,
    },
    /// Identity checks of the resolution functor on one complex.
    PCheck {
        #[serde(default)]
        corpus: Option<String>,
        #[serde(default)]
        complex: Option<ComplexDescriptor>,
        #[serde(default = "default_depth")]
        depth: usize,
    },
}

fn default_depth() -> usize {
    2
}

impl Query {
    pub fn op(&self) -> &'static str {
        match self {
            Query::Cohomology { .. } => "cohomology",
            Query::Ext { .. } => "ext",
            Query::Theta { .. } => "theta",
            Query::Koszul { .. } => "koszul",
            Query::Tower { .. } => "tower",
            Query::PCheck { .. } => "p-check",
        }
    }
}

/// Result of one query. Every payload carries its method and certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QueryOutcome {
    Ok {
        index: usize,
        op: &'static str,
        method: Method,
        certified: bool,
        result: serde_json::Value,
    },
    Error {
        index: usize,
        op: &'static str,
        budget: bool,
        message: String,
    },
}

impl QueryOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, QueryOutcome::Ok { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportBundle {
    pub modulus: u64,
    pub group_order: usize,
    pub mode: Mode,
    pub reports: Vec<QueryOutcome>,
}

impl ReportBundle {
    /// 0 when every query succeeded, 3 when a failure was a budget violation,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let errors: Vec<bool> = self
            .reports
            .iter()
            .filter_map(|r| match r {
                QueryOutcome::Error { budget, .. } => Some(*budget),
                QueryOutcome::Ok { .. } => None,
            })
            .collect();
        match errors.as_slice() {
            [] => 0,
            e if e.iter().all(|&b| b) => 3,
            _ => 1,
        }
    }
}

/// Parses a problem file, reporting schema violations with a JSON path.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(
            if path.is_empty() || path == "?" {
                "$".into()
            } else {
                path
            },
            e.into_inner().to_string(),
        )
    })
}

/// A problem with its group, character and objects resolved.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub group: Group,
    pub chi: TwistCharacter,
    pub objects: BTreeMap<String, FilteredObject>,
}

fn perm_of(images: &[usize], degree: usize, path: &str) -> Result<Perm> {
    images
        .iter()
        .map(|&x| {
            if x == 0 || x > degree {
                Err(Error::schema(
                    path,
                    format!("image {x} outside 1..={degree}"),
                ))
            } else {
                Ok((x - 1) as u32)
            }
        })
        .collect()
}

fn schema_at(path: String) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Schema { .. } => e,
        other => Error::schema(path, other.to_string()),
    }
}

impl Problem {
    /// Resolves references and validates the group, character and objects.
    /// Every failure here is a schema error.
    pub fn resolve(file: ProblemFile) -> Result<Problem> {
        let m = file.modulus;
        if m < 2 {
            return Err(Error::schema("modulus", "must be at least 2"));
        }
        let group = FiniteGroup::from_descriptor(&file.group).map_err(schema_at("group".into()))?;
        let chi = match &file.twist {
            None => Ok(TwistCharacter::trivial(&group, m)),
            Some(t) if t.character.len() == group.order() => {
                TwistCharacter::new(&group, m, t.character.clone())
            }
            Some(t) => TwistCharacter::from_generator_values(&group, m, &t.character),
        }
        .map_err(schema_at("twist.character".into()))?;
        let mut objects = BTreeMap::new();
        for (name, desc) in &file.objects {
            let path = format!("objects.{name}");
            let obj =
                build_object(&group, &chi, file.mode, desc, &path).map_err(schema_at(path))?;
            objects.insert(name.clone(), obj);
        }
        let names = |n: &str, path: String| -> Result<()> {
            if objects.contains_key(n) {
                Ok(())
            } else {
                Err(Error::schema(path, format!("unknown object {n:?}")))
            }
        };
        for (k, q) in file.queries.iter().enumerate() {
            match q {
                Query::Ext { source, target, .. } => {
                    names(source, format!("queries[{k}].source"))?;
                    names(target, format!("queries[{k}].target"))?;
                }
                Query::Cohomology { object, twist, .. } => match (object, twist) {
                    (Some(o), None) => names(o, format!("queries[{k}].object"))?,
                    (None, Some(_)) => {}
                    _ => {
                        return Err(Error::schema(
                            format!("queries[{k}]"),
                            "give exactly one of object, twist",
                        ))
                    }
                },
                Query::PCheck {
                    corpus, complex, ..
                } => {
                    if corpus.is_some() == complex.is_some() {
                        return Err(Error::schema(
                            format!("queries[{k}]"),
                            "give exactly one of corpus, complex",
                        ));
                    }
                }
                Query::Tower { levels, .. } if levels.is_empty() => {
                    return Err(Error::schema(
                        format!("queries[{k}].levels"),
                        "a tower needs at least one level",
                    ));
                }
                _ => {}
            }
        }
        Ok(Problem {
            file,
            group,
            chi,
            objects,
        })
    }

    pub fn seed(&self) -> u64 {
        self.file.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Answers every query; reports keep the input order.
    pub fn run(&self) -> ReportBundle {
        let reports = self
            .file
            .queries
            .par_iter()
            .enumerate()
            .map(|(index, q)| match self.answer(q) {
                Ok((method, certified, result)) => QueryOutcome::Ok {
                    index,
                    op: q.op(),
                    method,
                    certified,
                    result,
                },
                Err(e) => QueryOutcome::Error {
                    index,
                    op: q.op(),
                    budget: e.is_budget(),
                    message: e.to_string(),
                },
            })
            .collect();
        ReportBundle {
            modulus: self.file.modulus,
            group_order: self.group.order(),
            mode: self.file.mode,
            reports,
        }
    }

    fn answer(&self, q: &Query) -> Result<(Method, bool, serde_json::Value)> {
        let budget = &self.file.budget;
        match q {
            Query::Cohomology {
                degree,
                object,
                twist,
            } => {
                let module = match (object, twist) {
                    (Some(o), _) => self.objects[o].module(),
                    (None, Some(j)) => GModule::mu_tensor(&self.chi, *j),
                    (None, None) => unreachable!("validated"),
                };
                let h = cohomology(&module, *degree, budget)?;
                Ok((Method::BarComplex, true, json(&h.shape())))
            }
            Query::Ext {
                source,
                target,
                degree,
            } => {
                let (m, n) = (&self.objects[source], &self.objects[target]);
                let report = ext_report(m, n, *degree, budget)?;
                Ok((report.method, report.certified, json(&report)))
            }
            Query::Theta { degree, twist } => {
                let r = theta_report(&self.chi, self.file.mode, *degree, *twist, budget)?;
                Ok((r.method, r.certified, json(&r)))
            }
            Query::Koszul { degree } => {
                let ring = big_ring(&self.chi, *degree, budget)?;
                let probe = koszulity_probe(&ring, *degree, budget)?;
                debug_assert_eq!(probe.label, CONJECTURE_FACING);
                Ok((Method::Cobar, false, json(&probe)))
            }
            Query::Tower {
                degree,
                twist,
                levels,
            } => {
                let mut prev = self.group.clone();
                let mut maps = Vec::new();
                for step in levels {
                    let g = FiniteGroup::from_descriptor(&step.group)?;
                    let perms = step
                        .map
                        .iter()
                        .map(|p| perm_of(p, prev.degree(), "map"))
                        .collect::<Result<Vec<_>>>()?;
                    maps.push(GroupHom::from_generator_perms(&g, &prev, &perms)?);
                    prev = g;
                }
                let r = tower_colimit(&self.chi, &maps, *degree, *twist, budget)?;
                Ok((r.report.method, r.report.certified, json(&r)))
            }
            Query::PCheck {
                corpus: name,
                complex,
                depth,
            } => {
                let (label, cx) = match (name, complex) {
                    (Some(n), _) => (n.clone(), corpus()?.complex(n)?),
                    (None, Some(c)) => ("inline".to_string(), FiniteComplex::from_descriptor(c)?),
                    _ => unreachable!("validated"),
                };
                let r = check_complex(&label, &cx, *depth, self.seed(), budget)?;
                Ok((Method::BarComplex, true, json(&r)))
            }
        }
    }
}

/// `Ext^k_F(m, n)`: Hom, the cocycle computation, or long-exact-sequence bounds.
pub fn ext_report(
    m: &FilteredObject,
    n: &FilteredObject,
    degree: usize,
    budget: &Budget,
) -> Result<ExtReport> {
    match degree {
        0 => {
            let h = hom_f(m, n)?;
            Ok(ExtReport::new(
                describe(m),
                describe(n),
                0,
                ExtValue::exact(h.shape()),
                Method::HomDirect,
            ))
        }
        1 => {
            let e = ext1(m, n, budget)?;
            Ok(ExtReport::new(
                describe(m),
                describe(n),
                1,
                ExtValue::exact(e.shape()),
                Method::Ext1Cocycle,
            ))
        }
        k => ext_bounds(m, n, k, budget),
    }
}

fn json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn build_object(
    group: &Group,
    chi: &TwistCharacter,
    mode: Mode,
    desc: &ObjectDescriptor,
    path: &str,
) -> Result<FilteredObject> {
    let m = chi.modulus();
    let desc = match desc {
        ObjectDescriptor::Tate { tate } => return Ok(FilteredObject::tate(mode, chi, *tate)),
        ObjectDescriptor::Filtered(d) => d,
    };
    if desc.mode.is_some_and(|own| own != mode) {
        return Err(Error::schema(
            format!("{path}.mode"),
            format!("differs from the problem mode {mode}"),
        ));
    }
    let built = desc
        .weights
        .iter()
        .map(|(key, p)| {
            let at = format!("{path}.weights.{key}");
            let w: i64 = key
                .parse()
                .map_err(|_| Error::schema(at.clone(), "weight keys are integers"))?;
            if p.twist.is_some_and(|t| t != w) {
                return Err(Error::schema(
                    format!("{at}.twist"),
                    "the twist of a piece equals its weight",
                ));
            }
            build_piece(group, chi, p, w, &at)
        })
        .collect::<Result<Vec<_>>>()?;
    if desc.u.is_empty() {
        return FilteredObject::split(mode, chi, built);
    }
    let rank: usize = built.iter().map(Piece::rank).sum();
    let mut mats = vec![ZmMatrix::zeros(m, rank, rank); group.generators().len()];
    for (key, rows) in &desc.u {
        let at = format!("{path}.u.{key}");
        let k: usize = key
            .parse()
            .ok()
            .filter(|&k| k < mats.len())
            .ok_or_else(|| Error::schema(at.clone(), format!("bad generator index {key:?}")))?;
        if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
            return Err(Error::schema(
                at,
                format!("expected a {rank}x{rank} matrix"),
            ));
        }
        mats[k] = ZmMatrix::from_residue_rows(m, rank, rows);
    }
    FilteredObject::with_gluing(mode, chi, built, &mats)
}

fn build_piece(
    group: &Group,
    chi: &TwistCharacter,
    p: &PieceDescriptor,
    weight: i64,
    path: &str,
) -> Result<Piece> {
    let given = [p.gset.is_some(), p.cosets.is_some(), p.module.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given > 1 {
        return Err(Error::schema(
            path,
            "give at most one of gset, cosets, module",
        ));
    }
    if let Some(g) = &p.gset {
        let images = g
            .generators
            .iter()
            .map(|img| {
                perm_of(img, g.size, &format!("{path}.gset"))
                    .map(|v| v.into_iter().map(|x| x as usize).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        return Ok(Piece::permutational(
            GSet::from_generator_action(group, g.size, &images)?,
            chi,
            weight,
        ));
    }
    if let Some(gens) = &p.cosets {
        let perms = gens
            .iter()
            .map(|g| perm_of(g, group.degree(), &format!("{path}.cosets")))
            .collect::<Result<Vec<_>>>()?;
        let h = Subgroup::generated_by(group, &perms)?;
        return Ok(Piece::permutational(GSet::coset_space(&h), chi, weight));
    }
    if let Some(md) = &p.module {
        let m = chi.modulus();
        let mut gens = vec![None; group.generators().len()];
        for (key, rows) in &md.action {
            let k: usize = key
                .parse()
                .ok()
                .filter(|&k| k < gens.len())
                .ok_or_else(|| {
                    Error::schema(
                        format!("{path}.module.action"),
                        format!("bad generator index {key:?}"),
                    )
                })?;
            if rows.len() != md.rank || rows.iter().any(|r| r.len() != md.rank) {
                return Err(Error::schema(
                    format!("{path}.module.action.{key}"),
                    "matrix does not match the rank",
                ));
            }
            gens[k] = Some(ZmMatrix::from_residue_rows(m, md.rank, rows));
        }
        let gens: Vec<ZmMatrix> = gens
            .into_iter()
            .map(|g| g.unwrap_or_else(|| ZmMatrix::identity(m, md.rank)))
            .collect();
        return Ok(Piece::general(
            GModule::from_generator_action(group, m, md.rank, &gens)?,
            weight,
        ));
    }
    Ok(Piece::permutational(GSet::point(group), chi, weight))
}

/// Parses, resolves and runs a problem given as JSON text.
pub fn run_text(text: &str) -> Result<ReportBundle> {
    Ok(Problem::resolve(parse_problem(text)?)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2_M2: &str = include_str!("../../../problems/z2_m2.json");

    #[test]
    fn empty_query_list() {
        let b =
            run_text(r#"{"modulus": 2, "group": {"degree": 2, "generators": [[2, 1]]}}"#).unwrap();
        assert!(b.reports.is_empty());
        assert_eq!(b.exit_code(), 0);
    }

    #[test]
    fn schema_errors_carry_paths() {
        assert!(matches!(parse_problem("{"), Err(Error::Schema { .. })));
        let e = parse_problem(r#"{"modulus": 2, "group": {"degree": 2}, "queries": [{"op": "theta", "degree": "x", "twist": 0}]}"#)
            .unwrap_err();
        assert!(
            matches!(e, Error::Schema { ref path, .. } if path.starts_with("queries[0]")),
            "{e}"
        );
        let f = parse_problem(
            r#"{"modulus": 2, "group": {"degree": 1}, "queries": [{"op": "ext", "source": "a", "target": "b", "degree": 1}]}"#,
        )
        .unwrap();
        let e = Problem::resolve(f).unwrap_err();
        assert!(
            matches!(e, Error::Schema { ref path, .. } if path == "queries[0].source"),
            "{e}"
        );
        let f = parse_problem(r#"{"modulus": 4, "group": {"degree": 2, "generators": [[2, 1]]}, "twist": {"character": [2]}}"#)
            .unwrap();
        assert!(
            matches!(Problem::resolve(f), Err(Error::Schema { ref path, .. }) if path == "twist.character")
        );
    }

    #[test]
    fn shipped_example_is_certified() {
        let b = run_text(Z2_M2).unwrap();
        assert_eq!(b.reports.len(), 12);
        for r in &b.reports {
            let QueryOutcome::Ok {
                op,
                result,
                certified,
                ..
            } = r
            else {
                panic!("{r:?}")
            };
            assert!(certified);
            if *op == "theta" {
                let v = result["verdict"].as_str().unwrap();
                assert!(v == "ISO" || v == "MONO", "{v}");
            }
        }
        assert_eq!(b.exit_code(), 0);
    }

    #[test]
    fn bundles_are_deterministic() {
        let text = r#"{"modulus": 2, "group": {"degree": 2, "generators": [[2, 1]]},
            "objects": {"one": {"tate": 0}, "ext": {"weights": {"1": {}, "0": {}}, "u": {"0": [[0, 1], [0, 0]]}}},
            "queries": [{"op": "ext", "source": "one", "target": "ext", "degree": 1},
                        {"op": "cohomology", "twist": 1, "degree": 2},
                        {"op": "p-check", "corpus": "z2_sq"},
                        {"op": "ext", "source": "ext", "target": "one", "degree": 2}]}"#;
        let a = serde_json::to_string(&run_text(text).unwrap()).unwrap();
        let b = serde_json::to_string(&run_text(text).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"method\""));
    }

    #[test]
    fn budget_errors_map_to_exit_three() {
        let text = r#"{"modulus": 2, "group": {"degree": 2, "generators": [[2, 1]]},
            "budget": {"degree_cap": 1}, "queries": [{"op": "cohomology", "twist": 0, "degree": 3}]}"#;
        assert_eq!(run_text(text).unwrap().exit_code(), 3);
    }

    #[test]
    fn object_descriptors_are_validated() {
        let path_of = |object: &str| {
            let text = format!(
                r#"{{"modulus": 2, "group": {{"degree": 2, "generators": [[2, 1]]}}, "objects": {{"x": {object}}}}}"#
            );
            match Problem::resolve(parse_problem(&text).unwrap()) {
                Err(Error::Schema { path, .. }) => path,
                other => panic!("{object}: {other:?}"),
            }
        };
        assert_eq!(
            path_of(r#"{"mode": "Fprime", "weights": {"0": {}}}"#),
            "objects.x.mode"
        );
        assert_eq!(
            path_of(r#"{"weights": {"one": {}}}"#),
            "objects.x.weights.one"
        );
        assert_eq!(
            path_of(r#"{"weights": {"1": {"twist": 0}}}"#),
            "objects.x.weights.1.twist"
        );
        assert_eq!(
            path_of(r#"{"weights": {"1": {}, "0": {}}, "u": {"1": [[0, 1], [0, 0]]}}"#),
            "objects.x.u.1"
        );
        assert_eq!(
            path_of(r#"{"weights": {"1": {}, "0": {}}, "u": {"0": [[0, 1]]}}"#),
            "objects.x.u.0"
        );
        // a gluing that lowers the weight
        assert_eq!(
            path_of(r#"{"weights": {"1": {}, "0": {}}, "u": {"0": [[0, 0], [1, 0]]}}"#),
            "objects.x"
        );
    }

    #[test]
    fn weights_may_be_listed_in_any_order() {
        let text = r#"{"modulus": 2, "group": {"degree": 2, "generators": [[2, 1]]},
            "objects": {"a": {"weights": {"0": {}, "1": {}}, "u": {"0": [[0, 1], [0, 0]]}},
                        "b": {"weights": {"1": {}, "0": {}}, "u": {"0": [[0, 1], [0, 0]]}}}}"#;
        let p = Problem::resolve(parse_problem(text).unwrap()).unwrap();
        assert_eq!(p.objects["a"], p.objects["b"]);
        assert_eq!(p.objects["a"].weights(), vec![1, 0]);
        assert!(!p.objects["a"].is_split());
    }
}
