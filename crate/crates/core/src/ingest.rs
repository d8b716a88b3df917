//! Tree-ensemble models: JSON parsing, discretization of continuous features
//! into intervals, lifting of raw points and conversion of trees to
//! multi-valued class expressions.
//!
//! Every internal node tests `feature < threshold`; the `true` child is taken
//! when the test holds. For a categorical feature the test compares the
//! zero-based position of the category in its declared list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::mvl::{Instance, MvExpression, MvSpace, MvTerm, MvVariable, Value, ValueSet, VarId};

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    Continuous { thresholds: Vec<f64> },
    Categorical { categories: Vec<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub id: i64,
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    fn domain_size(&self) -> usize {
        match &self.kind {
            FeatureKind::Continuous { thresholds } => thresholds.len() + 1,
            FeatureKind::Categorical { categories } => categories.len(),
        }
    }

    /// Values whose interval lies entirely below `threshold`, or `None` when
    /// `threshold` cuts through an interval.
    fn values_below(&self, threshold: f64) -> Option<ValueSet> {
        match &self.kind {
            FeatureKind::Continuous { thresholds } => {
                let k = thresholds.iter().position(|&t| t == threshold)?;
                Some((1..=k as Value + 1).collect())
            }
            FeatureKind::Categorical { categories } => Some(
                (1..=categories.len() as Value)
                    .filter(|&v| ((v - 1) as f64) < threshold)
                    .collect(),
            ),
        }
    }

    /// Human-readable description of a set of values: merged interval unions
    /// for continuous features, a braced list for categorical ones.
    pub fn render(&self, values: &ValueSet) -> String {
        match &self.kind {
            FeatureKind::Continuous { thresholds } => {
                let mut runs: Vec<(Value, Value)> = Vec::new();
                for v in values.iter() {
                    match runs.last_mut() {
                        Some((_, hi)) if *hi + 1 == v => *hi = v,
                        _ => runs.push((v, v)),
                    }
                }
                let bound = |i: usize| format_threshold(thresholds[i]);
                let k = thresholds.len() as Value;
                runs.iter()
                    .map(|&(lo, hi)| {
                        let left = if lo == 1 {
                            "(-inf".to_string()
                        } else {
                            format!("[{}", bound(lo as usize - 2))
                        };
                        let right = if hi == k + 1 {
                            "+inf)".to_string()
                        } else {
                            format!("{})", bound(hi as usize - 1))
                        };
                        format!("{left}, {right}")
                    })
                    .collect::<Vec<_>>()
                    .join(" ∪ ")
            }
            FeatureKind::Categorical { categories } => {
                let names: Vec<&str> = values
                    .iter()
                    .map(|v| categories[v as usize - 1].as_str())
                    .collect();
                format!("{{{}}}", names.join(", "))
            }
        }
    }
}

fn format_threshold(t: f64) -> String {
    format!("{t}")
}

/// The discretized input space of a model.
///
/// Continuous features that no tree tests have a single interval and carry no
/// multi-valued variable; every other feature becomes one variable of
/// [`FeatureSpace::mv_space`], in feature-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    features: Vec<FeatureSpec>,
    var_of: Vec<Option<VarId>>,
    feature_of: Vec<usize>,
    mv: MvSpace,
}

impl FeatureSpace {
    pub fn new(mut features: Vec<FeatureSpec>) -> Result<Self> {
        features.sort_by_key(|f| f.id);
        let mut vars = Vec::new();
        let mut var_of = Vec::with_capacity(features.len());
        let mut feature_of = Vec::new();
        for (pos, f) in features.iter().enumerate() {
            if pos > 0 && features[pos - 1].id == f.id {
                return Err(Error::invalid("feature space", format!("duplicate feature id {}", f.id)));
            }
            if let FeatureKind::Continuous { thresholds } = &f.kind {
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid(
                        "feature space",
                        format!("thresholds of `{}` are not strictly increasing", f.name),
                    ));
                }
                if thresholds.iter().any(|t| !t.is_finite()) {
                    return Err(Error::invalid(
                        "feature space",
                        format!("`{}` has a non-finite threshold", f.name),
                    ));
                }
            }
            if f.domain_size() < 2 {
                var_of.push(None);
                continue;
            }
            let labels = (1..=f.domain_size() as Value)
                .map(|v| f.render(&ValueSet::single(v)))
                .collect();
            var_of.push(Some(vars.len()));
            feature_of.push(pos);
            vars.push(MvVariable::new(vars.len(), f.name.clone(), labels)?);
        }
        Ok(FeatureSpace {
            features,
            var_of,
            feature_of,
            mv: MvSpace::new(vars)?,
        })
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn mv_space(&self) -> &MvSpace {
        &self.mv
    }

    pub fn feature(&self, id: i64) -> Option<&FeatureSpec> {
        self.position(id).map(|p| &self.features[p])
    }

    fn position(&self, id: i64) -> Option<usize> {
        self.features.binary_search_by_key(&id, |f| f.id).ok()
    }

    /// The multi-valued variable of a feature, if it has one.
    pub fn var_of(&self, id: i64) -> Option<VarId> {
        self.position(id).and_then(|p| self.var_of[p])
    }

    /// The feature behind a multi-valued variable.
    pub fn feature_of_var(&self, var: VarId) -> &FeatureSpec {
        &self.features[self.feature_of[var]]
    }

    /// Returns a copy with extra thresholds merged into continuous features.
    pub fn refine(&self, extra: &BTreeMap<i64, Vec<f64>>) -> Result<Self> {
        let features = self
            .features
            .iter()
            .map(|f| {
                let mut f = f.clone();
                if let (FeatureKind::Continuous { thresholds }, Some(more)) = (&mut f.kind, extra.get(&f.id)) {
                    thresholds.extend(more.iter().copied());
                    thresholds.sort_by(f64::total_cmp);
                    thresholds.dedup();
                }
                f
            })
            .collect();
        Self::new(features)
    }

    /// A raw point inside the equivalence class of `inst`: interval midpoints,
    /// one below the lowest threshold and one above the highest for unbounded
    /// ends, category positions for categorical features. Features without a
    /// variable get 0.
    pub fn representative(&self, inst: &Instance) -> RawPoint {
        let mut point = RawPoint::default();
        for (pos, f) in self.features.iter().enumerate() {
            let value = match self.var_of[pos] {
                None => match &f.kind {
                    FeatureKind::Continuous { .. } => RawValue::Number(0.0),
                    FeatureKind::Categorical { categories } => {
                        RawValue::Category(categories.first().cloned().unwrap_or_default())
                    }
                },
                Some(var) => {
                    let v = inst.value(var).expect("instance over this space") as usize;
                    match &f.kind {
                        FeatureKind::Continuous { thresholds } => {
                            let k = thresholds.len();
                            RawValue::Number(if v == 1 {
                                thresholds[0] - 1.0
                            } else if v == k + 1 {
                                thresholds[k - 1] + 1.0
                            } else {
                                (thresholds[v - 2] + thresholds[v - 1]) / 2.0
                            })
                        }
                        FeatureKind::Categorical { categories } => {
                            RawValue::Category(categories[v - 1].clone())
                        }
                    }
                }
            };
            point.0.insert(f.id, value);
        }
        point
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Number(f64),
    Category(String),
}

/// A raw input: one value per feature id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawPoint(pub BTreeMap<i64, RawValue>);

impl RawPoint {
    /// Parses the instance document `{"<feature name>": number|string, ...}`.
    pub fn from_json(text: &str, space: &FeatureSpace) -> Result<Self> {
        let doc: Json = serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::parse("$", "instance must be an object"))?;
        let mut point = RawPoint::default();
        for (name, value) in obj {
            let path = format!("$.{name}");
            let f = space
                .features
                .iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| Error::parse(&path, format!("unknown feature `{name}`")))?;
            let raw = match value {
                Json::Number(n) => RawValue::Number(
                    n.as_f64()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::parse(&path, "number is not finite"))?,
                ),
                Json::String(s) => RawValue::Category(s.clone()),
                _ => return Err(Error::parse(&path, "expected a number or a string")),
            };
            point.0.insert(f.id, raw);
        }
        for f in &space.features {
            if !point.0.contains_key(&f.id) {
                return Err(Error::parse("$", format!("feature `{}` is not assigned", f.name)));
            }
        }
        Ok(point)
    }

    /// The numeric value used by tree tests: the number itself, or the
    /// category position for categorical features.
    fn numeric(&self, f: &FeatureSpec) -> Result<f64> {
        match (self.0.get(&f.id), &f.kind) {
            (None, _) => Err(Error::invalid("raw point", format!("feature `{}` is not assigned", f.name))),
            (Some(RawValue::Number(x)), FeatureKind::Continuous { .. }) => {
                if x.is_finite() {
                    Ok(*x)
                } else {
                    Err(Error::invalid("raw point", format!("`{}` is not finite", f.name)))
                }
            }
            (Some(RawValue::Category(c)), FeatureKind::Categorical { categories }) => categories
                .iter()
                .position(|k| k == c)
                .map(|p| p as f64)
                .ok_or_else(|| Error::invalid("raw point", format!("unknown category `{c}` for `{}`", f.name))),
            (Some(_), _) => Err(Error::invalid(
                "raw point",
                format!("value of `{}` has the wrong kind", f.name),
            )),
        }
    }

    pub fn to_json(&self, space: &FeatureSpace) -> serde_json::Map<String, Json> {
        let mut out = serde_json::Map::new();
        for f in &space.features {
            if let Some(v) = self.0.get(&f.id) {
                let j = match v {
                    RawValue::Number(x) => serde_json::Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
                    RawValue::Category(c) => Json::String(c.clone()),
                };
                out.insert(f.name.clone(), j);
            }
        }
        out
    }
}

/// Maps a raw point to its instance: each continuous value lands in the
/// interval `[t_{i-1}, t_i)` containing it, categories map by label.
pub fn lift_instance(raw: &RawPoint, space: &FeatureSpace) -> Result<Instance> {
    let mut values = Vec::with_capacity(space.mv.len());
    for var in space.mv.vars() {
        let f = space.feature_of_var(var.id());
        let x = raw.numeric(f)?;
        let v = match &f.kind {
            FeatureKind::Continuous { thresholds } => {
                thresholds.iter().filter(|&&t| t <= x).count() as Value + 1
            }
            FeatureKind::Categorical { .. } => x as Value + 1,
        };
        values.push(v);
    }
    Instance::new(&space.mv, values)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        feature: i64,
        threshold: f64,
        true_child: Box<TreeNode>,
        false_child: Box<TreeNode>,
    },
    Leaf {
        class: usize,
    },
}

impl TreeNode {
    pub fn leaf(class: usize) -> Self {
        TreeNode::Leaf { class }
    }

    pub fn split(feature: i64, threshold: f64, true_child: TreeNode, false_child: TreeNode) -> Self {
        TreeNode::Internal {
            feature,
            threshold,
            true_child: Box::new(true_child),
            false_child: Box::new(false_child),
        }
    }

    /// Follows the tests on a raw point.
    pub fn predict(&self, raw: &RawPoint, space: &FeatureSpace) -> Result<usize> {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class } => return Ok(*class),
                TreeNode::Internal {
                    feature,
                    threshold,
                    true_child,
                    false_child,
                } => {
                    let f = space
                        .feature(*feature)
                        .ok_or_else(|| Error::invalid("tree", format!("unknown feature id {feature}")))?;
                    node = if raw.numeric(f)? < *threshold {
                        true_child
                    } else {
                        false_child
                    };
                }
            }
        }
    }

    /// Follows the tests on a lifted instance.
    pub fn classify(&self, inst: &Instance, space: &FeatureSpace) -> Result<usize> {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class } => return Ok(*class),
                TreeNode::Internal {
                    feature,
                    threshold,
                    true_child,
                    false_child,
                } => {
                    let (var, below) = space.split_values(*feature, *threshold)?;
                    let v = inst.value(var).ok_or(Error::Unassigned(var))?;
                    node = if below.contains(v) { true_child } else { false_child };
                }
            }
        }
    }

    fn thresholds_into(&self, out: &mut BTreeMap<i64, BTreeSet<OrdF64>>) {
        if let TreeNode::Internal {
            feature,
            threshold,
            true_child,
            false_child,
        } = self
        {
            out.entry(*feature).or_default().insert(OrdF64(*threshold));
            true_child.thresholds_into(out);
            false_child.thresholds_into(out);
        }
    }

    fn max_class(&self) -> usize {
        match self {
            TreeNode::Leaf { class } => *class,
            TreeNode::Internal {
                true_child,
                false_child,
                ..
            } => true_child.max_class().max(false_child.max_class()),
        }
    }
}

impl FeatureSpace {
    /// The variable tested by `feature < threshold` and the values satisfying it.
    fn split_values(&self, feature: i64, threshold: f64) -> Result<(VarId, ValueSet)> {
        let f = self
            .feature(feature)
            .ok_or_else(|| Error::invalid("tree", format!("unknown feature id {feature}")))?;
        let var = self.var_of(feature).ok_or_else(|| {
            Error::invalid("tree", format!("feature `{}` is tested but has a single value", f.name))
        })?;
        let below = f.values_below(threshold).ok_or_else(|| {
            Error::invalid(
                "tree",
                format!("threshold {threshold} of `{}` is not an interval boundary", f.name),
            )
        })?;
        Ok((var, below))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<TreeNode>,
    n_classes: usize,
}

impl Forest {
    pub fn new(trees: Vec<TreeNode>, n_classes: usize) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::invalid("forest", "no trees"));
        }
        if n_classes < 2 {
            return Err(Error::invalid("forest", "n_classes must be at least 2"));
        }
        if let Some(c) = trees.iter().map(TreeNode::max_class).find(|&c| c >= n_classes) {
            return Err(Error::invalid(
                "forest",
                format!("leaf class {c} is not below n_classes = {n_classes}"),
            ));
        }
        Ok(Forest { trees, n_classes })
    }

    pub fn trees(&self) -> &[TreeNode] {
        &self.trees
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Per-class vote counts of the trees.
    pub fn votes(&self, decide: impl Fn(&TreeNode) -> Result<usize>) -> Result<Vec<usize>> {
        let mut votes = vec![0; self.n_classes];
        for t in &self.trees {
            votes[decide(t)?] += 1;
        }
        Ok(votes)
    }

    /// Plurality vote; ties go to the lowest class index. With two classes
    /// this is a strict majority for class 1.
    pub fn winner(votes: &[usize]) -> usize {
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best
    }

    pub fn predict(&self, raw: &RawPoint, space: &FeatureSpace) -> Result<usize> {
        Ok(Self::winner(&self.votes(|t| t.predict(raw, space))?))
    }

    pub fn classify(&self, inst: &Instance, space: &FeatureSpace) -> Result<usize> {
        Ok(Self::winner(&self.votes(|t| t.classify(inst, space))?))
    }

    /// Collects the thresholds of every continuous feature across all trees.
    pub fn thresholds(&self) -> BTreeMap<i64, Vec<f64>> {
        let mut out = BTreeMap::new();
        for t in &self.trees {
            t.thresholds_into(&mut out);
        }
        out.into_iter()
            .map(|(k, v)| (k, v.into_iter().map(|o| o.0).collect()))
            .collect()
    }
}

/// Declared feature before thresholds are collected.
#[derive(Debug, Clone)]
struct DeclaredFeature {
    id: i64,
    name: String,
    categories: Option<Vec<String>>,
}

/// Parses a model document and derives its feature space.
pub fn parse_model(document: &str) -> Result<(Forest, FeatureSpace)> {
    let doc: Json = serde_json::from_str(document).map_err(|e| {
        Error::parse(
            format!("$ (line {}, column {})", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let root = doc
        .as_object()
        .ok_or_else(|| Error::parse("$", "model must be an object"))?;
    for key in root.keys() {
        if !matches!(key.as_str(), "n_classes" | "features" | "trees") {
            return Err(Error::parse(format!("$.{key}"), "unknown field"));
        }
    }
    let n_classes = root
        .get("n_classes")
        .ok_or_else(|| Error::parse("$.n_classes", "missing"))?
        .as_u64()
        .ok_or_else(|| Error::parse("$.n_classes", "expected a non-negative integer"))?
        as usize;
    if n_classes < 2 {
        return Err(Error::parse("$.n_classes", "must be at least 2"));
    }

    let features_json = root
        .get("features")
        .ok_or_else(|| Error::parse("$.features", "missing"))?
        .as_array()
        .ok_or_else(|| Error::parse("$.features", "expected an array"))?;
    let mut declared: Vec<DeclaredFeature> = Vec::new();
    for (i, f) in features_json.iter().enumerate() {
        let path = format!("$.features[{i}]");
        declared.push(parse_feature(f, &path)?);
    }
    let mut seen_ids = BTreeSet::new();
    let mut seen_names = BTreeSet::new();
    for (i, f) in declared.iter().enumerate() {
        if !seen_ids.insert(f.id) {
            return Err(Error::parse(format!("$.features[{i}].id"), format!("duplicate id {}", f.id)));
        }
        if !seen_names.insert(f.name.clone()) {
            return Err(Error::parse(format!("$.features[{i}].name"), format!("duplicate name `{}`", f.name)));
        }
    }

    let trees_json = root
        .get("trees")
        .ok_or_else(|| Error::parse("$.trees", "missing"))?
        .as_array()
        .ok_or_else(|| Error::parse("$.trees", "expected an array"))?;
    if trees_json.is_empty() {
        return Err(Error::parse("$.trees", "at least one tree is required"));
    }
    let trees = trees_json
        .iter()
        .enumerate()
        .map(|(i, t)| parse_node(t, &format!("$.trees[{i}]"), &declared, n_classes, &[]))
        .collect::<Result<Vec<_>>>()?;
    let forest = Forest::new(trees, n_classes).map_err(|e| Error::parse("$.trees", e.to_string()))?;

    let thresholds = forest.thresholds();
    let specs = declared
        .into_iter()
        .map(|d| FeatureSpec {
            id: d.id,
            kind: match d.categories {
                Some(categories) => FeatureKind::Categorical { categories },
                None => FeatureKind::Continuous {
                    thresholds: thresholds.get(&d.id).cloned().unwrap_or_default(),
                },
            },
            name: d.name,
        })
        .collect();
    let space = FeatureSpace::new(specs).map_err(|e| Error::parse("$.features", e.to_string()))?;
    Ok((forest, space))
}

fn parse_feature(f: &Json, path: &str) -> Result<DeclaredFeature> {
    let obj = f
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "id" | "name" | "kind" | "categories") {
            return Err(Error::parse(format!("{path}.{key}"), "unknown field"));
        }
    }
    let id = obj
        .get("id")
        .and_then(Json::as_i64)
        .ok_or_else(|| Error::parse(format!("{path}.id"), "expected an integer"))?;
    let name = obj
        .get("name")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::parse(format!("{path}.name"), "expected a string"))?
        .to_string();
    let kind = obj
        .get("kind")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::parse(format!("{path}.kind"), "expected a string"))?;
    let categories = match kind {
        "continuous" => {
            if obj.contains_key("categories") {
                return Err(Error::parse(
                    format!("{path}.categories"),
                    "only categorical features list categories",
                ));
            }
            None
        }
        "categorical" => {
            let cats = obj
                .get("categories")
                .and_then(Json::as_array)
                .ok_or_else(|| Error::parse(format!("{path}.categories"), "expected an array of strings"))?;
            let mut out = Vec::with_capacity(cats.len());
            for (j, c) in cats.iter().enumerate() {
                let s = c
                    .as_str()
                    .ok_or_else(|| Error::parse(format!("{path}.categories[{j}]"), "expected a string"))?;
                if out.iter().any(|o| o == s) {
                    return Err(Error::parse(format!("{path}.categories[{j}]"), format!("duplicate category `{s}`")));
                }
                out.push(s.to_string());
            }
            Some(out)
        }
        other => {
            return Err(Error::parse(
                format!("{path}.kind"),
                format!("expected \"continuous\" or \"categorical\", got `{other}`"),
            ))
        }
    };
    Ok(DeclaredFeature { id, name, categories })
}

fn parse_node(
    node: &Json,
    path: &str,
    features: &[DeclaredFeature],
    n_classes: usize,
    ancestors: &[(i64, f64)],
) -> Result<TreeNode> {
    let obj = node
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))?;
    if let Some(leaf) = obj.get("leaf") {
        if obj.len() != 1 {
            return Err(Error::parse(path, "a leaf has only the `leaf` field"));
        }
        let class = leaf
            .as_u64()
            .ok_or_else(|| Error::parse(format!("{path}.leaf"), "expected a non-negative integer"))?
            as usize;
        if class >= n_classes {
            return Err(Error::parse(
                format!("{path}.leaf"),
                format!("class {class} is not below n_classes = {n_classes}"),
            ));
        }
        return Ok(TreeNode::Leaf { class });
    }
    for key in obj.keys() {
        if !matches!(key.as_str(), "feature" | "threshold" | "true" | "false") {
            return Err(Error::parse(format!("{path}.{key}"), "unknown field"));
        }
    }
    let feature = obj
        .get("feature")
        .and_then(Json::as_i64)
        .ok_or_else(|| Error::parse(format!("{path}.feature"), "expected an integer"))?;
    let decl = features
        .iter()
        .find(|f| f.id == feature)
        .ok_or_else(|| Error::parse(format!("{path}.feature"), format!("unknown feature id {feature}")))?;
    let threshold = obj
        .get("threshold")
        .and_then(Json::as_f64)
        .ok_or_else(|| Error::parse(format!("{path}.threshold"), "expected a number"))?;
    if !threshold.is_finite() {
        return Err(Error::parse(format!("{path}.threshold"), "threshold is not finite"));
    }
    if let Some(cats) = &decl.categories {
        if cats.len() < 2 {
            return Err(Error::parse(
                format!("{path}.feature"),
                format!("categorical feature `{}` is tested but has fewer than two categories", decl.name),
            ));
        }
    }
    if ancestors.contains(&(feature, threshold)) {
        return Err(Error::parse(path, "repeats the test of an ancestor node"));
    }
    let mut below = ancestors.to_vec();
    below.push((feature, threshold));
    let child = |key: &str| -> Result<TreeNode> {
        let c = obj
            .get(key)
            .ok_or_else(|| Error::parse(format!("{path}.{key}"), "missing"))?;
        parse_node(c, &format!("{path}.{key}"), features, n_classes, &below)
    };
    Ok(TreeNode::split(feature, threshold, child("true")?, child("false")?))
}

/// Root-to-leaf paths as (term, class) pairs. Unreachable paths are dropped.
pub fn tree_paths(root: &TreeNode, space: &FeatureSpace) -> Result<Vec<(MvTerm, usize)>> {
    let mv = space.mv_space();
    let mut allowed: Vec<ValueSet> = mv.vars().iter().map(|v| ValueSet::full(v.domain_size())).collect();
    let mut out = Vec::new();
    walk(root, space, &mut allowed, &mut out)?;
    Ok(out)
}

fn walk(
    node: &TreeNode,
    space: &FeatureSpace,
    allowed: &mut Vec<ValueSet>,
    out: &mut Vec<(MvTerm, usize)>,
) -> Result<()> {
    match node {
        TreeNode::Leaf { class } => {
            let term = MvTerm::from_sets(space.mv_space(), allowed.iter().cloned().enumerate())?;
            out.push((term, *class));
        }
        TreeNode::Internal {
            feature,
            threshold,
            true_child,
            false_child,
        } => {
            let (var, below) = space.split_values(*feature, *threshold)?;
            let saved = allowed[var].clone();
            for (child, set) in [
                (true_child, saved.intersection(&below)),
                (false_child, saved.difference(&below)),
            ] {
                if set.is_empty() {
                    continue;
                }
                allowed[var] = set;
                walk(child, space, allowed, out)?;
            }
            allowed[var] = saved;
        }
    }
    Ok(())
}

/// Disjunction of the path terms of every leaf labelled `class`.
pub fn tree_to_expression(
    root: &TreeNode,
    class: usize,
    n_classes: usize,
    space: &FeatureSpace,
) -> Result<MvExpression> {
    if class >= n_classes {
        return Err(Error::invalid(
            "class",
            format!("class {class} is not below n_classes = {n_classes}"),
        ));
    }
    let mut disjuncts: Vec<MvExpression> = tree_paths(root, space)?
        .into_iter()
        .filter(|(_, c)| *c == class)
        .map(|(t, _)| MvExpression::from_term(&t))
        .collect();
    Ok(match disjuncts.len() {
        0 => MvExpression::Const(false),
        1 => disjuncts.pop().unwrap(),
        _ => MvExpression::Or(disjuncts),
    })
}

/// Multi-line listing of the discretization, one row per value.
pub fn describe_space(space: &FeatureSpace) -> String {
    let mut out = String::new();
    for var in space.mv_space().vars() {
        for v in var.values() {
            let _ = writeln!(out, "{}{}\t{}", var.name().to_lowercase(), v, var.label(v));
        }
    }
    out
}
