//! Empirical check of the nine Weyuker properties over a program sample.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::generator::{generate, GeneratorConfig};
use super::transform::{compose, guard_body, permute, rename, variable_names, ComposeOptions, ENTRY};
use crate::analysis::{analyze_tree, Analysis};
use crate::corpus;
use crate::frontend::{parse_source, pretty_print, SyntaxTree};
use crate::metrics::WeightTable;
use crate::sicn::{si, SiMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PropertyId {
    #[serde(rename = "1")]
    P1,
    #[serde(rename = "2")]
    P2,
    #[serde(rename = "3")]
    P3,
    #[serde(rename = "4")]
    P4,
    #[serde(rename = "5")]
    P5,
    #[serde(rename = "6a")]
    P6a,
    #[serde(rename = "6b")]
    P6b,
    #[serde(rename = "7")]
    P7,
    #[serde(rename = "8")]
    P8,
    #[serde(rename = "9")]
    P9,
}

impl PropertyId {
    pub const ALL: [PropertyId; 10] = [
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::P3,
        PropertyId::P4,
        PropertyId::P5,
        PropertyId::P6a,
        PropertyId::P6b,
        PropertyId::P7,
        PropertyId::P8,
        PropertyId::P9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::P1 => "1",
            PropertyId::P2 => "2",
            PropertyId::P3 => "3",
            PropertyId::P4 => "4",
            PropertyId::P5 => "5",
            PropertyId::P6a => "6a",
            PropertyId::P6b => "6b",
            PropertyId::P7 => "7",
            PropertyId::P8 => "8",
            PropertyId::P9 => "9",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            PropertyId::P1 => "(∃P)(∃Q)(|P| ≠ |Q|)",
            PropertyId::P2 => "(∀P)(|P| ≥ 0)",
            PropertyId::P3 => "(∃P)(∃Q)(P ≠ Q & |P| = |Q|)",
            PropertyId::P4 => "(∃P)(∃Q)(P ≡ Q & |P| ≠ |Q|)",
            PropertyId::P5 => "(∀P)(∀Q)(|P| ≤ |P;Q| & |Q| ≤ |P;Q|)",
            PropertyId::P6a => "(∃P)(∃Q)(∃R)(|P| = |Q| & |P;R| ≠ |Q;R|)",
            PropertyId::P6b => "(∃P)(∃Q)(∃R)(|P| = |Q| & |R;P| ≠ |R;Q|)",
            PropertyId::P7 => "(∃P)(∃Q)(Q permutes P & |P| ≠ |Q|)",
            PropertyId::P8 => "(∀P)(∀Q)(Q renames P ⇒ |P| = |Q|)",
            PropertyId::P9 => "(∃P)(∃Q)(|P| + |Q| < |P;Q|)",
        }
    }

    pub fn is_universal(self) -> bool {
        matches!(self, PropertyId::P2 | PropertyId::P5 | PropertyId::P8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Witnessed,
    HoldsOnSample,
    NoWitnessFound,
    Refuted,
}

impl Status {
    pub fn conforms(self) -> bool {
        matches!(self, Status::Witnessed | Status::HoldsOnSample)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: PropertyId,
    pub mode: SiMode,
    pub status: Status,
    /// Values of the witness or counterexample, in the order of the programs.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<u64>,
    /// Pretty-printed programs of the witness or counterexample.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Property 9 only: whether |P| + |Q| ≤ |P;Q| held on every composition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_form: Option<bool>,
}

/// A program with its ESCIM in every mode.
#[derive(Debug, Clone)]
pub struct Sampled {
    pub name: String,
    pub tree: SyntaxTree,
    pub text: String,
    pub values: BTreeMap<SiMode, u64>,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub programs: Vec<Sampled>,
    /// Indices of behaviourally equivalent pairs.
    pub equivalent: Vec<(usize, usize)>,
    pub weights: WeightTable,
    pub seed: u64,
    pub generated: usize,
}

fn measure(tree: &SyntaxTree, weights: &WeightTable) -> Option<Analysis> {
    analyze_tree(tree.clone(), SiMode::Delta, weights).ok()
}

fn values_of(a: &Analysis, weights: &WeightTable) -> BTreeMap<SiMode, u64> {
    SiMode::ALL.into_iter().map(|m| (m, a.escim_with(m, weights))).collect()
}

fn sampled(name: String, tree: SyntaxTree, weights: &WeightTable) -> Option<Sampled> {
    let a = measure(&tree, weights)?;
    Some(Sampled {
        name,
        text: pretty_print(&tree),
        values: values_of(&a, weights),
        tree,
    })
}

impl Sample {
    /// Bundled fixtures (if `with_corpus`) followed by `count` generated
    /// programs with seeds `seed`, `seed + 1`, ...
    pub fn build(with_corpus: bool, seed: u64, count: usize, weights: &WeightTable) -> Self {
        let mut programs = Vec::new();
        let mut equivalent = Vec::new();
        if with_corpus {
            for f in corpus::bundled() {
                let tree = parse_source(f.name, f.source).expect("bundled fixtures parse");
                programs.extend(sampled(f.name.to_string(), tree, weights));
            }
            for (a, b) in corpus::equivalent_pairs() {
                let i = programs.iter().position(|p| p.name == a.name);
                let j = programs.iter().position(|p| p.name == b.name);
                if let (Some(i), Some(j)) = (i, j) {
                    equivalent.push((i, j));
                }
            }
        }
        let cfg = GeneratorConfig::default();
        for k in 0..count as u64 {
            let s = seed.wrapping_add(k);
            programs.extend(sampled(format!("gen_{s}.mc"), generate(s, cfg), weights));
        }
        Sample {
            programs,
            equivalent,
            weights: weights.clone(),
            seed,
            generated: count,
        }
    }

    /// Append a user-supplied program to the sample.
    pub fn add_source(&mut self, name: &str, source: &str) -> Result<(), crate::AnalysisError> {
        let tree = parse_source(name, source)?;
        let a = analyze_tree(tree.clone(), SiMode::Delta, &self.weights)?;
        self.programs.push(Sampled {
            name: name.to_string(),
            text: pretty_print(&tree),
            values: values_of(&a, &self.weights),
            tree,
        });
        Ok(())
    }

    fn value(&self, i: usize, mode: SiMode) -> u64 {
        self.programs[i].values[&mode]
    }

    fn compose(&self, p: &SyntaxTree, q: &SyntaxTree) -> Option<(SyntaxTree, BTreeMap<SiMode, u64>)> {
        let t = compose(p, q, ComposeOptions::default()).ok()?;
        let a = measure(&t, &self.weights)?;
        let v = values_of(&a, &self.weights);
        Some((t, v))
    }
}

fn verdict(property: PropertyId, mode: SiMode, status: Status, checked: usize) -> PropertyVerdict {
    PropertyVerdict {
        property,
        mode,
        status,
        values: Vec::new(),
        witness: Vec::new(),
        checked,
        note: None,
        weak_form: None,
    }
}

fn with_witness(mut v: PropertyVerdict, values: Vec<u64>, programs: Vec<String>) -> PropertyVerdict {
    v.values = values;
    v.witness = programs;
    v
}

/// Pairs (i, j) with i < j and j ≤ i + `span`.
fn near_pairs(n: usize, span: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n.min(i + span + 1)).map(move |j| (i, j)))
}

const P5_SPAN: usize = 4;
const P6_PAIRS: usize = 40;
const P6_RS: usize = 25;

pub fn check_property(id: PropertyId, mode: SiMode, s: &Sample) -> PropertyVerdict {
    let n = s.programs.len();
    let prog = |i: usize| &s.programs[i];
    match id {
        PropertyId::P1 => {
            for i in 1..n {
                if s.value(i, mode) != s.value(0, mode) {
                    return with_witness(
                        verdict(id, mode, Status::Witnessed, i + 1),
                        vec![s.value(0, mode), s.value(i, mode)],
                        vec![prog(0).text.clone(), prog(i).text.clone()],
                    );
                }
            }
            verdict(id, mode, Status::NoWitnessFound, n)
        }
        PropertyId::P2 => {
            // Values are unsigned, so the check is on the sample as listed.
            let mut v = verdict(id, mode, Status::HoldsOnSample, n);
            v.note = Some(
                "checks the listed form |P| ≥ 0; the original property (finitely many programs per value) is not machine-checkable"
                    .into(),
            );
            v
        }
        PropertyId::P3 => {
            let mut by_value: BTreeMap<u64, usize> = BTreeMap::new();
            for i in 0..n {
                if let Some(&j) = by_value.get(&s.value(i, mode)) {
                    if prog(j).text != prog(i).text {
                        return with_witness(
                            verdict(id, mode, Status::Witnessed, i + 1),
                            vec![s.value(j, mode), s.value(i, mode)],
                            vec![prog(j).text.clone(), prog(i).text.clone()],
                        );
                    }
                } else {
                    by_value.insert(s.value(i, mode), i);
                }
            }
            verdict(id, mode, Status::NoWitnessFound, n)
        }
        PropertyId::P4 => {
            let mut checked = 0;
            for &(i, j) in &s.equivalent {
                checked += 1;
                if s.value(i, mode) != s.value(j, mode) {
                    let mut v = with_witness(
                        verdict(id, mode, Status::Witnessed, checked),
                        vec![s.value(i, mode), s.value(j, mode)],
                        vec![prog(i).text.clone(), prog(j).text.clone()],
                    );
                    v.note = Some(format!("{} and {} compute the same result", prog(i).name, prog(j).name));
                    return v;
                }
            }
            // `if (true) { body }` behaves like `body`.
            for i in 0..n {
                let Ok(g) = guard_body(&prog(i).tree, ENTRY) else {
                    continue;
                };
                let Some(a) = measure(&g, &s.weights) else {
                    continue;
                };
                checked += 1;
                let gv = a.escim_with(mode, &s.weights);
                if gv != s.value(i, mode) {
                    let mut v = with_witness(
                        verdict(id, mode, Status::Witnessed, checked),
                        vec![s.value(i, mode), gv],
                        vec![prog(i).text.clone(), pretty_print(&g)],
                    );
                    v.note = Some("the body wrapped in `if (true)` computes the same result".into());
                    return v;
                }
            }
            verdict(id, mode, Status::NoWitnessFound, checked)
        }
        PropertyId::P5 => {
            let mut checked = 0;
            let mut skipped = 0;
            for (i, j) in near_pairs(n, P5_SPAN) {
                for (a, b) in [(i, j), (j, i)] {
                    let Some((t, v)) = s.compose(&prog(a).tree, &prog(b).tree) else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    let pq = v[&mode];
                    if pq < s.value(a, mode) || pq < s.value(b, mode) {
                        return with_witness(
                            verdict(id, mode, Status::Refuted, checked),
                            vec![s.value(a, mode), s.value(b, mode), pq],
                            vec![prog(a).text.clone(), prog(b).text.clone(), pretty_print(&t)],
                        );
                    }
                }
            }
            let mut v = verdict(id, mode, Status::HoldsOnSample, checked);
            if skipped > 0 {
                v.note = Some(format!("{skipped} pairs could not be composed and were skipped"));
            }
            v
        }
        PropertyId::P6a | PropertyId::P6b => {
            let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for i in 0..n {
                groups.entry(s.value(i, mode)).or_default().push(i);
            }
            let mut pairs = Vec::new();
            for members in groups.values() {
                for (x, &p) in members.iter().enumerate() {
                    for &q in &members[x + 1..] {
                        if prog(p).text != prog(q).text && pairs.len() < P6_PAIRS {
                            pairs.push((p, q));
                        }
                    }
                }
            }
            let mut checked = 0;
            for &(p, q) in &pairs {
                for r in 0..n.min(P6_RS) {
                    let (pr, qr) = if id == PropertyId::P6a {
                        (
                            s.compose(&prog(p).tree, &prog(r).tree),
                            s.compose(&prog(q).tree, &prog(r).tree),
                        )
                    } else {
                        (
                            s.compose(&prog(r).tree, &prog(p).tree),
                            s.compose(&prog(r).tree, &prog(q).tree),
                        )
                    };
                    let (Some((pt, pv)), Some((qt, qv))) = (pr, qr) else {
                        continue;
                    };
                    checked += 1;
                    if pv[&mode] != qv[&mode] {
                        return with_witness(
                            verdict(id, mode, Status::Witnessed, checked),
                            vec![
                                s.value(p, mode),
                                s.value(q, mode),
                                s.value(r, mode),
                                pv[&mode],
                                qv[&mode],
                            ],
                            vec![
                                prog(p).text.clone(),
                                prog(q).text.clone(),
                                prog(r).text.clone(),
                                pretty_print(&pt),
                                pretty_print(&qt),
                            ],
                        );
                    }
                }
            }
            verdict(id, mode, Status::NoWitnessFound, checked)
        }
        PropertyId::P7 => {
            let mut checked = 0;
            for i in 0..n {
                let Some(f) = prog(i).tree.function(ENTRY) else {
                    continue;
                };
                let len = f.body.stmts.len();
                let mut orders: Vec<Vec<usize>> = (0..len.saturating_sub(1))
                    .map(|k| {
                        let mut o: Vec<usize> = (0..len).collect();
                        o.swap(k, k + 1);
                        o
                    })
                    .collect();
                if len > 2 {
                    let mut o: Vec<usize> = (0..len).collect();
                    o.rotate_left(1);
                    orders.push(o);
                }
                for order in orders {
                    let Ok(t) = permute(&prog(i).tree, ENTRY, &[], &order) else {
                        continue;
                    };
                    let Some(a) = measure(&t, &s.weights) else {
                        continue;
                    };
                    checked += 1;
                    let v = a.escim_with(mode, &s.weights);
                    if v != s.value(i, mode) {
                        return with_witness(
                            verdict(id, mode, Status::Witnessed, checked),
                            vec![s.value(i, mode), v],
                            vec![prog(i).text.clone(), pretty_print(&t)],
                        );
                    }
                }
            }
            verdict(id, mode, Status::NoWitnessFound, checked)
        }
        PropertyId::P8 => {
            let mut checked = 0;
            for i in 0..n {
                let map: BTreeMap<String, String> = variable_names(&prog(i).tree)
                    .into_iter()
                    .map(|v| {
                        let to = format!("r_{v}");
                        (v, to)
                    })
                    .collect();
                let Ok(t) = rename(&prog(i).tree, &map) else {
                    continue;
                };
                let (Some(a), Some(b)) = (measure(&prog(i).tree, &s.weights), measure(&t, &s.weights)) else {
                    continue;
                };
                checked += 1;
                let whole = |x: &Analysis| si(&x.ledger.whole_program(), &x.ledger, mode);
                let same = a.escim_with(mode, &s.weights) == b.escim_with(mode, &s.weights)
                    && a.i_l == b.i_l
                    && a.loc == b.loc
                    && whole(&a) == whole(&b);
                if !same {
                    return with_witness(
                        verdict(id, mode, Status::Refuted, checked),
                        vec![a.escim_with(mode, &s.weights), b.escim_with(mode, &s.weights)],
                        vec![prog(i).text.clone(), pretty_print(&t)],
                    );
                }
            }
            verdict(id, mode, Status::HoldsOnSample, checked)
        }
        PropertyId::P9 => {
            let mut checked = 0;
            let mut weak_holds = true;
            let mut found: Option<PropertyVerdict> = None;
            for (i, j) in near_pairs(n, P5_SPAN) {
                let Some((t, v)) = s.compose(&prog(i).tree, &prog(j).tree) else {
                    continue;
                };
                checked += 1;
                let sum = s.value(i, mode) + s.value(j, mode);
                weak_holds &= sum <= v[&mode];
                if found.is_none() && sum < v[&mode] {
                    found = Some(with_witness(
                        verdict(id, mode, Status::Witnessed, checked),
                        vec![s.value(i, mode), s.value(j, mode), v[&mode]],
                        vec![prog(i).text.clone(), prog(j).text.clone(), pretty_print(&t)],
                    ));
                }
            }
            let mut out = found.unwrap_or_else(|| verdict(id, mode, Status::NoWitnessFound, checked));
            out.checked = checked;
            out.weak_form = Some(weak_holds);
            out.note = Some(if weak_holds {
                format!("|P| + |Q| ≤ |P;Q| held on all {checked} compositions")
            } else {
                format!("|P| + |Q| ≤ |P;Q| failed on some of {checked} compositions")
            });
            out
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictTable {
    pub seed: u64,
    pub corpus: bool,
    pub generated: usize,
    pub programs: usize,
    pub modes: Vec<SiMode>,
    pub verdicts: Vec<PropertyVerdict>,
    pub notes: Vec<String>,
}

/// Property × mode matrix, deterministic for a given sample.
pub fn run_matrix(s: &Sample, modes: &[SiMode], with_corpus: bool) -> VerdictTable {
    let mut verdicts = Vec::new();
    for &mode in modes {
        for id in PropertyId::ALL {
            let mut v = check_property(id, mode, s);
            if matches!(id, PropertyId::P6a | PropertyId::P6b) && mode != SiMode::Absolute {
                let extra = if v.status == Status::Witnessed {
                    "difference-based SI suggests no witness; the leaf merge at the seam of P;R and the call weight break translation invariance"
                } else {
                    "difference-based SI is translation-invariant under composition, so no witness is expected"
                };
                v.note = Some(extra.to_string());
            }
            verdicts.push(v);
        }
    }
    let mut notes = vec!["P2 is checked in its listed form (|P| ≥ 0)".to_string()];
    if modes.iter().any(|&m| m != SiMode::Absolute) {
        notes.push(
            "P6 under delta and minmax SI departs from the claim that every property is satisfied; see the per-cell notes"
                .into(),
        );
    }
    VerdictTable {
        seed: s.seed,
        corpus: with_corpus,
        generated: s.generated,
        programs: s.programs.len(),
        modes: modes.to_vec(),
        verdicts,
        notes,
    }
}

impl VerdictTable {
    pub fn get(&self, id: PropertyId, mode: SiMode) -> Option<&PropertyVerdict> {
        self.verdicts.iter().find(|v| v.property == id && v.mode == mode)
    }

    /// Aligned table: `/` for witnessed or holding, `×` otherwise.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{:<9}", "property");
        for m in &self.modes {
            let _ = write!(s, " {:>9}", m.as_str());
        }
        s.push('\n');
        for id in PropertyId::ALL {
            let _ = write!(s, "{:<9}", id.name());
            for m in &self.modes {
                let cell = match self.get(id, *m) {
                    Some(v) if v.status.conforms() => "/",
                    Some(_) => "×",
                    None => "-",
                };
                let _ = write!(s, " {cell:>9}");
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "\nsample: {} programs ({} generated from seed {}{})",
            self.programs,
            self.generated,
            self.seed,
            if self.corpus { ", plus the bundled corpus" } else { "" }
        );
        for v in &self.verdicts {
            let status = serde_json::to_value(v.status)
                .ok()
                .and_then(|x| x.as_str().map(String::from))
                .unwrap_or_default();
            let _ = write!(
                s,
                "{:<3} {:<8} {:<16} checked {:>5}",
                v.property.name(),
                v.mode.as_str(),
                status,
                v.checked
            );
            if !v.values.is_empty() {
                let vals: Vec<String> = v.values.iter().map(u64::to_string).collect();
                let _ = write!(s, "  values [{}]", vals.join(", "));
            }
            s.push('\n');
            if let Some(n) = &v.note {
                let _ = writeln!(s, "    {n}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_only_matrix() {
        let s = Sample::build(true, 0, 0, &WeightTable::default());
        let t = run_matrix(&s, &SiMode::ALL, true);
        for mode in SiMode::ALL {
            assert_eq!(t.get(PropertyId::P1, mode).unwrap().status, Status::Witnessed);
            assert_eq!(t.get(PropertyId::P4, mode).unwrap().status, Status::Witnessed);
            assert_eq!(t.get(PropertyId::P8, mode).unwrap().status, Status::HoldsOnSample);
        }
    }

    #[test]
    fn empty_sample_has_no_witnesses() {
        let s = Sample::build(false, 0, 0, &WeightTable::default());
        let t = run_matrix(&s, &SiMode::ALL, false);
        for v in &t.verdicts {
            if v.property.is_universal() {
                assert_eq!(v.status, Status::HoldsOnSample);
            } else {
                assert_eq!(v.status, Status::NoWitnessFound, "{:?}", v.property);
            }
        }
    }

    #[test]
    fn p4_uses_the_equivalent_pair() {
        let s = Sample::build(true, 0, 0, &WeightTable::default());
        let v = check_property(PropertyId::P4, SiMode::Delta, &s);
        assert_eq!(v.values, [15, 5]);
    }
}
