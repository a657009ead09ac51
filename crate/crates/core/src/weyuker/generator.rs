//! Seeded random MiniC programs for the property checks.
//!
//! Programs are generated as source text from a small grammar and then
//! parsed. Variable names come from shared pools (`v0`..`v5` locals,
//! `a0`..`a2` arrays, `g0`..`g1` globals, `k0`.. loop counters) so that two
//! generated programs interact when composed. Helper functions are named
//! after the seed and never collide across programs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frontend::{parse_source, pretty_print, SyntaxTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_depth: usize,
    pub max_stmts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_depth: 4,
            max_stmts: 30,
        }
    }
}

const LOCALS: [&str; 6] = ["v0", "v1", "v2", "v3", "v4", "v5"];
const ARRAYS: [&str; 3] = ["a0", "a1", "a2"];
const GLOBALS: [&str; 2] = ["g0", "g1"];
const BINOPS: [&str; 13] = ["+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Scalar,
    Array,
}

struct Gen {
    rng: ChaCha8Rng,
    cfg: GeneratorConfig,
    out: String,
    indent: usize,
    scopes: Vec<Vec<(String, VarKind)>>,
    budget: usize,
    /// Helpers callable from the current position, with their arity.
    callable: Vec<String>,
    loops: usize,
}

impl Gen {
    fn line(&mut self, s: &str) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn declared_here(&self, name: &str) -> bool {
        self.scopes.last().is_some_and(|s| s.iter().any(|(n, _)| n == name))
    }

    fn visible(&self, kind: VarKind) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        let mut out = Vec::new();
        for scope in self.scopes.iter().rev() {
            for (n, k) in scope {
                if !seen.contains(n) {
                    seen.push(n.clone());
                    if *k == kind {
                        out.push(n.clone());
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn global_declared(&self, name: &str) -> bool {
        self.scopes[0].iter().any(|(n, _)| n == name)
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> Option<T> {
        xs.choose(&mut self.rng).cloned()
    }

    fn atom(&mut self) -> String {
        let scalars = self.visible(VarKind::Scalar);
        let arrays = self.visible(VarKind::Array);
        match self.rng.gen_range(0..10) {
            0..=2 => self.rng.gen_range(0..10).to_string(),
            3 if !arrays.is_empty() => {
                let a = self.pick(&arrays).unwrap();
                let i = self.rng.gen_range(0..5);
                format!("{a}[{i}]")
            }
            4 if GLOBALS.iter().any(|g| self.global_declared(g)) => {
                let gs: Vec<&str> = GLOBALS.iter().copied().filter(|g| self.global_declared(g)).collect();
                format!("::{}", self.pick(&gs).unwrap())
            }
            _ => self.pick(&scalars).unwrap_or_else(|| "1".to_string()),
        }
    }

    fn expr(&mut self, depth: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return self.atom();
        }
        match self.rng.gen_range(0..10) {
            0 => {
                let e = self.expr(depth - 1);
                if e.starts_with('-') {
                    format!("-({e})")
                } else {
                    format!("-{e}")
                }
            }
            1 => format!("!{}", self.atom()),
            2 if !self.callable.is_empty() && self.rng.gen_bool(0.5) => {
                let f = self.pick(&self.callable.clone()).unwrap();
                format!("{f}({})", self.expr(depth - 1))
            }
            _ => {
                let op = *BINOPS.choose(&mut self.rng).unwrap();
                let l = self.expr(depth - 1);
                let r = self.expr(depth - 1);
                format!("({l} {op} {r})")
            }
        }
    }

    fn target(&mut self) -> Option<String> {
        let scalars = self.visible(VarKind::Scalar);
        let arrays = self.visible(VarKind::Array);
        if !arrays.is_empty() && self.rng.gen_bool(0.2) {
            let a = self.pick(&arrays).unwrap();
            let i = self.expr(1);
            return Some(format!("{a}[{i}]"));
        }
        self.pick(&scalars)
    }

    fn declare(&mut self, name: &str, kind: VarKind) {
        self.scopes.last_mut().unwrap().push((name.to_string(), kind));
    }

    fn decl(&mut self) -> bool {
        if self.rng.gen_bool(0.15) {
            let free: Vec<&str> = ARRAYS.iter().copied().filter(|a| !self.declared_here(a)).collect();
            if let Some(a) = self.pick(&free) {
                self.line(&format!("int {a}[5];"));
                self.declare(a, VarKind::Array);
                return true;
            }
        }
        let pool: Vec<&str> = if self.rng.gen_bool(0.1) {
            GLOBALS.to_vec()
        } else {
            LOCALS.to_vec()
        };
        let free: Vec<&str> = pool.into_iter().filter(|v| !self.declared_here(v)).collect();
        let Some(v) = self.pick(&free) else {
            return false;
        };
        if self.rng.gen_bool(0.5) {
            let e = self.expr(2);
            self.declare(v, VarKind::Scalar);
            self.line(&format!("int {v} = {e};"));
        } else {
            self.declare(v, VarKind::Scalar);
            self.line(&format!("int {v};"));
        }
        true
    }

    fn simple(&mut self) {
        let r = self.rng.gen_range(0..100);
        if r < 22 && self.decl() {
            return;
        }
        let Some(t) = self.target() else {
            if !self.decl() {
                let e = self.expr(2);
                self.line(&format!("print({e});"));
            }
            return;
        };
        match r {
            0..=44 => {
                let e = self.expr(3);
                self.line(&format!("{t} = {e};"));
            }
            45..=54 => {
                let op = *["+=", "-=", "*="].choose(&mut self.rng).unwrap();
                let e = self.expr(1);
                self.line(&format!("{t} {op} {e};"));
            }
            55..=62 => {
                let op = if self.rng.gen_bool(0.5) { "++" } else { "--" };
                self.line(&format!("{t}{op};"));
            }
            63..=70 => self.line(&format!("{t} = read();")),
            71..=82 if !self.callable.is_empty() => {
                let f = self.pick(&self.callable.clone()).unwrap();
                let e = self.expr(1);
                self.line(&format!("{t} = {f}({e});"));
            }
            83..=86 if self.loops > 0 => self.line("break;"),
            _ => {
                let e = self.expr(2);
                self.line(&format!("print({e});"));
            }
        }
    }

    fn body(&mut self, depth: usize) {
        self.line("{");
        self.indent += 1;
        self.scopes.push(Vec::new());
        let n = self.rng.gen_range(1..=4);
        for _ in 0..n {
            if self.budget == 0 {
                break;
            }
            self.stmt(depth);
        }
        self.scopes.pop();
        self.indent -= 1;
        self.line("}");
    }

    fn stmt(&mut self, depth: usize) {
        self.budget = self.budget.saturating_sub(1);
        let structured = depth < self.cfg.max_depth && self.budget > 0 && self.rng.gen_bool(0.3);
        if !structured {
            self.simple();
            return;
        }
        let d = depth + 1;
        match self.rng.gen_range(0..7) {
            0 | 1 => {
                let c = self.expr(2);
                self.line(&format!("if ({c})"));
                self.body(d);
                if self.rng.gen_bool(0.4) {
                    self.line("else");
                    self.body(d);
                }
            }
            2 => {
                let c = self.expr(2);
                self.line(&format!("while ({c})"));
                self.loops += 1;
                self.body(d);
                self.loops -= 1;
            }
            3 => {
                let k = format!("k{depth}");
                let lim = self.atom();
                self.line(&format!("for (int {k} = 0; {k} < {lim}; {k}++)"));
                self.scopes.push(vec![(k, VarKind::Scalar)]);
                self.loops += 1;
                self.body(d);
                self.loops -= 1;
                self.scopes.pop();
            }
            4 => {
                self.line("do");
                self.loops += 1;
                self.body(d);
                self.loops -= 1;
                let c = self.expr(2);
                self.line(&format!("while ({c});"));
            }
            5 => {
                let c = self.expr(1);
                self.line(&format!("switch ({c})"));
                self.line("{");
                self.scopes.push(Vec::new());
                let arms = self.rng.gen_range(1..=3);
                let mut labels: Vec<i32> = (0..5).collect();
                labels.shuffle(&mut self.rng);
                for (i, l) in labels.into_iter().take(arms).enumerate() {
                    if i + 1 == arms && self.rng.gen_bool(0.4) {
                        self.line("default:");
                    } else {
                        self.line(&format!("case {l}:"));
                    }
                    self.indent += 1;
                    if self.budget > 0 {
                        self.stmt(d);
                    }
                    if self.budget > 0 {
                        self.budget -= 1;
                        self.line("break;");
                    }
                    self.indent -= 1;
                }
                self.scopes.pop();
                self.line("}");
            }
            _ => {
                // A nested block, often shadowing an outer variable.
                self.line("{");
                self.indent += 1;
                self.scopes.push(Vec::new());
                let outer = self.visible(VarKind::Scalar);
                if let Some(v) = self.pick(&outer) {
                    if !v.starts_with('k') && self.budget > 0 {
                        self.budget -= 1;
                        let e = self.expr(1);
                        self.line(&format!("int {v} = {e};"));
                        self.declare(&v, VarKind::Scalar);
                    }
                }
                let n = self.rng.gen_range(1..=3);
                for _ in 0..n {
                    if self.budget == 0 {
                        break;
                    }
                    self.stmt(d);
                }
                self.scopes.pop();
                self.indent -= 1;
                self.line("}");
            }
        }
    }

    fn helper(&mut self, name: &str) {
        self.line(&format!("int {name}(int v0)"));
        self.line("{");
        self.indent += 1;
        self.scopes.push(vec![("v0".to_string(), VarKind::Scalar)]);
        let n = self.rng.gen_range(1..=3);
        for _ in 0..n {
            if self.budget == 0 {
                break;
            }
            self.stmt(self.cfg.max_depth.saturating_sub(1));
        }
        if self.rng.gen_bool(0.3) {
            self.line("if (v0 > 0)");
            self.indent += 1;
            self.line(&format!("v0 = {name}(v0 - 1);"));
            self.indent -= 1;
        }
        let e = self.expr(2);
        self.line(&format!("return {e};"));
        self.scopes.pop();
        self.indent -= 1;
        self.line("}");
    }

    fn program(&mut self, seed: u64) {
        self.scopes.push(Vec::new());
        for g in GLOBALS {
            if self.rng.gen_bool(0.3) {
                if self.rng.gen_bool(0.5) {
                    let v = self.rng.gen_range(0..10);
                    self.line(&format!("int {g} = {v};"));
                } else {
                    self.line(&format!("int {g};"));
                }
                self.declare(g, VarKind::Scalar);
            }
        }
        let helpers = if self.budget >= 8 { self.rng.gen_range(0..=2) } else { 0 };
        for i in 0..helpers {
            if self.budget < 8 {
                break;
            }
            // return, and the optional recursive guard
            self.budget -= 3;
            let name = format!("h{seed}_{i}");
            self.helper(&name);
            self.callable.push(name);
        }
        self.line("void main()");
        self.line("{");
        self.indent += 1;
        self.scopes.push(Vec::new());
        while self.budget > 0 {
            self.stmt(0);
        }
        self.scopes.pop();
        self.indent -= 1;
        self.line("}");
    }
}

/// Raw generated text for `seed`.
pub fn generate_text(seed: u64, cfg: GeneratorConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = rng.gen_range(3..=cfg.max_stmts.max(3));
    let mut g = Gen {
        rng,
        cfg,
        out: String::new(),
        indent: 0,
        scopes: Vec::new(),
        budget,
        callable: Vec::new(),
        loops: 0,
    };
    g.program(seed);
    g.out
}

/// A parsed random program; file name `gen_<seed>.mc`.
pub fn generate(seed: u64, cfg: GeneratorConfig) -> SyntaxTree {
    let text = generate_text(seed, cfg);
    parse_source(&format!("gen_{seed}.mc"), &text)
        .unwrap_or_else(|e| panic!("generator produced unparsable text for seed {seed}: {e}\n{text}"))
}

/// Canonical printing of [`generate`].
pub fn generate_source(seed: u64, cfg: GeneratorConfig) -> String {
    pretty_print(&generate(seed, cfg))
}
