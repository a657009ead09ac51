//! Static call graph and recursion detection (Tarjan's SCC algorithm).

use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::*;

/// Caller → callees, restricted to functions defined in the program.
pub fn call_graph(tree: &SyntaxTree) -> BTreeMap<String, BTreeSet<String>> {
    let defined: BTreeSet<&str> = tree.functions().map(|f| f.name.as_str()).collect();
    let mut g = BTreeMap::new();
    for f in tree.functions() {
        let mut callees = BTreeSet::new();
        let mut stack: Vec<&Stmt> = f.body.stmts.iter().collect();
        while let Some(s) = stack.pop() {
            let mut exprs = s.own_exprs();
            if let StmtKind::For {
                init: ForInit::Decl(d), ..
            } = &s.kind
            {
                exprs.extend(d.own_exprs());
            }
            for e in exprs {
                e.walk(&mut |x| {
                    if let ExprKind::Call { callee, .. } = &x.kind {
                        if defined.contains(callee.as_str()) {
                            callees.insert(callee.clone());
                        }
                    }
                });
            }
            stack.extend(s.child_stmts());
        }
        g.insert(f.name.clone(), callees);
    }
    g
}

struct Tarjan<'a> {
    graph: &'a BTreeMap<String, BTreeSet<String>>,
    index: BTreeMap<&'a str, usize>,
    low: BTreeMap<&'a str, usize>,
    on_stack: BTreeSet<&'a str>,
    stack: Vec<&'a str>,
    next: usize,
    recursive: BTreeSet<String>,
}

impl<'a> Tarjan<'a> {
    fn visit(&mut self, v: &'a str) {
        self.index.insert(v, self.next);
        self.low.insert(v, self.next);
        self.next += 1;
        self.stack.push(v);
        self.on_stack.insert(v);
        for w in &self.graph[v] {
            let w = w.as_str();
            if !self.index.contains_key(w) {
                self.visit(w);
                let lw = self.low[w];
                let lv = self.low.get_mut(v).unwrap();
                *lv = (*lv).min(lw);
            } else if self.on_stack.contains(w) {
                let iw = self.index[w];
                let lv = self.low.get_mut(v).unwrap();
                *lv = (*lv).min(iw);
            }
        }
        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack.remove(w);
                comp.push(w);
                if w == v {
                    break;
                }
            }
            let cyclic = comp.len() > 1 || self.graph[v].contains(v);
            if cyclic {
                self.recursive.extend(comp.into_iter().map(String::from));
            }
        }
    }
}

/// Functions on a cycle of the static call graph, self-calls included.
pub fn detect_recursion(tree: &SyntaxTree) -> BTreeSet<String> {
    let graph = call_graph(tree);
    let mut t = Tarjan {
        graph: &graph,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        on_stack: BTreeSet::new(),
        stack: Vec::new(),
        next: 0,
        recursive: BTreeSet::new(),
    };
    for v in graph.keys() {
        if !t.index.contains_key(v.as_str()) {
            t.visit(v);
        }
    }
    t.recursive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn rec(src: &str) -> BTreeSet<String> {
        detect_recursion(&parse_source("t.mc", src).unwrap())
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn self_call() {
        assert_eq!(rec("int f(int n) { return f(n - 1); }"), set(&["f"]));
    }

    #[test]
    fn mutual() {
        assert_eq!(
            rec("void f() { g(); } void g() { f(); } void main() { f(); }"),
            set(&["f", "g"])
        );
    }

    #[test]
    fn no_calls() {
        assert!(rec(corpus::EXAMPLE1).is_empty());
        assert_eq!(rec(corpus::RECURSION), set(&["fact", "isEven", "isOdd"]));
    }
}
