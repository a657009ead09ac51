//! Canonical source rendering. Output re-parses to a structurally equal tree.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "    ";

const PREC_ASSIGN: u8 = 1;
const PREC_UNARY: u8 = 8;
const PREC_POSTFIX: u8 = 9;
const PREC_PRIMARY: u8 = 10;

pub fn pretty_print(tree: &SyntaxTree) -> String {
    let mut out = String::new();
    for (i, item) in tree.items.iter().enumerate() {
        let is_fn = matches!(item, Item::Function(_) | Item::Record(_));
        let prev_fn = i > 0 && matches!(tree.items[i - 1], Item::Function(_) | Item::Record(_));
        if i > 0 && (is_fn || prev_fn) {
            out.push('\n');
        }
        match item {
            Item::Record(r) => {
                writeln!(out, "struct {}", r.name).unwrap();
                out.push_str("{\n");
                for f in &r.fields {
                    writeln!(out, "{INDENT}{};", declarator(&f.ty, &f.name)).unwrap();
                }
                out.push_str("};\n");
            }
            Item::Function(f) => {
                let params: Vec<String> = f.params.iter().map(|p| declarator(&p.ty, &p.name)).collect();
                writeln!(out, "{}({})", declarator(&f.ret, &f.name), params.join(", ")).unwrap();
                print_block(&mut out, &f.body, 0);
            }
            Item::Global(s) => print_stmt(&mut out, s, 0),
        }
    }
    out
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    expr(&mut s, e, 0);
    s
}

fn declarator(ty: &TypeRef, name: &str) -> String {
    match ty.array {
        None => format!("{} {}", ty.base_name(), name),
        Some(None) => format!("{} {}[]", ty.base_name(), name),
        Some(Some(n)) => format!("{} {}[{}]", ty.base_name(), name, n),
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str(INDENT);
    }
}

fn print_block(out: &mut String, b: &Block, level: usize) {
    indent(out, level);
    out.push_str("{\n");
    for s in &b.stmts {
        print_stmt(out, s, level + 1);
    }
    indent(out, level);
    out.push_str("}\n");
}

/// Body of a control statement: blocks at the same level, anything else indented.
fn print_body(out: &mut String, s: &Stmt, level: usize) {
    match &s.kind {
        StmtKind::Block(b) => print_block(out, b, level),
        _ => print_stmt(out, s, level + 1),
    }
}

fn decl_text(d: &Decl) -> String {
    let mut s = declarator(&d.ty, &d.name);
    match &d.init {
        None => {}
        Some(Init::Expr(e)) => {
            s.push_str(" = ");
            expr(&mut s, e, PREC_ASSIGN);
        }
        Some(Init::List(es)) => {
            let items: Vec<String> = es.iter().map(print_expr).collect();
            write!(s, " = {{{}}}", items.join(", ")).unwrap();
        }
    }
    s.push(';');
    s
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Int(t) | Literal::Float(t) | Literal::Str(t) => t.clone(),
        Literal::Bool(b) => b.to_string(),
    }
}

fn print_stmt(out: &mut String, s: &Stmt, level: usize) {
    match &s.kind {
        StmtKind::Block(b) => {
            print_block(out, b, level);
            return;
        }
        StmtKind::Labeled { label, stmt } => {
            indent(out, level);
            writeln!(out, "{label}:").unwrap();
            print_stmt(out, stmt, level);
            return;
        }
        _ => {}
    }
    indent(out, level);
    match &s.kind {
        StmtKind::Decl(d) => {
            out.push_str(&decl_text(d));
            out.push('\n');
        }
        StmtKind::Expr(e) => writeln!(out, "{};", print_expr(e)).unwrap(),
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            writeln!(out, "if ({})", print_expr(cond)).unwrap();
            print_body(out, then_branch, level);
            if let Some(e) = else_branch {
                indent(out, level);
                out.push_str("else\n");
                print_body(out, e, level);
            }
        }
        StmtKind::Switch { scrutinee, body } => {
            writeln!(out, "switch ({})", print_expr(scrutinee)).unwrap();
            indent(out, level);
            out.push_str("{\n");
            for arm in &body.arms {
                indent(out, level);
                match &arm.label {
                    CaseLabel::Case(l) => writeln!(out, "case {}:", literal(l)).unwrap(),
                    CaseLabel::Default => out.push_str("default:\n"),
                }
                for st in &arm.body {
                    print_stmt(out, st, level + 1);
                }
            }
            indent(out, level);
            out.push_str("}\n");
        }
        StmtKind::While { cond, body } => {
            writeln!(out, "while ({})", print_expr(cond)).unwrap();
            print_body(out, body, level);
        }
        StmtKind::DoWhile { body, cond } => {
            out.push_str("do\n");
            print_body(out, body, level);
            indent(out, level);
            writeln!(out, "while ({});", print_expr(cond)).unwrap();
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            let init = match init {
                ForInit::None => ";".to_string(),
                ForInit::Decl(d) => match &d.kind {
                    StmtKind::Decl(d) => decl_text(d),
                    _ => unreachable!("for-init is always a declaration"),
                },
                ForInit::Expr(e) => format!("{};", print_expr(e)),
            };
            let cond = cond.as_ref().map(print_expr).unwrap_or_default();
            let update = update.as_ref().map(print_expr).unwrap_or_default();
            let mut header = format!("for ({init}");
            if !cond.is_empty() {
                header.push(' ');
                header.push_str(&cond);
            }
            header.push(';');
            if !update.is_empty() {
                header.push(' ');
                header.push_str(&update);
            }
            writeln!(out, "{header})").unwrap();
            print_body(out, body, level);
        }
        StmtKind::Return(None) => out.push_str("return;\n"),
        StmtKind::Return(Some(e)) => writeln!(out, "return {};", print_expr(e)).unwrap(),
        StmtKind::Break => out.push_str("break;\n"),
        StmtKind::Continue => out.push_str("continue;\n"),
        StmtKind::Goto(l) => writeln!(out, "goto {l};").unwrap(),
        StmtKind::Empty => out.push_str(";\n"),
        StmtKind::Block(_) | StmtKind::Labeled { .. } => unreachable!(),
    }
}

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Assign { .. } | ExprKind::CompoundAssign { .. } => PREC_ASSIGN,
        ExprKind::Binary { op, .. } => op.precedence(),
        ExprKind::Unary { .. } => PREC_UNARY,
        ExprKind::Member { .. } | ExprKind::Index { .. } | ExprKind::Increment(_) | ExprKind::Decrement(_) => {
            PREC_POSTFIX
        }
        ExprKind::Literal(_) | ExprKind::Var(_) | ExprKind::Global(_) | ExprKind::Call { .. } => PREC_PRIMARY,
    }
}

/// Render `e`, parenthesized if it binds looser than `min_prec`.
fn expr(out: &mut String, e: &Expr, min_prec: u8) {
    let wrap = precedence(e) < min_prec;
    if wrap {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Literal(l) => out.push_str(&literal(l)),
        ExprKind::Var(n) => out.push_str(n),
        ExprKind::Global(n) => write!(out, "::{n}").unwrap(),
        ExprKind::Member { base, field } => {
            expr(out, base, PREC_POSTFIX);
            write!(out, ".{field}").unwrap();
        }
        ExprKind::Index { base, index } => {
            expr(out, base, PREC_POSTFIX);
            out.push('[');
            expr(out, index, 0);
            out.push(']');
        }
        ExprKind::Call { callee, args } => {
            out.push_str(callee);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr(out, a, PREC_ASSIGN);
            }
            out.push(')');
        }
        ExprKind::Unary { op, operand } => {
            out.push_str(op.symbol());
            let mut inner = String::new();
            expr(&mut inner, operand, PREC_UNARY);
            // `- -x` must not lex as `--x`.
            if *op == UnaryOp::Neg && inner.starts_with('-') {
                out.push(' ');
            }
            out.push_str(&inner);
        }
        ExprKind::Binary { op, lhs, rhs } => {
            expr(out, lhs, op.precedence());
            write!(out, " {} ", op.symbol()).unwrap();
            expr(out, rhs, op.precedence() + 1);
        }
        ExprKind::Assign { target, value } => {
            expr(out, target, PREC_POSTFIX);
            out.push_str(" = ");
            expr(out, value, PREC_ASSIGN);
        }
        ExprKind::CompoundAssign { op, target, value } => {
            expr(out, target, PREC_POSTFIX);
            write!(out, " {} ", op.symbol()).unwrap();
            expr(out, value, PREC_ASSIGN);
        }
        ExprKind::Increment(t) => {
            expr(out, t, PREC_POSTFIX);
            out.push_str("++");
        }
        ExprKind::Decrement(t) => {
            expr(out, t, PREC_POSTFIX);
            out.push_str("--");
        }
    }
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_source, tokenize};

    fn round_trip(src: &str) {
        let t = parse_source("t.mc", src).unwrap();
        let printed = pretty_print(&t);
        let again = parse_source("t.mc", &printed).unwrap();
        assert!(t.structurally_eq(&again), "round trip changed:\n{printed}");
        assert_eq!(printed, pretty_print(&again));
    }

    #[test]
    fn parenthesization_is_minimal_but_faithful() {
        let t = parse_source("t.mc", "void main() { int a; a = (1 - (2 - 3)) * -(-a); }").unwrap();
        let printed = pretty_print(&t);
        assert!(printed.contains("a = (1 - (2 - 3)) * - -a;"), "{printed}");
        round_trip(&printed);
    }

    #[test]
    fn switch_and_control_flow_round_trip() {
        round_trip(
            "int g; void main() { int x; switch (x) { case 1: x += 2; break; case -4: default: ::g--; }
             do x++; while (x < 3); for (;;) break; for (x = 0; x < 2;) { if (x) ; else if (!x) x = 1; }
             lbl: x = 0; goto lbl; }",
        );
    }

    #[test]
    fn assignment_chains_and_prints() {
        round_trip("void main() { int a; int b; a = b = 3; print(\"done\\n\"); print(a * (b + 1)); }");
        assert_eq!(tokenize("a = - -b;").unwrap().len(), 6);
    }
}
