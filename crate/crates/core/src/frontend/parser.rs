//! Recursive-descent parser for MiniC.

use super::ast::*;
use super::token::{SourceSpan, Token, TokenKind};
use crate::error::ParseError;

pub fn parse(tokens: &[Token]) -> Result<SyntaxTree, ParseError> {
    let file = tokens
        .first()
        .map(|t| t.span.file.clone())
        .unwrap_or_else(|| "<input>".to_string());
    let mut p = Parser {
        tokens,
        pos: 0,
        next_id: 0,
        file: file.clone(),
    };
    let mut items = Vec::new();
    while !p.at_end() {
        items.push(p.item()?);
    }
    Ok(SyntaxTree { file, items })
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    next_id: u32,
    file: String,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn id(&mut self) -> NodeId {
        self.next_id += 1;
        NodeId(self.next_id)
    }

    fn eof_span(&self) -> SourceSpan {
        match self.tokens.last() {
            Some(t) => {
                let s = &t.span;
                SourceSpan::new(&s.file, s.line_end, s.col_end + 1, s.line_end, s.col_end + 1)
            }
            None => SourceSpan::new(&self.file, 1, 1, 1, 1),
        }
    }

    fn error<T>(&self, message: impl Into<String>, expected: &[&str]) -> PResult<T> {
        let span = self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span());
        let found = self
            .peek()
            .map(|t| format!("`{}`", t.text))
            .unwrap_or_else(|| "end of input".to_string());
        Err(ParseError {
            span,
            message: format!("{}, found {}", message.into(), found),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat_punct(&mut self, text: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(text)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, text: &str) -> PResult<&'t Token> {
        match self.peek() {
            Some(t) if t.is_punct(text) => Ok(self.bump()),
            _ => self.error(format!("expected `{text}`"), &[text]),
        }
    }

    fn expect_keyword(&mut self, text: &str) -> PResult<&'t Token> {
        match self.peek() {
            Some(t) if t.is_keyword(text) => Ok(self.bump()),
            _ => self.error(format!("expected `{text}`"), &[text]),
        }
    }

    fn expect_ident(&mut self) -> PResult<&'t Token> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => Ok(self.bump()),
            _ => self.error("expected identifier", &["identifier"]),
        }
    }

    fn prev_span(&self) -> &'t SourceSpan {
        &self.tokens[self.pos - 1].span
    }

    fn meta_from(&mut self, start: &SourceSpan) -> Meta {
        let span = start.join(self.prev_span());
        Meta { id: self.id(), span }
    }

    // ---------------------------------------------------------------- items

    fn item(&mut self) -> PResult<Item> {
        let start = self.peek().unwrap().span.clone();
        if self.peek().is_some_and(|t| t.is_keyword("struct")) {
            return self.record_def().map(Item::Record);
        }
        if !self.starts_type() {
            return self.error("expected a declaration or function definition", &["struct", "type"]);
        }
        let ty = self.type_ref()?;
        let name = self.expect_ident()?.text.clone();
        if self.peek().is_some_and(|t| t.is_punct("(")) {
            return self.func_def(start, ty, name).map(Item::Function);
        }
        self.decl_rest(start, ty, name).map(Item::Global)
    }

    fn record_def(&mut self) -> PResult<RecordDef> {
        let start = self.expect_keyword("struct")?.span.clone();
        let name = self.expect_ident()?.text.clone();
        self.expect_punct("{")?;
        let mut fields = Vec::new();
        while !self.peek().is_some_and(|t| t.is_punct("}")) {
            if !self.starts_type() {
                return self.error("expected a field declaration", &["type", "}"]);
            }
            let mut ty = self.type_ref()?;
            let name = self.expect_ident()?.text.clone();
            self.array_suffix(&mut ty)?;
            self.expect_punct(";")?;
            fields.push(Field { ty, name });
        }
        self.expect_punct("}")?;
        self.expect_punct(";")?;
        Ok(RecordDef {
            meta: self.meta_from(&start),
            name,
            fields,
        })
    }

    fn func_def(&mut self, start: SourceSpan, ret: TypeRef, name: String) -> PResult<FunctionDef> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.eat_punct(")") {
            loop {
                let pstart = match self.peek() {
                    Some(t) => t.span.clone(),
                    None => return self.error("expected parameter", &["type"]),
                };
                if !self.starts_type() {
                    return self.error("expected parameter type", &["type"]);
                }
                let mut ty = self.type_ref()?;
                let pname = self.expect_ident()?.text.clone();
                self.array_suffix(&mut ty)?;
                params.push(Param {
                    meta: self.meta_from(&pstart),
                    ty,
                    name: pname,
                });
                if self.eat_punct(")") {
                    break;
                }
                self.expect_punct(",")?;
            }
        }
        let body = self.block()?;
        Ok(FunctionDef {
            meta: self.meta_from(&start),
            ret,
            name,
            params,
            body,
        })
    }

    // ---------------------------------------------------------------- types

    fn starts_type(&self) -> bool {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword => matches!(t.text.as_str(), "int" | "float" | "bool"),
            Some(t) if t.kind == TokenKind::Identifier => true,
            _ => false,
        }
    }

    fn type_ref(&mut self) -> PResult<TypeRef> {
        let t = self.bump();
        let base = match (t.kind, t.text.as_str()) {
            (TokenKind::Keyword, "int") => BaseType::Int,
            (TokenKind::Keyword, "float") => BaseType::Float,
            (TokenKind::Keyword, "bool") => BaseType::Bool,
            (TokenKind::Identifier, n) => BaseType::Named(n.to_string()),
            _ => {
                self.pos -= 1;
                return self.error("expected type", &["int", "float", "bool", "identifier"]);
            }
        };
        let mut ty = TypeRef::scalar(base);
        self.array_suffix(&mut ty)?;
        Ok(ty)
    }

    /// `[` INT? `]`, either after the type or (C style) after the declared name.
    fn array_suffix(&mut self, ty: &mut TypeRef) -> PResult<()> {
        if !self.peek().is_some_and(|t| t.is_punct("[")) {
            return Ok(());
        }
        if ty.array.is_some() {
            return self.error("multi-dimensional arrays are not supported", &[]);
        }
        self.bump();
        let len = match self.peek() {
            Some(t) if t.kind == TokenKind::IntLiteral => {
                let n = t
                    .text
                    .parse::<u64>()
                    .or_else(|_| self.error("array length out of range", &[]))?;
                self.bump();
                Some(n)
            }
            _ => None,
        };
        self.expect_punct("]")?;
        ty.array = Some(len);
        Ok(())
    }

    /// Lookahead: does the statement at the cursor start a declaration?
    fn starts_decl(&self) -> bool {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword => matches!(t.text.as_str(), "int" | "float" | "bool"),
            Some(t) if t.kind == TokenKind::Identifier => match self.peek_at(1) {
                Some(n) if n.kind == TokenKind::Identifier => true,
                Some(n) if n.is_punct("[") => {
                    let mut k = 2;
                    if self.peek_at(k).is_some_and(|t| t.kind == TokenKind::IntLiteral) {
                        k += 1;
                    }
                    self.peek_at(k).is_some_and(|t| t.is_punct("]"))
                        && self.peek_at(k + 1).is_some_and(|t| t.kind == TokenKind::Identifier)
                }
                _ => false,
            },
            _ => false,
        }
    }

    // ----------------------------------------------------------- statements

    fn block(&mut self) -> PResult<Block> {
        let start = self.expect_punct("{")?.span.clone();
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.is_punct("}") => break,
                Some(_) => stmts.push(self.stmt()?),
                None => return self.error("unterminated block", &["}"]),
            }
        }
        self.bump();
        Ok(Block {
            meta: self.meta_from(&start),
            stmts,
        })
    }

    fn decl_stmt(&mut self) -> PResult<Stmt> {
        let start = self.peek().unwrap().span.clone();
        let ty = self.type_ref()?;
        let name = self.expect_ident()?.text.clone();
        self.decl_rest(start, ty, name)
    }

    fn decl_rest(&mut self, start: SourceSpan, mut ty: TypeRef, name: String) -> PResult<Stmt> {
        self.array_suffix(&mut ty)?;
        let init = if self.peek().is_some_and(|t| t.is_op("=")) {
            self.bump();
            if self.eat_punct("{") {
                let mut es = vec![self.expr()?];
                while self.eat_punct(",") {
                    es.push(self.expr()?);
                }
                self.expect_punct("}")?;
                Some(Init::List(es))
            } else {
                Some(Init::Expr(self.expr()?))
            }
        } else {
            None
        };
        self.expect_punct(";")?;
        Ok(Stmt {
            meta: self.meta_from(&start),
            kind: StmtKind::Decl(Decl { ty, name, init }),
        })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect_punct("(")?;
        let e = self.expr()?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let tok = match self.peek() {
            Some(t) => t,
            None => return self.error("expected statement", &["statement"]),
        };
        let start = tok.span.clone();

        if tok.kind == TokenKind::Keyword {
            let kind = match tok.text.as_str() {
                "int" | "float" | "bool" => return self.decl_stmt(),
                "if" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let then_branch = Box::new(self.stmt()?);
                    let else_branch = if self.peek().is_some_and(|t| t.is_keyword("else")) {
                        self.bump();
                        Some(Box::new(self.stmt()?))
                    } else {
                        None
                    };
                    StmtKind::If {
                        cond,
                        then_branch,
                        else_branch,
                    }
                }
                "switch" => {
                    self.bump();
                    let scrutinee = self.paren_expr()?;
                    let body = self.switch_body()?;
                    StmtKind::Switch { scrutinee, body }
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let body = Box::new(self.stmt()?);
                    StmtKind::While { cond, body }
                }
                "do" => {
                    self.bump();
                    let body = Box::new(self.stmt()?);
                    self.expect_keyword("while")?;
                    let cond = self.paren_expr()?;
                    self.expect_punct(";")?;
                    StmtKind::DoWhile { body, cond }
                }
                "for" => {
                    self.bump();
                    self.expect_punct("(")?;
                    let init = if self.starts_decl() {
                        ForInit::Decl(Box::new(self.decl_stmt()?))
                    } else if self.eat_punct(";") {
                        ForInit::None
                    } else {
                        let e = self.expr()?;
                        self.expect_punct(";")?;
                        ForInit::Expr(e)
                    };
                    let cond = if self.peek().is_some_and(|t| t.is_punct(";")) {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect_punct(";")?;
                    let update = if self.peek().is_some_and(|t| t.is_punct(")")) {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect_punct(")")?;
                    let body = Box::new(self.stmt()?);
                    StmtKind::For {
                        init,
                        cond,
                        update,
                        body,
                    }
                }
                "return" => {
                    self.bump();
                    let value = if self.peek().is_some_and(|t| t.is_punct(";")) {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect_punct(";")?;
                    StmtKind::Return(value)
                }
                "break" => {
                    self.bump();
                    self.expect_punct(";")?;
                    StmtKind::Break
                }
                "continue" => {
                    self.bump();
                    self.expect_punct(";")?;
                    StmtKind::Continue
                }
                "goto" => {
                    self.bump();
                    let label = self.expect_ident()?.text.clone();
                    self.expect_punct(";")?;
                    StmtKind::Goto(label)
                }
                "true" | "false" => self.expr_stmt()?,
                _ => return self.error("expected statement", &["statement"]),
            };
            return Ok(Stmt {
                meta: self.meta_from(&start),
                kind,
            });
        }

        if tok.kind == TokenKind::Identifier && self.peek_at(1).is_some_and(|t| t.is_punct(":")) {
            let label = self.bump().text.clone();
            self.bump();
            let stmt = Box::new(self.stmt()?);
            return Ok(Stmt {
                meta: self.meta_from(&start),
                kind: StmtKind::Labeled { label, stmt },
            });
        }
        if self.starts_decl() {
            return self.decl_stmt();
        }
        if tok.is_punct("{") {
            let b = self.block()?;
            return Ok(Stmt {
                meta: self.meta_from(&start),
                kind: StmtKind::Block(b),
            });
        }
        if tok.is_punct(";") {
            self.bump();
            return Ok(Stmt {
                meta: self.meta_from(&start),
                kind: StmtKind::Empty,
            });
        }
        let kind = self.expr_stmt()?;
        Ok(Stmt {
            meta: self.meta_from(&start),
            kind,
        })
    }

    fn expr_stmt(&mut self) -> PResult<StmtKind> {
        let e = self.expr()?;
        self.expect_punct(";")?;
        Ok(StmtKind::Expr(e))
    }

    fn switch_body(&mut self) -> PResult<SwitchBody> {
        let start = self.expect_punct("{")?.span.clone();
        let mut arms: Vec<SwitchArm> = Vec::new();
        loop {
            let t = match self.peek() {
                Some(t) => t,
                None => return self.error("unterminated switch body", &["}"]),
            };
            if t.is_punct("}") {
                self.bump();
                break;
            }
            if t.is_keyword("case") {
                self.bump();
                let lit = self.case_literal()?;
                self.expect_punct(":")?;
                arms.push(SwitchArm {
                    label: CaseLabel::Case(lit),
                    body: Vec::new(),
                });
            } else if t.is_keyword("default") {
                self.bump();
                self.expect_punct(":")?;
                arms.push(SwitchArm {
                    label: CaseLabel::Default,
                    body: Vec::new(),
                });
            } else if let Some(arm) = arms.last_mut() {
                arm.body.push(self.stmt()?);
            } else {
                return self.error("expected `case` or `default`", &["case", "default", "}"]);
            }
        }
        Ok(SwitchBody {
            meta: self.meta_from(&start),
            arms,
        })
    }

    fn case_literal(&mut self) -> PResult<Literal> {
        let negative = self.peek().is_some_and(|t| t.is_op("-"));
        if negative {
            self.bump();
        }
        let t = match self.peek() {
            Some(t) => t,
            None => return self.error("expected case literal", &["literal"]),
        };
        let sign = if negative { "-" } else { "" };
        let lit = match t.kind {
            TokenKind::IntLiteral => Literal::Int(format!("{sign}{}", t.text)),
            TokenKind::FloatLiteral => Literal::Float(format!("{sign}{}", t.text)),
            TokenKind::Keyword if !negative && (t.text == "true" || t.text == "false") => {
                Literal::Bool(t.text == "true")
            }
            _ => return self.error("expected case literal", &["literal"]),
        };
        self.bump();
        Ok(lit)
    }

    // ---------------------------------------------------------- expressions

    fn expr(&mut self) -> PResult<Expr> {
        self.assignment()
    }

    fn assignment(&mut self) -> PResult<Expr> {
        let start = self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span());
        let lhs = self.binary(2)?;
        let op = match self.peek() {
            Some(t) if t.kind == TokenKind::Operator => t.text.as_str(),
            _ => return Ok(lhs),
        };
        let compound = CompoundOp::from_symbol(op);
        if op != "=" && compound.is_none() {
            return Ok(lhs);
        }
        if !lhs.is_assignable() {
            return self.error("left side of assignment is not assignable", &[]);
        }
        self.bump();
        let value = Box::new(self.assignment()?);
        let target = Box::new(lhs);
        let kind = match compound {
            Some(op) => ExprKind::CompoundAssign { op, target, value },
            None => ExprKind::Assign { target, value },
        };
        Ok(Expr {
            meta: self.meta_from(&start),
            kind,
        })
    }

    /// Precedence climbing over the left-associative binary operators.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let start = self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span());
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(t) if t.kind == TokenKind::Operator => match BinaryOp::from_symbol(&t.text) {
                    Some(op) if op.precedence() >= min_prec => op,
                    _ => break,
                },
                _ => break,
            };
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr {
                meta: self.meta_from(&start),
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span());
        let op = match self.peek() {
            Some(t) if t.is_op("!") => Some(UnaryOp::Not),
            Some(t) if t.is_op("-") => Some(UnaryOp::Neg),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let operand = Box::new(self.unary()?);
            return Ok(Expr {
                meta: self.meta_from(&start),
                kind: ExprKind::Unary { op, operand },
            });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span());
        let mut e = self.primary()?;
        loop {
            let kind = match self.peek() {
                Some(t) if t.is_punct("[") => {
                    self.bump();
                    let index = Box::new(self.expr()?);
                    self.expect_punct("]")?;
                    ExprKind::Index {
                        base: Box::new(e),
                        index,
                    }
                }
                Some(t) if t.is_punct(".") => {
                    self.bump();
                    let field = self.expect_ident()?.text.clone();
                    ExprKind::Member {
                        base: Box::new(e),
                        field,
                    }
                }
                Some(t) if t.is_op("++") || t.is_op("--") => {
                    if !e.is_assignable() {
                        return self.error("operand of `++`/`--` is not assignable", &[]);
                    }
                    let inc = t.is_op("++");
                    self.bump();
                    if inc {
                        ExprKind::Increment(Box::new(e))
                    } else {
                        ExprKind::Decrement(Box::new(e))
                    }
                }
                _ => break,
            };
            e = Expr {
                meta: self.meta_from(&start),
                kind,
            };
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = match self.peek() {
            Some(t) => t,
            None => return self.error("expected expression", &["expression"]),
        };
        let start = t.span.clone();
        let kind = match t.kind {
            TokenKind::IntLiteral => {
                self.bump();
                ExprKind::Literal(Literal::Int(t.text.clone()))
            }
            TokenKind::FloatLiteral => {
                self.bump();
                ExprKind::Literal(Literal::Float(t.text.clone()))
            }
            TokenKind::Keyword if t.text == "true" || t.text == "false" => {
                self.bump();
                ExprKind::Literal(Literal::Bool(t.text == "true"))
            }
            TokenKind::StringLiteral => {
                return self.error("string literals are only allowed as arguments to `print`", &[]);
            }
            TokenKind::Identifier => {
                self.bump();
                if self.peek().is_some_and(|t| t.is_punct("(")) {
                    let callee = t.text.clone();
                    let args = self.call_args(&callee)?;
                    ExprKind::Call { callee, args }
                } else {
                    ExprKind::Var(t.text.clone())
                }
            }
            TokenKind::Punctuation if t.text == "::" => {
                self.bump();
                let name = self.expect_ident()?.text.clone();
                ExprKind::Global(name)
            }
            TokenKind::Punctuation if t.text == "(" => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                return Ok(e);
            }
            _ => return self.error("expected expression", &["expression"]),
        };
        Ok(Expr {
            meta: self.meta_from(&start),
            kind,
        })
    }

    fn call_args(&mut self, callee: &str) -> PResult<Vec<Expr>> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::StringLiteral && callee == "print" => {
                    self.bump();
                    args.push(Expr {
                        meta: Meta {
                            id: self.id(),
                            span: t.span.clone(),
                        },
                        kind: ExprKind::Literal(Literal::Str(t.text.clone())),
                    });
                }
                _ => args.push(self.expr()?),
            }
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::tokenize;

    fn parse_src(src: &str) -> Result<SyntaxTree, ParseError> {
        parse(&tokenize(src).unwrap())
    }

    fn main_body(t: &SyntaxTree) -> &[Stmt] {
        &t.function("main").unwrap().body.stmts
    }

    #[test]
    fn unit_program_has_two_statements() {
        let t = parse_src("void main() { int a; a=1; }").unwrap();
        assert_eq!(main_body(&t).len(), 2);
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_src("void main() { int a; a = 1 - 2 - 3 * 4; }").unwrap();
        let StmtKind::Expr(e) = &main_body(&t)[1].kind else {
            panic!()
        };
        let ExprKind::Assign { value, .. } = &e.kind else {
            panic!()
        };
        let ExprKind::Binary { op, lhs, rhs } = &value.kind else {
            panic!()
        };
        assert_eq!(*op, BinaryOp::Sub);
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinaryOp::Sub, .. }));
        assert!(matches!(rhs.kind, ExprKind::Binary { op: BinaryOp::Mul, .. }));
    }

    #[test]
    fn declaration_forms() {
        let t = parse_src(
            "node n; int a[10]; int b[] = {1, 2}; int[3] c;
             void main() { node m; node[2] k; }",
        )
        .unwrap();
        let decls: Vec<&Decl> = t
            .items
            .iter()
            .filter_map(|i| match i {
                Item::Global(Stmt {
                    kind: StmtKind::Decl(d),
                    ..
                }) => Some(d),
                _ => None,
            })
            .collect();
        assert_eq!(decls[0].ty.base, BaseType::Named("node".into()));
        assert_eq!(decls[1].ty.array, Some(Some(10)));
        assert!(matches!(&decls[2].init, Some(Init::List(v)) if v.len() == 2));
        assert_eq!(decls[3].ty.array, Some(Some(3)));
        assert!(main_body(&t).iter().all(|s| matches!(s.kind, StmtKind::Decl(_))));
    }

    #[test]
    fn for_init_declaration_is_a_child_of_the_for() {
        let t = parse_src("void main() { for (int i = 0; i < 3; i++) ; }").unwrap();
        let StmtKind::For { init, .. } = &main_body(&t)[0].kind else {
            panic!()
        };
        assert!(matches!(init, ForInit::Decl(_)));
    }

    #[test]
    fn labels_switch_and_globals() {
        let t = parse_src(
            "int x; void main() { switch (x) { case 1: x = 2; break; case -1: default: ::x++; } end: ; goto end; }",
        )
        .unwrap();
        let body = main_body(&t);
        let StmtKind::Switch { body: sw, .. } = &body[0].kind else {
            panic!()
        };
        assert_eq!(sw.arms.len(), 3);
        assert_eq!(sw.arms[1].label, CaseLabel::Case(Literal::Int("-1".into())));
        assert!(sw.arms[1].body.is_empty());
        assert!(matches!(body[1].kind, StmtKind::Labeled { .. }));
        assert!(matches!(body[2].kind, StmtKind::Goto(_)));
    }

    #[test]
    fn strings_only_in_print() {
        assert!(parse_src("void main() { print(\"hi\"); }").is_ok());
        let e = parse_src("void main() { int a; a = f(\"hi\"); }").unwrap_err();
        assert!(e.message.contains("print"));
    }

    #[test]
    fn errors_report_span_and_expectations() {
        let e = parse_src("void main() { int a a = 1; }").unwrap_err();
        assert_eq!(e.span.col_start, 21);
        assert!(e.expected.contains(&";".to_string()));
        assert!(parse_src("void main() { 1 = 2; }").is_err());
        assert!(parse_src("void main() { a++ ++; }").is_err());
        assert!(parse_src("void main() {").is_err());
    }

    #[test]
    fn node_ids_unique_and_spans_nested() {
        let t = parse_src("void main() { int a; while (a < 3) { if (a) a = a + 1; else break; } }").unwrap();
        let f = t.function("main").unwrap();
        let mut ids = Vec::new();
        fn visit(s: &Stmt, parent: &SourceSpan, ids: &mut Vec<NodeId>) {
            assert!(parent.contains(&s.meta.span));
            ids.push(s.meta.id);
            for e in s.own_exprs() {
                e.walk(&mut |x| {
                    assert!(s.meta.span.contains(&x.meta.span));
                    ids.push(x.meta.id);
                });
            }
            for c in s.child_stmts() {
                visit(c, &s.meta.span, ids);
            }
        }
        for s in &f.body.stmts {
            visit(s, &f.body.meta.span, &mut ids);
        }
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }
}
