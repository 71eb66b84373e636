//! Recursive-descent Java parser producing a concrete tree whose node kinds
//! are production names. The adapter lowers it through the kind-mapping
//! table into a [`NormalizedAst`](crate::ast::NormalizedAst).

use super::lexer::{tokenize, Token, TokenKind};
use crate::ast::{AstError, Span};

/// Concrete syntax node. `kind` is a production name from the Java
/// grammar mapping file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNode {
    pub kind: &'static str,
    pub label: String,
    pub span: Span,
    pub children: Vec<RawNode>,
}

impl RawNode {
    fn leaf(kind: &'static str, label: impl Into<String>, span: Span) -> Self {
        RawNode { kind, label: label.into(), span, children: Vec::new() }
    }
}

/// Every production name the parser can emit; the mapping file must cover
/// all of them.
pub const PRODUCTIONS: &[&str] = &[
    "program",
    "package_declaration",
    "import_declaration",
    "class_declaration",
    "interface_declaration",
    "annotation_type_declaration",
    "enum_declaration",
    "record_declaration",
    "enum_constant",
    "field_declaration",
    "method_declaration",
    "constructor_declaration",
    "compact_constructor_declaration",
    "initializer",
    "formal_parameters",
    "formal_parameter",
    "throws",
    "superclass",
    "super_interfaces",
    "type_parameters",
    "modifier",
    "annotation",
    "type",
    "identifier_declaration",
    "variable_declarator",
    "class_body",
    "block",
    "local_variable_declaration",
    "expression_statement",
    "if_statement",
    "while_statement",
    "do_statement",
    "for_statement",
    "for_init",
    "for_update",
    "enhanced_for_statement",
    "try_statement",
    "resource_specification",
    "catch_clause",
    "finally_clause",
    "switch_statement",
    "switch_block_group",
    "switch_label",
    "default_label",
    "return_statement",
    "break_statement",
    "continue_statement",
    "throw_statement",
    "synchronized_statement",
    "labeled_statement",
    "label",
    "empty_statement",
    "assert_statement",
    "yield_statement",
    "explicit_constructor_invocation",
    "assignment_expression",
    "binary_expression",
    "unary_expression",
    "postfix_expression",
    "operator",
    "ternary_expression",
    "instanceof_expression",
    "method_invocation",
    "method_name",
    "object_creation_expression",
    "array_creation_expression",
    "array_initializer",
    "array_access",
    "field_access",
    "field_name",
    "cast_expression",
    "lambda_expression",
    "lambda_parameters",
    "method_reference",
    "identifier",
    "this",
    "super",
    "class_literal",
    "literal",
    "type_arguments",
    "switch_expression",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "abstract", "final", "native", "synchronized",
    "transient", "volatile", "strictfp",
];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

type PResult<T> = Result<T, AstError>;

pub fn parse(source: &str) -> PResult<RawNode> {
    let tokens = tokenize(source)?;
    let mut p = Parser { src: source, toks: tokens, pos: 0 };
    p.compilation_unit()
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    // ---- token helpers -------------------------------------------------

    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, n: usize) -> &Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is(text)
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn at_ident(&self) -> bool {
        self.peek().kind == TokenKind::Ident
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, text: &str) -> PResult<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.error(format!("expected `{text}`, found {}", self.describe())))
        }
    }

    fn ident(&mut self) -> PResult<Token> {
        if self.at_ident() {
            Ok(self.bump())
        } else {
            Err(self.error(format!("expected identifier, found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        let t = self.peek();
        if t.kind == TokenKind::Eof {
            "end of file".to_string()
        } else {
            format!("`{}`", t.text)
        }
    }

    fn error(&self, message: String) -> AstError {
        AstError::syntax(self.src, self.peek().span, message)
    }

    fn start(&self) -> usize {
        self.peek().span.start
    }

    fn end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn node(&self, kind: &'static str, start: usize, children: Vec<RawNode>) -> RawNode {
        RawNode { kind, label: String::new(), span: Span::new(start, self.end().max(start)), children }
    }

    fn text_since(&self, tok_start: usize) -> String {
        self.toks[tok_start..self.pos].iter().map(|t| t.text.as_str()).collect()
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let (ta, tb) = (&self.toks[a.min(self.toks.len() - 1)], &self.toks[b.min(self.toks.len() - 1)]);
        ta.span.end == tb.span.start
    }

    /// Operator starting with `>` built from adjacent split tokens.
    fn gt_operator(&self) -> Option<(String, usize)> {
        if !self.at(">") {
            return None;
        }
        let mut text = String::from(">");
        let mut n = 1;
        while n < 3 && self.peek_at(n).is(">") && self.adjacent(self.pos + n - 1, self.pos + n) {
            text.push('>');
            n += 1;
        }
        if self.peek_at(n).is("=") && self.adjacent(self.pos + n - 1, self.pos + n) {
            text.push('=');
            n += 1;
        }
        Some((text, n))
    }

    fn peek_operator(&self) -> Option<(String, usize)> {
        let t = self.peek();
        if t.kind != TokenKind::Punct {
            return None;
        }
        if t.text == ">" {
            return self.gt_operator();
        }
        Some((t.text.clone(), 1))
    }

    fn operator_leaf(&mut self, text: String, ntoks: usize) -> RawNode {
        let start = self.start();
        self.pos += ntoks;
        RawNode::leaf("operator", text, Span::new(start, self.end()))
    }

    // ---- declarations --------------------------------------------------

    fn compilation_unit(&mut self) -> PResult<RawNode> {
        let mut children = Vec::new();
        let save = self.pos;
        let mods = self.modifiers()?;
        if self.at("package") {
            let start = mods.first().map_or(self.start(), |m| m.span.start);
            self.bump();
            let name = self.qualified_name()?;
            self.expect(";")?;
            let mut kids = mods;
            kids.push(name);
            children.push(self.node("package_declaration", start, kids));
        } else {
            self.pos = save;
        }
        while self.at("import") {
            let start = self.start();
            self.bump();
            let mut kids = Vec::new();
            if self.at("static") {
                let t = self.bump();
                kids.push(RawNode::leaf("modifier", "static", t.span));
            }
            let name_start = self.pos;
            let s = self.start();
            self.ident()?;
            while self.eat(".") {
                if !self.eat("*") {
                    self.ident()?;
                }
            }
            kids.push(RawNode::leaf("type", self.text_since(name_start), Span::new(s, self.end())));
            self.expect(";")?;
            children.push(self.node("import_declaration", start, kids));
        }
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let start = self.start();
            let mods = self.modifiers()?;
            children.push(self.type_declaration(start, mods)?);
        }
        let end = self.src.len();
        Ok(RawNode { kind: "program", label: String::new(), span: Span::new(0, end), children })
    }

    fn qualified_name(&mut self) -> PResult<RawNode> {
        let tok_start = self.pos;
        let start = self.start();
        self.ident()?;
        while self.at(".") && self.peek_at(1).kind == TokenKind::Ident {
            self.bump();
            self.bump();
        }
        Ok(RawNode::leaf("type", self.text_since(tok_start), Span::new(start, self.end())))
    }

    fn at_contextual(&self, word: &str) -> bool {
        self.at_ident() && self.peek().text == word
    }

    fn modifiers(&mut self) -> PResult<Vec<RawNode>> {
        let mut out = Vec::new();
        loop {
            if self.at("@") && !self.peek_at(1).is("interface") {
                out.push(self.annotation()?);
            } else if (self.peek().kind == TokenKind::Keyword && MODIFIERS.contains(&self.peek().text.as_str()))
                || (self.at("default") && !self.peek_at(1).is(":") && !self.peek_at(1).is("->"))
            {
                let t = self.bump();
                out.push(RawNode::leaf("modifier", t.text, t.span));
            } else if (self.at_contextual("sealed") || self.at_contextual("non"))
                && self.is_sealed_modifier()
            {
                let start = self.start();
                let tok_start = self.pos;
                if self.at_contextual("non") {
                    self.pos += 3;
                } else {
                    self.pos += 1;
                }
                out.push(RawNode::leaf("modifier", self.text_since(tok_start), Span::new(start, self.end())));
            } else {
                return Ok(out);
            }
        }
    }

    fn is_sealed_modifier(&self) -> bool {
        if self.at_contextual("sealed") {
            let next = self.peek_at(1);
            return next.kind == TokenKind::Keyword || next.kind == TokenKind::Ident;
        }
        self.peek_at(1).is("-") && self.peek_at(2).text == "sealed"
    }

    fn annotation(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let tok_start = self.pos;
        self.expect("@")?;
        self.ident()?;
        while self.at(".") && self.peek_at(1).kind == TokenKind::Ident {
            self.pos += 2;
        }
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(RawNode::leaf("annotation", self.text_since(tok_start), Span::new(start, self.end())))
    }

    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        self.expect(open)?;
        let mut depth = 1;
        while depth > 0 {
            if self.at_eof() {
                return Err(self.error(format!("expected `{close}`, found end of file")));
            }
            if self.at(open) {
                depth += 1;
            } else if self.at(close) {
                depth -= 1;
            }
            self.bump();
        }
        Ok(())
    }

    fn is_type_declaration_start(&self) -> bool {
        self.at("class")
            || self.at("interface")
            || self.at("enum")
            || (self.at("@") && self.peek_at(1).is("interface"))
            || (self.at_contextual("record") && self.peek_at(1).kind == TokenKind::Ident && self.peek_at(2).is("("))
    }

    fn type_declaration(&mut self, start: usize, mods: Vec<RawNode>) -> PResult<RawNode> {
        let mut kids = mods;
        let kind = if self.eat("class") {
            "class_declaration"
        } else if self.eat("interface") {
            "interface_declaration"
        } else if self.eat("enum") {
            "enum_declaration"
        } else if self.at("@") && self.peek_at(1).is("interface") {
            self.pos += 2;
            "annotation_type_declaration"
        } else if self.at_contextual("record") {
            self.bump();
            "record_declaration"
        } else {
            return Err(self.error(format!("expected type declaration, found {}", self.describe())));
        };
        let name = self.ident()?;
        kids.push(RawNode::leaf("identifier_declaration", name.text.clone(), name.span));
        if self.at("<") {
            kids.push(self.type_parameters()?);
        }
        if kind == "record_declaration" {
            kids.push(self.formal_parameters()?);
        }
        if self.at("extends") {
            let s = self.start();
            self.bump();
            let mut types = vec![self.type_node()?];
            while self.eat(",") {
                types.push(self.type_node()?);
            }
            let k = if kind == "interface_declaration" { "super_interfaces" } else { "superclass" };
            kids.push(self.node(k, s, types));
        }
        if self.at("implements") {
            let s = self.start();
            self.bump();
            let mut types = vec![self.type_node()?];
            while self.eat(",") {
                types.push(self.type_node()?);
            }
            kids.push(self.node("super_interfaces", s, types));
        }
        if self.at_contextual("permits") {
            self.bump();
            self.type_node()?;
            while self.eat(",") {
                self.type_node()?;
            }
        }
        self.expect("{")?;
        if kind == "enum_declaration" {
            self.enum_constants(&mut kids)?;
        }
        let class_name = name.text;
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`, found end of file".into()));
            }
            if let Some(member) = self.member(&class_name)? {
                kids.push(member);
            }
        }
        self.expect("}")?;
        Ok(self.node(kind, start, kids))
    }

    fn enum_constants(&mut self, kids: &mut Vec<RawNode>) -> PResult<()> {
        loop {
            if self.at(";") || self.at("}") {
                break;
            }
            let start = self.start();
            let mut c = self.modifiers()?;
            let name = self.ident()?;
            c.push(RawNode::leaf("identifier_declaration", name.text, name.span));
            if self.at("(") {
                c.extend(self.arguments()?);
            }
            if self.at("{") {
                c.push(self.class_body("")?);
            }
            kids.push(self.node("enum_constant", start, c));
            if !self.eat(",") {
                break;
            }
        }
        self.eat(";");
        Ok(())
    }

    fn class_body(&mut self, class_name: &str) -> PResult<RawNode> {
        let start = self.start();
        self.expect("{")?;
        let mut kids = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`, found end of file".into()));
            }
            if let Some(m) = self.member(class_name)? {
                kids.push(m);
            }
        }
        self.expect("}")?;
        Ok(self.node("class_body", start, kids))
    }

    fn member(&mut self, class_name: &str) -> PResult<Option<RawNode>> {
        if self.eat(";") {
            return Ok(None);
        }
        let start = self.start();
        if self.at("{") || (self.at("static") && self.peek_at(1).is("{")) {
            let mut kids = Vec::new();
            if self.at("static") {
                let t = self.bump();
                kids.push(RawNode::leaf("modifier", "static", t.span));
            }
            kids.push(self.block()?);
            return Ok(Some(self.node("initializer", start, kids)));
        }
        let mut kids = self.modifiers()?;
        if self.is_type_declaration_start() {
            return Ok(Some(self.type_declaration(start, kids)?));
        }
        if self.at("<") {
            kids.push(self.type_parameters()?);
        }
        // constructor: Name '('   compact constructor: Name '{'
        if self.at_ident() && self.peek().text == class_name && (self.peek_at(1).is("(") || self.peek_at(1).is("{")) {
            let name = self.bump();
            kids.push(RawNode::leaf("identifier_declaration", name.text, name.span));
            let kind = if self.at("(") {
                kids.push(self.formal_parameters()?);
                "constructor_declaration"
            } else {
                "compact_constructor_declaration"
            };
            if let Some(t) = self.throws_clause()? {
                kids.push(t);
            }
            kids.push(self.block()?);
            return Ok(Some(self.node(kind, start, kids)));
        }
        let ty = if self.at("void") {
            let t = self.bump();
            RawNode::leaf("type", "void", t.span)
        } else {
            self.type_node()?
        };
        kids.push(ty);
        let name = self.ident()?;
        if self.at("(") {
            kids.push(RawNode::leaf("identifier_declaration", name.text, name.span));
            kids.push(self.formal_parameters()?);
            while self.at("[") {
                self.bump();
                self.expect("]")?;
            }
            if let Some(t) = self.throws_clause()? {
                kids.push(t);
            }
            if self.at("default") {
                self.bump();
                kids.push(self.element_value()?);
                self.expect(";")?;
            } else if !self.eat(";") {
                kids.push(self.block()?);
            }
            return Ok(Some(self.node("method_declaration", start, kids)));
        }
        self.pos -= 1;
        kids.extend(self.variable_declarators()?);
        self.expect(";")?;
        Ok(Some(self.node("field_declaration", start, kids)))
    }

    fn element_value(&mut self) -> PResult<RawNode> {
        if self.at("@") {
            self.annotation()
        } else if self.at("{") {
            self.array_initializer()
        } else {
            self.expression()
        }
    }

    fn throws_clause(&mut self) -> PResult<Option<RawNode>> {
        if !self.at("throws") {
            return Ok(None);
        }
        let start = self.start();
        self.bump();
        let mut types = vec![self.type_node()?];
        while self.eat(",") {
            types.push(self.type_node()?);
        }
        Ok(Some(self.node("throws", start, types)))
    }

    fn type_parameters(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let tok_start = self.pos;
        self.expect("<")?;
        let mut depth = 1;
        while depth > 0 {
            if self.at_eof() {
                return Err(self.error("unterminated type parameter list".into()));
            }
            if self.at("<") {
                depth += 1;
            } else if self.at(">") {
                depth -= 1;
            }
            self.bump();
        }
        Ok(RawNode::leaf("type_parameters", self.text_since(tok_start), Span::new(start, self.end())))
    }

    fn formal_parameters(&mut self) -> PResult<RawNode> {
        let start = self.start();
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.at(")") {
            loop {
                params.push(self.formal_parameter()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(self.node("formal_parameters", start, params))
    }

    fn formal_parameter(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let mut kids = self.modifiers()?;
        let mut ty = self.type_node()?;
        if self.at("...") {
            self.bump();
            ty.label.push_str("...");
            ty.span.end = self.end();
        }
        kids.push(ty);
        if self.at("this") {
            let t = self.bump();
            kids.push(RawNode::leaf("identifier_declaration", "this", t.span));
        } else {
            let name = self.ident()?;
            kids.push(RawNode::leaf("identifier_declaration", name.text, name.span));
        }
        while self.at("[") {
            self.bump();
            self.expect("]")?;
        }
        Ok(self.node("formal_parameter", start, kids))
    }

    fn variable_declarators(&mut self) -> PResult<Vec<RawNode>> {
        let mut out = Vec::new();
        loop {
            let start = self.start();
            let name = self.ident()?;
            let mut kids = vec![RawNode::leaf("identifier_declaration", name.text, name.span)];
            while self.at("[") {
                self.bump();
                self.expect("]")?;
            }
            if self.eat("=") {
                kids.push(if self.at("{") { self.array_initializer()? } else { self.expression()? });
            }
            out.push(self.node("variable_declarator", start, kids));
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    // ---- types -----------------------------------------------------------

    /// Parses a type and returns it as a single leaf labelled with its
    /// whitespace-free source text.
    fn type_node(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let tok_start = self.pos;
        self.parse_type()?;
        Ok(RawNode::leaf("type", self.text_since(tok_start), Span::new(start, self.end())))
    }

    fn parse_type(&mut self) -> PResult<()> {
        while self.at("@") {
            self.annotation()?;
        }
        if self.peek().kind == TokenKind::Keyword && PRIMITIVES.contains(&self.peek().text.as_str()) {
            self.bump();
        } else {
            self.ident()?;
            if self.at("<") {
                self.type_arguments()?;
            }
            while self.at(".") && (self.peek_at(1).kind == TokenKind::Ident || self.peek_at(1).is("@")) {
                self.bump();
                while self.at("@") {
                    self.annotation()?;
                }
                self.ident()?;
                if self.at("<") {
                    self.type_arguments()?;
                }
            }
        }
        while self.at("[") && self.peek_at(1).is("]") {
            self.pos += 2;
        }
        Ok(())
    }

    fn type_arguments(&mut self) -> PResult<()> {
        self.expect("<")?;
        if self.eat(">") {
            return Ok(());
        }
        loop {
            while self.at("@") {
                self.annotation()?;
            }
            if self.eat("?") {
                if self.eat("extends") || self.eat("super") {
                    self.parse_type()?;
                }
            } else {
                self.parse_type()?;
            }
            while self.eat("&") {
                self.parse_type()?;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(())
    }

    /// Speculatively parses a type; restores the position on failure.
    fn try_type(&mut self) -> Option<RawNode> {
        let save = self.pos;
        match self.type_node() {
            Ok(t) => Some(t),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    // ---- statements --------------------------------------------------------

    fn block(&mut self) -> PResult<RawNode> {
        let start = self.start();
        self.expect("{")?;
        let mut kids = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`, found end of file".into()));
            }
            kids.push(self.block_statement()?);
        }
        self.expect("}")?;
        Ok(self.node("block", start, kids))
    }

    fn block_statement(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let save = self.pos;
        let mods = self.modifiers()?;
        if self.is_type_declaration_start() && !(self.at_contextual("record") && mods.is_empty() && !self.peek_at(2).is("(")) {
            return self.type_declaration(start, mods);
        }
        if let Some(decl) = self.try_local_variable_declaration(start, mods)? {
            self.expect(";")?;
            let mut d = decl;
            d.span.end = self.end();
            return Ok(d);
        }
        self.pos = save;
        self.statement()
    }

    /// `[mods] Type name ...` without the trailing `;`.
    fn try_local_variable_declaration(&mut self, start: usize, mods: Vec<RawNode>) -> PResult<Option<RawNode>> {
        let save = self.pos;
        let Some(ty) = self.try_type() else {
            self.pos = save;
            return Ok(None);
        };
        let next = self.peek_at(1);
        let declares = self.at_ident()
            && (next.is("=") || next.is(";") || next.is(",") || next.is("[") || next.is(":"));
        if !declares {
            self.pos = save;
            return Ok(None);
        }
        let mut kids = mods;
        kids.push(ty);
        kids.extend(self.variable_declarators()?);
        Ok(Some(self.node("local_variable_declaration", start, kids)))
    }

    fn statement(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let t = self.peek().clone();
        if t.kind == TokenKind::Keyword || t.kind == TokenKind::Punct {
            match t.text.as_str() {
                "{" => return self.block(),
                ";" => {
                    self.bump();
                    return Ok(self.node("empty_statement", start, vec![]));
                }
                "if" => {
                    self.bump();
                    let cond = self.paren_expression()?;
                    let then = self.statement()?;
                    let mut kids = vec![cond, then];
                    if self.eat("else") {
                        kids.push(self.statement()?);
                    }
                    return Ok(self.node("if_statement", start, kids));
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expression()?;
                    let body = self.statement()?;
                    return Ok(self.node("while_statement", start, vec![cond, body]));
                }
                "do" => {
                    self.bump();
                    let body = self.statement()?;
                    self.expect("while")?;
                    let cond = self.paren_expression()?;
                    self.expect(";")?;
                    return Ok(self.node("do_statement", start, vec![body, cond]));
                }
                "for" => return self.for_statement(),
                "try" => return self.try_statement(),
                "switch" => {
                    let (sel, cases) = self.switch_parts()?;
                    let mut kids = vec![sel];
                    kids.extend(cases);
                    return Ok(self.node("switch_statement", start, kids));
                }
                "return" => {
                    self.bump();
                    let mut kids = Vec::new();
                    if !self.at(";") {
                        kids.push(self.expression()?);
                    }
                    self.expect(";")?;
                    return Ok(self.node("return_statement", start, kids));
                }
                "break" | "continue" => {
                    self.bump();
                    let mut kids = Vec::new();
                    if self.at_ident() {
                        let l = self.bump();
                        kids.push(RawNode::leaf("label", l.text, l.span));
                    }
                    self.expect(";")?;
                    let kind = if t.text == "break" { "break_statement" } else { "continue_statement" };
                    return Ok(self.node(kind, start, kids));
                }
                "throw" => {
                    self.bump();
                    let e = self.expression()?;
                    self.expect(";")?;
                    return Ok(self.node("throw_statement", start, vec![e]));
                }
                "synchronized" => {
                    self.bump();
                    let lock = self.paren_expression()?;
                    let body = self.block()?;
                    return Ok(self.node("synchronized_statement", start, vec![lock, body]));
                }
                "assert" => {
                    self.bump();
                    let mut kids = vec![self.expression()?];
                    if self.eat(":") {
                        kids.push(self.expression()?);
                    }
                    self.expect(";")?;
                    return Ok(self.node("assert_statement", start, kids));
                }
                "this" | "super" if self.peek_at(1).is("(") => {
                    let recv = self.bump();
                    let mut kids = vec![RawNode::leaf(if recv.text == "this" { "this" } else { "super" }, recv.text, recv.span)];
                    kids.extend(self.arguments()?);
                    self.expect(";")?;
                    return Ok(self.node("explicit_constructor_invocation", start, kids));
                }
                "else" | "case" | "catch" | "finally" => {
                    return Err(self.error(format!("unexpected `{}`", t.text)));
                }
                _ => {}
            }
        }
        if t.kind == TokenKind::Ident {
            if self.peek_at(1).is(":") {
                let l = self.bump();
                self.bump();
                let label = RawNode::leaf("label", l.text, l.span);
                let body = self.statement()?;
                return Ok(self.node("labeled_statement", start, vec![label, body]));
            }
            if t.text == "yield" && self.is_yield_statement() {
                self.bump();
                let e = self.expression()?;
                self.expect(";")?;
                return Ok(self.node("yield_statement", start, vec![e]));
            }
        }
        let e = self.expression()?;
        self.expect(";")?;
        Ok(self.node("expression_statement", start, vec![e]))
    }

    fn at_default_label(&self) -> bool {
        self.at("default") && (self.peek_at(1).is(":") || self.peek_at(1).is("->"))
    }

    fn is_yield_statement(&self) -> bool {
        let next = self.peek_at(1);
        match next.kind {
            TokenKind::Punct => matches!(next.text.as_str(), "(" | "-" | "+" | "!" | "~" | "++" | "--"),
            TokenKind::Eof => false,
            _ => true,
        }
    }

    fn paren_expression(&mut self) -> PResult<RawNode> {
        self.expect("(")?;
        let e = self.expression()?;
        self.expect(")")?;
        Ok(e)
    }

    fn for_statement(&mut self) -> PResult<RawNode> {
        let start = self.start();
        self.expect("for")?;
        self.expect("(")?;
        // enhanced for: [mods] Type name ':'
        let save = self.pos;
        let mods = self.modifiers()?;
        if let Some(ty) = self.try_type() {
            if self.at_ident() && self.peek_at(1).is(":") {
                let name = self.bump();
                self.bump();
                let pstart = mods.first().map_or(ty.span.start, |m| m.span.start);
                let mut pk = mods;
                pk.push(ty);
                pk.push(RawNode::leaf("identifier_declaration", name.text, name.span));
                let param = RawNode { kind: "formal_parameter", label: String::new(), span: Span::new(pstart, name.span.end), children: pk };
                let iter = self.expression()?;
                self.expect(")")?;
                let body = self.statement()?;
                return Ok(self.node("enhanced_for_statement", start, vec![param, iter, body]));
            }
        }
        self.pos = save;
        let mut kids = Vec::new();
        if !self.at(";") {
            let istart = self.start();
            let mods = self.modifiers()?;
            if let Some(decl) = self.try_local_variable_declaration(istart, mods)? {
                kids.push(self.node("for_init", istart, vec![decl]));
            } else {
                self.pos = save;
                let mut exprs = vec![self.expression()?];
                while self.eat(",") {
                    exprs.push(self.expression()?);
                }
                kids.push(self.node("for_init", istart, exprs));
            }
        }
        self.expect(";")?;
        if !self.at(";") {
            kids.push(self.expression()?);
        }
        self.expect(";")?;
        if !self.at(")") {
            let ustart = self.start();
            let mut exprs = vec![self.expression()?];
            while self.eat(",") {
                exprs.push(self.expression()?);
            }
            kids.push(self.node("for_update", ustart, exprs));
        }
        self.expect(")")?;
        kids.push(self.statement()?);
        Ok(self.node("for_statement", start, kids))
    }

    fn try_statement(&mut self) -> PResult<RawNode> {
        let start = self.start();
        self.expect("try")?;
        let mut kids = Vec::new();
        if self.at("(") {
            let rstart = self.start();
            self.bump();
            let mut res = Vec::new();
            while !self.at(")") {
                let s = self.start();
                let mods = self.modifiers()?;
                if let Some(decl) = self.try_resource_declaration(s, mods)? {
                    res.push(decl);
                } else {
                    res.push(self.expression()?);
                }
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
            kids.push(self.node("resource_specification", rstart, res));
        }
        kids.push(self.block()?);
        while self.at("catch") {
            let cstart = self.start();
            self.bump();
            self.expect("(")?;
            let pstart = self.start();
            let mut pk = self.modifiers()?;
            let tstart = self.start();
            let tok_start = self.pos;
            self.parse_type()?;
            while self.eat("|") {
                self.parse_type()?;
            }
            pk.push(RawNode::leaf("type", self.text_since(tok_start), Span::new(tstart, self.end())));
            let name = self.ident()?;
            pk.push(RawNode::leaf("identifier_declaration", name.text, name.span));
            let param = self.node("formal_parameter", pstart, pk);
            self.expect(")")?;
            let body = self.block()?;
            kids.push(self.node("catch_clause", cstart, vec![param, body]));
        }
        if self.at("finally") {
            let fstart = self.start();
            self.bump();
            let body = self.block()?;
            kids.push(self.node("finally_clause", fstart, vec![body]));
        }
        if kids.len() == 1 {
            return Err(self.error("expected `catch` or `finally`".into()));
        }
        Ok(self.node("try_statement", start, kids))
    }

    fn try_resource_declaration(&mut self, start: usize, mods: Vec<RawNode>) -> PResult<Option<RawNode>> {
        let save = self.pos;
        let Some(ty) = self.try_type() else { return Ok(None) };
        if !(self.at_ident() && self.peek_at(1).is("=")) {
            self.pos = save;
            return Ok(None);
        }
        let dstart = self.start();
        let name = self.ident()?;
        self.expect("=")?;
        let init = self.expression()?;
        let decl = self.node(
            "variable_declarator",
            dstart,
            vec![RawNode::leaf("identifier_declaration", name.text, name.span), init],
        );
        let mut kids = mods;
        kids.push(ty);
        kids.push(decl);
        Ok(Some(self.node("local_variable_declaration", start, kids)))
    }

    fn switch_parts(&mut self) -> PResult<(RawNode, Vec<RawNode>)> {
        self.expect("switch")?;
        let sel = self.paren_expression()?;
        self.expect("{")?;
        let mut cases = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`, found end of file".into()));
            }
            let gstart = self.start();
            let mut kids = Vec::new();
            let mut arrow = false;
            // one or more labels
            loop {
                let lstart = self.start();
                if self.eat("default") {
                    kids.push(RawNode::leaf("default_label", "default", Span::new(lstart, self.end())));
                } else if self.eat("case") {
                    let mut exprs = vec![self.case_label_expression()?];
                    while self.eat(",") {
                        exprs.push(self.case_label_expression()?);
                    }
                    kids.push(self.node("switch_label", lstart, exprs));
                } else {
                    return Err(self.error(format!("expected `case` or `default`, found {}", self.describe())));
                }
                if self.eat("->") {
                    arrow = true;
                    break;
                }
                self.expect(":")?;
                if !(self.at("case") || self.at("default")) {
                    break;
                }
            }
            if arrow {
                if self.at("{") {
                    kids.push(self.block()?);
                } else if self.at("throw") {
                    kids.push(self.statement()?);
                } else {
                    let s = self.start();
                    let e = self.expression()?;
                    self.expect(";")?;
                    kids.push(self.node("expression_statement", s, vec![e]));
                }
            } else {
                while !(self.at("case") || self.at_default_label() || self.at("}")) {
                    if self.at_eof() {
                        return Err(self.error("expected `}`, found end of file".into()));
                    }
                    kids.push(self.block_statement()?);
                }
            }
            cases.push(self.node("switch_block_group", gstart, kids));
        }
        self.expect("}")?;
        Ok((sel, cases))
    }

    fn case_label_expression(&mut self) -> PResult<RawNode> {
        // type pattern `case Type name` is parsed as a local declaration
        let save = self.pos;
        let s = self.start();
        if let Some(ty) = self.try_type() {
            if self.at_ident() && (self.peek_at(1).is("->") || self.peek_at(1).is(":") || self.peek_at(1).is(",")) {
                let name = self.bump();
                let decl = RawNode {
                    kind: "variable_declarator",
                    label: String::new(),
                    span: name.span,
                    children: vec![RawNode::leaf("identifier_declaration", name.text, name.span)],
                };
                return Ok(self.node("local_variable_declaration", s, vec![ty, decl]));
            }
        }
        self.pos = save;
        self.ternary()
    }

    // ---- expressions -------------------------------------------------------

    fn expression(&mut self) -> PResult<RawNode> {
        if let Some(lambda) = self.try_lambda()? {
            return Ok(lambda);
        }
        let start = self.start();
        let lhs = self.ternary()?;
        if let Some((op, n)) = self.peek_operator() {
            if ASSIGN_OPS.contains(&op.as_str()) {
                let op = self.operator_leaf(op, n);
                let rhs = if self.at("{") { self.array_initializer()? } else { self.expression()? };
                return Ok(self.node("assignment_expression", start, vec![lhs, op, rhs]));
            }
        }
        Ok(lhs)
    }

    fn try_lambda(&mut self) -> PResult<Option<RawNode>> {
        let start = self.start();
        if self.at_ident() && self.peek_at(1).is("->") {
            let name = self.bump();
            let p = RawNode {
                kind: "formal_parameter",
                label: String::new(),
                span: name.span,
                children: vec![RawNode::leaf("identifier_declaration", name.text, name.span)],
            };
            let params = RawNode { kind: "lambda_parameters", label: String::new(), span: p.span, children: vec![p] };
            self.expect("->")?;
            let body = self.lambda_body()?;
            return Ok(Some(self.node("lambda_expression", start, vec![params, body])));
        }
        if !self.at("(") {
            return Ok(None);
        }
        let close = match self.matching_paren(self.pos) {
            Some(c) => c,
            None => return Ok(None),
        };
        if !self.toks.get(close + 1).is_some_and(|t| t.is("->")) {
            return Ok(None);
        }
        let pstart = self.start();
        self.bump();
        let mut params = Vec::new();
        while !self.at(")") {
            let s = self.start();
            if self.at_ident() && (self.peek_at(1).is(",") || self.peek_at(1).is(")")) {
                let name = self.bump();
                params.push(self.node("formal_parameter", s, vec![RawNode::leaf("identifier_declaration", name.text, name.span)]));
            } else {
                params.push(self.formal_parameter()?);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        let params = self.node("lambda_parameters", pstart, params);
        self.expect("->")?;
        let body = self.lambda_body()?;
        Ok(Some(self.node("lambda_expression", start, vec![params, body])))
    }

    fn lambda_body(&mut self) -> PResult<RawNode> {
        if self.at("{") {
            self.block()
        } else {
            self.expression()
        }
    }

    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.toks.iter().enumerate().skip(open) {
            if t.is("(") {
                depth += 1;
            } else if t.is(")") {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            } else if t.kind == TokenKind::Eof || t.is(";") || t.is("{") || t.is("}") {
                return None;
            }
        }
        None
    }

    fn ternary(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let cond = self.binary(0)?;
        if self.eat("?") {
            let a = if let Some(l) = self.try_lambda()? { l } else { self.ternary()? };
            self.expect(":")?;
            let b = if let Some(l) = self.try_lambda()? { l } else { self.ternary()? };
            return Ok(self.node("ternary_expression", start, vec![cond, a, b]));
        }
        Ok(cond)
    }

    fn binary_precedence(op: &str) -> Option<u8> {
        Some(match op {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" => 6,
            "<" | ">" | "<=" | ">=" => 7,
            "<<" | ">>" | ">>>" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> PResult<RawNode> {
        let start = self.start();
        let mut lhs = self.unary()?;
        loop {
            if self.at("instanceof") {
                if 7 < min_prec {
                    break;
                }
                self.bump();
                let mut kids = vec![lhs];
                self.eat("final");
                kids.push(self.type_node()?);
                if self.at_ident() {
                    let n = self.bump();
                    kids.push(RawNode::leaf("identifier_declaration", n.text, n.span));
                }
                lhs = self.node("instanceof_expression", start, kids);
                continue;
            }
            let Some((op, n)) = self.peek_operator() else { break };
            let Some(prec) = Self::binary_precedence(&op) else { break };
            if prec < min_prec {
                break;
            }
            let op = self.operator_leaf(op, n);
            let rhs = self.binary(prec + 1)?;
            lhs = self.node("binary_expression", start, vec![lhs, op, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let t = self.peek().clone();
        if t.kind == TokenKind::Punct && matches!(t.text.as_str(), "+" | "-" | "++" | "--" | "!" | "~") {
            let op = self.operator_leaf(t.text.clone(), 1);
            let operand = self.unary()?;
            return Ok(self.node("unary_expression", start, vec![op, operand]));
        }
        if t.is("(") {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        let mut e = self.primary()?;
        while self.at("++") || self.at("--") {
            let t = self.bump();
            let op = RawNode::leaf("operator", t.text, t.span);
            e = self.node("postfix_expression", start, vec![e, op]);
        }
        Ok(e)
    }

    fn try_cast(&mut self) -> PResult<Option<RawNode>> {
        let start = self.start();
        let save = self.pos;
        self.bump();
        let Some(ty) = self.try_type() else {
            self.pos = save;
            return Ok(None);
        };
        let mut ty = ty;
        while self.eat("&") {
            if self.try_type().is_none() {
                self.pos = save;
                return Ok(None);
            }
            ty.label = self.toks[save + 1..self.pos].iter().map(|t| t.text.as_str()).collect();
            ty.span.end = self.end();
        }
        if !self.eat(")") {
            self.pos = save;
            return Ok(None);
        }
        let primitive = PRIMITIVES.iter().any(|p| ty.label.starts_with(p) && ty.label[p.len()..].chars().all(|c| c == '[' || c == ']'));
        let next = self.peek();
        let operand_follows = match next.kind {
            TokenKind::Ident
            | TokenKind::IntLit
            | TokenKind::FloatLit
            | TokenKind::CharLit
            | TokenKind::StringLit
            | TokenKind::TextBlock => true,
            TokenKind::Keyword => matches!(
                next.text.as_str(),
                "this" | "super" | "new" | "true" | "false" | "null" | "switch"
            ) || PRIMITIVES.contains(&next.text.as_str()),
            TokenKind::Punct => {
                matches!(next.text.as_str(), "(" | "!" | "~")
                    || (primitive && matches!(next.text.as_str(), "+" | "-" | "++" | "--"))
            }
            TokenKind::Eof => false,
        };
        if !operand_follows {
            self.pos = save;
            return Ok(None);
        }
        let operand = if let Some(l) = self.try_lambda()? { l } else { self.unary()? };
        Ok(Some(self.node("cast_expression", start, vec![ty, operand])))
    }

    fn arguments(&mut self) -> PResult<Vec<RawNode>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.at(")") {
            loop {
                args.push(self.expression()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn array_initializer(&mut self) -> PResult<RawNode> {
        let start = self.start();
        self.expect("{")?;
        let mut kids = Vec::new();
        while !self.at("}") {
            kids.push(if self.at("{") { self.array_initializer()? } else { self.expression()? });
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(self.node("array_initializer", start, kids))
    }

    fn literal(&mut self) -> RawNode {
        let t = self.bump();
        RawNode::leaf("literal", t.text, t.span)
    }

    fn primary(&mut self) -> PResult<RawNode> {
        let start = self.start();
        let t = self.peek().clone();
        let mut e = match t.kind {
            TokenKind::IntLit | TokenKind::FloatLit | TokenKind::CharLit | TokenKind::StringLit | TokenKind::TextBlock => {
                self.literal()
            }
            TokenKind::Keyword => match t.text.as_str() {
                "true" | "false" | "null" => self.literal(),
                "this" => {
                    self.bump();
                    RawNode::leaf("this", "this", t.span)
                }
                "super" => {
                    self.bump();
                    RawNode::leaf("super", "super", t.span)
                }
                "new" => self.creation(start, None)?,
                "switch" => {
                    let (sel, cases) = self.switch_parts()?;
                    let mut kids = vec![sel];
                    kids.extend(cases);
                    self.node("switch_expression", start, kids)
                }
                p if PRIMITIVES.contains(&p) || p == "void" => {
                    let ty = if p == "void" {
                        let t = self.bump();
                        RawNode::leaf("type", "void", t.span)
                    } else {
                        self.type_node()?
                    };
                    if self.eat("::") {
                        let n = self.bump();
                        let name = RawNode::leaf("method_name", n.text, n.span);
                        self.node("method_reference", start, vec![ty, name])
                    } else {
                        self.expect(".")?;
                        self.expect("class")?;
                        self.node("class_literal", start, vec![ty])
                    }
                }
                _ => return Err(self.error(format!("unexpected {}", self.describe()))),
            },
            TokenKind::Ident => {
                // array type class literal / method reference: `String[].class`, `int[]::new`
                if self.peek_at(1).is("[") && self.peek_at(2).is("]") {
                    let ty = self.type_node()?;
                    if self.eat("::") {
                        let n = self.bump();
                        let name = RawNode::leaf("method_name", n.text, n.span);
                        return self.selectors(start, self.node("method_reference", start, vec![ty, name]));
                    }
                    self.expect(".")?;
                    self.expect("class")?;
                    return self.selectors(start, self.node("class_literal", start, vec![ty]));
                }
                self.bump();
                if self.at("(") {
                    let name = RawNode::leaf("method_name", t.text.clone(), t.span);
                    let mut kids = vec![name];
                    kids.extend(self.arguments()?);
                    self.node("method_invocation", start, kids)
                } else {
                    RawNode::leaf("identifier", t.text.clone(), t.span)
                }
            }
            TokenKind::Punct if t.text == "(" => {
                self.bump();
                let inner = self.expression()?;
                self.expect(")")?;
                inner
            }
            TokenKind::Punct if t.text == "@" => {
                // annotated expression (rare); keep the annotation out of the tree
                self.annotation()?;
                return self.primary();
            }
            _ => return Err(self.error(format!("expected expression, found {}", self.describe()))),
        };
        e = self.selectors(start, e)?;
        Ok(e)
    }

    fn selectors(&mut self, start: usize, mut e: RawNode) -> PResult<RawNode> {
        loop {
            if self.at(".") {
                self.bump();
                if self.at("new") {
                    e = self.creation(start, Some(e))?;
                    continue;
                }
                if self.at("class") {
                    self.bump();
                    let ty = RawNode { kind: "type", label: flatten_name(&e), span: e.span, children: vec![] };
                    e = self.node("class_literal", start, vec![ty]);
                    continue;
                }
                if self.at("this") || self.at("super") {
                    let t = self.bump();
                    let leaf = RawNode::leaf(if t.text == "this" { "this" } else { "super" }, t.text, t.span);
                    if leaf.kind == "super" && self.at("(") {
                        let mut kids = vec![e, leaf];
                        kids.extend(self.arguments()?);
                        e = self.node("explicit_constructor_invocation", start, kids);
                    } else {
                        e = self.node("field_access", start, vec![e, leaf]);
                    }
                    continue;
                }
                let mut kids = vec![e];
                if self.at("<") {
                    let s = self.start();
                    let tok_start = self.pos;
                    self.type_arguments()?;
                    kids.push(RawNode::leaf("type_arguments", self.text_since(tok_start), Span::new(s, self.end())));
                }
                let name = self.ident()?;
                if self.at("(") {
                    kids.push(RawNode::leaf("method_name", name.text, name.span));
                    kids.extend(self.arguments()?);
                    e = self.node("method_invocation", start, kids);
                } else {
                    kids.push(RawNode::leaf("field_name", name.text, name.span));
                    e = self.node("field_access", start, kids);
                }
            } else if self.at("[") {
                self.bump();
                let idx = self.expression()?;
                self.expect("]")?;
                e = self.node("array_access", start, vec![e, idx]);
            } else if self.at("::") {
                self.bump();
                if self.at("<") {
                    self.type_arguments()?;
                }
                let n = if self.at("new") { self.bump() } else { self.ident()? };
                let name = RawNode::leaf("method_name", n.text, n.span);
                e = self.node("method_reference", start, vec![e, name]);
            } else if self.at("<") && self.looks_like_generic_method_ref() {
                // `List<String>::new`
                let tok_start = self.pos;
                self.type_arguments()?;
                let mut label = flatten_name(&e);
                label.push_str(&self.text_since(tok_start));
                let ty = RawNode { kind: "type", label, span: Span::new(e.span.start, self.end()), children: vec![] };
                self.expect("::")?;
                let n = if self.at("new") { self.bump() } else { self.ident()? };
                let name = RawNode::leaf("method_name", n.text, n.span);
                e = self.node("method_reference", start, vec![ty, name]);
            } else {
                return Ok(e);
            }
        }
    }

    fn looks_like_generic_method_ref(&self) -> bool {
        let save_depth = {
            let mut depth = 0i32;
            let mut i = self.pos;
            loop {
                let t = &self.toks[i.min(self.toks.len() - 1)];
                if t.is("<") {
                    depth += 1;
                } else if t.is(">") {
                    depth -= 1;
                    if depth == 0 {
                        break Some(i);
                    }
                } else if !(t.kind == TokenKind::Ident || t.is(",") || t.is(".") || t.is("?") || t.is("[") || t.is("]") || t.is("extends") || t.is("super") || (t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str()))) {
                    break None;
                }
                i += 1;
            }
        };
        save_depth.is_some_and(|i| self.toks.get(i + 1).is_some_and(|t| t.is("::")))
    }

    fn creation(&mut self, start: usize, outer: Option<RawNode>) -> PResult<RawNode> {
        self.expect("new")?;
        if self.at("<") {
            self.type_arguments()?;
        }
        let tstart = self.start();
        let tok_start = self.pos;
        while self.at("@") {
            self.annotation()?;
        }
        if self.peek().kind == TokenKind::Keyword && PRIMITIVES.contains(&self.peek().text.as_str()) {
            self.bump();
        } else {
            self.ident()?;
            if self.at("<") {
                self.type_arguments()?;
            }
            while self.at(".") {
                self.bump();
                self.ident()?;
                if self.at("<") {
                    self.type_arguments()?;
                }
            }
        }
        let ty = RawNode::leaf("type", self.text_since(tok_start), Span::new(tstart, self.end()));
        let mut kids: Vec<RawNode> = outer.into_iter().collect();
        kids.push(ty);
        if self.at("[") {
            while self.at("[") {
                self.bump();
                if !self.at("]") {
                    kids.push(self.expression()?);
                }
                self.expect("]")?;
            }
            if self.at("{") {
                kids.push(self.array_initializer()?);
            }
            return Ok(self.node("array_creation_expression", start, kids));
        }
        kids.extend(self.arguments()?);
        if self.at("{") {
            kids.push(self.class_body("")?);
        }
        Ok(self.node("object_creation_expression", start, kids))
    }
}

fn flatten_name(node: &RawNode) -> String {
    match node.kind {
        "identifier" | "type" | "field_name" | "this" | "super" => node.label.clone(),
        "field_access" => node.children.iter().map(flatten_name).collect::<Vec<_>>().join("."),
        _ => node.label.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(node: &RawNode, out: &mut Vec<&'static str>) {
        out.push(node.kind);
        for c in &node.children {
            kinds(c, out);
        }
    }

    fn all_kinds(src: &str) -> Vec<&'static str> {
        let tree = parse(src).unwrap();
        let mut out = Vec::new();
        kinds(&tree, &mut out);
        out
    }

    #[test]
    fn every_emitted_kind_is_declared() {
        let src = include_str!("../../../tests/fixtures/kitchen_sink.java");
        for k in all_kinds(src) {
            assert!(PRODUCTIONS.contains(&k), "undeclared production {k}");
        }
    }

    #[test]
    fn generics_and_shifts() {
        let k = all_kinds("class A { void f() { Map<String, List<Integer>> m = null; int x = a >> 2; x >>>= 1; boolean b = a >= c; } }");
        assert_eq!(k.iter().filter(|&&k| k == "local_variable_declaration").count(), 3);
        let tree = parse("class A { void f() { x >>>= 1; y = a >= b; } }").unwrap();
        let dump = format!("{tree:?}");
        assert!(dump.contains("\">>>=\""));
        assert!(dump.contains("\">=\""));
    }

    #[test]
    fn casts_versus_parentheses() {
        let k = all_kinds("class A { void f() { int a = (int) x; Object o = (String) s; int b = (a) + 1; int c = (a) - 1; } }");
        assert_eq!(k.iter().filter(|&&k| k == "cast_expression").count(), 2);
    }

    #[test]
    fn lambdas() {
        let k = all_kinds("class A { void f() { r = () -> 1; c = (a, b) -> a + b; x -> { return; }; g((int v) -> v); } }");
        assert_eq!(k.iter().filter(|&&k| k == "lambda_expression").count(), 4);
    }

    #[test]
    fn unbalanced_brace_is_a_syntax_error() {
        let err = parse("class A { void f() { int x = 1; }").unwrap_err();
        match err {
            AstError::SyntaxError { message, .. } => assert!(message.contains("`}`"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn switch_forms() {
        let src = "class A { int f(int k) { switch (k) { case 1: case 2: return 1; default: break; } return switch (k) { case 1, 2 -> 3; default -> { yield 4; } }; } }";
        let k = all_kinds(src);
        assert_eq!(k.iter().filter(|&&k| k == "switch_block_group").count(), 4);
        assert!(k.contains(&"yield_statement"));
        assert!(k.contains(&"switch_expression"));
    }
}
