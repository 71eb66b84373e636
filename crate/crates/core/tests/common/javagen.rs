//! Random small Java classes and random mutations of them, for round-trip
//! and window-soundness tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

const VARS: &[&str] = &["a", "b", "tmp", "count", "value"];
const FIELDS: &[&str] = &["lower", "upper", "size", "data"];
const CALLS: &[&str] = &["check", "log", "compute", "reset"];
const OPS: &[&str] = &["+", "-", "*", "/", "%", "==", "!=", "<", "<=", ">", ">=", "&&", "||", "&"];

#[derive(Debug, Clone)]
pub enum Expr {
    Lit(i64),
    Null,
    Var(String),
    This(String),
    Neg(Box<Expr>),
    Bin(Box<Expr>, String, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Assign(String, Expr),
    Decl(String, Expr),
    If(Expr, Vec<Stmt>, Option<Vec<Stmt>>),
    While(Expr, Vec<Stmt>),
    For(String, Expr, Vec<Stmt>),
    Return(Option<Expr>),
    Call(String, Vec<Expr>),
    Throw(String),
    Try(Vec<Stmt>, Vec<Stmt>),
}

#[derive(Debug, Clone)]
pub struct Method {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub struct Class {
    pub name: String,
    pub fields: Vec<String>,
    pub methods: Vec<Method>,
}

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn pick(&mut self, xs: &[&str]) -> String {
        xs.choose(&mut self.rng).unwrap().to_string()
    }

    pub fn expr(&mut self, depth: u32) -> Expr {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            return match self.rng.gen_range(0..5) {
                0 => Expr::Lit(self.rng.gen_range(-2..10)),
                1 => Expr::Null,
                2 => Expr::This(self.pick(FIELDS)),
                _ => Expr::Var(self.pick(VARS)),
            };
        }
        match self.rng.gen_range(0..4) {
            0 => Expr::Neg(Box::new(self.expr(depth - 1))),
            1 => {
                let n = self.rng.gen_range(0..3);
                Expr::Call(self.pick(CALLS), (0..n).map(|_| self.expr(depth - 1)).collect())
            }
            _ => Expr::Bin(Box::new(self.expr(depth - 1)), self.pick(OPS), Box::new(self.expr(depth - 1))),
        }
    }

    pub fn stmt(&mut self, depth: u32) -> Stmt {
        let simple = depth == 0 || self.rng.gen_bool(0.6);
        if simple {
            return match self.rng.gen_range(0..6) {
                0 => Stmt::Decl(self.pick(VARS), self.expr(2)),
                1 => Stmt::Return(if self.rng.gen_bool(0.5) { Some(self.expr(2)) } else { None }),
                2 => Stmt::Call(self.pick(CALLS), vec![self.expr(1)]),
                3 if self.rng.gen_bool(0.3) => Stmt::Throw("IllegalStateException".into()),
                _ => Stmt::Assign(self.pick(VARS), self.expr(2)),
            };
        }
        match self.rng.gen_range(0..4) {
            0 => {
                let els = if self.rng.gen_bool(0.4) { Some(self.block(depth - 1)) } else { None };
                Stmt::If(self.expr(2), self.block(depth - 1), els)
            }
            1 => Stmt::While(self.expr(2), self.block(depth - 1)),
            2 => Stmt::For(self.pick(VARS), self.expr(1), self.block(depth - 1)),
            _ => Stmt::Try(self.block(depth - 1), self.block(depth - 1)),
        }
    }

    pub fn block(&mut self, depth: u32) -> Vec<Stmt> {
        let n = self.rng.gen_range(0..4);
        (0..n).map(|_| self.stmt(depth)).collect()
    }

    pub fn class(&mut self) -> Class {
        let nf = self.rng.gen_range(1..3);
        let nm = self.rng.gen_range(1..3);
        Class {
            name: "Sample".into(),
            fields: FIELDS[..nf].iter().map(|s| s.to_string()).collect(),
            methods: (0..nm)
                .map(|i| Method {
                    name: format!("m{i}"),
                    params: VARS[..self.rng.gen_range(0..3)].iter().map(|s| s.to_string()).collect(),
                    body: {
                        let n = self.rng.gen_range(1..6);
                        (0..n).map(|_| self.stmt(2)).collect()
                    },
                })
                .collect(),
        }
    }

    /// Applies 1..=3 random mutations.
    pub fn mutate(&mut self, class: &Class) -> Class {
        let mut c = class.clone();
        let n = self.rng.gen_range(1..=3);
        for _ in 0..n {
            self.mutate_once(&mut c);
        }
        c
    }

    fn mutate_once(&mut self, c: &mut Class) {
        let mi = self.rng.gen_range(0..c.methods.len());
        let body = &mut c.methods[mi].body;
        let nblocks = count_blocks(body);
        let target = self.rng.gen_range(0..nblocks);
        let choice = self.rng.gen_range(0..9);
        let new_stmt = self.stmt(1);
        let new_expr = self.expr(2);
        let lit = self.rng.gen_range(-2..10);
        let op = self.pick(OPS);
        let var = self.pick(VARS);
        let r1: usize = self.rng.gen();
        let r2: usize = self.rng.gen();
        let mut moved: Option<Stmt> = None;
        with_block(body, &mut target.clone(), &mut |b: &mut Vec<Stmt>| match choice {
            0 => b.insert(r1 % (b.len() + 1), new_stmt.clone()),
            1 if !b.is_empty() => {
                b.remove(r1 % b.len());
            }
            2 if !b.is_empty() => {
                let i = r1 % b.len();
                let s = b[i].clone();
                b[i] = Stmt::If(new_expr.clone(), vec![s], None);
            }
            3 if b.len() >= 2 => {
                let i = r1 % (b.len() - 1);
                b.swap(i, i + 1);
            }
            4 if !b.is_empty() => {
                let i = r1 % b.len();
                if let Stmt::If(_, then, _) | Stmt::While(_, then) = b[i].clone() {
                    b.splice(i..=i, then);
                } else {
                    b[i] = Stmt::Try(vec![b[i].clone()], vec![]);
                }
            }
            5 if !b.is_empty() => {
                moved = Some(b.remove(r1 % b.len()));
            }
            6 if !b.is_empty() => {
                let i = r1 % b.len();
                mutate_expr_in(&mut b[i], r2, lit, &op, &var);
            }
            7 if !b.is_empty() => {
                let i = r1 % b.len();
                let s = b[i].clone();
                b.insert(i, s);
            }
            _ => {
                if !b.is_empty() {
                    let i = r1 % b.len();
                    mutate_expr_in(&mut b[i], r2, lit, &op, &var);
                } else {
                    b.push(new_stmt.clone());
                }
            }
        });
        if let Some(s) = moved {
            let nb = count_blocks(body);
            let t = r2 % nb;
            with_block(body, &mut t.clone(), &mut |b: &mut Vec<Stmt>| b.insert(r1 % (b.len() + 1), s.clone()));
        }
        if self.rng.gen_bool(0.1) {
            c.fields.push(format!("extra{}", c.fields.len()));
        }
    }
}

fn count_blocks(stmts: &[Stmt]) -> usize {
    1 + stmts.iter().map(|s| child_blocks(s).iter().map(|b| count_blocks(b)).sum::<usize>()).sum::<usize>()
}

fn child_blocks(s: &Stmt) -> Vec<&Vec<Stmt>> {
    match s {
        Stmt::If(_, t, e) => std::iter::once(t).chain(e.iter()).collect(),
        Stmt::While(_, b) | Stmt::For(_, _, b) => vec![b],
        Stmt::Try(a, b) => vec![a, b],
        _ => vec![],
    }
}

fn child_blocks_mut(s: &mut Stmt) -> Vec<&mut Vec<Stmt>> {
    match s {
        Stmt::If(_, t, e) => std::iter::once(t).chain(e.iter_mut()).collect(),
        Stmt::While(_, b) | Stmt::For(_, _, b) => vec![b],
        Stmt::Try(a, b) => vec![a, b],
        _ => vec![],
    }
}

fn with_block(stmts: &mut Vec<Stmt>, target: &mut usize, f: &mut dyn FnMut(&mut Vec<Stmt>)) -> bool {
    if *target == 0 {
        f(stmts);
        return true;
    }
    *target -= 1;
    for s in stmts.iter_mut() {
        for b in child_blocks_mut(s) {
            if with_block(b, target, f) {
                return true;
            }
        }
    }
    false
}

fn exprs_mut(s: &mut Stmt) -> Vec<&mut Expr> {
    match s {
        Stmt::Assign(_, e) | Stmt::Decl(_, e) | Stmt::If(e, _, _) | Stmt::While(e, _) | Stmt::For(_, e, _) => vec![e],
        Stmt::Return(Some(e)) => vec![e],
        Stmt::Call(_, args) => args.iter_mut().collect(),
        _ => vec![],
    }
}

fn mutate_expr_in(s: &mut Stmt, r: usize, lit: i64, op: &str, var: &str) {
    let mut exprs = exprs_mut(s);
    if exprs.is_empty() {
        return;
    }
    let n = exprs.len();
    let e = &mut exprs[r % n];
    mutate_expr(e, r / 7, lit, op, var);
}

fn mutate_expr(e: &mut Expr, r: usize, lit: i64, op: &str, var: &str) {
    match e {
        Expr::Lit(v) => *v = if *v == lit { lit + 1 } else { lit },
        Expr::Var(v) => *v = var.to_string(),
        Expr::Null => *e = Expr::Lit(lit),
        Expr::This(f) => *f = "data".into(),
        Expr::Neg(inner) => mutate_expr(inner, r, lit, op, var),
        Expr::Bin(l, o, rr) => match r % 3 {
            0 => *o = op.to_string(),
            1 => mutate_expr(l, r / 3, lit, op, var),
            _ => mutate_expr(rr, r / 3, lit, op, var),
        },
        Expr::Call(name, args) => {
            if args.is_empty() || r.is_multiple_of(2) {
                *name = format!("{name}2");
            } else {
                let n = args.len();
                mutate_expr(&mut args[r % n], r / 2, lit, op, var);
            }
        }
    }
}

impl Expr {
    pub fn to_java(&self) -> String {
        match self {
            Expr::Lit(v) => v.to_string(),
            Expr::Null => "null".into(),
            Expr::Var(v) => v.clone(),
            Expr::This(f) => format!("this.{f}"),
            Expr::Neg(e) => format!("-({})", e.to_java()),
            Expr::Bin(l, o, r) => format!("({} {} {})", l.to_java(), o, r.to_java()),
            Expr::Call(n, args) => {
                format!("{}({})", n, args.iter().map(Expr::to_java).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

fn block_java(b: &[Stmt], indent: usize, out: &mut String) {
    out.push_str("{\n");
    for s in b {
        s.write_java(indent + 1, out);
    }
    out.push_str(&"    ".repeat(indent));
    out.push('}');
}

impl Stmt {
    fn write_java(&self, indent: usize, out: &mut String) {
        out.push_str(&"    ".repeat(indent));
        match self {
            Stmt::Assign(v, e) => out.push_str(&format!("{v} = {};", e.to_java())),
            Stmt::Decl(v, e) => out.push_str(&format!("int {v} = {};", e.to_java())),
            Stmt::If(c, t, e) => {
                out.push_str(&format!("if ({}) ", c.to_java()));
                block_java(t, indent, out);
                if let Some(e) = e {
                    out.push_str(" else ");
                    block_java(e, indent, out);
                }
            }
            Stmt::While(c, b) => {
                out.push_str(&format!("while ({}) ", c.to_java()));
                block_java(b, indent, out);
            }
            Stmt::For(v, lim, b) => {
                out.push_str(&format!("for (int {v} = 0; {v} < {}; {v}++) ", lim.to_java()));
                block_java(b, indent, out);
            }
            Stmt::Return(None) => out.push_str("return;"),
            Stmt::Return(Some(e)) => out.push_str(&format!("return {};", e.to_java())),
            Stmt::Call(n, args) => out.push_str(&format!(
                "{}({});",
                n,
                args.iter().map(Expr::to_java).collect::<Vec<_>>().join(", ")
            )),
            Stmt::Throw(t) => out.push_str(&format!("throw new {t}();")),
            Stmt::Try(a, b) => {
                out.push_str("try ");
                block_java(a, indent, out);
                out.push_str(" catch (RuntimeException e) ");
                block_java(b, indent, out);
            }
        }
        out.push('\n');
    }
}

impl Class {
    pub fn to_java(&self) -> String {
        let mut out = format!("class {} {{\n", self.name);
        for f in &self.fields {
            out.push_str(&format!("    int {f};\n"));
        }
        for m in &self.methods {
            let params: Vec<String> = m.params.iter().map(|p| format!("int {p}")).collect();
            out.push_str(&format!("    int {}({}) ", m.name, params.join(", ")));
            block_java(&m.body, 1, &mut out);
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }
}
