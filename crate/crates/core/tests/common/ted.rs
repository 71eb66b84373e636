//! Zhang–Shasha tree edit distance with unit costs. Relabelling across
//! kinds costs a delete plus an insert.

use patchguard::ast::{NodeId, NormalizedAst};

struct Post {
    /// node ids in post-order
    order: Vec<NodeId>,
    /// leftmost leaf descendant (post-order index) of each post-order index
    lml: Vec<usize>,
    keyroots: Vec<usize>,
}

fn post(ast: &NormalizedAst) -> Post {
    let order = ast.postorder();
    let mut index = vec![0; ast.len()];
    for (i, n) in order.iter().enumerate() {
        index[n.index()] = i;
    }
    let lml: Vec<usize> = order
        .iter()
        .map(|&n| {
            let mut x = n;
            while let Some(&c) = ast.children(x).first() {
                x = c;
            }
            index[x.index()]
        })
        .collect();
    let mut keyroots = Vec::new();
    for i in 0..order.len() {
        if !(i + 1..order.len()).any(|j| lml[j] == lml[i]) {
            keyroots.push(i);
        }
    }
    Post { order, lml, keyroots }
}

pub fn distance(a: &NormalizedAst, b: &NormalizedAst) -> usize {
    let (pa, pb) = (post(a), post(b));
    let (n, m) = (pa.order.len(), pb.order.len());
    let mut td = vec![vec![0usize; m]; n];
    let relabel = |i: usize, j: usize| {
        let (x, y) = (a.node(pa.order[i]), b.node(pb.order[j]));
        if x.kind != y.kind {
            2
        } else if x.label != y.label {
            1
        } else {
            0
        }
    };
    for &i in &pa.keyroots {
        for &j in &pb.keyroots {
            let (li, lj) = (pa.lml[i], pb.lml[j]);
            let (w, h) = (i - li + 2, j - lj + 2);
            let mut fd = vec![vec![0usize; h]; w];
            for x in 1..w {
                fd[x][0] = fd[x - 1][0] + 1;
            }
            for y in 1..h {
                fd[0][y] = fd[0][y - 1] + 1;
            }
            for x in 1..w {
                for y in 1..h {
                    let (ii, jj) = (li + x - 1, lj + y - 1);
                    let del = fd[x - 1][y] + 1;
                    let ins = fd[x][y - 1] + 1;
                    if pa.lml[ii] == li && pb.lml[jj] == lj {
                        let sub = fd[x - 1][y - 1] + relabel(ii, jj);
                        fd[x][y] = del.min(ins).min(sub);
                        td[ii][jj] = fd[x][y];
                    } else {
                        let px = pa.lml[ii] - li;
                        let py = pb.lml[jj] - lj;
                        fd[x][y] = del.min(ins).min(fd[px][py] + td[ii][jj]);
                    }
                }
            }
        }
    }
    td[n - 1][m - 1]
}
