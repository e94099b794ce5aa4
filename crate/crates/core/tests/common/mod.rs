//! Reference Cl(3) product built by rewriting generator words, sharing no
//! code with the library's table.

#![allow(dead_code)]

/// Generator words of the basis blades (1, ex, ey, ez, exy, eyz, ezx, I),
/// with 0 = ex, 1 = ey, 2 = ez.
pub const WORDS: [&[u8]; 8] = [&[], &[0], &[1], &[2], &[0, 1], &[1, 2], &[2, 0], &[0, 1, 2]];

/// Reduces a word to sorted form without repeats, returning the sign.
fn normalize(word: &[u8]) -> (f64, Vec<u8>) {
    let mut w = word.to_vec();
    let mut sign = 1.0;
    // Bubble sort; each transposition of distinct generators flips the sign.
    for i in 0..w.len() {
        for j in 0..w.len().saturating_sub(1 + i) {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    // Equal neighbours square to +1.
    let mut out: Vec<u8> = Vec::new();
    for g in w {
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    (sign, out)
}

/// Basis index and sign of the basis element equal to a sorted word.
fn lookup(sorted: &[u8]) -> (f64, usize) {
    for (k, w) in WORDS.iter().enumerate() {
        let (s, canon) = normalize(w);
        if canon == sorted {
            return (s, k);
        }
    }
    unreachable!("every sorted word is a basis blade up to sign")
}

/// Product of basis blades `i` and `j` as (sign, index).
pub fn blade_product(i: usize, j: usize) -> (f64, usize) {
    let word: Vec<u8> = WORDS[i].iter().chain(WORDS[j]).copied().collect();
    let (s1, sorted) = normalize(&word);
    let (s2, k) = lookup(&sorted);
    // basis_k = s2 * sorted, so sorted = s2 * basis_k.
    (s1 * s2, k)
}

pub fn table() -> [[(f64, usize); 8]; 8] {
    let mut t = [[(0.0, 0); 8]; 8];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = blade_product(i, j);
        }
    }
    t
}

pub fn product(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    let t = table();
    let mut out = [0.0; 8];
    for i in 0..8 {
        for j in 0..8 {
            let (s, k) = t[i][j];
            out[k] += s * x[i] * y[j];
        }
    }
    out
}

pub fn grade(k: usize) -> usize {
    WORDS[k].len()
}

/// Grade-`g` part.
pub fn project(x: &[f64; 8], g: usize) -> [f64; 8] {
    let mut out = [0.0; 8];
    for k in 0..8 {
        if grade(k) == g {
            out[k] = x[k];
        }
    }
    out
}

pub fn vector(n: [f64; 3]) -> [f64; 8] {
    [0.0, n[0], n[1], n[2], 0.0, 0.0, 0.0, 0.0]
}

pub fn pseudo(s: f64) -> [f64; 8] {
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s]
}

pub fn sub(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    std::array::from_fn(|k| x[k] - y[k])
}

pub fn lin(a: f64, x: &[f64; 8], b: f64, y: &[f64; 8]) -> [f64; 8] {
    std::array::from_fn(|k| a * x[k] + b * y[k])
}
