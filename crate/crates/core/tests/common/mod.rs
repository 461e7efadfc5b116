//! Shared test support: a reference decoder written straight from the
//! per-position operation formulas, and loaders for the reference run tables.

#![allow(dead_code, clippy::manual_memcpy, clippy::needless_range_loop)]

use std::path::PathBuf;

/// Reference transform of the window `x[k..k+l]`, built position by position
/// with ripple carry for the arithmetic operations.
pub fn reference_apply(op: u8, x: &[bool]) -> Vec<bool> {
    let l = x.len();
    let mut y = vec![false; l];
    match op {
        // Circular shift: y_k = x_{k+l-1}, y_{k+i} = x_{k+i-1}.
        0 => {
            y[0] = x[l - 1];
            for i in 1..l {
                y[i] = x[i - 1];
            }
        }
        // Transpose: y_{k+i} = x_{k+l-1-i}.
        1 => {
            for i in 0..l {
                y[i] = x[l - 1 - i];
            }
        }
        // Set to: y_{k+i} = x_k.
        2 => {
            for i in 0..l {
                y[i] = x[0];
            }
        }
        // Do nothing.
        3 => y.copy_from_slice(x),
        // Right shift by one: y_k = x_k, y_{k+i} = x_{k+i-1}.
        4 => {
            y[0] = x[0];
            for i in 1..l {
                y[i] = x[i - 1];
            }
        }
        // Add one; on overflow the (l+1)-bit sum loses its last bit.
        5 => {
            let mut carry = true;
            for i in (0..l).rev() {
                y[i] = x[i] ^ carry;
                carry = x[i] && carry;
            }
            if carry {
                let mut wide = vec![true];
                wide.extend_from_slice(&y);
                wide.pop();
                y = wide;
            }
        }
        // Left shift by one: y_{k+i} = x_{k+i+1}, y_{k+l-1} = 0.
        6 => {
            for i in 0..l - 1 {
                y[i] = x[i + 1];
            }
            y[l - 1] = false;
        }
        // Subtract one with wrap-around on zero.
        7 => {
            let mut borrow = true;
            for i in (0..l).rev() {
                y[i] = x[i] ^ borrow;
                borrow = !x[i] && borrow;
            }
        }
        _ => unreachable!("op codes are three bits"),
    }
    y
}

/// Reference decoder: tags are raw bytes, `None` where the allele is unmarked.
pub fn reference_grow(genotype: &[bool], tags: &[Option<u8>]) -> Vec<bool> {
    assert_eq!(genotype.len(), tags.len());
    let len = genotype.len();
    let mut out = Vec::with_capacity(len);
    let mut k = 0;
    while k < len {
        match tags[k] {
            None => {
                out.push(genotype[k]);
                k += 1;
            }
            Some(byte) => {
                let op = byte >> 5;
                let size = match byte & 0b1_1111 {
                    0 => 32,
                    s => s as usize,
                };
                let end = (k + size).min(len);
                out.extend(reference_apply(op, &genotype[k..end]));
                k = end;
            }
        }
    }
    out
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("core")
        .join("tests")
        .join("fixtures")
        .join(name)
}

/// Columns of a fixture table in file order.
pub fn load_fixture(name: &str) -> Vec<(String, Vec<f64>)> {
    let mut reader = csv::Reader::from_path(fixture_path(name)).expect("fixture exists");
    let headers: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for record in reader.records() {
        for (i, field) in record.unwrap().iter().enumerate() {
            columns[i].push(field.trim().parse::<f64>().unwrap());
        }
    }
    headers.into_iter().zip(columns).collect()
}

pub fn column<'a>(columns: &'a [(String, Vec<f64>)], label: &str) -> &'a [f64] {
    &columns
        .iter()
        .find(|(l, _)| l == label)
        .expect("column exists")
        .1
}

/// Concatenation of the named columns in the order given.
pub fn pooled(columns: &[(String, Vec<f64>)], labels: &[String]) -> Vec<f64> {
    labels
        .iter()
        .flat_map(|l| column(columns, l).iter().copied())
        .collect()
}

/// Labels `<prefix>X06` through `<prefix>X10`.
pub fn rate_labels(prefix: &str) -> Vec<String> {
    (6..=10).map(|r| format!("{prefix}X{r:02}")).collect()
}
