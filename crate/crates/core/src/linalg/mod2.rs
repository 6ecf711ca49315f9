use num_integer::Integer;
use num_bigint::BigInt;

use super::{IntMatrix, LinalgError};

/// All solutions of `M x ≡ b (mod 2)`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Solutions {
    pub particular: Vec<u8>,
    pub kernel: Vec<Vec<u8>>,
}

impl Mod2Solutions {
    pub fn count(&self) -> u128 {
        1u128 << self.kernel.len()
    }

    /// Every solution, in the order of the binary counter over the kernel basis.
    pub fn enumerate(&self) -> Vec<Vec<u8>> {
        assert!(self.kernel.len() < 24, "too many solutions to enumerate");
        (0u32..(1 << self.kernel.len()))
            .map(|mask| {
                let mut x = self.particular.clone();
                for (k, v) in self.kernel.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        x.iter_mut().zip(v).for_each(|(a, b)| *a ^= b);
                    }
                }
                x
            })
            .collect()
    }
}

fn parity(x: &BigInt) -> u8 {
    u8::from(x.is_odd())
}

pub fn solve_mod2(m: &IntMatrix, b: &[BigInt]) -> Result<Mod2Solutions, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    if b.len() != rows {
        return Err(LinalgError::Dimension { expected: rows, found: b.len() });
    }
    // Augmented rows over GF(2).
    let mut a: Vec<Vec<u8>> = (0..rows)
        .map(|i| m.row(i).iter().map(parity).chain([parity(&b[i])]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] == 1) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && a[i][c] == 1 {
                let src = a[r].clone();
                a[i].iter_mut().zip(&src).for_each(|(x, y)| *x ^= y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| row[cols] == 1) {
        return Err(LinalgError::Inconsistent);
    }
    let mut particular = vec![0u8; cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = a[i][cols];
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u8; cols];
            v[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = a[i][f];
            }
            v
        })
        .collect();
    Ok(Mod2Solutions { particular, kernel })
}
