use superschur::brauer::image_algebra_brauer;
use superschur::centralizer::{
    block_structure, center_dimension, commutant, radical, subalgebra_equal,
};
use superschur::liealg::{image_algebra, rho_rs, DEFAULT_MAX_AMBIENT};
use superschur::superlinalg::SuperDim;

const P: u64 = 1_000_000_007;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// Row echelon form mod P over dense vectors.
#[derive(Default)]
struct ModEchelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(v[p], P - 2);
        v.iter_mut().for_each(|x| *x = *x * inv % P);
        for (_, row) in &mut self.rows {
            let c = row[p];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

fn mat_mul(a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % P;
                }
            }
        }
    }
    out
}

/// Adjoint action of every `E_ab` on `gl(m|n)`, as `t^2 x t^2` matrices.
fn adjoint_matrices(m: usize, n: usize) -> Vec<Vec<u64>> {
    let t = m + n;
    let odd = |i: usize| i >= m;
    let size = t * t;
    let mut out = Vec::new();
    for a in 0..t {
        for b in 0..t {
            let pa = odd(a) != odd(b);
            let mut mat = vec![0u64; size * size];
            for c in 0..t {
                for d in 0..t {
                    let px = odd(c) != odd(d);
                    let col = c * t + d;
                    // E_ab E_cd = delta_bc E_ad
                    if b == c {
                        let row = a * t + d;
                        mat[row * size + col] = (mat[row * size + col] + 1) % P;
                    }
                    // -(-1)^{|E_ab||E_cd|} E_cd E_ab
                    if d == a {
                        let row = c * t + b;
                        let v = if pa && px { 1 } else { P - 1 };
                        mat[row * size + col] = (mat[row * size + col] + v) % P;
                    }
                }
            }
            out.push(mat);
        }
    }
    out
}

fn generated_dimension(gens: &[Vec<u64>], n: usize) -> usize {
    let mut ech = ModEchelon::default();
    let mut id = vec![0; n * n];
    (0..n).for_each(|i| id[i * n + i] = 1);
    let mut basis = vec![id.clone()];
    ech.insert(id);
    let mut k = 0;
    while k < basis.len() {
        for g in gens {
            let p = mat_mul(g, &basis[k], n);
            if ech.insert(p.clone()) {
                basis.push(p);
            }
        }
        k += 1;
    }
    basis.len()
}

fn commutant_dimension(gens: &[Vec<u64>], n: usize) -> usize {
    let mut ech = ModEchelon::default();
    for g in gens {
        for p in 0..n {
            for q in 0..n {
                let mut eq = vec![0u64; n * n];
                for k in 0..n {
                    eq[p * n + k] = (eq[p * n + k] + g[k * n + q]) % P;
                    eq[k * n + q] = (eq[k * n + q] + P - g[p * n + k]) % P;
                }
                ech.insert(eq);
            }
        }
    }
    n * n - ech.rows.len()
}

#[test]
fn mixed_tensor_of_gl31_against_adjoint_oracle() {
    let oracle = adjoint_matrices(3, 1);
    let dim = SuperDim::new(3, 1);
    let reps = rho_rs(dim, 1, 1, DEFAULT_MAX_AMBIENT).unwrap();
    let img = image_algebra(&reps, 100_000).unwrap();
    assert_eq!(img.dimension(), generated_dimension(&oracle, 16));
    assert_eq!(img.dimension(), 226);
    let comm = commutant(16, &reps.generating_matrices());
    assert_eq!(comm.dimension(), commutant_dimension(&oracle, 16));
    assert_eq!(comm.dimension(), 2);
}

#[test]
fn oracle_agrees_on_gl11() {
    let reps = rho_rs(SuperDim::new(1, 1), 1, 1, DEFAULT_MAX_AMBIENT).unwrap();
    let img = image_algebra(&reps, 100_000).unwrap();
    assert_eq!(
        img.dimension(),
        generated_dimension(&adjoint_matrices(1, 1), 4)
    );
    let comm = commutant(4, &reps.generating_matrices());
    assert_eq!(
        comm.dimension(),
        commutant_dimension(&adjoint_matrices(1, 1), 4)
    );
}

#[test]
fn small_cases_of_double_centralizer() {
    for (m, n, r, s, image) in [(2, 0, 1, 1, 10), (3, 1, 1, 1, 226)] {
        let dim = SuperDim::new(m, n);
        let reps = rho_rs(dim, r, s, DEFAULT_MAX_AMBIENT).unwrap();
        let img = image_algebra(&reps, 100_000).unwrap();
        let brauer = image_algebra_brauer(dim, r, s, DEFAULT_MAX_AMBIENT).unwrap();
        assert_eq!(img.dimension(), image);
        let cb = commutant(reps.size(), brauer.generating_set());
        let ci = commutant(reps.size(), &reps.generating_matrices());
        assert!(subalgebra_equal(&cb, &img));
        assert!(subalgebra_equal(&ci, &brauer));
        assert!(radical(&img).unwrap().is_empty());
        assert_eq!(center_dimension(&ci), 2);
    }
}

#[test]
fn gl11_fails_the_double_centralizer() {
    let dim = SuperDim::new(1, 1);
    let reps = rho_rs(dim, 1, 1, DEFAULT_MAX_AMBIENT).unwrap();
    let img = image_algebra(&reps, 100_000).unwrap();
    let brauer = image_algebra_brauer(dim, 1, 1, DEFAULT_MAX_AMBIENT).unwrap();
    let cb = commutant(4, brauer.generating_set());
    assert_eq!((img.dimension(), cb.dimension()), (8, 10));
    assert!(!subalgebra_equal(&cb, &img));
    assert!(!radical(&img).unwrap().is_empty());
    assert!(block_structure(&brauer).is_none());
}

#[test]
fn blocks_of_gl41_on_two_one() {
    let dim = SuperDim::new(4, 1);
    let reps = rho_rs(dim, 2, 1, DEFAULT_MAX_AMBIENT).unwrap();
    let brauer = image_algebra_brauer(dim, 2, 1, DEFAULT_MAX_AMBIENT).unwrap();
    assert_eq!(brauer.dimension(), 6);
    let blocks = block_structure(&brauer).unwrap();
    let module_dims: Vec<(usize, usize)> = blocks
        .iter()
        .map(|b| (b.size().unwrap(), b.multiplicity().unwrap()))
        .collect();
    assert_eq!(module_dims, vec![(2, 5), (1, 65), (1, 50)]);
    let image: usize = module_dims.iter().map(|&(_, d)| d * d).sum();
    assert_eq!(image, 6750);
    assert_eq!(reps.size(), 2 * 5 + 65 + 50);
}
