//! Field extensions F_q ⊂ F_{q^k} with an explicit embedding.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::poly::Poly;
use super::{field_ctx_bounded, FieldCtx, FieldElement, FieldError, ARITH_MAX_Q};

/// An injective ring homomorphism `src → dst`.
#[derive(Debug)]
pub struct Embedding {
    src: &'static FieldCtx,
    dst: &'static FieldCtx,
    /// images of 1, α, …, α^{m−1} where α is the class of x in `src`
    basis: Vec<FieldElement>,
}

fn embeddings() -> &'static Mutex<HashMap<(usize, usize), &'static Embedding>> {
    static R: OnceLock<Mutex<HashMap<(usize, usize), &'static Embedding>>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build F_{q^k} (k ∈ {2, 4}) over `ctx` together with its embedding.
///
/// The extension is F_{p^{mk}} with its default modulus. For m > 1 the
/// embedding sends the generator to the canonically smallest root of the
/// old modulus in the new field. Lifts are capped by the element encoding
/// (q^k ≤ 2^62), not by the census bound.
pub fn lift_to_extension(ctx: &'static FieldCtx, k: u32) -> Result<&'static Embedding, FieldError> {
    if k != 2 && k != 4 {
        return Err(FieldError::LiftDegree(k));
    }
    let dst = field_ctx_bounded(ctx.p(), ctx.m() * k, None, ARITH_MAX_Q)?;
    let key = (ctx.id, dst.id);
    if let Some(e) = embeddings().lock().unwrap().get(&key) {
        return Ok(e);
    }
    let alpha = if ctx.m() == 1 {
        dst.zero()
    } else {
        let g = Poly::new(dst, ctx.modulus().iter().map(|&c| dst.elem(c as i64)).collect());
        g.split_roots()[0]
    };
    let mut basis = Vec::with_capacity(ctx.m() as usize);
    let mut acc = dst.one();
    for _ in 0..ctx.m() {
        basis.push(acc);
        acc = acc * alpha;
    }
    let emb: &'static Embedding = Box::leak(Box::new(Embedding { src: ctx, dst, basis }));
    Ok(*embeddings().lock().unwrap().entry(key).or_insert(emb))
}

/// Map `a` into `dst`, which must be `a`'s own field or a constructed lift of it.
pub fn embed(a: FieldElement, dst: &'static FieldCtx) -> Result<FieldElement, FieldError> {
    let src = a.field();
    if src.same(dst) {
        return Ok(a);
    }
    let e = embeddings()
        .lock()
        .unwrap()
        .get(&(src.id, dst.id))
        .copied()
        .ok_or_else(|| FieldError::NoEmbedding(src.to_string(), dst.to_string()))?;
    Ok(e.apply(a))
}

/// The preimage of `b` in `src`, when `b`'s field is `src` or a constructed
/// lift of it and `b` lies in the embedded copy.
pub fn restrict(b: FieldElement, src: &'static FieldCtx) -> Option<FieldElement> {
    let dst = b.field();
    if src.same(dst) {
        return Some(b);
    }
    let e = embeddings().lock().unwrap().get(&(src.id, dst.id)).copied()?;
    e.preimage(b)
}

impl Embedding {
    pub fn source(&self) -> &'static FieldCtx {
        self.src
    }
    pub fn target(&self) -> &'static FieldCtx {
        self.dst
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        assert!(self.src.contains(&a), "element is not in the embedding's source field");
        if self.src.m() == 1 {
            return self.dst.elem(a.code() as i64);
        }
        a.coeffs().iter().zip(&self.basis).fold(self.dst.zero(), |acc, (&c, &b)| acc + b * c as i64)
    }

    /// The unique preimage of `b`, if `b` lies in the embedded subfield.
    pub fn preimage(&self, b: FieldElement) -> Option<FieldElement> {
        assert!(self.dst.contains(&b), "element is not in the embedding's target field");
        let p = self.src.p();
        if self.src.m() == 1 {
            let c = b.coeffs();
            return c[1..].iter().all(|&x| x == 0).then(|| self.src.elem(c[0] as i64));
        }
        // Solve Σ c_i·basis_i = b over F_p by Gaussian elimination.
        let m = self.src.m() as usize;
        let n = self.dst.m() as usize;
        let cols: Vec<Vec<u64>> = self.basis.iter().map(|e| e.coeffs()).collect();
        let rhs = b.coeffs();
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let mut r: Vec<u64> = (0..m).map(|i| cols[i][j]).collect();
                r.push(rhs[j]);
                r
            })
            .collect();
        let inv = |a: u64| self.src.elem(a as i64).inv().expect("pivot").code();
        let mut pivot_row = 0;
        let mut pivots = vec![usize::MAX; m];
        for (col, pv) in pivots.iter_mut().enumerate() {
            let Some(r) = (pivot_row..n).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(pivot_row, r);
            let s = inv(rows[pivot_row][col]);
            for x in rows[pivot_row].iter_mut() {
                *x = (*x as u128 * s as u128 % p as u128) as u64;
            }
            for r2 in 0..n {
                if r2 != pivot_row && rows[r2][col] != 0 {
                    let f = rows[r2][col];
                    for c in 0..=m {
                        let t = (f as u128 * rows[pivot_row][c] as u128 % p as u128) as u64;
                        rows[r2][c] = (rows[r2][c] + p - t) % p;
                    }
                }
            }
            *pv = pivot_row;
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|r| r[m] != 0) {
            return None;
        }
        let coeffs: Vec<i64> = pivots.iter().map(|&r| if r == usize::MAX { 0 } else { rows[r][m] as i64 }).collect();
        Some(self.src.from_coeffs(&coeffs))
    }
}
