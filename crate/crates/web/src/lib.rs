//! Browser bindings for the triangle example with a Z3 voltage on one edge.
//!
//! Each exported function has a plain Rust twin (`*_impl`) so the numbers can
//! be tested off the browser.

use bondzeta::covering::derived_graph;
use bondzeta::example::{k3_cubic_factor, k3_cubic_roots, K3Example, K3Params};
use bondzeta::graph::Graph;
use bondzeta::hermitian::{assemble_h, EdgeWeightSystem};
use bondzeta::lfunction::l_function_reciprocal;
use bondzeta::linalg::{hermitian_eigenvalues, relative_error};
use bondzeta::scattering::secular_det;
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

struct Setup {
    ex: K3Example,
    cover: Graph,
    cover_w: EdgeWeightSystem,
}

fn setup(a: f64, b: f64, alpha: f64) -> Result<Setup, String> {
    let ex = K3Example::new(K3Params::new(a, b, alpha).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let d = derived_graph(&ex.graph, &ex.group, &ex.alpha).map_err(|e| e.to_string())?;
    let cover_w = d.lift_weights(&ex.weights).map_err(|e| e.to_string())?;
    Ok(Setup { ex, cover: d.graph, cover_w })
}

/// Rows of `[t, log10|det(I-U)| on the triangle, log10|det(I-U)| on the 9-cycle]`.
pub fn secular_curve_impl(a: f64, b: f64, alpha: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(lo < hi) || n < 2 {
        return Err("need lo < hi and at least two points".into());
    }
    let s = setup(a, b, alpha)?;
    let mut out = Vec::with_capacity(3 * n);
    for k in 0..n {
        let t = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let l = Complex64::new(t, 0.0);
        let base = secular_det(&s.ex.graph, &s.ex.weights, l).map_err(|e| e.to_string())?;
        let cover = secular_det(&s.cover, &s.cover_w, l).map_err(|e| e.to_string())?;
        out.extend([t, base.norm().max(1e-300).log10(), cover.norm().max(1e-300).log10()]);
    }
    Ok(out)
}

/// `[3 eigenvalues of H, 9 eigenvalues of the lifted H, 9 closed-form roots]`, each block sorted.
pub fn spectra_impl(a: f64, b: f64, alpha: f64) -> Result<Vec<f64>, String> {
    let s = setup(a, b, alpha)?;
    let eig = |g, w| assemble_h(g, w).and_then(|h| hermitian_eigenvalues(&h)).map_err(|e| e.to_string());
    let mut roots: Vec<f64> = (0..3).flat_map(|k| k3_cubic_roots(s.ex.params, k)).collect();
    roots.sort_by(f64::total_cmp);
    let mut out = eig(&s.ex.graph, &s.ex.weights)?;
    out.extend(eig(&s.cover, &s.cover_w)?);
    out.extend(roots);
    Ok(out)
}

/// `[cover, chi0, chi1, chi2, product]` as re/im pairs, then the relative gap between cover and product.
pub fn factorization_impl(a: f64, b: f64, alpha: f64, re: f64, im: f64) -> Result<Vec<f64>, String> {
    let s = setup(a, b, alpha)?;
    let l = Complex64::new(re, im);
    let cover = secular_det(&s.cover, &s.cover_w, l).map_err(|e| e.to_string())?;
    let mut out = vec![cover.re, cover.im];
    let mut product = Complex64::new(1.0, 0.0);
    for rho in s.ex.irreps.reps() {
        let f = l_function_reciprocal(&s.ex.graph, &s.ex.weights, &s.ex.group, &s.ex.alpha, rho, l)
            .map_err(|e| e.to_string())?
            .reciprocal;
        product *= f;
        out.extend([f.re, f.im]);
    }
    out.extend([product.re, product.im, relative_error(cover, product)]);
    Ok(out)
}

/// Closed-form cubic factor `k` (0 = triangle itself) at `re + i im`, as `[re, im]`.
pub fn cubic_factor_impl(a: f64, b: f64, alpha: f64, k: usize, re: f64, im: f64) -> Result<Vec<f64>, String> {
    let p = K3Params::new(a, b, alpha).map_err(|e| e.to_string())?;
    let v = k3_cubic_factor(p, k % 3, Complex64::new(re, im));
    Ok(vec![v.re, v.im])
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn secular_curve(a: f64, b: f64, alpha: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(secular_curve_impl(a, b, alpha, lo, hi, n))
}

#[wasm_bindgen]
pub fn spectra(a: f64, b: f64, alpha: f64) -> Result<Vec<f64>, JsError> {
    js(spectra_impl(a, b, alpha))
}

#[wasm_bindgen]
pub fn factorization(a: f64, b: f64, alpha: f64, re: f64, im: f64) -> Result<Vec<f64>, JsError> {
    js(factorization_impl(a, b, alpha, re, im))
}

#[wasm_bindgen]
pub fn cubic_factor(a: f64, b: f64, alpha: f64, k: usize, re: f64, im: f64) -> Result<Vec<f64>, JsError> {
    js(cubic_factor_impl(a, b, alpha, k, re, im))
}
