//! Shuffles, the shuffle map `τ` dualized to cochains, and the DPR cocycle.

use serde::Serialize;

use crate::complexes::{delta_k, total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use crate::error::{Error, Result};
use crate::groups::{conjugation_action, FiniteGroup, GroupHom, SemidirectProduct};

/// A `(p,q)`-shuffle; `positions[i]` is the 0-based slot of the `i`-th letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shuffle {
    pub p: usize,
    pub q: usize,
    pub positions: Vec<usize>,
    pub sign: i64,
}

impl Shuffle {
    /// True at slots taken by a K-letter (vertical lattice step).
    pub fn vertical_steps(&self) -> Vec<bool> {
        let mut v = vec![false; self.p + self.q];
        for &s in &self.positions[self.p..] {
            v[s] = true;
        }
        v
    }
}

/// All `C(p+q, p)` shuffles, in lexicographic order of the G-slots.
pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let n = p + q;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p);
    fn rec(n: usize, p: usize, q: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Shuffle>) {
        if chosen.len() == p {
            let mut positions = chosen.clone();
            positions.extend((0..n).filter(|s| !chosen.contains(s)));
            // inversions: pairs (G-letter i, K-letter j) with G slot after K slot
            let inv: usize = chosen.iter().enumerate().map(|(i, &s)| s - i).sum();
            let sign = if inv % 2 == 0 { 1 } else { -1 };
            out.push(Shuffle { p, q, positions, sign });
            return;
        }
        for s in start..n {
            chosen.push(s);
            rec(n, p, q, s + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(n, p, q, 0, &mut chosen, &mut out);
    out
}

/// Edge labels of the lattice path `λ` in `K`: `s[λ(i)] = gᵢ` and a K-letter becomes
/// `c·kⱼ·c⁻¹` where `c` is the product of the G-letters after it.
pub fn lambda_tuple(k: &FiniteGroup, lambda: &Shuffle, g: &[usize], kk: &[usize]) -> Vec<usize> {
    let (p, q) = (lambda.p, lambda.q);
    assert_eq!((g.len(), kk.len()), (p, q));
    let mut s = vec![k.identity(); p + q];
    for i in 0..p {
        s[lambda.positions[i]] = g[i];
    }
    for j in 0..q {
        let m = lambda.positions[p + j] - j;
        let c = k.product(&g[m..]);
        s[lambda.positions[p + j]] = k.mul(k.mul(c, kk[j]), k.inv(c));
    }
    s
}

fn check_single(h: &FiniteGroup, w: &Cochain) -> Result<ComplexSpec> {
    let bar = ComplexSpec::single_group(h);
    if w.p != 0 || w.values.len() != bar.cell_count(0, w.q) {
        return Err(Error::Contract("expected a cochain on the bar complex of one group".into()));
    }
    Ok(bar)
}

/// `τ^∨` twisted by a section: cells `[g||k]` of `spec` are sent to `Σ_λ sign(λ)·w(λ[σg|k])`,
/// over every bidegree admitted by `spec`.
pub fn shuffle_dual_with_section(spec: &ComplexSpec, sigma: &GroupHom, w: &Cochain) -> Result<TotalCochain> {
    let k = spec.k();
    if sigma.source != *spec.g() || sigma.target != *k {
        return Err(Error::Contract("section must map G to K".into()));
    }
    for g in spec.g().elements() {
        let c = sigma.apply(g);
        if k.elements().any(|x| k.conj(c, x) != spec.action.act(g, x)) {
            return Err(Error::Contract("section does not trivialize the action".into()));
        }
    }
    let bar = check_single(k, w)?;
    let n = w.q;
    let parts = spec
        .bidegrees(n)
        .into_iter()
        .map(|(p, q)| {
            let sh = shuffles(p, q);
            Cochain::from_fn(spec, p, q, |g, kk| {
                let sg: Vec<usize> = g.iter().map(|&x| sigma.apply(x)).collect();
                sh.iter().map(|l| w.eval(&bar, &[], &lambda_tuple(k, l, &sg, kk)).scale(l.sign)).sum()
            })
        })
        .collect();
    TotalCochain::from_components(spec, n, parts)
}

fn identity_section(spec: &ComplexSpec) -> Result<GroupHom> {
    if *spec.k() != *spec.g() || spec.action != conjugation_action(spec.k()) {
        return Err(Error::Contract("expected K acting on itself by conjugation".into()));
    }
    GroupHom::new(spec.g().clone(), spec.k().clone(), spec.g().elements().collect())
}

/// `τ^∨ w` on `Tot(FULL)` of `K ⋊ K` with conjugation.
pub fn tau_dual(spec: &ComplexSpec, w: &Cochain) -> Result<TotalCochain> {
    if spec.shape != Shape::Full {
        return Err(Error::Contract("tau_dual targets the full complex".into()));
    }
    shuffle_dual_with_section(spec, &identity_section(spec)?, w)
}

/// `τ₁^∨ w`: the rows `q ≥ 1` of `τ^∨ w`, on `Tot(A)`.
pub fn tau1_dual(spec: &ComplexSpec, w: &Cochain) -> Result<TotalCochain> {
    if spec.shape != Shape::A {
        return Err(Error::Contract("tau1_dual targets the A complex".into()));
    }
    shuffle_dual_with_section(spec, &identity_section(spec)?, w)
}

/// `α_w ⊕ β_w ⊕ θ_w` from a normalized 3-cocycle `w` on `G`, on `Tot(A)` of `G ⋊ G`.
pub fn dpr_cocycle(spec: &ComplexSpec, w: &Cochain) -> Result<TotalCochain> {
    identity_section(spec)?;
    if spec.shape != Shape::A {
        return Err(Error::Contract("the DPR triple lives on the A complex".into()));
    }
    let g = spec.g();
    let bar = check_single(g, w)?;
    if w.q != 3 {
        return Err(Error::Contract("w must be a 3-cochain".into()));
    }
    if !delta_k(&bar, w)?.is_zero() {
        return Err(Error::Contract("w is not a cocycle".into()));
    }
    let ev = |a: usize, b: usize, c: usize| w.eval(&bar, &[], &[a, b, c]);
    let cj = |a: usize, x: usize| g.conj(a, x);
    let alpha = Cochain::from_fn(spec, 2, 1, |gh, x| {
        let (a, b, x) = (gh[0], gh[1], x[0]);
        ev(a, b, x) - ev(a, cj(b, x), b) + ev(cj(g.mul(a, b), x), a, b)
    });
    let beta = Cochain::from_fn(spec, 1, 2, |a, xy| {
        let (a, x, y) = (a[0], xy[0], xy[1]);
        ev(a, x, y) - ev(cj(a, x), a, y) + ev(cj(a, x), cj(a, y), a)
    });
    let theta = Cochain::from_fn(spec, 0, 3, |_, xyz| ev(xyz[0], xyz[1], xyz[2]));
    TotalCochain::from_components(spec, 3, vec![alpha, beta, theta])
}

/// Pullback along the comparison map from `Tot(spec)` to the bar complex of `K ⋊ G`:
/// a cell `[g||k]` is sent to the signed sum, over lattice paths, of `F` on the
/// path's edge labels in `K ⋊ G`.
pub fn bar_to_total(spec: &ComplexSpec, sdp: &SemidirectProduct, f: &Cochain) -> Result<TotalCochain> {
    let bar = check_single(&sdp.group, f)?;
    let (k, g, rho) = (spec.k(), spec.g(), &spec.action);
    let n = f.q;
    let parts = spec
        .bidegrees(n)
        .into_iter()
        .map(|(p, q)| {
            let sh = shuffles(p, q);
            Cochain::from_fn(spec, p, q, |gs, ks| {
                // vertex (i,j) ↦ (x_i(y_j), x_i) with x_i = g_{i+1}…g_p, y_j = k_{j+1}…k_q
                let x: Vec<usize> = (0..=p).map(|i| g.product(&gs[i..])).collect();
                let y: Vec<usize> = (0..=q).map(|j| k.product(&ks[j..])).collect();
                let vertex = |i: usize, j: usize| sdp.index(rho.act(x[i], y[j]), x[i]);
                sh.iter()
                    .map(|l| {
                        let (mut i, mut j) = (0, 0);
                        let mut labels = Vec::with_capacity(n);
                        for vert in l.vertical_steps() {
                            let a = vertex(i, j);
                            if vert {
                                j += 1;
                            } else {
                                i += 1;
                            }
                            let b = vertex(i, j);
                            labels.push(sdp.group.mul(a, sdp.group.inv(b)));
                        }
                        f.eval(&bar, &[], &labels).scale(l.sign)
                    })
                    .sum()
            })
        })
        .collect();
    TotalCochain::from_components(spec, n, parts)
}

/// Checks `τ^∨(δw) = d(τ^∨ w)` for one cochain.
pub fn tau_commutes(spec: &ComplexSpec, w: &Cochain) -> Result<bool> {
    let bar = ComplexSpec::single_group(spec.k());
    let lhs = shuffle_dual_with_section(spec, &identity_section(spec)?, &delta_k(&bar, w)?)?;
    let rhs = total_differential(spec, &shuffle_dual_with_section(spec, &identity_section(spec)?, w)?);
    Ok(lhs == rhs)
}
