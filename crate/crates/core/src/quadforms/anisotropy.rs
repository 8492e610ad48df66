//! Anisotropy of block forms.
//!
//! `anisotropic_by_values` is a sufficient criterion: each binary block
//! must be anisotropic for valuation or residue reasons, and the value
//! signatures of the blocks modulo squares must be pairwise disjoint, so
//! no cancellation can happen across blocks. `brute_force_isotropy` is the
//! independent check: it evaluates the form exactly on enumerated vectors
//! and can only ever refute an anisotropy claim.

use super::{Block, BlockForm};
use crate::basefield::artin;
use crate::laurent::{LaurentPoly, Monomial, PrecisionWindow, ValueVec};
use std::collections::BTreeSet;
use std::fmt;

/// One-sided verdict: `Unknown` carries the failed criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnisotropyVerdict {
    Anisotropic { signatures: Vec<Vec<Vec<u64>>> },
    Unknown { reason: String },
}

impl AnisotropyVerdict {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self, AnisotropyVerdict::Anisotropic { .. })
    }
}

impl fmt::Display for AnisotropyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnisotropyVerdict::Anisotropic { .. } => write!(f, "Anisotropic"),
            AnisotropyVerdict::Unknown { reason } => write!(f, "Unknown ({reason})"),
        }
    }
}

/// Sufficient anisotropy criterion for a block form.
///
/// Every block must be anisotropic on its own: its parameter w has
/// negative value with an odd coordinate (a root of z^2 + z + w would have
/// fractional value), or w is a unit whose residue is not of the form
/// c^2 - c. A nonzero vector then gives every scaled pair c*(x^2+xy+wy^2)
/// a value in c's class mod 2Z^n, or in (c*w)'s class when the pair is
/// ramified. Pairwise disjointness of those signature sets leaves the
/// minimum value unique, so the form cannot vanish.
pub fn anisotropic_by_values(form: &BlockForm) -> AnisotropyVerdict {
    if !form.diag().is_empty() {
        return AnisotropyVerdict::Unknown {
            reason: "a residual diagonal part is outside this criterion".into(),
        };
    }
    if form.blocks().is_empty() {
        return AnisotropyVerdict::Unknown {
            reason: "no blocks to certify".into(),
        };
    }
    let mut signatures: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for (i, block) in form.blocks().iter().enumerate() {
        let route = match block_anisotropic(block) {
            Ok(route) => route,
            Err(reason) => {
                return AnisotropyVerdict::Unknown {
                    reason: format!("block {}: {reason}", i + 1),
                }
            }
        };
        let w_class = match route {
            BlockRoute::Ramified => {
                Some(block.w().valuation().expect("nonzero parameter").mod_p(2))
            }
            BlockRoute::Residue => None,
        };
        let mut sig = Vec::new();
        for scale in block.expanded_scales() {
            let Some((m, _)) = scale.as_single_term() else {
                return AnisotropyVerdict::Unknown {
                    reason: format!(
                        "block {}: scale factors must be single terms with computable values",
                        i + 1
                    ),
                };
            };
            let base_class = m.value().mod_p(2);
            let mut classes = vec![base_class.clone()];
            if let Some(wc) = &w_class {
                let shifted: Vec<u64> = base_class.iter().zip(wc).map(|(a, b)| (a + b) % 2).collect();
                classes.push(shifted);
            }
            for class in classes {
                if !seen.insert(class.clone()) {
                    return AnisotropyVerdict::Unknown {
                        reason: format!(
                            "value signature {:?} appears twice; cross-pair cancellation \
                             cannot be excluded",
                            class
                        ),
                    };
                }
                sig.push(class);
            }
        }
        signatures.push(sig);
    }
    AnisotropyVerdict::Anisotropic { signatures }
}

enum BlockRoute {
    /// v(w) negative outside 2Z^n: pair values sit in the classes of c and c*w.
    Ramified,
    /// w a unit with non-image residue: pair values sit in the class of c only.
    Residue,
}

fn block_anisotropic(block: &Block) -> Result<BlockRoute, String> {
    let w = block.w();
    if w.is_zero() {
        return Err("parameter 0 gives a hyperbolic plane".into());
    }
    let v = w.valuation().expect("nonzero");
    let n = v.len();
    if v < ValueVec::zero(n) {
        if v.coords().iter().any(|c| c.rem_euclid(2) == 1) {
            return Ok(BlockRoute::Ramified);
        }
        return Err(format!(
            "v(w) = {v} is negative but even in every coordinate; not ramified-anisotropic"
        ));
    }
    // residue route: w in the valuation ring with constant residue outside
    // the image of x^2 - x
    if w.terms().all(|(m, _)| m.value() >= ValueVec::zero(n)) {
        let c0 = w
            .coeff(&Monomial::unit(n))
            .cloned()
            .unwrap_or_else(|| w.tower().base().zero());
        let red = artin::artin_schreier_reduce(&c0);
        if !red.in_image {
            return Ok(BlockRoute::Residue);
        }
        return Err("the residue of w is of the form c^2 - c; the block reduces to a split one".into());
    }
    Err(format!("v(w) = {v} is non-negative; the stated criterion does not apply"))
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotropyOutcome {
    /// Nonzero vector on which the form vanishes, in coordinate order
    /// (x, y per expanded pair, then the diagonal coordinates).
    Witness(Vec<LaurentPoly>),
    /// No witness among the vectors tried.
    NoneFound { evaluations: u64, budget: u64 },
}

impl IsotropyOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, IsotropyOutcome::Witness(_))
    }
}

impl fmt::Display for IsotropyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyOutcome::Witness(v) => {
                write!(f, "witness (")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            IsotropyOutcome::NoneFound { evaluations, budget } => {
                write!(f, "none found (budget {budget}, {evaluations} evaluations)")
            }
        }
    }
}

/// Exhaustive isotropy search over vectors whose entries are single
/// monomials supported in the window, with coefficients from the (finite)
/// base field. Vectors are enumerated by ascending support weight, then
/// positions, then monomials ordered by total degree and the tower order,
/// then coefficients; each form evaluation counts against the budget.
pub fn brute_force_isotropy(
    form: &BlockForm,
    window: &PrecisionWindow,
    budget: u64,
) -> IsotropyOutcome {
    assert!(
        form.tower().base().order().is_some(),
        "brute force enumerates coefficients of a finite base field"
    );
    let pairs = form.expanded_pairs();
    let dim = form.dim();
    // candidate entries: monomials ordered by (|e|_1, right-to-left lex)
    let mut exps = window.monomials();
    exps.sort_by_key(|e| {
        (
            e.iter().map(|c| c.unsigned_abs()).sum::<u64>(),
            Monomial::new(e.clone()),
        )
    });
    let coeffs: Vec<_> = form
        .tower()
        .base()
        .all_elements()
        .expect("finite base")
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let entries: Vec<(Monomial, crate::basefield::BaseFieldElement)> = exps
        .into_iter()
        .flat_map(|e| {
            let m = Monomial::new(e);
            coeffs.iter().map(move |c| (m.clone(), c.clone()))
        })
        .collect();

    let mut evaluations: u64 = 0;
    for weight in 1..=dim {
        let mut positions: Vec<usize> = (0..weight).collect();
        loop {
            // odometer over entry choices for the selected positions
            let mut choice = vec![0usize; weight];
            loop {
                evaluations += 1;
                if let Some(witness) = evaluate(form, &pairs, dim, &positions, &choice, &entries) {
                    return IsotropyOutcome::Witness(witness);
                }
                if evaluations >= budget {
                    return IsotropyOutcome::NoneFound { evaluations, budget };
                }
                let mut i = 0;
                while i < weight {
                    choice[i] += 1;
                    if choice[i] < entries.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == weight {
                    break;
                }
            }
            if !next_combination(&mut positions, dim) {
                break;
            }
        }
    }
    IsotropyOutcome::NoneFound { evaluations, budget }
}

fn next_combination(positions: &mut [usize], n: usize) -> bool {
    let k = positions.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if positions[i] < n - (k - i) {
            positions[i] += 1;
            for j in i + 1..k {
                positions[j] = positions[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact evaluation on a sparse vector; returns the full witness vector if
/// the form vanishes.
fn evaluate(
    form: &BlockForm,
    pairs: &[(LaurentPoly, LaurentPoly)],
    dim: usize,
    positions: &[usize],
    choice: &[usize],
    entries: &[(Monomial, crate::basefield::BaseFieldElement)],
) -> Option<Vec<LaurentPoly>> {
    let tower = form.tower();
    // terms of Q(v), collected then cancelled exactly
    let mut acc = tower.zero();
    let entry_at = |coord: usize| -> Option<&(Monomial, crate::basefield::BaseFieldElement)> {
        positions
            .iter()
            .position(|&p| p == coord)
            .map(|k| &entries[choice[k]])
    };
    for (k, (scale, w)) in pairs.iter().enumerate() {
        let x = entry_at(2 * k);
        let y = entry_at(2 * k + 1);
        if let Some((mx, cx)) = x {
            // scale * x^2
            acc = acc.add(&scale.mul_monomial(&mx.pow(2), &cx.mul(cx)));
        }
        if let (Some((mx, cx)), Some((my, cy))) = (x, y) {
            // scale * x*y
            acc = acc.add(&scale.mul_monomial(&mx.mul(my), &cx.mul(cy)));
        }
        if let Some((my, cy)) = y {
            // scale * w * y^2
            if !w.is_zero() {
                acc = acc.add(&scale.mul(w).mul_monomial(&my.pow(2), &cy.mul(cy)));
            }
        }
    }
    for (j, d) in form.diag().iter().enumerate() {
        if let Some((mz, cz)) = entry_at(2 * pairs.len() + j) {
            acc = acc.add(&d.mul_monomial(&mz.pow(2), &cz.mul(cz)));
        }
    }
    if acc.is_zero() {
        let mut witness = vec![tower.zero(); dim];
        for (k, &pos) in positions.iter().enumerate() {
            let (m, c) = &entries[choice[k]];
            witness[pos] = tower.monomial(m.clone(), c.clone());
        }
        Some(witness)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::BaseFieldDesc;
    use crate::laurent::FieldTower;
    use crate::quadforms::{quad_linkage_counterexample, Block, BlockForm};

    fn tower(n: usize) -> FieldTower {
        FieldTower::new(BaseFieldDesc::prime_field(2).unwrap(), n)
    }

    #[test]
    fn omega_two_is_anisotropic_with_distinct_signatures() {
        let t = tower(3);
        let (_, _, omega) = quad_linkage_counterexample(2, &t).unwrap();
        let verdict = anisotropic_by_values(&omega);
        let AnisotropyVerdict::Anisotropic { signatures } = &verdict else {
            panic!("expected anisotropic: {verdict}");
        };
        // each ramified pair occupies the classes of its scale and of the
        // scale times the parameter
        assert_eq!(
            signatures,
            &vec![
                vec![vec![0, 0, 0], vec![0, 0, 1]],
                vec![vec![1, 0, 0], vec![1, 1, 0]],
                vec![vec![0, 1, 0], vec![0, 1, 1]]
            ]
        );
    }

    #[test]
    fn positive_value_parameter_is_unknown() {
        let t = tower(2);
        let form = BlockForm::new(
            t.clone(),
            vec![Block::new(t.one(), vec![], t.var(0)).unwrap()],
            vec![],
        )
        .unwrap();
        assert!(!anisotropic_by_values(&form).is_anisotropic());
    }

    #[test]
    fn colliding_scalars_are_unknown() {
        let t = tower(2);
        let form = BlockForm::new(
            t.clone(),
            vec![
                Block::new(t.one(), vec![], t.var_pow(0, -1)).unwrap(),
                Block::new(t.one(), vec![], t.var_pow(1, -1)).unwrap(),
            ],
            vec![],
        )
        .unwrap();
        let v = anisotropic_by_values(&form);
        let AnisotropyVerdict::Unknown { reason } = &v else {
            panic!("expected unknown");
        };
        assert!(reason.contains("signature"));
    }

    #[test]
    fn hyperbolic_block_has_trivial_witness() {
        let t = tower(2);
        let form = BlockForm::new(
            t.clone(),
            vec![Block::new(t.one(), vec![], t.zero()).unwrap()],
            vec![],
        )
        .unwrap();
        let w = PrecisionWindow::symmetric(2, 1);
        let IsotropyOutcome::Witness(v) = brute_force_isotropy(&form, &w, 10_000) else {
            panic!("hyperbolic plane must have a witness");
        };
        assert_eq!(v, vec![t.zero(), t.one()]);
        // soundness cross-check: the criterion must not claim anisotropy
        assert!(!anisotropic_by_values(&form).is_anisotropic());
    }

    #[test]
    fn image_parameter_has_root_witness() {
        // [1, w] with w = c^2 - c in F_4: the vector (c, 1) is isotropic
        let f4 = BaseFieldDesc::finite_field(2, 2).unwrap();
        let c = f4.gen_w();
        let wparam = c.wp();
        let t = FieldTower::new(f4.clone(), 1);
        let form = BlockForm::new(
            t.clone(),
            vec![Block::new(t.one(), vec![], t.constant(wparam)).unwrap()],
            vec![],
        )
        .unwrap();
        let w = PrecisionWindow::symmetric(1, 1);
        let IsotropyOutcome::Witness(v) = brute_force_isotropy(&form, &w, 100_000) else {
            panic!("expected a witness");
        };
        // verify the witness kills the form: x^2 + xy + w y^2 = 0
        let q = v[0]
            .mul(&v[0])
            .add(&v[0].mul(&v[1]))
            .add(&v[1].mul(&v[1]).mul(form.blocks()[0].w()));
        assert!(q.is_zero());
        assert!(!anisotropic_by_values(&form).is_anisotropic());
    }

    #[test]
    fn omega_two_has_no_small_witness() {
        let t = tower(3);
        let (_, _, omega) = quad_linkage_counterexample(2, &t).unwrap();
        let w = PrecisionWindow::symmetric(3, 1);
        let out = brute_force_isotropy(&omega, &w, 20_000);
        assert!(matches!(out, IsotropyOutcome::NoneFound { .. }), "{out}");
    }

    #[test]
    fn residue_route_blocks_are_certified() {
        // unit parameters with non-image residues: [1, 1+a1] _|_ a1*[1, 1+a2]
        let t = tower(2);
        let form = BlockForm::new(
            t.clone(),
            vec![
                Block::new(t.one(), vec![], t.one().add(&t.var(0))).unwrap(),
                Block::new(t.var(0), vec![], t.one().add(&t.var(1))).unwrap(),
            ],
            vec![],
        )
        .unwrap();
        let v = anisotropic_by_values(&form);
        assert!(v.is_anisotropic(), "{v}");
        // the search corroborates within a small window
        let w = PrecisionWindow::symmetric(2, 1);
        let out = brute_force_isotropy(&form, &w, 20_000);
        assert!(!out.is_witness(), "{out}");
    }

    #[test]
    fn omega_three_has_no_small_witness() {
        let t = tower(4);
        let (_, _, omega) = quad_linkage_counterexample(3, &t).unwrap();
        assert!(anisotropic_by_values(&omega).is_anisotropic());
        let w = PrecisionWindow::symmetric(4, 2);
        let out = brute_force_isotropy(&omega, &w, 50_000);
        assert!(matches!(out, IsotropyOutcome::NoneFound { .. }), "{out}");
    }
}
