//! Recursive division check for symbol products over a Laurent tower.
//!
//! At each level the class splits at the outermost variable into an
//! inertial part (slots not involving it) and a ramified part. The
//! implemented sufficient criterion requires a single ramified symbol E:
//!
//! * E is certified division by two value-group arguments: its additive
//!   slot has negative value outside p*Z^n, so adjoining a root gives a
//!   totally ramified degree-p field extension K, and its multiplicative
//!   slot has value outside p*Z^n + Z*v(a) = v(N(K^x)), so it is not a
//!   norm.
//! * The residue field of E adjoins q with q^p equal to the residue of the
//!   multiplicative slot; the inertial part descends to that residue tower
//!   (substituting the p-th power of the new variable) and is checked
//!   recursively.
//! * The combination step: the inertial part is defectless with value
//!   group equal to Gamma_F at the outer stage, its value group meets
//!   Gamma_E only in Gamma_F, and the residue tensor product is division,
//!   so the whole product is division over the Henselian outer valuation.
//!
//! Division and NotDivision are only reported when a proof path exists;
//! everything else is Unknown with a reason.

use super::simplify::simplify;
use super::{BrauerClass, DivisionVerdict, SymbolAS};
use crate::basefield::BaseFieldElement;
use crate::laurent::{FieldTower, LaurentPoly, Monomial, ValueVec};

/// Residue data of one symbol at the outermost-variable valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolResidue {
    /// Both slots lie in the valuation ring with unit multiplicative slot;
    /// the symbol descends to the residue tower.
    Inertial { symbol: SymbolAS },
    /// Totally ramified of degree p; the residue field adjoins q with
    /// q^p equal to the carried element of the residue tower.
    TotallyRamified { qp_equals: LaurentPoly },
    Unrecognized { reason: String },
}

/// Classify a symbol at the outermost variable of its tower.
pub fn residue_of_symbol(s: &SymbolAS) -> SymbolResidue {
    let tower = s.tower();
    let n = tower.n();
    if n == 0 {
        return SymbolResidue::Unrecognized {
            reason: "no Laurent variable to take a residue at".into(),
        };
    }
    let p = tower.p() as i64;
    // inertial shape: both slots have all outer exponents >= 0 and the
    // multiplicative slot stays nonzero in the residue
    if let (Ok(a_res), Ok(b_res)) = (s.a().residue_outer(), s.b().residue_outer()) {
        if !b_res.is_zero() {
            return SymbolResidue::Inertial {
                symbol: SymbolAS { a: a_res, b: b_res },
            };
        }
    }
    // totally ramified shape: additive slot of negative outer value prime
    // to p, multiplicative slot a unit at the outer variable
    let va_outer = outer_val(s.a());
    let vb_outer = outer_val(s.b());
    match (va_outer, vb_outer) {
        (Some(va), Some(0)) if va < 0 && va.rem_euclid(p) != 0 => {
            let qp = s
                .b()
                .residue_outer()
                .expect("outer value 0 means no negative outer exponent");
            SymbolResidue::TotallyRamified { qp_equals: qp }
        }
        _ => SymbolResidue::Unrecognized {
            reason: "ramification at the outer variable matches no recognized shape".into(),
        },
    }
}

/// Minimal exponent of the outermost variable, None for zero.
fn outer_val(x: &LaurentPoly) -> Option<i64> {
    let n = x.tower().n();
    x.terms().map(|(m, _)| m.exps()[n - 1]).min()
}

fn max_outer(x: &LaurentPoly) -> Option<i64> {
    let n = x.tower().n();
    x.terms().map(|(m, _)| m.exps()[n - 1]).max()
}

/// Decide whether the tensor product of the class's symbols is a division
/// algebra. Total: inapplicable criteria yield Unknown, never a wrong
/// definite verdict.
pub fn decide_division(class: &BrauerClass) -> DivisionVerdict {
    let mut trace = vec![format!(
        "class {} over {} (p = {})",
        class,
        class.tower(),
        class.p()
    )];
    let simplified = simplify(class);
    if simplified.len() < class.len() {
        trace.push(format!(
            "simplification collapsed {} symbols to {}: the product of degree p^{} \
             is equivalent to one of smaller degree, hence has zero divisors",
            class.len(),
            simplified.len(),
            class.len()
        ));
        return DivisionVerdict::not_division(trace);
    }
    match rec(&simplified, &mut trace) {
        Ok(()) => DivisionVerdict::division(trace),
        Err(reason) => DivisionVerdict::unknown(trace, reason),
    }
}

fn rec(class: &BrauerClass, trace: &mut Vec<String>) -> Result<(), String> {
    if class.is_empty() {
        trace.push("empty product: the field itself, trivially division".into());
        return Ok(());
    }
    let tower = class.tower().clone();
    let n = tower.n();
    if n == 0 {
        return Err("symbols remain over the base field; no implemented criterion applies".into());
    }
    let outer = n - 1;
    let name = tower.names()[outer].clone();
    let p = tower.p();

    let mut inertial: Vec<&SymbolAS> = Vec::new();
    let mut ramified: Vec<&SymbolAS> = Vec::new();
    for s in class.symbols() {
        let a_out = outer_val(s.a()).expect("additive slot nonzero after simplification");
        let b_out = outer_val(s.b()).expect("multiplicative slot nonzero");
        if a_out == 0 && b_out == 0 && max_outer(s.a()) == Some(0) && max_outer(s.b()) == Some(0) {
            inertial.push(s);
        } else if a_out != 0 || b_out != 0 {
            ramified.push(s);
        } else {
            return Err(format!(
                "symbol {s} depends on {name} without being ramified there; \
                 outside the decidable fragment"
            ));
        }
    }

    if ramified.is_empty() {
        trace.push(format!(
            "all symbols are constant in {name}; descending to the residue tower"
        ));
        let residue_tower = tower.residue().expect("n >= 1");
        let symbols = inertial
            .iter()
            .map(|s| drop_outer_symbol(s, &residue_tower))
            .collect::<Result<Vec<_>, _>>()?;
        let residue_class = recanonicalize(&residue_tower, symbols)?;
        return rec(&residue_class, trace);
    }

    if ramified.len() > 1 {
        return Err(format!(
            "{} symbols are ramified at {name}; the split needs exactly one",
            ramified.len()
        ));
    }
    let e_sym = ramified[0];
    trace.push(format!("symbol ramified at {name}: E = {e_sym}"));

    // E is division: value-group arguments
    let va = e_sym.a().valuation().map_err(|_| "zero additive slot".to_string())?;
    trace.push(format!("v({}) = {}", e_sym.a(), va));
    if va >= ValueVec::zero(n) {
        return Err("additive slot of the ramified symbol has non-negative value".into());
    }
    if va.mod_p(p).iter().all(|&c| c == 0) {
        return Err("v(additive slot) lies in p*Z^n; no totally ramified root extension".into());
    }
    trace.push(format!(
        "a root z of z^p - z = {} would have value ({}) / {} outside Gamma_F = Z^{}, \
         so K = F[z] is a degree-{} field extension",
        e_sym.a(),
        va,
        p,
        n,
        p
    ));
    trace.push(format!("Gamma_K = {}", gamma_k_string(&va, p)));
    let vb = e_sym
        .b()
        .valuation()
        .map_err(|_| "zero multiplicative slot".to_string())?;
    if in_norm_value_lattice(&vb, &va, p) {
        return Err(format!(
            "v(multiplicative slot) = {vb} lies in p*Z^n + Z*v(additive slot); \
             the norm-value obstruction does not apply"
        ));
    }
    trace.push(format!(
        "norm-value obstruction at {}: norm values from K lie in p*Z^n + Z*{}, \
         which misses v({}) = {}, so E is a division algebra",
        vb,
        va,
        e_sym.b(),
        vb
    ));

    if inertial.is_empty() {
        trace.push("no inertial part remains".into());
        return Ok(());
    }

    // residue field of E and the descent substitution
    let va_outer = va.coords()[outer];
    if va_outer >= 0 || va_outer.rem_euclid(p as i64) == 0 {
        return Err(format!(
            "outer exponent {va_outer} of the additive slot is not negative and prime to {p}; \
             the residue shape is unrecognized"
        ));
    }
    if outer_val(e_sym.b()) != Some(0) || max_outer(e_sym.b()) != Some(0) {
        return Err(format!(
            "multiplicative slot of E must be constant in {name} for the residue step"
        ));
    }
    let residue_tower = tower.residue().expect("n >= 1");
    let b_res = e_sym
        .b()
        .residue_outer()
        .expect("outer exponents are all zero");
    let Some((qp_mono, qp_coeff)) = b_res.as_single_term().map(|(m, c)| (m.clone(), c.clone()))
    else {
        return Err("residue of the multiplicative slot is not a single term".into());
    };
    let nonzero: Vec<usize> = (0..n - 1).filter(|&i| qp_mono.exps()[i] != 0).collect();
    let (j, s) = match nonzero.as_slice() {
        [j] if qp_mono.exps()[*j].abs() == 1 => (*j, qp_mono.exps()[*j]),
        _ => {
            return Err(
                "residue of the multiplicative slot is not a single variable to the power +-1"
                    .into(),
            )
        }
    };
    let qname = fresh_q_name(&residue_tower);
    let new_tower = residue_tower
        .rename_var(j, &qname)
        .expect("fresh name is distinct");
    trace.push(format!(
        "residue field of E adjoins {qname} with {qname}^{p} = {b_res}; \
         the inertial part descends with {} = {}^{}",
        residue_tower.names()[j],
        qname,
        s * p as i64,
    ));

    let mut new_symbols = Vec::with_capacity(inertial.len());
    for sym in &inertial {
        let a0 = drop_outer_poly(sym.a(), &residue_tower)?;
        let b0 = drop_outer_poly(sym.b(), &residue_tower)?;
        let mut a1 = substitute_var_power(&a0, &new_tower, j, s, p, &qp_coeff);
        let b1 = substitute_var_power(&b0, &new_tower, j, s, p, &qp_coeff);
        // [u^p, b) = [u, b) since u^p - u is in the image of z^p - z
        loop {
            if !a1.is_pth_power() {
                break;
            }
            let root = a1.pth_root().expect("checked");
            if root == a1 {
                break;
            }
            a1 = root;
        }
        new_symbols.push(SymbolAS { a: a1, b: b1 });
    }
    trace.push(format!(
        "inertial part is defectless at the {name}-adic valuation with \
         Gamma_D = Gamma_F, so Gamma_D meets Gamma_E in Gamma_F"
    ));
    let residue_class = recanonicalize(&new_tower, new_symbols)?;
    trace.push(format!(
        "residue product {} over {}",
        residue_class,
        residue_class.tower()
    ));
    rec(&residue_class, trace)?;
    trace.push(format!(
        "division criteria combine at {name}: defectless inertial part, division residue \
         product, trivial value-group intersection"
    ));
    Ok(())
}

/// Re-run slot canonicalization on a residue class; degeneration means the
/// criteria no longer track the original product's degree.
fn recanonicalize(tower: &FieldTower, symbols: Vec<SymbolAS>) -> Result<BrauerClass, String> {
    let class = BrauerClass::new(tower.clone(), symbols).expect("consistent towers");
    let s = simplify(&class);
    if s.len() < class.len() {
        return Err("the residue class simplifies to fewer symbols; the degree bookkeeping of \
                    the criteria no longer applies"
            .into());
    }
    Ok(s)
}

fn drop_outer_symbol(sym: &SymbolAS, residue_tower: &FieldTower) -> Result<SymbolAS, String> {
    Ok(SymbolAS {
        a: drop_outer_poly(sym.a(), residue_tower)?,
        b: drop_outer_poly(sym.b(), residue_tower)?,
    })
}

/// Reinterpret a polynomial constant in the outer variable over the
/// residue tower.
fn drop_outer_poly(x: &LaurentPoly, residue_tower: &FieldTower) -> Result<LaurentPoly, String> {
    let n = x.tower().n();
    let mut out = residue_tower.zero();
    for (m, c) in x.terms() {
        if m.exps()[n - 1] != 0 {
            return Err("slot unexpectedly involves the outer variable".into());
        }
        out.add_term(Monomial::new(m.exps()[..n - 1].to_vec()), c.clone());
    }
    Ok(out)
}

/// Substitute variable j by the relation var_j = coeff^{-s} * q^{s*p}
/// (with q sitting in position j of the new tower): exponent e of var_j
/// becomes s*p*e and the coefficient picks up coeff^{-s*e}.
fn substitute_var_power(
    x: &LaurentPoly,
    new_tower: &FieldTower,
    j: usize,
    s: i64,
    p: u64,
    coeff: &BaseFieldElement,
) -> LaurentPoly {
    let mut out = new_tower.zero();
    for (m, c) in x.terms() {
        let e = m.exps()[j];
        let mut exps = m.exps().to_vec();
        exps[j] = s * p as i64 * e;
        let mut c2 = c.clone();
        if !coeff.is_one() && e != 0 {
            c2 = c2.mul(&elem_pow(coeff, -s * e));
        }
        out.add_term(Monomial::new(exps), c2);
    }
    out
}

fn elem_pow(c: &BaseFieldElement, k: i64) -> BaseFieldElement {
    let base = if k < 0 {
        c.inv().expect("unit coefficient")
    } else {
        c.clone()
    };
    let mut acc = c.desc().one();
    for _ in 0..k.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc
}

fn fresh_q_name(tower: &FieldTower) -> String {
    if !tower.names().iter().any(|n| n == "q") {
        return "q".into();
    }
    let mut i = 2;
    loop {
        let cand = format!("q{i}");
        if !tower.names().contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

/// Is w in p*Z^n + Z*v? Reduce mod p and compare against the cyclic group
/// generated by v.
fn in_norm_value_lattice(w: &ValueVec, v: &ValueVec, p: u64) -> bool {
    let wm = w.mod_p(p);
    let vm = v.mod_p(p);
    (0..p).any(|j| {
        wm.iter()
            .zip(&vm)
            .all(|(&wc, &vc)| wc == (j * vc) % p)
    })
}

/// Render Gamma_F + (1/p) Z v as a product of coordinate factors when v is
/// a signed unit vector, e.g. "Z x (1/2)Z".
fn gamma_k_string(v: &ValueVec, p: u64) -> String {
    let nonzero: Vec<usize> = (0..v.len()).filter(|&i| v.coords()[i] != 0).collect();
    if let [j] = nonzero.as_slice() {
        if v.coords()[*j].abs() == 1 {
            let factors: Vec<String> = (0..v.len())
                .map(|i| {
                    if i == *j {
                        format!("(1/{p})Z")
                    } else {
                        "Z".to_string()
                    }
                })
                .collect();
            return factors.join(" x ");
        }
    }
    format!("Z^{} + (1/{})*{}*Z", v.len(), p, v)
}
