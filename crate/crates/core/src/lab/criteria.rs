use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use crate::curve::{effective_divisor_count, point_count, two_torsion_points, Curve, EtaleDoubleCover};
use crate::error::Result;
use crate::hitchin::{
    gm_torsor_check, growth_exponent, hitchin_base_size, martens_dimension, martens_fiber_count, stratify,
    EXPONENT_TOLERANCE,
};
use crate::picard::{
    characters, eigenvalue_check, eisenstein_factorization_check, gl1_relative_trace, rho_h_factorization_check,
    twisted_hitchin_base_count, twisted_torus_bundles, vanishing_scan, PicardGroup, TorusCharacter,
};
use crate::zeta::{
    constant_sheaf_eigenvalue, frobenius_datum, l_series_cohomological, l_series_product, leading_term_dimension,
    sym_power_point_count, sym_power_trace, GradedLocalSystem, QRendering, Summand, ZetaData,
};

pub const ELLIPTIC_CURVES: [&str; 5] =
    ["ell2:q=2;f=x^3", "ell2:q=2;f=x^3+x", "ell:q=3;a=1;b=0", "ell:q=3;a=2;b=1", "ell:q=5;a=1;b=1"];
pub const GENUS_TWO: &str = "hyp:q=3;f=x^5+2x^2+1";
pub const TWISTED_BASE: &str = "ell:q=5;a=-1;b=0";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

/// Collects failures; passes when there are none.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, what: &str) -> Result<Outcome> {
        let detail = if self.failures.is_empty() {
            format!("{} {what}", self.checked)
        } else {
            format!("{}/{} {what} failed: {}", self.failures.len(), self.checked, self.failures.join("; "))
        };
        Ok(Outcome { pass: self.failures.is_empty(), detail })
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub run: fn(&ExperimentConfig) -> Result<Outcome>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "zeta", run: zeta_correctness },
        Criterion { id: 2, name: "two-route-l-series", run: two_route_l_series },
        Criterion { id: 3, name: "eigenvalue", run: eigenvalues },
        Criterion { id: 4, name: "vanishing", run: vanishing },
        Criterion { id: 5, name: "gl1-trace", run: gl1_trace },
        Criterion { id: 6, name: "sym-power", run: sym_power },
        Criterion { id: 7, name: "constant-sheaf", run: constant_sheaf },
        Criterion { id: 8, name: "sl2-vanishing", run: sl2_vanishing },
        Criterion { id: 9, name: "hitchin-strata", run: hitchin_strata },
        Criterion { id: 10, name: "gm-torsor", run: gm_torsor },
        Criterion { id: 11, name: "martens", run: martens },
        Criterion { id: 12, name: "twisted-torus", run: twisted_torus },
        Criterion { id: 13, name: "determinism", run: determinism },
    ]
}

fn curve(d: &str) -> Result<Curve> {
    Curve::parse_default(d)
}

fn setup(d: &str) -> Result<(Curve, Arc<PicardGroup>, ZetaData)> {
    let c = curve(d)?;
    let pic = Arc::new(PicardGroup::new(&c)?);
    let z = ZetaData::of_curve(&c)?;
    Ok((c, pic, z))
}

pub fn zeta_correctness(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for q in [2, 3, 5, 7] {
        let z = ZetaData::of_curve(&curve(&format!("p1:q={q}"))?)?;
        t.check(z.numerator() == [1], || format!("p1:q={q}"));
    }
    for d in ELLIPTIC_CURVES {
        let c = curve(d)?;
        let q = c.q() as u64;
        let counts = [point_count(&c, 1)?, point_count(&c, 2)?];
        let z = ZetaData::from_counts(&counts, q, 1)?;
        let p = z.numerator();
        let a = counts[0] as i128 - q as i128 - 1;
        let ok = p == [1, a, q as i128]
            && (1..=3).all(|n| z.predicted_count(n) == point_count(&c, n).map(|x| x as i128).unwrap_or(-1));
        t.check(ok, || d.to_string());
    }
    t.finish("zeta functions")
}

pub fn two_route_l_series(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for (d, degree_order) in [("p1:q=3", 3), ("ell:q=3;a=1;b=0", 2), (GENUS_TWO, 1)] {
        let (_, pic, z) = setup(d)?;
        let dmax = 2 * z.genus() as usize + 4;
        for chi in characters(&pic, degree_order) {
            let sys = GradedLocalSystem::single(chi.clone());
            let datum = frobenius_datum(&sys, &z, QRendering::Integer)?;
            let ok = l_series_product(&sys, dmax)? == l_series_cohomological(&datum, dmax);
            t.check(ok, || format!("{d} {}", chi.label()));
        }
    }
    t.finish("characters")
}

pub fn eigenvalues(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in ["ell2:q=2;f=x^3", "ell:q=3;a=1;b=0"] {
        let (_, pic, _) = setup(d)?;
        for chi in characters(&pic, 2) {
            for m in 0..=2 {
                for e in 0..=5 {
                    let ok = eigenvalue_check(&chi, m, e)?.equal;
                    t.check(ok, || format!("{d} {} m={m} d={e}", chi.label()));
                }
            }
        }
    }
    t.finish("eigenvalues")
}

pub fn vanishing(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in ["ell2:q=2;f=x^3", "ell:q=3;a=1;b=0", TWISTED_BASE, GENUS_TWO] {
        let (_, pic, _) = setup(d)?;
        for chi in characters(&pic, 1) {
            for m in 1..=3 {
                if chi.pow(m).is_geometrically_trivial() {
                    continue;
                }
                let scan = vanishing_scan(&chi, m, 0..=6)?;
                t.check(scan.holds(), || format!("{d} {} m={m} nonzero at {:?}", chi.label(), scan.nonzero));
            }
        }
    }
    t.finish("nontrivial chi^m")
}

pub fn gl1_curves() -> Vec<String> {
    let mut v: Vec<String> = [2, 3, 5, 7].iter().map(|q| format!("p1:q={q}")).collect();
    v.extend(ELLIPTIC_CURVES.iter().map(|s| s.to_string()));
    v.extend([TWISTED_BASE, "ell:q=7;a=1;b=0", "hyp:q=3;f=x^5+2x+1", GENUS_TWO].iter().map(|s| s.to_string()));
    v
}

pub fn gl1_trace(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in gl1_curves() {
        let (c, pic, z) = setup(&d)?;
        let v = gl1_relative_trace(&pic, &z);
        let ok = v == Ratio::from_integer(c.q() as i128 - 1) && pic.order() as i128 == z.class_number();
        t.check(ok, || format!("{d} gave {v}"));
    }
    t.finish("curves")
}

pub fn random_system(chars: &[TorusCharacter], rng: &mut ChaCha8Rng) -> GradedLocalSystem {
    let k = rng.gen_range(1..=3);
    GradedLocalSystem::new(
        (0..k)
            .map(|_| Summand {
                chi: chars[rng.gen_range(0..chars.len())].clone(),
                twist: rng.gen_range(-4..=4),
                shift: rng.gen_range(-2..=2),
            })
            .collect(),
    )
}

pub fn sym_power(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut curves = Vec::new();
    for (d, degree_order) in [("ell:q=3;a=1;b=0", 2), ("hyp:q=3;f=x^5+2x+1", 1), ("p1:q=2", 2)] {
        let (_, pic, z) = setup(d)?;
        curves.push((d, z, characters(&pic, degree_order)));
    }
    let dmax = 5;
    for i in 0..50 {
        let (d, z, chars) = &curves[rng.gen_range(0..curves.len())];
        let sys = random_system(chars, &mut rng);
        let datum = frobenius_datum(&sys, z, QRendering::Integer)?;
        let series = l_series_cohomological(&datum, dmax);
        let ok = (0..=dmax).all(|k| sym_power_trace(&datum, k) == series[k]) && series == l_series_product(&sys, dmax)?;
        t.check(ok, || format!("system {i} on {d}"));
    }
    let (_, pic, z) = setup("ell:q=3;a=1;b=0")?;
    for m in 1..=4u64 {
        let sys = GradedLocalSystem::new(
            (0..m).map(|_| Summand { chi: TorusCharacter::trivial(pic.clone()), twist: 0, shift: 0 }).collect(),
        );
        let datum = frobenius_datum(&sys, &z, QRendering::Weight)?;
        for d in 0..=6u64 {
            let tr = sym_power_trace(&datum, d as usize);
            let lead = tr.v_part(2 * d as i32).as_int();
            let ok = tr.max_v_degree() == Some(2 * d as i32) && lead == Some(leading_term_dimension(m, d) as i128);
            t.check(ok, || format!("leading term m={m} d={d}"));
        }
    }
    t.finish("checks")
}

fn graded_trivial(pic: &Arc<PicardGroup>, chi: Option<&TorusCharacter>) -> GradedLocalSystem {
    let chi = chi.cloned().unwrap_or_else(|| TorusCharacter::trivial(pic.clone()));
    GradedLocalSystem::new(
        [-2, 0, 2].iter().map(|&w| Summand { chi: chi.clone(), twist: w, shift: w }).collect(),
    )
}

pub fn constant_sheaf(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in ["p1:q=3", "ell:q=3;a=1;b=0"] {
        let (_, pic, z) = setup(d)?;
        let datum = frobenius_datum(&graded_trivial(&pic, None), &z, QRendering::Integer)?;
        for k in 0..=5 {
            let ok = constant_sheaf_eigenvalue(&[(-2, 1), (0, 1), (2, 1)], &z, k) == sym_power_trace(&datum, k);
            t.check(ok, || format!("{d} d={k}"));
        }
    }
    t.finish("coefficients")
}

pub fn sl2_vanishing(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in [GENUS_TWO, "ell:q=3;a=1;b=0"] {
        let (_, pic, z) = setup(d)?;
        let g = z.genus() as usize;
        let chars = characters(&pic, 1);
        let chi = chars.iter().find(|c| c.order() == 2 && !c.is_geometrically_trivial());
        let Some(chi) = chi else {
            t.check(false, || format!("{d} has no order-two character"));
            continue;
        };
        let datum = frobenius_datum(&graded_trivial(&pic, Some(chi)), &z, QRendering::Integer)?;
        let bound = 3 * (2 * g - 2);
        for k in bound + 1..=bound + 4 {
            t.check(sym_power_trace(&datum, k).is_zero(), || format!("{d} d={k}"));
        }
    }
    t.finish("degrees")
}

pub fn hitchin_strata(cfg: &ExperimentConfig) -> Result<Outcome> {
    let c = curve("p1:q=3")?;
    let tower = cfg.tower.unwrap_or(3);
    let s = stratify(&c, 2, tower)?;
    let mut t = Tally::default();
    for f in &s.fits {
        t.check(f.pass, || format!("delta={} estimates {:?}", f.delta, f.estimates));
    }
    for (n, level) in (1..).zip(&s.levels) {
        let cn = c.base_change(n)?;
        let ok = level.total() == hitchin_base_size(&cn, 2)?
            && level.non_reduced == 2 * effective_divisor_count(&cn, 2)?;
        t.check(ok, || format!("partition over F_{}", level.q));
    }
    let est: Vec<String> = s
        .fits
        .iter()
        .map(|f| match f.estimates.last().copied().flatten() {
            Some(e) => format!("{}:{e:.3}", f.delta),
            None => format!("{}:-", f.delta),
        })
        .collect();
    let mut o = t.finish("checks")?;
    o.detail = format!("{}; exponents {}", o.detail, est.join(" "));
    Ok(o)
}

pub fn gm_torsor(_: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in ["p1:q=3", "ell:q=3;a=1;b=0"] {
        let c = curve(d)?;
        for k in 0..=2 {
            let r = gm_torsor_check(&c, k)?;
            t.check(r.equal, || format!("{d} d={k}: {} vs {}", r.units, r.fiber_product));
        }
    }
    t.finish("identities")
}

pub fn martens(_: &ExperimentConfig) -> Result<Outcome> {
    let c = curve("ell:q=3;a=1;b=0")?;
    let mut t = Tally::default();
    let mut est = Vec::new();
    for d in 1..=2 {
        let (c1, c2) = (martens_fiber_count(&c, d, 1)?, martens_fiber_count(&c, d, 2)?);
        let e = growth_exponent(c1, c2, 3, 9);
        let expected = martens_dimension(1, d) as f64;
        est.push(format!("{d}:{}", e.map_or("-".into(), |e| format!("{e:.3}"))));
        t.check(e.is_some_and(|e| (e - expected).abs() <= EXPONENT_TOLERANCE), || format!("d={d}"));
    }
    let mut o = t.finish("degrees")?;
    o.detail = format!("{}; exponents {}", o.detail, est.join(" "));
    Ok(o)
}

pub fn twisted_cover() -> Result<EtaleDoubleCover> {
    let e = curve(TWISTED_BASE)?;
    EtaleDoubleCover::new(&e, two_torsion_points(&e)[1])
}

pub fn twisted_torus(_: &ExperimentConfig) -> Result<Outcome> {
    let b = twisted_torus_bundles(&twisted_cover()?)?;
    let z = ZetaData::of_curve(b.cover().base())?;
    let mut t = Tally::default();
    t.check(b.component_count() == 2 && b.order() == 2 * b.neutral_component().len(), || "components".into());
    for d0 in 0..=1 {
        for d1 in [1, 3] {
            let n = twisted_hitchin_base_count(&b, &z, d0, d1)?;
            t.check(n == 0, || format!("d0={d0} d1={d1} count {n}"));
        }
        let n = twisted_hitchin_base_count(&b, &z, d0, 0)?;
        t.check(n == 2 * sym_power_point_count(&z, d0 as usize), || format!("d0={d0} d1=0 count {n}"));
    }
    let eh = b.cover_character();
    let base_chars = characters(b.base_pic(), 1);
    let cover_chars = characters(b.cover_pic(), 2);
    let triv = TorusCharacter::trivial(b.cover_pic().clone());
    t.check(rho_h_factorization_check(&b, &eh, &triv, 4)?.equal, || "rho_H at (E_H, 1)".into());
    for (i, e) in base_chars.iter().enumerate().step_by(3) {
        let chi = &cover_chars[(5 * i + 3) % cover_chars.len()];
        t.check(rho_h_factorization_check(&b, e, chi, 4)?.equal, || format!("rho_H at ({}, {})", e.label(), chi.label()));
    }
    for e1 in characters(b.base_pic(), 2).iter().filter(|c| !c.is_trivial()).take(5) {
        t.check(eisenstein_factorization_check(e1, &z, 4)?.equal, || format!("Eisenstein {}", e1.label()));
    }
    t.finish("checks")
}

pub fn determinism(cfg: &ExperimentConfig) -> Result<Outcome> {
    let a = super::experiments::suite_report(cfg, false)?;
    let b = super::experiments::suite_report(cfg, false)?;
    let same = a.to_json() == b.to_json() && a.to_tsv() == b.to_tsv();
    Ok(Outcome {
        pass: same,
        detail: format!("{} bytes, {}", a.to_json().len(), if same { "identical" } else { "differ" }),
    })
}
