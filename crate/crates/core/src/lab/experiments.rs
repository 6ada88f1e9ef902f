use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::ExperimentConfig;
use super::criteria::criteria;
use super::report::{Report, Section};
use crate::curve::{point_count, two_torsion_points, Curve, EtaleDoubleCover, Model};
use crate::error::{Error, Result};
use crate::hitchin::{
    gm_torsor_check, growth_exponent, hitchin_base_enumerate, hitchin_base_size, martens_dimension,
    martens_fiber_count, pi0_classify, stratify, EXPONENT_TOLERANCE,
};
use crate::picard::{
    build_kernel, characters, eigenvalue_check, eisenstein_factorization_check, gl1_relative_trace,
    hecke_components_h, m_independent, rho_h_factorization_check, twisted_hitchin_base_count, twisted_torus_bundles,
    vanishing_scan, PicardGroup, TorusCharacter,
};
use crate::zeta::{
    frobenius_datum, l_series_cohomological, l_series_product, sym_power_point_count, GradedLocalSystem, QRendering,
    Summand, ZetaData,
};

/// A named experiment producing a report from a configuration.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<Report>;
}

pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.entries.insert(e.name(), e);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> + '_ {
        self.entries.values().map(|b| b.as_ref())
    }

    pub fn run(&self, name: &str, cfg: &ExperimentConfig) -> Result<Report> {
        let e = self.get(name).ok_or_else(|| {
            Error::Usage(format!("unknown command {name:?}; expected one of {}", self.names().collect::<Vec<_>>().join(", ")))
        })?;
        e.run(cfg)
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(Zeta));
        r.register(Box::new(LFun));
        r.register(Box::new(Gl1Trace));
        r.register(Box::new(HeckeEigen));
        r.register(Box::new(TorusCompare));
        r.register(Box::new(HitchinStrata));
        r.register(Box::new(Suite));
        r
    }
}

fn ints(v: &[i128]) -> Value {
    json!(v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn describe(report: &mut Report, c: &Curve) {
    report.note("curve", c.descriptor());
    report.note("q", c.q());
    report.note("genus", c.genus());
}

fn pic(c: &Curve) -> Result<Arc<PicardGroup>> {
    Ok(Arc::new(PicardGroup::new(c)?))
}

pub struct Zeta;

impl Experiment for Zeta {
    fn name(&self) -> &'static str {
        "zeta"
    }

    fn about(&self) -> &'static str {
        "zeta numerator from point counts, checked against counts and the functional equation"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        let g = c.genus();
        let q = c.q() as i128;
        let nmax = (2 * g).max(1) + 2;
        cfg.require((c.q() as u128).pow(nmax))?;
        let z = ZetaData::of_curve(&c)?;
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);
        r.note("numerator", ints(z.numerator()));
        r.note("class_number", z.class_number().to_string());

        let mut counts = Section::new("counts", &["n", "brute", "predicted"], Some("equal"));
        for n in 1..=nmax {
            let brute = point_count(&c, n)? as i128;
            let pred = z.predicted_count(n);
            counts.push(vec![json!(n), json!(brute.to_string()), json!(pred.to_string())], Some(brute == pred));
        }
        r.add(counts);

        let p = z.numerator();
        let mut fe = Section::new("functional_equation", &["k", "c_k", "c_2g_minus_k"], Some("equal"));
        for k in 0..=g as usize {
            let (lo, hi) = (p[k], p[2 * g as usize - k]);
            fe.push(vec![json!(k), json!(lo.to_string()), json!(hi.to_string())], Some(hi == q.pow(g - k as u32) * lo));
        }
        r.add(fe);
        Ok(r)
    }
}

pub struct LFun;

impl Experiment for LFun {
    fn name(&self) -> &'static str {
        "lfun"
    }

    fn about(&self) -> &'static str {
        "Euler product against the cohomological L-series for every character of Pic^0"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        let dmax = cfg.dmax.unwrap_or(2 * c.genus() + 4);
        cfg.require((c.q() as u128).checked_pow(dmax).unwrap_or(u128::MAX))?;
        let z = ZetaData::of_curve(&c)?;
        let pic = pic(&c)?;
        let chars = characters(&pic, 1);
        let rows = chars
            .par_iter()
            .map(|chi| {
                let sys = GradedLocalSystem::single(chi.clone());
                let a = l_series_product(&sys, dmax as usize)?;
                let b = l_series_cohomological(&frobenius_datum(&sys, &z, QRendering::Integer)?, dmax as usize);
                Ok((chi.label(), a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);
        r.note("characters", chars.len());
        r.note("dmax", dmax);
        let mut s = Section::new("lseries", &["curve", "chi_id", "d", "product", "cohomological"], Some("equal"));
        for (label, a, b) in rows {
            for d in 0..=dmax as usize {
                s.push(
                    vec![json!(c.descriptor()), json!(label), json!(d), json!(a[d].to_text()), json!(b[d].to_text())],
                    Some(a[d] == b[d]),
                );
            }
        }
        r.add(s);
        Ok(r)
    }
}

pub struct Gl1Trace;

impl Experiment for Gl1Trace {
    fn name(&self) -> &'static str {
        "gl1-trace"
    }

    fn about(&self) -> &'static str {
        "relative trace for GL1, expected to equal q - 1"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        let z = ZetaData::of_curve(&c)?;
        let pic = pic(&c)?;
        let v = gl1_relative_trace(&pic, &z);
        let expected = c.q() as i128 - 1;
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);
        let mut s = Section::new("trace", &["curve", "jacobian_order", "class_number", "value", "expected"], Some("equal"));
        s.push(
            vec![
                json!(c.descriptor()),
                json!(pic.order()),
                json!(z.class_number().to_string()),
                json!(v.to_string()),
                json!(expected.to_string()),
            ],
            Some(v == expected.into() && pic.order() as i128 == z.class_number()),
        );
        r.add(s);
        Ok(r)
    }
}

pub struct HeckeEigen;

impl Experiment for HeckeEigen {
    fn name(&self) -> &'static str {
        "hecke"
    }

    fn about(&self) -> &'static str {
        "Hecke eigenvalues for tori: divisor sums, vanishing and multi-weight kernels"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        let dmax = cfg.dmax.unwrap_or(5);
        let m_max = cfg.m_max.unwrap_or(2) as i64;
        cfg.require(crate::curve::effective_divisor_count(&c, dmax)?)?;
        let pic = pic(&c)?;
        let chars = characters(&pic, 2);
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);

        let mut eig = Section::new("eigenvalues", &["curve", "chi_id", "m", "d", "lhs", "rhs"], Some("equal"));
        let mut van = Section::new("vanishing", &["chi_id", "m", "bound", "nonzero"], Some("holds"));
        for chi in &chars {
            for m in 0..=m_max {
                for d in 0..=dmax {
                    let e = eigenvalue_check(chi, m, d)?;
                    eig.push(
                        vec![
                            json!(c.descriptor()),
                            json!(chi.label()),
                            json!(m),
                            json!(d),
                            json!(e.lhs.to_text()),
                            json!(e.rhs.to_text()),
                        ],
                        Some(e.equal),
                    );
                }
                let v = vanishing_scan(chi, m, 0..=dmax)?;
                van.push(vec![json!(chi.label()), json!(m), json!(v.bound), json!(v.nonzero)], Some(v.holds()));
            }
        }
        r.add(eig);
        r.add(van);

        if let Some(w) = &cfg.weights {
            let d = cfg.d.unwrap_or(2);
            let k = build_kernel(&pic, d, w)?;
            let mut ks = Section::new("kernel", &["chi_id", "weights", "d", "action", "l_series"], Some("equal"));
            for chi in &chars {
                let sys = GradedLocalSystem::new(
                    w.iter().map(|&m| Summand { chi: chi.pow(m), twist: 0, shift: 0 }).collect(),
                );
                let rhs = l_series_product(&sys, d as usize)?.swap_remove(d as usize);
                let lhs = k.action(chi);
                ks.push(
                    vec![json!(chi.label()), json!(w), json!(d), json!(lhs.to_text()), json!(rhs.to_text())],
                    Some(lhs == rhs),
                );
            }
            r.note("kernel_mass", k.mass());
            r.note("kernel_diagonal_trace", k.diagonal_trace());
            r.add(ks);
        }
        Ok(r)
    }
}

pub struct TorusCompare;

impl TorusCompare {
    fn cover(c: &Curve, which: usize) -> Result<EtaleDoubleCover> {
        if !matches!(c.model(), Model::Elliptic(_)) {
            return Err(Error::UnsupportedCurve("torus-compare needs an elliptic curve".into()));
        }
        let pts = two_torsion_points(c);
        let t = pts
            .get(which % pts.len().max(1))
            .ok_or_else(|| Error::UnsupportedCurve("no rational 2-torsion point".into()))?;
        EtaleDoubleCover::new(c, *t)
    }
}

impl Experiment for TorusCompare {
    fn name(&self) -> &'static str {
        "torus-compare"
    }

    fn about(&self) -> &'static str {
        "twisted torus of an isogeny double cover: components, base counts and factorisations"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        let cover = Self::cover(&c, cfg.m.unwrap_or(0).max(0) as usize)?;
        let d = cfg.d.unwrap_or(2);
        let dmax = cfg.dmax.unwrap_or(4) as usize;
        cfg.require(crate::curve::effective_divisor_count(cover.cover(), d.max(dmax as u32))?)?;
        let b = twisted_torus_bundles(&cover)?;
        let zx = ZetaData::of_curve(cover.base())?;
        let zc = ZetaData::of_curve(cover.cover())?;
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);
        r.note("cover", cover.cover().descriptor());

        let mut comp = Section::new("components", &["bundles", "neutral", "components"], Some("pass"));
        let (n, k) = (b.order(), b.component_count());
        comp.push(
            vec![json!(n), json!(b.neutral_component().len()), json!(k)],
            Some(k == 2 && n == 2 * b.neutral_component().len()),
        );
        r.add(comp);

        let mut base = Section::new("base_counts", &["d0", "d1", "count", "expected"], Some("pass"));
        for d1 in 0..=d {
            let d0 = d - d1;
            let count = twisted_hitchin_base_count(&b, &zx, d0, d1)?;
            let expected = match d1 {
                0 => Some(2 * sym_power_point_count(&zx, d0 as usize)),
                _ if d1 % 2 == 1 => Some(0),
                _ => None,
            };
            base.push(
                vec![json!(d0), json!(d1), json!(count.to_string()), json!(expected.map(|e| e.to_string()))],
                Some(expected.is_none_or(|e| e == count)),
            );
        }
        r.add(base);

        let eh = b.cover_character();
        let base_chars = characters(b.base_pic(), 1);
        let cover_chars = characters(b.cover_pic(), 2);
        let mut pairs: Vec<(TorusCharacter, TorusCharacter)> =
            vec![(eh.clone(), TorusCharacter::trivial(b.cover_pic().clone()))];
        for (i, e) in base_chars.iter().enumerate().step_by(3) {
            pairs.push((e.clone(), cover_chars[(5 * i + 3) % cover_chars.len()].clone()));
        }
        let checks = pairs
            .par_iter()
            .map(|(e, chi)| rho_h_factorization_check(&b, e, chi, dmax))
            .collect::<Result<Vec<_>>>()?;
        let mut fac = Section::new("rho_h_factorization", &["e", "chi_prime", "dmax"], Some("equal"));
        for ((e, chi), f) in pairs.iter().zip(checks) {
            let e_label = if e.label() == eh.label() { "E_H".to_string() } else { e.label() };
            fac.push(vec![json!(e_label), json!(chi.label()), json!(dmax)], Some(f.equal));
        }
        r.add(fac);

        let mut eis = Section::new("eisenstein", &["e1", "dmax"], Some("equal"));
        for e1 in characters(b.base_pic(), 2).iter().filter(|c| !c.is_trivial()).take(5) {
            eis.push(vec![json!(e1.label()), json!(dmax)], Some(eisenstein_factorization_check(e1, &zx, dmax)?.equal));
        }
        r.add(eis);

        let comps = hecke_components_h(&zx, &zc, d, cfg.m_max.unwrap_or(2));
        let mut hs = Section::new("hecke_components", &["component", "count"], None);
        for h in &comps {
            hs.push(vec![json!(h.to_text()), json!(h.count.to_string())], None);
        }
        r.add(hs);
        let mut mi = Section::new("m_independence", &["components"], Some("pass"));
        mi.push(vec![json!(comps.len())], Some(m_independent(&comps)));
        r.add(mi);
        Ok(r)
    }
}

pub struct HitchinStrata;

impl Experiment for HitchinStrata {
    fn name(&self) -> &'static str {
        "hitchin-strata"
    }

    fn about(&self) -> &'static str {
        "delta stratification over a field tower, component groups, torsor and Martens counts"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        let c = cfg.parse_curve()?;
        if !c.field().is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        let d = cfg.d.unwrap_or(2);
        let tower = cfg.tower.unwrap_or(3);
        let size = hitchin_base_size(&c, d)?;
        cfg.require(size)?;
        let s = stratify(&c, d, tower)?;
        let mut r = Report::new(self.name(), cfg);
        describe(&mut r, &c);
        r.note("d", d);
        r.note("tower", tower);

        let mut strata = Section::new("strata", &["q", "d", "delta", "count", "est_dim"], None);
        for (i, level) in s.levels.iter().enumerate() {
            for (delta, &n) in level.counts.iter().enumerate() {
                let est = (i > 0)
                    .then(|| growth_exponent(s.levels[i - 1].counts[delta], n, s.levels[i - 1].q, level.q))
                    .flatten()
                    .map(|e| format!("{e:.3}"));
                strata.push(vec![json!(level.q), json!(d), json!(delta), json!(n.to_string()), json!(est)], None);
            }
        }
        r.add(strata);

        let mut fits = Section::new("fits", &["delta", "expected", "estimate", "checked"], Some("pass"));
        for f in &s.fits {
            let est = f.estimates.last().copied().flatten().map(|e| format!("{e:.3}"));
            fits.push(vec![json!(f.delta), json!(f.expected), json!(est), json!(f.checked)], Some(f.pass));
        }
        r.add(fits);

        let mut hist: BTreeMap<(&'static str, bool), u128> = BTreeMap::new();
        let mut non_reduced = 0u128;
        for p in hitchin_base_enumerate(&c, d)? {
            match pi0_classify(&c, &p) {
                Ok(pi0) => *hist.entry((pi0.class.name(), pi0.split)).or_insert(0) += 1,
                Err(Error::NonReducedSpectralCurve) => non_reduced += 1,
                Err(e) => return Err(e),
            }
        }
        let mut pi0 = Section::new("pi0", &["class", "split", "count"], None);
        for ((class, split), n) in hist {
            pi0.push(vec![json!(class), json!(split), json!(n.to_string())], None);
        }
        pi0.push(vec![json!("non-reduced"), Value::Null, json!(non_reduced.to_string())], None);
        r.add(pi0);

        let mut torsor = Section::new("gm_torsor", &["d", "units", "fiber_product", "q"], Some("equal"));
        for k in 0..=d {
            let t = gm_torsor_check(&c, k)?;
            torsor.push(
                vec![json!(k), json!(t.units.to_string()), json!(t.fiber_product.to_string()), json!(t.q)],
                Some(t.equal),
            );
        }
        r.add(torsor);

        if c.genus() > 0 {
            let mut m = Section::new("martens", &["d", "count_q", "count_q2", "exponent", "expected"], Some("pass"));
            for k in 1..=d {
                let (a, b) = (martens_fiber_count(&c, k, 1)?, martens_fiber_count(&c, k, 2)?);
                let q = c.q() as u64;
                let e = growth_exponent(a, b, q, q * q);
                let expected = martens_dimension(c.genus(), k);
                m.push(
                    vec![
                        json!(k),
                        json!(a.to_string()),
                        json!(b.to_string()),
                        json!(e.map(|e| format!("{e:.3}"))),
                        json!(expected),
                    ],
                    Some(e.is_some_and(|e| (e - expected as f64).abs() <= EXPONENT_TOLERANCE)),
                );
            }
            r.add(m);
        }
        Ok(r)
    }
}

/// Runs the acceptance criteria concurrently and merges them in order;
/// the determinism criterion reruns the others and is optional here.
pub fn suite_report(cfg: &ExperimentConfig, with_determinism: bool) -> Result<Report> {
    let all: Vec<_> = criteria().into_iter().filter(|c| with_determinism || c.name != "determinism").collect();
    let outcomes: Vec<_> = all.par_iter().map(|c| (c.run)(cfg)).collect();
    let mut r = Report::new("suite", cfg);
    let mut s = Section::new("criteria", &["id", "name", "detail"], Some("pass"));
    for (c, o) in all.iter().zip(outcomes) {
        let (pass, detail) = match o {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        s.push(vec![json!(c.id), json!(c.name), json!(detail)], Some(pass));
    }
    r.note("criteria", all.len());
    r.add(s);
    Ok(r)
}

pub struct Suite;

impl Experiment for Suite {
    fn name(&self) -> &'static str {
        "suite"
    }

    fn about(&self) -> &'static str {
        "every acceptance criterion, aggregated"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report> {
        suite_report(cfg, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, curve: &str) -> Result<Report> {
        Registry::default().run(name, &ExperimentConfig::default().with_curve(curve))
    }

    #[test]
    fn registry_lists_commands() {
        let r = Registry::default();
        let names: Vec<_> = r.names().collect();
        assert_eq!(names, ["gl1-trace", "hecke", "hitchin-strata", "lfun", "suite", "torus-compare", "zeta"]);
        assert!(r.iter().all(|e| !e.about().is_empty()));
        let e = r.run("nope", &ExperimentConfig::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn zeta_command() {
        let r = run("zeta", "ell:q=3;a=1;b=0").unwrap();
        assert!(r.pass);
        assert_eq!(r.summary["numerator"], json!(["1", "0", "3"]));
        let r = run("zeta", "p1:q=5").unwrap();
        assert_eq!(r.summary["numerator"], json!(["1"]));
        assert_eq!(run("zeta", "ell:q=4;a=").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn lfun_command() {
        let r = run("lfun", "ell:q=3;a=1;b=0").unwrap();
        assert!(r.pass);
        assert_eq!(r.summary["characters"], json!(4));
        assert!(run("lfun", "p1:q=3").unwrap().pass);
        let mut cfg = ExperimentConfig::default().with_curve("p1:q=3");
        cfg.dmax = Some(30);
        assert_eq!(Registry::default().run("lfun", &cfg).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn gl1_command() {
        for (c, v) in [("ell:q=3;a=1;b=0", "2"), ("ell2:q=2;f=x^3", "1"), ("p1:q=7", "6")] {
            let r = run("gl1-trace", c).unwrap();
            assert!(r.pass);
            assert_eq!(r.sections[0].rows[0]["value"], json!(v));
        }
    }

    #[test]
    fn hecke_command_with_weights() {
        let mut cfg = ExperimentConfig::default().with_curve("ell:q=3;a=1;b=0");
        cfg.dmax = Some(3);
        cfg.weights = Some(vec![1, -1, 0]);
        let r = Registry::default().run("hecke", &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.section("kernel").unwrap().rows.len(), 8);
    }

    #[test]
    fn torus_command() {
        let r = run("torus-compare", "ell:q=5;a=-1;b=0").unwrap();
        assert!(r.pass, "{}", r.to_tsv());
        let base = r.section("base_counts").unwrap();
        assert_eq!(base.rows[1]["count"], json!("0"));
        assert_eq!(r.section("components").unwrap().rows[0]["components"], json!(2));
        assert_eq!(run("torus-compare", "p1:q=5").unwrap_err().exit_code(), 4);
    }

    #[test]
    fn hitchin_command() {
        let mut cfg = ExperimentConfig::default().with_curve("p1:q=3");
        cfg.d = Some(1);
        let r = Registry::default().run("hitchin-strata", &cfg).unwrap();
        assert!(r.pass, "{}", r.to_tsv());
        assert!(r.to_tsv().contains("# strata\nq\td\tdelta\tcount\test_dim\n3\t1\t0\t"));
        let pi0 = r.section("pi0").unwrap();
        let total: u128 = pi0.rows.iter().map(|row| row["count"].as_str().unwrap().parse::<u128>().unwrap()).sum();
        assert_eq!(total, hitchin_base_size(&Curve::parse_default("p1:q=3").unwrap(), 1).unwrap());
        assert_eq!(run("hitchin-strata", "ell2:q=2;f=x^3").unwrap_err().exit_code(), 4);
    }
}
