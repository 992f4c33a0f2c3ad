use crate::config::{ModelSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::io::{Document, Kind, Table};
use rayon::prelude::*;
use susy_dirac_core::models::*;
use susy_dirac_core::spectrum::{band_thresholds, bic_critical_alpha, crossing_alpha, BandStructure, CrossingKind, SpectralMap};

/// A level of ℍ₀ followed through the sweep: 𝔼^sign(λ), or fixed when `plus` is None.
#[derive(Debug, Clone)]
struct Curve {
    label: String,
    lambda: f64,
    plus: Option<bool>,
}

impl Curve {
    fn energy(&self, map: &SpectralMap) -> f64 {
        match self.plus {
            Some(p) => map.energy_real(self.lambda, p),
            None => self.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub kind: &'static str,
    pub alpha: f64,
    pub level_a: String,
    pub level_b: String,
    pub energy: f64,
    pub residual: f64,
    pub in_continuum: bool,
}

fn setup(cfg: &RunConfig) -> Result<(SpectralMap, BandStructure, Vec<Curve>)> {
    match cfg.model {
        ModelSpec::FreeParticle { m, eps1 } => {
            let model = FreeParticleModel::new(m, eps1)?;
            // the missing-state levels sit at the zeros of F and do not move
            let curves = vec![
                Curve { label: "eps1".into(), lambda: -eps1, plus: None },
                Curve { label: "eps2".into(), lambda: eps1, plus: None },
            ];
            Ok((model.spectral_map(0.0)?, model.bands(), curves))
        }
        ModelSpec::PoschlTeller { u0, kappa } => {
            let model = PoschlTellerModel::new(u0, kappa)?;
            let curves = pt_composite_levels(&model, 0.0)?
                .into_iter()
                .map(|c| Curve { label: c.label, lambda: c.lambda, plus: c.plus })
                .collect();
            Ok((model.spectral_map(0.0)?, model.bands()?, curves))
        }
        ModelSpec::CustomSeeds { .. } => Err(CliError::Usage("sweep needs a closed-form model".into())),
    }
}

fn in_continuum(map: &SpectralMap, bands: &BandStructure, e: f64) -> bool {
    let th = band_thresholds(map, bands);
    e >= th.e_min || e <= th.e_max
}

/// Coupling-driven events: a level meeting a continuum threshold ("bic") and
/// two levels meeting each other ("crossing"), with α ∈ [lo, hi].
fn events(map: &SpectralMap, bands: &BandStructure, curves: &[Curve], lo: f64, hi: f64) -> Result<Vec<Event>> {
    let (e1, e2) = (map.eps1(), map.eps2());
    let mut out: Vec<Event> = Vec::new();
    for c in curves {
        let plus = match c.plus {
            Some(p) => p,
            // fixed levels move only if they sit at a zero of F, where both signs agree
            None if c.lambda == e1 || c.lambda == e2 => true,
            None => continue,
        };
        let Ok(a) = bic_critical_alpha(map, c.lambda, bands, plus) else { continue };
        if a < lo || a > hi {
            continue;
        }
        let m = map.with_alpha(a)?;
        let th = band_thresholds(&m, bands);
        let upper = c.lambda > map.delta();
        let e = m.energy_real(c.lambda, plus);
        let edge = if upper { th.e_min } else { th.e_max };
        let ev = Event {
            kind: "bic",
            alpha: a,
            level_a: c.label.clone(),
            level_b: if upper { "E_min" } else { "E_max" }.into(),
            energy: e,
            residual: (e - edge).abs(),
            in_continuum: true,
        };
        // simultaneous events (chiral partners) share one row
        match out.iter_mut().find(|o| o.kind == "bic" && (o.alpha - a).abs() <= 1e-12) {
            Some(o) => {
                o.level_a = format!("{};{}", o.level_a, ev.level_a);
                o.level_b = format!("{};{}", o.level_b, ev.level_b);
                o.residual = o.residual.max(ev.residual);
            }
            None => out.push(ev),
        }
    }
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            let (Some(pa), Some(pb)) = (a.plus, b.plus) else { continue };
            let (lo_c, hi_c) = if a.lambda < b.lambda { (a, b) } else { (b, a) };
            let (sa, sb) = if a.lambda < b.lambda { (pa, pb) } else { (pb, pa) };
            let kind = match (sa, sb) {
                (true, false) => CrossingKind::PlusMinus,
                (false, false) => CrossingKind::MinusMinus,
                (true, true) => CrossingKind::PlusPlus,
                (false, true) => continue,
            };
            if lo_c.lambda == hi_c.lambda {
                continue;
            }
            let Ok(alpha) = crossing_alpha(lo_c.lambda, hi_c.lambda, kind, e1, e2) else { continue };
            if alpha < lo || alpha > hi {
                continue;
            }
            let m = map.with_alpha(alpha)?;
            let (ea, eb) = (lo_c.energy(&m), hi_c.energy(&m));
            out.push(Event {
                kind: "crossing",
                alpha,
                level_a: lo_c.label.clone(),
                level_b: hi_c.label.clone(),
                energy: 0.5 * (ea + eb),
                residual: (ea - eb).abs(),
                in_continuum: in_continuum(&m, bands, 0.5 * (ea + eb)),
            });
        }
    }
    out.sort_by(|x, y| x.alpha.total_cmp(&y.alpha).then(x.kind.cmp(y.kind)).then(x.level_a.cmp(&y.level_a)));
    Ok(out)
}

/// Public access to the event list of a configured sweep.
pub fn sweep_events(cfg: &RunConfig) -> Result<Vec<Event>> {
    let (map, bands, curves) = setup(cfg)?;
    let al = cfg.alpha.values();
    let (lo, hi) = al.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &a| (l.min(a), h.max(a)));
    events(&map, &bands, &curves, lo, hi)
}

/// Tables `levels` (per α and level), `thresholds` (per α) and `events`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Document> {
    let (map, bands, curves) = setup(cfg)?;
    let alphas = cfg.alpha.values();
    let mut doc = Document::new("sweep");
    match cfg.model {
        ModelSpec::FreeParticle { m, eps1 } => {
            doc.param("model", "free-particle");
            doc.param("m", m);
            doc.param("eps1", eps1);
        }
        ModelSpec::PoschlTeller { u0, kappa } => {
            doc.param("model", "poschl-teller");
            doc.param("u0", u0);
            doc.param("kappa", kappa);
        }
        ModelSpec::CustomSeeds { .. } => unreachable!("rejected by setup"),
    }
    let rows: Vec<Result<(f64, f64, f64, Vec<(String, f64, bool)>)>> = alphas
        .par_iter()
        .map(|&a| {
            let m = map.with_alpha(a)?;
            let th = band_thresholds(&m, &bands);
            let lv = curves
                .iter()
                .map(|c| {
                    let e = c.energy(&m);
                    (c.label.clone(), e, a > 0.0 && (e >= th.e_min || e <= th.e_max))
                })
                .collect();
            Ok((a, th.e_max, th.e_min, lv))
        })
        .collect();
    let mut levels = Table::new("levels", &[("alpha", Kind::Num), ("label", Kind::Text), ("energy", Kind::Num), ("state", Kind::Text)]);
    let mut thresholds = Table::new("thresholds", &[("alpha", Kind::Num), ("e_max", Kind::Num), ("e_min", Kind::Num)]);
    for r in rows {
        let (a, e_max, e_min, lv) = r?;
        thresholds.push(vec![a.into(), e_max.into(), e_min.into()]);
        for (label, e, bic) in lv {
            levels.push(vec![a.into(), label.into(), e.into(), if bic { "bic" } else { "bound" }.into()]);
        }
    }
    let (lo, hi) = alphas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &a| (l.min(a), h.max(a)));
    let mut ev = Table::new(
        "events",
        &[
            ("kind", Kind::Text),
            ("alpha", Kind::Num),
            ("level_a", Kind::Text),
            ("level_b", Kind::Text),
            ("energy", Kind::Num),
            ("residual", Kind::Num),
            ("in_continuum", Kind::Text),
        ],
    );
    for e in events(&map, &bands, &curves, lo, hi)? {
        ev.push(vec![e.kind.into(), e.alpha.into(), e.level_a.into(), e.level_b.into(), e.energy.into(), e.residual.into(), e.in_continuum.into()]);
    }
    doc.tables.push(levels);
    doc.tables.push(thresholds);
    doc.tables.push(ev);
    Ok(doc)
}
