use crate::config::{ModelSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::io::{Cell, Document, Kind, Table};
use susy_dirac_core::models::*;
use susy_dirac_core::numkit::grid::Grid;
use susy_dirac_core::numkit::linalg::CMat;
use susy_dirac_core::spectrum::band_thresholds;

/// Entries (i ≤ j) of the 4×4 potential that are not identically zero on the
/// sample points, with a flag for a nonvanishing imaginary part.
fn nonzero_entries(samples: &[CMat]) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let re = samples.iter().fold(0.0f64, |m, v| m.max(v[(i, j)].re.abs()));
            let im = samples.iter().fold(0.0f64, |m, v| m.max(v[(i, j)].im.abs()));
            if re > 1e-14 || im > 1e-14 {
                out.push((i, j, im > 1e-14));
            }
        }
    }
    out
}

/// Quadrature grid for normalizing missing states.
fn norm_grid() -> Grid {
    Grid::with_spacing(-40.0, 40.0, 0.005).expect("valid box")
}

/// Tables `potential` (x, nonzero entries of the rotated 4×4 potential,
/// missing-state densities) and `levels` (finite-norm composite energies).
pub fn cmd_model(cfg: &RunConfig) -> Result<Document> {
    let alpha = cfg.alpha_value();
    let xs = cfg.grid.points();
    let mut doc = Document::new("model");
    let (comp, levels): (_, Vec<(String, f64, f64, bool)>) = match cfg.model {
        ModelSpec::FreeParticle { m, eps1 } => {
            doc.param("model", "free-particle");
            doc.param("m", m);
            doc.param("eps1", eps1);
            let model = FreeParticleModel::new(m, eps1)?;
            let asm = fp_assemble(model)?;
            let th = band_thresholds(&model.spectral_map(alpha)?, &model.bands());
            let lv = [("eps1", -eps1), ("eps2", eps1)]
                .into_iter()
                .map(|(l, e)| (l.to_string(), e, e, e <= th.e_max || e >= th.e_min))
                .collect();
            (asm.composite(alpha)?, lv)
        }
        ModelSpec::PoschlTeller { u0, kappa } => {
            doc.param("model", "poschl-teller");
            doc.param("u0", u0);
            doc.param("kappa", kappa);
            let model = PoschlTellerModel::new(u0, kappa)?;
            let lv = pt_composite_levels(&model, alpha)?.into_iter().map(|c| (c.label, c.lambda, c.energy, c.bic)).collect();
            (model.composite(alpha)?, lv)
        }
        ModelSpec::CustomSeeds { .. } => return Err(CliError::Usage("model needs a closed-form model".into())),
    };
    doc.param("alpha", alpha);
    let field = comp.rotated_potential();
    let samples: Vec<CMat> = xs.iter().map(|&x| field.eval(x)).collect();
    let entries = nonzero_entries(&samples);
    let names: Vec<String> = entries
        .iter()
        .flat_map(|&(i, j, im)| {
            let base = format!("V{}{}", i + 1, j + 1);
            if im {
                vec![base.clone(), format!("{base}_im")]
            } else {
                vec![base]
            }
        })
        .chain(["rho_missing1".to_string(), "rho_missing2".to_string()])
        .collect();
    let mut cols: Vec<(&str, Kind)> = vec![("x", Kind::Num)];
    cols.extend(names.iter().map(|n| (n.as_str(), Kind::Num)));
    let mut pot = Table::new("potential", &cols);
    let t = comp.transform();
    let g = norm_grid();
    let (m1, _) = t.missing_normalized(1, &g);
    let (m2, _) = t.missing_normalized(2, &g);
    for (x, v) in xs.iter().zip(&samples) {
        let mut row: Vec<Cell> = vec![(*x).into()];
        for &(i, j, im) in &entries {
            row.push(v[(i, j)].re.into());
            if im {
                row.push(v[(i, j)].im.into());
            }
        }
        row.push(m1(*x).v.norm_squared().into());
        row.push(m2(*x).v.norm_squared().into());
        pot.push(row);
    }
    let mut lt = Table::new("levels", &[("label", Kind::Text), ("lambda", Kind::Num), ("energy", Kind::Num), ("state", Kind::Text)]);
    for (label, lam, e, bic) in levels {
        lt.push(vec![label.into(), lam.into(), e.into(), if bic { "bic" } else { "bound" }.into()]);
    }
    doc.tables.push(pot);
    doc.tables.push(lt);
    Ok(doc)
}
