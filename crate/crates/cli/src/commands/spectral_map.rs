use crate::config::RunConfig;
use crate::error::Result;
use crate::io::{Cell, Document, Kind, Table};
use susy_dirac_core::spectrum::{Branch, SpectralMap};

/// Contour samples per ellipse.
pub const CONTOUR_SAMPLES: usize = 720;

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::L => "L",
        Branch::R => "R",
        Branch::Real => "real",
    }
}

fn sign(plus: bool) -> &'static str {
    if plus {
        "+"
    } else {
        "-"
    }
}

const COLUMNS: [(&str, Kind); 6] = [
    ("lambda_re", Kind::Num),
    ("lambda_im", Kind::Num),
    ("branch", Kind::Text),
    ("sign", Kind::Text),
    ("energy", Kind::Num),
    ("marker", Kind::Text),
];

/// Tables `real_axis` (𝔏, both signs, with the extremum rows marked "max"
/// and "min") and `contour` (ℭ, empty at α = 0).
pub fn cmd_spectral_map(cfg: &RunConfig) -> Result<Document> {
    let (e1, e2) = cfg.factorization_energies();
    let alpha = cfg.alpha_value();
    let map = SpectralMap::new(e1, e2, alpha)?;
    let mut doc = Document::new("spectral-map");
    doc.param("eps1", e1);
    doc.param("eps2", e2);
    doc.param("alpha", alpha);
    let mut real = Table::new("real_axis", &COLUMNS);
    for lam in cfg.grid.points() {
        let branch = if lam <= e1 {
            "L"
        } else if lam >= e2 {
            "R"
        } else {
            continue;
        };
        for plus in [true, false] {
            real.push(vec![lam.into(), 0.0.into(), branch.into(), sign(plus).into(), map.energy_real(lam, plus).into(), "".into()]);
        }
    }
    if alpha > 0.0 {
        let ex = map.extrema();
        real.push(vec![ex.lambda_up.into(), 0.0.into(), "L".into(), "+".into(), ex.e_up.into(), "max".into()]);
        real.push(vec![ex.lambda_down.into(), 0.0.into(), "R".into(), "-".into(), ex.e_down.into(), "min".into()]);
    }
    let mut contour = Table::new("contour", &COLUMNS);
    for p in map.real_energy_contour(CONTOUR_SAMPLES)? {
        contour.push(vec![
            p.lambda.re.into(),
            p.lambda.im.into(),
            branch_name(p.branch).into(),
            sign(p.plus).into(),
            p.energy.into(),
            Cell::Text(String::new()),
        ]);
    }
    doc.tables.push(real);
    doc.tables.push(contour);
    Ok(doc)
}
