//! Dipole species: a ladder of ground-to-excited transitions.
//!
//! Text format, one transition per line, natural units:
//!
//! ```text
//! # comment
//! E=0.0628318 d=(0,0,1)
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleTransition {
    energy: f64,
    dipole: [f64; 3],
}

impl DipoleTransition {
    pub fn new(energy: f64, dipole: [f64; 3]) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "transition energy must be > 0, got {energy}"
            )));
        }
        if !dipole.iter().all(|d| d.is_finite()) || dipole.iter().all(|d| *d == 0.0) {
            return Err(Error::InvalidInput(format!(
                "dipole vector must be finite and non-zero, got {dipole:?}"
            )));
        }
        Ok(Self { energy, dipole })
    }

    /// Transition with wavelength `lambda` (ħ = c = 1, so `E = 2π/λ`).
    pub fn from_wavelength(lambda: f64, dipole: [f64; 3]) -> Result<Self> {
        Self::new(2.0 * PI / lambda, dipole)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn dipole(&self) -> [f64; 3] {
        self.dipole
    }

    pub fn dipole_norm_sqr(&self) -> f64 {
        self.dipole.iter().map(|d| d * d).sum()
    }

    /// `λ_e = 2π ħc / E_e`.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.energy
    }

    /// `min(λ_e/a, λ_e/b)`; tight confinement needs this to be large.
    pub fn confinement_ratio(&self, geom: &Geometry) -> f64 {
        self.wavelength() / geom.a().max(geom.b())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    FixedVector,
    /// Random orientation: `<d_i d_j> = δ_ij |d|²/3`.
    #[default]
    IsotropicAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleSpecies {
    transitions: Vec<DipoleTransition>,
    orientation: Orientation,
}

impl DipoleSpecies {
    /// Image under the reflection `z → −z`.
    pub fn mirrored(&self) -> Self {
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                let [x, y, z] = t.dipole;
                DipoleTransition {
                    energy: t.energy,
                    dipole: [x, y, -z],
                }
            })
            .collect();
        Self {
            transitions,
            orientation: self.orientation,
        }
    }

    pub fn new(transitions: Vec<DipoleTransition>, orientation: Orientation) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidInput("a species needs at least one transition".into()));
        }
        Ok(Self {
            transitions,
            orientation,
        })
    }

    /// Single transition of wavelength `lambda` and dipole `dipole`.
    pub fn single(lambda: f64, dipole: [f64; 3], orientation: Orientation) -> Result<Self> {
        Self::new(vec![DipoleTransition::from_wavelength(lambda, dipole)?], orientation)
    }

    pub fn transitions(&self) -> &[DipoleTransition] {
        &self.transitions
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn min_confinement_ratio(&self, geom: &Geometry) -> f64 {
        self.transitions
            .iter()
            .map(|t| t.confinement_ratio(geom))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn parse(text: &str, orientation: Orientation) -> Result<Self> {
        let mut transitions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            transitions.push(parse_line(line).map_err(|message| Error::SpeciesParse { line: idx + 1, message })?);
        }
        if transitions.is_empty() {
            return Err(Error::SpeciesParse {
                line: 0,
                message: "no transitions found".into(),
            });
        }
        Self::new(transitions, orientation)
    }

    pub fn from_file(path: impl AsRef<Path>, orientation: Orientation) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::SpeciesParse {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text, orientation)
    }

    /// Serialize back to the text format.
    pub fn to_text(&self) -> String {
        self.transitions
            .iter()
            .map(|t| {
                let d = t.dipole;
                format!("E={:?} d=({:?},{:?},{:?})\n", t.energy, d[0], d[1], d[2])
            })
            .collect()
    }
}

fn parse_line(line: &str) -> std::result::Result<DipoleTransition, String> {
    let e_pos = line.find("E=").ok_or("missing 'E=<value>'")?;
    let d_pos = line.find("d=").ok_or("missing 'd=(<dx>,<dy>,<dz>)'")?;
    let e_text = if e_pos < d_pos {
        &line[e_pos + 2..d_pos]
    } else {
        &line[e_pos + 2..]
    };
    let energy: f64 = e_text
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse energy '{}'", e_text.trim()))?;
    let d_text = line[d_pos + 2..].trim_start();
    let open = d_text.strip_prefix('(').ok_or("dipole must be written as (dx,dy,dz)")?;
    let close = open.find(')').ok_or("unterminated dipole vector")?;
    let comps: Vec<&str> = open[..close].split(',').map(str::trim).collect();
    if comps.len() != 3 {
        return Err(format!("dipole needs 3 components, got {}", comps.len()));
    }
    let mut d = [0.0; 3];
    for (slot, c) in d.iter_mut().zip(&comps) {
        *slot = c.parse().map_err(|_| format!("cannot parse dipole component '{c}'"))?;
    }
    DipoleTransition::new(energy, d).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let text = "# two levels\n\nE=0.0628 d=(0,0,1)\n  E=0.1 d=( 1.5 , -2, 0.25 )\n";
        let s = DipoleSpecies::parse(text, Orientation::FixedVector).unwrap();
        assert_eq!(s.transitions().len(), 2);
        assert_eq!(s.transitions()[1].dipole(), [1.5, -2.0, 0.25]);
        let again = DipoleSpecies::parse(&s.to_text(), Orientation::FixedVector).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn reports_line_numbers() {
        let err = DipoleSpecies::parse("# c\nE=0.1 d=(0,0,1)\nE=abc d=(0,0,1)\n", Orientation::default()).unwrap_err();
        assert_eq!(
            err,
            Error::SpeciesParse {
                line: 3,
                message: "cannot parse energy 'abc'".into()
            }
        );
        assert!(matches!(
            DipoleSpecies::parse("E=1 d=(0,0)", Orientation::default()),
            Err(Error::SpeciesParse { line: 1, .. })
        ));
        assert!(matches!(
            DipoleSpecies::parse("E=-1 d=(0,0,1)", Orientation::default()),
            Err(Error::SpeciesParse { line: 1, .. })
        ));
        assert!(DipoleSpecies::parse("# nothing\n", Orientation::default()).is_err());
    }

    #[test]
    fn wavelength_and_ratio() {
        let t = DipoleTransition::from_wavelength(100.0, [0.0, 0.0, 1.0]).unwrap();
        assert!((t.wavelength() - 100.0).abs() < 1e-12);
        let g = Geometry::new(1.0, 2.0).unwrap();
        assert!((t.confinement_ratio(&g) - 50.0).abs() < 1e-12);
        assert!(DipoleTransition::new(1.0, [0.0; 3]).is_err());
    }
}
