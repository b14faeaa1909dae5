//! Chain specification files: JSON with the coupling amplitudes at
//! non-negative distances, or the three nearest-neighbour parameters.

use crate::chain::CouplingSet;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

type C64 = Complex64;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainSpecFile {
    /// `{"xydm": {"gamma": g, "s": s, "h": h}}`
    XyDm { xydm: XyDmParams },
    /// Coupling lists indexed `l = 0..=L`; negative indices follow from the
    /// symmetry relations.
    Couplings {
        #[serde(rename = "L")]
        range: usize,
        #[serde(rename = "A_re")]
        a_re: Vec<f64>,
        #[serde(rename = "A_im")]
        a_im: Vec<f64>,
        #[serde(rename = "B_re")]
        b_re: Vec<f64>,
        #[serde(rename = "B_im")]
        b_im: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XyDmParams {
    pub gamma: f64,
    pub s: f64,
    pub h: f64,
}

impl ChainSpecFile {
    pub fn to_couplings(&self) -> Result<CouplingSet> {
        match self {
            ChainSpecFile::XyDm { xydm } => Ok(CouplingSet::xy_dm(xydm.gamma, xydm.s, xydm.h)),
            ChainSpecFile::Couplings {
                range,
                a_re,
                a_im,
                b_re,
                b_im,
            } => {
                let n = range + 1;
                if a_re.len() != n || a_im.len() != n || b_re.len() != n || b_im.len() != n {
                    return Err(Error::Usage(format!(
                        "coupling lists must have length L+1 = {n}"
                    )));
                }
                let a: Vec<C64> = a_re
                    .iter()
                    .zip(a_im)
                    .map(|(&re, &im)| C64::new(re, im))
                    .collect();
                let b: Vec<C64> = b_re
                    .iter()
                    .zip(b_im)
                    .map(|(&re, &im)| C64::new(re, im))
                    .collect();
                CouplingSet::from_upper(*range, &a, &b)
            }
        }
    }
}

pub fn load_chain(path: &Path) -> Result<CouplingSet> {
    let text = std::fs::read_to_string(path)?;
    let spec: ChainSpecFile = serde_json::from_str(&text)?;
    spec.to_couplings()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xydm_form_parses() {
        let spec: ChainSpecFile =
            serde_json::from_str(r#"{"xydm": {"gamma": 1.0, "s": 0.0, "h": 2.0}}"#).unwrap();
        let chain = spec.to_couplings().unwrap();
        assert_eq!(chain, CouplingSet::xy_dm(1.0, 0.0, 2.0));
    }

    #[test]
    fn coupling_lists_parse() {
        let text = r#"{
            "L": 1,
            "A_re": [-2.0, 1.0],
            "A_im": [0.0, -0.5],
            "B_re": [0.0, 0.7],
            "B_im": [0.0, 0.0]
        }"#;
        let spec: ChainSpecFile = serde_json::from_str(text).unwrap();
        let chain = spec.to_couplings().unwrap();
        assert_eq!(chain.a_at(0), C64::new(-2.0, 0.0));
        assert_eq!(chain.a_at(1), C64::new(1.0, -0.5));
        assert_eq!(chain.a_at(-1), C64::new(1.0, 0.5));
        assert_eq!(chain.b_at(-1), C64::new(-0.7, 0.0));
    }

    #[test]
    fn malformed_lengths_rejected() {
        let text = r#"{"L": 2, "A_re": [1.0], "A_im": [0.0], "B_re": [0.0], "B_im": [0.0]}"#;
        let spec: ChainSpecFile = serde_json::from_str(text).unwrap();
        assert!(spec.to_couplings().is_err());
    }
}
