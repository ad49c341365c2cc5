//! Homomorphism files: one `generator = cycles` assignment per line.
//!
//! ```text
//! # trefoil onto S3
//! a = (1,2)
//! b = (1,3)
//! c = (2,3)
//! ```

use anyhow::{bail, Result};
use covers_core::perm::PermError;
use covers_core::{Permutation, Presentation};

/// Images of every generator of `pres`, padded to a common degree.
pub fn parse_hom(text: &str, pres: &Presentation) -> Result<Vec<Permutation>> {
    let mut images: Vec<Option<Permutation>> = vec![None; pres.ngens()];
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            bail!("line {line_no}, column 1: expected `generator = cycles`");
        };
        let name = line[..eq].trim();
        let Some(g) = pres.generator(name) else {
            let column = line.find(name).unwrap_or(0) + 1;
            bail!(
                "line {line_no}, column {column}: unknown generator {name:?}; the presentation has {}",
                pres.generator_names().join(", ")
            );
        };
        let rhs = &line[eq + 1..];
        let p = Permutation::parse_cycles(rhs, 1).map_err(|e| match e {
            PermError::Syntax { pos, msg } => {
                anyhow::anyhow!("line {line_no}, column {}: {msg}", eq + 2 + pos)
            }
            other => anyhow::anyhow!("line {line_no}: {other}"),
        })?;
        if images[g.zero_based()].replace(p).is_some() {
            bail!("line {line_no}, column 1: generator {name:?} assigned twice");
        }
    }
    let missing: Vec<&str> =
        images.iter().zip(pres.generator_names()).filter(|(p, _)| p.is_none()).map(|(_, n)| n.as_str()).collect();
    if !missing.is_empty() {
        bail!("no image given for {}", missing.join(", "));
    }
    let images: Vec<Permutation> = images.into_iter().flatten().collect();
    let degree = images.iter().map(Permutation::degree).max().unwrap_or(1);
    Ok(images.iter().map(|p| p.padded(degree)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres() -> Presentation {
        Presentation::free(vec!["a", "b"]).unwrap()
    }

    #[test]
    fn parses_with_comments() {
        let h = parse_hom("# S3\na = (1,2)  # first\n\nb = (1,2,3)\n", &pres()).unwrap();
        assert_eq!(h.len(), 2);
        assert!(h.iter().all(|p| p.degree() == 3));
    }

    #[test]
    fn reports_positions() {
        let err = parse_hom("a = (1,2)\nz = (1,2)\n", &pres()).unwrap_err().to_string();
        assert!(err.starts_with("line 2, column 1"), "{err}");
        let err = parse_hom("a = (1,x)\nb = ()\n", &pres()).unwrap_err().to_string();
        assert!(err.starts_with("line 1"), "{err}");
        let err = parse_hom("a = (1,2)\n", &pres()).unwrap_err().to_string();
        assert!(err.contains("no image given for b"), "{err}");
    }
}
