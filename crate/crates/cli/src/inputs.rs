use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use homforge_core::circuit::VarLabel;
use homforge_core::rings::{Field, FieldElem};

use crate::report::Report;

/// Reads `path`, recording its hash in the report header under `flag`.
pub fn load(report: &mut Report, flag: &str, path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    report.input(flag, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// Parses a file with `parse`, prefixing errors with the path.
pub fn load_with<T, E>(report: &mut Report, flag: &str, path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T>
where
    E: std::error::Error + Send + Sync + 'static,
{
    let text = load(report, flag, path)?;
    parse(&text).with_context(|| path.display().to_string())
}

/// `--field p^k` with an optional `--modulus c0,c1,...,ck`.
pub fn field(spec: &str, modulus: Option<&str>) -> Result<Field> {
    let coeffs = modulus
        .map(|m| {
            m.split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| anyhow!("bad modulus coefficient {c:?}")))
                .collect::<Result<Vec<u32>>>()
        })
        .transpose()?;
    Field::parse(spec, coeffs.as_deref()).with_context(|| format!("field {spec:?}"))
}

/// A field element written as its packed index (`0..q`) or as polynomial
/// basis coefficients `c0,c1,...`.
pub fn elem(field: &Field, s: &str) -> Result<FieldElem> {
    if s.contains(',') {
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| anyhow!("bad coefficient {c:?}")))
            .collect::<Result<Vec<u32>>>()?;
        return Ok(field.from_coeffs(&coeffs)?);
    }
    let v: u64 = s.parse().map_err(|_| anyhow!("bad field element {s:?}"))?;
    Ok(field.elem(v)?)
}

/// Assignment file: `<label> <value>` per line, `#` comments. Labels must
/// belong to `known`; repeated labels are rejected.
pub fn assignment(text: &str, field: &Field, known: &HashSet<VarLabel>) -> Result<HashMap<VarLabel, FieldElem>> {
    let mut out = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let [label, value] = body.split_whitespace().collect::<Vec<_>>()[..] else {
            bail!("line {line}: expected `<label> <value>`");
        };
        let label: VarLabel = label.parse().map_err(|e| anyhow!("line {line}: {e}"))?;
        if !known.contains(&label) {
            bail!("line {line}: {label} is not a variable of this polynomial");
        }
        let v = elem(field, value).with_context(|| format!("line {line}"))?;
        if out.insert(label.clone(), v).is_some() {
            bail!("line {line}: {label} assigned twice");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_by_index_and_coefficients() {
        let f4 = field("2^2", None).unwrap();
        assert_eq!(elem(&f4, "3").unwrap(), elem(&f4, "1,1").unwrap());
        assert!(elem(&f4, "4").is_err());
        assert!(field("6", None).is_err());
    }

    #[test]
    fn assignment_errors_carry_lines() {
        let f = field("3", None).unwrap();
        let known: HashSet<VarLabel> = [VarLabel::Yv(1), VarLabel::Yv(2)].into_iter().collect();
        let a = assignment("# values\nYv:1 2\n", &f, &known).unwrap();
        assert_eq!(a[&VarLabel::Yv(1)], f.elem(2).unwrap());
        let e = assignment("Yv:1 2\nYv:9 1\n", &f, &known).unwrap_err();
        assert!(e.to_string().starts_with("line 2"), "{e}");
        let e = assignment("Yv:1 2\nYv:1 1\n", &f, &known).unwrap_err();
        assert!(e.to_string().contains("twice"), "{e}");
    }
}
