//! Named matrix modules and nilpotent Lie algebras.

use crate::error::{invalid, Result};
use crate::matmodule::{direct_sum, structure_constants, MatrixModule, StructureConstants};
use crate::ring_zpn::IntMatrix;

/// Splits `name(a,b)` into the name and its integer arguments.
pub fn parse_key(key: &str) -> Result<(String, Vec<usize>)> {
    let key = key.trim();
    let Some(open) = key.find('(') else {
        return Ok((key.to_string(), Vec::new()));
    };
    if !key.ends_with(')') {
        return invalid(format!("malformed key {key:?}"));
    }
    let name = key[..open].trim().to_string();
    let inner = &key[open + 1..key.len() - 1];
    let args = inner
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| crate::AskError::InvalidInput(format!("bad argument {s:?} in {key:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((name, args))
}

fn e(n: usize, i: usize, j: usize) -> IntMatrix {
    IntMatrix::unit(n, n, i, j, 1)
}

fn sum(terms: &[(i64, usize, usize)], rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for &(c, i, j) in terms {
        let v = m.get(i, j) + c;
        m.set(i, j, v);
    }
    m
}

fn build(d: usize, e_: usize, gens: Vec<IntMatrix>, label: String) -> Result<MatrixModule> {
    MatrixModule::new(d, e_, &gens, Some(&label))
}

fn one_arg(name: &str, args: &[usize]) -> Result<usize> {
    match args {
        [d] if *d >= 1 => Ok(*d),
        _ => invalid(format!("{name} takes one positive size argument")),
    }
}

/// Module for a catalog key such as `so(3)`, `mat(2,3)`, `band(2)` or `L_{4,3}`.
pub fn catalog_module(key: &str) -> Result<MatrixModule> {
    if key.trim().starts_with("L_") {
        return match lie_algebra(key)?.realization {
            Some(m) => Ok(m),
            None => invalid(format!("{key} has no matrix realisation; use its structure constants")),
        };
    }
    let (name, args) = parse_key(key)?;
    match name.as_str() {
        "mat" => match args[..] {
            [d, e_] if d >= 1 && e_ >= 1 => {
                let gens = (0..d).flat_map(|i| (0..e_).map(move |j| IntMatrix::unit(d, e_, i, j, 1))).collect();
                build(d, e_, gens, format!("mat({d},{e_})"))
            }
            _ => invalid("mat takes two positive sizes"),
        },
        "zero" => match args[..] {
            [d, e_] => Ok(MatrixModule::zero(d, e_)),
            _ => invalid("zero takes two sizes"),
        },
        "gl" => {
            let d = one_arg("gl", &args)?;
            let gens = (0..d).flat_map(|i| (0..d).map(move |j| e(d, i, j))).collect();
            build(d, d, gens, format!("gl({d})"))
        }
        "sl" => {
            let d = one_arg("sl", &args)?;
            let mut gens = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        gens.push(e(d, i, j));
                    }
                }
            }
            for i in 0..d.saturating_sub(1) {
                gens.push(sum(&[(1, i, i), (-1, i + 1, i + 1)], d, d));
            }
            build(d, d, gens, format!("sl({d})"))
        }
        "so" => {
            let d = one_arg("so", &args)?;
            let mut gens = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    gens.push(sum(&[(1, i, j), (-1, j, i)], d, d));
                }
            }
            build(d, d, gens, format!("so({d})"))
        }
        "sp" => {
            let n = one_arg("sp", &args)?;
            if n % 2 == 1 {
                return invalid(format!("sp({n}) needs an even size"));
            }
            let h = n / 2;
            let mut gens = Vec::new();
            for i in 0..h {
                for j in 0..h {
                    gens.push(sum(&[(1, i, j), (-1, h + j, h + i)], n, n));
                }
                gens.push(e(n, i, h + i));
                gens.push(e(n, h + i, i));
                for j in i + 1..h {
                    gens.push(sum(&[(1, i, h + j), (1, j, h + i)], n, n));
                    gens.push(sum(&[(1, h + i, j), (1, h + j, i)], n, n));
                }
            }
            build(n, n, gens, format!("sp({n})"))
        }
        "sym" => {
            let d = one_arg("sym", &args)?;
            let mut gens = Vec::new();
            for i in 0..d {
                gens.push(e(d, i, i));
                for j in i + 1..d {
                    gens.push(sum(&[(1, i, j), (1, j, i)], d, d));
                }
            }
            build(d, d, gens, format!("sym({d})"))
        }
        "n" | "tr" | "diag" => {
            let d = one_arg(&name, &args)?;
            let mut gens = Vec::new();
            for i in 0..d {
                for j in i..d {
                    let keep = match name.as_str() {
                        "n" => j > i,
                        "tr" => true,
                        _ => j == i,
                    };
                    if keep {
                        gens.push(e(d, i, j));
                    }
                }
            }
            if gens.is_empty() {
                return Ok(MatrixModule::zero(d, d).with_label(&format!("{name}({d})")));
            }
            build(d, d, gens, format!("{name}({d})"))
        }
        "band" => {
            let r = one_arg("band", &args)?;
            let rows = 2 * r - 1;
            let gens = (0..r)
                .map(|k| {
                    let mut m = IntMatrix::zeros(rows, r);
                    for j in 0..r {
                        m.set(j + k, j, 1.into());
                    }
                    m
                })
                .collect();
            build(rows, r, gens, format!("band({r})"))
        }
        "ex_unbounded" => {
            // [[a, b, a], [b, c, d], [a, d, c]]
            let gens = vec![
                sum(&[(1, 0, 0), (1, 0, 2), (1, 2, 0)], 3, 3),
                sum(&[(1, 0, 1), (1, 1, 0)], 3, 3),
                sum(&[(1, 1, 1), (1, 2, 2)], 3, 3),
                sum(&[(1, 1, 2), (1, 2, 1)], 3, 3),
            ];
            build(3, 3, gens, "ex_unbounded".into())
        }
        "ex_elliptic" => {
            // [[z, x, y], [x, z, 0], [y, 0, x]]
            let gens = vec![
                sum(&[(1, 0, 1), (1, 1, 0), (1, 2, 2)], 3, 3),
                sum(&[(1, 0, 2), (1, 2, 0)], 3, 3),
                sum(&[(1, 0, 0), (1, 1, 1)], 3, 3),
            ];
            build(3, 3, gens, "ex_elliptic".into())
        }
        "ex_non_lie" => {
            // the x2 and x3 generators carry entries 1/2; they are stored doubled,
            // which spans the same lattice over Z_(p) for every odd p
            let gens = vec![
                sum(&[(1, 0, 5), (1, 1, 2), (1, 2, 3), (1, 3, 4)], 6, 6),
                sum(&[(2, 0, 1), (1, 1, 3), (2, 4, 5)], 6, 6),
                sum(&[(-2, 0, 2), (-1, 1, 4), (2, 3, 5)], 6, 6),
                sum(&[(1, 2, 5)], 6, 6),
                sum(&[(1, 1, 5)], 6, 6),
            ];
            build(6, 6, gens, "ex_non_lie".into())
        }
        _ => invalid(format!("unknown catalog module {key:?}")),
    }
}

/// A nilpotent Lie algebra from the classification tables, with a faithful
/// nilpotent matrix realisation when one is recorded.
#[derive(Debug, Clone)]
pub struct LieAlgebraEntry {
    pub key: String,
    pub constants: StructureConstants,
    pub realization: Option<MatrixModule>,
}

impl LieAlgebraEntry {
    pub fn dim(&self) -> usize {
        self.constants.dim
    }
}

/// Keys of the tabulated nilpotent Lie algebras available here.
pub const LIE_KEYS: &[&str] = &[
    "L_{1,1}", "L_{2,1}", "L_{3,1}", "L_{3,2}", "L_{4,1}", "L_{4,2}", "L_{4,3}", "L_{5,1}", "L_{5,2}", "L_{5,3}",
    "L_{5,4}", "L_{5,5}", "L_{5,6}", "L_{5,7}", "L_{5,8}", "L_{5,9}", "L_{6,19}(-1)",
];

fn abelian_realization(k: usize) -> MatrixModule {
    let n = k + 1;
    let gens: Vec<IntMatrix> = (1..n).map(|j| e(n, 0, j)).collect();
    MatrixModule::new(n, n, &gens, Some(&format!("L_{{{k},1}}"))).expect("square")
}

fn l56_realization() -> MatrixModule {
    // x2 and x3 doubled, as for ex_non_lie
    let gens = vec![
        sum(&[(1, 0, 1), (1, 1, 2), (1, 2, 3)], 5, 5),
        sum(&[(1, 0, 2), (2, 3, 4)], 5, 5),
        sum(&[(-1, 0, 3), (2, 2, 4)], 5, 5),
        sum(&[(1, 1, 4)], 5, 5),
        sum(&[(1, 0, 4)], 5, 5),
    ];
    MatrixModule::new(5, 5, &gens, Some("L_{5,6}")).expect("square")
}

fn l43_realization() -> MatrixModule {
    let gens = vec![sum(&[(1, 0, 1), (1, 1, 2), (1, 2, 3)], 4, 4), e(4, 2, 3), e(4, 1, 3), e(4, 0, 3)];
    MatrixModule::new(4, 4, &gens, Some("L_{4,3}")).expect("square")
}

pub fn lie_algebra(key: &str) -> Result<LieAlgebraEntry> {
    let key = key.trim();
    let sc = StructureConstants::from_brackets;
    let (constants, realization) = match key {
        "L_{1,1}" => (StructureConstants::abelian(1), Some(abelian_realization(1))),
        "L_{2,1}" => (StructureConstants::abelian(2), Some(abelian_realization(2))),
        "L_{3,1}" => (StructureConstants::abelian(3), Some(abelian_realization(3))),
        "L_{4,1}" => (StructureConstants::abelian(4), Some(abelian_realization(4))),
        "L_{5,1}" => (StructureConstants::abelian(5), Some(abelian_realization(5))),
        "L_{3,2}" => (sc(3, &[(1, 2, &[(3, 1)])]), Some(catalog_module("n(3)")?.with_label("L_{3,2}"))),
        "L_{4,2}" => {
            let r = direct_sum(&catalog_module("n(3)")?, &abelian_realization(1)).with_label("L_{4,2}");
            (sc(4, &[(1, 2, &[(3, 1)])]), Some(r))
        }
        "L_{4,3}" => (sc(4, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)])]), Some(l43_realization())),
        "L_{5,2}" => (sc(5, &[(1, 2, &[(3, 1)])]), None),
        "L_{5,3}" => (sc(5, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)])]), None),
        "L_{5,4}" => (sc(5, &[(1, 2, &[(5, 1)]), (3, 4, &[(5, 1)])]), None),
        "L_{5,5}" => (sc(5, &[(1, 2, &[(3, 1)]), (1, 3, &[(5, 1)]), (2, 4, &[(5, 1)])]), None),
        "L_{5,6}" => (
            sc(5, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)]), (1, 4, &[(5, 1)]), (2, 3, &[(5, 1)])]),
            Some(l56_realization()),
        ),
        "L_{5,7}" => (sc(5, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)]), (1, 4, &[(5, 1)])]), None),
        "L_{5,8}" => (sc(5, &[(1, 2, &[(4, 1)]), (1, 3, &[(5, 1)])]), None),
        "L_{5,9}" => (sc(5, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)]), (2, 3, &[(5, 1)])]), None),
        "L_{6,19}(-1)" => {
            let r = catalog_module("n(4)")?.with_label("L_{6,19}(-1)");
            (structure_constants(&r)?, Some(r))
        }
        _ => return invalid(format!("unknown Lie algebra {key:?}")),
    };
    Ok(LieAlgebraEntry { key: key.to_string(), constants, realization })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let cases = [
            ("gl(3)", 9),
            ("sl(3)", 8),
            ("so(4)", 6),
            ("sp(4)", 10),
            ("sp(2)", 3),
            ("sym(3)", 6),
            ("n(4)", 6),
            ("tr(3)", 6),
            ("diag(3)", 3),
            ("band(3)", 3),
            ("mat(2,3)", 6),
            ("ex_unbounded", 4),
            ("ex_elliptic", 3),
            ("ex_non_lie", 5),
        ];
        for (k, ell) in cases {
            assert_eq!(catalog_module(k).unwrap().ell(), ell, "{k}");
        }
        assert!(catalog_module("sp(3)").is_err());
        assert!(catalog_module("nonsense(2)").is_err());
    }

    #[test]
    fn sp2_is_sl2() {
        assert!(catalog_module("sp(2)").unwrap().same_lattice(&catalog_module("sl(2)").unwrap()));
    }

    #[test]
    fn lie_tables_are_lie_algebras() {
        for k in LIE_KEYS {
            let entry = lie_algebra(k).unwrap();
            assert!(entry.constants.satisfies_jacobi(), "{k}");
            if let Some(r) = &entry.realization {
                assert_eq!(r.ell(), entry.dim(), "{k}");
                let derived = structure_constants(r).unwrap();
                assert!(derived.satisfies_jacobi(), "{k}");
            }
        }
    }
}
