//! Named instance corpus and parsing of matrices, weights and shifts.

use anyhow::{anyhow, bail, Result};
use diokit::linalg::TargetMatrix;
use diokit::numerics::{parse_cert_real, parse_rat, CertReal, Rat, WeightVector};


#[derive(Clone, Debug)]
pub struct Instance {
    pub matrix: TargetMatrix,
    /// Token strings, row by row, for provenance in reports.
    pub tokens: Vec<Vec<String>>,
}

impl Instance {
    pub fn named(name: &str) -> Result<Instance> {
        let token = match name {
            "phi" => "phi",
            "sqrt2" => "sqrt(2)",
            "sqrt3" => "sqrt(3)",
            "sqrt5" => "sqrt(5)",
            "liouville2" | "liouville(2)" => "liouville(2)",
            "half" => "1/2",
            _ => bail!("unknown instance `{name}`; known: phi, sqrt2, sqrt3, sqrt5, liouville2, half"),
        };
        Ok(Instance {
            matrix: TargetMatrix::scalar(parse_cert_real(token).map_err(|e| anyhow!(e))?),
            tokens: vec![vec![token.to_string()]],
        })
    }

    /// Rows separated by `;`, entries by `,`: e.g. `"sqrt(2),1/3;phi,0"`.
    pub fn from_matrix_arg(spec: &str) -> Result<Instance> {
        let mut rows = Vec::new();
        let mut tokens = Vec::new();
        for row in spec.split(';') {
            let mut entries = Vec::new();
            let mut row_tokens = Vec::new();
            for tok in row.split(',') {
                let tok = tok.trim();
                entries.push(parse_cert_real(tok).map_err(|e| anyhow!("entry `{tok}`: {e}"))?);
                row_tokens.push(tok.to_string());
            }
            rows.push(entries);
            tokens.push(row_tokens);
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            bail!("ragged matrix specification");
        }
        Ok(Instance {
            matrix: TargetMatrix::new(rows),
            tokens,
        })
    }

    pub fn resolve(name: Option<&str>, matrix: Option<&str>) -> Result<Instance> {
        match (name, matrix) {
            (_, Some(m)) => Self::from_matrix_arg(m),
            (Some(n), None) => Self::named(n),
            (None, None) => bail!("one of --instance or --matrix is required"),
        }
    }

    /// Entry tokens as a flat display string.
    pub fn describe(&self) -> String {
        self.tokens
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// `"uniform"` or a comma-separated list of rationals summing to 1.
pub fn parse_weights(spec: Option<&str>, dim: usize) -> Result<WeightVector> {
    match spec {
        None => Ok(WeightVector::uniform(dim)),
        Some(s) if s == "uniform" => Ok(WeightVector::uniform(dim)),
        Some(s) => {
            let parts: Result<Vec<Rat>> = s
                .split([',', ';'])
                .map(|t| parse_rat(t.trim()).map_err(|e| anyhow!("weight `{t}`: {e}")))
                .collect();
            let w = WeightVector::new(parts?)?;
            if w.dim() != dim {
                bail!("expected {dim} weights, got {}", w.dim());
            }
            Ok(w)
        }
    }
}

/// `"zero"`, or a comma-separated rational vector.
pub fn parse_theta(spec: Option<&str>, dim: usize) -> Result<Vec<Rat>> {
    match spec {
        None => Ok(vec![diokit::numerics::rat_int(0); dim]),
        Some(s) if s == "zero" => Ok(vec![diokit::numerics::rat_int(0); dim]),
        Some(s) => {
            let parts: Result<Vec<Rat>> = s
                .split(',')
                .map(|t| parse_rat(t.trim()).map_err(|e| anyhow!("theta `{t}`: {e}")))
                .collect();
            let v = parts?;
            if v.len() != dim {
                bail!("expected theta of dimension {dim}, got {}", v.len());
            }
            Ok(v)
        }
    }
}

/// Bounds like `1000000`, `1e6`, or `p/q`.
pub fn parse_bound(s: &str) -> Result<Rat> {
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let m = parse_rat(mant).map_err(|e| anyhow!(e))?;
        let e: u32 = exp.parse()?;
        let ten = Rat::from_integer(10.into());
        let mut acc = m;
        for _ in 0..e {
            acc *= &ten;
        }
        return Ok(acc);
    }
    parse_rat(s).map_err(|e| anyhow!(e))
}

/// Column tokens of a 1-row or 1-column instance, for the sweep paths.
pub fn as_vector(inst: &Instance) -> Option<Vec<CertReal>> {
    if inst.matrix.m == 1 {
        Some((0..inst.matrix.n).map(|j| inst.matrix.at(0, j).clone()).collect())
    } else if inst.matrix.n == 1 {
        Some((0..inst.matrix.m).map(|i| inst.matrix.at(i, 0).clone()).collect())
    } else {
        None
    }
}
