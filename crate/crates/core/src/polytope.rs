use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{fmt_rat, rat, BPoly, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeData {
    /// Counterclockwise, starting from the lowest leftmost vertex.
    pub vertices: Vec<(i64, i64)>,
    /// `deg_x f(x, 0)`; 0 when y divides f.
    pub a: usize,
    /// `deg_x lc_y(f)`
    pub b: usize,
    pub c: usize,
    pub d_x: usize,
    pub d_y: usize,
    pub normal_position: bool,
    pub two_volume: i64,
}

/// The edge polynomial `x^b (alpha*y^p + beta*x^q)^n`, scaled by `scale`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharData {
    pub p: usize,
    pub q: i64,
    pub n: usize,
    #[serde(serialize_with = "ser_rat")]
    pub alpha: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub beta: Rat,
    pub b: usize,
    #[serde(serialize_with = "ser_rat")]
    pub scale: Rat,
}

pub fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull (monotone chain), counterclockwise, collinear points dropped.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area (shoelace).
pub fn two_area(vertices: &[(i64, i64)]) -> i64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

pub fn generic_polytope(f: &BPoly) -> Result<PolytopeData> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive {
            content: f.content()?.to_string(),
        });
    }
    let d_y = f.d_y();
    let mut pts: Vec<(i64, i64)> = f.support().map(|(i, j, _)| (i as i64, j as i64)).collect();
    pts.push((0, 0));
    pts.push((0, d_y as i64));
    let vertices = convex_hull(&pts);
    let a = f.const_y().deg().unwrap_or(0);
    let b = f.lc_y().deg().unwrap_or(0);
    Ok(PolytopeData {
        two_volume: two_area(&vertices),
        vertices,
        a,
        b,
        c: a.min(b),
        d_x: f.d_x(),
        d_y,
        normal_position: b <= a,
    })
}

fn binomial(n: usize, k: usize) -> Rat {
    let mut r = rat(1);
    for i in 0..k {
        r = r * rat((n - i) as i64) / rat((i + 1) as i64);
    }
    r
}

/// Characteristic data of the edge joining `(a, 0)` and `(b, d_y)`.
pub fn edge_char_data(f: &BPoly) -> Result<CharData> {
    let d_y = f.d_y();
    if f.is_zero() || d_y == 0 {
        return Err(Error::DegreeZeroInY);
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive {
            content: f.content()?.to_string(),
        });
    }
    let Some(a) = f.const_y().deg() else {
        return Err(Error::NotUnibranchEdge("y divides f".into()));
    };
    let b = f.lc_y().deg().expect("nonzero leading coefficient");
    let (ai, bi, dy) = (a as i64, b as i64, d_y as i64);
    let mut on_edge = vec![Rat::zero(); d_y + 1];
    for (i, j, c) in f.support() {
        let side = (bi - ai) * j as i64 - dy * (i as i64 - ai);
        if side < 0 {
            return Err(Error::NotUnibranchEdge(format!(
                "monomial x^{i}*y^{j} lies beyond the segment from ({a},0) to ({b},{d_y})"
            )));
        }
        if side == 0 {
            on_edge[j] = c.clone();
        }
    }
    let diff = ai - bi;
    let n = if diff == 0 { d_y } else { (d_y as i64).gcd(&diff.abs()) as usize };
    let p = d_y / n;
    let q = diff / n as i64;
    let mut e = Vec::with_capacity(n + 1);
    for (j, c) in on_edge.iter().enumerate() {
        if j % p == 0 {
            e.push(c.clone());
        } else if !c.is_zero() {
            return Err(Error::NotUnibranchEdge(format!(
                "edge monomial with y-exponent {j} is not a multiple of {p}"
            )));
        }
    }
    let scale = e[n].clone();
    let beta = &e[n - 1] / (rat(n as i64) * &scale);
    for (k, ek) in e.iter().enumerate() {
        let expect = &scale * binomial(n, k) * num_traits::pow(beta.clone(), n - k);
        if *ek != expect {
            return Err(Error::NotUnibranchEdge(format!(
                "edge polynomial is not a perfect {n}-th power of a binomial"
            )));
        }
    }
    if beta.is_zero() {
        return Err(Error::NotUnibranchEdge("degenerate edge binomial".into()));
    }
    Ok(CharData {
        p,
        q,
        n,
        alpha: rat(1),
        beta,
        b,
        scale,
    })
}
