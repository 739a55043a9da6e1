//! The quadratic ideal class monoid, explicitly.
//!
//! For `chi = (x-a)(x-b)` the classes are represented by the ideals
//! `(x-b, u)` with `u` in `{1, ..., floor((b-a)/2)} U {b-a}`; the product
//! rule is `(x-b, u)(x-b, v) ~ (x-b, uv / gcd(u, v, a-b))`, and
//! `(x-b, w) = (x-b, -w) ~ (x-b, w +- (b-a))` folds any integer onto a
//! representative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::lattice::LatticeIdeal;
use crate::roots::RootConfig;
use crate::Result;

/// The canonical representative set
/// `{1, ..., floor((b-a)/2)} U {b-a}`, ascending.
pub fn representatives(cfg: &RootConfig) -> Result<Vec<BigInt>> {
    ensure_quadratic(cfg)?;
    let gap = cfg.diff(0, 1);
    let half = gap.div_floor(&BigInt::from(2));
    let mut out = Vec::new();
    let mut u = BigInt::one();
    while u <= half {
        out.push(u.clone());
        u += 1;
    }
    out.push(gap);
    Ok(out)
}

/// Folds an arbitrary integer `w` onto its representative:
/// reduce modulo `b-a`, identify `w` with `-w`, map `0` to `b-a`.
pub fn fold(cfg: &RootConfig, w: &BigInt) -> Result<BigInt> {
    ensure_quadratic(cfg)?;
    let gap = cfg.diff(0, 1);
    let r = w.mod_floor(&gap);
    if r.is_zero() {
        return Ok(gap);
    }
    let mirrored = &gap - &r;
    Ok(r.min(mirrored))
}

/// Product rule of the monoid on arbitrary integers `u`, `v` (nonzero mod
/// `b-a` or equal to `b-a`): representative of
/// `(x-b, uv / gcd(u, v, a-b))`.
pub fn product(cfg: &RootConfig, u: &BigInt, v: &BigInt) -> Result<BigInt> {
    ensure_quadratic(cfg)?;
    let gap = cfg.diff(0, 1);
    let g = u.gcd(v).gcd(&gap);
    let w = (u * v) / g;
    fold(cfg, &w)
}

/// The full Cayley table over the canonical representatives.
pub fn cayley_table(cfg: &RootConfig) -> Result<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let reps = representatives(cfg)?;
    let mut table = Vec::with_capacity(reps.len());
    for u in &reps {
        let mut row = Vec::with_capacity(reps.len());
        for v in &reps {
            row.push(product(cfg, u, v)?);
        }
        table.push(row);
    }
    Ok((reps, table))
}

/// The ideal `(x-b, u)` as a lattice in evaluation coordinates: the
/// `Z`-span of `(b-a, 0)`, `(u, u)` and `(0, u(b-a))`.
pub fn class_ideal(cfg: &RootConfig, u: &BigInt) -> Result<LatticeIdeal> {
    ensure_quadratic(cfg)?;
    if u.is_zero() {
        return Err(Error::InvalidInput(
            "use u = b-a for the class of (x-b, b-a)".into(),
        ));
    }
    let gap = cfg.diff(0, 1);
    let generators = vec![
        vec![gap.clone(), BigInt::zero()],
        vec![u.clone(), u.clone()],
        vec![BigInt::zero(), u * &gap],
    ];
    LatticeIdeal::from_generators(cfg, BigInt::one(), &generators)
}

fn ensure_quadratic(cfg: &RootConfig) -> Result<()> {
    if cfg.n() != 2 {
        return Err(Error::UnsupportedDegree {
            op: "quadratic monoid",
            n: cfg.n(),
        });
    }
    Ok(())
}
