//! Re-checks a certificate from its artifacts alone, using direct
//! polynomial arithmetic rather than the linear algebra that produced it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Status};
use super::pipeline;
use crate::error::Result;
use crate::ffla::FieldCtx;
use crate::mpoly::MPoly;
use crate::syzygy::t2_compute;
use crate::trivector::{compose, peskine_test};
use crate::xquad::{gram_of, quad_basis};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, ok: bool, detail: String) {
        self.items.push(VerifyItem {
            name: name.to_string(),
            ok,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }
}

/// Independent checks on the stored artifacts. Absent artifacts are not
/// reported.
pub fn verify(cert: &Certificate) -> Result<VerifyReport> {
    let f = FieldCtx::new(cert.config.p)?;
    let a = &cert.artifacts;
    let mut rep = VerifyReport::default();

    if let Some(v10) = &a.v10 {
        let bad = a
            .points
            .iter()
            .filter(|p| !v10.vanishes_at(&f, &p.coords))
            .count();
        rep.push(
            "points_on_x",
            bad == 0,
            format!("{} points, {bad} off X", a.points.len()),
        );
        let bad = a
            .rulings
            .iter()
            .filter(|l| (0..3).any(|s| !v10.vanishes_at(&f, &l.point(&f, s, 1))))
            .count();
        rep.push(
            "rulings_on_x",
            bad == 0,
            format!("{} rulings, {bad} off X", a.rulings.len()),
        );
        rep.push(
            "v10_dim",
            v10.dim() == 10,
            format!("dimension {}", v10.dim()),
        );

        if let Some(syz) = &a.v8 {
            // Σ_a ℓ_{a,k} Q_a must vanish as a cubic
            let qs = v10.polys();
            let nonzero = (0..syz.dim())
                .filter(|&k| {
                    let mut c = MPoly::zero(10, 3);
                    for (ai, q) in qs.iter().enumerate() {
                        c = c.add(&f, &MPoly::linear(syz.linear_form(k, ai)).mul(&f, q));
                    }
                    !c.is_zero()
                })
                .count();
            rep.push(
                "syzygies_as_cubics",
                syz.dim() == 8 && nonzero == 0,
                format!("{} syzygies, {nonzero} nonzero cubics", syz.dim()),
            );

            if let Some(phi) = &a.phi {
                let skew = phi.phi.is_skew(&f);
                let inv = phi.phi.det(&f) != 0;
                rep.push(
                    "phi_skew_invertible",
                    skew && inv,
                    format!("skew {skew}, invertible {inv}"),
                );
                if let Some(t2) = &a.t2 {
                    let again = t2_compute(&f, v10, syz, phi)?;
                    rep.push(
                        "t2_recomputed",
                        &again == t2,
                        "t2 rebuilt from the syzygies and the form".into(),
                    );
                }
            }
        }
    }
    if let (Some(t1), Some(t2)) = (&a.t1, &a.t2) {
        rep.push(
            "t2_t1_compose",
            compose(&f, t2, t1).is_zero(),
            "t2 composed with t1".into(),
        );
        let r = t1.flattening(&f).rank(&f);
        rep.push("t1_flattening", r == 10, format!("rank {r}"));
    }
    if let Some(pencil) = &a.pencil {
        let b = quad_basis();
        let v = pencil.vectors();
        let ranks: Vec<usize> = if v.len() == 2 {
            (0..4u64)
                .map(|s| {
                    let q: Vec<u64> = v[0]
                        .iter()
                        .zip(&v[1])
                        .map(|(&x, &y)| f.mul_add(x, s, y))
                        .collect();
                    gram_of(&f, &b, &q).rank(&f)
                })
                .collect()
        } else {
            vec![]
        };
        rep.push(
            "pencil_rank_8",
            !ranks.is_empty() && ranks.iter().all(|&r| r == 8),
            format!("ranks {ranks:?}"),
        );
    }
    if let Some(t2) = &a.t2 {
        let ranks: Vec<usize> = a
            .peskine_t2
            .iter()
            .map(|q| peskine_test(&f, t2, q).0)
            .collect();
        rep.push(
            "peskine_rank_6",
            ranks.iter().all(|&r| r == 6),
            format!("ranks {ranks:?}"),
        );
    }
    Ok(rep)
}

/// Rerun the configuration stored in `cert` and compare the canonical JSON
/// with timings removed.
pub fn rerun_matches(cert: &Certificate) -> Result<bool> {
    let (mut again, _) = pipeline::run(&cert.config)?;
    let mut orig = cert.clone();
    orig.timings = None;
    again.timings = None;
    Ok(orig.to_json()? == again.to_json()?)
}

/// Human-readable summary: one line per check and per criterion.
pub fn report(cert: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}, rng seed = {}, model seed = {}",
        cert.config.p,
        cert.config.rng_seed,
        cert.config.model_seed()
    );
    for c in &cert.checks {
        let crit = c
            .criterion
            .map(|n| format!("[{n:>2}]"))
            .unwrap_or_else(|| "    ".into());
        let _ = writeln!(
            s,
            "{crit} {:<12} {:<36} {}",
            c.status.label(),
            c.id,
            c.value
        );
        if let Some(n) = &c.note {
            let _ = writeln!(s, "     {:<12} note: {n}", "");
        }
    }
    let mut crits: Vec<u8> = cert.checks.iter().filter_map(|c| c.criterion).collect();
    crits.sort_unstable();
    crits.dedup();
    for n in crits {
        let _ = writeln!(s, "criterion {n:>2}: {}", cert.criterion_status(n).label());
    }
    let _ = writeln!(
        s,
        "mandatory checks: {}",
        if cert.mandatory_passed() {
            Status::Pass.label()
        } else {
            Status::Fail.label()
        }
    );
    if let Some(t) = &cert.timings {
        for (k, v) in t {
            let _ = writeln!(s, "time {k:<14} {v:>8.2}s");
        }
    }
    s
}
