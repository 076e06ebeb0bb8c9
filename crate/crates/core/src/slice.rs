//! The diagonal slice `{z : (z, …, z) ∈ D}`.
//!
//! Two shortcuts avoid the full search. When `|z|^{n-2} > 2` every root
//! edge points at `v0` and every geodesic through it has `|φ| > 2`, so the
//! point is in the domain. When `z` is real with `|z|^{n-2} ≤ 2` the root
//! geodesics have `φ = z^{n-2} ∈ [-2, 2]`.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bowditch::{is_in_domain, BowditchConfig, Status};
use crate::cplx::pair;
use crate::hurwitz::HurwitzPoint;
use crate::C64;

pub const FAST_PATH_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coloring {
    Binary,
    /// Shade points of the domain by the size of their attracting tree.
    TreeSize,
    /// Shade points of the domain by `|A_φ(K)|`.
    KLevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceJob {
    pub n: usize,
    #[serde(with = "pair")]
    pub center: C64,
    pub width: f64,
    pub height: f64,
    /// Pixels across and down.
    pub res: (usize, usize),
    #[serde(rename = "K")]
    pub k: f64,
    pub budget: usize,
    pub coloring: Coloring,
    pub fast_path: bool,
}

impl Default for SliceJob {
    fn default() -> Self {
        SliceJob {
            n: 3,
            center: C64::new(0.0, 0.0),
            width: 8.0,
            height: 8.0,
            res: (512, 512),
            k: 2.5,
            budget: 100_000,
            coloring: Coloring::Binary,
            fast_path: true,
        }
    }
}

impl SliceJob {
    /// Centre of pixel `(col, row)`; row 0 is the top edge.
    pub fn pixel_center(&self, col: usize, row: usize) -> C64 {
        let (w, h) = self.res;
        C64::new(
            self.center.re - self.width / 2.0 + (col as f64 + 0.5) * self.width / w as f64,
            self.center.im + self.height / 2.0 - (row as f64 + 0.5) * self.height / h as f64,
        )
    }

    fn bowditch(&self) -> BowditchConfig {
        BowditchConfig { k: self.k, bfs_budget: self.budget, ..BowditchConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PixelVerdict {
    pub status: Status,
    pub tree_size: usize,
    pub a_size: usize,
    pub fast: bool,
}

pub fn classify_pixel(job: &SliceJob, z: C64) -> PixelVerdict {
    let n = job.n;
    let r = z.norm().powi(n as i32 - 2);
    let fast = |status| PixelVerdict { status, tree_size: 1, a_size: 0, fast: true };
    if job.fast_path {
        if r > 2.0 + FAST_PATH_MARGIN {
            return fast(Status::InDomain);
        }
        if z.im == 0.0 && r <= 2.0 {
            return fast(Status::NotInDomain);
        }
    }
    let undetermined = PixelVerdict { status: Status::Undetermined, tree_size: 0, a_size: 0, fast: false };
    let Ok(a) = HurwitzPoint::diagonal(n, z) else { return undetermined };
    match is_in_domain(&a, &job.bowditch()) {
        Ok(v) => PixelVerdict {
            status: v.status,
            tree_size: v.tree.as_ref().map_or(0, |t| t.vertices.len()),
            a_size: v.a_phi_k.len(),
            fast: false,
        },
        Err(_) => undetermined,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCounts {
    pub in_domain: usize,
    pub not_in_domain: usize,
    pub undetermined: usize,
    pub fast_path: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSummary {
    pub job: SliceJob,
    pub counts: SliceCounts,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct SliceImage {
    pub job: SliceJob,
    /// Row-major, top row first.
    pub verdicts: Vec<PixelVerdict>,
}

impl SliceImage {
    pub fn counts(&self) -> SliceCounts {
        let mut c = SliceCounts::default();
        for v in &self.verdicts {
            match v.status {
                Status::InDomain => c.in_domain += 1,
                Status::NotInDomain => c.not_in_domain += 1,
                Status::Undetermined => c.undetermined += 1,
            }
            c.fast_path += v.fast as usize;
        }
        c
    }

    pub fn rgb(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.verdicts.len() * 3);
        for v in &self.verdicts {
            let px = match (v.status, self.job.coloring) {
                (Status::NotInDomain, _) => [255, 255, 255],
                (Status::Undetermined, _) => [128, 128, 128],
                (Status::InDomain, Coloring::Binary) => [0, 0, 0],
                (Status::InDomain, Coloring::TreeSize) => shade(v.tree_size),
                (Status::InDomain, Coloring::KLevel) => shade(v.a_size + 1),
            };
            out.extend_from_slice(&px);
        }
        out
    }

    /// Binary PPM (`P6`).
    pub fn write_ppm<W: Write>(&self, mut w: W) -> io::Result<()> {
        let (cols, rows) = self.job.res;
        write!(w, "P6\n{cols} {rows}\n255\n")?;
        w.write_all(&self.rgb())?;
        w.flush()
    }
}

/// Dark for size 1, lighter blue as the size grows.
fn shade(size: usize) -> [u8; 3] {
    let t = ((size.max(1) as f64).log2() / 10.0).min(1.0);
    let c = (t * 200.0) as u8;
    [0, c / 2, c]
}

/// Classifies every pixel, rows in parallel. The result does not depend on
/// the number of threads.
pub fn render(job: &SliceJob) -> (SliceImage, SliceSummary) {
    let start = Instant::now();
    let (cols, rows) = job.res;
    let verdicts: Vec<PixelVerdict> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|row| (0..cols).map(move |col| classify_pixel(job, job.pixel_center(col, row))))
        .collect();
    let image = SliceImage { job: *job, verdicts };
    let summary = SliceSummary { job: *job, counts: image.counts(), wall_time_s: start.elapsed().as_secs_f64() };
    (image, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_centres_are_symmetric() {
        let job = SliceJob { res: (4, 4), ..Default::default() };
        assert_eq!(job.pixel_center(0, 0), C64::new(-3.0, 3.0));
        assert_eq!(job.pixel_center(3, 3), C64::new(3.0, -3.0));
        assert_eq!(job.pixel_center(1, 2), -job.pixel_center(2, 1));
    }

    #[test]
    fn fast_paths() {
        let job = SliceJob::default();
        assert!(classify_pixel(&job, C64::new(2.5, 0.0)).fast);
        assert_eq!(classify_pixel(&job, C64::new(2.5, 0.0)).status, Status::InDomain);
        assert_eq!(classify_pixel(&job, C64::new(-1.0, 0.0)).status, Status::NotInDomain);
        let slow = SliceJob { fast_path: false, ..job };
        let v = classify_pixel(&slow, C64::new(2.5, 0.0));
        assert!(!v.fast);
        assert_eq!(v.status, Status::InDomain);
    }

    #[test]
    fn ppm_header() {
        let job = SliceJob { res: (3, 2), budget: 100, ..Default::default() };
        let (img, summary) = render(&job);
        let mut buf = Vec::new();
        img.write_ppm(&mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(buf.len(), "P6\n3 2\n255\n".len() + 18);
        assert_eq!(summary.counts.in_domain + summary.counts.not_in_domain + summary.counts.undetermined, 6);
    }
}
