// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Static SVG rendering of a sweep: distance on a log axis against tau,
//! one solid curve per expansion order, dashed bound curves, no scripts.

use std::fmt::Write as _;
use std::path::Path;

use qitime::Result;

use crate::sweep::SweepRecord;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
/// Floor and cap for the log axis so vanishing tails cannot stretch it.
const MAX_DECADES: f64 = 12.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

struct Frame {
    tau_min: f64,
    tau_max: f64,
    log_min: f64,
    log_max: f64,
}

impl Frame {
    fn x(&self, tau: f64) -> f64 {
        let span = (self.tau_max - self.tau_min).max(f64::MIN_POSITIVE);
        MARGIN_LEFT + (tau - self.tau_min) / span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, value: f64) -> f64 {
        let span = (self.log_max - self.log_min).max(f64::MIN_POSITIVE);
        let t = (value.log10() - self.log_min) / span;
        HEIGHT - MARGIN_BOTTOM - t * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn in_range(&self, value: f64) -> bool {
        value.is_finite()
            && value > 0.0
            && value.log10() >= self.log_min - 1e-9
            && value.log10() <= self.log_max + 1e-9
    }
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// One polyline per consecutive run of in-range points; a lone point
/// renders as its marker alone.
fn draw_series(
    out: &mut String,
    frame: &Frame,
    points: &[(f64, f64)],
    color: &str,
    dashed: bool,
    markers: bool,
) {
    let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
    let mut segment: Vec<(f64, f64)> = Vec::new();
    let flush = |seg: &mut Vec<(f64, f64)>, out: &mut String| {
        if seg.len() >= 2 {
            let pts = seg
                .iter()
                .map(|&(x, y)| format!("{},{}", fmt_coord(x), fmt_coord(y)))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                out,
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{pts}\"/>"
            );
        }
        seg.clear();
    };
    for &(tau, value) in points {
        if frame.in_range(value) {
            segment.push((frame.x(tau), frame.y(value)));
        } else {
            flush(&mut segment, out);
        }
    }
    flush(&mut segment, out);
    if markers {
        for &(tau, value) in points {
            if frame.in_range(value) {
                let _ = writeln!(
                    out,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>",
                    fmt_coord(frame.x(tau)),
                    fmt_coord(frame.y(value))
                );
            }
        }
    }
}

fn collect_finite(values: impl Iterator<Item = f64>, acc: &mut Vec<f64>) {
    acc.extend(values.filter(|v| v.is_finite() && *v > 0.0));
}

pub fn render_svg(records: &[SweepRecord]) -> String {
    let n_orders = records.first().map_or(0, |r| r.per_order.len());

    let mut values = Vec::new();
    collect_finite(records.iter().map(|r| r.ideal_term), &mut values);
    for rec in records {
        collect_finite(rec.per_order.iter().map(|p| p.distance_exact), &mut values);
        collect_finite(
            rec.per_order.iter().filter_map(|p| p.distance_sampled),
            &mut values,
        );
        collect_finite(rec.per_order.iter().map(|p| p.truncation_bound), &mut values);
    }
    let log_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_max = if log_max.is_finite() { log_max.log10().ceil() } else { 0.0 };
    let log_min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let log_min = if log_min.is_finite() {
        log_min.log10().floor().max(log_max - MAX_DECADES)
    } else {
        log_max - 1.0
    };
    let log_max = if log_max > log_min { log_max } else { log_min + 1.0 };

    let tau_min = records.first().map_or(0.0, |r| r.tau);
    let tau_max = records.last().map_or(1.0, |r| r.tau);
    let tau_max = if tau_max > tau_min { tau_max } else { tau_min + 1.0 };
    let frame = Frame { tau_min, tau_max, log_min, log_max };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // axes box
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        "  <rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );

    // y ticks: one per decade
    let mut k = frame.log_min.ceil() as i64;
    while k as f64 <= frame.log_max + 1e-9 {
        let y = frame.y(10f64.powi(k as i32));
        let _ = writeln!(
            out,
            "  <line x1=\"{x0}\" y1=\"{}\" x2=\"{x1}\" y2=\"{}\" stroke=\"#dddddd\"/>",
            fmt_coord(y),
            fmt_coord(y)
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{k}</text>",
            fmt_coord(x0 - 6.0),
            fmt_coord(y + 4.0)
        );
        k += 1;
    }

    // x ticks: a handful of evenly spaced grid values
    let span = frame.tau_max - frame.tau_min;
    let step = nice_step(span / 6.0);
    let mut tick = (frame.tau_min / step).ceil() * step;
    while tick <= frame.tau_max + 1e-9 {
        let x = frame.x(tick);
        let _ = writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{y0}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
            fmt_coord(x),
            fmt_coord(x),
            fmt_coord(y0 + 5.0)
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            fmt_coord(x),
            fmt_coord(y0 + 20.0),
            trim_tick(tick)
        );
        tick += step;
    }
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">tau</text>",
        fmt_coord((x0 + x1) / 2.0),
        fmt_coord(HEIGHT - 12.0)
    );
    let _ = writeln!(
        out,
        "  <text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">distance</text>",
        fmt_coord((y0 + y1) / 2.0),
        fmt_coord((y0 + y1) / 2.0)
    );

    // dashed bound for the untruncated propagator
    let ideal: Vec<(f64, f64)> = records.iter().map(|r| (r.tau, r.ideal_term)).collect();
    draw_series(&mut out, &frame, &ideal, "#444444", true, false);

    // per-order curves: solid exact with markers, hollow sampled markers,
    // dashed truncation bound
    for j in 0..n_orders {
        let color = PALETTE[j % PALETTE.len()];
        let bound: Vec<(f64, f64)> = records
            .iter()
            .map(|r| (r.tau, r.per_order[j].truncation_bound))
            .collect();
        draw_series(&mut out, &frame, &bound, color, true, false);
        let exact: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| !r.per_order[j].flagged)
            .map(|r| (r.tau, r.per_order[j].distance_exact))
            .collect();
        draw_series(&mut out, &frame, &exact, color, false, true);
        for rec in records {
            if let Some(s) = rec.per_order[j].distance_sampled {
                if frame.in_range(s) {
                    let _ = writeln!(
                        out,
                        "  <circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"none\" stroke=\"{color}\"/>",
                        fmt_coord(frame.x(rec.tau)),
                        fmt_coord(frame.y(s))
                    );
                }
            }
        }
    }

    // legend
    let lx = x1 + 12.0;
    let mut ly = y1 + 10.0;
    let legend_line = |out: &mut String, color: &str, dashed: bool, label: &str, ly: f64| {
        let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        let _ = writeln!(
            out,
            "  <line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            lx + 26.0
        );
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\">{label}</text>",
            lx + 32.0,
            ly + 4.0
        );
    };
    if let Some(first) = records.first() {
        for (j, p) in first.per_order.iter().enumerate() {
            let color = PALETTE[j % PALETTE.len()];
            legend_line(&mut out, color, false, &format!("N = {}", p.order), ly);
            ly += 18.0;
        }
    }
    legend_line(&mut out, "#444444", true, "ideal-propagator bound", ly);
    ly += 18.0;
    legend_line(&mut out, "#888888", true, "truncation bound", ly);

    out.push_str("</svg>\n");
    out
}

/// Rounds a raw step up to 1, 2, or 5 times a power of ten.
fn nice_step(raw: f64) -> f64 {
    if !(raw > 0.0) {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    if r <= 1.0 {
        mag
    } else if r <= 2.0 {
        2.0 * mag
    } else if r <= 5.0 {
        5.0 * mag
    } else {
        10.0 * mag
    }
}

fn trim_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn emit_plot(records: &[SweepRecord], path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(records))?;
    Ok(())
}
