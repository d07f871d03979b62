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

//! Sweep records as CSV. Numbers carry 12 significant digits and the format
//! is stable, so identical runs produce byte-identical files.

use std::path::Path;

use qitime::{Error, Result};

use crate::sweep::{OrderPoint, SweepRecord};

/// 12 significant digits; NaN renders as "NaN" for failed rows.
fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn suffixes(records: &[SweepRecord]) -> Vec<String> {
    let Some(first) = records.first() else { return Vec::new() };
    if first.per_order.len() == 1 {
        vec![String::new()]
    } else {
        first.per_order.iter().map(|p| format!("_N{}", p.order)).collect()
    }
}

fn has_sampled(records: &[SweepRecord]) -> bool {
    records
        .iter()
        .any(|r| r.per_order.iter().any(|p| p.distance_sampled.is_some()))
}

pub fn render_csv(records: &[SweepRecord]) -> String {
    let suffixes = suffixes(records);
    let sampled = has_sampled(records);
    let mut header = vec!["tau".to_string(), "ideal".to_string()];
    for s in &suffixes {
        header.push(format!("distance_exact{s}"));
        if sampled {
            header.push(format!("distance_sampled{s}"));
        }
        header.push(format!("success_prob{s}"));
        header.push(format!("truncation_bound{s}"));
        header.push(format!("status{s}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for rec in records {
        let mut cells = vec![fmt(rec.tau), fmt(rec.ideal_term)];
        for p in &rec.per_order {
            cells.push(fmt(p.distance_exact));
            if sampled {
                cells.push(fmt(p.distance_sampled.unwrap_or(f64::NAN)));
            }
            cells.push(fmt(p.success_prob));
            cells.push(fmt(p.truncation_bound));
            cells.push(if p.flagged { "failed".into() } else { "ok".into() });
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(records))?;
    Ok(())
}

fn parse_cell(cell: &str, line: usize) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("bad numeric cell `{cell}`"),
    })
}

/// Inverse of [`render_csv`]. Single-order files carry no order number in
/// their headers; those parse with order 0.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 2 || cols[0] != "tau" || cols[1] != "ideal" {
        return Err(Error::Parse {
            line: 1,
            message: "header must start with tau,ideal".into(),
        });
    }

    // column groups, each anchored at a distance_exact column
    struct Group {
        order: usize,
        sampled: bool,
    }
    let mut groups = Vec::new();
    let mut i = 2;
    while i < cols.len() {
        let suffix = cols[i].strip_prefix("distance_exact").ok_or(Error::Parse {
            line: 1,
            message: format!("expected a distance_exact column, got `{}`", cols[i]),
        })?;
        let order = if suffix.is_empty() {
            0
        } else {
            suffix
                .strip_prefix("_N")
                .and_then(|n| n.parse().ok())
                .ok_or(Error::Parse {
                    line: 1,
                    message: format!("bad column suffix `{suffix}`"),
                })?
        };
        i += 1;
        let sampled = cols.get(i).is_some_and(|c| c.starts_with("distance_sampled"));
        if sampled {
            i += 1;
        }
        for expect in ["success_prob", "truncation_bound", "status"] {
            if !cols.get(i).is_some_and(|c| c.starts_with(expect)) {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected a {expect} column at position {i}"),
                });
            }
            i += 1;
        }
        groups.push(Group { order, sampled });
    }

    let width = cols.len();
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {width} cells, got {}", cells.len()),
            });
        }
        let tau = parse_cell(cells[0], lineno)?;
        let ideal_term = parse_cell(cells[1], lineno)?;
        let mut per_order = Vec::with_capacity(groups.len());
        let mut c = 2;
        for group in &groups {
            let distance_exact = parse_cell(cells[c], lineno)?;
            c += 1;
            let mut distance_sampled = None;
            if group.sampled {
                let v = parse_cell(cells[c], lineno)?;
                if !v.is_nan() {
                    distance_sampled = Some(v);
                }
                c += 1;
            }
            let success_prob = parse_cell(cells[c], lineno)?;
            let truncation_bound = parse_cell(cells[c + 1], lineno)?;
            let flagged = match cells[c + 2] {
                "ok" => false,
                "failed" => true,
                other => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("bad status `{other}`"),
                    })
                }
            };
            c += 3;
            per_order.push(OrderPoint {
                order: group.order,
                distance_exact,
                distance_sampled,
                success_prob,
                truncation_bound,
                flagged,
            });
        }
        records.push(SweepRecord { tau, ideal_term, per_order });
    }
    Ok(records)
}
