//! Gantt chart rendering to a standalone SVG string.
//!
//! One lane per machine; operations are colored by job and carry their
//! `o(i,j)` label, the setup preceding each operation is drawn as a hatched
//! grey block ending at the operation's start. The output is deterministic
//! for a given instance and schedule.

use std::fmt::Write;

use crate::model::{Instance, OpId, Schedule};

const LEFT: f64 = 56.0;
const TOP: f64 = 34.0;
const LANE: f64 = 34.0;
const GAP: f64 = 10.0;
const PLOT: f64 = 860.0;
const BOTTOM: f64 = 30.0;

// Dark, high-contrast fills; labels are drawn in white.
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#ff7f0e",
];

fn job_color(job: usize) -> &'static str {
    PALETTE[(job - 1) % PALETTE.len()]
}

/// Renders `schedule` as an SVG document.
pub fn gantt_svg(instance: &Instance, schedule: &Schedule) -> String {
    let machines = instance.machines();
    let height = TOP + machines as f64 * (LANE + GAP) + BOTTOM;
    let width = LEFT + PLOT + 24.0;
    let span = schedule.makespan().max(1) as f64;
    let scale = PLOT / span;
    let x = |t: u32| LEFT + f64::from(t) * scale;

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    )
    .unwrap();
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for machine in 1..=machines {
        let y = TOP + (machine - 1) as f64 * (LANE + GAP);
        write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" fill=\"#333\">M{machine}</text>\n",
            LEFT - 8.0,
            y + LANE / 2.0 + 4.0
        )
        .unwrap();
        write!(
            svg,
            "<line x1=\"{LEFT:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{0:.1}\" stroke=\"#ddd\"/>\n",
            y + LANE,
            LEFT + PLOT
        )
        .unwrap();
        let mut prev = OpId::DUMMY;
        for &op in schedule.sequence(machine) {
            let start = schedule.start(op);
            let setup = instance.setup_between(prev, op);
            if setup > 0 {
                write!(
                    svg,
                    "<rect class=\"setup\" x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" \
                     height=\"{LANE:.1}\" fill=\"#c8c8c8\" stroke=\"#999\"/>\n",
                    x(start - setup),
                    y,
                    f64::from(setup) * scale
                )
                .unwrap();
            }
            let w = (f64::from(instance.duration(op)) * scale).max(1.0);
            write!(
                svg,
                "<rect class=\"op\" x=\"{:.1}\" y=\"{:.1}\" width=\"{w:.1}\" \
                 height=\"{LANE:.1}\" fill=\"{}\" stroke=\"#222\"/>\n",
                x(start),
                y,
                job_color(instance.job_of(op))
            )
            .unwrap();
            write!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" fill=\"white\">{}</text>\n",
                x(start) + w / 2.0,
                y + LANE / 2.0 + 4.0,
                instance.op_label(op)
            )
            .unwrap();
            prev = op;
        }
    }

    let floor = TOP + machines as f64 * (LANE + GAP);
    write!(
        svg,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{0:.1}\" y2=\"{:.1}\" stroke=\"#d62728\" \
         stroke-dasharray=\"4 3\"/>\n",
        x(schedule.makespan()),
        TOP - 6.0,
        floor
    )
    .unwrap();
    for (t, anchor) in [(0, "start"), (schedule.makespan(), "middle")] {
        write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"{anchor}\" fill=\"#333\">{t}</text>\n",
            x(t),
            floor + 16.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}
