// Option builders: one pure function per figure kind, CSV rows in, an
// echarts option out. Everything that affects layout or colour is fixed
// here so the same file always renders the same figure.

import type { EChartsOption, SeriesOption } from "echarts";
import { Table, num, requireColumns } from "./csv.js";
import {
    BAR_PALETTE,
    FRONT_HIGHLIGHT,
    GREEN_TO_RED,
    THRESHOLD_SCALE,
    YELLOW_TO_BLACK,
} from "./colors.js";

export type FigureKind = "baseline" | "heatmap" | "pareto" | "bars";

export const FIGURE_KINDS: FigureKind[] = ["baseline", "heatmap", "pareto", "bars"];

export const REQUIRED_COLUMNS: Record<FigureKind, readonly string[]> = {
    baseline: ["l", "h", "defined", "freq_hh", "freq_hl", "freq_lh", "freq_ll", "fairness"],
    heatmap: ["scheme", "target", "threshold", "theta", "mean_unfair", "mean_cost"],
    // unfair share column resolved separately: aggregate CSVs call it
    // mean_unfair, front CSVs call it unfair; either is accepted
    pareto: ["scheme", "target", "threshold", "theta", "mean_cost"],
    bars: ["scheme", "min_fairness", "cost_mean", "cost_se"],
};

const KNOWN_SCHEMES = ["pop", "neb", "ni-deg", "ni-eig"];

// Numeric category axis: unique values sorted ascending, labelled by the
// first raw string seen for each value so CSV formatting survives.
function numericCategories(
    rows: Record<string, string>[],
    column: string,
): { labels: string[]; indexOf: Map<number, number> } {
    const byValue = new Map<number, string>();
    for (const row of rows) {
        const value = Number(row[column]);
        if (!byValue.has(value)) byValue.set(value, row[column]);
    }
    const values = [...byValue.keys()].sort((a, b) => a - b);
    const indexOf = new Map(values.map((v, i) => [v, i]));
    return { labels: values.map((v) => byValue.get(v)!), indexOf };
}

export function buildBaseline(table: Table): EChartsOption {
    requireColumns(table, REQUIRED_COLUMNS.baseline);
    const rows = table.rows;
    const l = numericCategories(rows, "l");
    const h = numericCategories(rows, "h");

    const panels: [string, string][] = [
        ["freq_hh", "HH"],
        ["freq_hl", "HL"],
        ["freq_lh", "LH"],
        ["freq_ll", "LL"],
        ["fairness", "fairness"],
    ];
    // 3 + 2 layout; percentages leave room for the shared colour bar
    const slots = [
        { left: "5%", top: "10%" },
        { left: "36%", top: "10%" },
        { left: "67%", top: "10%" },
        { left: "5%", top: "60%" },
        { left: "36%", top: "60%" },
    ];

    const option: EChartsOption = {
        title: panels.map(([, label], i) => ({
            text: label,
            left: slots[i].left,
            top: `${parseInt(slots[i].top) - 8}%`,
            textStyle: { fontSize: 14 },
        })),
        grid: slots.map((s) => ({ ...s, width: "24%", height: "32%" })),
        xAxis: slots.map((_, i) => ({
            gridIndex: i,
            type: "category" as const,
            data: l.labels,
            name: "l",
            nameLocation: "middle" as const,
            nameGap: 24,
        })),
        yAxis: slots.map((_, i) => ({
            gridIndex: i,
            type: "category" as const,
            data: h.labels,
            name: "h",
        })),
        visualMap: {
            type: "continuous",
            min: 0,
            max: 1,
            inRange: { color: GREEN_TO_RED },
            seriesIndex: [0, 1, 2, 3, 4],
            right: 8,
            top: "middle",
            text: ["1", "0"],
        },
        series: panels.map(([column], i) => ({
            type: "heatmap" as const,
            xAxisIndex: i,
            yAxisIndex: i,
            data: rows
                .filter((r) => r.defined === "1")
                .map((r) => [
                    l.indexOf.get(Number(r.l))!,
                    h.indexOf.get(Number(r.h))!,
                    num(r, column),
                ]),
        })),
    };
    return option;
}

export function buildHeatmap(table: Table): EChartsOption {
    requireColumns(table, REQUIRED_COLUMNS.heatmap);
    const groups = new Map<string, Record<string, string>[]>();
    for (const row of table.rows) {
        const key = `${row.scheme} ${row.target}`;
        if (!groups.has(key)) groups.set(key, []);
        groups.get(key)!.push(row);
    }

    const grids: object[] = [];
    const xAxes: object[] = [];
    const yAxes: object[] = [];
    const visualMaps: object[] = [];
    const series: SeriesOption[] = [];
    const titles: object[] = [];

    const rowHeight = 80 / groups.size;
    let groupIndex = 0;
    for (const [key, rows] of groups) {
        const theta = numericCategories(rows, "theta");
        const threshold = numericCategories(rows, "threshold");
        const costs = rows.map((r) => num(r, "mean_cost"));
        const top = 10 + groupIndex * rowHeight;

        const panels: [string, string, { color: string[] }, number, number][] = [
            // column, title, scale, min, max
            ["mean_unfair", "unfair share", { color: GREEN_TO_RED }, 0, 1],
            ["mean_cost", "mean cost", { color: YELLOW_TO_BLACK },
                Math.min(...costs), Math.max(...costs)],
        ];
        panels.forEach(([column, label, scale, lo, hi], p) => {
            const axisIndex = grids.length;
            grids.push({
                left: p === 0 ? "6%" : "56%",
                top: `${top}%`,
                width: "32%",
                height: `${rowHeight * 0.68}%`,
            });
            xAxes.push({
                gridIndex: axisIndex,
                type: "category",
                data: theta.labels,
                name: "theta",
                nameLocation: "middle",
                nameGap: 24,
            });
            yAxes.push({
                gridIndex: axisIndex,
                type: "category",
                data: threshold.labels,
                name: "threshold",
            });
            titles.push({
                text: `${key}: ${label}`,
                left: p === 0 ? "6%" : "56%",
                top: `${top - 6}%`,
                textStyle: { fontSize: 13 },
            });
            visualMaps.push({
                type: "continuous",
                min: lo,
                max: hi === lo ? lo + 1 : hi,
                inRange: scale,
                seriesIndex: series.length,
                show: false,
            });
            series.push({
                type: "heatmap",
                xAxisIndex: axisIndex,
                yAxisIndex: axisIndex,
                label: { show: true, formatter: (p: any) => formatCell(p.value[2]) },
                data: rows.map((r) => [
                    theta.indexOf.get(Number(r.theta))!,
                    threshold.indexOf.get(Number(r.threshold))!,
                    num(r, column),
                ]),
            });
        });
        groupIndex++;
    }

    return {
        title: titles,
        grid: grids,
        xAxis: xAxes,
        yAxis: yAxes,
        visualMap: visualMaps,
        series,
    } as EChartsOption;
}

function formatCell(value: number): string {
    if (value === 0) return "0";
    if (Math.abs(value) >= 1000) return value.toExponential(1);
    return String(Math.round(value * 1000) / 1000);
}

interface ParetoPointRow {
    cost: number;
    unfair: number;
    threshold: number;
    theta: number;
    label: string;
}

export function unfairColumn(table: Table): string {
    if (table.columns.includes("mean_unfair")) return "mean_unfair";
    if (table.columns.includes("unfair")) return "unfair";
    throw new Error("missing columns: mean_unfair");
}

export function paretoPoints(table: Table): { points: ParetoPointRow[]; front: ParetoPointRow[] } {
    const column = unfairColumn(table);
    const points = table.rows.map((r) => ({
        cost: num(r, "mean_cost"),
        unfair: num(r, column),
        threshold: num(r, "threshold"),
        theta: num(r, "theta"),
        label: `${r.scheme} ${r.target} thr=${r.threshold} theta=${r.theta}`,
    }));
    const front = points.filter(
        (p) => !points.some((q) => q.unfair < p.unfair && q.cost < p.cost),
    );
    return { points, front };
}

export function buildPareto(table: Table): EChartsOption {
    requireColumns(table, REQUIRED_COLUMNS.pareto);
    const { points, front } = paretoPoints(table);

    const thetas = points.map((p) => p.theta);
    const [tMin, tMax] = [Math.min(...thetas), Math.max(...thetas)];
    const size = (theta: number) =>
        tMax === tMin ? 14 : 8 + (18 * (theta - tMin)) / (tMax - tMin);

    return {
        legend: { data: ["configurations", "pareto front"], top: 8 },
        xAxis: { type: "value", name: "mean interference cost", nameLocation: "middle", nameGap: 28 },
        yAxis: { type: "value", name: "unfair share" },
        visualMap: {
            type: "continuous",
            dimension: 2,
            min: Math.min(...points.map((p) => p.threshold)),
            max: Math.max(...points.map((p) => p.threshold)),
            inRange: { color: THRESHOLD_SCALE },
            seriesIndex: [0],
            right: 8,
            top: "middle",
            text: ["threshold high", "low"],
        },
        series: [
            {
                name: "configurations",
                type: "scatter",
                data: points.map((p) => ({
                    value: [p.cost, p.unfair, p.threshold],
                    symbolSize: size(p.theta),
                    name: p.label,
                })),
            },
            {
                // ring overlay marking the non-dominated set
                name: "pareto front",
                type: "scatter",
                data: front.map((p) => ({
                    value: [p.cost, p.unfair],
                    symbolSize: size(p.theta) + 8,
                    name: p.label,
                })),
                itemStyle: {
                    color: "transparent",
                    borderColor: FRONT_HIGHLIGHT,
                    borderWidth: 2.5,
                },
            },
        ],
    };
}

export function buildBars(table: Table): EChartsOption {
    requireColumns(table, REQUIRED_COLUMNS.bars);
    const levels = numericCategories(table.rows, "min_fairness");
    const present = [...new Set(table.rows.map((r) => r.scheme))].sort();
    const absent = KNOWN_SCHEMES.filter((s) => !present.includes(s));

    const byKey = new Map<string, Record<string, string>>();
    for (const row of table.rows) {
        byKey.set(`${row.scheme}@${Number(row.min_fairness)}`, row);
    }
    const levelValues = levels.labels.map(Number);

    const series: SeriesOption[] = [];
    for (const scheme of present) {
        const means = levelValues.map((level) => {
            const row = byKey.get(`${scheme}@${level}`);
            return row ? num(row, "cost_mean") : null;
        });
        series.push({
            name: scheme,
            type: "bar",
            barGap: 0,
            barCategoryGap: "40%",
            itemStyle: { color: BAR_PALETTE[scheme] },
            data: means,
        });
    }
    // one whisker per bar; positions mirror the bar layout above
    const barCount = present.length;
    for (let s = 0; s < present.length; s++) {
        const scheme = present[s];
        const whiskers = levelValues
            .map((level, i) => {
                const row = byKey.get(`${scheme}@${level}`);
                if (!row) return null;
                const mean = num(row, "cost_mean");
                const se = num(row, "cost_se");
                // log axis cannot take a non-positive whisker end
                return [i, Math.max(mean - se, mean / 100), mean + se];
            })
            .filter((w): w is number[] => w !== null);
        series.push({
            name: scheme,
            type: "custom",
            renderItem: (params: any, api: any) => {
                const band = api.size([1, 0])[0];
                const usable = band * 0.6;
                const width = usable / barCount;
                const x = api.coord([api.value(0), 0])[0] - usable / 2 + width * (s + 0.5);
                const low = api.coord([0, api.value(1)])[1];
                const high = api.coord([0, api.value(2)])[1];
                const cap = Math.min(8, width * 0.4);
                const style = () => ({ stroke: "#333", fill: "none", lineWidth: 1.5 });
                return {
                    type: "group",
                    children: [
                        { type: "line", shape: { x1: x, y1: low, x2: x, y2: high }, style: style() },
                        { type: "line", shape: { x1: x - cap, y1: low, x2: x + cap, y2: low }, style: style() },
                        { type: "line", shape: { x1: x - cap, y1: high, x2: x + cap, y2: high }, style: style() },
                    ],
                };
            },
            data: whiskers,
            z: 10,
            silent: true,
        });
    }

    const note = absent.length > 0 ? `no qualifying policy: ${absent.join(", ")}` : "";
    return {
        title: {
            text: "cheapest qualifying policy cost per scheme",
            subtext: note,
            left: "center",
        },
        legend: { data: present, top: 48 },
        xAxis: {
            type: "category",
            data: levels.labels,
            name: "minimum mean fairness",
            nameLocation: "middle",
            nameGap: 28,
        },
        yAxis: { type: "log", name: "mean total cost (log scale)" },
        grid: { top: 90 },
        series,
    };
}

export function buildFigure(kind: FigureKind, table: Table): EChartsOption {
    switch (kind) {
        case "baseline":
            return buildBaseline(table);
        case "heatmap":
            return buildHeatmap(table);
        case "pareto":
            return buildPareto(table);
        case "bars":
            return buildBars(table);
    }
}
