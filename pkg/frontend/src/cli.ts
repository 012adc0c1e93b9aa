#!/usr/bin/env node
// plots <kind> --in <csv> --out <svg>
//
// Reads one CSV produced by the simulator's sweep tooling and writes one
// SVG figure. Rendering is a pure function of the file contents: same CSV
// in, same bytes out.

import { parseArgs } from "node:util";
import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv } from "./csv.js";
import { FIGURE_KINDS, FigureKind, buildFigure } from "./figures.js";
import { DEFAULT_HEIGHT, DEFAULT_WIDTH, renderSvg } from "./render.js";

const USAGE = `usage: plots <kind> --in <csv> --out <svg> [--width N] [--height N]

kinds:
  baseline   strategy frequencies and fairness over the stake/acceptance grid
  heatmap    unfair share and mean cost per scheme over (theta, threshold)
  pareto     cost/unfairness scatter with the non-dominated front highlighted
  bars       cheapest qualifying policy per scheme and fairness requirement
`;

function fail(message: string): never {
    process.stderr.write(`plots: ${message}\n`);
    process.exit(2);
}

export function main(argv: string[]): void {
    let parsed;
    try {
        parsed = parseArgs({
            args: argv,
            allowPositionals: true,
            options: {
                in: { type: "string" },
                out: { type: "string" },
                width: { type: "string" },
                height: { type: "string" },
                help: { type: "boolean", short: "h" },
            },
        });
    } catch (err) {
        fail((err as Error).message);
    }
    if (parsed.values.help) {
        process.stdout.write(USAGE);
        return;
    }
    const [kind] = parsed.positionals;
    if (!kind) fail(`missing figure kind\n${USAGE}`);
    if (!FIGURE_KINDS.includes(kind as FigureKind)) {
        fail(`unknown kind '${kind}' (expected one of: ${FIGURE_KINDS.join(", ")})`);
    }
    const input = parsed.values.in;
    const output = parsed.values.out;
    if (!input) fail("missing --in <csv>");
    if (!output) fail("missing --out <svg>");

    const width = parsed.values.width ? Number(parsed.values.width) : DEFAULT_WIDTH;
    const height = parsed.values.height ? Number(parsed.values.height) : DEFAULT_HEIGHT;
    if (!Number.isFinite(width) || width <= 0) fail("--width must be a positive number");
    if (!Number.isFinite(height) || height <= 0) fail("--height must be a positive number");

    let text: string;
    try {
        text = readFileSync(input, "utf8");
    } catch (err) {
        fail((err as Error).message);
    }
    let svg: string;
    try {
        const table = parseCsv(text);
        svg = renderSvg(buildFigure(kind as FigureKind, table), width, height);
    } catch (err) {
        fail(`${input}: ${(err as Error).message}`);
    }
    writeFileSync(output, svg);
    process.stdout.write(`wrote ${output}\n`);
}

main(process.argv.slice(2));
