// Comment-aware CSV reading for the simulator's artifact files.
// Lines starting with '#' carry metadata and are skipped; fields may be
// double-quoted (the target column holds tokens like "hh,lh").

export interface Table {
    columns: string[];
    rows: Record<string, string>[];
}

function splitLine(line: string, lineNo: number): string[] {
    const fields: string[] = [];
    let current = "";
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
        const ch = line[i];
        if (quoted) {
            if (ch === '"') {
                if (line[i + 1] === '"') {
                    current += '"';
                    i++;
                } else {
                    quoted = false;
                }
            } else {
                current += ch;
            }
        } else if (ch === '"') {
            quoted = true;
        } else if (ch === ",") {
            fields.push(current);
            current = "";
        } else {
            current += ch;
        }
    }
    if (quoted) throw new Error(`line ${lineNo}: unterminated quote`);
    fields.push(current);
    return fields;
}

export function parseCsv(text: string): Table {
    const lines = text
        .split(/\r?\n/)
        .map((line, i) => ({ line, no: i + 1 }))
        .filter(({ line }) => line.trim() !== "" && !line.startsWith("#"));
    if (lines.length === 0) throw new Error("no CSV content found");

    const columns = splitLine(lines[0].line, lines[0].no);
    const rows: Record<string, string>[] = [];
    for (const { line, no } of lines.slice(1)) {
        const fields = splitLine(line, no);
        if (fields.length !== columns.length) {
            throw new Error(
                `line ${no}: expected ${columns.length} fields, got ${fields.length}`,
            );
        }
        const row: Record<string, string> = {};
        columns.forEach((col, i) => (row[col] = fields[i]));
        rows.push(row);
    }
    return { columns, rows };
}

export function requireColumns(table: Table, needed: readonly string[]): void {
    const missing = needed.filter((c) => !table.columns.includes(c));
    if (missing.length > 0) {
        throw new Error(`missing columns: ${missing.join(", ")}`);
    }
    if (table.rows.length === 0) throw new Error("empty data: no rows to plot");
}

export function num(row: Record<string, string>, column: string): number {
    const raw = row[column];
    // Number("") is 0; an empty cell must not be mistaken for a value
    const value = raw === undefined || raw.trim() === "" ? NaN : Number(raw);
    if (Number.isNaN(value)) {
        throw new Error(`column ${column}: not a number: ${JSON.stringify(raw)}`);
    }
    return value;
}
