// Reader for the scan CSV format: header row, data rows, then a trailing
// summary block of "# key = value" comment lines. Values are parsed as
// numbers where possible and kept as strings otherwise (e.g. status).

export class MissingColumn extends Error {}
export class MalformedSummary extends Error {}

export type Cell = number | string;

export interface ScanTable {
  columns: string[];
  rows: Record<string, Cell>[];
  summary: Record<string, Cell>;
}

function parseCell(text: string): Cell {
  if (text === "") return "";
  const n = Number(text);
  return Number.isNaN(n) && text.trim().toLowerCase() !== "nan" ? text : n;
}

export function parseScanCsv(text: string): ScanTable {
  const lines = text.split("\n").filter((ln) => ln !== "");
  if (lines.length === 0) {
    throw new MissingColumn("empty CSV");
  }
  const columns = lines[0].split(",");
  const rows: Record<string, Cell>[] = [];
  const summary: Record<string, Cell> = {};
  for (const ln of lines.slice(1)) {
    if (ln.startsWith("#")) {
      const body = ln.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq < 0) {
        throw new MalformedSummary(`summary line without '=': ${ln}`);
      }
      summary[body.slice(0, eq).trim()] = parseCell(body.slice(eq + 1).trim());
      continue;
    }
    const cells = ln.split(",");
    if (cells.length !== columns.length) {
      throw new MissingColumn(`row has ${cells.length} cells, header has ${columns.length}`);
    }
    const row: Record<string, Cell> = {};
    columns.forEach((c, i) => (row[c] = parseCell(cells[i])));
    rows.push(row);
  }
  return { columns, rows, summary };
}

export function requireColumns(table: ScanTable, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new MissingColumn(`CSV lacks required column '${name}'`);
    }
  }
}

export function requireSummaryNumber(table: ScanTable, key: string): number {
  const v = table.summary[key];
  if (typeof v !== "number") {
    throw new MalformedSummary(`summary lacks numeric key '${key}'`);
  }
  return v;
}

/** Numeric column restricted to rows with ok status and finite values. */
export function okColumn(table: ScanTable, name: string): number[] {
  requireColumns(table, [name]);
  return table.rows
    .filter((r) => r["status"] === undefined || r["status"] === "ok")
    .map((r) => r[name])
    .filter((v): v is number => typeof v === "number" && Number.isFinite(v));
}
