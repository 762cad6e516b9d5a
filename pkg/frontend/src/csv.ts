// Parser for the sweep CSV contract shared with the correxp command line
// tool. This is the only coupling to that package: seven named columns,
// numeric cells, rows grouped by detector count.

export const REQUIRED_COLUMNS = [
  "K",
  "E",
  "quantum",
  "heterodyne",
  "homodyne",
  "photon",
  "ratio_q_het",
] as const;

export type ColumnName = (typeof REQUIRED_COLUMNS)[number];

export interface SweepRow {
  k: number;
  e: number;
  quantum: number;
  heterodyne: number;
  homodyne: number;
  photon: number;
  ratioQHet: number;
}

export interface SweepTable {
  rows: SweepRow[];
  /** Distinct detector counts in order of first appearance. */
  kValues: number[];
}

export class CsvError extends Error {}

/** Header problem; message names every offending column. */
export class SchemaError extends CsvError {
  constructor(
    readonly missing: string[],
    readonly unexpected: string[],
  ) {
    const parts: string[] = [];
    if (missing.length > 0) parts.push(`missing column(s): ${missing.join(", ")}`);
    if (unexpected.length > 0) parts.push(`unexpected column(s): ${unexpected.join(", ")}`);
    super(`sweep CSV header mismatch; ${parts.join("; ")}; expected exactly: ${REQUIRED_COLUMNS.join(",")}`);
  }
}

function parseCell(text: string, column: string, lineNo: number, allowInf: boolean): number {
  if (allowInf && (text === "inf" || text === "Infinity")) return Infinity;
  const value = Number(text);
  if (text.trim() === "" || !Number.isFinite(value)) {
    throw new CsvError(`line ${lineNo}: column ${column} has non-numeric value ${JSON.stringify(text)}`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new CsvError("empty file, expected a header line");

  const header = lines[0]!.split(",").map((name) => name.trim());
  const required = new Set<string>(REQUIRED_COLUMNS);
  const seen = new Set(header);
  const missing = REQUIRED_COLUMNS.filter((name) => !seen.has(name));
  const unexpected = header.filter((name) => !required.has(name));
  if (missing.length > 0 || unexpected.length > 0) {
    throw new SchemaError(missing, unexpected);
  }
  const position = new Map(header.map((name, i) => [name as ColumnName, i]));
  const at = (cells: string[], name: ColumnName) => cells[position.get(name)!] ?? "";

  if (lines.length === 1) throw new CsvError("no data rows after the header");

  const rows: SweepRow[] = [];
  const kValues: number[] = [];
  const closedGroups = new Set<number>();
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(`line ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    const row: SweepRow = {
      k: parseCell(at(cells, "K"), "K", i + 1, false),
      e: parseCell(at(cells, "E"), "E", i + 1, false),
      quantum: parseCell(at(cells, "quantum"), "quantum", i + 1, false),
      heterodyne: parseCell(at(cells, "heterodyne"), "heterodyne", i + 1, false),
      homodyne: parseCell(at(cells, "homodyne"), "homodyne", i + 1, false),
      photon: parseCell(at(cells, "photon"), "photon", i + 1, false),
      ratioQHet: parseCell(at(cells, "ratio_q_het"), "ratio_q_het", i + 1, true),
    };
    if (!Number.isInteger(row.k) || row.k < 1) {
      throw new CsvError(`line ${i + 1}: K must be a positive integer, got ${at(cells, "K")}`);
    }
    if (row.e <= 0) {
      throw new CsvError(`line ${i + 1}: E must be positive, got ${at(cells, "E")}`);
    }
    const last = kValues[kValues.length - 1];
    if (last === undefined || last !== row.k) {
      if (closedGroups.has(row.k)) {
        throw new CsvError(`line ${i + 1}: rows for K=${row.k} are not contiguous`);
      }
      if (last !== undefined) closedGroups.add(last);
      kValues.push(row.k);
    }
    rows.push(row);
  }
  return { rows, kValues };
}
