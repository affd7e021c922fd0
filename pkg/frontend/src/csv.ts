/**
 * CSV loading with schema validation against the producing subcommand's
 * declared columns.  Numbers stay as the parsed cell values; figures must
 * never recompute science, only draw what the cells say.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

/** Column sets per producing subcommand (must match the Python CLI). */
export const SCHEMAS: Record<string, string[]> = {
  foliate: ["s", "r", "T", "drT", "dsT", "region"],
  energy: ["s", "E_total", "E_int", "E_tran", "E_ext", "eta", "c",
    "form_gap"],
  decay: ["s", "region", "sup", "t_char", "r_sup", "fit_exponent",
    "fit_stderr"],
  sobolev: ["inequality", "s", "family", "param", "refinement", "ratio",
    "alarm"],
};

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((c, j) => (row[c] = cells[j]));
    return row;
  });
  return { columns, rows };
}

export function validateSchema(table: Table, schema: string): void {
  const expected = SCHEMAS[schema];
  if (!expected) {
    throw new SchemaError(`unknown schema '${schema}'`);
  }
  const have = new Set(table.columns);
  const want = new Set(expected);
  const missing = expected.filter((c) => !have.has(c));
  const unexpected = table.columns.filter((c) => !want.has(c));
  if (missing.length || unexpected.length) {
    throw new SchemaError(
      `schema mismatch for '${schema}': ` +
        `missing [${missing.join(", ")}], unexpected [${unexpected.join(", ")}]`,
    );
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`no data rows for schema '${schema}'`);
  }
}

/** Load one or more CSV files of the same schema and concatenate rows. */
export function loadTables(paths: string[], schema: string): Table {
  if (paths.length === 0) {
    throw new SchemaError("no input CSV files given");
  }
  const tables = paths.map((p) => parseCsv(readFileSync(p, "utf-8")));
  for (const t of tables) {
    validateSchema(t, schema);
  }
  return {
    columns: tables[0].columns,
    rows: tables.flatMap((t) => t.rows),
  };
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`non-numeric cell '${row[col]}' in column ${col}`);
  }
  return v;
}
