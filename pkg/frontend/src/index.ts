export { parseCsv, validateSchema, loadTables, SchemaError, SCHEMAS }
  from "./csv.js";
export { renderFigure, foliationLevels, energyVsS, decayLogLog,
  sobolevRatios } from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { run } from "./cli.js";
