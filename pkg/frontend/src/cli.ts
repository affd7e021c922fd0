#!/usr/bin/env node
/**
 * plots <kind> <csv...> -o <file.svg>
 *
 * kinds: foliation_levels | energy_vs_s | decay_loglog | sobolev_ratios
 */

import { writeFileSync } from "fs";

import { SchemaError } from "./csv.js";
import { FigureKind, renderFigure } from "./figures.js";

export function run(argv: string[]): number {
  const args = [...argv];
  let output = "";
  const positional: string[] = [];
  while (args.length) {
    const tok = args.shift()!;
    if (tok === "-o" || tok === "--output") {
      const next = args.shift();
      if (!next) {
        console.error("error: -o needs a file argument");
        return 2;
      }
      output = next;
    } else {
      positional.push(tok);
    }
  }
  if (positional.length < 2 || !output) {
    console.error(
      "usage: plots <kind> <csv...> -o <file.svg>\n" +
        "kinds: foliation_levels energy_vs_s decay_loglog sobolev_ratios",
    );
    return 2;
  }
  const [kind, ...inputs] = positional;
  try {
    const svg = renderFigure(kind as FigureKind, inputs);
    writeFileSync(output, svg);
    console.log(`wrote ${output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
