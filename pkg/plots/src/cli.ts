#!/usr/bin/env node
// Usage: cavityvdw-plot <detuning|slab|alignment|validation> --in scan.csv --out figure.svg

import { parseArgs } from "node:util";

import { FigureKind, renderFigureFile } from "./figures.js";

const KINDS = ["detuning", "slab", "alignment", "validation"];

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
      },
    });
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  const kind = parsed.positionals[0];
  const input = parsed.values.in;
  const output = parsed.values.out;
  if (!kind || !KINDS.includes(kind) || !input || !output) {
    console.error(`usage: cavityvdw-plot <${KINDS.join("|")}> --in scan.csv --out figure.svg`);
    return 1;
  }
  try {
    renderFigureFile({ kind: kind as FigureKind, input, output });
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
