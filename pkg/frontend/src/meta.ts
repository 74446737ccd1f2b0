/** Sibling metadata files: plain key=value lines. */

import { existsSync, readFileSync } from "node:fs";

export type Meta = Record<string, string>;

export function parseMeta(text: string): Meta {
  const meta: Meta = {};
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (line.length === 0 || line.startsWith("#")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) continue;
    meta[line.slice(0, eq)] = line.slice(eq + 1);
  }
  return meta;
}

export function metaPathFor(csvPath: string): string {
  return csvPath.replace(/\.csv$/, ".meta");
}

export function readMetaFor(csvPath: string): Meta {
  const path = metaPathFor(csvPath);
  if (!existsSync(path)) {
    throw new Error(`${csvPath}: missing sibling metadata file ${path}`);
  }
  return parseMeta(readFileSync(path, "utf8"));
}
