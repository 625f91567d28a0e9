/** Bundle schema (format_version 1) and its validating parser. */

export type Grade = "None" | "L1" | "L2" | "L3" | "L4" | "L5";

export interface LineAttention {
  readonly meanNormHits: number;
  readonly grade: Grade;
}

export interface HeatBlock {
  readonly start: number;
  readonly end: number;
  readonly grade: Exclude<Grade, "None">;
}

export interface Bundle {
  readonly projectId: string;
  /** path -> line -> attention */
  readonly files: Readonly<Record<string, Readonly<Record<number, LineAttention>>>>;
  /** [path, totalAttention] in ranked order; never re-sorted client-side */
  readonly ranking: ReadonlyArray<readonly [string, number]>;
  readonly blocks: Readonly<Record<string, ReadonlyArray<HeatBlock>>>;
  readonly sourceFiles: Readonly<Record<string, string>>;
  readonly moduleMap: Readonly<Record<string, string>>;
  readonly provenance: Readonly<Record<string, unknown>>;
}

export class SchemaError extends Error {
  constructor(readonly where: string, message: string) {
    super(`${where}: ${message}`);
    this.name = "SchemaError";
  }
}

const GRADES: ReadonlySet<string> = new Set(["None", "L1", "L2", "L3", "L4", "L5"]);

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function expectRecord(v: unknown, where: string): Record<string, unknown> {
  if (!isRecord(v)) throw new SchemaError(where, "expected an object");
  return v;
}

function expectString(v: unknown, where: string): string {
  if (typeof v !== "string") throw new SchemaError(where, "expected a string");
  return v;
}

function expectNumber(v: unknown, where: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(where, "expected a finite number");
  }
  return v;
}

function expectGrade(v: unknown, where: string): Grade {
  if (typeof v !== "string" || !GRADES.has(v)) {
    throw new SchemaError(where, `unknown grade ${JSON.stringify(v)}`);
  }
  return v as Grade;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object") {
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
    Object.freeze(value);
  }
  return value;
}

/** Validate a parsed bundle.json document. Throws SchemaError with the
 * offending document path; never mutates its input. */
export function parseBundle(raw: unknown): Bundle {
  const doc = expectRecord(raw, "$");
  if (doc.format_version !== "1") {
    throw new SchemaError("$.format_version", `unsupported version ${JSON.stringify(doc.format_version)}`);
  }
  const gazeMap = expectRecord(doc.gaze_map, "$.gaze_map");
  const projectId = expectString(gazeMap.project_id, "$.gaze_map.project_id");

  const rawFiles = expectRecord(gazeMap.files, "$.gaze_map.files");
  const files: Record<string, Record<number, LineAttention>> = {};
  for (const [path, rawLines] of Object.entries(rawFiles)) {
    const lines = expectRecord(rawLines, `$.gaze_map.files[${path}]`);
    const parsed: Record<number, LineAttention> = {};
    for (const [lineStr, rawAtt] of Object.entries(lines)) {
      const where = `$.gaze_map.files[${path}][${lineStr}]`;
      const line = Number(lineStr);
      if (!Number.isInteger(line) || line < 1) {
        throw new SchemaError(where, "line numbers must be positive integers");
      }
      const att = expectRecord(rawAtt, where);
      parsed[line] = {
        meanNormHits: expectNumber(att.mean_norm_hits, `${where}.mean_norm_hits`),
        grade: expectGrade(att.grade, `${where}.grade`),
      };
    }
    files[path] = parsed;
  }

  if (!Array.isArray(gazeMap.ranking)) {
    throw new SchemaError("$.gaze_map.ranking", "expected an array");
  }
  const ranking: Array<readonly [string, number]> = gazeMap.ranking.map((entry, i) => {
    const where = `$.gaze_map.ranking[${i}]`;
    if (!Array.isArray(entry) || entry.length !== 2) {
      throw new SchemaError(where, "expected [path, total]");
    }
    const path = expectString(entry[0], `${where}[0]`);
    const total = expectNumber(entry[1], `${where}[1]`);
    if (!(path in files)) throw new SchemaError(where, `ranked path ${path} missing from files`);
    return [path, total] as const;
  });

  const rawBlocks = expectRecord(gazeMap.blocks ?? {}, "$.gaze_map.blocks");
  const blocks: Record<string, HeatBlock[]> = {};
  for (const [path, rawList] of Object.entries(rawBlocks)) {
    const where = `$.gaze_map.blocks[${path}]`;
    if (!(path in files)) throw new SchemaError(where, "unknown file");
    if (!Array.isArray(rawList)) throw new SchemaError(where, "expected an array");
    blocks[path] = rawList.map((b, i) => {
      if (!Array.isArray(b) || b.length !== 3) {
        throw new SchemaError(`${where}[${i}]`, "expected [start, end, grade]");
      }
      const start = expectNumber(b[0], `${where}[${i}][0]`);
      const end = expectNumber(b[1], `${where}[${i}][1]`);
      const grade = expectGrade(b[2], `${where}[${i}][2]`);
      if (grade === "None") throw new SchemaError(`${where}[${i}]`, "blocks cannot carry grade None");
      if (!Number.isInteger(start) || !Number.isInteger(end) || start < 1 || end < start) {
        throw new SchemaError(`${where}[${i}]`, "bad block range");
      }
      return { start, end, grade };
    });
  }

  const rawSources = expectRecord(doc.source_files, "$.source_files");
  const sourceFiles: Record<string, string> = {};
  for (const [path, text] of Object.entries(rawSources)) {
    sourceFiles[path] = expectString(text, `$.source_files[${path}]`);
  }
  for (const path of Object.keys(files)) {
    if (!(path in sourceFiles)) {
      throw new SchemaError(`$.source_files[${path}]`, "missing source text for mapped file");
    }
  }

  const moduleMapDoc = expectRecord(doc.module_map ?? {}, "$.module_map");
  const moduleMap: Record<string, string> = {};
  for (const [path, label] of Object.entries(expectRecord(moduleMapDoc.entries ?? {}, "$.module_map.entries"))) {
    moduleMap[path] = expectString(label, `$.module_map.entries[${path}]`);
  }

  return deepFreeze({
    projectId,
    files,
    ranking,
    blocks,
    sourceFiles,
    moduleMap,
    provenance: isRecord(doc.provenance) ? (doc.provenance as Record<string, unknown>) : {},
  });
}
