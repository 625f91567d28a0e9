import type { Grade } from "./types.js";

export type HeatGrade = Exclude<Grade, "None">;

export const GRADE_ORDER: ReadonlyArray<HeatGrade> = ["L1", "L2", "L3", "L4", "L5"];

/** Single amber ramp; intensity is carried by opacity alone so syntax
 * colors underneath stay readable. Strictly increasing over L1..L5. */
export const GRADE_OPACITY: Readonly<Record<HeatGrade, number>> = {
  L1: 0.18,
  L2: 0.34,
  L3: 0.52,
  L4: 0.72,
  L5: 0.92,
};

export const HEAT_COLOR = "#f59e0b";

export function opacityFor(grade: Grade): number {
  return grade === "None" ? 0 : GRADE_OPACITY[grade];
}
