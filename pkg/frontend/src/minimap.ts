import { HEAT_COLOR, opacityFor } from "./grades.js";
import type { LineAttention } from "./types.js";

/** Pixel height of one line in the mini-overview. */
export const MINIMAP_LINE_HEIGHT = 3;

/** Per-line mini-overview: one horizontal bar per graded line; clicking a
 * bar navigates the code pane to that line. Ungraded lines render nothing. */
export function renderMinimap(
  container: HTMLElement,
  lines: Readonly<Record<number, LineAttention>>,
  lineCount: number,
  onSelect: (line: number) => void,
): void {
  container.textContent = "";
  const map = document.createElement("div");
  map.className = "minimap";
  map.style.height = `${lineCount * MINIMAP_LINE_HEIGHT}px`;

  const graded = Object.keys(lines)
    .map(Number)
    .filter((line) => lines[line].grade !== "None")
    .sort((a, b) => a - b);

  for (const line of graded) {
    const bar = document.createElement("div");
    bar.className = "minimap-bar";
    bar.dataset.line = String(line);
    bar.dataset.grade = lines[line].grade;
    bar.style.top = `${(line - 1) * MINIMAP_LINE_HEIGHT}px`;
    bar.style.height = `${MINIMAP_LINE_HEIGHT - 1}px`;
    bar.style.backgroundColor = HEAT_COLOR;
    bar.style.opacity = String(opacityFor(lines[line].grade));
    bar.title = `line ${line}: ${lines[line].grade}`;
    bar.addEventListener("click", () => onSelect(line));
    map.appendChild(bar);
  }
  container.appendChild(map);
}
