import { HEAT_COLOR, opacityFor } from "./grades.js";
import type { Bundle, HeatBlock } from "./types.js";

/** Pixel height of one code line; styles.css must agree. Kept as a constant
 * so scroll math is exact in tests and independent of layout engines. */
export const LINE_HEIGHT = 18;

export interface CodePane {
  readonly element: HTMLElement;
  readonly lineCount: number;
  scrollToLine(line: number): void;
}

/** Code pane with the gutter: one vertical amber bar per block, opacity
 * monotone in the block grade. The gutter scrolls with the code. */
export function renderCodePane(
  container: HTMLElement,
  path: string,
  source: string,
  blocks: ReadonlyArray<HeatBlock>,
): CodePane {
  container.textContent = "";

  const scroller = document.createElement("div");
  scroller.className = "codepane";

  const inner = document.createElement("div");
  inner.className = "codepane-inner";

  const gutter = document.createElement("div");
  gutter.className = "gutter";
  for (const block of blocks) {
    const bar = document.createElement("div");
    bar.className = "gutter-bar";
    bar.dataset.start = String(block.start);
    bar.dataset.end = String(block.end);
    bar.dataset.grade = block.grade;
    bar.style.top = `${(block.start - 1) * LINE_HEIGHT}px`;
    bar.style.height = `${(block.end - block.start + 1) * LINE_HEIGHT}px`;
    bar.style.backgroundColor = HEAT_COLOR;
    bar.style.opacity = String(opacityFor(block.grade));
    gutter.appendChild(bar);
  }

  const code = document.createElement("div");
  code.className = "code";
  const rawLines = source.length === 0 ? [] : source.replace(/\n$/, "").split("\n");
  for (let i = 0; i < rawLines.length; i++) {
    const row = document.createElement("div");
    row.className = "code-line";
    row.dataset.line = String(i + 1);
    const num = document.createElement("span");
    num.className = "lineno";
    num.textContent = String(i + 1);
    const text = document.createElement("span");
    text.className = "line-text";
    text.textContent = rawLines[i];
    row.append(num, text);
    code.appendChild(row);
  }

  inner.append(gutter, code);
  scroller.appendChild(inner);

  const title = document.createElement("div");
  title.className = "codepane-title";
  title.textContent = path;
  container.append(title, scroller);

  return {
    element: scroller,
    lineCount: rawLines.length,
    scrollToLine(line: number): void {
      scroller.scrollTop = Math.max(0, (line - 1) * LINE_HEIGHT);
      for (const el of Array.from(scroller.querySelectorAll(".code-line.targeted"))) {
        el.classList.remove("targeted");
      }
      const target = scroller.querySelector(`.code-line[data-line="${line}"]`);
      if (target) target.classList.add("targeted");
    },
  };
}
