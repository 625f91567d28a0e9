import { parseBundle, SchemaError } from "./types.js";
import { formatHash, showErrorBanner, Viewer } from "./viewer.js";

/** Bootstrap: try bundle.json next to the page, otherwise offer a file
 * picker. Static files only; there is no backend. */

function startViewer(root: HTMLElement, raw: unknown): void {
  let viewer: Viewer;
  let applying = false;
  const bundle = parseBundle(raw);
  viewer = new Viewer(root, bundle, (path, line) => {
    applying = true;
    window.location.hash = formatHash(path, line);
    applying = false;
  });
  window.addEventListener("hashchange", () => {
    if (!applying) viewer.applyHash(window.location.hash);
  });
  if (window.location.hash) {
    viewer.applyHash(window.location.hash);
  } else if (bundle.ranking.length > 0) {
    viewer.openFile(bundle.ranking[0][0]);
  }
}

function showPicker(root: HTMLElement, note: string): void {
  root.textContent = "";
  const panel = document.createElement("div");
  panel.className = "picker-panel";
  const message = document.createElement("p");
  message.textContent = note;
  const input = document.createElement("input");
  input.type = "file";
  input.accept = ".json,application/json";
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    file
      .text()
      .then((text) => startViewer(root, JSON.parse(text)))
      .catch((err) => {
        showErrorBanner(root, describeError(err));
        showPicker(root, "pick another bundle.json");
      });
  });
  panel.append(message, input);
  root.appendChild(panel);
}

function describeError(err: unknown): string {
  if (err instanceof SchemaError) return `bundle schema error at ${err.where}`;
  if (err instanceof SyntaxError) return "bundle is not valid JSON";
  return String(err);
}

export function main(): void {
  const root = document.getElementById("app");
  if (!root) return;
  fetch("bundle.json")
    .then(async (response) => {
      if (!response.ok) throw new Error(`HTTP ${response.status}`);
      startViewer(root, await response.json());
    })
    .catch((err) => {
      if (err instanceof SchemaError || err instanceof SyntaxError) {
        showErrorBanner(root, describeError(err));
      } else {
        showPicker(root, "no bundle.json found here; pick one to view");
      }
    });
}

main();
