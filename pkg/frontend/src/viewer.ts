import { renderCodePane, type CodePane } from "./codepane.js";
import { markSelected, renderExplorer } from "./explorer.js";
import { renderMinimap } from "./minimap.js";
import type { Bundle } from "./types.js";

export interface HashTarget {
  path: string;
  line?: number;
}

/** Parse a "#path:line" deep link; the line suffix is optional. */
export function parseHash(hash: string): HashTarget | null {
  const raw = decodeURIComponent(hash.replace(/^#/, ""));
  if (!raw) return null;
  const colon = raw.lastIndexOf(":");
  if (colon > 0) {
    const lineStr = raw.slice(colon + 1);
    if (/^\d+$/.test(lineStr)) {
      return { path: raw.slice(0, colon), line: Number(lineStr) };
    }
  }
  return { path: raw };
}

export function formatHash(path: string, line?: number): string {
  return "#" + encodeURIComponent(line ? `${path}:${line}` : path);
}

/** The three viewing surfaces wired together over one loaded bundle.
 * Strictly read-only: the bundle is never mutated. */
export class Viewer {
  private readonly explorerEl: HTMLElement;
  private readonly codeEl: HTMLElement;
  private readonly minimapEl: HTMLElement;
  private pane: CodePane | null = null;
  private currentPath: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly bundle: Bundle,
    private readonly onNavigate: (path: string, line?: number) => void = () => {},
  ) {
    root.textContent = "";
    root.className = "viewer";
    this.explorerEl = document.createElement("aside");
    this.explorerEl.className = "explorer";
    this.codeEl = document.createElement("main");
    this.codeEl.className = "code-area";
    this.minimapEl = document.createElement("aside");
    this.minimapEl.className = "minimap-area";
    root.append(this.explorerEl, this.codeEl, this.minimapEl);

    renderExplorer(this.explorerEl, bundle.ranking, (path) => {
      this.openFile(path);
      this.onNavigate(path);
    });
    if (bundle.ranking.length === 0) {
      const note = document.createElement("p");
      note.className = "code-placeholder";
      note.textContent = "no attention data";
      this.codeEl.appendChild(note);
    }
  }

  /** Open a file in the code pane and minimap; unknown paths are a no-op
   * apart from a toast. */
  openFile(path: string, line?: number): void {
    if (!(path in this.bundle.sourceFiles)) {
      this.showToast(`unknown file: ${path}`);
      return;
    }
    if (this.currentPath !== path) {
      this.pane = renderCodePane(
        this.codeEl,
        path,
        this.bundle.sourceFiles[path],
        this.bundle.blocks[path] ?? [],
      );
      renderMinimap(
        this.minimapEl,
        this.bundle.files[path] ?? {},
        this.pane.lineCount,
        (selected) => {
          this.pane?.scrollToLine(selected);
          this.onNavigate(path, selected);
        },
      );
      markSelected(this.explorerEl, path);
      this.currentPath = path;
    }
    if (line !== undefined) {
      this.pane?.scrollToLine(line);
    }
  }

  /** Apply a "#path:line" deep link. */
  applyHash(hash: string): void {
    const target = parseHash(hash);
    if (target) this.openFile(target.path, target.line);
  }

  get openPath(): string | null {
    return this.currentPath;
  }

  showToast(message: string): void {
    const toast = document.createElement("div");
    toast.className = "toast";
    toast.setAttribute("role", "status");
    toast.textContent = message;
    this.root.appendChild(toast);
    setTimeout(() => toast.remove(), 2500);
  }
}

/** Full-surface error banner used for fetch and schema failures. */
export function showErrorBanner(root: HTMLElement, message: string): void {
  root.textContent = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  root.appendChild(banner);
}
