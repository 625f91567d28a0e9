import type { Bundle } from "./types.js";

/** Ranked file explorer: entries appear exactly in bundle ranking order. */
export function renderExplorer(
  container: HTMLElement,
  ranking: Bundle["ranking"],
  onOpen: (path: string) => void,
): void {
  container.textContent = "";
  const heading = document.createElement("h2");
  heading.textContent = "Expert attention";
  container.appendChild(heading);

  if (ranking.length === 0) {
    const empty = document.createElement("p");
    empty.className = "explorer-empty";
    empty.textContent = "no attention data";
    container.appendChild(empty);
    return;
  }

  const list = document.createElement("ol");
  list.className = "explorer-list";
  for (const [path, total] of ranking) {
    const item = document.createElement("li");
    item.className = "explorer-entry";
    item.dataset.path = path;

    const button = document.createElement("button");
    button.type = "button";
    const slash = path.lastIndexOf("/");
    const name = document.createElement("span");
    name.className = "entry-name";
    name.textContent = slash >= 0 ? path.slice(slash + 1) : path;
    const dir = document.createElement("span");
    dir.className = "entry-dir";
    dir.textContent = slash >= 0 ? path.slice(0, slash) : "";
    const score = document.createElement("span");
    score.className = "entry-score";
    score.textContent = total.toFixed(3);
    button.append(name, dir, score);
    button.addEventListener("click", () => onOpen(path));
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function markSelected(container: HTMLElement, path: string): void {
  for (const entry of Array.from(container.querySelectorAll<HTMLElement>(".explorer-entry"))) {
    entry.classList.toggle("selected", entry.dataset.path === path);
  }
}
