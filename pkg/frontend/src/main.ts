// Application shell: object list, view option toggles, search, zoom,
// context menus, and the LaTeX popup.  All structural state lives on
// the server; the client only keeps presentation state and re-fetches
// the view document whenever an option changes.

import { ApiClient, StaleRevisionError } from "./api.js";
import { applyHighlights, renderDoc } from "./render.js";
import type { DbInfo, Doc, ViewQuery } from "./types.js";

export interface ClientState {
  name: string | null;
  n?: number;
  hideStructural: boolean;
  hideContext: boolean;
  markCutAncestors: boolean;
  hidden: Set<string>;
  focus?: string;
  zoom: number;
  revision: number;
}

export function initialState(): ClientState {
  return {
    name: null,
    hideStructural: false,
    hideContext: false,
    markCutAncestors: false,
    hidden: new Set(),
    zoom: 1,
    revision: 0,
  };
}

export function viewQuery(state: ClientState): ViewQuery {
  return {
    n: state.n,
    hideStructural: state.hideStructural,
    hideContext: state.hideContext,
    markCutAncestors: state.markCutAncestors,
    focus: state.focus,
    hidden: [...state.hidden].sort(),
  };
}

/** Toggling a node in the hidden set is an involution. */
export function toggleHidden(state: ClientState, nodeId: string): ClientState {
  const hidden = new Set(state.hidden);
  if (hidden.has(nodeId)) hidden.delete(nodeId);
  else hidden.add(nodeId);
  return { ...state, hidden };
}

export class App {
  state: ClientState = initialState();
  private inflight: AbortController | null = null;
  lastDoc: Doc | null = null;

  constructor(
    readonly api: ApiClient,
    readonly root: HTMLElement,
  ) {}

  // ------------------------------------------------------------- layout

  install(): void {
    this.root.innerHTML = "";
    const sidebar = el("div", "sidebar");
    sidebar.appendChild(this.loadForm());
    const objects = el("div", "objects");
    objects.id = "objects";
    sidebar.appendChild(objects);
    this.root.appendChild(sidebar);

    const mainArea = el("div", "main");
    mainArea.appendChild(this.toolbar());
    const banner = el("div", "banner");
    banner.id = "banner";
    banner.hidden = true;
    mainArea.appendChild(banner);
    const pane = el("div", "scroll-pane");
    const canvas = el("div", "canvas");
    canvas.id = "canvas";
    pane.appendChild(canvas);
    mainArea.appendChild(pane);
    this.root.appendChild(mainArea);

    document.addEventListener("keydown", (ev) => {
      if (ev.key === "+" || ev.key === "=") this.setZoom(this.state.zoom * 1.2);
      if (ev.key === "-") this.setZoom(this.state.zoom / 1.2);
    });
    void this.refreshDb();
  }

  private loadForm(): HTMLElement {
    const form = el("div", "load-form");
    const input = document.createElement("input");
    input.id = "load-path";
    input.placeholder = "path to .lks/.xml (.gz ok)";
    const button = document.createElement("button");
    button.id = "load-button";
    button.textContent = "Load";
    button.addEventListener("click", () => {
      void this.api
        .loadPath(input.value)
        .then(() => this.refreshDb())
        .catch((e) => this.showError(e));
    });
    form.appendChild(input);
    form.appendChild(button);
    return form;
  }

  private toolbar(): HTMLElement {
    const bar = el("div", "toolbar");
    bar.appendChild(this.toggle("hideStructural", "Hide structural rules"));
    bar.appendChild(this.toggle("hideContext", "Hide sequent context"));
    bar.appendChild(this.toggle("markCutAncestors", "Mark cut-ancestors"));

    const unsplit = document.createElement("button");
    unsplit.id = "unsplit";
    unsplit.textContent = "Unsplit";
    unsplit.addEventListener("click", () => {
      this.state = { ...this.state, focus: undefined, hidden: new Set() };
      void this.refreshView();
    });
    bar.appendChild(unsplit);

    const search = document.createElement("input");
    search.id = "search-box";
    search.placeholder = "search (LaTeX, exact)";
    search.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") void this.runSearch(search.value);
    });
    bar.appendChild(search);

    const zoomOut = document.createElement("button");
    zoomOut.textContent = "−";
    zoomOut.addEventListener("click", () => this.setZoom(this.state.zoom / 1.2));
    const zoomIn = document.createElement("button");
    zoomIn.textContent = "+";
    zoomIn.addEventListener("click", () => this.setZoom(this.state.zoom * 1.2));
    bar.appendChild(zoomOut);
    bar.appendChild(zoomIn);
    return bar;
  }

  private toggle(key: "hideStructural" | "hideContext" | "markCutAncestors",
                 title: string): HTMLElement {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.id = `toggle-${key}`;
    box.addEventListener("change", () => {
      this.state = { ...this.state, [key]: box.checked };
      void this.refreshView();
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(" " + title));
    return label;
  }

  // -------------------------------------------------------------- actions

  async refreshDb(): Promise<void> {
    const info = await this.api.getDb().catch((e) => {
      this.showError(e);
      return null;
    });
    if (!info) return;
    this.state.revision = info.revision;
    this.renderObjectList(info);
  }

  renderObjectList(info: DbInfo): void {
    const box = this.root.querySelector("#objects");
    if (!box) return;
    box.innerHTML = "";
    const title = el("h3");
    title.textContent = "Proofs";
    box.appendChild(title);
    for (const entry of info.proofs) {
      const item = el("div", "object-item");
      item.dataset.name = entry.name;
      item.textContent = entry.kind === "schema" ? `${entry.name} (schema)` : entry.name;
      item.addEventListener("click", () => {
        let n: number | undefined;
        if (entry.kind === "schema") {
          const raw = window.prompt("Instance index n:", "2");
          if (raw === null) return;
          n = parseInt(raw, 10);
          if (Number.isNaN(n) || n < 0) return;
        }
        this.open(entry.name, n);
      });
      box.appendChild(item);
    }
  }

  open(name: string, n?: number): void {
    this.state = {
      ...initialState(),
      name,
      n,
      revision: this.state.revision,
      zoom: this.state.zoom,
    };
    void this.refreshView();
  }

  /** Fetch and draw the current document; later calls supersede earlier. */
  async refreshView(): Promise<void> {
    if (!this.state.name) return;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const res = await this.api.getView(
        this.state.name,
        viewQuery(this.state),
        controller.signal,
      );
      if (controller !== this.inflight) return; // superseded
      this.state.revision = res.revision;
      this.lastDoc = res.document;
      this.draw(res.document, res.name);
    } catch (e) {
      if ((e as Error).name === "AbortError") return;
      this.showError(e);
    }
  }

  draw(doc: Doc, title: string): void {
    const canvas = this.root.querySelector("#canvas") as HTMLElement | null;
    if (!canvas) return;
    canvas.innerHTML = "";
    const frame = el("div", "titled-border");
    const caption = el("div", "title");
    caption.textContent = title;
    frame.appendChild(caption);
    frame.appendChild(
      renderDoc(doc, {
        onToggleNode: (nodeId) => {
          this.state = toggleHidden(this.state, nodeId);
          void this.refreshView();
        },
        onSequentMenu: (nodeId, x, y) => this.sequentMenu(nodeId, x, y),
        onFormulaLatex: (latex, x, y) => this.latexPopup(latex, x, y),
      }),
    );
    canvas.appendChild(frame);
    this.setZoom(this.state.zoom);
  }

  async runSearch(query: string): Promise<void> {
    if (!this.state.name || !query) return;
    try {
      const res = await this.api.search(this.state.name, query, viewQuery(this.state));
      const canvas = this.root.querySelector("#canvas") as HTMLElement | null;
      if (canvas) applyHighlights(canvas, res.matches);
    } catch (e) {
      this.showError(e);
    }
  }

  sequentMenu(nodeId: string, x: number, y: number): void {
    this.closeMenus();
    const menu = el("div", "context-menu");
    menu.style.left = `${x}px`;
    menu.style.top = `${y}px`;
    const add = (label: string, act: () => void) => {
      const item = el("div", "menu-item");
      item.textContent = label;
      item.addEventListener("click", () => {
        this.closeMenus();
        act();
      });
      menu.appendChild(item);
    };
    add("Split here", () => {
      this.state = { ...this.state, focus: nodeId };
      void this.refreshView();
    });
    add("Hide subproof", () => {
      this.state = toggleHidden(this.state, nodeId);
      void this.refreshView();
    });
    add("Eliminate cuts (reductive)", () => void this.runTransform("gentzen"));
    add("Eliminate cuts (resolution)", () => void this.runTransform("ceres"));
    add("Export .tex", () => {
      if (this.state.name) {
        window.open(this.api.exportUrl(this.state.name, "tex", this.state.n));
      }
    });
    document.body.appendChild(menu);
  }

  async runTransform(op: string): Promise<void> {
    if (!this.state.name) return;
    try {
      const res = await this.api.transform(
        this.state.name,
        op,
        this.state.n,
        this.state.revision,
      );
      this.open(res.name);
    } catch (e) {
      this.showError(e);
    }
  }

  latexPopup(latex: string, x: number, y: number): void {
    this.closeMenus();
    const popup = el("div", "latex-popup context-menu");
    popup.style.left = `${x}px`;
    popup.style.top = `${y}px`;
    const code = document.createElement("code");
    code.textContent = latex;
    popup.appendChild(code);
    const use = document.createElement("button");
    use.textContent = "To search box";
    use.addEventListener("click", () => {
      const box = this.root.querySelector("#search-box") as HTMLInputElement | null;
      if (box) box.value = latex;
      this.closeMenus();
    });
    popup.appendChild(use);
    document.body.appendChild(popup);
  }

  closeMenus(): void {
    document.querySelectorAll(".context-menu").forEach((m) => m.remove());
  }

  setZoom(zoom: number): void {
    this.state.zoom = Math.min(4, Math.max(0.25, zoom));
    const canvas = this.root.querySelector("#canvas") as HTMLElement | null;
    if (canvas) {
      canvas.style.transform = `scale(${this.state.zoom})`;
      canvas.style.transformOrigin = "top left";
    }
  }

  showError(e: unknown): void {
    const banner = this.root.querySelector("#banner") as HTMLElement | null;
    if (!banner) return;
    banner.hidden = false;
    if (e instanceof StaleRevisionError) {
      banner.textContent =
        "The database changed on the server. Reload the object list.";
      const btn = document.createElement("button");
      btn.textContent = "Reload";
      btn.addEventListener("click", () => {
        banner.hidden = true;
        void this.refreshDb();
      });
      banner.appendChild(btn);
    } else {
      banner.textContent = String((e as Error).message ?? e);
    }
  }
}

function el(tag: string, className?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}

// Auto-start in the browser; tests import the pieces instead.
const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount) {
  new App(new ApiClient(""), mount).install();
}
