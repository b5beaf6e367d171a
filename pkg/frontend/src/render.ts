// DOM renderers for the three document kinds: proofs grow upward from
// the conclusion at the bottom, trees grow downward from the root, and
// lists put one element per line with semicolon separators.

import { renderLatex } from "./latexMath.js";
import type { Doc, ProofNode, Render, SearchMatch, TreeNode } from "./types.js";

export interface RenderHandlers {
  /** A tree vertex or collapsed stub was clicked (toggle hidden). */
  onToggleNode?: (nodeId: string) => void;
  /** A sequent was right-clicked (context menu). */
  onSequentMenu?: (nodeId: string, x: number, y: number) => void;
  /** A formula was double-clicked (show its LaTeX source). */
  onFormulaLatex?: (latex: string, x: number, y: number) => void;
}

function formulaSpan(
  occ: number,
  latex: string,
  plain: string,
  marked: boolean,
  handlers: RenderHandlers,
): HTMLElement {
  const el = renderLatex(latex, plain);
  el.classList.add("formula");
  el.dataset.occ = String(occ);
  if (marked) el.classList.add("cut-ancestor");
  el.addEventListener("dblclick", (ev) => {
    ev.stopPropagation();
    handlers.onFormulaLatex?.(latex, (ev as MouseEvent).clientX, (ev as MouseEvent).clientY);
  });
  return el;
}

function sequentLine(node: ProofNode, handlers: RenderHandlers): HTMLElement {
  const el = document.createElement("div");
  el.className = "sequent";
  el.dataset.nodeId = node.id;
  const marks = new Set(node.sequent.marks);
  const parts: (HTMLElement | Text)[] = [];
  node.ant.forEach((f, i) => {
    if (i > 0) parts.push(document.createTextNode(", "));
    parts.push(formulaSpan(f.occ, f.latex, f.plain, marks.has(f.occ), handlers));
  });
  if (node.sequent.latex.includes("\\cdots") && node.ant.length === 0) {
    parts.push(document.createTextNode("⋯"));
  }
  const turnstile = document.createElement("span");
  turnstile.className = "turnstile";
  turnstile.textContent = " ⊢ ";
  parts.push(turnstile);
  node.succ.forEach((f, i) => {
    if (i > 0) parts.push(document.createTextNode(", "));
    parts.push(formulaSpan(f.occ, f.latex, f.plain, marks.has(f.occ), handlers));
  });
  parts.forEach((p) => el.appendChild(p));
  el.addEventListener("contextmenu", (ev) => {
    ev.preventDefault();
    handlers.onSequentMenu?.(node.id, (ev as MouseEvent).clientX, (ev as MouseEvent).clientY);
  });
  return el;
}

export function renderProofNode(node: ProofNode, handlers: RenderHandlers): HTMLElement {
  const box = document.createElement("div");
  box.className = "proof-node";
  box.dataset.nodeId = node.id;
  if (node.collapsed) {
    box.classList.add("stub");
    const seq = sequentLine(node, handlers);
    const marker = document.createElement("div");
    marker.className = "stub-marker";
    marker.textContent = "… (hidden subproof)";
    marker.addEventListener("click", () => handlers.onToggleNode?.(node.id));
    box.appendChild(marker);
    box.appendChild(seq);
    return box;
  }
  if (node.premises.length) {
    const premises = document.createElement("div");
    premises.className = "premises";
    for (const q of node.premises) {
      premises.appendChild(renderProofNode(q, handlers));
    }
    box.appendChild(premises);
    const inference = document.createElement("div");
    inference.className = "inference" + (node.dashed ? " dashed" : "");
    const line = document.createElement("div");
    line.className = "line";
    inference.appendChild(line);
    const label = document.createElement("span");
    label.className = "rule-label";
    label.dataset.nodeId = node.id;
    label.textContent = node.rule;
    inference.appendChild(label);
    box.appendChild(inference);
  } else {
    const inference = document.createElement("div");
    inference.className = "inference leaf" + (node.dashed ? " dashed" : "");
    const line = document.createElement("div");
    line.className = "line";
    inference.appendChild(line);
    const label = document.createElement("span");
    label.className = "rule-label";
    label.dataset.nodeId = node.id;
    label.textContent = node.rule;
    inference.appendChild(label);
    box.appendChild(inference);
  }
  // the conclusion sits below its inference line
  box.appendChild(sequentLine(node, handlers));
  return box;
}

export function renderTreeNode(node: TreeNode, handlers: RenderHandlers): HTMLElement {
  const box = document.createElement("div");
  box.className = "tree-node";
  box.dataset.nodeId = node.id;
  const vertex = document.createElement("div");
  vertex.className = "vertex" + (node.collapsed ? " collapsed" : "");
  vertex.dataset.nodeId = node.id;
  vertex.appendChild(renderLatex(node.label.latex, node.label.plain));
  if (node.collapsed) {
    const dots = document.createElement("span");
    dots.className = "collapsed-marker";
    dots.textContent = " …";
    vertex.appendChild(dots);
  }
  vertex.addEventListener("click", (ev) => {
    ev.stopPropagation();
    handlers.onToggleNode?.(node.id);
  });
  box.appendChild(vertex);
  if (!node.collapsed && node.children.length) {
    const kids = document.createElement("div");
    kids.className = "children";
    for (const c of node.children) {
      kids.appendChild(renderTreeNode(c, handlers));
    }
    box.appendChild(kids);
  }
  return box;
}

export function renderList(items: Render[]): HTMLElement {
  const box = document.createElement("div");
  box.className = "list-doc";
  items.forEach((item, i) => {
    const line = document.createElement("div");
    line.className = "list-line";
    line.dataset.nodeId = item.id;
    line.appendChild(renderLatex(item.latex, item.plain));
    if (i < items.length - 1 || items.length > 1) {
      const sep = document.createElement("span");
      sep.className = "separator";
      sep.textContent = " ;";
      line.appendChild(sep);
    }
    box.appendChild(line);
  });
  return box;
}

export function renderDoc(doc: Doc, handlers: RenderHandlers = {}): HTMLElement {
  if (doc.kind === "proof") {
    const el = renderProofNode(doc.root, handlers);
    el.classList.add("doc-root", "doc-proof");
    return el;
  }
  if (doc.kind === "tree") {
    const el = renderTreeNode(doc.root, handlers);
    el.classList.add("doc-root", "doc-tree");
    return el;
  }
  const el = renderList(doc.items);
  el.classList.add("doc-root");
  return el;
}

/** Paint search hits green: rule labels by name, sequents by node. */
export function applyHighlights(root: HTMLElement, matches: SearchMatch[]): number {
  root.querySelectorAll(".hit").forEach((el) => el.classList.remove("hit"));
  let painted = 0;
  for (const m of matches) {
    const selector =
      m.field === "rule"
        ? `.rule-label[data-node-id="${CSS.escape(m.nodeId)}"]`
        : `[data-node-id="${CSS.escape(m.nodeId)}"]`;
    const el = root.querySelector(selector);
    if (el) {
      el.classList.add("hit");
      el.setAttribute("data-hits", String(m.spans.length));
      painted += 1;
    }
  }
  return painted;
}

/** Count the inference lines a reader sees (dashed merges excluded). */
export function visibleInferenceCount(root: HTMLElement): number {
  return root.querySelectorAll(".inference:not(.dashed)").length;
}
