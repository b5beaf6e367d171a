// A small math renderer for the fixed LaTeX vocabulary the service
// emits.  Unknown commands abort rendering and the caller falls back to
// the plain string, so a bad formula never breaks the page.

const SYMBOLS: Record<string, string> = {
  land: "∧",
  lor: "∨",
  neg: "¬",
  to: "→",
  vdash: "⊢",
  forall: "∀",
  exists: "∃",
  cdots: "⋯",
  oplus: "⊕",
  otimes: "⊗",
  bigwedge: "⋀",
  bigvee: "⋁",
  lambda: "λ",
  backslash: "\\",
  ",": " ",
  ";": " ",
};

class LatexSyntaxError extends Error {}

interface Parsed {
  nodes: Node[];
  end: number;
}

function parseGroup(src: string, start: number, stop?: string): Parsed {
  const nodes: Node[] = [];
  let text = "";
  let i = start;

  const flush = () => {
    if (text) {
      nodes.push(document.createTextNode(text));
      text = "";
    }
  };

  while (i < src.length) {
    const ch = src[i];
    if (stop && ch === stop) {
      flush();
      return { nodes, end: i };
    }
    if (ch === "}") {
      throw new LatexSyntaxError(`unbalanced } at ${i}`);
    }
    if (ch === "{") {
      const inner = parseGroup(src, i + 1, "}");
      if (src[inner.end] !== "}") throw new LatexSyntaxError("missing }");
      flush();
      nodes.push(...inner.nodes);
      i = inner.end + 1;
      continue;
    }
    if (ch === "_" || ch === "^") {
      flush();
      const tag = ch === "_" ? "sub" : "sup";
      const el = document.createElement(tag);
      if (src[i + 1] === "{") {
        const inner = parseGroup(src, i + 2, "}");
        if (src[inner.end] !== "}") throw new LatexSyntaxError("missing }");
        inner.nodes.forEach((n) => el.appendChild(n));
        i = inner.end + 1;
      } else if (i + 1 < src.length) {
        el.textContent = src[i + 1];
        i += 2;
      } else {
        throw new LatexSyntaxError("dangling script");
      }
      nodes.push(el);
      continue;
    }
    if (ch === "\\") {
      flush();
      const m = /^\\([a-zA-Z]+|[,;])/.exec(src.slice(i));
      if (!m) throw new LatexSyntaxError(`bad command at ${i}`);
      const name = m[1];
      i += m[0].length;
      if (name === "mathsf") {
        if (src[i] !== "{") throw new LatexSyntaxError("mathsf needs a group");
        const inner = parseGroup(src, i + 1, "}");
        if (src[inner.end] !== "}") throw new LatexSyntaxError("missing }");
        const el = document.createElement("span");
        el.className = "mathsf";
        inner.nodes.forEach((n) => el.appendChild(n));
        nodes.push(el);
        i = inner.end + 1;
        continue;
      }
      const sym = SYMBOLS[name];
      if (sym === undefined) throw new LatexSyntaxError(`unknown command \\${name}`);
      if (name === "bigwedge" || name === "bigvee") {
        const el = document.createElement("span");
        el.className = "bigop";
        el.textContent = sym;
        nodes.push(el);
      } else {
        nodes.push(document.createTextNode(sym));
      }
      continue;
    }
    text += ch;
    i += 1;
  }
  flush();
  if (stop) throw new LatexSyntaxError(`missing closing ${stop}`);
  return { nodes, end: i };
}

/** Render a LaTeX string into a span; fall back to the plain string. */
export function renderLatex(latex: string, plain: string): HTMLElement {
  const el = document.createElement("span");
  el.className = "math";
  try {
    const { nodes } = parseGroup(latex, 0);
    nodes.forEach((n) => el.appendChild(n));
  } catch {
    el.textContent = plain;
    el.classList.add("math-fallback");
  }
  return el;
}
