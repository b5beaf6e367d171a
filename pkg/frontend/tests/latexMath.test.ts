import { describe, expect, it } from "vitest";
import { renderLatex } from "../src/latexMath.js";

describe("renderLatex", () => {
  it("maps the connective table to unicode", () => {
    const el = renderLatex("P \\land Q \\lor \\neg R \\to S", "plain");
    expect(el.textContent).toBe("P ∧ Q ∨ ¬ R → S");
  });

  it("renders the turnstile and quantifiers", () => {
    const el = renderLatex("\\forall x\\, P(x) \\vdash \\exists y\\, P(y)", "p");
    expect(el.textContent).toContain("∀ x");
    expect(el.textContent).toContain("⊢");
    expect(el.textContent).toContain("∃ y");
  });

  it("renders subscripts and superscripts as elements", () => {
    const el = renderLatex("\\bigwedge_{i=0}^{k} A(i)", "p");
    expect(el.querySelector("sub")?.textContent).toBe("i=0");
    expect(el.querySelector("sup")?.textContent).toBe("k");
    expect(el.querySelector(".bigop")?.textContent).toBe("⋀");
  });

  it("renders subscripted atom names", () => {
    const el = renderLatex("\\neg P_{k+1}", "~P_{k+1}");
    expect(el.textContent).toBe("¬ P" + "k+1");
    expect(el.querySelector("sub")?.textContent).toBe("k+1");
  });

  it("falls back to the plain string on unknown commands", () => {
    const el = renderLatex("\\frac{1}{2}", "1/2");
    expect(el.textContent).toBe("1/2");
    expect(el.classList.contains("math-fallback")).toBe(true);
  });

  it("falls back on unbalanced braces", () => {
    const el = renderLatex("P_{k+1", "P_{k+1");
    expect(el.classList.contains("math-fallback")).toBe(true);
  });
});
