// Interaction tests: the App drives a stubbed fetch that serves the
// captured fixtures, so every structural change round-trips through
// /view exactly as it would against the live service.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { App, initialState, toggleHidden, viewQuery } from "../src/main.js";
import type { ViewResponse } from "../src/types.js";

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(join(import.meta.dirname, "fixtures", name), "utf-8"));
}

const db = fixture("db.json");
const structFull = fixture("view_e1_struct.json") as ViewResponse;
const structHidden = fixture("view_e1_struct_hidden.json") as ViewResponse;
const e1 = fixture("view_e1.json") as ViewResponse;
const searchCut = fixture("search_e1_cut.json");

const calls: string[] = [];

function stubFetch() {
  calls.length = 0;
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL) => {
      const url = String(input);
      calls.push(url);
      const respond = (body: unknown) =>
        new Response(JSON.stringify(body), {
          status: 200,
          headers: { "Content-Type": "application/json" },
        });
      if (url.includes("/api/db")) return respond(db);
      if (url.includes("/search")) return respond(searchCut);
      if (url.includes("/api/object/e1.struct/view")) {
        return respond(url.includes("hidden=r0") ? structHidden : structFull);
      }
      if (url.includes("/api/object/e1/view")) return respond(e1);
      return new Response(
        JSON.stringify({ detail: { reason: "not_found", message: url } }),
        { status: 404 },
      );
    }),
  );
}

describe("client state", () => {
  it("hidden-subtree toggling is an involution", () => {
    const s0 = initialState();
    const s1 = toggleHidden(s0, "r0");
    const s2 = toggleHidden(s1, "r0");
    expect([...s1.hidden]).toEqual(["r0"]);
    expect([...s2.hidden]).toEqual([]);
  });

  it("view options map one to one onto query parameters", () => {
    const s = {
      ...initialState(),
      n: 2,
      hideStructural: true,
      hideContext: true,
      markCutAncestors: true,
      hidden: new Set(["r0", "r1"]),
      focus: "r0",
    };
    expect(viewQuery(s)).toEqual({
      n: 2,
      hideStructural: true,
      hideContext: true,
      markCutAncestors: true,
      focus: "r0",
      hidden: ["r0", "r1"],
    });
  });
});

describe("App against the stubbed service", () => {
  beforeEach(() => {
    stubFetch();
    document.body.innerHTML = '<div id="app"></div>';
  });

  function makeApp(): App {
    const app = new App(new ApiClient(""), document.getElementById("app")!);
    app.install();
    return app;
  }

  it("lists the loaded database objects, schemas marked", async () => {
    makeApp();
    await vi.waitFor(() => {
      const items = [...document.querySelectorAll(".object-item")].map(
        (i) => i.textContent,
      );
      expect(items).toContain("psi (schema)");
      expect(items).toContain("e1");
    });
  });

  it("opens an object and renders the fetched document", async () => {
    const app = makeApp();
    app.open("e1");
    await vi.waitFor(() => {
      expect(document.querySelectorAll(".rule-label").length).toBe(3);
    });
    // the displayed structure is exactly the last fetched document
    expect(app.lastDoc).toEqual(e1.document);
    const title = document.querySelector(".titled-border .title");
    expect(title?.textContent).toBe("e1");
  });

  it("clicking a struct leaf collapses it and clicking again restores", async () => {
    const app = makeApp();
    app.open("e1.struct");
    await vi.waitFor(() => {
      expect(document.querySelectorAll(".vertex").length).toBe(3);
    });
    const leaf = document.querySelector(
      '.vertex[data-node-id="r0"]',
    ) as HTMLElement;
    leaf.click();
    await vi.waitFor(() => {
      expect(
        document.querySelector('.tree-node[data-node-id="r0"] .vertex.collapsed'),
      ).not.toBeNull();
    });
    expect([...app.state.hidden]).toEqual(["r0"]);
    expect(calls.some((u) => u.includes("hidden=r0"))).toBe(true);

    const stub = document.querySelector(
      '.vertex[data-node-id="r0"]',
    ) as HTMLElement;
    stub.click();
    await vi.waitFor(() => {
      expect(document.querySelectorAll(".vertex").length).toBe(3);
      expect(
        document.querySelector(".vertex.collapsed"),
      ).toBeNull();
    });
    expect([...app.state.hidden]).toEqual([]);
  });

  it("search paints the cut label green", async () => {
    const app = makeApp();
    app.open("e1");
    await vi.waitFor(() => {
      expect(document.querySelectorAll(".rule-label").length).toBe(3);
    });
    await app.runSearch("cut");
    const hit = document.querySelector(".rule-label.hit");
    expect(hit?.textContent).toBe("cut");
  });

  it("zoom is purely client-side", async () => {
    const app = makeApp();
    app.open("e1");
    await vi.waitFor(() => {
      expect(document.querySelectorAll(".rule-label").length).toBe(3);
    });
    const before = calls.length;
    app.setZoom(2);
    const canvas = document.getElementById("canvas")!;
    expect(canvas.style.transform).toBe("scale(2)");
    expect(calls.length).toBe(before);
  });
});
