// Wire types for the workbench JSON API.

export interface DbEntry {
  name: string;
  kind: "proof" | "schema";
}

export interface Definition {
  name: string;
  expansion: string;
  latex: string;
}

export interface DbInfo {
  revision: number;
  proofs: DbEntry[];
  sequentLists: string[];
  definitions: Definition[];
}

export interface Render {
  id: string;
  latex: string;
  plain: string;
  marks: number[];
}

export interface RenderFormula {
  occ: number;
  latex: string;
  plain: string;
}

export interface ProofNode {
  id: string;
  rule: string;
  dashed: boolean;
  collapsed: boolean;
  sequent: Render;
  ant: RenderFormula[];
  succ: RenderFormula[];
  premises: ProofNode[];
}

export interface TreeNode {
  id: string;
  label: Render;
  collapsed: boolean;
  children: TreeNode[];
}

export type Doc =
  | { kind: "proof"; root: ProofNode }
  | { kind: "tree"; root: TreeNode }
  | { kind: "list"; items: Render[] };

export interface ViewResponse {
  name: string;
  revision: number;
  document: Doc;
}

export interface SearchMatch {
  nodeId: string;
  field: string;
  spans: [number, number][];
}

export interface SearchResponse {
  query: string;
  matches: SearchMatch[];
}

export interface TransformResponse {
  name: string;
  computed: boolean;
  revision: number;
}

export interface ViewQuery {
  n?: number;
  hideStructural?: boolean;
  hideContext?: boolean;
  markCutAncestors?: boolean;
  focus?: string;
  hidden?: string[];
}
