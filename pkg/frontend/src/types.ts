/** JSON payload shapes served under /api/v1. */

export interface TaxonomySummary {
  id: string;
  name: string;
  version: number;
  public: boolean;
  parent_id: string | null;
  dimension_count: number;
  concept_count: number;
  relation_count: number;
  paper_count: number;
  mapping_count: number;
}

export interface Dimension {
  id: string;
  name: string;
  description: string;
}

export interface Concept {
  id: string;
  dimension_id: string;
  name: string;
  kind: "major" | "node";
  notes: string;
}

export interface Relation {
  id: string;
  source_id: string;
  target_id: string;
  rel_type: "unspecified" | "association" | "inheritance" | "composition" | "aggregation";
  annotation: string;
}

export interface Synonym {
  concept_id: string;
  term: string;
}

export interface Vote {
  reviewer_id: string;
  value: "include" | "exclude";
  note: string;
}

export interface Tag {
  keyword: string;
  note: string;
}

export interface PaperRecord {
  id: string;
  title: string;
  abstract: string;
  authors: string[];
  year: number | null;
  doi: string | null;
  citation_count: number;
  body_text: string;
  tags: Tag[];
  votes: Vote[];
}

export interface Mapping {
  paper_id: string;
  concept_id: string;
  provenance: string;
  occurrence_count: number;
}

export interface TaxonomyDetail extends TaxonomySummary {
  dimensions: Dimension[];
  concepts: Concept[];
  relations: Relation[];
  synonyms: Synonym[];
  mappings: Mapping[];
  positions: Record<string, [number, number]>;
}

export interface TaxonomyDocument {
  format: string;
  format_version: number;
  taxonomy: { id: string; name: string; version: number; public: boolean; parent_id: string | null };
  dimensions: Dimension[];
  concepts: Concept[];
  relations: Relation[];
  synonyms: Synonym[];
  papers: PaperRecord[];
  mappings: Mapping[];
  positions: Record<string, [number, number]>;
}

export interface AxisNode {
  concept_id: string;
  children: AxisNode[];
}

export interface HierarchyPayload {
  roots_by_dimension: Record<string, AxisNode[]>;
  multi_parent: string[];
}

export interface MatrixPayload {
  axis: string[];
  names: string[];
  cells: number[][];
  axis_tree: HierarchyPayload;
  multi_parent: string[];
}

export interface SurfacePoint {
  x: string;
  y: string;
  z: number;
}

export interface SurfacePayload {
  z_property: string;
  points: SurfacePoint[];
}

export interface CirclePlacement {
  concept_id: string;
  name: string;
  dimension_id: string;
  parent_id: string | null;
  depth: number;
  x: number;
  y: number;
  r: number;
}

export interface CirclesPayload {
  circles: CirclePlacement[];
  bounds: [number, number, number, number];
}

export interface CoverageEntry {
  concept_id: string;
  name: string;
  depth: number;
  paper_count: number;
}

export interface CoveragePayload {
  entries: CoverageEntry[];
  gaps: string[];
}

export interface Suggestion {
  paper_id: string;
  concept_id: string;
  occurrence_count: number;
  matched_terms: [string, string][];
  method: string;
}

export interface SuggestionReport {
  papers: number;
  suggested: number;
  applied: number;
  dry_run: boolean;
  details: { paper_id: string; suggestions: Suggestion[] }[];
}

export interface MergeReport {
  added_dimensions: string[];
  added_concepts: string[];
  added_relations: string[];
  added_mappings: string[];
  added_synonyms: string[];
  registered_papers: string[];
  conflicts: Record<string, unknown>[];
  empty: boolean;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export interface LoginResult {
  token: string;
  username: string;
  expires_at: number;
}
