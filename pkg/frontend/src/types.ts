/** Response shapes of the labeling-service JSON API. */

export interface SessionCreated {
  id: string;
  dataset: string;
  config: Record<string, unknown>;
}

export interface TraceJson {
  chosen: number;
  evaluated: [number, number][];
  subqueries_used: number;
}

export interface NextQuery {
  point: number;
  asset?: string;
  posterior_row: number[];
  subqueries_used: number;
  progress: { answered: number; budget: number };
  trace?: TraceJson;
}

export interface CurveJson {
  accuracies: number[];
  auc: number | null;
}

export interface TreeNodeJson {
  id: number;
  representative: number;
  level: number;
  parent: number | null;
  member_count: number;
}

export interface TreeJson {
  levels: number;
  root: number;
  nodes: TreeNodeJson[];
}

export interface SessionState {
  dataset: string;
  config: Record<string, unknown>;
  status: "awaiting_label" | "complete";
  labels: Record<string, number>;
  query_log: { point: number; class: number; timestamp: number }[];
  map_classes: number[];
  confidence: number[];
  posterior: number[][];
  curve: CurveJson;
  features_2d: number[][];
  class_count: number;
  class_names?: string[];
  tree?: TreeJson;
  trace?: TraceJson;
}

export interface DatasetInfo {
  name: string;
  n: number;
  q: number;
  class_count: number;
  has_labels: boolean;
}
